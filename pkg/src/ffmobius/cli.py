"""Command line harness: one subcommand per experiment, JSON-lines output.

    ffmobius <experiment> --q P^K [--modulus c0,c1,...] [flags]
             [--d-range lo..hi] [--out json|csv] [--seed S] [--threads N]

Exit status is 0 when every emitted report has ok in {true, null} and
nonzero when any hard inequality fails.  --canonical drops the wall-clock
field so identical runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .arith import singular_series
from .characters import characters_mod, jacobi_character
from .decomposition import decompose, verify_decomposition
from .errors import DegenerateClassError
from .experiments import (
    c_sum_report,
    char_sum_check,
    chowla_sum,
    convolution_check,
    derivative_ratio,
    kloosterman_aggregate_report,
    kloosterman_report,
    lambda_ap_sum,
    main_term_partial,
    mobius_ap_sum,
    mobius_inv_additive,
    mobius_lambda_corr,
    mobius_prime_power_ap,
    rk_bound_report,
    sign_change_search,
    square_class_count,
    twin_count,
    vaughan_check,
)
from .field import field_new
from .poly import Poly, format_poly, parse_poly
from .report import ExperimentReport, encode_value

EXPERIMENTS = (
    "char-sum",
    "rk-bound",
    "chowla",
    "mobius-ap",
    "lambda-ap",
    "convolution",
    "vaughan",
    "main-term",
    "twin",
    "mobius-lambda-corr",
    "mobius-inv-additive",
    "derivative-ratio",
    "square-class",
    "sign-change",
    "prime-power-ap",
    "kloosterman",
    "c-sum",
    "kloosterman-aggregate",
    "singular-series",
    "decompose",
)


def _add_common(sp):
    sp.add_argument("--q", help="field size as P^K or a prime")
    sp.add_argument("--p", type=int, help="characteristic (with --k)")
    sp.add_argument("--k", type=int, default=1, help="extension degree")
    sp.add_argument("--modulus", help="field modulus c0,c1,...,ck (low to high)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out", choices=("json", "csv"), default="json")
    sp.add_argument("--canonical", action="store_true", help="omit runtime_ms")
    sp.add_argument("--d-range", dest="d_range", help="sweep the degree: lo..hi")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffmobius", description=__doc__)
    sub = ap.add_subparsers(dest="experiment", required=True)

    def new(name, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        _add_common(sp)
        return sp

    sp = new("char-sum", help="short character sum against the binomial bound")
    sp.add_argument("--g", required=True, help="squarefree monic modulus")
    sp.add_argument("--char", default="quadratic", help="principal | quadratic | idx:<e1,e2,...>")
    sp.add_argument("--f", default="0", help="shift polynomial")
    sp.add_argument("--t", type=int, required=True, help="interval exponent")

    sp = new("rk-bound", help="splitting-field rank bound r(f, g, t)")
    sp.add_argument("--f", default="0")
    sp.add_argument("--g", required=True)
    sp.add_argument("--t", type=int, required=True)

    sp = new("chowla", help="sum of products of shifted Mobius values")
    sp.add_argument("--d", type=int)
    sp.add_argument("--pair", action="append", required=True,
                    help="a or a:M (repeatable)")

    sp = new("mobius-ap", help="Mobius sum over an arithmetic progression")
    sp.add_argument("--D", type=int, dest="D")
    sp.add_argument("--M", required=True)
    sp.add_argument("--a", required=True)

    sp = new("lambda-ap", help="von Mangoldt sum over a progression")
    sp.add_argument("--D", type=int, dest="D")
    sp.add_argument("--M", required=True)
    sp.add_argument("--a", required=True)

    sp = new("convolution", help="Lambda = -(1 * mu deg) identity check")
    sp.add_argument("--f", required=True)

    sp = new("vaughan", help="bilinear Mobius identity check")
    sp.add_argument("--f", required=True)
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--beta", type=int, required=True)

    sp = new("main-term", help="partial sum of the progression main-term series")
    sp.add_argument("--d", type=int)
    sp.add_argument("--M", required=True)

    sp = new("twin", help="Lambda(f) Lambda(f+a) pair sum")
    sp.add_argument("--d", type=int)
    sp.add_argument("--a", default="1")
    sp.add_argument("--sing-trunc", type=int, dest="sing_trunc")

    sp = new("mobius-lambda-corr", help="Lambda times Mobius product correlation")
    sp.add_argument("--d", type=int)
    sp.add_argument("--a", required=True)
    sp.add_argument("--M", default="1")
    sp.add_argument("--pair", action="append", default=[])

    sp = new("mobius-inv-additive", help="Mobius against inverse additive characters")
    sp.add_argument("--d", type=int)
    sp.add_argument("--M", required=True)
    sp.add_argument("--psi-h", dest="psi_h", default="1")

    sp = new("derivative-ratio", help="density of derivatives in a residue class")
    sp.add_argument("--d", type=int)
    sp.add_argument("--M", required=True)
    sp.add_argument("--a", default="0")

    sp = new("square-class", help="count of a+gM of shape lambda A B^2")
    sp.add_argument("--d", type=int)
    sp.add_argument("--M", default="1")
    sp.add_argument("--A", default="1")
    sp.add_argument("--a", default="0")
    sp.add_argument("--alpha", type=float, default=0.25)

    sp = new("sign-change", help="search both Mobius signs among cube perturbations")
    sp.add_argument("--f", required=True)
    sp.add_argument("--eta", type=float, default=0.5)

    sp = new("prime-power-ap", help="Mobius sum over f = 1 mod P^n")
    sp.add_argument("--D", type=int, dest="D")
    sp.add_argument("--P", required=True)
    sp.add_argument("--n", type=int, default=1)

    sp = new("kloosterman", help="Kloosterman sum S(x, z)")
    sp.add_argument("--M", required=True)
    sp.add_argument("--x", default="1")
    sp.add_argument("--z", default="1")
    sp.add_argument("--psi-h", dest="psi_h", default="1")

    sp = new("c-sum", help="complete twisted-inverse sum C(g, h)")
    sp.add_argument("--M", required=True)
    sp.add_argument("--g", default="1")
    sp.add_argument("--h", default="0")
    sp.add_argument("--psi-h", dest="psi_h", default="1")

    sp = new("kloosterman-aggregate", help="aggregate Kloosterman sum over a rational map")
    sp.add_argument("--M", required=True)
    sp.add_argument("--b", required=True, help="six shifts separated by ';'")
    sp.add_argument("--z", default="0")

    sp = new("singular-series", help="twin-pair constant by both truncation routes")
    sp.add_argument("--a", default="1")
    sp.add_argument("--N", type=int, default=4)
    sp.add_argument("--method", choices=("euler-product", "coefficient-sum"),
                    default="euler-product")

    sp = new("decompose", help="Mobius-to-character decomposition of a progression")
    sp.add_argument("--a", required=True)
    sp.add_argument("--M", default="1")
    sp.add_argument("--rprime", default="0")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--verify", action="store_true")

    return ap


def _field_from_args(args):
    if args.q:
        if "^" in args.q:
            p_str, k_str = args.q.split("^", 1)
            p, k = int(p_str), int(k_str)
        else:
            p, k = int(args.q), 1
    elif args.p:
        p, k = args.p, args.k
    else:
        raise SystemExit("a field is required: --q P^K or --p P [--k K]")
    modulus = None
    if args.modulus:
        modulus = [int(c) for c in args.modulus.split(",")]
    return field_new(p, k, modulus)


def _parse_pairs(ctx, raw_pairs):
    pairs = []
    for item in raw_pairs:
        if ":" in item:
            a_str, m_str = item.split(":", 1)
        else:
            a_str, m_str = item, "1"
        pairs.append((parse_poly(ctx, a_str), parse_poly(ctx, m_str)))
    return pairs


def _select_char(ctx, g, spec: str):
    if spec == "quadratic":
        return jacobi_character(g)
    chars = characters_mod(g)
    if spec == "principal":
        return next(iter(chars))
    if spec.startswith("idx:"):
        want = tuple(int(e) for e in spec[4:].split(","))
        for chi in chars:
            if chi.exponents == want:
                return chi
        raise SystemExit(f"no character with exponents {want}")
    raise SystemExit(f"unknown character selector {spec!r}")


def _d_values(args, default):
    if args.d_range:
        lo_str, hi_str = args.d_range.split("..", 1)
        return list(range(int(lo_str), int(hi_str) + 1))
    if default is None:
        raise SystemExit("a degree is required (--d/--D or --d-range)")
    return [default]


def _dispatch(args, ctx) -> list[ExperimentReport]:
    seed, threads = args.seed, args.threads
    name = args.experiment
    pp = lambda s: parse_poly(ctx, s)  # noqa: E731

    if name == "char-sum":
        g = pp(args.g)
        chi = _select_char(ctx, g, args.char)
        return [char_sum_check(g, chi, pp(args.f), args.t, seed=seed)]
    if name == "rk-bound":
        return [rk_bound_report(pp(args.f), pp(args.g), args.t, seed=seed)]
    if name == "chowla":
        pairs = _parse_pairs(ctx, args.pair)
        return [chowla_sum(ctx, d, pairs, seed=seed, threads=threads)
                for d in _d_values(args, args.d)]
    if name == "mobius-ap":
        M, a = pp(args.M), pp(args.a)
        return [mobius_ap_sum(ctx, D, M, a, seed=seed, threads=threads)
                for D in _d_values(args, args.D)]
    if name == "lambda-ap":
        M, a = pp(args.M), pp(args.a)
        return [lambda_ap_sum(ctx, D, M, a, seed=seed, threads=threads)
                for D in _d_values(args, args.D)]
    if name == "convolution":
        f = pp(args.f)
        ok = convolution_check(f)
        return [ExperimentReport("convolution", (ctx.p, ctx.k), {"f": f},
                                 value=ok, ok=ok, seed=seed)]
    if name == "vaughan":
        f = pp(args.f)
        ok = vaughan_check(f, args.alpha, args.beta)
        return [ExperimentReport("vaughan", (ctx.p, ctx.k),
                                 {"f": f, "alpha": args.alpha, "beta": args.beta},
                                 value=ok, ok=ok, seed=seed)]
    if name == "main-term":
        M = pp(args.M)
        return [main_term_partial(ctx, d, M, seed=seed) for d in _d_values(args, args.d)]
    if name == "twin":
        a = pp(args.a)
        return [twin_count(ctx, d, a, trunc=args.sing_trunc, seed=seed, threads=threads)
                for d in _d_values(args, args.d)]
    if name == "mobius-lambda-corr":
        a, M = pp(args.a), pp(args.M)
        pairs = _parse_pairs(ctx, args.pair)
        return [mobius_lambda_corr(ctx, d, a, M, pairs, seed=seed, threads=threads)
                for d in _d_values(args, args.d)]
    if name == "mobius-inv-additive":
        M, h = pp(args.M), pp(args.psi_h)
        return [mobius_inv_additive(ctx, d, M, h, seed=seed, threads=threads)
                for d in _d_values(args, args.d)]
    if name == "derivative-ratio":
        M, a = pp(args.M), pp(args.a)
        return [derivative_ratio(ctx, d, M, a, seed=seed) for d in _d_values(args, args.d)]
    if name == "square-class":
        M, A, a = pp(args.M), pp(args.A), pp(args.a)
        return [square_class_count(ctx, d, M, A, a, alpha=args.alpha, seed=seed)
                for d in _d_values(args, args.d)]
    if name == "sign-change":
        return [sign_change_search(pp(args.f), args.eta, seed=seed)]
    if name == "prime-power-ap":
        P = pp(args.P)
        return [mobius_prime_power_ap(ctx, D, P, args.n, seed=seed, threads=threads)
                for D in _d_values(args, args.D)]
    if name == "kloosterman":
        return [kloosterman_report(pp(args.M), pp(args.x), pp(args.z), pp(args.psi_h), seed=seed)]
    if name == "c-sum":
        return [c_sum_report(pp(args.M), pp(args.g), pp(args.h), pp(args.psi_h), seed=seed)]
    if name == "kloosterman-aggregate":
        b = [pp(s) for s in args.b.split(";")]
        if len(b) != 6:
            raise SystemExit("--b needs six ';'-separated polynomials")
        return [kloosterman_aggregate_report(pp(args.M), b, pp(args.z), seed=seed)]
    if name == "singular-series":
        appr = singular_series(pp(args.a), args.N, args.method)
        return [ExperimentReport("singular-series", (ctx.p, ctx.k),
                                 {"a": pp(args.a), "N": args.N, "method": args.method},
                                 value=appr.value, seed=seed)]
    if name == "decompose":
        return [_decompose_report(ctx, args, seed)]
    raise SystemExit(f"unknown experiment {name!r}")  # pragma: no cover


def _decompose_report(ctx, args, seed) -> ExperimentReport:
    a = parse_poly(ctx, args.a)
    M = parse_poly(ctx, args.M)
    rprime = parse_poly(ctx, args.rprime)
    try:
        data = decompose(a, M, rprime, args.d)
    except DegenerateClassError:
        return ExperimentReport(
            "decompose", (ctx.p, ctx.k),
            {"a": a, "M": M, "rprime": rprime, "d": args.d},
            value=None, ok=True,
            details={"degenerate_class": True, "all_mu_zero": True},
            seed=seed,
        )
    details = {
        "D": data.D,
        "E": data.E,
        "E1": data.E1,
        "w": data.w,
        "chi": data.chi.label(),
    }
    ok = None
    if args.verify:
        res = verify_decomposition(data, a, M, rprime, args.d)
        details.update(
            class_size=res.class_size,
            checks=res.checks,
            counterexamples=len(res.counterexamples),
            all_zero=res.all_zero,
        )
        ok = res.ok
    return ExperimentReport(
        "decompose", (ctx.p, ctx.k),
        {"a": a, "M": M, "rprime": rprime, "d": args.d},
        value=data.S, ok=ok, details=details, seed=seed,
    )


def _csv_dump(reports) -> str:
    rows = []
    keys = ["experiment", "p", "k", "seed", "value", "reference", "ratio", "ok", "runtime_ms"]
    param_keys = sorted({k for r in reports for k in r.params})
    header = keys + [f"param:{k}" for k in param_keys]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for r in reports:
        flat = {
            "experiment": r.experiment,
            "p": r.field[0],
            "k": r.field[1],
            "seed": r.seed,
            "value": _scalar(r.value),
            "reference": _scalar(r.reference),
            "ratio": r.ratio,
            "ok": r.ok,
            "runtime_ms": r.runtime_ms,
        }
        row = [flat[k] for k in keys]
        for k in param_keys:
            v = r.params.get(k)
            row.append(_scalar(v) if v is not None else "")
        rows.append(row)
        writer.writerow(row)
    return out.getvalue()


def _scalar(v):
    if isinstance(v, Poly):
        return format_poly(v)
    if isinstance(v, complex):
        return f"{v.real}+{v.imag}j"
    enc = encode_value(v)
    if isinstance(enc, dict):
        return enc.get("rational", str(enc))
    if isinstance(enc, list):
        return ";".join(str(x) for x in enc)
    return enc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    ctx = _field_from_args(args)
    reports = _dispatch(args, ctx)
    if args.out == "csv":
        sys.stdout.write(_csv_dump(reports))
    else:
        for r in reports:
            print(r.to_json(canonical=args.canonical))
    return 0 if all(r.ok in (True, None) for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
