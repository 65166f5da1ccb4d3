import json

import pytest

from ffmobius.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def jlines(out):
    return [json.loads(line) for line in out.strip().splitlines()]


def test_twin_example(capsys):
    code, out = run(capsys, "twin", "--q", "3", "--d", "2", "--a", "1")
    assert code == 0
    (rep,) = jlines(out)
    assert rep["value"] == 6
    assert rep["field"] == {"p": 3, "k": 1}


def test_field_spec_forms(capsys):
    code1, out1 = run(capsys, "twin", "--q", "3^2", "--d", "2", "--a", "1", "--canonical")
    code2, out2 = run(capsys, "twin", "--p", "3", "--k", "2", "--d", "2", "--a", "1", "--canonical")
    assert code1 == code2 == 0
    assert out1 == out2


def test_explicit_modulus(capsys):
    code, out = run(capsys, "twin", "--q", "3^2", "--modulus", "2,1,1",
                    "--d", "2", "--a", "1", "--canonical")
    assert code == 0
    (rep,) = jlines(out)
    # basis-independent value: matches the default-modulus run
    _, out_default = run(capsys, "twin", "--q", "3^2", "--d", "2", "--a", "1", "--canonical")
    assert rep["value"] == jlines(out_default)[0]["value"]


def test_d_range_sweep(capsys):
    code, out = run(capsys, "mobius-ap", "--q", "3", "--M", "T", "--a", "1", "--d-range", "2..5")
    assert code == 0
    reps = jlines(out)
    assert [r["params"]["D"] for r in reps] == [2, 3, 4, 5]
    assert reps[0]["value"] == -1


def test_csv_output(capsys):
    code, out = run(capsys, "twin", "--q", "3", "--d-range", "2..3", "--a", "1", "--out", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("experiment,p,k,seed,value")
    assert len(lines) == 3


def test_decompose_verify(capsys):
    code, out = run(capsys, "decompose", "--q", "3", "--a", "T^4", "--M", "1",
                    "--rprime", "0", "--d", "3", "--verify")
    assert code == 0
    (rep,) = jlines(out)
    assert rep["details"]["D"] == "T^3"
    assert rep["details"]["E"] == "T"
    assert rep["details"]["counterexamples"] == 0
    assert rep["value"] in (-1, 1)


def test_char_sum_selectors(capsys):
    code, out = run(capsys, "char-sum", "--q", "3", "--g", "T^2+1", "--char", "quadratic",
                    "--f", "T", "--t", "1")
    assert code == 0
    (rep,) = jlines(out)
    assert rep["ok"] is True
    code, out = run(capsys, "char-sum", "--q", "3", "--g", "T^2+1", "--char", "idx:3",
                    "--f", "T", "--t", "1")
    assert code == 0


def test_principal_char_rejected(capsys):
    with pytest.raises(ValueError):
        main(["char-sum", "--q", "3", "--g", "T^2+1", "--char", "principal",
              "--f", "T", "--t", "1"])


def test_kloosterman_and_c_sum(capsys):
    code, out = run(capsys, "kloosterman", "--q", "3", "--M", "T", "--x", "1", "--z", "1")
    assert code == 0
    (rep,) = jlines(out)
    assert abs(rep["value"]["re"] - (-1)) < 1e-9
    code, out = run(capsys, "c-sum", "--q", "3", "--M", "T", "--g", "1", "--h", "0")
    assert code == 0
    (rep,) = jlines(out)
    assert rep["ok"] is True


def test_kloosterman_aggregate_cli(capsys):
    code, out = run(capsys, "kloosterman-aggregate", "--q", "5", "--M", "T",
                    "--b", "1;2;3;1;2;3", "--z", "0")
    assert code == 0
    (rep,) = jlines(out)
    assert rep["ok"] is True


def test_singular_series_cli(capsys):
    code, out = run(capsys, "singular-series", "--q", "3", "--a", "1", "--N", "1")
    assert code == 0
    (rep,) = jlines(out)
    assert rep["value"]["rational"] == "27/64"


def test_determinism_across_threads(capsys):
    """Identical seed and params, different thread counts: byte-identical
    canonical JSON."""
    outs = []
    for threads in ("1", "2", "4"):
        code, out = run(capsys, "chowla", "--q", "3", "--pair", "1", "--pair", "T",
                        "--d-range", "2..5", "--threads", threads, "--canonical")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]


def test_exit_code_on_failure(capsys, monkeypatch):
    """A hard inequality violation must give a nonzero exit."""
    import ffmobius.cli as cli_mod

    def fake(*a, **kw):
        from ffmobius.report import ExperimentReport

        return [ExperimentReport("twin", (3, 1), {}, value=0, ok=False)]

    monkeypatch.setattr(cli_mod, "_dispatch", lambda args, ctx: fake())
    assert main(["twin", "--q", "3", "--d", "2"]) == 1
