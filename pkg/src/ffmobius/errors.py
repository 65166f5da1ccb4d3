"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """A table or enumeration would exceed the configured size cap."""


class DegenerateClassError(ValueError):
    """Every point of a fixed-derivative class lies in the character's zero
    locus, so the sign cannot be calibrated (all Mobius values are 0)."""
