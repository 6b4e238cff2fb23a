"""Size caps shared by the whole package, and the exceptions they raise."""

from dataclasses import dataclass


class CapExceeded(ValueError):
    """An input is larger than the configured desk-scale limits."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed (a bug, or a counterexample)."""


@dataclass
class Caps:
    factor_bound: int = 2**64
    minor_dim: int = 12
    algebra_dim: int = 4096
    subgroup_enum: int = 256
    ff_qmax: int = 31
    ff_nmax: int = 8
    ff_size: int = 10**7


CAPS = Caps()
