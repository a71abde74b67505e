"""Physical parameter set shared by every route."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SystemParams:
    """Kerr oscillator parameters.

    alpha0: initial coherent amplitude (dimensionless, >= 0).
    kappa: Kerr nonlinearity rate (1/time).  With the default kappa=1 all
        times handed to the toolkit are already Kerr times kappa*t.
    gamma: photon loss rate (1/time).
    phi0: initial phase of the coherent amplitude (radians); defaults to 0
        so alpha0 sits on the positive real axis.
    """

    alpha0: float
    kappa: float = 1.0
    gamma: float = 0.0
    phi0: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.alpha0) or self.alpha0 < 0.0:
            raise ValueError("alpha0 must be finite and >= 0")
        if not (self.kappa > 0.0):
            raise ValueError("kappa must be positive")
        if self.gamma < 0.0 or not math.isfinite(self.gamma / self.kappa):
            raise ValueError("gamma must be >= 0 with finite gamma/kappa")

    @property
    def gamma_over_kappa(self) -> float:
        return self.gamma / self.kappa

    def tau(self, t: float) -> float:
        """Dimensionless Kerr time kappa*t."""
        return self.kappa * t


def default_n_cut(alpha0: float) -> int:
    """Fock cutoff keeping the coherent Poisson tail below ~1e-10.

    ceil(alpha0^2 + 8 alpha0 + 20) is sufficient for alpha0 <= 12, the
    desk-scale ceiling of the exact route.
    """
    return int(math.ceil(alpha0 * alpha0 + 8.0 * alpha0 + 20.0))
