"""kerrwig: phase-space toolkit for the lossy single-mode Kerr oscillator.

The package evolves Wigner functions of an initially coherent state under
Kerr self-phase modulation with photon loss by three independent routes
(exact Fock-basis synthesis, finite-difference PDE integration, and an
analytic Airy-regime approximation), evaluates the closed-form moment and
covariance formulas, and quantifies Wigner negativity across the Gaussian,
non-Gaussian mean-field, and kitten-state regimes.

Conventions used throughout:
  - times are dimensionless Kerr times kappa*t; loss enters as gamma/kappa
    (``SystemParams`` carries kappa so physical units also work),
  - phase space is sampled in quadratures x, p with alpha = (x + i p)/sqrt(2),
  - ``WignerGrid`` stores W(x, p) normalized so that the trapezoidal
    integral over dx dp is 1 (a coherent state peaks at 1/pi); pointwise
    analytic routines return the alpha-measure value W(alpha) with
    integral(W d^2 alpha) = 1 (coherent peak 2/pi), which is exactly twice
    the quadrature density.
"""

from .errors import (
    AssemblyError,
    ConfigError,
    ConsistencyError,
    CutoffError,
    GridError,
    KerrwigError,
    LeakageError,
    PoleError,
    RangeError,
    SingularParameterError,
    SolverError,
    TruncationError,
)
from .params import SystemParams, default_n_cut

__version__ = "0.1.0"
