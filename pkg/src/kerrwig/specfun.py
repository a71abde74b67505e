"""Special-function kernels backing the analytic Kerr formulas.

Everything here is evaluated by a power series with a hand-off to an
asymptotic expansion above a configurable switch point.  The parameter
ranges the rest of the package needs are bounded (Laguerre degrees up to a
few hundred, Bessel arguments up to a few thousand), so plain double
precision with the documented crossovers is sufficient; no arbitrary
precision is attempted.

All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError, RangeError

__all__ = [
    "EvalPolicy",
    "AIRY_POLICY",
    "BESSEL_POLICY",
    "laguerre_assoc",
    "airy_ai",
    "bessel_i",
    "bessel_i_scaled",
    "kummer_m_reg",
    "gamma_fn",
    "erfc",
]


@dataclass(frozen=True)
class EvalPolicy:
    """Accuracy/termination knobs for series evaluation.

    rel_tol: target relative tolerance of the returned value.
    max_terms: hard cap on the number of series terms.
    asymptotic_switch: |argument| above which the asymptotic expansion is
        used instead of the power series.
    """

    rel_tol: float = 1e-13
    max_terms: int = 600
    asymptotic_switch: float = 30.0

    def __post_init__(self):
        if not (self.rel_tol > 0.0):
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


# Series stay stable in double precision up to these switch points.
AIRY_POLICY = EvalPolicy(rel_tol=1e-10, max_terms=300, asymptotic_switch=8.0)
BESSEL_POLICY = EvalPolicy(rel_tol=1e-13, max_terms=600, asymptotic_switch=30.0)

# On the positive axis the Maclaurin series cancels as exp(+2 zeta) while
# Ai decays as exp(-zeta); past this point the asymptotic form is already
# the more accurate of the two, so the hand-off happens early regardless
# of the policy switch (which still governs the oscillatory side).
_AIRY_POS_SEAM = 5.8

_AI0 = 0.3550280538878172392600631860041831763980     # Ai(0) = 3^(-2/3)/Gamma(2/3)
_AIP0 = -0.2588194037928067984051835601892039634793   # Ai'(0) = -3^(-1/3)/Gamma(1/3)


def gamma_fn(x: float) -> float:
    """Gamma function for real x; poles at nonpositive integers raise."""
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma_fn pole at x={x}")
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise RangeError(f"gamma_fn overflow at x={x}") from exc


def erfc(x: float) -> float:
    """Complementary error function."""
    return math.erfc(x)


def _recip_gamma(x: float) -> float:
    """1/Gamma(x), entire: returns 0 at nonpositive-integer poles of Gamma."""
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if x > 0.0:
        if x > 171.6:
            return 0.0  # Gamma overflows, reciprocal underflows
        return math.exp(-math.lgamma(x))
    # negative non-integer: reflection 1/Gamma(x) = Gamma(1-x) sin(pi x)/pi
    return math.gamma(1.0 - x) * math.sin(math.pi * x) / math.pi


def laguerre_assoc(n: int, k: int, x: float) -> float:
    """Associated Laguerre polynomial L_n^k(x) by the three-term recurrence.

    Requires n >= 0 and integer k >= -n.  Negative k is mapped back to a
    positive-superscript polynomial through
    L_n^(-m)(x) = (-x)^m (n-m)!/n! L_(n-m)^m(x).
    """
    if n < 0:
        raise ValueError("laguerre_assoc requires n >= 0")
    if k < -n:
        raise ValueError("laguerre_assoc requires k >= -n")
    if k < 0:
        m = -k
        scale = (-x) ** m * math.exp(math.lgamma(n - m + 1) - math.lgamma(n + 1))
        return scale * laguerre_assoc(n - m, m, x)
    prev = 1.0
    if n == 0:
        return prev
    cur = 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + k + 1 - x) * cur - (j + k) * prev) / (j + 1)
    if not math.isfinite(cur):
        raise RangeError(f"laguerre_assoc overflow for n={n}, k={k}, x={x}")
    return cur


def _airy_series(x, policy):
    """Maclaurin evaluation of Ai via the two y''=xy solutions."""
    x = np.asarray(x, dtype=float)
    x3 = x * x * x
    f_term = np.ones_like(x)
    g_term = x.copy()
    f_sum = f_term.copy()
    g_sum = g_term.copy()
    for j in range(1, policy.max_terms):
        f_term = f_term * x3 / ((3 * j) * (3 * j - 1))
        g_term = g_term * x3 / ((3 * j + 1) * (3 * j))
        f_sum += f_term
        g_sum += g_term
        if max(np.max(np.abs(f_term)), np.max(np.abs(g_term))) < policy.rel_tol:
            break
    return _AI0 * f_sum + _AIP0 * g_sum


def _airy_asneg(x, policy):
    """Oscillatory asymptotics of Ai(-|x|) for x <= -switch (DLMF 9.7.9)."""
    z = np.abs(np.asarray(x, dtype=float))
    zeta = (2.0 / 3.0) * z ** 1.5
    even = np.ones_like(z)
    odd = np.zeros_like(z)
    u = 1.0
    term = np.ones_like(z)
    for k in range(1, 40):
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        new = u / zeta ** k
        if np.max(np.abs(new)) >= np.max(np.abs(term)) and k > 2:
            break  # divergent tail reached
        term = new
        sgn = (-1.0) ** (k // 2)
        if k % 2 == 0:
            even = even + sgn * new
        else:
            odd = odd + sgn * new
        if np.max(np.abs(new)) < policy.rel_tol:
            break
    pref = 1.0 / (math.sqrt(math.pi) * z ** 0.25)
    return pref * (np.cos(zeta - math.pi / 4) * even + np.sin(zeta - math.pi / 4) * odd)


def _airy_aspos(x, policy):
    """Decaying asymptotics of Ai(x) for x >= switch (DLMF 9.7.5)."""
    z = np.asarray(x, dtype=float)
    zeta = (2.0 / 3.0) * z ** 1.5
    acc = np.ones_like(z)
    u = 1.0
    term = np.ones_like(z)
    for k in range(1, 40):
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        new = u / zeta ** k
        if np.max(np.abs(new)) >= np.max(np.abs(term)) and k > 2:
            break
        term = new
        acc = acc + (-1.0) ** k * new
        if np.max(np.abs(new)) < policy.rel_tol:
            break
    return np.exp(-zeta) / (2.0 * math.sqrt(math.pi) * z ** 0.25) * acc


def airy_ai(x, policy: EvalPolicy | None = None):
    """Airy function Ai of a real argument (scalar or ndarray).

    Maclaurin series below the switch point, asymptotic expansions above.
    """
    policy = policy or AIRY_POLICY
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)):
        raise ValueError("airy_ai requires finite input")
    out = np.empty_like(arr)
    s = policy.asymptotic_switch
    pos_seam = min(s, _AIRY_POS_SEAM)
    mid = (arr >= -s) & (arr <= pos_seam)
    if np.any(mid):
        out[mid] = _airy_series(arr[mid], policy)
    hi = arr > pos_seam
    if np.any(hi):
        out[hi] = _airy_aspos(arr[hi], policy)
    lo = arr < -s
    if np.any(lo):
        out[lo] = _airy_asneg(arr[lo], policy)
    return float(out[0]) if scalar else out


def log_airy_ai_pos(x):
    """log Ai(x) for large positive x, safe against exp underflow.

    Leading asymptotic with the first correction term; used where
    exp(big) * Ai(big) products must be formed without overflow.
    """
    z = np.asarray(x, dtype=float)
    zeta = (2.0 / 3.0) * z ** 1.5
    u1 = 5.0 / 72.0
    u2 = 385.0 / 10368.0
    corr = np.log1p(-u1 / zeta + u2 / zeta ** 2)
    return -zeta - math.log(2.0 * math.sqrt(math.pi)) - 0.25 * np.log(z) + corr


def _bessel_series_scaled(l: int, z: np.ndarray, policy: EvalPolicy) -> np.ndarray:
    """I_l(z) * exp(-Re z) by the ascending series, vectorized in z.

    Each term is exponentiated from its logarithm so the e^{-Re z} scale can
    be folded in before any overflow-prone intermediate appears.
    """
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    nz = z != 0
    if l == 0:
        out[~nz] = np.exp(-0.0) * 1.0
    zz = z[nz]
    if zz.size:
        logh = np.log(zz / 2.0)        # complex log, principal branch
        rez = zz.real
        # log of term k: (2k+l) log(z/2) - lgamma(k+1) - lgamma(k+l+1) - Re z
        base = l * logh - math.lgamma(l + 1) - rez
        term = np.exp(base)
        acc = term.copy()
        ratio_log = 2.0 * logh
        peak = np.max(np.abs(zz)) / 2.0
        for k in range(1, policy.max_terms):
            term = term * np.exp(ratio_log) / (k * (k + l))
            acc += term
            if k > peak and np.max(np.abs(term)) < policy.rel_tol * max(np.max(np.abs(acc)), 1e-300):
                break
        out[nz] = acc
    return out


def _bessel_asymptotic_scaled(l: int, z: np.ndarray, policy: EvalPolicy) -> np.ndarray:
    """I_l(z) * exp(-Re z) by the large-|z| expansion (DLMF 10.40.5)."""
    z = np.asarray(z, dtype=complex)
    mu = 4.0 * l * l
    s_minus = np.ones_like(z)
    s_plus = np.ones_like(z)
    a = 1.0
    prev = np.full(z.shape, np.inf)
    for k in range(1, 30):
        a *= (mu - (2 * k - 1) ** 2) / (8.0 * k)
        new = a / z ** k
        if np.max(np.abs(new)) >= np.max(np.abs(prev)):
            break
        prev = new
        s_minus = s_minus + (-1.0) ** k * new
        s_plus = s_plus + new
        if np.max(np.abs(new)) < policy.rel_tol:
            break
    pref = 1.0 / np.sqrt(2.0 * math.pi * z)
    first = np.exp(1j * z.imag) * s_minus
    # subdominant exponential; sign of the Stokes multiplier follows Im z,
    # and on the real axis the term is dropped (it is exponentially small
    # there and its imaginary part is a Stokes artifact)
    sgn = np.sign(z.imag)
    second = np.where(
        sgn == 0,
        0.0,
        np.exp(-z - z.real) * (-1.0) ** l * 1j * sgn * s_plus,
    )
    return pref * (first + second)


def bessel_i_scaled(l: int, z, policy: EvalPolicy | None = None):
    """Exponentially scaled modified Bessel function I_l(z) * exp(-|Re z|).

    Safe for large arguments where I_l itself overflows.  Integer order
    only; I_(-l) = I_l is applied, and Re z < 0 is reflected through
    I_l(-z) = (-1)^l I_l(z).
    """
    policy = policy or BESSEL_POLICY
    l = abs(int(l))
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)):
        raise ValueError("bessel_i requires finite argument")
    flip = arr.real < 0
    work = np.where(flip, -arr, arr)
    out = np.empty_like(work)
    absz = np.abs(work)
    # The ascending series cancels over a scale exp(|z| - Re z), so it is
    # only trusted where the argument is small or real-dominant.  The
    # compound asymptotic expansion covers the oscillatory region for
    # l^2 not too large against |z|.  The remaining corner (imaginary-
    # dominant z with large order) is reached by the three-term recurrence
    # upward from orders 0 and 1, which keeps the error at the absolute
    # scale of I_0 -- exactly what sums over orders need.
    cancel_scale = absz - work.real
    use_series = (cancel_scale <= 14.0) & (
        (absz <= policy.asymptotic_switch) | (l * l > 2.0 * absz)
    )
    use_asym = ~use_series & (l * l <= 2.0 * absz)
    use_recur = ~use_series & ~use_asym
    if np.any(use_series):
        out[use_series] = _bessel_series_scaled(l, work[use_series], policy)
    if np.any(use_asym):
        out[use_asym] = _bessel_asymptotic_scaled(l, work[use_asym], policy)
    if np.any(use_recur):
        zz = work[use_recur]
        i_prev = _bessel_asymptotic_scaled(0, zz, policy)
        i_cur = _bessel_asymptotic_scaled(1, zz, policy)
        for order in range(1, l):
            i_prev, i_cur = i_cur, i_prev - (2.0 * order / zz) * i_cur
        out[use_recur] = i_cur if l >= 1 else i_prev
    if l % 2 == 1:
        out = np.where(flip, -out, out)
    return complex(out[0]) if scalar else out


def bessel_i(l: int, z, policy: EvalPolicy | None = None):
    """Modified Bessel function of the first kind, integer order, complex z."""
    policy = policy or BESSEL_POLICY
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(arr.real) > 705.0):
        raise RangeError("bessel_i overflow: |Re z| too large, use bessel_i_scaled")
    scaled = bessel_i_scaled(l, z, policy)
    return scaled * np.exp(np.abs(np.asarray(z).real))


def kummer_m_reg(a: float, b: float, z, policy: EvalPolicy | None = None):
    """Regularized confluent hypergeometric function M(a,b,z)/Gamma(b).

    Evaluated as sum_k (a)_k z^k / (k! Gamma(b+k)), which stays finite for
    nonpositive-integer b.  For nonpositive-integer a the series terminates
    exactly (the polynomial case).  Accepts real or complex z.
    """
    policy = policy or BESSEL_POLICY
    terminating = a <= 0.0 and a == math.floor(a)
    n_terms = int(-a) + 1 if terminating else policy.max_terms
    zc = complex(z) if isinstance(z, complex) else float(z)
    poch = 1.0  # (a)_k
    acc = 0.0 + 0.0j if isinstance(zc, complex) else 0.0
    zpow = 1.0
    kfact = 1.0
    for k in range(n_terms):
        acc = acc + poch * zpow / kfact * _recip_gamma(b + k)
        poch *= a + k
        zpow = zpow * zc
        kfact *= k + 1
        if not terminating and k > 2 and abs(poch * zpow / kfact) < policy.rel_tol * max(abs(acc), 1e-300):
            break
    if not np.isfinite(acc if not isinstance(acc, complex) else abs(acc)):
        raise RangeError(f"kummer_m_reg overflow for a={a}, b={b}, z={z}")
    return acc
