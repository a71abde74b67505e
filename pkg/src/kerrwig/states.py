"""Quantum states of the Kerr oscillator and their Wigner functions.

Construction of coherent and kitten states, exact closed/open evolution in
the truncated Fock basis, and synthesis of Wigner functions on rectangular
quadrature grids or at polar phase-space points.

Measure conventions (see the package docstring): pointwise functions
(``superposition_wigner``, ``weyl_symbol_nm``, ``exact_open_wigner_polar``)
return the alpha-measure density W(alpha) whose integral over d^2 alpha is
1 (coherent peak 2/pi).  ``WignerGrid`` stores the quadrature density
W(x, p) = W(alpha)/2 with alpha = (x + i p)/sqrt(2), so the trapezoidal
integral over dx dp is 1 (coherent peak 1/pi).

All operations are pure; grids are treated as immutable after synthesis.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, CutoffError, GridError, RangeError, TruncationError
from .params import SystemParams, default_n_cut
from .specfun import bessel_i_scaled, laguerre_assoc

__all__ = [
    "GridSpec",
    "WignerGrid",
    "FockVector",
    "FockDensity",
    "KittenSpec",
    "grid_for",
    "coherent_wigner",
    "kitten_coefficients",
    "superposition_wigner",
    "superposition_wigner_grid",
    "weyl_symbol_nm",
    "closed_evolution_coeffs",
    "open_density_matrix",
    "density_to_wigner",
    "exact_open_wigner_polar",
    "annihilation_matrix",
]

TAIL_TOL = 1e-10
# beyond this the e^{-2 r^2} Weyl-symbol scale underflows; all Fock states
# reachable at desk scale have decayed by orders of magnitude before it
_R2_UNDERFLOW = 345.0


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular phase-space sampling.

    Samples sit at x_min + i*dx for i in [0, nx), with dx = (x_max-x_min)/nx
    (half-open on the right), and likewise in p.
    """

    nx: int
    np: int
    x_min: float
    x_max: float
    p_min: float
    p_max: float

    def __post_init__(self):
        if self.nx < 1 or self.np < 1:
            raise ValueError("grid needs at least one sample per axis")
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise ValueError("grid bounds must be increasing")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / self.np

    def x_axis(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.nx)

    def p_axis(self) -> np.ndarray:
        return self.p_min + self.dp * np.arange(self.np)

    def mesh(self):
        """(X, P) arrays of shape (nx, np)."""
        return np.meshgrid(self.x_axis(), self.p_axis(), indexing="ij")

    def alpha_mesh(self) -> np.ndarray:
        x, p = self.mesh()
        return (x + 1j * p) / math.sqrt(2.0)


def grid_for(alpha0: float, pad: float = 6.0, spacing: float = 0.05,
             n: int | None = None) -> GridSpec:
    """Square grid covering +/- (sqrt(2) alpha0 + pad) in both quadratures."""
    half = math.sqrt(2.0) * alpha0 + pad
    if n is None:
        n = int(math.ceil(2.0 * half / spacing))
        n += n % 2
    return GridSpec(n, n, -half, half, -half, half)


@dataclass
class WignerGrid:
    """Real Wigner samples W(x, p) on a GridSpec, quadrature-normalized."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        expected = (self.spec.nx, self.spec.np)
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")

    @property
    def nx(self) -> int:
        return self.spec.nx

    @property
    def npoints_p(self) -> int:
        return self.spec.np

    def integral(self) -> float:
        """Composite trapezoidal integral of W over dx dp."""
        return float(np.trapezoid(np.trapezoid(self.values, dx=self.spec.dp, axis=1),
                                  dx=self.spec.dx))

    def abs_integral(self) -> float:
        return float(np.trapezoid(np.trapezoid(np.abs(self.values), dx=self.spec.dp, axis=1),
                                  dx=self.spec.dx))

    def check_normalized(self, tol: float = 1e-6) -> None:
        total = self.integral()
        if abs(total - 1.0) > tol:
            raise GridError(f"grid integral {total} deviates from 1 beyond {tol}")

    def save_csv(self, path) -> None:
        """Header `x,p,w`, row-major (x slow), repr-exact floats."""
        x = self.spec.x_axis()
        p = self.spec.p_axis()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("x,p,w\n")
            for i in range(self.spec.nx):
                xi = x[i]
                row = self.values[i]
                for j in range(self.spec.np):
                    fh.write(f"{xi!r},{p[j]!r},{row[j]!r}\n")

    @classmethod
    def load_csv(cls, path) -> "WignerGrid":
        xs, ps, ws = [], [], []
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != "x,p,w":
                raise ValueError(f"unexpected CSV header {header!r}")
            for line in fh:
                a, b, c = line.split(",")
                xs.append(float(a))
                ps.append(float(b))
                ws.append(float(c))
        x = np.array(sorted(set(xs)))
        p = np.array(sorted(set(ps)))
        nx, npp = len(x), len(p)
        if nx * npp != len(ws):
            raise ValueError("CSV is not a full rectangular grid")
        dx = x[1] - x[0] if nx > 1 else 1.0
        dp = p[1] - p[0] if npp > 1 else 1.0
        spec = GridSpec(nx, npp, x[0], x[0] + nx * dx, p[0], p[0] + npp * dp)
        values = np.array(ws).reshape(nx, npp)
        return cls(spec, values)

    def save_binary(self, path) -> None:
        """Little-endian dump: int64 nx, np then 4 float64 bounds then values."""
        with open(path, "wb") as fh:
            fh.write(struct.pack("<qq", self.spec.nx, self.spec.np))
            fh.write(struct.pack("<dddd", self.spec.x_min, self.spec.x_max,
                                 self.spec.p_min, self.spec.p_max))
            fh.write(np.ascontiguousarray(self.values, dtype="<f8").tobytes())

    @classmethod
    def load_binary(cls, path) -> "WignerGrid":
        with open(path, "rb") as fh:
            nx, npp = struct.unpack("<qq", fh.read(16))
            x0, x1, p0, p1 = struct.unpack("<dddd", fh.read(32))
            data = np.frombuffer(fh.read(), dtype="<f8").reshape(nx, npp)
        return cls(GridSpec(nx, npp, x0, x1, p0, p1), data.copy())


@dataclass
class FockVector:
    """Truncated number-basis amplitudes c_n of a pure state."""

    coeffs: np.ndarray
    tail_tol: float = TAIL_TOL

    @property
    def n_cut(self) -> int:
        return len(self.coeffs)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def validate(self) -> None:
        ns = self.norm_sq()
        if not (1.0 - self.tail_tol <= ns <= 1.0 + 1e-12):
            raise CutoffError(f"Fock norm {ns} outside [1-{self.tail_tol}, 1]")

    def to_density(self) -> "FockDensity":
        return FockDensity(np.outer(self.coeffs, np.conj(self.coeffs)), self.tail_tol)


@dataclass
class FockDensity:
    """Truncated number-basis density matrix."""

    rho: np.ndarray
    tail_tol: float = TAIL_TOL

    @property
    def n_cut(self) -> int:
        return self.rho.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.rho)))

    def validate(self) -> None:
        if self.rho.shape[0] != self.rho.shape[1]:
            raise ValueError("rho must be square")
        herm = np.max(np.abs(self.rho - self.rho.conj().T))
        if herm > 1e-12:
            raise ConsistencyError(f"rho Hermiticity violated by {herm}")
        tr = self.trace()
        if not (1.0 - self.tail_tol <= tr <= 1.0 + 1e-9):
            raise CutoffError(f"trace {tr} outside [1-{self.tail_tol}, 1]")
        dmin = float(np.min(np.real(np.diag(self.rho))))
        if dmin < -1e-12:
            raise ConsistencyError(f"negative population {dmin}")

    def expect(self, op: np.ndarray) -> complex:
        return complex(np.trace(self.rho @ op))


def annihilation_matrix(n_cut: int) -> np.ndarray:
    """Truncated annihilation operator in the number basis."""
    a = np.zeros((n_cut, n_cut), dtype=complex)
    n = np.arange(1, n_cut)
    a[n - 1, n] = np.sqrt(n)
    return a


@dataclass(frozen=True)
class KittenSpec:
    """N coherent components reached at the Kerr recurrence time 2 pi M / N."""

    N: int
    M: int
    alpha0: float

    def __post_init__(self):
        if self.N < 1 or self.M < 1:
            raise ValueError("N and M must be positive integers")

    @property
    def kerr_time(self) -> float:
        return 2.0 * math.pi * self.M / self.N


def coherent_wigner(params: SystemParams, spec: GridSpec) -> WignerGrid:
    """Initial coherent-state Wigner function on a quadrature grid.

    W(x, p) = (1/pi) exp(-(x - x0)^2 - (p - p0)^2) with the center at
    sqrt(2) alpha0 e^{i phi0}.  Raises GridError if the grid clips more
    than 1e-8 of the peak at its edge.
    """
    x0 = math.sqrt(2.0) * params.alpha0 * math.cos(params.phi0)
    p0 = math.sqrt(2.0) * params.alpha0 * math.sin(params.phi0)
    x, p = spec.mesh()
    vals = np.exp(-((x - x0) ** 2) - (p - p0) ** 2) / math.pi
    _check_edges(vals)
    return WignerGrid(spec, vals)


def _check_edges(vals: np.ndarray, frac: float = 1e-8) -> None:
    peak = float(np.max(np.abs(vals)))
    edge = max(
        float(np.max(np.abs(vals[0, :]))),
        float(np.max(np.abs(vals[-1, :]))),
        float(np.max(np.abs(vals[:, 0]))),
        float(np.max(np.abs(vals[:, -1]))),
    )
    if edge > frac * peak:
        raise GridError(f"edge samples carry {edge/peak:.2e} of peak; enlarge the grid")


def kitten_coefficients(spec: KittenSpec) -> list[tuple[complex, complex]]:
    """Weights and coherent amplitudes of the N-kitten superposition.

    Even N:  weights e^{i (M/N) pi k^2}/sqrt(N), amplitudes
    alpha0 e^{i (2k+1) pi / N}; odd N: weights e^{i (M/N) pi k (k-1)}/sqrt(N),
    amplitudes alpha0 e^{i 2 pi k / N}; k = 0..N-1.
    """
    N, M, a0 = spec.N, spec.M, spec.alpha0
    root = 1.0 / math.sqrt(N)
    out = []
    for k in range(N):
        if N % 2 == 0:
            w = root * np.exp(1j * math.pi * M * k * k / N)
            amp = a0 * np.exp(1j * (2 * k + 1) * math.pi / N)
        else:
            w = root * np.exp(1j * math.pi * M * k * (k - 1) / N)
            amp = a0 * np.exp(1j * 2.0 * math.pi * k / N)
        out.append((complex(w), complex(amp)))
    return out


def gram_norm(components) -> float:
    """Norm of sum_k c_k |alpha_k> from the coherent-overlap Gram matrix."""
    w = np.array([c for c, _ in components])
    a = np.array([al for _, al in components])
    overlaps = np.exp(
        -0.5 * np.abs(a[:, None]) ** 2
        - 0.5 * np.abs(a[None, :]) ** 2
        + np.conj(a[:, None]) * a[None, :]
    )
    return float(np.real(np.conj(w) @ overlaps @ w))


def superposition_wigner(components, alpha, residue_tol: float = 1e-8):
    """Wigner function of sum_k c_k |alpha_k> at complex point(s), alpha-measure.

    Pairwise coherent-overlap double sum; the verified real part is
    returned, and an imaginary residue above residue_tol of the natural
    2/pi scale raises ConsistencyError.
    """
    beta = np.asarray(alpha, dtype=complex)
    scalar = beta.ndim == 0
    beta = np.atleast_1d(beta)
    acc = np.zeros(beta.shape, dtype=complex)
    for ck, ak in components:
        for cl, al in components:
            expo = 0.5 * (
                4.0 * (ak - beta) * np.conj(beta)
                - abs(ak) ** 2
                - (-4.0 * beta + 2.0 * ak + al) * np.conj(al)
            )
            acc += ck * np.conj(cl) * np.exp(expo)
    acc *= 2.0 / math.pi
    resid = float(np.max(np.abs(acc.imag)))
    if resid > residue_tol * (2.0 / math.pi):
        raise ConsistencyError(f"imaginary residue {resid} in superposition Wigner")
    out = acc.real
    return float(out[0]) if scalar else out


def superposition_wigner_grid(components, spec: GridSpec) -> WignerGrid:
    """Quadrature-normalized grid samples of a coherent superposition."""
    vals = superposition_wigner(components, spec.alpha_mesh()) / 2.0
    return WignerGrid(spec, vals)


def weyl_symbol_nm(n: int, m: int, alpha) -> complex:
    """Weyl symbol of |n><m| at alpha (alpha-measure).

    For m >= n this is
    (2/pi)(-1)^n sqrt(n!/m!) (2 conj(alpha))^{m-n} L_n^{m-n}(4|alpha|^2)
    e^{-2|alpha|^2}; for m < n the conjugate symmetry is applied.
    Factorial ratios are carried in the log domain.
    """
    if n < 0 or m < 0:
        raise ValueError("Fock indices must be nonnegative")
    if m < n:
        return np.conj(weyl_symbol_nm(m, n, alpha))
    a = np.asarray(alpha, dtype=complex)
    scalar = a.ndim == 0
    a = np.atleast_1d(a)
    r2 = np.abs(a) ** 2
    l = m - n
    lag = _laguerre_field(n, l, 4.0 * r2)
    log_ratio = 0.5 * (math.lgamma(n + 1) - math.lgamma(m + 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        mag = np.where(
            r2 > 0,
            np.exp(log_ratio + l * (math.log(2.0) + 0.5 * np.log(np.where(r2 > 0, r2, 1.0))) - 2.0 * r2),
            1.0 if l == 0 else 0.0,
        )
        phase = np.where(np.abs(a) > 0, (np.conj(a) / np.where(np.abs(a) > 0, np.abs(a), 1.0)) ** l, 1.0)
    out = (2.0 / math.pi) * (-1.0) ** n * mag * phase * lag
    if not np.all(np.isfinite(out)):
        raise RangeError(f"weyl_symbol overflow for n={n}, m={m}")
    return complex(out[0]) if scalar else out


def _laguerre_field(n: int, k: int, x: np.ndarray) -> np.ndarray:
    """L_n^k over an array by the three-term recurrence (k >= 0)."""
    prev = np.ones_like(x)
    if n == 0:
        return prev
    cur = 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + k + 1 - x) * cur - (j + k) * prev) / (j + 1)
    return cur


def closed_evolution_coeffs(params: SystemParams, t: float,
                            n_cut: int | None = None) -> FockVector:
    """Fock amplitudes of the closed Kerr evolution of |alpha0 e^{i phi0}>.

    c_n(t) = e^{-i n(n-1) kappa t/2} e^{-alpha0^2/2} (alpha0 e^{i phi0})^n/sqrt(n!).
    """
    if n_cut is None:
        n_cut = default_n_cut(params.alpha0)
    tau = params.tau(t)
    n = np.arange(n_cut)
    if params.alpha0 > 0:
        logmag = -0.5 * params.alpha0 ** 2 + n * math.log(params.alpha0) \
            - 0.5 * np.array([math.lgamma(k + 1) for k in range(n_cut)])
        mag = np.exp(logmag)
    else:
        mag = np.zeros(n_cut)
        mag[0] = 1.0
    phase = np.exp(1j * n * params.phi0 - 0.5j * n * (n - 1) * tau)
    vec = FockVector(mag * phase)
    vec.validate()
    return vec


def open_density_matrix(params: SystemParams, t: float,
                        n_cut: int | None = None) -> FockDensity:
    """Exact lossy-Kerr density matrix in the truncated Fock basis.

    rho_nm(t) = c_n c_m^* e^{-i tau (n(n-1)-m(m-1))/2} e^{-G tau (n+m)/2}
    exp(G a0^2 (1 - e^{-G tau - i tau (n-m)})/(G + i(n-m))), in the
    dimensionless variables tau = kappa t, G = gamma/kappa.  The index
    order is fixed so the gamma=0 limit reproduces the closed evolution
    e^{-i H t} elementwise (cross-checked against direct integration of
    the master equation).
    """
    if n_cut is None:
        n_cut = default_n_cut(params.alpha0)
    tau = params.tau(t)
    gq = params.gamma_over_kappa
    c0 = closed_evolution_coeffs(SystemParams(params.alpha0, phi0=params.phi0), 0.0, n_cut)
    c = c0.coeffs
    n = np.arange(n_cut)
    kerr = n * (n - 1) / 2.0
    phase = np.exp(-1j * tau * (kerr[:, None] - kerr[None, :]))
    decay = np.exp(-0.5 * gq * tau * (n[:, None] + n[None, :]))
    l = n[:, None] - n[None, :]
    with np.errstate(invalid="ignore"):
        off = gq * params.alpha0 ** 2 * (1.0 - np.exp(-gq * tau - 1j * tau * l)) / (gq + 1j * l)
    # the diagonal (l=0) is the removable gamma->0 case; -expm1 keeps it exact
    diag_expo = params.alpha0 ** 2 * (-math.expm1(-gq * tau))
    off[l == 0] = diag_expo
    rho = np.outer(c, np.conj(c)) * phase * decay * np.exp(off)
    out = FockDensity(rho)
    out.validate()
    return out


def density_to_wigner(rho: FockDensity, spec: GridSpec,
                      check_input: bool = True) -> WignerGrid:
    """Synthesize W(x, p) = sum_nm rho_nm W_{n,m} on a quadrature grid.

    Streams over Fock diagonals with an exponentially scaled Laguerre
    recurrence, so no factorial or e^{2 r^2} intermediate can overflow.
    Reality is enforced by the Hermitian pairing of the diagonals, with
    the Hermiticity of the input checked up front.
    """
    if check_input:
        rho.validate()
    n_cut = rho.n_cut
    x, p = spec.mesh()
    r2 = 0.5 * (x * x + p * p)      # |alpha|^2
    r = np.sqrt(r2)
    live = 2.0 * r2 <= _R2_UNDERFLOW
    xarg = 4.0 * r2
    # e^{-i phi} with the phase of alpha = (x+ip)/sqrt(2)
    with np.errstate(invalid="ignore", divide="ignore"):
        eiphi_conj = np.where(r > 0, (x - 1j * p) / math.sqrt(2.0) / np.where(r > 0, r, 1.0), 1.0)
    acc = np.zeros((spec.nx, spec.np), dtype=complex)
    phase_l = np.ones_like(eiphi_conj)      # e^{-i l phi} at the current l
    log2r = np.where(r > 0, np.log(2.0 * np.where(r > 0, r, 1.0)), -np.inf)
    for l in range(n_cut):
        diag = np.diag(rho.rho, l)
        if np.any(np.abs(diag) > 1e-300):
            # v_n = (-1)^n sqrt(n!/(n+l)!) L_n^l(4 r^2) (2r)^l e^{-2 r^2}
            if l == 0:
                v_prev = np.where(live, np.exp(-2.0 * r2), 0.0)
            else:
                with np.errstate(over="ignore", invalid="ignore"):
                    v_prev = np.where(
                        live & (r2 > 0),
                        np.exp(l * log2r - 2.0 * r2 - 0.5 * math.lgamma(l + 1)),
                        0.0,
                    )
            s = diag[0] * v_prev
            if n_cut - l > 1:
                v_cur = (xarg - (l + 1.0)) * v_prev / math.sqrt(l + 1.0)
                s = s + diag[1] * v_cur
                for nn in range(1, n_cut - l - 1):
                    denom = math.sqrt((nn + 1.0) * (nn + l + 1.0))
                    v_prev, v_cur = v_cur, ((xarg - (2 * nn + l + 1.0)) * v_cur
                                            - math.sqrt(nn * (nn + l)) * v_prev) / denom
                    s = s + diag[nn + 1] * v_cur
            if l == 0:
                acc += s
            else:
                term = phase_l * s
                acc += term + np.conj(term)
        phase_l = phase_l * eiphi_conj
    vals = (1.0 / math.pi) * np.real(acc)   # alpha-measure 2/pi, /2 for quadrature
    return WignerGrid(spec, vals)


def _kernel(m: np.ndarray, gq: float, variant: str):
    """Mode kernels kappa_m, Q_m of the exact polar evolution."""
    if variant == "quantum":
        km = np.sqrt((1.0 + 1j * m / gq) ** 2)
        qm = 0.5 + 1j * m / (4.0 * gq)
    elif variant == "twa":
        km = np.sqrt(1.0 + 1j * m / gq)
        qm = np.full_like(np.asarray(m, dtype=complex), 0.5)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return km, qm


def exact_open_wigner_polar(r, phi, t, params: SystemParams,
                            m_max: int | None = None, variant: str = "quantum",
                            trunc_tol: float = 1e-8):
    """Exact lossy-Kerr Wigner function at polar points (r, phi), alpha-measure.

    Truncated mode sum of the analytic open-system solution; the ``twa``
    variant evaluates the classical (truncated-Wigner) counterpart, which
    uses the same expression with its own kernels.  Orders are kept up to
    m_max (default ceil(4 alpha0), following the Bessel order-suppression
    rule l^2 < |4 r r0|), and the magnitude of the last retained order is
    monitored against trunc_tol.
    """
    gq = max(params.gamma_over_kappa, 1e-12)
    tau = params.tau(t)
    a0 = params.alpha0
    r_arr = np.asarray(r, dtype=float)
    phi_arr = np.asarray(phi, dtype=float)
    scalar = r_arr.ndim == 0 and phi_arr.ndim == 0
    r_arr, phi_arr = np.broadcast_arrays(np.atleast_1d(r_arr), np.atleast_1d(phi_arr))
    if m_max is None:
        # orders decay like exp(-m^2 / 2|z|) with |z| <= 4 r alpha0, so the
        # tail reaches trunc_tol around m ~ sqrt(2 |z| ln(1/tol)); the
        # O(alpha0) floor is the coarse suppression-rule estimate
        zmax = 4.0 * float(np.max(r_arr)) * a0
        m_max = max(
            int(math.ceil(4.0 * a0)),
            int(math.ceil(math.sqrt(2.0 * zmax * math.log(1.0 / max(trunc_tol, 1e-300))))) + 8,
        )
    total = np.zeros(r_arr.shape, dtype=complex)
    last_mag = 0.0
    for m in range(0, m_max + 1):
        km, qm = _kernel(np.asarray(float(m)), gq, variant)
        km = complex(km)
        qm = complex(qm)
        arg = 0.5 * gq * km * tau
        fm = (4.0 * qm - 1.0) * np.sinh(arg) + km * np.cosh(arg)
        z = 4.0 * r_arr * km * a0 / fm
        chi = km * ((4.0 * qm - 1.0) * np.cosh(arg) + km * np.sinh(arg)) / (2.0 * qm * fm) \
            + 1.0 / (2.0 * qm)
        bterm = 8.0 * qm * a0 * a0 * np.sinh(arg) / fm
        iscaled = bessel_i_scaled(m, z)
        expo = (bterm - chi * r_arr ** 2 + np.abs(z.real if np.isscalar(z) else z.real)
                + 0.5 * gq * tau + 0.5j * m * tau + 1j * m * (phi_arr - params.phi0)
                - 2.0 * a0 * a0)
        term = (km / fm) * iscaled * np.exp(expo)
        if m == 0:
            total += term
        else:
            total += term + np.conj(term)
        last_mag = float(np.max(np.abs(term)))
    scale = float(np.max(np.abs(total)))
    if scale > 0 and last_mag > trunc_tol * scale:
        raise TruncationError(
            f"last polar order carries {last_mag/scale:.2e} of the sum; raise m_max")
    vals = (2.0 / math.pi) * np.real(total)
    return float(vals[0]) if scalar else vals
