"""Projection onto V(phi), the approximation operator T, frame iteration and finite sections."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.integrate
import scipy.linalg

from ._quad import composite_rule, panel_breaks
from .constants import table_constant
from .generators import bspline
from .hermite import hermite_coeff, quasi_interpolant
from .sampling import density_report
from .spectral import bernstein_constant, bernstein_constant_closed

QUAD_NODES = 16
QUAD_TOL = 1e-10
DUAL_MARGIN = 16
DIVERGENCE_STEPS = 5


class ProjectionError(ArithmeticError):
    pass


class ContractionError(ValueError):
    """Inputs for which the contraction ratio is undefined or not below 1."""


class DivergenceError(ArithmeticError):
    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


def support_radius(g):
    """Half-width beyond which shifts of ``g`` are treated as negligible for padding."""
    if g.kind == "bspline":
        return g.m
    if g.kind == "sinc":
        # the 1/x tail of a sinc series needs a long reach before it stops
        # inflating the residual of T on a finite window
        return 92
    return 8


def default_pad(g):
    return support_radius(g) + 4


def sampling_window(g, window):
    """Interval the sampling points should cover for coefficients on ``window``."""
    pad = default_pad(g)
    return window[0] - pad, window[1] + pad


# --- signals ----------------------------------------------------------------


def autocorrelation(g, K):
    """a_k = <phi, phi(. - k)> for k = 0..K."""
    a = np.zeros(K + 1)
    if g.orthonormal_shifts:
        a[0] = 1.0
    elif g.kind == "bspline":
        ks = np.arange(min(K, g.m) + 1)
        a[: len(ks)] = bspline(2 * g.m, g.m + ks)
    else:
        raise ValueError(f"no autocorrelation for {g.kind}")
    return a


def gram_matrix(g, n):
    """Gram matrix of the shifts phi(. - j), j = 0..n-1."""
    return scipy.linalg.toeplitz(autocorrelation(g, n - 1))


def shift_matrix(g, x, n0, n1, s=0):
    """M[q, j] = phi^(s)(x_q - (n0 + j)) for j = 0..n1-n0."""
    x = np.asarray(x, dtype=float)
    n = np.arange(n0, n1 + 1)
    return g(x[:, None] - n[None, :], s)


@dataclass(frozen=True, eq=False)
class Signal:
    """f(x) = sum_{n=n0}^{n0+len-1} c_n phi(x - n)."""

    generator: object
    n0: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("coefficients must be a non-empty 1-d array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "n0", int(self.n0))

    @property
    def n1(self):
        return self.n0 + len(self.coeffs) - 1

    @property
    def window(self):
        return self.n0, self.n1

    @property
    def support(self):
        """Exact support for B-splines, the padded window otherwise."""
        g = self.generator
        if g.kind == "bspline":
            return float(self.n0), float(self.n1 + g.m)
        pad = default_pad(g)
        return float(self.n0 - pad), float(self.n1 + pad)

    @property
    def breaks(self):
        if self.generator.kind == "bspline":
            return np.arange(self.n0, self.n1 + self.generator.m + 1, dtype=float)
        return np.empty(0)

    def __call__(self, x, s=0):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = shift_matrix(self.generator, flat, self.n0, self.n1, s) @ self.coeffs
        return out.reshape(x.shape)

    def restrict(self, n0, n1):
        """Coefficients re-indexed on [n0, n1], zero-filled or truncated."""
        c = np.zeros(n1 - n0 + 1)
        lo, hi = max(n0, self.n0), min(n1, self.n1)
        if lo <= hi:
            c[lo - n0 : hi - n0 + 1] = self.coeffs[lo - self.n0 : hi - self.n0 + 1]
        return Signal(self.generator, n0, c)

    def _aligned(self, other):
        if other.generator != self.generator:
            raise ValueError("signals live in different spaces")
        n0, n1 = min(self.n0, other.n0), max(self.n1, other.n1)
        return self.restrict(n0, n1), other.restrict(n0, n1)

    def __add__(self, other):
        a, b = self._aligned(other)
        return Signal(self.generator, a.n0, a.coeffs + b.coeffs)

    def __sub__(self, other):
        a, b = self._aligned(other)
        return Signal(self.generator, a.n0, a.coeffs - b.coeffs)

    def __mul__(self, alpha):
        return Signal(self.generator, self.n0, float(alpha) * self.coeffs)

    __rmul__ = __mul__

    def inner(self, other):
        """<f, h> through the Gram quadratic form."""
        a, b = self._aligned(other)
        G = gram_matrix(self.generator, len(a.coeffs))
        return float(a.coeffs @ G @ b.coeffs)

    def norm(self):
        return math.sqrt(max(self.inner(self), 0.0))


def zero_signal(g, window):
    n0, n1 = window
    return Signal(g, n0, np.zeros(n1 - n0 + 1))


def _sinc_tail(C, n0, s, R):
    """Energy of the derivative-free envelope of a sinc signal beyond +-R.

    Far from the coefficients f(x) = sin(pi x)/pi * E(x) with
    E(x) = sum_n (-1)^n c_n / (x - n); averaging sin^2 gives int E^2 / (2 pi^2).
    """
    if s:
        return np.zeros(C.shape[1])
    n = np.arange(n0, n0 + C.shape[0])
    alt = ((-1.0) ** n)[:, None] * C

    def env(x):
        return (alt / (x - n)[:, None]).sum(axis=0) ** 2

    out = np.zeros(C.shape[1])
    for col in range(C.shape[1]):
        for side in (1, -1):
            f = lambda t: env(side * t)[col]
            start = R + (n[-1] if side > 0 else -n[0])
            val, _ = scipy.integrate.quad(f, start, np.inf, limit=200)
            out[col] += val / (2 * math.pi**2)
    return out


def quadrature_norms(g, n0, C, s=0, pad=None, tail=True):
    """L2 norms of f^(s) for every column of the coefficient matrix ``C``.

    Composite Gauss-Legendre over [n0 - pad, n1 + pad]. For sinc an asymptotic
    tail correction accounts for the energy outside when ``s == 0``.
    """
    C = np.asarray(C, dtype=float)
    if C.ndim == 1:
        C = C[:, None]
    n1 = n0 + C.shape[0] - 1
    pad = default_pad(g) if pad is None else pad
    breaks = panel_breaks(n0 - pad, n1 + pad)
    x, w = composite_rule(breaks, QUAD_NODES)
    vals = shift_matrix(g, x, n0, n1, s) @ C
    energy = w @ vals**2
    if tail and g.kind == "sinc":
        energy = energy + _sinc_tail(C, n0, s, pad)
    return np.sqrt(energy)


def quadrature_norm(f, s=0, pad=None):
    return float(quadrature_norms(f.generator, f.n0, f.coeffs, s, pad)[0])


# --- projection -------------------------------------------------------------


def _dual_window(g, window):
    n0, n1 = window
    if g.orthonormal_shifts:
        return n0, n1
    return n0 - DUAL_MARGIN, n1 + DUAL_MARGIN


def _gram_solver(g, window):
    """Map from inner products <h, phi_n> on the dual window to coefficients on ``window``."""
    m0, m1 = _dual_window(g, window)
    n0, n1 = window
    if g.orthonormal_shifts:
        return lambda b: b
    col = autocorrelation(g, m1 - m0)

    def solve(b):
        d = scipy.linalg.solve_toeplitz(col, b)
        G = scipy.linalg.toeplitz(col)
        res = np.max(np.abs(G @ d - b)) / max(np.max(np.abs(b)), 1e-300)
        if res > QUAD_TOL:
            raise ProjectionError(f"dual Toeplitz residual {res:.2e} above {QUAD_TOL}")
        return d[n0 - m0 : n1 - m0 + 1]

    return solve


def _inner_products(g, h, window, support, breaks, n):
    a, b = support
    x, w = composite_rule(panel_breaks(a, b, breaks), n)
    return shift_matrix(g, x, *window).T @ (w * h(x))


def project(g, h, window, support=None, breaks=()):
    """Orthogonal projection of ``h`` onto the shifts phi(. - n), n in ``window``.

    ``h`` may be a Signal (exact Gram inner products), an object with ``support``
    and ``breaks`` (piecewise functions), or any vectorized callable, in which case
    ``support`` defaults to the padded window.
    """
    n0, n1 = window = (int(window[0]), int(window[1]))
    dual = _dual_window(g, window)
    solve = _gram_solver(g, window)
    if isinstance(h, Signal) and h.generator == g:
        m0, m1 = dual
        lo = min(m0, h.n0)
        hh = h.restrict(lo, max(m1, h.n1))
        G = scipy.linalg.toeplitz(autocorrelation(g, hh.n1 - lo))
        b = (G @ hh.coeffs)[m0 - lo : m1 - lo + 1]
        return Signal(g, n0, solve(b))
    if support is None:
        support = getattr(h, "support", None)
    if support is None:
        pad = default_pad(g)
        support = (dual[0] - pad, dual[1] + pad)
    breaks = np.concatenate([np.asarray(breaks, dtype=float),
                             np.asarray(getattr(h, "breaks", ()), dtype=float)])
    b = _inner_products(g, h, dual, support, breaks, QUAD_NODES)
    check = _inner_products(g, h, dual, support, breaks, QUAD_NODES + 8)
    err = np.max(np.abs(b - check))
    if err > QUAD_TOL * max(1.0, np.max(np.abs(check))):
        raise ProjectionError(f"inner products did not reach tolerance (change {err:.2e})")
    return Signal(g, n0, solve(check))


# --- approximation operator -------------------------------------------------


def contraction_ratio(delta, nu, gamma, k, c_k, M_2k):
    """[delta_nu - (nu-1) gamma]^(2k) / c_k * (2 pi)^(2k) * sqrt(M_2k)."""
    if nu < 1 or k < 1:
        raise ContractionError("nu and k must be >= 1")
    if gamma <= 0 or delta <= 0:
        raise ContractionError("gamma and delta must be positive")
    if gamma > delta / nu * (1 + 1e-12):
        raise ContractionError(
            f"gamma={gamma} exceeds delta_nu/nu={delta / nu}; not a separated set"
        )
    span = delta - (nu - 1) * gamma
    return span ** (2 * k) / c_k * (2 * math.pi) ** (2 * k) * math.sqrt(M_2k)


def bernstein_for(g, s):
    """Closed-form M_s when one exists, the lattice-sum estimate otherwise."""
    try:
        return bernstein_constant_closed(g, s)
    except ValueError:
        return bernstein_constant(g, s)


def hermite_matrix(points, k, x):
    """Dense matrix taking flattened samples (point, derivative) to H_{2k-1} at ``x``.

    Every ``x`` must lie inside [points[0], points[-1]].
    """
    points = np.asarray(points, dtype=float)
    x = np.asarray(x, dtype=float)
    idx = np.clip(np.searchsorted(points, x, side="right") - 1, 0, len(points) - 2)
    xi, eta = points[idx], points[idx + 1]
    rows = np.arange(len(x))
    M = np.zeros((len(x), len(points) * k))
    for j in range(k):
        M[rows, idx * k + j] = hermite_coeff(0, j, k - 1, xi, eta, x)
        M[rows, (idx + 1) * k + j] = hermite_coeff(1, j, k - 1, xi, eta, x)
    return M


class ApproximationOperator:
    """T = P o H for a fixed generator, sampling set, nu, k and coefficient window.

    Everything that does not depend on the samples is assembled once, so each
    application is a matrix-vector product.
    """

    def __init__(self, g, X, nu, k, window):
        if k < 1 or nu < 1:
            raise ValueError("k and nu must be >= 1")
        self.g, self.X, self.nu, self.k = g, X, int(nu), int(k)
        self.window = (int(window[0]), int(window[1]))
        pts = X.points
        n0, n1 = self.window
        if pts[0] > n0 or pts[-1] < n1:
            raise ValueError("sampling points must cover the coefficient window")
        x, w = composite_rule(panel_breaks(pts[0], pts[-1], pts), QUAD_NODES)
        dual = _dual_window(g, self.window)
        Phi = shift_matrix(g, x, *dual)
        H = hermite_matrix(pts, self.k, x)
        B = Phi.T @ (w[:, None] * H)
        self._solve = _gram_solver(g, self.window)
        self.sample_to_coeff = self._solve(B)
        self.sampler = np.stack(
            [shift_matrix(g, pts, n0, n1, l) for l in range(self.k)], axis=1
        ).reshape(len(pts) * self.k, n1 - n0 + 1)

    @property
    def matrix(self):
        """T restricted to V(phi) on the window, in coefficient space."""
        return self.sample_to_coeff @ self.sampler

    def samples(self, f):
        """(len(X), k) array of f^(l)(x_i); analytic for Signals."""
        if isinstance(f, Signal) and f.generator == self.g and f.window == self.window:
            return (self.sampler @ f.coeffs).reshape(-1, self.k)
        pts = self.X.points
        return np.stack([f(pts, l) for l in range(self.k)], axis=1)

    def apply(self, samples):
        s = np.asarray(samples, dtype=float).reshape(len(self.X.points), -1)[:, : self.k]
        return Signal(self.g, self.window[0], self.sample_to_coeff @ s.ravel())

    def theoretical_ratio(self):
        rep = density_report(self.X, nus=(self.nu,))
        c_k = table_constant(self.k).value
        M = bernstein_for(self.g, 2 * self.k)
        return contraction_ratio(rep.delta[self.nu], self.nu, rep.gamma, self.k, c_k, M)


def apply_T(g, X, nu, k, samples, window):
    """P applied to the piecewise Hermite quasi-interpolant of ``samples``."""
    H = quasi_interpolant(X, nu, k, samples)
    return project(g, H, window)


@dataclass
class ReconstructionTrace:
    errors: list = field(default_factory=list)
    updates: list = field(default_factory=list)
    ratio_theory: float = math.nan
    ratios: list = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self):
        return len(self.updates)

    def as_dict(self):
        return {
            "errors": self.errors,
            "updates": self.updates,
            "ratio_theory": self.ratio_theory,
            "ratios": self.ratios,
            "converged": self.converged,
            "iterations": self.iterations,
        }


def iterate_reconstruct(g, X, nu, k, samples, window, max_iter=50, tol=1e-10,
                        truth=None, warn=False, operator=None):
    """Frame iteration f_0 = T f, f_{n+1} = f_n + T(f - f_n).

    Samples of f - f_n are recomputed from the analytic derivatives of f_n.
    ``warn=True`` proceeds (with a warning) when the contraction ratio is not below 1.
    """
    op = operator or ApproximationOperator(g, X, nu, k, window)
    samples = np.asarray(samples, dtype=float).reshape(len(X.points), -1)[:, :k]
    trace = ReconstructionTrace()
    try:
        trace.ratio_theory = op.theoretical_ratio()
    except (ContractionError, ValueError, ArithmeticError) as exc:
        if not warn:
            raise
        warnings.warn(f"contraction ratio unavailable: {exc}")
    if not trace.ratio_theory < 1:
        msg = f"contraction ratio {trace.ratio_theory:.4g} is not below 1"
        if not warn:
            raise ContractionError(msg)
        if not math.isnan(trace.ratio_theory):
            warnings.warn(msg + "; proceeding")

    f_n = op.apply(samples)
    watched = trace.errors if truth is not None else trace.updates
    if truth is not None:
        trace.errors.append((truth - f_n).norm())
    growth = 0
    for _ in range(max_iter):
        f_next = f_n + op.apply(samples - op.samples(f_n))
        trace.updates.append((f_next - f_n).norm())
        f_n = f_next
        if truth is not None:
            trace.errors.append((truth - f_n).norm())
        if len(watched) >= 2 and watched[-2] > 0:
            trace.ratios.append(watched[-1] / watched[-2])
            growth = growth + 1 if watched[-1] > watched[-2] else 0
            if growth >= DIVERGENCE_STEPS:
                raise DivergenceError(
                    f"error grew for {DIVERGENCE_STEPS} consecutive iterations", trace
                )
        if trace.updates[-1] < tol:
            trace.converged = True
            break
    return f_n, trace


# --- finite sections --------------------------------------------------------


def sampling_matrix(g, X, k, window):
    """U[(i, l), n] = phi^(l)(x_i - n) for all points of X and n in ``window``."""
    pts = np.asarray(X.points if hasattr(X, "points") else X, dtype=float)
    n0, n1 = window
    return np.stack([shift_matrix(g, pts, n0, n1, l) for l in range(k)], axis=1).reshape(
        len(pts) * k, n1 - n0 + 1
    )


def finite_section_bounds(g, X, k, window):
    """(A_est, B_est): extreme values of |U c|^2 / ||f||^2 over the coefficient window."""
    U = sampling_matrix(g, X, k, window)
    if U.size == 0:
        raise ValueError("empty sampling matrix")
    if g.orthonormal_shifts:
        sv = np.linalg.svd(U, compute_uv=False)
        return float(sv[-1] ** 2), float(sv[0] ** 2)
    G = gram_matrix(g, U.shape[1])
    ev = scipy.linalg.eigvalsh(U.T @ U, G)
    return float(ev[0]), float(ev[-1])
