"""Windowed Fourier transform, covering of the modulation lattice and empirical Gabor frame ratios."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._quad import composite_rule, panel_breaks
from .constants import table_constant
from .reconstruct import Signal, finite_section_bounds
from .sampling import density_report, gap_threshold_bandlimited

QUAD_NODES = 16
QUAD_TOL = 1e-10
COVER_TOL = 1e-12


class QuadratureError(ArithmeticError):
    pass


class CoveringError(ValueError):
    pass


def _support_of(h, given):
    if given is not None:
        return float(given[0]), float(given[1])
    sup = getattr(h, "support", None)
    if sup is None:
        sup = getattr(h, "time_support", None)
    if sup is None:
        raise ValueError("a numeric support interval is required")
    return float(sup[0]), float(sup[1])


def _kinks(h):
    br = getattr(h, "breaks", None)
    if br is not None:
        return np.asarray(br, dtype=float)
    if getattr(h, "kind", None) == "bspline":
        return np.arange(h.m + 1, dtype=float)
    return np.empty(0)


def _oscillatory_rule(a, b, freq, breaks=(), n=QUAD_NODES):
    # panels narrow enough that each carries at most about one period of e^{2 pi i freq t}
    width = 1.0 / (1.0 + abs(freq))
    return composite_rule(panel_breaks(a, b, breaks, max_width=width), n)


def stft(f, g, x, y, support_f=None, support_g=None, breaks=()):
    """F_g f(x, y) = int f(t) conj(g(t - x)) e^{-2 pi i t y} dt over the overlap of supports.

    Supports default to a ``support`` (or ``time_support``) attribute.
    """
    af, bf = _support_of(f, support_f)
    ag, bg = _support_of(g, support_g)
    a, b = max(af, ag + x), min(bf, bg + x)
    if b <= a:
        return 0j
    kinks = np.concatenate([
        np.asarray(breaks, dtype=float),
        _kinks(f),
        _kinks(g) + x,
    ])

    def integral(n):
        t, w = _oscillatory_rule(a, b, y, kinks, n)
        vals = f(t) * np.conj(g(t - x)) * np.exp(-2j * math.pi * t * y)
        return complex(np.dot(w, vals))

    coarse, fine = integral(QUAD_NODES), integral(QUAD_NODES + 8)
    if abs(fine - coarse) > QUAD_TOL * max(1.0, abs(fine)):
        raise QuadratureError(f"STFT quadrature did not settle (change {abs(fine - coarse):.2e})")
    return fine


def stft_spectral(fhat, ghat, x, y, band, breaks=()):
    """F_g f(x, y) = int fhat(xi) conj(ghat(xi - y)) e^{2 pi i (xi - y) x} d xi.

    ``band`` bounds the overlap of the two spectra; vectorized over ``x``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    a, b = band
    if b <= a:
        return np.zeros(x.shape, dtype=complex)
    reach = float(np.max(np.abs(x))) if len(x) else 0.0

    def integral(n):
        xi, w = _oscillatory_rule(a, b, reach, breaks, n)
        amp = w * fhat(xi) * np.conj(ghat(xi - y))
        return np.exp(2j * math.pi * np.outer(x, xi - y)) @ amp

    coarse, fine = integral(QUAD_NODES), integral(QUAD_NODES + 8)
    err = np.max(np.abs(fine - coarse))
    if err > QUAD_TOL * max(1.0, float(np.max(np.abs(fine)))):
        raise QuadratureError(f"spectral STFT quadrature did not settle (change {err:.2e})")
    return fine


def boxcar(width=1.0, center=0.0):
    """Half-open indicator of [center - width/2, center + width/2)."""
    lo, hi = center - width / 2, center + width / 2

    def ghat(w):
        w = np.asarray(w, dtype=float)
        return ((w >= lo) & (w < hi)).astype(float)

    ghat.support = (lo, hi)
    return ghat


@dataclass(frozen=True)
class CoverReport:
    a: float
    b: float
    covered: bool


def window_cover(ghat, Y, grid=4096, support=None, band=None):
    """(min, max) over a frequency grid of sum_j |ghat(xi - y_j)|^2.

    ``Y`` is either an array of nodes or a lattice ``{"step": s, "offset": o}``;
    a lattice is evaluated over one period, keeping every node whose shifted
    window reaches the grid. ``support`` bounds where |ghat| is nonzero and
    defaults to ``ghat.support``.
    """
    support = support if support is not None else getattr(ghat, "support", None)
    if support is None:
        raise ValueError("window_cover needs the spectral support of ghat")
    lo, hi = support
    if isinstance(Y, dict):
        step, offset = float(Y["step"]), float(Y.get("offset", 0.0))
        if step <= 0:
            raise ValueError("lattice step must be positive")
        xi = offset + step * np.arange(grid) / grid
        j = np.arange(math.floor((xi[0] - hi - offset) / step) - 1,
                      math.ceil((xi[-1] - lo - offset) / step) + 2)
        nodes = offset + step * j
    else:
        nodes = np.sort(np.asarray(Y, dtype=float))
        if band is None:
            band = (nodes[0], nodes[-1])
        xi = np.linspace(band[0], band[1], grid, endpoint=False)
    total = np.zeros(xi.shape)
    for y in nodes:
        total += np.abs(ghat(xi - y)) ** 2
    a, b = float(total.min()), float(total.max())
    return CoverReport(a, b, a > COVER_TOL)


@dataclass(frozen=True, eq=False)
class TimeFrequencyGrid:
    """Modulation nodes y_j with one sampling set per node."""

    y: np.ndarray
    rows: tuple

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.ndim != 1 or len(y) != len(self.rows):
            raise ValueError("one sampling set per modulation node is required")
        if len(y) > 1 and np.any(np.diff(y) <= 0):
            raise ValueError("modulation nodes must be strictly increasing")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "rows", tuple(self.rows))

    def densities(self, nu=1):
        return [density_report(X, nus=(nu,)) for X in self.rows]

    def compliance(self, nu, k, sigma=math.pi):
        """Worst-row delta_nu against the bandlimited threshold (nu/sigma) c_k^(1/2k)."""
        reps = self.densities(nu)
        worst = max(r.delta[nu] for r in reps)
        limit = gap_threshold_bandlimited(nu, k, table_constant(k).value, sigma)
        return {"nu": nu, "k": k, "worst_delta": worst, "threshold": limit,
                "compliant": worst < limit}


def modulated_spectrum(h, y0):
    """Fourier transform of e^{2 pi i y0 t} h(t) for a sinc Signal h."""
    n = np.arange(h.n0, h.n1 + 1)

    def fhat(xi):
        eta = np.asarray(xi, dtype=float) - y0
        inside = (np.abs(eta) <= 0.5).astype(float)
        return inside * (np.exp(-2j * math.pi * np.outer(eta, n)) @ h.coeffs)

    return fhat


def gabor_test_signals(g, window, y_nodes, count=20, seed=0):
    """Pairs (y0, h): h in V(phi) on ``window`` with normal coefficients, y0 drawn from ``y_nodes``."""
    rng = np.random.default_rng(seed)
    n0, n1 = window
    out = []
    for _ in range(count):
        h = Signal(g, n0, rng.standard_normal(n1 - n0 + 1))
        out.append((float(rng.choice(np.asarray(y_nodes))), h))
    return out


@dataclass
class FrameReport:
    a: float
    b: float
    A_rows: list
    B_rows: list
    ratios: list = field(default_factory=list)
    compliance: dict = field(default_factory=dict)

    @property
    def lower(self):
        return min(self.ratios)

    @property
    def upper(self):
        return max(self.ratios)

    @property
    def sandwich(self):
        return self.a * min(self.A_rows), self.b * max(self.B_rows)

    def as_dict(self):
        lo, hi = self.sandwich
        return {"a_est": self.a, "b_est": self.b, "A_rows": self.A_rows, "B_rows": self.B_rows,
                "ratio_lower": self.lower, "ratio_upper": self.upper,
                "sandwich": [lo, hi], "compliance": self.compliance}


def gabor_frame_ratio(g, grid, k, signals, window, nu=1, warn=True):
    """Empirical sum_{i,j,l} |F_{g^(l)} f(x_ij, y_j)|^2 / ||f||^2 over test signals.

    ``g`` is the sinc window (boxcar spectrum on [-1/2, 1/2)); each test signal is
    a pair (y0, h) meaning f = e^{2 pi i y0 t} h(t). The window derivatives enter
    through their spectra (2 pi i eta)^l ghat(eta).
    """
    if g.kind != "sinc":
        raise ValueError("frame ratios are implemented for the sinc window only")
    ghat = boxcar(1.0)
    cover = window_cover(ghat, grid.y, band=(grid.y[0] - 0.5, grid.y[-1] + 0.5))
    if not cover.covered:
        raise CoveringError("the modulation nodes leave frequencies uncovered")
    comp = grid.compliance(nu, k, sigma=g.bandwidth)
    if not comp["compliant"]:
        msg = f"row density {comp['worst_delta']:.4g} exceeds {comp['threshold']:.4g}"
        if not warn:
            raise ValueError(msg)
        warnings.warn(msg + "; proceeding")
    bounds = [finite_section_bounds(g, X, k, window) for X in grid.rows]
    report = FrameReport(cover.a, cover.b, [b[0] for b in bounds], [b[1] for b in bounds],
                         compliance=comp)
    for y0, h in signals:
        fhat = modulated_spectrum(h, y0)
        energy = 0.0
        for y, X in zip(grid.y, grid.rows):
            lo, hi = max(y0 - 0.5, y - 0.5), min(y0 + 0.5, y + 0.5)
            if hi <= lo:
                continue
            for l in range(k):
                gl = lambda eta, l=l: (2j * math.pi * eta) ** l * ghat(eta)
                vals = stft_spectral(fhat, gl, X.points, y, (lo, hi))
                energy += float(np.sum(np.abs(vals) ** 2))
        report.ratios.append(energy / h.norm() ** 2)
    return report
