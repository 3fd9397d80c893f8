"""Lattice-sum spectral quantities of V(phi): Gram symbol, Riesz bounds, Bernstein constants."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from .constants import krein_favard
from .generators import fourier_mag

DEFAULT_GRID = 4096


class NonRieszError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralProfile:
    kind: str
    L: int
    N: int
    tail_bound: float


SPLINE_DIRECT_TERMS = 8


def lattice_truncation(g, s=0):
    """Number L of directly summed lattice terms, with a bound on what is left out.

    Compact spectra need no tail. For B-splines |Q_m^(w+l)|^2 = sin^2m(pi w) / (pi (w+l))^2m,
    so the tails beyond L are Hurwitz zeta values and are added exactly.
    Returns (L, bound).
    """
    fs = g.freq_support
    if fs is not None:
        return int(math.ceil(fs[1])) + 1, 0.0
    if 2 * g.m - 2 * s <= 1:
        raise ValueError(f"lattice sum diverges for s={s} with B-spline order {g.m}")
    return SPLINE_DIRECT_TERMS, 0.0


def _spline_tail(m, p, w, L):
    """sum over |l| > L of sin^2m(pi w) / pi^2m * |w + l|^-p."""
    amp = (np.sin(math.pi * w) / math.pi) ** (2 * m)
    return amp * (zeta(p, w + L + 1) + zeta(p, L + 1 - w))


def _lattice_sums(g, s, w, L):
    w = np.mod(np.asarray(w, dtype=float), 1.0)
    ls = np.arange(-L, L + 1, dtype=float)
    out_g = np.empty(w.shape)
    out_b = np.empty(w.shape)
    flat_w = w.ravel()
    chunk = max(1, 2_000_000 // len(ls))
    gs, bs = out_g.ravel(), out_b.ravel()
    for i in range(0, len(flat_w), chunk):
        wl = flat_w[i : i + chunk, None] + ls[None, :]
        mag2 = fourier_mag(g, wl) ** 2
        gs[i : i + chunk] = mag2.sum(axis=1)
        if s:
            bs[i : i + chunk] = (wl ** (2 * s) * mag2).sum(axis=1)
    if g.freq_support is None:
        out_g += _spline_tail(g.m, 2 * g.m, w, L)
        if s:
            out_b += _spline_tail(g.m, 2 * g.m - 2 * s, w, L)
    return out_g, out_b


def gram_symbol(g, w, L=None):
    """G_phi(w) = sum_n |phihat(w + n)|^2."""
    if L is None:
        L, _ = lattice_truncation(g, 0)
    return _lattice_sums(g, 0, w, L)[0]


def _refine(fun, grid, vals, idx, maximize):
    """Bounded Brent/golden-section search in the cells around grid index ``idx``."""
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, len(grid) - 1)]
    sign = -1.0 if maximize else 1.0
    res = minimize_scalar(lambda t: sign * fun(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    cand = sign * res.fun
    best = vals[idx]
    return max(best, cand) if maximize else min(best, cand)


def riesz_bounds(g, N=DEFAULT_GRID, L=None):
    """Optimal Riesz bounds (ess inf, ess sup of G_phi over [0, 1])."""
    if N < 64:
        raise ValueError("grid needs at least 64 points")
    if g.orthonormal_shifts:
        return 1.0, 1.0
    if L is None:
        L, _ = lattice_truncation(g, 0)
    grid = np.linspace(0.0, 1.0, N + 1)
    vals = gram_symbol(g, grid, L)

    def G(t):
        return float(gram_symbol(g, np.array([t]), L)[0])

    lower = _refine(G, grid, vals, int(np.argmin(vals)), maximize=False)
    upper = _refine(G, grid, vals, int(np.argmax(vals)), maximize=True)
    if lower <= 0:
        raise NonRieszError(f"{g.kind}: Gram symbol vanishes, shifts are not a Riesz basis")
    return lower, upper


def bernstein_symbol(g, s, w, L=None):
    """B_s(w): weighted over unweighted lattice sum of |phihat|^2, period 1."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if L is None:
        L, _ = lattice_truncation(g, s)
    G, W = _lattice_sums(g, s, w, L)
    if np.any(G < 1e-12):
        raise NonRieszError("Gram symbol below 1e-12; generator is not a Riesz generator")
    out = W / G
    return out if out.ndim else float(out)


def bernstein_constant(g, s, N=DEFAULT_GRID, L=None, top=3):
    """M_s = ess sup of B_s over [0, 1]: grid maximum refined near the top cells."""
    if L is None:
        L, _ = lattice_truncation(g, s)
    grid = np.linspace(0.0, 1.0, N + 1)
    vals = bernstein_symbol(g, s, grid, L)

    def B(t):
        return float(bernstein_symbol(g, s, np.array([t]), L)[0])

    best = float(vals.max())
    for idx in np.argsort(vals)[::-1][:top]:
        best = max(best, _refine(B, grid, vals, int(idx), maximize=True))
    floor = 4.0 ** (-s)
    if best < floor - 1e-10:
        raise ArithmeticError(f"M_{s} estimate {best} fell below the lower bound 4^-{s}")
    return best


def bernstein_constant_closed(kind, s, m=None):
    """Closed-form M_s where one is known.

    sinc: 4^-s.  B-spline Q_m: K_{2(m-s)-1} / (4^s K_{2m-1}) for s <= m-1.
    Meyer: s = 1, 2 only.
    """
    if hasattr(kind, "kind"):
        kind, m = kind.kind, kind.m if m is None else m
    if s < 1:
        raise ValueError("s must be >= 1")
    if kind == "sinc":
        return 4.0 ** (-s)
    if kind == "meyer":
        if s > 2:
            raise ValueError(f"no closed form for the Meyer M_{s} (only s = 1, 2 are known)")
        return 0.25 if s == 1 else 1.0 / 16.0
    if kind == "bspline":
        if m is None or m < s + 1:
            raise ValueError(f"closed form needs m >= s+1 (m={m}, s={s})")
        num = krein_favard(2 * (m - s) - 1, tol=1e-15).value
        den = krein_favard(2 * m - 1, tol=1e-15).value
        return num / (4.0**s * den)
    raise ValueError(f"unknown generator kind {kind!r}")


def spectral_profile(g, s=0, N=DEFAULT_GRID):
    L, tail = lattice_truncation(g, s)
    return SpectralProfile(g.kind, L, N, tail)
