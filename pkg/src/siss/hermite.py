"""Two-point Hermite interpolation and the piecewise quasi-interpolant over a sampling set."""

import math
from dataclasses import dataclass

import numpy as np

from ._quad import composite_rule

MIN_GAP = 1e-8


class HermiteError(ValueError):
    pass


def _check_interval(xi, eta):
    gap = np.abs(np.asarray(eta, dtype=float) - np.asarray(xi, dtype=float))
    if np.any(gap < MIN_GAP):
        raise HermiteError(f"interval endpoints too close (gap < {MIN_GAP})")


def hermite_coeff(side, k, r, xi, eta, x):
    """Cardinal function A_{side,k}(x) of the degree 2r+1 Hermite basis on [xi, eta].

    ``side`` 0 anchors at xi, 1 at eta. Vectorized over xi, eta and x.
    """
    if not 0 <= k <= r:
        raise HermiteError(f"need 0 <= k <= r, got k={k}, r={r}")
    _check_interval(xi, eta)
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    x = np.asarray(x, dtype=float)
    a, b = (xi, eta) if side == 0 else (eta, xi)
    # derivatives of g(t) = (t - b)^-(r+1) at t = a
    inv = 1.0 / (a - b)
    base = inv ** (r + 1)
    dx = x - a
    acc = np.zeros(np.broadcast(x, a, b).shape)
    for s in range(r - k + 1):
        g_s = (-1) ** s * math.factorial(r + s) / math.factorial(r) * base * inv**s
        acc = acc + g_s / math.factorial(s) * dx**s
    return (x - b) ** (r + 1) * dx**k / math.factorial(k) * acc


def hermite_interpolate(r, xi, eta, left, right, x):
    """H_{2r+1}(xi, eta, f; x) from ``left[j] = f^(j)(xi)``, ``right[j] = f^(j)(eta)``."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    if left.shape[0] != r + 1 or right.shape[0] != r + 1:
        raise HermiteError(f"need r+1 = {r + 1} derivative values per endpoint")
    out = 0.0
    for k in range(r + 1):
        out = out + hermite_coeff(0, k, r, xi, eta, x) * left[k]
        out = out + hermite_coeff(1, k, r, xi, eta, x) * right[k]
    return out


def patch_weight(i, l, X):
    """c_{i,l} = (x_{i+1} - x_i)^(2l+1) / ((2l+1) (l!)^2)."""
    pts = X.points if hasattr(X, "points") else np.asarray(X, dtype=float)
    if not 0 <= i < len(pts) - 1:
        raise IndexError(f"gap index {i} outside the window")
    if l < 0:
        raise HermiteError("l must be >= 0")
    gap = pts[i + 1] - pts[i]
    return gap ** (2 * l + 1) / ((2 * l + 1) * math.factorial(l) ** 2)


def energy_constant(k):
    """[sum_{s<k} C(k+s-1, s)]^2, the per-patch bound on int |A_{jl}|^2 / c_{i,l}."""
    return sum(math.comb(k + s - 1, s) for s in range(k)) ** 2


@dataclass(frozen=True, eq=False)
class HermitePatch:
    xi: float
    eta: float
    r: int
    left: tuple
    right: tuple

    def __call__(self, x):
        return hermite_interpolate(self.r, self.xi, self.eta, self.left, self.right, x)

    def as_polynomial(self):
        """The patch as a numpy Polynomial in the scaled variable on [xi, eta]."""
        deg = 2 * self.r + 1
        t = np.cos(np.pi * (np.arange(deg + 1) + 0.5) / (deg + 1))
        x = 0.5 * (self.xi + self.eta) + 0.5 * (self.eta - self.xi) * t
        return np.polynomial.Polynomial.fit(x, self(x), deg, domain=[self.xi, self.eta])


@dataclass(frozen=True, eq=False)
class PiecewiseHermite:
    """Piecewise Hermite interpolant H_{2k-1} on consecutive sampling intervals.

    Zero outside [nodes[0], nodes[-1]]. ``blocks`` lists the index ranges
    [nu*i, nu*i + nu] that group the intervals; the last block may be shorter.
    """

    nodes: np.ndarray
    data: np.ndarray
    k: int
    nu: int
    blocks: tuple

    @property
    def support(self):
        return float(self.nodes[0]), float(self.nodes[-1])

    @property
    def breaks(self):
        return self.nodes

    def patch(self, i):
        r = self.k - 1
        return HermitePatch(float(self.nodes[i]), float(self.nodes[i + 1]), r,
                            tuple(self.data[i]), tuple(self.data[i + 1]))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        nodes = self.nodes
        idx = np.clip(np.searchsorted(nodes, x, side="right") - 1, 0, len(nodes) - 2)
        xi, eta = nodes[idx], nodes[idx + 1]
        if self.k == 1:
            t = (x - xi) / (eta - xi)
            val = (1 - t) * self.data[idx, 0] + t * self.data[idx + 1, 0]
        else:
            r = self.k - 1
            val = np.zeros(x.shape)
            for j in range(r + 1):
                val = val + hermite_coeff(0, j, r, xi, eta, x) * self.data[idx, j]
                val = val + hermite_coeff(1, j, r, xi, eta, x) * self.data[idx + 1, j]
        inside = (x >= nodes[0]) & (x <= nodes[-1])
        return np.where(inside, val, 0.0)

    def to_csv(self, resolution=0.01):
        a, b = self.support
        xs = np.linspace(a, b, int(round((b - a) / resolution)) + 1)
        lines = ["x,value"] + [f"{float(x)!r},{float(v)!r}" for x, v in zip(xs, self(xs))]
        return "\n".join(lines) + "\n"


def quasi_interpolant(X, nu, k, samples):
    """Assemble the piecewise Hermite interpolant of order 2k-1 from sampled derivatives.

    ``samples[i, j]`` is f^(j)(x_i) for j < k.
    """
    if k < 1:
        raise HermiteError("k must be >= 1")
    if nu < 1:
        raise HermiteError("nu must be >= 1")
    pts = X.points if hasattr(X, "points") else np.asarray(X, dtype=float)
    data = np.asarray(samples, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    if data.shape[0] != len(pts) or data.shape[1] < k:
        raise HermiteError(
            f"samples must have shape ({len(pts)}, {k}); got {data.shape}"
        )
    _check_interval(pts[:-1], pts[1:])
    n_int = len(pts) - 1
    blocks = tuple((s, min(s + nu, n_int)) for s in range(0, n_int, nu))
    data = np.array(data[:, :k])
    data.setflags(write=False)
    return PiecewiseHermite(np.array(pts), data, k, nu, blocks)


def patch_energy(side, l, k, xi, eta, n=32):
    """int_xi^eta |A_{side,l}|^2 for the order 2k-1 basis, by Gauss-Legendre."""
    x, w = composite_rule(np.array([xi, eta]), n)
    return float(np.dot(w, hermite_coeff(side, l, k - 1, xi, eta, x) ** 2))
