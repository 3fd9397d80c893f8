"""Composite Gauss-Legendre rules shared by the inner-product code."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_rule(breaks, n=16):
    """Nodes and weights of an ``n``-point Gauss rule on every panel of ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    a, b = breaks[:-1], breaks[1:]
    t, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def panel_breaks(a, b, extra=(), max_width=1.0):
    """Panel edges covering [a, b]: the integers, any ``extra`` kinks, then
    subdivision so that no panel is wider than ``max_width``."""
    pts = np.arange(np.ceil(a), np.floor(b) + 1.0)
    extra = np.asarray(extra, dtype=float)
    pts = np.concatenate([[a, b], pts, extra[(extra > a) & (extra < b)]])
    pts = np.unique(pts)
    widths = np.diff(pts)
    pieces = np.maximum(1, np.ceil(widths / max_width - 1e-12)).astype(int)
    if np.all(pieces == 1):
        return pts
    out = [pts[:1]]
    for left, width, p in zip(pts[:-1], widths, pieces):
        out.append(left + width * np.arange(1, p + 1) / p)
    return np.concatenate(out)


def integrate(f, breaks, n=16):
    x, w = composite_rule(breaks, n)
    return np.dot(w, f(x))
