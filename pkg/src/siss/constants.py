"""Wirtinger-Sobolev constants c_r and Krein-Favard constants K_m."""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.linalg

# Published values, kept with their printed precision.
WIRTINGER_TABLE = {1: math.pi**2, 2: 500.5467, 3: 61529.0}

METHODS = ("exact-table", "bound-lower", "bound-upper", "numeric-bvp")


class ConstantError(ValueError):
    pass


@dataclass(frozen=True)
class WirtingerConstant:
    r: int
    value: float
    method: str
    uncertainty: float = 0.0


@dataclass(frozen=True)
class KreinFavard:
    m: int
    value: float
    terms_used: int
    remainder_bound: float


def _log_central_factor(r):
    # log[(4r)! (r!)^2 / ((2r)!)^2]
    return math.lgamma(4 * r + 1) + 2 * math.lgamma(r + 1) - 2 * math.lgamma(2 * r + 1)


def wirtinger_log_bounds(r):
    """Natural logs of the lower and upper bounds on c_r (safe for any r)."""
    core = _log_central_factor(r)
    lower = math.log((4 * r - 2) / (4 * r * r - r)) + core
    upper = math.log((4 * r + 1) / (2 * r + 1)) + core
    return lower, upper


def wirtinger_constant(r, method="exact-table"):
    if int(r) != r or r < 1:
        raise ConstantError(f"order r must be an integer >= 1, got {r!r}")
    r = int(r)
    if method == "exact-table":
        if r not in WIRTINGER_TABLE:
            raise ConstantError(f"no tabulated c_r for r={r} (only 1, 2, 3)")
        return WirtingerConstant(r, WIRTINGER_TABLE[r], method)
    if method in ("bound-lower", "bound-upper"):
        lo, up = wirtinger_log_bounds(r)
        log_val = lo if method == "bound-lower" else up
        if log_val > math.log(np.finfo(float).max):
            raise ConstantError(f"c_{r} bound overflows double precision (log = {log_val:.1f})")
        half_width = 0.5 * (math.exp(up) - math.exp(lo))
        return WirtingerConstant(r, math.exp(log_val), method, half_width)
    if method == "numeric-bvp":
        value, err = clamped_eigenvalue(r)
        return WirtingerConstant(r, value, method, err)
    raise ConstantError(f"unknown method {method!r}; expected one of {METHODS}")


def table_constant(k):
    """c_k under the table policy: tabulated for k <= 3, lower bound beyond."""
    return wirtinger_constant(k, "exact-table" if k <= 3 else "bound-lower")


# --- boundary value problem -----------------------------------------------


def _fd_weights(offsets, d):
    """Exact weights of the d-th derivative at 0 on integer ``offsets``."""
    offs = [Fraction(o) for o in offsets]
    weights = []
    for j, xj in enumerate(offs):
        poly = [Fraction(1)]
        den = Fraction(1)
        for k, xk in enumerate(offs):
            if k == j:
                continue
            poly = [Fraction(0)] + poly
            for t in range(len(poly) - 1):
                poly[t] -= xk * poly[t + 1]
            den *= xj - xk
        weights.append(poly[d] * math.factorial(d) / den)
    return weights


def _solve_fraction(A, b):
    n = len(A)
    M = [row[:] + [bi] for row, bi in zip(A, b)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[p] = M[p], M[c]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


@lru_cache(maxsize=None)
def _ghost_weights(r, n_ghost, n_fit):
    """Weights expressing u(-j h), j = 1..n_ghost, through u(h)..u(n_fit h).

    The extrapolant is x^r q(x) with deg q = n_fit - 1, so it honours
    u(0) = ... = u^(r-1)(0) = 0 exactly.
    """
    V = [[Fraction(i) ** (r + a) for a in range(n_fit)] for i in range(1, n_fit + 1)]
    VT = [list(col) for col in zip(*V)]
    rows = []
    for j in range(1, n_ghost + 1):
        target = [Fraction(-j) ** (r + a) for a in range(n_fit)]
        rows.append([float(x) for x in _solve_fraction(VT, target)])
    return rows


def clamped_operator(r, n):
    """Finite-difference matrix of (-1)^r d^{2r}/dx^{2r} on [0, 1] with clamped ends.

    Unknowns are u(ih) for i = 1..n-1. Ghost values beyond each end come from a
    polynomial extrapolant that vanishes to order r at the boundary.
    """
    h = 1.0 / n
    offsets = list(range(-r, r + 1))
    w = [float(x) for x in _fd_weights(offsets, 2 * r)]
    n_fit = r + 4
    if n - 1 < n_fit:
        raise ConstantError(f"grid n={n} too coarse for r={r}")
    ghost = _ghost_weights(r, r, n_fit)
    size = n - 1
    A = np.zeros((size, size))
    for i in range(1, n):
        for o, wt in zip(offsets, w):
            j = i + o
            if 1 <= j <= n - 1:
                A[i - 1, j - 1] += wt
            elif j < 0:
                A[i - 1, :n_fit] += wt * np.asarray(ghost[-j - 1])
            elif j > n:
                A[i - 1, size - n_fit :] += wt * np.asarray(ghost[j - n - 1])[::-1]
    return (-1) ** r * A / h ** (2 * r)


def _smallest_eigenvalue(A, tol=1e-14, maxiter=500):
    """Inverse iteration with zero shift, refined by a Rayleigh-quotient shift."""
    lu = scipy.linalg.lu_factor(A)
    v = np.ones(A.shape[0]) / math.sqrt(A.shape[0])
    lam = 0.0
    for _ in range(maxiter):
        w = scipy.linalg.lu_solve(lu, v)
        new_lam = 1.0 / np.dot(v, w) if np.dot(v, w) != 0 else math.inf
        v = w / np.linalg.norm(w)
        if abs(new_lam - lam) <= tol * abs(new_lam):
            lam = new_lam
            break
        lam = new_lam
    shifted = scipy.linalg.lu_factor(A - lam * np.eye(A.shape[0]))
    for _ in range(3):
        try:
            w = scipy.linalg.lu_solve(shifted, v)
        except (ValueError, np.linalg.LinAlgError):
            break
        if not np.all(np.isfinite(w)):
            break
        v = w / np.linalg.norm(w)
    Av = A @ v
    return float(np.dot(v, Av) / np.dot(v, v))


def _richardson(values, p0=2, step=2):
    """Extrapolate a sequence computed on grids halving h; returns (value, error estimate)."""
    table = [list(values)]
    p = p0
    while len(table[-1]) > 1:
        prev = table[-1]
        f = 2.0**p
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1) for i in range(len(prev) - 1)])
        p += step
    best = table[-1][0]
    err = abs(best - table[-2][-1]) if len(table) > 1 else math.inf
    return best, err


@lru_cache(maxsize=None)
def clamped_eigenvalue(r, base=16, levels=4):
    """Minimal eigenvalue of (-1)^r u^(2r) = lambda u with u^(k)(0) = u^(k)(1) = 0, k < r.

    Second-order central differences on grids n = base * 2^j, extrapolated in h^2.
    """
    vals = [_smallest_eigenvalue(clamped_operator(r, base * 2**j)) for j in range(levels)]
    return _richardson(vals)


# --- Krein-Favard -----------------------------------------------------------


def _term_derivs(s, x, count):
    """Derivatives 0..count-1 of f(x) = (2x + 1)^(-s)."""
    out = []
    coef = 1.0
    for j in range(count):
        out.append(coef * (2 * x + 1) ** (-s - j))
        coef *= -2.0 * (s + j)
    return out


# Euler-Maclaurin: B_{2j} / (2j)!
_EM = [1 / 12, -1 / 720, 1 / 30240, -1 / 1209600, 1 / 47900160, -691 / 1307674368000]
# Boole summation: sum_{n>=0} (-1)^n f(n) = f/2 - f'/4 + f'''/48 - ...
_BOOLE = [(0, 1 / 2), (1, -1 / 4), (3, 1 / 48), (5, -1 / 480), (7, 17 / 80640), (9, -31 / 1451520)]


def krein_favard(m, tol=1e-12, terms=64):
    """K_m = (4/pi) sum_v (-1)^(v(m+1)) / (2v+1)^(m+1).

    ``terms`` leading terms are summed directly; the tail is summed in closed form
    by Euler-Maclaurin (m odd) or Boole (m even) corrections, and the first omitted
    correction bounds the remainder.
    """
    if int(m) != m or m < 0:
        raise ConstantError(f"m must be a nonnegative integer, got {m!r}")
    if tol <= 0:
        raise ConstantError("tol must be positive")
    s = int(m) + 1
    alternating = s % 2 == 1
    while True:
        v = np.arange(terms, dtype=float)
        signs = (-1.0) ** v if alternating else np.ones_like(v)
        head = math.fsum(signs / (2 * v + 1) ** s)
        N = float(terms)
        d = _term_derivs(s, N, 12)
        if alternating:
            sign = (-1.0) ** terms
            parts = [c * d[k] for k, c in _BOOLE]
            tail = sign * math.fsum(parts[:-1])
            bound = abs(parts[-1])
        else:
            integral = (2 * N + 1) ** (1 - s) / (2 * (s - 1))
            parts = [0.5 * d[0]] + [-c * d[2 * j + 1] for j, c in enumerate(_EM)]
            tail = integral + math.fsum(parts[:-1])
            bound = abs(parts[-1])
        bound *= 4 / math.pi
        if bound < tol or terms > 1 << 20:
            break
        terms *= 2
    return KreinFavard(int(m), 4 / math.pi * (head + tail), terms, bound)
