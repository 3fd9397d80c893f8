"""Sampling sets, their separation and nu-densities, and gap thresholds."""

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

PATTERNS = ("uniform", "kadec_quarter", "chebyshev", "jittered", "periodic")


class SamplingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SamplingSet:
    """A finite, strictly increasing window of a bi-infinite sampling set.

    When ``period`` and ``base`` are set the full set is ``base + n * period``
    and densities are computed exactly over one period.
    """

    points: np.ndarray
    window: tuple
    period: Optional[float] = None
    base: Optional[tuple] = None
    pattern: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or len(pts) < 2:
            raise SamplingError("a sampling set needs at least two points")
        if np.any(np.diff(pts) <= 0):
            raise SamplingError("sampling points must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.base is not None:
            base = tuple(float(b) for b in self.base)
            if self.period is None or self.period <= base[-1] - base[0]:
                raise SamplingError("period must exceed the span of the base pattern")
            object.__setattr__(self, "base", base)

    def __len__(self):
        return len(self.points)

    @property
    def gaps(self):
        return np.diff(self.points)

    @property
    def is_periodic(self):
        return self.base is not None

    def to_json(self):
        return json.dumps({"pattern": self.pattern, "params": self.params,
                           "window": list(self.window)})

    def to_text(self):
        return "\n".join(repr(float(x)) for x in self.points) + "\n"


@dataclass
class DensityReport:
    gamma: float
    delta: dict
    chain_ok: dict
    window_only: bool
    thresholds: dict = field(default_factory=dict)
    margins: dict = field(default_factory=dict)

    def as_dict(self):
        key = lambda d: {str(k): v for k, v in d.items()}
        return {
            "gamma": self.gamma,
            "delta": key(self.delta),
            "chain_ok": key(self.chain_ok),
            "window_only": self.window_only,
            "thresholds": key(self.thresholds),
            "margins": key(self.margins),
        }


def _periodic_points(base, period, lo, hi):
    base = np.asarray(base, dtype=float)
    n_lo = math.floor((lo - base[-1]) / period)
    n_hi = math.ceil((hi - base[0]) / period)
    pts = (base[None, :] + period * np.arange(n_lo, n_hi + 1)[:, None]).ravel()
    return pts[(pts >= lo - 1e-12) & (pts <= hi + 1e-12)]


def make_sampling_set(pattern, window, **params):
    """Build a sampling set restricted to ``window = (lo, hi)``.

    Patterns: uniform(h, offset=0), kadec_quarter(), chebyshev(n=4, period=3,
    interval=(0, 3)), jittered(h, amplitude, seed), periodic(base, period).
    """
    lo, hi = (float(window[0]), float(window[1]))
    if hi <= lo:
        raise SamplingError("window must have positive length")
    if pattern == "uniform":
        h = float(params.get("h", 1.0))
        off = float(params.get("offset", 0.0))
        return SamplingSet(_periodic_points([off], h, lo, hi), (lo, hi), h, (off,),
                           pattern, {"h": h, "offset": off})
    if pattern == "periodic":
        base = sorted(float(b) for b in params["base"])
        period = float(params["period"])
        if period <= base[-1] - base[0]:
            raise SamplingError("period must exceed the span of the base pattern")
        return SamplingSet(_periodic_points(base, period, lo, hi), (lo, hi), period,
                           tuple(base), pattern, {"base": base, "period": period})
    if pattern == "chebyshev":
        n = int(params.get("n", 4))
        period = float(params.get("period", 3.0))
        a, b = params.get("interval", (0.0, 3.0))
        i = np.arange(n)
        base = np.sort((b - a) / 2 * np.cos((2 * i + 1) * math.pi / (2 * n)) + (b + a) / 2)
        if period <= base[-1] - base[0]:
            raise SamplingError(
                f"Chebyshev period {period} is smaller than the base-point span "
                f"{base[-1] - base[0]:.4f}"
            )
        return SamplingSet(_periodic_points(base, period, lo, hi), (lo, hi), period,
                           tuple(base), pattern,
                           {"n": n, "period": period, "interval": [a, b]})
    if pattern == "kadec_quarter":
        i = np.arange(math.floor(lo) - 1, math.ceil(hi) + 2)
        x = np.where(i > 0, i - 0.25, np.where(i < 0, i + 0.25, 0.0))
        x = x[(x >= lo) & (x <= hi)]
        return SamplingSet(x, (lo, hi), pattern=pattern)
    if pattern == "jittered":
        h = float(params["h"])
        amp = float(params["amplitude"])
        if amp >= h / 2:
            raise SamplingError("jitter amplitude must stay below h/2 to keep the order")
        seed = int(params.get("seed", 0))
        rng = np.random.default_rng(seed)
        grid = np.arange(math.ceil(lo / h), math.floor(hi / h) + 1) * h
        x = grid + rng.uniform(-amp, amp, size=grid.shape)
        x = x[(x >= lo) & (x <= hi)]
        return SamplingSet(x, (lo, hi), pattern=pattern,
                           params={"h": h, "amplitude": amp, "seed": seed})
    raise SamplingError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")


def sampling_set_from_json(data):
    if isinstance(data, str):
        data = json.loads(data)
    return make_sampling_set(data["pattern"], data["window"], **data.get("params", {}))


def sampling_set_from_text(text, window=None):
    pts = np.array([float(tok) for tok in text.split()])
    if window is None:
        window = (float(pts[0]), float(pts[-1]))
    return SamplingSet(pts, tuple(window))


def _exact_points(X, span):
    """Enough consecutive points of a periodic set to see every nu-window."""
    reps = span // len(X.base) + 2
    return _periodic_points(X.base, X.period, X.base[0], X.base[0] + reps * X.period)


def density_report(X, nus=(1,), thresholds=None):
    """Separation gamma and delta_nu = sup_i (x_{i+nu} - x_i).

    Exact for periodic sets; otherwise statistics of the window (``window_only``).
    ``thresholds`` maps nu to a gap threshold; margins are threshold - delta_nu.
    """
    nus = sorted(set(int(n) for n in nus))
    if nus[0] < 1:
        raise SamplingError("nu must be a positive integer")
    nu_max = nus[-1]
    if X.is_periodic:
        pts = _exact_points(X, nu_max)
        n_start = len(X.base)
    else:
        pts = X.points
        n_start = None
    if len(pts) < nu_max + 1:
        raise SamplingError(f"window holds {len(pts)} points, need {nu_max + 1} for nu={nu_max}")
    gaps = np.diff(pts)
    gamma = float(gaps.min())
    delta, chain = {}, {}
    for nu in nus:
        spans = pts[nu:] - pts[:-nu]
        if n_start is not None:
            spans = spans[:n_start]
        d = float(spans.max())
        delta[nu] = d
        chain[nu] = bool(np.all(gaps <= d - (nu - 1) * gamma + 1e-12))
    rep = DensityReport(gamma, delta, chain, window_only=not X.is_periodic)
    if thresholds:
        for nu in nus:
            if nu in thresholds:
                rep.thresholds[nu] = float(thresholds[nu])
                rep.margins[nu] = float(thresholds[nu]) - delta[nu]
    return rep


def gap_threshold(nu, k, c_k, M_2k):
    """Largest admissible delta_nu: (nu / 2pi) (c_k^2 / M_2k)^(1/4k)."""
    if min(nu, k, c_k, M_2k) <= 0:
        raise SamplingError("all threshold inputs must be positive")
    return nu / (2 * math.pi) * (c_k**2 / M_2k) ** (1.0 / (4 * k))


def gap_threshold_bandlimited(nu, k, c_k, sigma=math.pi):
    """Same threshold for sigma-bandlimited functions: (nu / sigma) c_k^(1/2k)."""
    if min(nu, k, c_k, sigma) <= 0:
        raise SamplingError("all threshold inputs must be positive")
    return nu / sigma * c_k ** (1.0 / (2 * k))
