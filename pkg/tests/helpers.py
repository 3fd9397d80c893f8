import numpy as np
from scipy.ndimage import gaussian_filter1d


def probe_coefficients(width, count, seed):
    """Coefficient columns for Bernstein probes.

    Half are i.i.d. normal (flat spectrum); the other half are a smoothed random
    envelope times (-1)^n, which pushes the energy toward the Nyquist frequency.
    """
    rng = np.random.default_rng(seed)
    white = rng.standard_normal((width, count - count // 2))
    env = gaussian_filter1d(rng.standard_normal((width, count // 2)), 3.0, axis=0)
    env *= np.hanning(width)[:, None]
    alt = ((-1.0) ** np.arange(width))[:, None] * env
    return np.hstack([white, alt])
