import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given
from hypothesis import strategies as st

from siss.generators import (GeneratorError, bspline, eval_deriv, fourier_mag, from_descriptor,
                             make_generator, verify_admissibility)


def truncated_power_bspline(m, x):
    """Q_m(x) = 1/(m-1)! sum_j (-1)^j C(m, j) (x - j)_+^(m-1)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for j in range(m + 1):
        t = x - j
        out += (-1) ** j * math.comb(m, j) * np.where(t >= 0, np.abs(t) ** (m - 1), 0.0)
    out = out / math.factorial(m - 1)
    return np.where((x >= 0) & (x < m), out, 0.0)


def meyer_by_quad(g, x, s=0):
    f = lambda w: (2 * math.pi * w) ** s * fourier_mag(g, w) * math.cos(2 * math.pi * w * x + s * math.pi / 2)
    parts = [(0, 1 / 3), (1 / 3, 0.5), (0.5, 2 / 3)]
    return 2 * sum(scipy.integrate.quad(f, a, b, limit=400, epsabs=1e-13)[0] for a, b in parts)


def test_metadata():
    q2 = make_generator("bspline", 2)
    assert q2.time_support == (0.0, 2.0)
    assert q2.smoothness == 0
    s = make_generator("sinc")
    assert s.freq_support == (-0.5, 0.5) and s.orthonormal_shifts
    m = make_generator("meyer")
    assert m.freq_support == (-2 / 3, 2 / 3) and m.orthonormal_shifts


def test_point_values(sinc):
    q2 = make_generator("bspline", 2)
    assert sinc(0.0) == pytest.approx(1.0, abs=1e-15)
    assert q2(1.0) == pytest.approx(1.0, abs=1e-15)
    assert eval_deriv(q2, 1, 0.5) == pytest.approx(1.0, abs=1e-15)


def test_fourier_magnitudes(sinc, meyer):
    assert fourier_mag(sinc, 0.25) == 1.0
    assert fourier_mag(sinc, 0.75) == 0.0
    assert fourier_mag(make_generator("bspline", 2), 0.5) == pytest.approx((2 / math.pi) ** 2, abs=1e-12)
    assert fourier_mag(meyer, 0.5) == pytest.approx(math.sqrt(2) / 2, abs=1e-12)
    assert fourier_mag(meyer, np.linspace(-1 / 3, 1 / 3, 11)) == pytest.approx(np.ones(11))


@pytest.mark.parametrize("bad", [0, -1, 2.5])
def test_bad_order(bad):
    with pytest.raises(GeneratorError):
        make_generator("bspline", bad)


def test_bad_profile_rejected():
    with pytest.raises(GeneratorError, match="nu\\(x\\)\\+nu\\(1-x\\)"):
        make_generator("meyer", profile=lambda x: np.asarray(x) ** 2)
    with pytest.raises(GeneratorError):
        make_generator("meyer", profile=[0.5, 0.5])


def test_derivative_order_checked():
    with pytest.raises(GeneratorError):
        eval_deriv(make_generator("bspline", 2), 2, 0.5)
    with pytest.raises(GeneratorError):
        eval_deriv(make_generator("sinc"), -1, 0.5)


def test_descriptor_roundtrip(meyer):
    for g in (make_generator("sinc"), make_generator("bspline", 5), meyer,
              make_generator("meyer", profile=[0, 0, 3, -2])):
        assert from_descriptor(g.descriptor()) == g


@given(st.integers(1, 8), st.floats(0, 1))
def test_partition_of_unity(m, t):
    x = 3 * m * t
    n = np.arange(math.floor(x) - m - 1, math.ceil(x) + 2)
    assert bspline(m, x - n).sum() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("m", range(1, 9))
def test_bspline_matches_truncated_powers(m):
    x = np.linspace(-0.5, m + 0.5, 401)
    assert np.max(np.abs(bspline(m, x) - truncated_power_bspline(m, x))) < 1e-10


@pytest.mark.parametrize("m", range(2, 8))
def test_derivative_identity(m):
    g = make_generator("bspline", m)
    x = np.linspace(-1, m + 1, 503)
    expected = bspline(m - 1, x) - bspline(m - 1, x - 1)
    assert np.max(np.abs(eval_deriv(g, 1, x) - expected)) < 1e-12


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_bspline_fourier_consistency(m):
    g = make_generator("bspline", m)
    for w in np.linspace(-3.1, 3.1, 20):
        re = sum(scipy.integrate.quad(lambda x: g(x) * math.cos(2 * math.pi * w * x), j, j + 1,
                                      epsabs=1e-14)[0] for j in range(m))
        im = sum(scipy.integrate.quad(lambda x: -g(x) * math.sin(2 * math.pi * w * x), j, j + 1,
                                      epsabs=1e-14)[0] for j in range(m))
        assert abs(complex(re, im) - g.spectrum(w)) < 1e-8
        assert abs(abs(complex(re, im)) - fourier_mag(g, w)) < 1e-8


def test_sinc_derivatives_against_closed_forms(sinc):
    # both sides of the switch between the power series and the Leibniz form
    x = np.concatenate([np.linspace(-3, 3, 601), [1 / math.pi, -1 / math.pi, 1e-7]])
    x = x[x != 0]
    u = math.pi * x
    d1 = (u * np.cos(u) - np.sin(u)) / (math.pi * x**2)
    d2 = math.pi**2 * ((2 - u**2) * np.sin(u) - 2 * u * np.cos(u)) / u**3
    assert np.max(np.abs(eval_deriv(sinc, 1, x) - d1)) < 1e-7
    assert np.max(np.abs(eval_deriv(sinc, 2, x[np.abs(u) > 0.1]) - d2[np.abs(u) > 0.1])) < 1e-9
    assert eval_deriv(sinc, 2, 0.0) == pytest.approx(-math.pi**2 / 3, rel=1e-14)
    assert eval_deriv(sinc, 1, 0.5) == pytest.approx(-4 / math.pi, rel=1e-14)


@pytest.mark.parametrize("s", [0, 1, 2])
def test_meyer_inversion_against_quad(meyer, s):
    for x in (0.0, 0.3, 1.7, -4.2, 9.5):
        assert abs(eval_deriv(meyer, s, x) - meyer_by_quad(meyer, x, s)) < 1e-9


def test_meyer_profile_symmetry(meyer):
    w = np.linspace(1 / 3, 2 / 3, 1001)
    assert np.max(np.abs(fourier_mag(meyer, w) ** 2 + fourier_mag(meyer, 1 - w) ** 2 - 1)) < 1e-10


def test_meyer_shifts_orthonormal(meyer):
    x = np.linspace(-40, 40, 80 * 16 + 1)
    w = np.full_like(x, x[1] - x[0])
    w[[0, -1]] /= 2
    phi = meyer(x)
    for k in range(4):
        val = np.dot(w, phi * meyer(x - k))
        assert val == pytest.approx(1.0 if k == 0 else 0.0, abs=1e-5)


def test_admissibility_meyer(meyer):
    rep = verify_admissibility(meyer, 2)
    assert rep.passed
    assert {"P1", "P2", "P3", "P4", "P5"} <= set(rep.checks)


def test_admissibility_hat_fails_derivative_decay():
    rep = verify_admissibility(make_generator("bspline", 2), 1)
    assert rep.failures() == ["decay[s=1]"]


def test_admissibility_sinc_decay_rate(sinc):
    rep = verify_admissibility(sinc, 0)
    assert rep.passed
    assert rep.details["decay[s=0]"] == pytest.approx(1.0, abs=0.05)


def test_admissibility_lattice_divergence():
    # |w + l|^4 |Q_2^|^2 decays like |l|^0: condition (ii) fails at s = 2
    rep = verify_admissibility(make_generator("bspline", 2), 2)
    assert "lattice_sum[s=2]" in rep.failures()
    assert "lattice_sum[s=1]" not in rep.failures()
