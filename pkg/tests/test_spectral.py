import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import probe_coefficients
from siss.constants import krein_favard
from siss.generators import make_generator
from siss.reconstruct import quadrature_norms
from siss.spectral import (NonRieszError, bernstein_constant, bernstein_constant_closed,
                           bernstein_symbol, gram_symbol, lattice_truncation, riesz_bounds)


def test_riesz_orthonormal(sinc, meyer):
    assert riesz_bounds(sinc) == (1.0, 1.0)
    assert riesz_bounds(meyer) == (1.0, 1.0)


def test_riesz_hat():
    lo, hi = riesz_bounds(make_generator("bspline", 2))
    assert lo == pytest.approx(1 / 3, abs=1e-9)
    assert hi == pytest.approx(1.0, abs=1e-9)


def test_gram_symbol_hat_closed_form():
    w = np.linspace(0, 1, 37)
    G = gram_symbol(make_generator("bspline", 2), w)
    assert G == pytest.approx((2 + np.cos(2 * np.pi * w)) / 3, abs=1e-9)


def test_riesz_rejects_small_grid(q4):
    with pytest.raises(ValueError):
        riesz_bounds(q4, N=32)


def test_symbol_examples(sinc, meyer):
    assert bernstein_symbol(sinc, 1, 0.25) == pytest.approx(0.0625, abs=1e-14)
    assert bernstein_symbol(meyer, 1, 0.5) == pytest.approx(0.25, abs=1e-12)


def test_sinc_symbol_is_power():
    w = np.linspace(-0.49, 0.49, 25)
    for s in (1, 2, 3):
        assert bernstein_symbol(make_generator("sinc"), s, w) == pytest.approx(w ** (2 * s), abs=1e-14)


@given(w=st.floats(-3, 3), s=st.integers(1, 2), kind=st.sampled_from(["sinc", "meyer", "q4"]))
def test_symbol_periodic(w, s, kind):
    g = make_generator("bspline", 4) if kind == "q4" else make_generator(kind)
    assert bernstein_symbol(g, s, w + 1) == pytest.approx(bernstein_symbol(g, s, w), abs=1e-12)


def test_symbol_rejects_s0(sinc):
    with pytest.raises(ValueError):
        bernstein_symbol(sinc, 0, 0.1)


def test_symbol_detects_vanishing_gram():
    # spectrum identically zero in the lattice => non-Riesz
    class Dead:
        kind, m, freq_support = "dead", None, (-0.5, 0.5)
    import siss.spectral as sp

    real = sp.fourier_mag
    sp.fourier_mag = lambda g, w: np.zeros_like(np.asarray(w, dtype=float))
    try:
        with pytest.raises(NonRieszError):
            bernstein_symbol(Dead(), 1, 0.3)
    finally:
        sp.fourier_mag = real


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_sinc_constants(sinc, s):
    assert bernstein_constant(sinc, s) == pytest.approx(4.0 ** -s, abs=1e-10)
    assert bernstein_constant_closed("sinc", s) == 4.0 ** -s


def test_classical_bernstein():
    assert 2 * math.pi * math.sqrt(bernstein_constant_closed("sinc", 1)) == pytest.approx(math.pi)


@pytest.mark.parametrize("s,value", [(1, 0.25), (2, 1 / 16)])
def test_meyer_constants(meyer, s, value):
    assert bernstein_constant(meyer, s) == pytest.approx(value, abs=1e-6)
    assert bernstein_constant_closed(meyer, s) == value


def test_meyer_b2_peaks_at_half(meyer):
    w = np.linspace(0, 1, 4097)
    B = bernstein_symbol(meyer, 2, w)
    assert abs(w[np.argmax(B)] - 0.5) < 1e-3


def test_meyer_closed_rejects_high_order():
    with pytest.raises(ValueError):
        bernstein_constant_closed("meyer", 3)


def test_spline_closed_m8_s2():
    # independent evaluation of the Krein-Favard ratio
    expected = krein_favard(11).value / (16 * krein_favard(15).value)
    assert bernstein_constant_closed("bspline", 2, 8) == pytest.approx(expected, rel=1e-13)
    assert bernstein_constant(make_generator("bspline", 8), 2) == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("m,s", [(2, 1), (4, 1), (4, 2), (6, 2), (8, 4), (10, 6)])
def test_spline_closed_matches_numeric(m, s):
    g = make_generator("bspline", m)
    assert bernstein_constant(g, s) == pytest.approx(bernstein_constant_closed(g, s), abs=1e-6)


@pytest.mark.parametrize("m,s", [(2, 2), (3, 3), (1, 1)])
def test_spline_closed_precondition(m, s):
    with pytest.raises(ValueError):
        bernstein_constant_closed("bspline", s, m)


def test_closed_unknown_kind():
    with pytest.raises(ValueError):
        bernstein_constant_closed("haar", 1)


@pytest.mark.parametrize("kind,m,s", [("sinc", None, 1), ("sinc", None, 3), ("meyer", None, 1),
                                      ("meyer", None, 3), ("bspline", 3, 1), ("bspline", 6, 4)])
def test_floor(kind, m, s):
    g = make_generator(kind, m)
    assert bernstein_constant(g, s) >= 4.0 ** -s - 1e-10


def test_lattice_truncation():
    assert lattice_truncation(make_generator("sinc"))[0] == 2
    L, bound = lattice_truncation(make_generator("bspline", 4), 1)
    assert bound < 1e-10 and L > 1
    with pytest.raises(ValueError):
        lattice_truncation(make_generator("bspline", 1), 1)


@pytest.mark.parametrize("kind,m", [("sinc", None), ("bspline", 4), ("meyer", None)])
@pytest.mark.parametrize("s", [1, 2])
def test_empirical_bernstein(kind, m, s):
    g = make_generator(kind, m)
    C = probe_coefficients(64, 20, seed=7)
    ratio = quadrature_norms(g, -32, C, s) / quadrature_norms(g, -32, C, 0)
    bound = (2 * math.pi) ** s * math.sqrt(bernstein_constant_closed(g, s))
    assert np.all(ratio <= bound * (1 + 1e-3))
