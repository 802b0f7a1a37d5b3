import cmath
import math

import pytest

from conifoldrh.contour import (ContourSpec, QuadratureError, RotationError,
                                detour_integral, hull_rotation,
                                integrate_segment)
from conifoldrh.lattice import RegionError
from conifoldrh.multisine import (f_moment_quad, f_moment_residue_oracle,
                                  f_moment_series, g_moment_quad,
                                  g_moment_series, residue_lemma_check)


def test_segment_polynomial_exact():
    val, err = integrate_segment(lambda s: s**3, 0, 1 + 1j, 1e-12)
    assert abs(val - (1 + 1j) ** 4 / 4) < 1e-13


def test_segment_oscillatory():
    val, err = integrate_segment(lambda s: cmath.exp(1j * 40 * s), 0.0, 2.0, 1e-11)
    exact = (cmath.exp(80j) - 1) / (40j)
    assert abs(val - exact) < 1e-10


def test_detour_picks_up_residue():
    # int over the detour of 1/s is -i pi (half residue, passing above 0)
    val, err = detour_integral(lambda s: 1 / s, 0.5, 40.0, 1 + 0j, 1e-11)
    assert abs(val - (-1j * math.pi)) < 1e-10
    # odd negative powers integrate to ~ -2/R^2/... -> essentially 0 at large R
    val, _ = detour_integral(lambda s: s**-3, 0.5, 1e4, 1 + 0j, 1e-11)
    assert abs(val) < 1e-8


def test_hull_rotation():
    c, margin = hull_rotation([1 + 0j, 1j])
    assert margin > 0
    for d in (1 + 0j, 1j):
        assert (c * d).real > 0
    with pytest.raises(RotationError):
        hull_rotation([1 + 0j, 1j, -0.5 - 0.5j], ["a", "b", "c"])


def test_nonconvergent_tail_raises():
    from conifoldrh.contour import choose_outer_cutoff
    with pytest.raises(QuadratureError):
        choose_outer_cutoff(lambda s: 1 / (1 + s * s.conjugate()), 1 + 0j,
                            0.5, 1e-10, r_max=1e3)


# ---------------------------------------------------------------------------
# moment integrals: quadrature vs residue resummation vs plain residue sum


Z, OB = 0.3 + 0.4j, 1 + 0.1j
W1, W1T = 1 + 0.1j, 0.95 - 0.07j


@pytest.mark.parametrize("order", [-2, -1, 0, 1, 2])
def test_f_moment_routes_agree(order):
    q = f_moment_quad(order, Z, OB)[0]
    s = f_moment_series(order, Z, OB)
    assert abs(q - s) <= 1e-9 * max(1.0, abs(s))


@pytest.mark.parametrize("order", [-2, -1, 0, 1])
def test_g_moment_routes_agree(order):
    q = g_moment_quad(order, Z, W1, W1T)[0]
    s = g_moment_series(order, Z, W1, W1T)
    assert abs(q - s) <= 1e-8 * max(1.0, abs(s))


def test_f_moment_residue_sum_oracle():
    """The plain truncated residue sum is the stated independent oracle."""
    q = f_moment_quad(-2, Z, OB)[0]
    o = f_moment_residue_oracle(-2, Z, OB)
    assert abs(q - o) < 1e-8


def test_moment_requires_upper_ratio():
    with pytest.raises(RegionError):
        f_moment_quad(-1, 0.3 - 0.4j, 1.0 + 0j)
    with pytest.raises(RegionError):
        f_moment_series(-1, 0.3 - 0.4j, 1.0 + 0j)


def test_moment_tilt_invariance():
    """The rotated-contour value does not depend on the tilt eps_plus inside
    the admissible window (no pole is crossed)."""
    vals = [f_moment_quad(-2, Z, OB, ContourSpec(eps_plus=ep))[0]
            for ep in (0.05, 0.15, 0.3)]
    for v in vals[1:]:
        assert abs(v - vals[0]) < 1e-10


def test_moment_explicit_small_tilt():
    """An explicit small tilt remains available; a mildly small value keeps
    the slow-decay tail affordable in a test."""
    v = f_moment_quad(-1, Z, OB, ContourSpec(eps_plus=0.02))[0]
    assert abs(v - f_moment_series(-1, Z, OB)) < 1e-9


# ---------------------------------------------------------------------------
# residue lemma


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("w", [1.0 + 0j, 1 + 0.2j, 0.7 - 0.3j])
def test_residue_lemma(d, w):
    res = residue_lemma_check(w, d)
    assert res.rel_err < 1e-8, (d, w, res.rel_err)


def test_residue_lemma_requires_right_half_plane():
    with pytest.raises(RegionError):
        residue_lemma_check(-1.0 + 0j, 2)


def test_quadrature_self_consistency():
    """Halving the tolerance at fixed inputs tightens the reported estimate
    by at least 2x (refinement stops below a fixed fraction of the budget)."""
    from conifoldrh.multisine import log_G_contour
    args = (0.2 + 0.5j, 1 + 0.1j, 0.95 - 0.07j, 30 * cmath.exp(-0.3j))
    _, e1 = log_G_contour(*args, ContourSpec(tol=1e-7))
    _, e2 = log_G_contour(*args, ContourSpec(tol=5e-8))
    assert e2 <= e1 / 2
