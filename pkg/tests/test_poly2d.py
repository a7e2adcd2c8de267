import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from platemwr.model import RigiditySet
from platemwr.poly2d import (
    Poly2D,
    RectDomain,
    affine_map,
    combine,
    differentiate,
    eval_poly,
    from_unit,
    integrate_rect,
    restrict,
    to_unit,
)
from platemwr.solver import apply_plate_operator


def random_poly(rng, deg):
    c = rng.standard_normal((deg + 1, deg + 1))
    return Poly2D(c, deg)


def gauss_legendre_2d(p: Poly2D, d: RectDomain, m: int) -> float:
    x, wx = np.polynomial.legendre.leggauss(m)
    hx, hy = d.half_lengths
    cx, cy = d.center
    X, Y = np.meshgrid(cx + hx * x, cy + hy * x, indexing="ij")
    return float(hx * hy * np.einsum("i,j,ij->", wx, wx, p(X, Y)))


# -- evaluation -----------------------------------------------------------------

def test_eval_monomial():
    assert eval_poly(Poly2D.monomial(2, 1), 2.0, 3.0) == 12.0


def test_eval_zero_and_linear():
    assert Poly2D.zero()(0.3, -7.0) == 0.0
    assert Poly2D({(1, 0): 1.0, (0, 1): 1.0})(0.5, 0.5) == 1.0


def test_eval_broadcasts():
    p = Poly2D({(1, 1): 2.0, (0, 0): 1.0})
    x = np.linspace(0, 1, 5)
    np.testing.assert_allclose(p(x, 2.0), 1 + 4 * x)


def test_upper_triangle_dropped():
    c = np.ones((3, 3))
    p = Poly2D(c, 2)
    assert p.array[2, 2] == 0 and p.array[1, 2] == 0
    assert p.max_total_degree == 2


def test_dict_rejects_degree_overflow():
    with pytest.raises(ValueError):
        Poly2D({(3, 0): 1.0}, degree=2)


# -- differentiation --------------------------------------------------------------

def test_differentiate_x3y2():
    d = differentiate(Poly2D.monomial(3, 2), 2, 2)
    assert d.allclose(Poly2D.monomial(1, 0, 12.0))


def test_differentiate_constant_is_zero():
    assert Poly2D.constant(5.0).diff(1, 0).is_zero()


def test_plate_operator_kills_cubics():
    rng = np.random.default_rng(0)
    rig = RigiditySet(1.3, 0.7, 0.2, 0.4)
    assert apply_plate_operator(random_poly(rng, 3), rig).is_zero(atol=1e-14)


def test_negative_derivative_order():
    with pytest.raises(ValueError):
        differentiate(Poly2D.monomial(1, 1), -1, 0)


# -- arithmetic ----------------------------------------------------------------------

def test_x_times_y():
    assert (Poly2D.monomial(1, 0) * Poly2D.monomial(0, 1)) == Poly2D.monomial(1, 1)


def test_p_minus_p():
    p = random_poly(np.random.default_rng(1), 6)
    assert (p + (-1.0) * p).is_zero()


def test_degree_5_times_8():
    rng = np.random.default_rng(2)
    a = random_poly(rng, 5) + Poly2D.monomial(5, 0, 2.0)
    b = random_poly(rng, 8) + Poly2D.monomial(8, 0, 3.0)
    ab = a * b
    assert ab.max_total_degree == 13
    assert ab.array[13, 0] == pytest.approx(a.array[5, 0] * b.array[8, 0])


def test_product_evaluates_pointwise():
    rng = np.random.default_rng(3)
    a, b = random_poly(rng, 5), random_poly(rng, 7)
    x, y = rng.uniform(-1, 1, 50), rng.uniform(-1, 1, 50)
    np.testing.assert_allclose((a * b)(x, y), a(x, y) * b(x, y), rtol=1e-12, atol=1e-12)


def test_combine():
    x, y = Poly2D.monomial(1, 0), Poly2D.monomial(0, 1)
    assert combine([(2.0, x), (-1.0, y)]) == Poly2D({(1, 0): 2.0, (0, 1): -1.0})


def test_vector_roundtrip():
    members = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    v = np.arange(1.0, 7.0)
    np.testing.assert_array_equal(Poly2D.from_vector(v, members).to_vector(members), v)


# -- integration ---------------------------------------------------------------------

def test_integrate_x2y():
    assert integrate_rect(Poly2D.monomial(2, 1), RectDomain(0, 1, 0, 2)) == pytest.approx(2 / 3, rel=1e-15)


def test_integrate_one():
    assert integrate_rect(Poly2D.constant(1.0), RectDomain(0, 1, 0, 1)) == 1.0


def test_integrate_matches_gauss_degree10():
    rng = np.random.default_rng(4)
    p = random_poly(rng, 10)
    d = RectDomain.unit()
    assert integrate_rect(p, d) == pytest.approx(gauss_legendre_2d(p, d, 12), rel=1e-12)


@pytest.mark.parametrize("deg", [4, 12, 20])
def test_integrate_matches_gauss_offset_rectangle(deg):
    rng = np.random.default_rng(deg)
    p = random_poly(rng, deg)
    d = RectDomain(-0.3, 0.9, 0.1, 1.4)
    assert integrate_rect(p, d) == pytest.approx(gauss_legendre_2d(p, d, deg // 2 + 2), rel=1e-11)


def test_fundamental_theorem_in_x():
    # integrating d/dx of x**(p+1)/(p+1) over x gives the boundary difference
    d = RectDomain(0.2, 1.7, -0.5, 0.5)
    for p in range(8):
        f = Poly2D.monomial(p + 1, 0, 1.0 / (p + 1))
        lhs = integrate_rect(f.diff(1, 0), d)
        rhs = (d.x1 ** (p + 1) - d.x0 ** (p + 1)) / (p + 1) * (d.y1 - d.y0)
        assert lhs == pytest.approx(rhs, rel=1e-12)


# -- affine maps ---------------------------------------------------------------------

def test_identity_map():
    p = random_poly(np.random.default_rng(5), 7)
    d = RectDomain(0.0, 2.0, -1.0, 3.0)
    assert affine_map(p, d, d).allclose(p, rtol=1e-13)


def test_affine_map_evaluation():
    rng = np.random.default_rng(6)
    p = random_poly(rng, 9)
    src = RectDomain(0.0, 0.25, 0.0, 0.5)
    q = to_unit(p, src)
    u, v = rng.uniform(-1, 1, 100), rng.uniform(-1, 1, 100)
    x = 0.125 * (u + 1)
    y = 0.25 * (v + 1)
    np.testing.assert_allclose(q(u, v), p(x, y), rtol=1e-12, atol=1e-12 * np.abs(p(x, y)).max())


def test_table_plate_x_maps_to_shifted_u():
    q = to_unit(Poly2D.monomial(1, 0), RectDomain(0.0, 0.25, 0.0, 0.5))
    assert q.allclose(Poly2D({(0, 0): 0.125, (1, 0): 0.125}), rtol=1e-15)


def test_unit_roundtrip():
    p = random_poly(np.random.default_rng(7), 8)
    d = RectDomain(-3.0, 5.0, 1.0, 2.0)
    assert from_unit(to_unit(p, d), d).allclose(p, rtol=1e-9)


def test_restrict():
    p = Poly2D({(2, 1): 1.0, (0, 0): 3.0})
    r = restrict(p, x=2.0)
    assert r(123.0, 0.5) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        restrict(p)


def test_degenerate_rectangle():
    with pytest.raises(ValueError):
        RectDomain(1.0, 1.0, 0.0, 1.0)


# -- properties --------------------------------------------------------------------

coef = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(st.lists(coef, min_size=21, max_size=21), st.lists(coef, min_size=21, max_size=21), coef)
def test_linearity(ca, cb, alpha):
    members = [(p, d - p) for d in range(6) for p in range(d, -1, -1)]
    a, b = Poly2D.from_vector(ca, members), Poly2D.from_vector(cb, members)
    d = RectDomain(-1.0, 2.0, 0.0, 1.5)
    lhs = integrate_rect(a * alpha + b, d)
    rhs = alpha * integrate_rect(a, d) + integrate_rect(b, d)
    # bound the round-off by the integral of |coefficients| (x, y >= 0 not assumed)
    size = sum(abs(c) for c in ca) * abs(alpha) + sum(abs(c) for c in cb) + 1.0
    assert abs(lhs - rhs) <= 1e-12 * size * d.area * 2.0**5
    dl = (a * alpha + b).diff(1, 2)
    dr = a.diff(1, 2) * alpha + b.diff(1, 2)
    assert dl.allclose(dr, rtol=1e-12, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 20), st.integers(0, 10_000))
def test_integration_vs_gauss_any_degree(deg, seed):
    p = random_poly(np.random.default_rng(seed), deg)
    d = RectDomain(-1.0, 1.0, -1.0, 1.0)
    exact = integrate_rect(p, d)
    gl = gauss_legendre_2d(p, d, deg // 2 + 2)
    scale = integrate_rect(Poly2D(np.abs(p.array), deg), d)
    assert abs(exact - gl) <= 1e-11 * max(scale, 1e-300)
