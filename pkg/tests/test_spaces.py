import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from pickspace.polyring import DimensionError, Polynomial, indices_up_to, random_polynomial
from pickspace.spaces import (
    MonomialNormTable,
    RadialWeight,
    SpaceSpec,
    besov_shift_ratio,
    beta_moment,
    inner_product,
    integer_besov_norm,
    monomial_norm,
    monomial_norm_da,
    space_norm,
    sphere_factor,
    weight_l1_norm,
)


@pytest.mark.parametrize("n,a", [(0, 0), (2.5, 1), (3, -0.5), (0.5, 2.25)])
def test_beta_moment_against_quadrature(n, a):
    ref, _ = integrate.quad(lambda t: t**n * (1 - t) ** a, 0, 1)
    assert beta_moment(n, a) == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("a", [-1, -2.5])
def test_beta_moment_rejects_nonintegrable(a):
    with pytest.raises(ValueError):
        beta_moment(1, a)


def test_standard_weight_rejects_small_exponent():
    with pytest.raises(ValueError):
        RadialWeight.standard(-1)


@pytest.mark.parametrize("a", [0.0, 1.0, -0.5, 2.5])
def test_standard_moments_against_quadrature(a):
    w = RadialWeight.standard(a)
    for k in (1, 3, 7):
        ref, _ = integrate.quad(lambda r: r**k * (1 - r * r) ** a, 0, 1)
        assert w.moment(k) == pytest.approx(ref, rel=1e-7)


def test_sphere_factor_small_cases():
    assert sphere_factor((1, 0)) == Fraction(1, 2)
    assert sphere_factor((1, 1)) == Fraction(1, 6)
    assert sphere_factor((2,)) == 1


@pytest.mark.parametrize("alpha,expected", [((1, 1), Fraction(1, 2)), ((2, 0), Fraction(1)), ((2, 1, 1), Fraction(1, 12))])
def test_drury_arveson_values(alpha, expected):
    assert monomial_norm_da(alpha) == expected
    assert monomial_norm(SpaceSpec.drury_arveson(len(alpha)), alpha) == float(expected)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_unweighted_bergman_norms(d):
    space = SpaceSpec.bergman(d)
    for alpha in indices_up_to(d, 5):
        n = sum(alpha)
        exact = math.factorial(d) * math.prod(math.factorial(a) for a in alpha) / math.factorial(n + d)
        assert monomial_norm(space, alpha) == pytest.approx(exact, rel=1e-13)


def test_dirichlet_norms():
    D = SpaceSpec.dirichlet()
    assert [monomial_norm(D, (n,)) for n in range(4)] == [1.0, 2.0, 3.0, 4.0]


def test_besov_scaling_in_s():
    base = SpaceSpec.besov(2, 0.0)
    for s in (0.5, 1.0, 1.75):
        sp = base.with_s(s)
        for alpha in indices_up_to(2, 4):
            n = sum(alpha)
            factor = 1.0 if n == 0 else n ** (2 * s)
            assert monomial_norm(sp, alpha) == pytest.approx(factor * monomial_norm(base, alpha), rel=1e-14)


@pytest.mark.parametrize("weight", [RadialWeight.one(), RadialWeight.standard(1.0), RadialWeight.standard(0.5)])
@pytest.mark.parametrize("N", [1, 2, 3])
def test_integer_besov_norm_matches_family(weight, N, rng):
    for d in (1, 2):
        space = SpaceSpec.besov(d, float(N), weight)
        for _ in range(5):
            p = random_polynomial(d, 5, rng)
            assert integer_besov_norm(weight, d, N, p) == pytest.approx(space_norm(space, p), rel=1e-12)


def test_weight_l1_norm_is_constant_monomial_norm():
    for w in (RadialWeight.one(), RadialWeight.standard(1.5)):
        for d in (1, 2, 3):
            assert weight_l1_norm(w, d) == pytest.approx(monomial_norm(SpaceSpec.besov(d, 0.0, w), (0,) * d))
    assert weight_l1_norm(RadialWeight.one(), 3) == pytest.approx(1.0)


spaces = st.sampled_from([SpaceSpec.drury_arveson(2), SpaceSpec.besov(2, 1.0), SpaceSpec.bergman(2, 0.5)])
seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40)
@given(spaces, seeds)
def test_parallelogram_law(space, seed):
    rng = np.random.default_rng(seed)
    f, g = random_polynomial(2, 4, rng), random_polynomial(2, 4, rng)
    lhs = space_norm(space, f + g) ** 2 + space_norm(space, f - g) ** 2
    rhs = 2 * space_norm(space, f) ** 2 + 2 * space_norm(space, g) ** 2
    assert lhs == pytest.approx(rhs, rel=1e-12)


@settings(max_examples=40)
@given(spaces, seeds)
def test_inner_product_hermitian_and_consistent(space, seed):
    rng = np.random.default_rng(seed)
    f, g = random_polynomial(2, 3, rng), random_polynomial(2, 3, rng)
    assert inner_product(space, f, g) == pytest.approx(inner_product(space, g, f).conjugate(), rel=1e-12, abs=1e-14)
    assert inner_product(space, f, f).real == pytest.approx(space_norm(space, f) ** 2, rel=1e-12)
    assert inner_product(space, f.scale(2j), g) == pytest.approx(2j * inner_product(space, f, g), rel=1e-12, abs=1e-14)


def test_zero_polynomial_has_zero_norm():
    assert space_norm(SpaceSpec.bergman(3), Polynomial.zero(3)) == 0.0


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        space_norm(SpaceSpec.drury_arveson(2), Polynomial.coordinate(3, 0))
    with pytest.raises(DimensionError):
        monomial_norm(SpaceSpec.drury_arveson(2), (1,))


def test_monomial_norm_table_matches():
    space = SpaceSpec.besov(2, 0.5, RadialWeight.standard(1.0))
    table = MonomialNormTable(space)
    idx = indices_up_to(2, 6)
    assert list(table.array(idx)) == [monomial_norm(space, a) for a in idx]
    assert table.max_degree == 6


def test_tabulated_weight():
    w = RadialWeight.tabulated([1 / (k + 1) for k in range(20)])
    one = SpaceSpec.besov(2, 1.0)
    tab = SpaceSpec.besov(2, 1.0, w)
    for alpha in indices_up_to(2, 3):
        assert monomial_norm(tab, alpha) == pytest.approx(monomial_norm(one, alpha))
    with pytest.raises(ValueError):
        w.moment(40)
    with pytest.raises(ValueError):
        RadialWeight.tabulated([0.5, 0.7])


@pytest.mark.parametrize(
    "text,expected",
    [
        ("da:3", SpaceSpec.drury_arveson(3)),
        ("h2:2", SpaceSpec.drury_arveson(2)),
        ("dirichlet", SpaceSpec.dirichlet()),
        ("hardy:2", SpaceSpec.besov(2, 0.5)),
        ("bergman:2", SpaceSpec.bergman(2)),
        ("bergman:2:1", SpaceSpec.bergman(2, 1.0)),
        ("besov:1:1", SpaceSpec.besov(1, 1.0)),
        ("besov:2:0.5:1", SpaceSpec.besov(2, 0.5, RadialWeight.standard(1.0))),
        ('{"dim": 2, "s": 1, "weight": {"kind": "standard", "a": 2}}', SpaceSpec.besov(2, 1.0, RadialWeight.standard(2))),
    ],
)
def test_space_parse(text, expected):
    assert SpaceSpec.parse(text) == expected


@pytest.mark.parametrize("text", ["bogus", "da", "besov:2", "bergman:x"])
def test_space_parse_rejects(text):
    with pytest.raises(ValueError):
        SpaceSpec.parse(text)


@pytest.mark.parametrize("space", [SpaceSpec.drury_arveson(2), SpaceSpec.dirichlet(), SpaceSpec.besov(3, 1.5, RadialWeight.standard(0.5))])
def test_config_roundtrip(space):
    assert SpaceSpec.from_config(space.to_config()) == space


def test_shift_ratio_band_is_stable_in_degree():
    lo20, hi20 = besov_shift_ratio(1.0, 1.0, 2, 20)
    lo40, hi40 = besov_shift_ratio(1.0, 1.0, 2, 40)
    assert lo40 <= lo20 and hi40 >= hi20
    assert hi40 / lo40 < 2 * hi20 / lo20
    with pytest.raises(ValueError):
        besov_shift_ratio(1.0, 1.0, 2, 0)
