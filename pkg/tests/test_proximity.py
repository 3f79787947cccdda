"""Catch-region construction for both digraph families."""

import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from picd.core import CicdParams, PicdParams
from picd.proximity import Region, cicd_region, picd_region, transformed_region

I01 = (0.0, 1.0)


def test_region_open_interval_semantics():
    reg = Region(0.2, 0.6)
    assert reg.contains(0.4)
    assert not reg.contains(0.2)
    assert not reg.contains(0.6)
    assert not reg.empty
    assert Region(0.5, 0.5).empty
    assert Region(0.7, 0.3).empty


def test_region_point_variant():
    pt = Region.point(0.3)
    assert pt.contains(0.3)
    assert not pt.contains(0.3 + 1e-12)
    assert pt.length() == 0.0


def test_picd_left_branch():
    reg = picd_region(0.3, I01, PicdParams(2.0, 0.5))
    assert (reg.lo, reg.hi) == (0.0, 0.6)


def test_picd_right_branch():
    reg = picd_region(0.8, I01, PicdParams(2.0, 0.5))
    assert (reg.lo, reg.hi) == pytest.approx((0.6, 1.0))


def test_picd_infinite_expansion_is_whole_interval():
    reg = picd_region(0.3, I01, PicdParams(math.inf, 0.5))
    assert (reg.lo, reg.hi) == (0.0, 1.0)


def test_picd_point_exactly_at_anchor_uses_right_branch():
    # right branch region is anchored at the interval's right endpoint
    reg = picd_region(0.5, I01, PicdParams(2.0, 0.5))
    assert (reg.lo, reg.hi) == (0.0, 1.0)
    reg = picd_region(0.5, I01, PicdParams(1.5, 0.5))
    assert (reg.lo, reg.hi) == pytest.approx((0.25, 1.0))


def test_picd_unit_expansion_excludes_own_point():
    reg = picd_region(0.3, I01, PicdParams(1.0, 0.5))
    assert not reg.contains(0.3)


def test_cicd_pinned_examples():
    reg = cicd_region(0.3, I01, CicdParams(1.0, 0.5))
    assert (reg.lo, reg.hi) == pytest.approx((0.0, 0.6))
    reg = cicd_region(0.8, I01, CicdParams(1.0, 0.5))
    assert (reg.lo, reg.hi) == pytest.approx((0.6, 1.0))


def test_cicd_large_tau_saturates():
    reg = cicd_region(0.45, I01, CicdParams(1e9, 0.5))
    assert (reg.lo, reg.hi) == (0.0, 1.0)


def test_transformed_region_identity_matches_picd():
    params = PicdParams(2.0, 0.5)
    ident = lambda t: t  # noqa: E731
    for x in (0.1, 0.3, 0.5, 0.8):
        direct = picd_region(x, I01, params)
        via = transformed_region(x, ident, ident, params)
        assert (via.lo, via.hi) == pytest.approx((direct.lo, direct.hi))


def test_transformed_region_square_cdf_left():
    # F(x)=x^2 moves the cut to sqrt scale: image of (0, 2*0.25) is (0, sqrt(0.5))
    reg = transformed_region(0.5, lambda t: t * t, math.sqrt, PicdParams(2.0, 0.5))
    assert (reg.lo, reg.hi) == pytest.approx((0.0, math.sqrt(0.5)))


def test_transformed_region_square_cdf_right():
    reg = transformed_region(0.9, lambda t: t * t, math.sqrt, PicdParams(2.0, 0.25))
    assert (reg.lo, reg.hi) == pytest.approx((math.sqrt(0.62), 1.0))


def test_transformed_region_rejects_boundary_image():
    with pytest.raises(ValueError):
        transformed_region(1.0, lambda t: t, lambda t: t, PicdParams(2.0, 0.5))


pos = st.floats(min_value=0.001, max_value=0.999, allow_nan=False)
rs = st.floats(min_value=1.0001, max_value=50.0, allow_nan=False)
cs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@given(x=pos, r=rs, c=cs)
@settings(max_examples=300)
def test_own_point_inside_for_expansion_above_one(x, r, c):
    assert picd_region(x, I01, PicdParams(r, c)).contains(x)


@given(x=pos, r1=rs, r2=rs, c=cs)
@settings(max_examples=300)
def test_monotone_in_expansion(x, r1, r2, c):
    lo, hi = sorted((r1, r2))
    small = picd_region(x, I01, PicdParams(lo, c))
    big = picd_region(x, I01, PicdParams(hi, c))
    assert big.lo <= small.lo + 1e-12
    assert big.hi >= small.hi - 1e-12


@given(x=pos, r=st.one_of(st.just(1.0), rs, st.just(math.inf)), c=cs)
@settings(max_examples=300)
def test_region_stays_inside_interval(x, r, c):
    reg = picd_region(x, I01, PicdParams(r, c))
    assert 0.0 <= reg.lo <= reg.hi <= 1.0


@given(
    x=pos,
    r=rs,
    c=cs,
    a=st.floats(min_value=0.01, max_value=100.0),
    b=st.floats(min_value=-50.0, max_value=50.0),
)
@settings(max_examples=300)
def test_affine_equivariance(x, r, c, a, b):
    # the region jumps at the anchor point, so stay clear of it: rounding in
    # a*x + b must not be able to flip the branch
    assume(abs(x - c) > 1e-6)
    base = picd_region(x, I01, PicdParams(r, c))
    mapped = picd_region(a * x + b, (b, a + b), PicdParams(r, c))
    assert mapped.lo == pytest.approx(a * base.lo + b, abs=1e-9 * max(1.0, a))
    assert mapped.hi == pytest.approx(a * base.hi + b, abs=1e-9 * max(1.0, a))
