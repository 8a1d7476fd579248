import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lindeberg_lab.gclass import (
    ClipAbove,
    ClipBelow,
    ConstantOne,
    DomainError,
    GSpecError,
    Identity,
    Power,
    Scaled,
    Tabulated,
    envelope_check,
    find_gclass_violation,
    parse_gspec,
    validate_gclass,
)

BUILTINS = [
    Identity(),
    ConstantOne(),
    Power(0.0),
    Power(0.3),
    Power(0.5),
    Power(1.0),
    ClipAbove(1.0),
    ClipAbove(2.5),
    ClipBelow(1.0),
    ClipBelow(0.4),
    Scaled(7.0, Power(0.3)),
    Tabulated(((0.5, 0.5), (1.0, 0.8), (2.0, 1.2), (4.0, 1.5))),
]
LOG_GRID = list(np.geomspace(1e-4, 1e4, 400))


def test_eval_examples():
    assert Identity()(2.5) == 2.5
    assert ClipAbove(1)(2.5) == 1.0
    assert ClipAbove(1)(0.5) == 0.5
    assert Power(0.5)(4.0) == 2.0
    assert ClipBelow(1)(0.5) == 1.0
    assert ClipBelow(1)(3.0) == 3.0
    assert ConstantOne()(123.0) == 1.0
    assert Scaled(3.0, Identity())(2.0) == 6.0


def test_eval_domain():
    for g in BUILTINS:
        with pytest.raises(DomainError):
            g(0.0)
        with pytest.raises(DomainError):
            g(-1.0)


def test_validate_examples():
    assert validate_gclass(Identity(), [0.1, 1.0, 10.0])
    assert not validate_gclass(Tabulated(((1.0, 1.0), (2.0, 0.5))))
    bad = Tabulated(((1.0, 1.0), (2.0, 3.0)))
    assert not validate_gclass(bad, [1.0, 2.0])
    assert find_gclass_violation(bad, [1.0, 2.0]) == (1.0, 2.0)


@pytest.mark.parametrize("g", BUILTINS, ids=lambda g: g.spec()[:30])
def test_builtins_are_members(g):
    assert validate_gclass(g)
    assert validate_gclass(g, LOG_GRID)


@pytest.mark.parametrize("c", [1e-3, 0.37, 1.0, 55.0, 1e3])
@pytest.mark.parametrize("g", BUILTINS, ids=lambda g: g.spec()[:30])
def test_scaled_members_stay_members(g, c):
    assert validate_gclass(Scaled(c, g), LOG_GRID)


def test_envelope_examples():
    assert envelope_check(Power(0.5), 1.0, 4.0)
    for a in (0.1, 1.0, 3.3):
        assert envelope_check(Identity(), a, a)
    g = ClipAbove(1.0)
    assert g(0.25) / g(1.0) == 0.25  # lower bound is tight
    assert envelope_check(g, 1.0, 0.25)


def test_envelope_detects_non_members():
    fast = Tabulated(((1.0, 1.0), (2.0, 3.0)))
    assert not envelope_check(fast, 1.0, 2.0)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(BUILTINS), st.floats(1e-3, 1e3))
def test_envelope_property(g, a):
    zs = np.geomspace(a * 1e-4, a * 1e4, 1000)
    assert all(envelope_check(g, a, float(z)) for z in zs)


@pytest.mark.parametrize("g", BUILTINS, ids=lambda g: g.spec()[:30])
def test_continuity(g):
    for z in np.geomspace(1e-3, 1e3, 50).tolist() + list(g.knots()):
        h = 1e-9 * z
        assert abs(g(z + h) - g(z)) <= 1e-7 * max(g(z), 1e-300)
        assert abs(g(z - h) - g(z)) <= 1e-7 * max(g(z), 1e-300)


def test_limits():
    assert Identity().limit_at_zero() == 0.0
    assert ConstantOne().limit_at_zero() == 1.0
    assert ClipBelow(2.0).limit_at_zero() == 2.0
    assert Power(0.5).limit_at_zero() == 0.0
    assert Identity().slope_at_infinity() == 1.0
    assert ClipAbove(2.0).slope_at_infinity() == 0.0
    assert ClipBelow(2.0).slope_at_infinity() == 1.0
    assert Power(0.5).slope_at_infinity() == 0.0
    assert Scaled(3.0, Identity()).slope_at_infinity() == 3.0


def test_pieces_agree_with_definitions():
    for z in np.geomspace(1e-3, 1e3, 101):
        z = float(z)
        assert ClipAbove(1.3)(z) == min(z, 1.3)
        assert ClipBelow(1.3)(z) == max(z, 1.3)


def test_tabulated_interpolates_and_extends():
    g = Tabulated(((1.0, 1.0), (3.0, 2.0)))
    assert g(2.0) == 1.5
    assert g(5.0) == 3.0
    assert g(0.5) == 0.75
    single = Tabulated(((2.0, 4.0),))
    assert single(0.1) == single(100.0) == 4.0


def test_parse_gspec(tmp_path):
    assert parse_gspec("identity") == Identity()
    assert parse_gspec("const") == ConstantOne()
    assert parse_gspec("power:0.5") == Power(0.5)
    assert parse_gspec("clip-above:B", bn=2.0) == ClipAbove(2.0)
    assert parse_gspec("clip-below:3") == ClipBelow(3.0)
    assert parse_gspec("scaled:7:power:0.3") == Scaled(7.0, Power(0.3))
    knots = tmp_path / "k.json"
    knots.write_text("[[1, 1], [2, 1.5]]")
    g = parse_gspec(f"tabulated:@{knots}")
    assert g(1.5) == 1.25
    roundtrip = parse_gspec(parse_gspec("tabulated:[[1, 1], [2, 1.5]]").spec())
    assert roundtrip(1.5) == 1.25
    for bad in ["nope", "power:x", "power:2", "clip-above:B", "clip-above:-1", "scaled:2", "tabulated:@/missing.json"]:
        with pytest.raises(GSpecError):
            parse_gspec(bad)


def test_spec_roundtrip():
    for g in BUILTINS:
        assert parse_gspec(g.spec()) == g
        assert math.isclose(parse_gspec(g.spec())(1.7), g(1.7))


def test_parse_member_rejects_non_members():
    from lindeberg_lab.gclass import parse_member

    assert parse_member("clip-below:B", bn=2.0) == ClipBelow(2.0)
    with pytest.raises(GSpecError, match="fails between"):
        parse_member("tabulated:[[1, 1], [2, 3]]")
    with pytest.raises(GSpecError):
        parse_member("tabulated:[[1, 1], [2, 0.5]]")
