import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptpartner import models
from ptpartner.errors import (
    BranchAmbiguity,
    IndexOutOfRange,
    NonFinite,
    NotClosedUnderTransform,
    NotPTSymmetric,
    PoleProximity,
    SchemaError,
)
from ptpartner.potential import (
    Hamiltonian,
    IXPower,
    PotentialExpr,
    SecSquared,
    SechSquared,
    ShiftedPower,
    TransformSpec,
    canonical,
    check_pt_symmetry,
    check_real_on_axis,
    coupling_flip,
    dumps,
    eta_series,
    eta_transform,
    eval_potential,
    expr_from_coeffs,
    hermitian_partner,
    loads,
    mass_flip,
    rotate_potential,
    terms_equal,
)

GRID = [-2, -1, -0.5, 0.5, 1, 2]


def expr(*terms):
    return PotentialExpr(tuple(terms))


# --- evaluation ------------------------------------------------------------


def test_eval_monomial():
    assert eval_potential(expr(ShiftedPower(1, 0, 2)), 2) == 4


def test_eval_ix_cubed_at_one():
    assert eval_potential(expr(IXPower(1, 3)), 1) == pytest.approx(1j, abs=1e-15)


def test_eval_sech_at_origin():
    assert eval_potential(expr(SechSquared(-1, 0)), 0) == pytest.approx(-1)


def test_eval_empty_is_zero():
    assert eval_potential(expr(), 3.7 + 1j) == 0


def test_eval_sums_terms():
    e = expr(ShiftedPower(2, 0, 1), ShiftedPower(1j, 1, 2))
    z = 0.3 - 0.2j
    assert eval_potential(e, z) == pytest.approx(2 * z + 1j * (z - 1) ** 2)


def test_pole_proximity():
    e = expr(ShiftedPower(1, 1j, -2))
    with pytest.raises(PoleProximity):
        eval_potential(e, 1j + 1e-13)
    assert np.isfinite(eval_potential(e, 1j + 1e-6))


def test_sec_pole_and_overflow():
    with pytest.raises(PoleProximity):
        eval_potential(expr(SecSquared(1, 0)), math.pi / 2)
    with pytest.raises(NonFinite):
        eval_potential(expr(ShiftedPower(1e200, 0, 2)), 1e200)


def test_declared_poles():
    assert ShiftedPower(1, 2 + 1j, -1).poles() == (2 + 1j,)
    assert ShiftedPower(1, 2, 3).poles() == ()


def test_ix_principal_branch_noninteger():
    # -(ix)**2.5 with principal branch of ix at x = 1
    val = eval_potential(expr(IXPower(1.0, 2.5)), 1.0)
    assert val == pytest.approx(-cmath.exp(2.5 * 1j * math.pi / 2))


# --- PT and reality checks -------------------------------------------------


def test_pt_check_examples():
    ok, dev = check_pt_symmetry(expr(ShiftedPower(1j, 0, 3)), GRID, 1e-12)
    assert ok and dev < 1e-15
    ok, dev = check_pt_symmetry(expr(ShiftedPower(1, 0, 3)), GRID, 1e-12)
    assert not ok and dev == pytest.approx(16)
    ok, dev = check_pt_symmetry(models.shifted_oscillator(0.75).potential, GRID, 1e-12)
    assert ok and dev < 1e-12


def test_pt_check_grid_validation():
    with pytest.raises(ValueError):
        check_pt_symmetry(expr(), [], 1e-9)
    with pytest.raises(ValueError):
        check_pt_symmetry(expr(), [0.5, 1.0], 1e-9)


def test_real_on_axis_examples():
    ok, dev = check_real_on_axis(expr(ShiftedPower(-1, -1, 2)), GRID, 1e-12)
    assert ok and dev == 0
    ok, dev = check_real_on_axis(expr(ShiftedPower(1j, 0, 1)), GRID, 1e-12)
    assert not ok and dev == pytest.approx(2)
    rotated = rotate_potential(expr(ShiftedPower(1j, 0, 3)), -1)
    ok, _ = check_real_on_axis(rotated, [-2, -1, 1, 2], 1e-12)
    assert ok


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=4))
def test_even_real_polynomial_is_pt(cs):
    e = expr(*(ShiftedPower(c, 0, 2 * k) for k, c in enumerate(cs)))
    assert check_pt_symmetry(e, GRID, 1e-9)[0]


@given(st.floats(0.1, 5), st.sampled_from([1, 3, 5]))
def test_odd_real_monomial_is_not_pt(c, k):
    assert not check_pt_symmetry(expr(ShiftedPower(c, 0, k)), GRID, 1e-9)[0]


# --- rotation --------------------------------------------------------------


def test_rotate_shifted_square():
    out = rotate_potential(expr(ShiftedPower(1, 1j, 2)), -1)
    assert terms_equal(out.terms, [ShiftedPower(-1, -1, 2)])


def test_rotate_ix_cubed():
    out = rotate_potential(expr(IXPower(1, 3)), -1)
    assert terms_equal(out.terms, [ShiftedPower(-1, 0, 3)])


def test_rotate_sech_to_sec():
    A, c = 2.0, 0.7
    out = rotate_potential(expr(SechSquared(-A, 1j * c)), -1)
    assert terms_equal(out.terms, [SecSquared(-A, -c)])


def test_rotate_empty():
    assert rotate_potential(expr(), 1).terms == ()


def test_rotate_ix_plus_branches():
    out = rotate_potential(expr(IXPower(1.5, 2)), 1)
    assert eval_potential(out, 0.7) == pytest.approx(-1.5 * 0.7**2)
    with pytest.raises(BranchAmbiguity):
        rotate_potential(expr(IXPower(1.0, 2.5)), 1)


@pytest.mark.parametrize("sign", [1, -1])
def test_rotation_matches_substitution(sign):
    e = expr(
        ShiftedPower(0.3 + 0.1j, 0.5 - 1j, 3),
        ShiftedPower(1.2, 2j, -2),
        SechSquared(-1.1, 0.4j),
        SecSquared(0.5, 0.2),
        IXPower(0.8, 2),
    )
    r = rotate_potential(e, sign)
    for y in (0.13, -0.41, 0.27):
        assert eval_potential(r, y) == pytest.approx(eval_potential(e, sign * 1j * y), rel=1e-12)


def _term(kind, coef, shift, k):
    if kind == 0:
        return ShiftedPower(coef, shift, k)
    if kind == 1:
        return SechSquared(coef, shift)
    return SecSquared(coef, shift)


complex_st = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3))
term_st = st.builds(_term, st.integers(0, 2), complex_st, complex_st, st.integers(-3, 4))


@settings(max_examples=200)
@given(st.lists(term_st, max_size=5))
def test_rotation_round_trip(terms):
    e = expr(*terms)
    back = rotate_potential(rotate_potential(e, -1), 1)
    assert terms_equal(back.terms, e.terms, tol=1e-14)


def _pt_term(k, c):
    """Real coefficient on even powers, imaginary on odd ones: PT-symmetric."""
    return ShiftedPower(c if k % 2 == 0 else 1j * c, 0, k)


pt_expr_st = st.lists(st.builds(_pt_term, st.integers(0, 6), st.floats(-3, 3)), min_size=1, max_size=6)


@settings(max_examples=200)
@given(pt_expr_st, st.sampled_from([1, -1]))
def test_rotated_pt_is_real(terms, sign):
    e = expr(*terms)
    assert check_pt_symmetry(e, GRID, 1e-9)[0]
    ok, dev = check_real_on_axis(rotate_potential(e, sign), np.linspace(-3, 3, 61), 1e-9)
    assert ok, dev


# --- eta -------------------------------------------------------------------


def test_eta_examples():
    np.testing.assert_allclose(eta_series([0, 0, 1], math.pi / 2), [0, 0, -1], atol=1e-15)
    np.testing.assert_allclose(eta_series([0, 1], math.pi / 2), [0, -1j], atol=1e-15)
    c = [1 + 2j, -0.5, 3j]
    assert eta_series(c, 0.0) == c


@settings(max_examples=50)
@given(
    st.lists(complex_st, min_size=1, max_size=6),
    st.sampled_from([math.pi / 2, -math.pi / 2, 0.3]),
    st.floats(-2, 2),
)
def test_eta_consistent_with_scaling(coeffs, beta, x):
    e = expr_from_coeffs(coeffs)
    lhs = eval_potential(expr_from_coeffs(eta_series(coeffs, beta)), x)
    rhs = eval_potential(e, cmath.exp(-1j * beta) * x)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_eta_quarter_turn_is_rotation():
    e = expr(ShiftedPower(1j, 0, 3), ShiftedPower(2, 0, 2))
    assert terms_equal(eta_transform(e, math.pi / 2).terms, rotate_potential(e, -1).terms, tol=1e-15)


def test_eta_rejects_sech_at_generic_angle():
    with pytest.raises(NotClosedUnderTransform):
        eta_transform(expr(SechSquared(1, 0)), 0.3)


# --- mass flip, partner, coupling flip -------------------------------------


def test_mass_flip_ho():
    h = models.harmonic(omega=2, mass=1.0)
    f = mass_flip(h)
    assert f.mass == -1
    assert eval_potential(f.potential, 1.5) == pytest.approx(-2 * 1.5**2)


@given(st.floats(0.1, 3), st.floats(0, 2), st.floats(0.1, 2))
def test_mass_flip_involution(alpha, c, m):
    h = models.shifted_oscillator(alpha, c=c, mass=m)
    assert mass_flip(mass_flip(h)) == h


def test_mass_flip_leaves_independent_terms():
    h = Hamiltonian(0.5, expr(ShiftedPower(1j, 0, 3)))
    assert mass_flip(h).potential == h.potential


def test_partner_of_shifted_oscillator():
    h = models.shifted_oscillator(0.75, c=1.0)
    p, diag = hermitian_partner(h, -1)
    assert p.mass == -0.5
    assert diag.rotated_real and diag.real_deviation < 1e-12
    G = 0.75**2 - 0.25
    for y in (0.3, 2.0, -3.1):
        assert eval_potential(p.potential, y) == pytest.approx(-((y + 1) ** 2) - G / (y + 1) ** 2)
    assert list(diag.real_poles) == [-1.0]


def test_partner_of_bender_boettcher():
    p, _ = hermitian_partner(models.bender_boettcher(1.0, 3), -1)
    assert p.mass == -0.5
    assert terms_equal(p.potential.terms, [ShiftedPower(-1, 0, 3)])


def test_partner_of_zero_potential():
    p, _ = hermitian_partner(Hamiltonian(2.0, expr()), 1)
    assert p.mass == -2.0 and p.potential.terms == ()


def test_partner_requires_pt():
    with pytest.raises(NotPTSymmetric):
        hermitian_partner(Hamiltonian(0.5, expr(ShiftedPower(1, 0, 3))))


def test_coupling_flip():
    e = expr(SecSquared(-2.0, 0))
    assert coupling_flip(e, 0).terms[0].coef == 2.0
    assert coupling_flip(coupling_flip(e, 0), 0) == e
    with pytest.raises(IndexOutOfRange):
        coupling_flip(expr(), 0)


# --- transform specs and JSON ---------------------------------------------


@pytest.mark.parametrize(
    "text,kind",
    [
        ("rotate-minus", "rotate_minus"),
        ("rotate-plus", "rotate_plus"),
        ("eta:0.5", "eta_series"),
        ("mass-flip", "mass_flip"),
        ("coupling-flip:0", "coupling_flip"),
    ],
)
def test_transform_parse(text, kind):
    assert TransformSpec.parse(text).kind == kind


@pytest.mark.parametrize("text", ["rotate", "eta:x", "eta:nan", "coupling-flip", "mass-flip:2"])
def test_transform_parse_rejects(text):
    with pytest.raises(SchemaError):
        TransformSpec.parse(text)


def test_json_rotate_minus_schema():
    import json

    h = TransformSpec.parse("rotate-minus").apply(models.bender_boettcher(2.0, 3))
    term = json.loads(dumps(h))["terms"][0]
    assert term == {"kind": "shifted_power", "coef": [-2.0, 0.0], "shift": [0.0, 0.0], "exp": 3}


@pytest.mark.parametrize(
    "h",
    [
        models.shifted_oscillator(0.75),
        models.bender_boettcher(1.0, 2.5),
        models.sech_well(2.0, 0.5),
        models.trig_well(2.0),
        models.cubic_oscillator(1.0, 0.1, -1),
    ],
)
def test_json_round_trip_byte_stable(h):
    text = dumps(h)
    assert loads(text) == h
    assert dumps(loads(text)) == text


def test_rotate_round_trip_canonical_json():
    h = models.bender_boettcher(1.0, 3)
    back = TransformSpec("rotate_plus").apply(TransformSpec("rotate_minus").apply(h))
    canon = Hamiltonian(h.mass, canonical(h.potential))
    assert dumps(Hamiltonian(back.mass, canonical(back.potential))) == dumps(canon)


@pytest.mark.parametrize(
    "text",
    [
        "{bad",
        '{"terms": []}',
        '{"mass": 0, "terms": []}',
        '{"mass": 1, "terms": [{"kind": "cubic"}]}',
        '{"mass": 1, "terms": [{"kind": "sec2", "coef": [1]}]}',
        '{"mass": 1, "terms": [{"kind": "sec2", "coef": [1, 0], "extra": 1}]}',
        '{"mass": 1, "extra": 2}',
    ],
)
def test_json_rejects_malformed(text):
    with pytest.raises(SchemaError):
        loads(text)
