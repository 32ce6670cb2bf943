import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptpartner import models
from ptpartner.errors import GridMismatch
from ptpartner.exact import shifted_osc_levels
from ptpartner.potential import mass_flip
from ptpartner.solver import Contour, solve_fd
from ptpartner.verify import (
    VerifyConfig,
    ZnojilConfig,
    eigenvectors,
    ortho_check,
    pair_spectra,
    verify_proposition,
    znojil_duality,
)

KEYS = ["mode", "pairs", "unmatched_a", "unmatched_b", "max_deviation", "fitted_shift", "verdict"]


# --- pairing ----------------------------------------------------------------


def test_pair_direct_isospectral():
    r = pair_spectra([1, 3, 5], [1 + 1e-7, 3, 5 - 1e-7], 1e-3, "direct")
    assert r.verdict == "isospectral" and r.max_deviation <= 1e-7 + 1e-15


def test_pair_sign_flipped():
    assert pair_spectra([1, 3], [-1, -3], 1e-6, "sign_flipped").verdict == "isospectral"


def test_pair_failed():
    r = pair_spectra([1, 3], [2, 5], 1e-3, "direct")
    assert r.verdict == "failed" and r.unmatched_a and r.unmatched_b
    assert r.max_deviation is None


def test_pair_partial():
    r = pair_spectra([0.5, 3.5, 4.5, 7.5], [-3.5, -7.5], 1e-3, "sign_flipped")
    assert r.verdict == "partial"
    assert [(i, j) for i, j, _ in r.pairs] == [(1, 0), (3, 1)]
    assert r.unmatched_a == [0, 2]


def test_pair_constant_shift():
    r = pair_spectra([11, 13, 15, 17], [1, 3, 5, 7], 1e-9, "constant_shifted")
    assert r.verdict == "isospectral" and r.fitted_shift == 10


def test_pair_shift_fit_is_median():
    # one misconverged level does not move the fitted shift
    r = pair_spectra([11, 13, 15, 17], [1, 3, 5, 6], 1e-9, "constant_shifted")
    assert r.fitted_shift == 10 and r.unmatched_a == [3]


def test_pair_rejects_empty_and_bad_mode():
    with pytest.raises(ValueError):
        pair_spectra([], [1], 1e-3)
    with pytest.raises(ValueError):
        pair_spectra([1], [1], 1e-3, "sideways")


def test_pair_json_fields():
    d = pair_spectra([1, 3], [2, 4], 2, "constant_shifted").to_dict()
    assert list(d) == KEYS
    assert d["fitted_shift"] == [-1.0, 0.0]
    json.dumps(d, allow_nan=False)


cplx = st.builds(complex, st.floats(-50, 50), st.floats(-5, 5))


@given(st.lists(cplx, min_size=1, max_size=8), st.floats(1e-6, 10))
def test_pair_self_is_isospectral(a, tol):
    r = pair_spectra(a, a, tol, "direct")
    assert r.verdict == "isospectral" and r.max_deviation == 0


@given(st.lists(cplx, min_size=1, max_size=6), st.lists(cplx, min_size=1, max_size=6), st.floats(1e-3, 200))
def test_pair_direct_symmetric_deviation(a, b, tol):
    ab = pair_spectra(a, b, tol, "direct")
    ba = pair_spectra(b, a, tol, "direct")
    assert ab.max_deviation == ba.max_deviation
    assert ab.verdict == ba.verdict


@given(st.lists(cplx, min_size=1, max_size=6), st.lists(cplx, min_size=1, max_size=6))
def test_pair_one_to_one(a, b):
    r = pair_spectra(a, b, 5.0, "direct")
    assert len({p[0] for p in r.pairs}) == len(r.pairs) == len({p[1] for p in r.pairs})
    assert len(r.pairs) + len(r.unmatched_a) == len(a)
    assert len(r.pairs) + len(r.unmatched_b) == len(b)


def test_mass_flip_sign_pairing_exact():
    h = models.shifted_oscillator(0.75)
    c = Contour.shifted(-8, 8, -1, 600)
    a = solve_fd(h, c, 4)
    b = solve_fd(mass_flip(h), c, 4)
    r = pair_spectra(a, b, 1e-12, "sign_flipped")
    assert r.verdict == "isospectral"


# --- ortho --------------------------------------------------------------------


def test_ortho_hermitian_vectors():
    c = Contour.real(-10, 10, 1001)
    r = ortho_check(eigenvectors(models.harmonic(), c, 4), c)
    assert r.gram_hermitian.shape == (4, 4)
    assert r.dev_hermitian <= 1e-6


def test_ortho_single_gaussian():
    c = Contour.real(-10, 10, 2001)
    g = np.exp(-c.x**2 / 2)
    g /= math.sqrt(np.trapezoid(g**2, c.x))
    r = ortho_check([g], c)
    assert r.gram_pt[0, 0] == pytest.approx(1, abs=1e-12)
    assert r.dev_pt_plus == pytest.approx(math.sqrt(2)) and r.dev_pt_minus == pytest.approx(math.sqrt(2))


def test_ortho_grid_mismatch():
    c = Contour.real(-10, 10, 101)
    with pytest.raises(GridMismatch):
        ortho_check([np.ones(50)], c)
    with pytest.raises(GridMismatch):
        ortho_check([np.ones(101)], Contour.real(0, 10, 101))


def test_ortho_json():
    c = Contour.real(-5, 5, 101)
    d = ortho_check([np.exp(-c.x**2)], c).to_dict()
    assert list(d) == ["gram_hermitian", "gram_pt", "dev_hermitian", "dev_pt_plus", "dev_pt_minus"]
    assert len(d["gram_pt"][0][0]) == 2


# --- proposition pipeline -----------------------------------------------------


@pytest.fixture(scope="module")
def half_alpha_report():
    return verify_proposition(models.shifted_oscillator(0.5), Contour.shifted(-12, 12, -1, 2000))


def test_verify_half_alpha(half_alpha_report):
    r = half_alpha_report
    np.testing.assert_allclose(r.pt_spectrum.eigenvalues, [1, 3, 5, 7], atol=1e-5)
    against_exact = pair_spectra(r.pt_spectrum, shifted_osc_levels(0.5, 1, 3), 1e-3, "direct")
    assert against_exact.verdict == "isospectral" and against_exact.max_deviation <= 1e-4
    assert r.pairing("sign_flipped").verdict == "isospectral"
    assert r.diagnostics["half_line"] is None
    assert r.failed_stage is None


def test_verify_report_json(half_alpha_report):
    d = json.loads(json.dumps(half_alpha_report.to_dict(), allow_nan=False))
    assert [p["mode"] for p in d["pairings"]] == ["direct", "sign_flipped", "constant_shifted"]
    assert all(list(p) == KEYS for p in d["pairings"])
    assert d["partner"]["mass"] == -0.5


def test_verify_records_half_line():
    r = verify_proposition(models.shifted_oscillator(0.75), Contour.shifted(-10, 10, -1, 1500))
    assert r.diagnostics["half_line"]["pole"] == -1.0
    assert r.verdict == "partial"


def test_verify_tags_failed_stage():
    # the contour Im z = +1 runs straight through the pole at z = i
    r = verify_proposition(models.shifted_oscillator(0.75, c=1.0), Contour.shifted(-10, 10, 1, 101))
    assert r.failed_stage == "pt_solve" and r.verdict == "failed" and "PoleOnContour" in r.error


# --- Znojil ---------------------------------------------------------------------


def test_znojil_small():
    cfg = ZnojilConfig(levels=2, boxes=(8.0, 10.0), n_points=1200)
    r = znojil_duality(1.0, 0.1, cfg)
    assert r.pairing is not None and r.pairing.mode == "constant_shifted"
    assert len(r.plus_reliable) == 2 and all(r.plus_reliable)
    assert r.dual_pairing.verdict == "isospectral"
    assert r.dual_pairing.fitted_shift.real == pytest.approx(r.predicted_shift, abs=1e-6)
    json.dumps(r.to_dict(), allow_nan=False)


def test_znojil_validation():
    with pytest.raises(ValueError):
        znojil_duality(-1.0, 0.1)


def test_verify_config_defaults():
    cfg = VerifyConfig()
    assert (cfg.levels, cfg.tol, cfg.sign, cfg.half_line_offset) == (4, 1e-3, -1, 1e-6)
