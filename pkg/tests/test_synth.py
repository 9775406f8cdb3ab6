"""Tangency systems and rejection synthesis."""

import pytest

from tfcurves import curve_tests, forms, levi, pg2, synth
from tfcurves.levi import Matching


@pytest.fixture(scope="module")
def matchings(fano):
    return list(levi.enumerate_matchings(fano))


def _first(fano):
    return next(iter(levi.enumerate_matchings(fano, 1)))


@pytest.mark.parametrize("d,width,kdim", [
    (3, 10, 0),   # overdetermined at cubic degree: no curve fits
    (4, 15, 1),
    (5, 21, 7),
    (6, 28, 14),
])
def test_system_shapes(fano, d, width, kdim):
    system = synth.tangency_system(_first(fano), d)
    assert len(system.rows) == 14  # two conditions per matched pair
    assert all(len(r) == width for r in system.rows)
    assert forms.num_coeffs(d) == width
    assert system.kernel_dim == kdim
    assert system.rank + system.kernel_dim == width
    assert system.kernel_dim >= width - 14  # rank caps at the row count


def test_kernel_elements_are_tangent_everywhere(fano, matchings):
    m = matchings[5]
    system = synth.tangency_system(m, 5)
    pairs = levi.matching_pairs(fano, m)
    for i in range(system.kernel_dim):
        unit = [1 if j == i else 0 for j in range(system.kernel_dim)]
        f = system.form_from_coords(unit)
        assert not f.is_zero()
        for point, line in pairs:
            assert curve_tests.is_tangent_at(f, line, point)
        assert curve_tests.is_transverse_free(f)


def test_sampling_is_deterministic(fano):
    m = _first(fano)
    a = synth.sample_transverse_free(2, 6, m, seed=1)
    b = synth.sample_transverse_free(2, 6, m, seed=1)
    assert isinstance(a, forms.TernaryForm)
    assert a == b
    rec = synth.synth_record(2, 6, m, seed=1)
    assert rec["ok"] is True
    assert forms.parse_form(rec["form"], a.ctx) == a
    assert rec["attempts"] >= 1
    assert rec["non_smooth"] == rec["attempts"] - 1


def test_successful_output_passes_independent_checks(fano):
    f = synth.sample_transverse_free(2, 6, _first(fano), seed=1)
    assert curve_tests.is_smooth(f, degree_cap=6)
    assert curve_tests.is_transverse_free(f)


def test_quartic_kernels_are_all_smooth(fano, matchings):
    # the one-dimensional kernels at d=4 give 24 distinct smooth
    # transverse-free quartics, one per matching
    seen = set()
    for m in matchings:
        system = synth.tangency_system(m, 4)
        assert system.kernel_dim == 1
        found = list(synth.kernel_smooth_scan(system))
        assert len(found) == 1
        f = found[0]
        assert curve_tests.is_smooth(f)
        assert curve_tests.is_transverse_free(f)
        seen.add(f.coeffs)
    assert len(seen) == len(matchings) == 24


def test_smooth_outputs_determine_their_matching(fano, matchings):
    # a smooth curve fixes one tangency point per line, so outputs of
    # two different matchings can never coincide; verified directly:
    # each smooth quartic satisfies only its own matching's conditions
    quartics = []
    for m in matchings:
        system = synth.tangency_system(m, 4)
        quartics.append(next(iter(synth.kernel_smooth_scan(system))))
    for i, f in enumerate(quartics):
        for j, m in enumerate(matchings):
            pairs = levi.matching_pairs(fano, m)
            full = all(curve_tests.is_tangent_at(f, line, point)
                       for point, line in pairs)
            assert full == (i == j)


def test_failure_paths(fano):
    m = _first(fano)
    out = synth.sample_transverse_free(2, 3, m, seed=1)
    assert isinstance(out, synth.SynthFailure)
    assert out.reason == "tangency system has trivial kernel"
    assert out.attempts == 0
    rec = out.to_record()
    assert rec["ok"] is False and rec["kind"] == "synth"
    quick = synth.sample_transverse_free(2, 5, m, seed=1, max_attempts=3)
    assert isinstance(quick, synth.SynthFailure)
    assert quick.attempts == 3
    assert quick.non_smooth == 3
    assert "no smooth kernel element" in quick.reason
    with pytest.raises(ValueError):
        synth.sample_transverse_free(2, 5, m, seed=1, max_attempts=0)
    with pytest.raises(ValueError):
        synth.sample_transverse_free(3, 5, m, seed=1)  # q mismatch
    # permutation that pairs line 0 with a point not on it
    bad = list(m.sigma)
    col = next(c for c in range(7) if not fano.mat[0][c])
    idx = bad.index(col)
    bad[0], bad[idx] = bad[idx], bad[0]
    with pytest.raises(ValueError):
        synth.tangency_system(Matching(tuple(bad)), 4)


@pytest.fixture(scope="module")
def rate_d6(fano):
    system = synth.tangency_system(_first(fano), 6)
    return synth.smooth_rate_report(system, seed=123, draws=400)


def test_smooth_rate_report_shape(rate_d6):
    rep = rate_d6
    assert rep["kind"] == "smooth_rate"
    assert rep["draws"] == 400
    assert 0 <= rep["smooth"] <= 400
    assert rep["kernel_density"] == 2.0 ** (14 - 28)
    assert rep["predicted_rate"] == pytest.approx(21 / 64)
    assert rep["measured_product"] == pytest.approx(
        rep["rate"] * rep["kernel_density"])


@pytest.mark.xfail(strict=True, reason=(
    "the smoothness rate inside the tangency kernel is asymptotic in "
    "the degree; at q=2, d=6 the measured rate is about 0.01 against "
    "a predicted 21/64, dozens of sigma apart (see the decision "
    "ledger's synthesis notes)"))
def test_smooth_rate_matches_asymptote_at_three_sigma(rate_d6):
    assert abs(rate_d6["z"]) <= 3.0


def test_smooth_rate_measured_value_is_stable(rate_d6):
    # the honest finite-degree rate, pinned: far below the asymptote
    assert rate_d6["smooth"] == 4
    assert rate_d6["rate"] == pytest.approx(0.01)
    assert rate_d6["z"] < -3.0
