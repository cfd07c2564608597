import cmath

import pytest
from hypothesis import given, strategies as st

from cyclosrg.arith import primitive_root_lifted
from cyclosrg.quartic import (Index4Error, InconsistentSystem, MSolution, Undecided,
                              classify_srg, eta_identities, eta_values, m_from_n,
                              m_relations, n_from_m, predicted_spectrum,
                              quartic_decomposition, solve_m_system, srg_ratio_candidates,
                              t_profile, two_squares_normalized)

SOL_7_37 = {(-1, 1, 1, -1), (-1, 1, -1, 1), (-1, -1, 1, 1), (-1, -1, -1, -1)}
SOL_3_13 = {(-3, -1, -1, 1), (-3, 1, -1, -1), (-3, -1, 1, -1), (-3, 1, 1, 1)}


@pytest.mark.parametrize("p1,g", [(13, 2), (37, 2), (5, 2)])
def test_primitive_root_lifted(p1, g):
    assert primitive_root_lifted(p1) == g
    assert pow(g, p1 - 1, p1 * p1) != 1


def test_decomposition_37_7():
    qd = quartic_decomposition(37, 7)
    assert qd.ftilde == 9
    assert set(qd.classes[0]) == {1, 7, 12, 10, 33, 9, 26, 34, 16}
    assert qd.b_list[0] == 4 and qd.b == 4
    assert (qd.A, qd.B) == (-1, 6)


def test_decomposition_13_3():
    qd = quartic_decomposition(13, 3)
    assert qd.g == 2 and qd.ftilde == 3
    assert qd.b_list == (1, 1, 2, 2) and qd.b == 1
    assert (qd.A, qd.B) == (3, 2)
    assert qd.classes[1] == (2, 5, 6)


def test_decomposition_errors():
    with pytest.raises(Index4Error):
        quartic_decomposition(13, 2)
    with pytest.raises(ValueError):
        quartic_decomposition(13, 13)


def test_eta_13():
    eta = eta_values(13)
    ids = eta_identities(eta)
    assert ids["sum_squares"][1] == -3 and ids["sum_opposite"][1] == 10
    for got, want in ids.values():
        assert got.to_int() == want
    assert eta.max_error < 1e-9
    assert abs(sum(eta.numeric) + 1) < 1e-12


def test_eta_rejects_bad_p1():
    with pytest.raises(ValueError):
        eta_values(17)


def test_solutions_match_examples():
    assert {s.M for s in solve_m_system(7, 37)} == SOL_7_37
    assert {s.M for s in solve_m_system(3, 13)} == SOL_3_13


def test_congruence_filter():
    qd = quartic_decomposition(37, 7)
    rel = m_relations((1, 1, 1, 1), 7, qd)
    assert rel["norm"] and not rel["M0 residue"]


def test_t_profiles():
    prof = t_profile(MSolution((-3, 1, 1, 1), n_from_m((-3, 1, 1, 1)), (1,)), 13)
    assert n_from_m((-3, 1, 1, 1)) == (0, -1, -1, -1)
    assert sorted(prof.values) == [-4, -4, -4, 9, 9] and prof.distinct_count == 2
    prof = t_profile(MSolution((-1, -1, -1, -1), (-1, 0, 0, 0), (1,)), 37)
    assert sorted(prof.values) == [-28, 9, 9, 9, 9]
    with pytest.raises(InconsistentSystem):
        t_profile(MSolution((0, 0, 0, 0), (0, 0, 0, 0), (1,)), 13)


def test_classify():
    v = classify_srg(37, solve_m_system(7, 37))
    assert v.is_srg and v.case_family == "p1-1 square"
    v = classify_srg(13, solve_m_system(3, 13))
    assert v.is_srg and v.case_family == "p1-9 square"
    v = classify_srg(29, [MSolution((-3, 1, 1, 1), (0, -1, -1, -1), (1,))])
    assert not v.is_srg and v.status == "not srg"
    with pytest.raises(ValueError):
        classify_srg(13, [])


def test_predicted_spectrum_examples():
    s = MSolution((-1, -1, -1, -1), (-1, 0, 0, 0), (1,))
    assert set(predicted_spectrum(7, 37, 1, s)) == {584, -1817}
    s = MSolution((-3, 1, 1, 1), (0, -1, -1, -1), (1,))
    assert predicted_spectrum(3, 13, 1, s) == {2: 4, -1: 9}
    assert set(predicted_spectrum(3, 13, 2, s)) == {804642554, -357618913}


def test_solution_independent_prediction():
    for p, p1 in [(7, 37), (3, 13)]:
        preds = [predicted_spectrum(p, p1, 1, s) for s in solve_m_system(p, p1)]
        assert all(x == preds[0] for x in preds)


def test_guard_and_work_limit():
    with pytest.raises(Undecided):
        solve_m_system(7, 37, guard_bits=4)
    with pytest.raises(Undecided):
        solve_m_system(7, 37, work_limit=0)


def test_ratio_prefilter_is_subset():
    for p, p1 in [(7, 37), (3, 13), (29, 13), (19, 101)]:
        full = {s.M for s in solve_m_system(p, p1)}
        assert {s.M for s in srg_ratio_candidates(p, p1)} <= full


def test_ambiguous_pair():
    v = classify_srg(101, solve_m_system(19, 101))
    assert v.status == "ambiguous" and not v.is_srg


@pytest.mark.parametrize("p1", [5, 13, 29, 37, 53, 61, 101, 109, 149, 157, 173, 181, 197])
def test_two_squares_unique(p1):
    (A, B), = two_squares_normalized(p1)
    assert A * A + B * B == p1 and A % 4 == 3 and B > 0


quad = st.tuples(*[st.integers(-50, 50)] * 4)


@given(quad)
def test_n_m_round_trip(N):
    assert n_from_m(m_from_n(N)) == N


def test_n_from_m_rejects_nonintegral():
    with pytest.raises(ValueError):
        n_from_m((1, 0, 0, 0))


def test_closed_forms_follow_classes():
    eta = eta_values(37)
    for z, c in zip(eta.numeric, eta.closed_form):
        assert cmath.isclose(z, c, abs_tol=1e-9)
