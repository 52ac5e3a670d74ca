from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from hscattered import linalg
from hscattered.errors import (
    BadH,
    BadParams,
    DependentRows,
    EnumerationTooLarge,
    NotMaximum,
    TowerMismatch,
    ZeroScalar,
)
from hscattered.gf import make_field
from hscattered.subspace import (
    FqSubspace,
    HyperplaneSpectrum,
    check_intersection_window,
    classify_bound,
    dimension_bound,
    direct_sum,
    first_violation,
    fqn_span_dim,
    gabidulin_subspace,
    hyperplane_spectrum,
    intersection_window,
    is_h_scattered,
    is_h_scattered_by_subsets,
    scalar_multiple,
    search_scattered,
    subgeometry,
    subspace_from_json,
    subspace_to_json,
)

from oracles import brute_scattered, brute_spectrum, fq_elements, fqn_subspaces, span_elements

T8 = make_field(2, 1, 3)
T4 = make_field(2, 1, 2)
T16 = make_field(2, 1, 4)

LINES_F8_2 = fqn_subspaces(T8, 2, 1)
LINES_F4_3 = fqn_subspaces(T4, 3, 1)
PLANES_F4_3 = fqn_subspaces(T4, 3, 2)


def random_subspace(rng, tower, r, k):
    while True:
        rows = [[rng.randrange(tower.order) for _ in range(r)] for _ in range(k)]
        flat = [linalg.flatten(v, tower) for v in rows]
        if linalg.rank(flat, tower.fq) == k:
            return FqSubspace(tower, r, rows)


def test_dependent_rows_rejected():
    with pytest.raises(DependentRows):
        FqSubspace(T8, 2, [[1, 2], [1, 2]])


def test_fqn_span_dim_examples():
    assert fqn_span_dim(subgeometry(T8, 3)) == 3
    inside = FqSubspace(T8, 3, [[1, 0, 0], [2, 5, 0]])
    assert fqn_span_dim(inside) < 3
    assert fqn_span_dim(gabidulin_subspace(T8, 2)) == 2


def test_gabidulin_f8_is_1_scattered_and_matches_oracle():
    U = gabidulin_subspace(T8, 2)
    assert U.k == 3
    v = is_h_scattered(U, 1)
    assert v.ok and bool(v)
    assert brute_scattered(U, 1, LINES_F8_2)


def test_line_is_not_scattered_with_witness():
    line = FqSubspace.span(T8, 2, [[b, T8.fqn.mul(b, 3)] for b in T8.power_basis()])
    assert line.k == 3
    # a line is not spanning when r = 2, so add a vector outside it
    U = FqSubspace.span(T8, 2, list(line.basis) + [[0, 1]])
    v = is_h_scattered(U, 1)
    assert not v.ok and v.reason == "intersection too large"
    witness = frozenset(span_elements(v.witness, T8.fqn, range(8)))
    assert frozenset(span_elements([[1, 3]], T8.fqn, range(8))) == witness
    assert v.witness_meet_dim == 3
    assert is_h_scattered(line, 1).reason == "not spanning"


def test_subgeometry_is_2_scattered():
    assert is_h_scattered(subgeometry(T8, 3), 2).ok
    assert is_h_scattered(subgeometry(T8, 3), 1).ok


def test_bad_h_and_cap():
    U = gabidulin_subspace(T8, 2)
    for h in (0, 2):
        with pytest.raises(BadH):
            is_h_scattered(U, h)
    with pytest.raises(EnumerationTooLarge):
        is_h_scattered(U, 1, cap=3)


def test_dimension_bound_examples():
    assert dimension_bound(2, 3, 1).bound == 3
    assert dimension_bound(3, 5, 2).bound == 5
    b = dimension_bound(4, 3, 3)
    assert b.bound == 3 and b.subgeometry_exception_dim == 4
    with pytest.raises(BadH):
        dimension_bound(2, 3, 2)


def test_r4_n3_h3_only_subgeometry_branch():
    # random spanning subspaces of dimension 4 or more in F_8^4 are never 3-scattered beyond k = 4
    rng = random.Random(0)
    found = 0
    for _ in range(30):
        U = random_subspace(rng, T8, 4, rng.choice([4, 5]))
        if is_h_scattered_by_subsets(U, 3):
            found += 1
            assert classify_bound(U, 3) == "subgeometry"
    assert classify_bound(subgeometry(T8, 4), 3) == "subgeometry"
    assert is_h_scattered_by_subsets(subgeometry(T8, 4), 3)


def test_gabidulin_variants():
    U = gabidulin_subspace(T16, 2)
    assert U.k == 4 and is_h_scattered(U, 1).ok
    T32 = make_field(2, 1, 5)
    V = gabidulin_subspace(T32, 3, sub_dim=4)
    assert V.k == 4 and is_h_scattered(V, 2).ok
    with pytest.raises(BadParams):
        gabidulin_subspace(T8, 4)
    with pytest.raises(BadParams):
        gabidulin_subspace(T8, 2, sub_dim=4)


def test_direct_sum_examples():
    G = gabidulin_subspace(T8, 2)
    assert direct_sum([G]) == G
    U = direct_sum([G, G])
    assert (U.r, U.k) == (4, 6)
    assert is_h_scattered(U, 1).ok
    assert U.k == dimension_bound(4, 3, 1).bound
    with pytest.raises(TowerMismatch):
        direct_sum([G, gabidulin_subspace(T16, 2)])


def test_direct_sum_r3_n4_is_2_scattered():
    G = gabidulin_subspace(T16, 3)
    U = direct_sum([G, G])
    assert (U.r, U.k) == (6, 8) and dimension_bound(6, 4, 2).bound == 8
    # enumerating F_16-planes of F_16^6 is out of reach, so decide inside U
    with pytest.raises(EnumerationTooLarge):
        is_h_scattered(U, 2)
    assert is_h_scattered_by_subsets(U, 2)


def test_spectrum_examples():
    spec = hyperplane_spectrum(gabidulin_subspace(T8, 2))
    assert spec.counts == {0: 2, 1: 7} == brute_spectrum(gabidulin_subspace(T8, 2))
    assert check_intersection_window(spec, 1)
    assert intersection_window(2, 3, 1) == (0, 1)
    sg = hyperplane_spectrum(subgeometry(T8, 3))
    assert set(sg.counts) <= {0, 1, 2} and sg.total() == 73
    assert sg.counts == brute_spectrum(subgeometry(T8, 3))


def test_direct_sum_spectrum_window():
    G = gabidulin_subspace(T8, 2)
    spec = hyperplane_spectrum(direct_sum([G, G]))
    assert spec.total() == 585
    assert intersection_window(4, 3, 1) == (3, 4)
    assert check_intersection_window(spec, 1)


def test_synthetic_window_violation_and_not_maximum():
    spec = HyperplaneSpectrum({0: 1, 1: 7, 2: 1}, 2, 3, 2, 3)
    assert not check_intersection_window(spec, 1)
    with pytest.raises(NotMaximum):
        check_intersection_window(HyperplaneSpectrum({0: 9}, 2, 3, 2, 2), 1)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_spectrum_matches_brute_force_random(k):
    rng = random.Random(k)
    for _ in range(5):
        U = random_subspace(rng, T8, 2, k)
        spec = hyperplane_spectrum(U)
        assert spec.counts == brute_spectrum(U)
        assert spec.satisfies_count_identity()


def test_scalar_multiple():
    U = gabidulin_subspace(T8, 2)
    assert scalar_multiple(1, U) == U
    assert scalar_multiple(1, U).canonical == U.canonical
    g = T8.fqn.generator
    V = scalar_multiple(g, U)
    assert hyperplane_spectrum(V).counts == hyperplane_spectrum(U).counts
    assert is_h_scattered(V, 1).ok
    with pytest.raises(ZeroScalar):
        scalar_multiple(0, U)
    T9 = make_field(3, 1, 2)
    W = subgeometry(T9, 2)
    assert scalar_multiple(2, W) == W


def test_spectrum_invariant_under_coordinate_permutation():
    G = gabidulin_subspace(T8, 2)
    U = direct_sum([G, subgeometry(T8, 1)])
    perm = [2, 0, 1]
    V = FqSubspace(T8, 3, [[v[p] for p in perm] for v in U.basis])
    assert hyperplane_spectrum(U).counts == hyperplane_spectrum(V).counts


def test_search_examples():
    U = search_scattered(T8, 2, 1, 2, seed=5)
    assert U.k == 2 and is_h_scattered(U, 1).ok
    V = search_scattered(T8, 2, 1, 3, seed=1)
    assert hyperplane_spectrum(V).counts == {0: 2, 1: 7}
    assert search_scattered(T8, 2, 1, 3, seed=1) == V
    W = search_scattered(T16, 3, 1, 6, seed=0)
    assert W.k == 6 and is_h_scattered(W, 1).ok
    with pytest.raises(BadParams):
        search_scattered(T8, 2, 1, 4)


def test_first_violation_is_minimum_index():
    rng = random.Random(21)
    for _ in range(20):
        U = random_subspace(rng, T4, 3, rng.randint(3, 5))
        for h in (1, 2):
            expected = None
            elems = fq_elements(U)
            for index, rows in linalg.iter_rref_subspaces(T4.fqn, 3, h):
                W = span_elements(rows, T4.fqn, range(4))
                if len(elems & W) > 2**h:
                    expected = index
                    break
            hit = first_violation(U, h)
            assert (hit[0] if hit else None) == expected
            hit4 = first_violation(U, h, workers=4)
            assert hit4 == hit


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10**6), st.integers(2, 5))
def test_scattered_matches_oracle_and_properties(seed, k):
    rng = random.Random(seed)
    U = random_subspace(rng, T4, 3, k)
    for h, subs in ((1, LINES_F4_3), (2, PLANES_F4_3)):
        got = is_h_scattered(U, h).ok
        assert got == brute_scattered(U, h, subs)
        assert got == is_h_scattered_by_subsets(U, h)
        if got:
            assert classify_bound(U, h) != "violates"
            for i in range(1, h):
                assert is_h_scattered(U, i).ok


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_f8_2_oracle(seed, k):
    U = random_subspace(random.Random(seed), T8, 2, k)
    assert is_h_scattered(U, 1).ok == brute_scattered(U, 1, LINES_F8_2)


def test_json_round_trip():
    G = gabidulin_subspace(make_field(3, 2, 2), 2)
    data = json.loads(json.dumps(subspace_to_json(G, {"construction": "gabidulin"})))
    assert subspace_from_json(data) == G
    assert data["provenance"] == {"construction": "gabidulin"}


def test_csv_round_trip():
    spec = hyperplane_spectrum(direct_sum([gabidulin_subspace(T8, 2)] * 2))
    back = HyperplaneSpectrum.from_csv(spec.to_csv())
    assert back == spec
    assert spec.to_csv().splitlines()[4] == "i,h_i"


def test_workers_do_not_change_results():
    G = gabidulin_subspace(T8, 2)
    U = direct_sum([G, G])
    assert hyperplane_spectrum(U, workers=3).counts == hyperplane_spectrum(U).counts
    assert is_h_scattered(U, 2, workers=3).to_json(T8) == is_h_scattered(U, 2).to_json(T8)


def test_bound_is_rational():
    assert dimension_bound(3, 4, 2).bound == Fraction(4)
    assert dimension_bound(3, 5, 2).bound == Fraction(5)
    assert dimension_bound(3, 5, 1).bound == Fraction(15, 2)
