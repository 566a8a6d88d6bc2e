import random
from fractions import Fraction

import pytest

from arrfan import intlinalg as la
from arrfan.arrangement import (
    arrangement_to_json,
    catalog,
    decompose,
    enumerate_chambers,
    is_crystallographic,
    load_arrangement,
    make_arrangement,
    positive_roots,
)
from arrfan.errors import (
    BadReferenceError,
    InputFormatError,
    LatticeSpanError,
    NotCrystallographicError,
    NotSimplicialError,
)

from oracles import brute_chamber_signs, gauss_solve


def test_load_basic():
    a = load_arrangement(b'{"rank":2,"positive_covectors":[[1,0],[0,1]]}')
    assert a.rank == 2
    assert a.positive_covectors == ((0, 1), (1, 0))


def test_load_rejections():
    with pytest.raises(InputFormatError):
        load_arrangement(b"{broken")
    with pytest.raises(InputFormatError):
        load_arrangement(b'{"rank":2,"positive_covectors":[[2,0],[0,1]]}')
    with pytest.raises(InputFormatError):
        load_arrangement(b'{"rank":2,"positive_covectors":[[1,0],[-1,0]]}')
    with pytest.raises(InputFormatError):
        load_arrangement(b'{"rank":2,"positive_covectors":[[0,0],[0,1]]}')
    with pytest.raises(InputFormatError):
        load_arrangement(b'{"rank":2,"positive_covectors":[[1.0,0],[0,1]]}')
    # covectors spanning a proper sublattice are rejected with their own error
    with pytest.raises(LatticeSpanError):
        load_arrangement(b'{"rank":2,"positive_covectors":[[1,1],[1,-1]]}')


def test_canonical_form_sign_and_order():
    a = make_arrangement(2, [(-1, 0), (0, 1), (-1, -1)])
    assert a.positive_covectors == ((0, 1), (1, 0), (1, 1))


def test_catalog_families():
    assert catalog("A_2").positive_covectors == ((0, 1), (1, 0), (1, 1))
    assert catalog("B_2").positive_covectors == ((0, 1), (1, 0), (1, 1), (1, 2))
    assert catalog("C_2").positive_covectors == ((0, 1), (1, 0), (1, 1), (2, 1))
    for r in range(2, 7):
        assert len(catalog(f"A_{r}").positive_covectors) == r * (r + 1) // 2
        assert len(catalog(f"B_{r}").positive_covectors) == r * r
        assert len(catalog(f"C_{r}").positive_covectors) == r * r
        assert len(catalog(f"D_{r}").positive_covectors) == r * (r - 1)
    with pytest.raises(BadReferenceError):
        catalog("E_8")
    with pytest.raises(BadReferenceError):
        catalog("A_9")
    with pytest.raises(BadReferenceError):
        catalog("ngon:4:2")


def test_catalog_ngon():
    assert catalog("ngon:3:0") == catalog("A_2")
    g1 = catalog("ngon:4:0")
    g2 = catalog("ngon:4:1")
    assert g1.rank == 2 and len(g1.positive_covectors) == 4
    assert g1 != g2


@pytest.mark.parametrize(
    "name,count",
    [("A_2", 6), ("B_2", 8), ("A_3", 24), ("B_3", 48)],
)
def test_chamber_counts(name, count):
    assert len(enumerate_chambers(catalog(name))) == count


def test_chambers_match_brute_force_signs():
    for name in ("A_2", "B_2", "A_3", "B_3"):
        a = catalog(name)
        got = {k.sign_vector for k in enumerate_chambers(a)}
        assert got == brute_chamber_signs(a.positive_covectors, a.rank)


def test_chambers_come_in_opposite_pairs():
    for name in ("A_2", "B_3"):
        a = catalog(name)
        chambers = enumerate_chambers(a)
        ray_sets = {k.rays for k in chambers}
        for k in chambers:
            assert tuple(sorted(la.vec_neg(v) for v in k.rays)) in ray_sets


def test_chamber_duality_pairing():
    for name in ("A_2", "A_3", "B_3"):
        a = catalog(name)
        for k in enumerate_chambers(a):
            b = k.basis_covectors(a)
            for i, beta in enumerate(b):
                for j, ray in enumerate(k.rays):
                    val = la.vec_dot(beta, ray)
                    assert (val > 0) if i == j else (val == 0)


def test_generic_points_tile_space():
    rng = random.Random(101)
    for name in ("A_2", "B_3"):
        a = catalog(name)
        chambers = {k.sign_vector: k for k in enumerate_chambers(a)}
        count = 0
        while count < 1000:
            p = tuple(rng.randint(-10**6, 10**6) for _ in range(a.rank))
            vals = [la.vec_dot(c, p) for c in a.positive_covectors]
            if any(v == 0 for v in vals):
                continue
            count += 1
            signs = tuple(1 if v > 0 else -1 for v in vals)
            assert signs in chambers


def test_positive_roots_examples():
    a = catalog("A_2")
    by_rays = {frozenset(k.rays): k for k in enumerate_chambers(a)}
    fund = by_rays[frozenset({(1, 0), (0, 1)})]
    assert set(positive_roots(a, fund)) == {(1, 0), (0, 1), (1, 1)}
    adj = by_rays[frozenset({(1, 0), (1, -1)})]
    assert set(positive_roots(a, adj)) == {(1, 0), (0, -1), (1, 1)}
    a11 = make_arrangement(2, [(1, 0), (0, 1)])
    for k in enumerate_chambers(a11):
        assert len(positive_roots(a11, k)) == 2


def test_is_crystallographic_catalog():
    assert is_crystallographic(catalog("A_2")).verdict
    assert is_crystallographic(make_arrangement(1, [(1,)])).verdict
    for name in ("B_3", "C_3", "D_3", "A_3"):
        assert is_crystallographic(catalog(name)).verdict


def test_is_crystallographic_failure_witness():
    bad = make_arrangement(2, [(1, 0), (0, 1), (2, 1)])
    report = is_crystallographic(bad)
    assert not report.verdict
    chamber, root, coords = report.witness
    assert root in bad.positive_covectors
    assert any(abs(c) == Fraction(1, 2) for c in coords)


def test_is_crystallographic_matches_rational_solve_oracle():
    cases = [catalog(n) for n in ("A_2", "B_2", "C_2", "A_3", "B_3", "C_3", "D_3")]
    cases.append(make_arrangement(2, [(1, 0), (0, 1), (2, 1)]))
    for a in cases:
        expected = True
        for k in enumerate_chambers(a):
            basis = k.basis_covectors(a)
            for root in a.positive_covectors:
                coords = gauss_solve(basis, root)
                if any(c.denominator != 1 for c in coords):
                    expected = False
        assert is_crystallographic(a).verdict == expected


def test_coordinates_one_sided_for_crystallographic():
    # each covector's coordinate vector in any wall basis is >= 0 or <= 0 entrywise
    for name in ("A_2", "B_2", "A_3", "B_3", "C_3", "D_3"):
        a = catalog(name)
        for k in enumerate_chambers(a):
            binv = la.mat_inverse_fraction(k.basis_covectors(a))
            for root in a.positive_covectors:
                coords = la.vec_mat(root, binv)
                assert all(c >= 0 for c in coords) or all(c <= 0 for c in coords)


def test_non_simplicial_rejected():
    a = make_arrangement(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, 3)])
    with pytest.raises(NotSimplicialError):
        enumerate_chambers(a)


def test_decompose():
    a11 = make_arrangement(2, [(1, 0), (0, 1)])
    factors, partition = decompose(a11)
    assert [f.rank for f in factors] == [1, 1]
    assert partition == ((0,), (1,))

    factors, partition = decompose(catalog("A_2"))
    assert len(factors) == 1 and factors[0] == catalog("A_2")

    b2 = catalog("B_2")
    padded = [c + (0,) for c in b2.positive_covectors] + [(0, 0, 1)]
    mixed = make_arrangement(3, padded)
    factors, partition = decompose(mixed)
    assert sorted(f.rank for f in factors) == [1, 2]
    assert sorted(len(p) for p in partition) == [1, 2]
    ranks = {f.rank: f for f in factors}
    # the induced coordinates may swap the two basis directions (B_2 <-> C_2 view)
    assert ranks[2] in (b2, catalog("C_2"))

    with pytest.raises(NotCrystallographicError):
        decompose(make_arrangement(2, [(1, 0), (0, 1), (2, 1)]))


def test_json_round_trip():
    a = catalog("B_3")
    import json

    assert load_arrangement(json.dumps(arrangement_to_json(a))) == a
