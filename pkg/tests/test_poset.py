import itertools

import pytest

from arrfan import intlinalg as la
from arrfan.arrangement import catalog, is_crystallographic, make_arrangement
from arrfan.errors import BadReferenceError, NotCrystallographicError
from arrfan.fan import fan_faces, fan_from_arrangement, roots_from_fan, star_fan
from arrfan.poset import (
    flat_from_constraints,
    flat_from_generators,
    flat_intersection,
    flat_leq,
    intersection_poset,
    parabolic_arrangement,
    poset_to_json,
    restricted_arrangement,
    toric_arrangement_report,
)


def brute_flats(a):
    """All flats by raw subset enumeration (dedup by canonical kernel basis)."""
    out = {flat_from_constraints(a.rank, ()).basis}
    covs = a.positive_covectors
    for k in range(1, len(covs) + 1):
        for subset in itertools.combinations(covs, k):
            out.add(flat_from_constraints(a.rank, subset).basis)
    return out


def test_intersection_poset_counts():
    p = intersection_poset(catalog("A_2"))
    assert len(p.flats) == 5
    assert sorted(f.dim for f in p.flats) == [0, 1, 1, 1, 2]

    r1 = intersection_poset(make_arrangement(1, [(1,)]))
    assert [f.dim for f in r1.flats] == [0, 1]

    p3 = intersection_poset(catalog("A_3"))
    assert len(p3.flats) == 15  # flats of the rank-3 braid arrangement


def test_intersection_poset_matches_brute_force():
    for name in ("A_2", "B_2", "A_3", "B_3"):
        a = catalog(name)
        assert {f.basis for f in intersection_poset(a).flats} == brute_flats(a)


def test_cover_relations():
    p = intersection_poset(catalog("A_2"))
    # zero flat covered by all three lines, lines covered by the whole space
    zero = next(i for i, f in enumerate(p.flats) if f.dim == 0)
    top = next(i for i, f in enumerate(p.flats) if f.dim == 2)
    lows = [c for c in p.cover_pairs if c[0] == zero]
    highs = [c for c in p.cover_pairs if c[1] == top]
    assert len(lows) == 3 and len(highs) == 3
    for i, j in p.cover_pairs:
        assert p.flats[i].dim + 1 == p.flats[j].dim
        assert flat_leq(p.flats[i], p.flats[j])


def test_flat_algebra():
    e = flat_from_constraints(3, [(1, 0, 0)])
    f = flat_from_constraints(3, [(0, 1, 0)])
    cap = flat_intersection(3, e, f)
    assert cap.dim == 1 and cap.basis == ((0, 0, 1),)
    assert flat_leq(cap, e) and flat_leq(cap, f)
    assert flat_from_generators(3, [(0, 0, 2)]).basis == ((0, 0, 1),)
    # flat bases are saturated: all-ones Smith form
    for flat in intersection_poset(catalog("B_3")).flats:
        if flat.dim:
            assert la.snf(flat.basis) == (1,) * flat.dim


def test_restricted_arrangement():
    a3 = catalog("A_3")
    full = flat_from_constraints(3, ())
    assert restricted_arrangement(a3, full) == a3

    poset = intersection_poset(a3)
    for flat in poset.flats:
        if flat.dim == 2:
            sub = restricted_arrangement(a3, flat)
            assert sub.rank == 2
            assert is_crystallographic(sub).verdict
            # count the distinct traces by brute pairwise intersection
            traces = set()
            for cov in a3.positive_covectors:
                if all(la.vec_dot(cov, row) == 0 for row in flat.basis):
                    continue
                cut = flat_intersection(
                    3, flat, flat_from_constraints(3, [cov])
                )
                traces.add(cut.basis)
            assert len(traces) == len(sub.positive_covectors)

    b2 = catalog("B_2")
    line = flat_from_constraints(2, [(1, 0)])
    assert restricted_arrangement(b2, line).positive_covectors == ((1,),)

    with pytest.raises(BadReferenceError):
        restricted_arrangement(a3, flat_from_constraints(3, ((1, -1, 0),)))
    with pytest.raises(BadReferenceError):
        restricted_arrangement(b2, flat_from_constraints(2, ((1, 0), (0, 1))))


def test_parabolic_arrangement():
    a3 = catalog("A_3")
    assert parabolic_arrangement(a3, ()) == a3

    f = fan_from_arrangement(a3)
    # the ray dual to the first simple covector in the fundamental chamber
    from arrfan.arrangement import enumerate_chambers

    k0 = enumerate_chambers(a3)[0]
    target = None
    for j, (i, s) in enumerate(k0.basis):
        if la.vec_scale(s, a3.positive_covectors[i]) == (1, 0, 0):
            target = k0.rays[j]
    idx = f.rays.index(target)
    pa = parabolic_arrangement(a3, (idx,))
    assert pa == catalog("A_2")

    a2 = catalog("A_2")
    f2 = fan_from_arrangement(a2)
    for i in range(len(f2.rays)):
        assert parabolic_arrangement(a2, (i,)).rank == 1

    with pytest.raises(ValueError):
        parabolic_arrangement(a2, f2.max_cones[0])  # full-dimensional cone
    with pytest.raises(BadReferenceError):
        parabolic_arrangement(a2, (0, 5))


def test_parabolic_equals_star_side_everywhere():
    for name in ("A_3", "B_3"):
        a = catalog(name)
        f = fan_from_arrangement(a)
        for face in fan_faces(f):
            if 0 < len(face) < a.rank:
                # equality with the star fan's covectors is asserted inside
                pa = parabolic_arrangement(a, face)
                assert pa == roots_from_fan(star_fan(f, face))
                assert is_crystallographic(pa).verdict


def test_restriction_and_parabolic_closure_over_catalog():
    # every flat gives a crystallographic restriction, every proper cone a
    # crystallographic parabolic, across the low-rank catalog
    from arrfan.fan import restrict_fan
    from arrfan.fan import check_properties

    names = ["A_2", "B_2", "C_2", "D_2", "A_3", "B_3", "C_3", "D_3"]
    instances = [catalog(n) for n in names] + [catalog("ngon:5:0"), catalog("ngon:5:3")]
    for a in instances:
        f = fan_from_arrangement(a)
        for flat in intersection_poset(a).flats:
            if flat.dim == 0:
                continue
            sub = restricted_arrangement(a, flat)
            assert is_crystallographic(sub).verdict
            assert check_properties(restrict_fan(f, flat.basis)).strongly_symmetric
        for face in fan_faces(f):
            if 0 < len(face) < a.rank:
                assert is_crystallographic(parabolic_arrangement(a, face)).verdict


def test_poset_order_isomorphism_across_catalog():
    for name in ("A_2", "B_2", "C_2", "D_2", "A_3", "C_3", "D_3", "ngon:4:0", "ngon:5:1"):
        rep = toric_arrangement_report(catalog(name))
        assert "order-isomorphism" in rep.checks


def test_toric_arrangement_report():
    rep = toric_arrangement_report(catalog("A_2"))
    assert rep.flat_count == 5
    assert rep.subfan_dims == (0, 1, 1, 1, 2)
    assert rep.subfan_sizes[0] == 1 and rep.subfan_sizes[-1] == 13
    assert "pairwise-intersections" in rep.checks

    rep11 = toric_arrangement_report(make_arrangement(2, [(1, 0), (0, 1)]))
    assert rep11.flat_count == 4

    rep3 = toric_arrangement_report(catalog("B_3"))
    assert rep3.flat_count == len(intersection_poset(catalog("B_3")).flats)

    with pytest.raises(NotCrystallographicError):
        toric_arrangement_report(make_arrangement(2, [(1, 0), (0, 1), (2, 1)]))


def test_poset_json():
    p = intersection_poset(catalog("A_2"))
    obj = poset_to_json(p)
    assert len(obj["flats"]) == 5
    assert all(set(f) == {"dim", "basis"} for f in obj["flats"])
    assert len(obj["cover_pairs"]) == 6
