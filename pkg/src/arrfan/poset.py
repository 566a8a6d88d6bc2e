"""The intersection poset of an arrangement and its reflection in the fan.

Flats are subspaces cut out by hyperplane subsets, stored as the
Hermite-canonical basis of the saturated sublattice they carry, so equality
of flats is equality of basis rows.  The toric-arrangement report verifies,
purely on cones, the statements that make the family of flat subfans an
embedded copy of the poset.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import intlinalg as la
from .arrangement import Arrangement, is_crystallographic
from .errors import BadReferenceError, CertificationError, NotCrystallographicError
from .fan import (
    fan_faces,
    fan_from_arrangement,
    quotient_data,
    restrict_fan,
    roots_from_fan,
    star_fan,
)
from .intlinalg import Mat, Vec


@dataclass(frozen=True)
class FlatSubspace:
    dim: int
    basis: Mat  # Hermite-canonical rows of the saturated sublattice


@dataclass(frozen=True)
class IntersectionPoset:
    flats: tuple[FlatSubspace, ...]      # sorted by (dim, basis)
    cover_pairs: tuple[tuple[int, int], ...]  # (i, j): flats[i] covered by flats[j]


@dataclass(frozen=True)
class ToricArrangementReport:
    flat_count: int
    subfan_dims: tuple[int, ...]   # per flat, = flat dimension
    subfan_sizes: tuple[int, ...]  # number of fan faces inside each flat
    checks: tuple[str, ...]


def flat_from_constraints(rank: int, covectors: Sequence[Vec]) -> FlatSubspace:
    """The flat annihilated by the given covectors (all of Z^rank when empty)."""
    rows = [tuple(c) for c in covectors]
    if not rows:
        return FlatSubspace(dim=rank, basis=la.identity(rank))
    basis = la.kernel_basis(rows)
    return FlatSubspace(dim=len(basis), basis=basis)


def flat_from_generators(rank: int, vectors: Sequence[Vec]) -> FlatSubspace:
    """The flat spanned by the given lattice vectors (saturated)."""
    basis = la.saturation_basis([tuple(v) for v in vectors], rank)
    return FlatSubspace(dim=len(basis), basis=basis)


def flat_contains(e: FlatSubspace, v: Vec) -> bool:
    if e.dim == 0:
        return all(x == 0 for x in v)
    return la.solve_in_row_space(e.basis, v) is not None


def flat_leq(e: FlatSubspace, f: FlatSubspace) -> bool:
    return all(flat_contains(f, row) for row in e.basis) if e.dim else True


def flat_intersection(rank: int, e: FlatSubspace, f: FlatSubspace) -> FlatSubspace:
    constraints = []
    for g in (e, f):
        if g.dim == rank:
            continue
        if g.dim == 0:
            return FlatSubspace(dim=0, basis=())
        constraints.extend(la.kernel_basis(g.basis))
    return flat_from_constraints(rank, constraints)


def _annihilator(rank: int, e: FlatSubspace) -> Mat:
    """Covectors vanishing on the flat (basis of the orthogonal sublattice)."""
    if e.dim == 0:
        return la.identity(rank)
    if e.dim == rank:
        return ()
    return la.kernel_basis(e.basis)


def intersection_poset(a: Arrangement) -> IntersectionPoset:
    """All intersections of hyperplane subsets, with cover relations.

    Closure by repeated single-hyperplane refinement starting from the whole
    space; flats are deduplicated by canonical basis and sorted by dimension.
    """
    r = a.rank
    top = flat_from_constraints(r, ())
    flats = {top.basis: top}
    frontier = [top]
    while frontier:
        nxt = []
        for flat in frontier:
            for cov in a.positive_covectors:
                if all(la.vec_dot(cov, row) == 0 for row in flat.basis):
                    continue  # hyperplane contains the flat
                cut = flat_from_constraints(
                    r, tuple(_annihilator(r, flat)) + (cov,)
                )
                if cut.basis not in flats:
                    flats[cut.basis] = cut
                    nxt.append(cut)
        frontier = nxt
    ordered = sorted(flats.values(), key=lambda f: (f.dim, f.basis))
    covers = []
    for i, low in enumerate(ordered):
        for j, high in enumerate(ordered):
            if low.dim < high.dim and flat_leq(low, high):
                between = any(
                    low.dim < mid.dim < high.dim
                    and flat_leq(low, mid)
                    and flat_leq(mid, high)
                    for mid in ordered
                )
                if not between:
                    covers.append((i, j))
    return IntersectionPoset(flats=tuple(ordered), cover_pairs=tuple(covers))


def _require_flat(a: Arrangement, e: FlatSubspace) -> None:
    containing = [
        cov
        for cov in a.positive_covectors
        if all(la.vec_dot(cov, row) == 0 for row in e.basis)
    ]
    if e.dim < a.rank and len(containing) < a.rank - e.dim:
        raise BadReferenceError("subspace is not a flat of the arrangement")
    if flat_from_constraints(a.rank, containing).basis != e.basis:
        raise BadReferenceError("subspace is not a flat of the arrangement")


def restricted_arrangement(a: Arrangement, e: FlatSubspace) -> Arrangement:
    """The traces of the other hyperplanes on a flat, in the flat's own lattice.

    Computed as the wall covectors of the fan restricted to the flat, which
    is certified crystallographic.  The flat must belong to the poset and be
    nonzero.
    """
    _require_flat(a, e)
    if e.dim == 0:
        raise BadReferenceError("restriction to the zero flat has rank 0")
    if e.dim == a.rank:
        return a
    f = fan_from_arrangement(a)
    return roots_from_fan(restrict_fan(f, e.basis))


def parabolic_arrangement(a: Arrangement, delta: Sequence[int]) -> Arrangement:
    """The covectors vanishing on a cone's span, pushed to the quotient lattice.

    delta is a face of the fan of `a`, given by ray indices, of dimension
    strictly below the rank.  The result is certified to equal the wall
    covectors of the star fan at delta (the two descriptions of the same
    arrangement), using the same deterministic quotient basis.
    """
    f = fan_from_arrangement(a)
    dl = tuple(sorted(set(delta)))
    if not dl:
        return a
    gens = f.cone_vectors(dl) if all(0 <= i < len(f.rays) for i in dl) else None
    if gens is None or not any(set(dl) <= set(c) for c in f.max_cones):
        raise BadReferenceError(f"cone {tuple(delta)} is not a face of the fan")
    if len(dl) == a.rank:
        raise ValueError("parabolic arrangement needs a cone of dimension below the rank")
    _, lifts, d = quotient_data(gens, a.rank)
    vanishing = [
        cov
        for cov in a.positive_covectors
        if all(la.vec_dot(cov, g) == 0 for g in gens)
    ]
    projected = set()
    for cov in vanishing:
        img = tuple(la.vec_dot(cov, lift) for lift in lifts)
        assert img == la.primitive(img)
        projected.add(la.canonical_sign(img))
    from .arrangement import make_arrangement

    result = make_arrangement(a.rank - d, sorted(projected))
    star_side = roots_from_fan(star_fan(f, dl))
    if result != star_side:
        raise CertificationError(
            "projected covectors disagree with the star fan's wall covectors"
        )
    return result


def toric_arrangement_report(a: Arrangement) -> ToricArrangementReport:
    """Verify the cone-level statements tying flats to subfans.

    For every flat E let S(E) be the faces of the chamber fan contained in E.
    Checked: (a) S(E n F) = S(E) n S(F) for all flat pairs; (b) slicing each
    face by E's vanishing covectors lands on a face and reproduces S(E)
    (the two descriptions of the flat subfan agree); (c) E <= F exactly when
    S(E) <= S(F); (d) faces with equal span have identical star fans; and the
    top dimension of S(E) equals dim E.  Any failure raises
    CertificationError; the report records sizes and dimensions.
    """
    if not is_crystallographic(a).verdict:
        raise NotCrystallographicError("report requires a crystallographic arrangement")
    r = a.rank
    f = fan_from_arrangement(a)
    poset = intersection_poset(a)
    faces = fan_faces(f)

    members: list[frozenset] = []
    for flat in poset.flats:
        inside = frozenset(
            face
            for face in faces
            if all(flat_contains(flat, f.rays[i]) for i in face)
        )
        members.append(inside)

    checks = []
    # (b) slicing each face by the flat's annihilating covectors is a face op
    for fi, flat in enumerate(poset.flats):
        ann = [
            cov
            for cov in a.positive_covectors
            if all(la.vec_dot(cov, row) == 0 for row in flat.basis)
        ]
        sliced = set()
        for face in faces:
            cur = face
            for cov in ann:
                vals = [la.vec_dot(cov, f.rays[i]) for i in cur]
                if any(v > 0 for v in vals) and any(v < 0 for v in vals):
                    raise CertificationError(
                        f"covector {cov} cuts the interior of face {cur}"
                    )
                cur = tuple(i for i in cur if la.vec_dot(cov, f.rays[i]) == 0)
            sliced.add(cur)
        if sliced != set(members[fi]):
            raise CertificationError(
                f"sliced faces disagree with containment for flat {flat.basis}"
            )
    checks.append("slice-vs-containment")

    # (a) intersections of flats match intersections of subfans
    index_of = {flat.basis: i for i, flat in enumerate(poset.flats)}
    for i, e in enumerate(poset.flats):
        for j, g in enumerate(poset.flats):
            cap = flat_intersection(r, e, g)
            if cap.basis not in index_of:
                raise CertificationError("poset is not intersection-closed")
            if members[index_of[cap.basis]] != members[i] & members[j]:
                raise CertificationError(
                    f"subfan of intersection differs from intersection of subfans "
                    f"({e.basis} vs {g.basis})"
                )
    checks.append("pairwise-intersections")

    # (c) order isomorphism onto the image
    for i, e in enumerate(poset.flats):
        for j, g in enumerate(poset.flats):
            if flat_leq(e, g) != (members[i] <= members[j]):
                raise CertificationError("subfan inclusion does not mirror flat order")
    checks.append("order-isomorphism")

    # (d) equal spans give identical star fans
    by_span: dict[Mat, list] = {}
    for face in faces:
        span = flat_from_generators(r, f.cone_vectors(face))
        by_span.setdefault(span.basis, []).append(face)
    for span_basis, group in sorted(by_span.items()):
        stars = {star_fan(f, face) for face in group}
        if len(stars) != 1:
            raise CertificationError(
                f"faces spanning {span_basis} have {len(stars)} distinct star fans"
            )
    checks.append("stars-depend-on-span")

    dims = []
    sizes = []
    for fi, flat in enumerate(poset.flats):
        top = max((len(face) for face in members[fi]), default=0)
        if top != flat.dim:
            raise CertificationError(
                f"subfan of flat {flat.basis} has top dimension {top}, not {flat.dim}"
            )
        dims.append(flat.dim)
        sizes.append(len(members[fi]))
    checks.append("dimensions")
    return ToricArrangementReport(
        flat_count=len(poset.flats),
        subfan_dims=tuple(dims),
        subfan_sizes=tuple(sizes),
        checks=tuple(checks),
    )


def poset_to_json(p: IntersectionPoset) -> dict:
    return {
        "flats": [{"dim": f.dim, "basis": [list(r) for r in f.basis]} for f in p.flats],
        "cover_pairs": [list(c) for c in p.cover_pairs],
    }
