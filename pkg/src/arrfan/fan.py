"""Simplicial rational fans: construction from arrangements and back,
property checks, star/restriction fans, subdivisions, automorphisms.

Fans are stored by their maximal cones over a sorted primitive ray list; all
faces are generator subsets since every cone here is simplicial.  Non-simplicial
input is rejected.  Fan equality is structural equality of the canonical form
(sorted rays, sorted index tuples).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import intlinalg as la
from .arrangement import Arrangement, enumerate_chambers, make_arrangement
from .errors import (
    BadReferenceError,
    CertificationError,
    InputFormatError,
    MalformedFanError,
    NotCompleteError,
    NotCrystallographicError,
    NotSimplicialError,
    NotSmoothError,
    NotStronglySymmetricError,
)
from .intlinalg import Mat, Vec


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[Vec, ...]
    max_cones: tuple[tuple[int, ...], ...]

    def cone_vectors(self, cone: Sequence[int]) -> Mat:
        return tuple(self.rays[i] for i in cone)


@dataclass(frozen=True)
class PropertyReport:
    smooth: bool
    complete: bool
    centrally_symmetric: bool
    strongly_symmetric: bool
    hyperplanes: Mat | None = None
    failure_witness: object = None


@dataclass(frozen=True)
class BlowupEntry:
    cone: Mat        # generators of the subdivided maximal cone
    ray_a: Vec       # the two generators spanning the split 2-face
    ray_b: Vec
    new_ray: Vec     # equals ray_a + ray_b


@dataclass(frozen=True)
class BlowupCertificate:
    entries: tuple[BlowupEntry, ...]


def _cone_h_rep(gens: Mat, rank: int) -> list[Vec]:
    """Inequality rows cutting out a simplicial cone (span equalities as +/- pairs)."""
    d = len(gens)
    rows: list[Vec] = []
    if d == rank:
        inv = la.mat_inverse_fraction(gens)
        for j in range(rank):
            rows.append(la.fraction_row_to_primitive([inv[i][j] for i in range(rank)]))
        return rows
    if d > 0:
        # a right inverse column per generator: p_j with gens * p_j = e_j, so on
        # the span of the gens the functional x -> x . p_j reads off coefficient j
        for j in range(d):
            target = tuple(1 if i == j else 0 for i in range(d))
            col = la.particular_solution(gens, target)
            assert col is not None
            rows.append(la.fraction_row_to_primitive(col))
    for eq in la.kernel_basis(gens) if d else la.identity(rank):
        rows.append(tuple(eq))
        rows.append(la.vec_neg(eq))
    return rows


def _is_common_face(f: Fan, c1: tuple[int, ...], c2: tuple[int, ...]) -> bool:
    g1, g2 = f.cone_vectors(c1), f.cone_vectors(c2)
    system = _cone_h_rep(g1, f.rank) + _cone_h_rep(g2, f.rank)
    inter = la.extreme_rays(system)
    common = set(g1) & set(g2)
    return all(ray in common for ray in inter) and len(inter) == len(
        set(c1) & set(c2)
    )


def make_fan(
    rank: int,
    cones: Iterable[Iterable[Vec]],
    *,
    check_faces: bool = True,
) -> Fan:
    """Canonical fan from maximal cones given as generator collections.

    Rays are deduplicated and sorted; cones become sorted index tuples, sorted
    among themselves.  Every listed cone must be simplicial (independent
    generators).  With check_faces=True the pairwise common-face condition is
    verified exactly and any violation raises MalformedFanError; internal
    constructors whose cones tile by construction skip the quadratic check.
    """
    cone_vecs = [tuple(tuple(v) for v in cone) for cone in cones]
    if rank == 0:
        return Fan(rank=0, rays=(), max_cones=((),))
    rays: list[Vec] = []
    for cone in cone_vecs:
        for v in cone:
            if len(v) != rank:
                raise InputFormatError(f"ray {v} does not have length {rank}")
            if all(x == 0 for x in v):
                raise InputFormatError("zero ray")
            if v != la.primitive(v):
                raise InputFormatError(f"ray {v} is not primitive")
            if v not in rays:
                rays.append(v)
    rays.sort()
    index = {v: i for i, v in enumerate(rays)}
    cone_idx = sorted({tuple(sorted({index[v] for v in cone})) for cone in cone_vecs})
    for cone in cone_idx:
        gens = [rays[i] for i in cone]
        if la.rank(gens) != len(gens):
            raise NotSimplicialError(f"cone {gens} is not simplicial")
    for a, b in itertools.combinations(cone_idx, 2):
        if set(a) <= set(b) or set(b) <= set(a):
            raise InputFormatError("listed cones must be mutually maximal")
    f = Fan(rank=rank, rays=tuple(rays), max_cones=tuple(cone_idx))
    if check_faces:
        for a, b in itertools.combinations(cone_idx, 2):
            if not _is_common_face(f, a, b):
                raise MalformedFanError(
                    f"cones {f.cone_vectors(a)} and {f.cone_vectors(b)} overlap"
                )
    return f


def load_fan(data: bytes | str) -> Fan:
    """Parse and fully validate the fan JSON format.

    {"rank": r, "rays": [[...], ...], "max_cones": [[i, ...], ...]} with rays
    primitive, strictly lex-sorted, and 0-based cone indices.
    """
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise InputFormatError(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict) or any(k not in obj for k in ("rank", "rays", "max_cones")):
        raise InputFormatError("expected an object with 'rank', 'rays' and 'max_cones'")
    rank, rays, cones = obj["rank"], obj["rays"], obj["max_cones"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise InputFormatError("'rank' must be a positive integer")
    if not isinstance(rays, list) or not all(isinstance(v, list) for v in rays):
        raise InputFormatError("'rays' must be a list of integer lists")
    vecs = []
    for v in rays:
        if any(not isinstance(x, int) or isinstance(x, bool) for x in v):
            raise InputFormatError(f"ray {v} has non-integer entries")
        vecs.append(tuple(v))
    if vecs != sorted(set(vecs)):
        raise InputFormatError("'rays' must be strictly sorted and duplicate-free")
    if not isinstance(cones, list) or not all(isinstance(c, list) for c in cones):
        raise InputFormatError("'max_cones' must be a list of index lists")
    used: set[int] = set()
    cone_vecs = []
    for c in cones:
        for i in c:
            if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < len(vecs):
                raise InputFormatError(f"bad ray index {i}")
        used.update(c)
        cone_vecs.append([vecs[i] for i in c])
    if used != set(range(len(vecs))):
        raise InputFormatError("every ray must be used by some cone")
    return make_fan(rank, cone_vecs, check_faces=True)


def fan_to_json(f: Fan) -> dict:
    return {
        "rank": f.rank,
        "rays": [list(v) for v in f.rays],
        "max_cones": [list(c) for c in f.max_cones],
    }


def fan_faces(f: Fan) -> tuple[tuple[int, ...], ...]:
    """All faces as sorted index tuples, the origin () included."""
    faces = {()}
    for cone in f.max_cones:
        for k in range(1, len(cone) + 1):
            faces.update(itertools.combinations(cone, k))
    return tuple(sorted(faces, key=lambda c: (len(c), c)))


def fan_from_arrangement(a: Arrangement) -> Fan:
    """The fan whose maximal cones are the closed chambers of the arrangement."""
    chambers = enumerate_chambers(a)
    return make_fan(a.rank, [k.rays for k in chambers], check_faces=False)


def _facet_normal(f: Fan, facet: tuple[int, ...]) -> Vec:
    ker = la.kernel_basis(f.cone_vectors(facet))
    assert len(ker) == 1
    return la.canonical_sign(la.primitive(ker[0]))


def check_properties(f: Fan) -> PropertyReport:
    """Smoothness, completeness, central and strong symmetry, with witnesses.

    smooth: every maximal cone's generators extend to a lattice basis
    (all-ones Smith form).  complete: pure of full dimension, every facet
    shared by exactly two maximal cones, facet graph connected.  centrally
    symmetric: rays and cones stable under negation.  strongly symmetric:
    complete and no maximal cone takes both strict signs on the span of any
    facet; the spans are then returned as primitive hyperplane normals.
    """
    if f.rank == 0:
        return PropertyReport(True, True, True, True, hyperplanes=())

    smooth = True
    witness: object = None
    for cone in f.max_cones:
        if la.snf(f.cone_vectors(cone)) != (1,) * len(cone):
            smooth = False
            witness = {"property": "smooth", "cone": f.cone_vectors(cone)}
            break

    pure = bool(f.max_cones) and all(len(c) == f.rank for c in f.max_cones)
    complete = pure
    if complete:
        facet_count: dict[tuple[int, ...], list[int]] = {}
        for ci, cone in enumerate(f.max_cones):
            for facet in itertools.combinations(cone, f.rank - 1):
                facet_count.setdefault(facet, []).append(ci)
        complete = all(len(v) == 2 for v in facet_count.values())
        if complete and len(f.max_cones) > 1:
            seen = {0}
            stack = [0]
            adj: dict[int, set[int]] = {}
            for members in facet_count.values():
                a, b = members
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)
            while stack:
                for nb in adj.get(stack.pop(), ()):
                    if nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            complete = len(seen) == len(f.max_cones)
        if not complete and witness is None:
            witness = {"property": "complete"}

    neg = {la.vec_neg(v) for v in f.rays}
    centrally = neg == set(f.rays)
    if centrally:
        idx = {v: i for i, v in enumerate(f.rays)}
        cone_set = set(f.max_cones)
        centrally = all(
            tuple(sorted(idx[la.vec_neg(f.rays[i])] for i in cone)) in cone_set
            for cone in f.max_cones
        )
    if not centrally and witness is None:
        witness = {"property": "centrally_symmetric"}

    strongly = complete
    hyperplanes: tuple[Vec, ...] | None = None
    if strongly:
        if f.rank == 1:
            hyperplanes = ((1,),)
        else:
            normals: list[Vec] = []
            for cone in f.max_cones:
                for facet in itertools.combinations(cone, f.rank - 1):
                    h = _facet_normal(f, facet)
                    if h not in normals:
                        normals.append(h)
            for h in sorted(normals):
                for cone in f.max_cones:
                    vals = [la.vec_dot(h, v) for v in f.cone_vectors(cone)]
                    if any(x > 0 for x in vals) and any(x < 0 for x in vals):
                        strongly = False
                        if witness is None:
                            witness = {
                                "property": "strongly_symmetric",
                                "hyperplane": h,
                                "cone": f.cone_vectors(cone),
                            }
                        break
                if not strongly:
                    break
            if strongly:
                hyperplanes = tuple(sorted(normals))
    return PropertyReport(
        smooth=smooth,
        complete=complete,
        centrally_symmetric=centrally,
        strongly_symmetric=strongly,
        hyperplanes=hyperplanes,
        failure_witness=witness,
    )


def roots_from_fan(f: Fan) -> Arrangement:
    """Recover the arrangement whose chambers are the maximal cones.

    Requires a smooth strongly symmetric fan; the covectors are the union of
    the dual bases of the maximal cones' generator matrices, so that
    fan_from_arrangement inverts this map exactly.
    """
    if f.rank < 1:
        raise ValueError("roots_from_fan requires rank >= 1")
    props = check_properties(f)
    if not props.smooth:
        raise NotSmoothError(f"fan is not smooth: {props.failure_witness}")
    if not props.strongly_symmetric:
        raise NotStronglySymmetricError(
            f"fan is not strongly symmetric: {props.failure_witness}"
        )
    covectors: set[Vec] = set()
    for cone in f.max_cones:
        dual = la.dual_basis(f.cone_vectors(cone))
        for row in dual:
            assert all(x.denominator == 1 for x in row)
            covectors.add(la.canonical_sign(tuple(int(x) for x in row)))
    return make_arrangement(f.rank, sorted(covectors))


def quotient_data(gens: Mat, rank: int):
    """Deterministic quotient of Z^rank by the saturation of the generator span.

    Returns (kappa, lifts, d): kappa maps x to its coordinates in the quotient
    lattice, and lifts are the rank - d completing basis vectors whose classes
    are the quotient's standard basis (so an annihilating covector alpha
    induces the quotient covector (alpha(lift_j))_j).
    """
    w, v, d = la.complete_to_basis(gens, rank)
    cols = tuple(tuple(v[i][j] for j in range(d, rank)) for i in range(rank))

    def kappa(x: Vec) -> Vec:
        return la.vec_mat(x, cols)

    return kappa, w[d:], d


def _require_face(f: Fan, delta: Sequence[int]) -> tuple[int, ...]:
    dl = tuple(sorted(set(delta)))
    if any(not 0 <= i < len(f.rays) for i in dl):
        raise BadReferenceError(f"ray index out of range in cone {tuple(delta)}")
    if dl and not any(set(dl) <= set(c) for c in f.max_cones):
        raise BadReferenceError(f"cone {dl} is not a face of the fan")
    return dl


def star_fan(f: Fan, delta: Sequence[int]) -> Fan:
    """The fan of cones containing delta, in the quotient lattice N/(N n <delta>).

    The quotient basis comes from a deterministic unimodular completion of the
    generators, so repeated runs produce identical coordinates.  delta = ()
    returns the fan itself.
    """
    dl = _require_face(f, delta)
    if not dl:
        return f
    gens = f.cone_vectors(dl)
    kappa, _, d = quotient_data(gens, f.rank)
    new_rank = f.rank - d
    cones = []
    for cone in f.max_cones:
        if set(dl) <= set(cone):
            imgs = [
                la.primitive(kappa(f.rays[i])) for i in cone if i not in dl
            ]
            cones.append(imgs)
    if new_rank == 0:
        return Fan(rank=0, rays=(), max_cones=((),))
    return make_fan(new_rank, cones, check_faces=False)


def restrict_fan(f: Fan, subspace_rows: Sequence[Sequence[int]]) -> Fan:
    """The cones of f lying inside a cone-spanned subspace, in its own lattice.

    `subspace_rows` must span the span of some cone of f; f must be smooth and
    strongly symmetric.  The cones contained in the subspace are re-expressed
    in the canonical basis of the saturated sublattice, and the result is
    certified smooth, strongly symmetric and complete of the subspace rank.
    """
    props = check_properties(f)
    if not props.smooth:
        raise NotSmoothError("restriction requires a smooth fan")
    if not props.strongly_symmetric:
        raise NotStronglySymmetricError("restriction requires a strongly symmetric fan")
    rows = [tuple(r) for r in subspace_rows]
    basis = la.saturation_basis(rows, f.rank) if rows else ()
    d = len(basis)
    if d == f.rank:
        return f

    def inside(v: Vec) -> bool:
        return d > 0 and la.solve_in_row_space(basis, v) is not None

    spanned = False
    for cone in fan_faces(f):
        gens = f.cone_vectors(cone)
        if len(cone) == d and all(inside(v) for v in gens):
            spanned = True
            break
    if not spanned:
        raise BadReferenceError("subspace is not spanned by a cone of the fan")
    if d == 0:
        return Fan(rank=0, rays=(), max_cones=((),))

    candidates = set()
    for cone in f.max_cones:
        face = tuple(i for i in cone if inside(f.rays[i]))
        candidates.add(face)
    maximal = [
        c for c in candidates if not any(c != o and set(c) <= set(o) for o in candidates)
    ]
    cones = []
    for cone in maximal:
        vecs = []
        for i in cone:
            coords = la.solve_in_row_space(basis, f.rays[i])
            assert coords is not None and all(x.denominator == 1 for x in coords)
            vecs.append(tuple(int(x) for x in coords))
        cones.append(vecs)
    result = make_fan(d, cones, check_faces=False)
    rprops = check_properties(result)
    if not (rprops.smooth and rprops.strongly_symmetric and rprops.complete):
        raise CertificationError("restriction fan lost smoothness or symmetry")
    return result


def star_subdivide(f: Fan, cone: Sequence[int]) -> Fan:
    """Star subdivision of one maximal cone at the sum of its generators."""
    target = tuple(sorted(set(cone)))
    if target not in f.max_cones:
        raise BadReferenceError(f"{tuple(cone)} is not a maximal cone")
    gens = f.cone_vectors(target)
    center = la.primitive(tuple(sum(col) for col in zip(*gens)))
    cones: list[list[Vec]] = []
    for c in f.max_cones:
        if c == target:
            for skip in range(len(gens)):
                cones.append([g for i, g in enumerate(gens) if i != skip] + [center])
        else:
            cones.append(list(f.cone_vectors(c)))
    return make_fan(f.rank, cones, check_faces=False)


def _memberships(gens: Mat, v: Vec) -> bool:
    coords = la.solve_in_row_space(gens, v)
    return coords is not None and all(x >= 0 for x in coords)


def insert_hyperplane(a: Arrangement, h: Sequence[int]) -> tuple[Fan, BlowupCertificate]:
    """Add one hyperplane and certify the subdivision as 2-face splits.

    Both the input and the enlarged arrangement must be crystallographic.
    Every maximal cone met by the new hyperplane's interior is split into two
    cones along it; the certificate records, per split cone, the 2-face
    (ray_a, ray_b) that was subdivided and checks that the unique new ray is
    exactly ray_a + ray_b.
    """
    from .arrangement import is_crystallographic

    hv = la.canonical_sign(la.primitive(tuple(h)))
    if hv in a.positive_covectors:
        raise BadReferenceError(f"hyperplane {tuple(h)} already in the arrangement")
    a2 = make_arrangement(a.rank, a.positive_covectors + (hv,))
    if not is_crystallographic(a).verdict:
        raise NotCrystallographicError("base arrangement is not crystallographic")
    if not is_crystallographic(a2).verdict:
        raise NotCrystallographicError("enlarged arrangement is not crystallographic")
    f1 = fan_from_arrangement(a)
    f2 = fan_from_arrangement(a2)
    cone_set2 = {frozenset(f2.cone_vectors(c)) for c in f2.max_cones}
    entries = []
    splits = 0
    for cone in f1.max_cones:
        gens = f1.cone_vectors(cone)
        vals = [la.vec_dot(hv, g) for g in gens]
        if any(x > 0 for x in vals) and any(x < 0 for x in vals):
            pieces = [
                f2.cone_vectors(c)
                for c in f2.max_cones
                if all(_memberships(gens, v) for v in f2.cone_vectors(c))
            ]
            if len(pieces) != 2:
                raise CertificationError(
                    f"cone {gens} split into {len(pieces)} pieces, expected 2"
                )
            splits += 1
            p0, p1 = (set(p) for p in pieces)
            new_rays = (p0 | p1) - set(gens)
            only0 = (p0 - p1) & set(gens)
            only1 = (p1 - p0) & set(gens)
            if len(new_rays) != 1 or len(only0) != 1 or len(only1) != 1:
                raise CertificationError(f"unexpected subdivision pattern in cone {gens}")
            new_ray = next(iter(new_rays))
            ray_a, ray_b = sorted([next(iter(only0)), next(iter(only1))])
            if new_ray != la.vec_add(ray_a, ray_b):
                raise CertificationError(
                    f"new ray {new_ray} is not the generator sum {ray_a} + {ray_b}"
                )
            entries.append(
                BlowupEntry(cone=gens, ray_a=ray_a, ray_b=ray_b, new_ray=new_ray)
            )
        else:
            if frozenset(gens) not in cone_set2:
                raise CertificationError(f"untouched cone {gens} vanished")
    if len(f2.max_cones) != len(f1.max_cones) + splits:
        raise CertificationError("subdivision produced unexpected cone count")
    return f2, BlowupCertificate(tuple(entries))


def fan_automorphisms(f: Fan) -> tuple[Mat, ...]:
    """All unimodular matrices mapping the ray set and the cone set to themselves.

    Vectors transform as rows: v -> v*G.  Found by mapping one fixed maximal
    cone's ordered generators to every ordered generator tuple of every
    maximal cone and filtering.  Requires a complete fan.
    """
    if f.rank == 0:
        return ((),)
    props = check_properties(f)
    if not props.complete:
        raise NotCompleteError("automorphism search requires a complete fan")
    base = f.cone_vectors(f.max_cones[0])
    binv = la.mat_inverse_fraction(base)
    ray_index = {v: i for i, v in enumerate(f.rays)}
    cone_set = set(f.max_cones)
    found = set()
    for cone in f.max_cones:
        for perm in itertools.permutations(f.cone_vectors(cone)):
            g = la.mat_mul(binv, perm)
            if any(x.denominator != 1 for row in g for x in row):
                continue
            gi = tuple(tuple(int(x) for x in row) for row in g)
            if abs(la.det(gi)) != 1:
                continue
            images = [la.vec_mat(v, gi) for v in f.rays]
            if any(w not in ray_index for w in images):
                continue
            perm_map = [ray_index[w] for w in images]
            if all(
                tuple(sorted(perm_map[i] for i in cone2)) in cone_set
                for cone2 in f.max_cones
            ):
                found.add(gi)
    return tuple(sorted(found))
