"""Integer hyperplane arrangements: chambers, wall bases, integrality test.

An arrangement of rank r is stored as one primitive covector per +/- pair,
lexicographically sorted.  The stored coordinates are required to be the
lattice generated by the covectors, i.e. the covectors must generate all of
Z^r; inputs violating this are rejected so that every downstream smoothness
verdict refers to a well-defined lattice.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import intlinalg as la
from .errors import (
    BadReferenceError,
    InputFormatError,
    LatticeSpanError,
    NotCrystallographicError,
    NotSimplicialError,
)
from .intlinalg import Mat, Vec


@dataclass(frozen=True)
class Arrangement:
    rank: int
    positive_covectors: tuple[Vec, ...]

    @property
    def n_hyperplanes(self) -> int:
        return len(self.positive_covectors)


@dataclass(frozen=True)
class Chamber:
    """A closed chamber: its extreme rays and the dual data on its walls.

    rays        lex-sorted primitive generators of the closed chamber
    basis       one (covector index, sign) per ray; the signed covector at
                position j is positive on rays[j] and vanishes on the others
    sign_vector +1/-1 per positive covector: the sign it takes on the chamber
    """

    index: int
    rays: tuple[Vec, ...]
    basis: tuple[tuple[int, int], ...]
    sign_vector: tuple[int, ...]

    def basis_covectors(self, a: Arrangement) -> Mat:
        return tuple(
            la.vec_scale(sign, a.positive_covectors[i]) for i, sign in self.basis
        )


@dataclass(frozen=True)
class CrystallographicReport:
    verdict: bool
    # (chamber index, signed root, its coordinates in the chamber's wall basis)
    witness: tuple[int, Vec, tuple[Fraction, ...]] | None = None


def make_arrangement(rank: int, covectors: Sequence[Sequence[int]]) -> Arrangement:
    """Validate and canonicalize: primitive, one per pair, sorted, spanning Z^r."""
    if not isinstance(rank, int) or rank < 1:
        raise InputFormatError("rank must be a positive integer")
    canon: list[Vec] = []
    for v in covectors:
        vt = tuple(v)
        if len(vt) != rank:
            raise InputFormatError(f"covector {vt} does not have length {rank}")
        if any(not isinstance(x, int) or isinstance(x, bool) for x in vt):
            raise InputFormatError(f"covector {vt} has non-integer entries")
        if all(x == 0 for x in vt):
            raise InputFormatError("zero covector")
        if vt != la.primitive(vt):
            raise InputFormatError(f"covector {vt} is not primitive")
        canon.append(la.canonical_sign(vt))
    seen = set()
    for v in canon:
        if v in seen:
            raise InputFormatError(f"parallel covector pair at {v}")
        seen.add(v)
    if la.snf(canon) != (1,) * rank:
        raise LatticeSpanError("covectors do not generate the full integer lattice")
    return Arrangement(rank=rank, positive_covectors=tuple(sorted(canon)))


def load_arrangement(data: bytes | str) -> Arrangement:
    """Parse the arrangement JSON format {"rank": r, "positive_covectors": [[...], ...]}."""
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise InputFormatError(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict) or "rank" not in obj or "positive_covectors" not in obj:
        raise InputFormatError("expected an object with 'rank' and 'positive_covectors'")
    rank = obj["rank"]
    covs = obj["positive_covectors"]
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise InputFormatError("'rank' must be an integer")
    if not isinstance(covs, list) or not all(isinstance(c, list) for c in covs):
        raise InputFormatError("'positive_covectors' must be a list of integer lists")
    return make_arrangement(rank, covs)


def arrangement_to_json(a: Arrangement) -> dict:
    return {
        "rank": a.rank,
        "positive_covectors": [list(v) for v in a.positive_covectors],
    }


def _roots_type_a(r: int) -> list[Vec]:
    return [
        tuple(1 if i <= k <= j else 0 for k in range(r))
        for i in range(r)
        for j in range(i, r)
    ]


def _roots_type_b(r: int) -> list[Vec]:
    roots = []
    for i in range(r):
        for j in range(i + 1, r):  # e_i - e_j
            roots.append(tuple(1 if i <= k < j else 0 for k in range(r)))
        roots.append(tuple(1 if k >= i else 0 for k in range(r)))  # e_i
        for j in range(i + 1, r):  # e_i + e_j
            roots.append(tuple(2 if k >= j else (1 if k >= i else 0) for k in range(r)))
    return roots


def _roots_type_c(r: int) -> list[Vec]:
    roots = []
    for i in range(r):
        for j in range(i + 1, r):  # e_i - e_j
            roots.append(tuple(1 if i <= k < j else 0 for k in range(r)))
        # 2 e_i
        roots.append(tuple(1 if k == r - 1 else (2 if k >= i else 0) for k in range(r)))
        for j in range(i + 1, r):  # e_i + e_j
            roots.append(
                tuple(
                    1 if k == r - 1 else (2 if k >= j else (1 if k >= i else 0))
                    for k in range(r)
                )
            )
    return roots


def _roots_type_d(r: int) -> list[Vec]:
    roots = []
    for i in range(r):
        for j in range(i + 1, r):  # e_i - e_j
            roots.append(tuple(1 if i <= k < j else 0 for k in range(r)))
    for i in range(r - 1):  # e_i + e_r
        roots.append(
            tuple(1 if (i <= k <= r - 3 or k == r - 1) else 0 for k in range(r))
        )
    for i in range(r):
        for j in range(i + 1, r - 1):  # e_i + e_j, j < r
            roots.append(
                tuple(
                    2 if j <= k <= r - 3 else (1 if (i <= k or k == r - 1) else 0)
                    for k in range(r)
                )
            )
    return roots


_CATALOG_RE = re.compile(r"^([ABCD])_(\d+)$")
_NGON_RE = re.compile(r"^ngon:(\d+):(\d+)$")


def catalog(name: str) -> Arrangement:
    """Built-in arrangements: A_r/B_r/C_r/D_r (2 <= r <= 8) and ngon:t:index.

    The classical families are given by their positive roots in simple-root
    coordinates.  ngon:t:index enumerates the rank-2 family: triangulation
    `index` of the convex t-gon -> self-intersection weights -> rank-2 fan of
    the doubled weight sequence -> its wall covectors.
    """
    m = _CATALOG_RE.match(name)
    if m:
        letter, r = m.group(1), int(m.group(2))
        if not 2 <= r <= 8:
            raise BadReferenceError(f"rank {r} out of range for catalog family {letter}")
        builders = {
            "A": _roots_type_a,
            "B": _roots_type_b,
            "C": _roots_type_c,
            "D": _roots_type_d,
        }
        return make_arrangement(r, builders[letter](r))
    m = _NGON_RE.match(name)
    if m:
        t, index = int(m.group(1)), int(m.group(2))
        if t < 3:
            raise BadReferenceError("ngon requires t >= 3")
        from .fan import roots_from_fan
        from .surface import triangulation_to_weights, triangulations, weights_to_fan

        tris = triangulations(t)
        if not 0 <= index < len(tris):
            raise BadReferenceError(
                f"triangulation index {index} out of range (t={t} has {len(tris)})"
            )
        half = triangulation_to_weights(t, tris[index])
        return roots_from_fan(weights_to_fan(half + half))
    raise BadReferenceError(f"unknown catalog name {name!r}")


def _seed_sign_vector(a: Arrangement) -> tuple[int, ...]:
    t = 1
    while True:
        p = tuple(t**k for k in range(a.rank))
        vals = [la.vec_dot(c, p) for c in a.positive_covectors]
        if all(v != 0 for v in vals):
            return tuple(1 if v > 0 else -1 for v in vals)
        t += 1


def enumerate_chambers(a: Arrangement) -> tuple[Chamber, ...]:
    """All chambers, by wall-crossing search from a deterministic seed.

    The seed is the chamber containing the first generic point of the
    sequence (1, t, t^2, ...), t = 1, 2, ...; from each chamber the walls are
    crossed in the order of its lex-sorted rays.  Raises NotSimplicialError
    as soon as a chamber with more than `rank` extreme rays is found.
    """
    covs = a.positive_covectors
    n = len(covs)
    r = a.rank
    seed = _seed_sign_vector(a)
    chambers: list[Chamber] = []
    seen = {seed}
    queue: deque[tuple[int, ...]] = deque([seed])
    while queue:
        s = queue.popleft()
        rows = [la.vec_scale(s[i], covs[i]) for i in range(n)]
        rays = la.extreme_rays(rows)
        if len(rays) != r:
            raise NotSimplicialError(
                f"chamber with sign vector {s} has {len(rays)} extreme rays (rank {r})"
            )
        basis = []
        for j in range(r):
            others = [rays[k] for k in range(r) if k != j]
            walls = [
                i
                for i in range(n)
                if all(la.vec_dot(covs[i], v) == 0 for v in others)
            ]
            if len(walls) != 1:
                raise NotSimplicialError(
                    f"facet of chamber {s} lies on {len(walls)} hyperplanes"
                )
            i = walls[0]
            assert s[i] * la.vec_dot(covs[i], rays[j]) > 0
            basis.append((i, s[i]))
        chambers.append(
            Chamber(
                index=len(chambers),
                rays=rays,
                basis=tuple(basis),
                sign_vector=s,
            )
        )
        for i, _ in basis:
            neighbor = tuple(-s[k] if k == i else s[k] for k in range(n))
            if neighbor not in seen:
                seen.add(neighbor)
                queue.append(neighbor)
    return tuple(chambers)


def positive_roots(a: Arrangement, k: Chamber) -> Mat:
    """The signed covectors that are nonnegative on the chamber, one per pair."""
    return tuple(
        la.vec_scale(k.sign_vector[i], a.positive_covectors[i])
        for i in range(len(a.positive_covectors))
    )


def is_crystallographic(a: Arrangement) -> CrystallographicReport:
    """Do all covectors have integer coordinates in every chamber's wall basis?

    On failure the witness is the first violating (chamber, root, coordinates)
    triple in chamber/root enumeration order.
    """
    chambers = enumerate_chambers(a)
    for k in chambers:
        b = k.basis_covectors(a)
        binv = la.mat_inverse_fraction(b)
        for root in a.positive_covectors:
            coords = la.vec_mat(root, binv)
            if any(c.denominator != 1 for c in coords):
                return CrystallographicReport(False, (k.index, root, tuple(coords)))
    return CrystallographicReport(True, None)


def decompose(a: Arrangement) -> tuple[tuple[Arrangement, ...], tuple[tuple[int, ...], ...]]:
    """Split into irreducible factors.

    All covectors are written in the wall basis of the seed chamber; two basis
    positions are linked when some covector is supported on both.  The
    connected components of this support graph give the factors, returned in
    the induced coordinates together with the index partition.
    """
    report = is_crystallographic(a)
    if not report.verdict:
        raise NotCrystallographicError("decompose requires a crystallographic arrangement")
    chambers = enumerate_chambers(a)
    k0 = chambers[0]
    binv = la.mat_inverse_fraction(k0.basis_covectors(a))
    coords = [tuple(int(c) for c in la.vec_mat(root, binv)) for root in a.positive_covectors]

    parent = list(range(a.rank))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for c in coords:
        support = [i for i in range(a.rank) if c[i] != 0]
        for i in support[1:]:
            union(support[0], i)

    comps: dict[int, list[int]] = {}
    for i in range(a.rank):
        comps.setdefault(find(i), []).append(i)
    partition = tuple(tuple(comps[key]) for key in sorted(comps))

    factors = []
    for part in partition:
        part_set = set(part)
        vecs = []
        for c in coords:
            support = {i for i in range(a.rank) if c[i] != 0}
            if support and support <= part_set:
                vecs.append(tuple(c[i] for i in part))
        factors.append(make_arrangement(len(part), vecs))
    return tuple(factors), partition
