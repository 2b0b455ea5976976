"""Exact rational 3-dimensional vector realizations of Greechie diagrams,
and subspace arithmetic for the generalized orthoarguesian inclusions.

A vector assignment maps every atom to a projective rational direction so
that atoms sharing a block are mutually orthogonal and distinct atoms get
distinct directions.  Subspaces of Q^3 (zero, lines, planes, full) carry
sum, intersection, and orthocomplement, which is enough to evaluate the
Hilbert-space side of the orthoarguesian term recursion exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterator, Optional, Sequence

from .mmp import MmpHypergraph


@dataclass(frozen=True)
class Vec3Q:
    """Projective rational direction, normalized to coprime integers with
    the first nonzero coordinate positive."""

    x: int
    y: int
    z: int

    @staticmethod
    def of(x, y, z) -> "Vec3Q":
        fx, fy, fz = Fraction(x), Fraction(y), Fraction(z)
        if fx == fy == fz == 0:
            raise ValueError("zero vector has no direction")
        den = 1
        for f in (fx, fy, fz):
            den = den * f.denominator // gcd(den, f.denominator)
        ix, iy, iz = (int(f * den) for f in (fx, fy, fz))
        g = gcd(gcd(abs(ix), abs(iy)), abs(iz))
        ix, iy, iz = ix // g, iy // g, iz // g
        first = ix if ix != 0 else (iy if iy != 0 else iz)
        if first < 0:
            ix, iy, iz = -ix, -iy, -iz
        return Vec3Q(ix, iy, iz)

    def dot(self, other: "Vec3Q") -> int:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3Q") -> Optional["Vec3Q"]:
        cx = self.y * other.z - self.z * other.y
        cy = self.z * other.x - self.x * other.z
        cz = self.x * other.y - self.y * other.x
        if cx == cy == cz == 0:
            return None
        return Vec3Q.of(cx, cy, cz)

    def to_json(self) -> list:
        return [self.x, self.y, self.z]

    def __str__(self) -> str:
        return f"{{{self.x},{self.y},{self.z}}}"


ZERO, LINE, PLANE, FULL = "ZERO", "LINE", "PLANE", "FULL"


@dataclass(frozen=True)
class Subspace3:
    """A subspace of Q^3: the zero space, a line (direction), a plane
    (normal), or the full space."""

    kind: str
    vec: Optional[Vec3Q] = None  # direction for LINE, normal for PLANE

    def __post_init__(self):
        if self.kind in (LINE, PLANE) and self.vec is None:
            raise ValueError(f"{self.kind} needs a vector")
        if self.kind in (ZERO, FULL) and self.vec is not None:
            raise ValueError(f"{self.kind} takes no vector")

    @property
    def dim(self) -> int:
        return {ZERO: 0, LINE: 1, PLANE: 2, FULL: 3}[self.kind]

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.vec is not None:
            out["vector"] = self.vec.to_json()
        return out

    def __str__(self) -> str:
        if self.kind == LINE:
            return f"line{self.vec}"
        if self.kind == PLANE:
            return f"plane(n={self.vec})"
        return self.kind.lower()


ZERO_SPACE = Subspace3(ZERO)
FULL_SPACE = Subspace3(FULL)


def span(v: Vec3Q) -> Subspace3:
    return Subspace3(LINE, v)


def plane_normal(v: Vec3Q) -> Subspace3:
    return Subspace3(PLANE, v)


def perp(s: Subspace3) -> Subspace3:
    if s.kind == ZERO:
        return FULL_SPACE
    if s.kind == FULL:
        return ZERO_SPACE
    return Subspace3(PLANE if s.kind == LINE else LINE, s.vec)


def subspace_sum(a: Subspace3, b: Subspace3) -> Subspace3:
    if a.kind == ZERO:
        return b
    if b.kind == ZERO:
        return a
    if a.kind == FULL or b.kind == FULL:
        return FULL_SPACE
    if a.kind == LINE and b.kind == LINE:
        if a.vec == b.vec:
            return a
        return Subspace3(PLANE, a.vec.cross(b.vec))
    if a.kind == PLANE and b.kind == PLANE:
        return a if a.vec == b.vec else FULL_SPACE
    line, plane = (a, b) if a.kind == LINE else (b, a)
    return plane if line.vec.dot(plane.vec) == 0 else FULL_SPACE


def intersect(a: Subspace3, b: Subspace3) -> Subspace3:
    return perp(subspace_sum(perp(a), perp(b)))


def leq(a: Subspace3, b: Subspace3) -> bool:
    return intersect(a, b) == a


def orthogonal(a: Subspace3, b: Subspace3) -> bool:
    return leq(a, perp(b))


# ---------------------------------------------------------------------------
# orthoarguesian subspace recursion


def check_noa_subspace(
    n: int, M: Sequence[Subspace3], N: Sequence[Subspace3]
) -> tuple[bool, dict]:
    """Check the order-n subspace inclusion behind the generalized
    orthoarguesian laws, with an evaluation trace.

    Given subspaces M_0..M_n and N_0..N_n with M_i orthogonal to N_i, the
    term T_m is defined recursively:

        T_1(i0,i1) = (M_i0 + M_i1) ^ (N_i0 + N_i1)
        T_m(i0,...,im) = T_{m-1}(i0,i1,i3..im)
                         ^ (T_{m-1}(i0,i2,i3..im) + T_{m-1}(i1,i2,i3..im))

    and the inclusion checked is

        (M_0+N_0) ^ ... ^ (M_n+N_n)  <=  N_0 + (M_0 ^ (M_1 + T_n(0..n))).

    For n = 1 this is the inclusion used to verify 3OA on concrete vector
    quadruples.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    if len(M) != n + 1 or len(N) != n + 1:
        raise ValueError(f"need {n + 1} M- and N-subspaces")
    for i, (mi, ni) in enumerate(zip(M, N)):
        if not orthogonal(mi, ni):
            raise ValueError(f"M_{i} and N_{i} are not orthogonal")

    trace: dict = {}

    def term(indices: tuple) -> Subspace3:
        if indices in trace:
            return trace[indices]
        m = len(indices) - 1
        if m == 1:
            i0, i1 = indices
            out = intersect(
                subspace_sum(M[i0], M[i1]), subspace_sum(N[i0], N[i1])
            )
        else:
            i0, i1, i2, rest = indices[0], indices[1], indices[2], indices[3:]
            out = intersect(
                term((i0, i1) + rest),
                subspace_sum(term((i0, i2) + rest), term((i1, i2) + rest)),
            )
        trace[indices] = out
        return out

    lhs = intersect_all([subspace_sum(M[i], N[i]) for i in range(n + 1)])
    t = term(tuple(range(n + 1)))
    rhs = subspace_sum(N[0], intersect(M[0], subspace_sum(M[1], t)))
    holds = leq(lhs, rhs)
    readable = {
        "T" + "".join(map(str, k)): str(v) for k, v in sorted(trace.items())
    }
    readable["lhs"] = str(lhs)
    readable["rhs"] = str(rhs)
    return holds, readable


def intersect_all(spaces: Sequence[Subspace3]) -> Subspace3:
    out = spaces[0]
    for s in spaces[1:]:
        out = intersect(out, s)
    return out


def sum_all(spaces: Sequence[Subspace3]) -> Subspace3:
    out = spaces[0]
    for s in spaces[1:]:
        out = subspace_sum(out, s)
    return out


# ---------------------------------------------------------------------------
# vector realization search


DEFAULT_COMPONENTS = (-2, -1, 0, 1, 2)


@dataclass
class VectorAssignment:
    """Atom vertex label index -> direction, in h.vertices order."""

    hypergraph: MmpHypergraph
    vectors: dict  # vertex -> Vec3Q

    def blocks_as_vectors(self) -> list:
        return [
            [self.vectors[v] for v in blk] for blk in self.hypergraph.blocks
        ]

    def to_json(self) -> dict:
        from .mmp import vertex_label

        return {vertex_label(v): vec.to_json() for v, vec in self.vectors.items()}


def _candidate_pool(components) -> list:
    seen: dict = {}
    for x in components:
        for y in components:
            for z in components:
                if x == y == z == 0:
                    continue
                v = Vec3Q.of(x, y, z)
                seen.setdefault(v, None)
    return list(seen)


STANDARD_BASIS = (Vec3Q(1, 0, 0), Vec3Q(0, 1, 0), Vec3Q(0, 0, 1))


def vectorfind_all(
    h: MmpHypergraph, components: Sequence = DEFAULT_COMPONENTS
) -> Iterator[VectorAssignment]:
    """All vector realizations with free components drawn from the given
    set, in deterministic order.  Realizations must map blocks to mutually
    orthogonal triples and distinct atoms to distinct directions.

    The first block is pinned to the standard basis (z, y, x axes in block
    order) when the component set allows it, fixing the global rotation;
    whenever two atoms of a block are known the third is forced by the
    cross product, so only one atom per block is ever branched on.
    """
    pool = _candidate_pool(components)
    blocks = [tuple(blk) for blk in h.blocks]
    assign: dict = {}
    used: set = set()

    def ortho_ok(v: Vec3Q, blk, upto=None) -> bool:
        for w in blk:
            if w in assign and (upto is None or w != upto):
                if assign[w].dot(v) != 0:
                    return False
        return True

    def place(vertex: int, v: Vec3Q):
        assign[vertex] = v
        used.add(v)

    def unplace(vertex: int):
        used.discard(assign.pop(vertex))

    pin_first = all(b in pool for b in STANDARD_BASIS) and not any(
        v in assign for v in blocks[0]
    )

    def fill_block(bi: int):
        if bi == len(blocks):
            yield VectorAssignment(h, dict(assign))
            return
        blk = blocks[bi]
        unknown = [v for v in blk if v not in assign]
        if not unknown:
            for a, b in combinations(blk, 2):
                if assign[a].dot(assign[b]) != 0:
                    return
            yield from fill_block(bi + 1)
            return
        if len(unknown) == 1:
            known = [assign[v] for v in blk if v in assign]
            if known[0].dot(known[1]) != 0:
                return
            forced = known[0].cross(known[1])
            if forced is None or forced in used:
                return
            place(unknown[0], forced)
            yield from fill_block(bi)
            unplace(unknown[0])
            return
        if bi == 0 and pin_first and len(unknown) == 3:
            basis = (Vec3Q(0, 0, 1), Vec3Q(0, 1, 0), Vec3Q(1, 0, 0))
            for v, b in zip(blk, basis):
                place(v, b)
            yield from fill_block(bi + 1)
            for v in blk:
                unplace(v)
            return
        target = unknown[0]
        for v in pool:
            if v in used or not ortho_ok(v, blk):
                continue
            place(target, v)
            yield from fill_block(bi)
            unplace(target)

    yield from fill_block(0)


def vectorfind(
    h: MmpHypergraph, components: Sequence = DEFAULT_COMPONENTS
) -> Optional[VectorAssignment]:
    """First vector realization in search order, or None."""
    for assignment in vectorfind_all(h, components):
        return assignment
    return None
