"""Pasting of 3-uniform Greechie diagrams into finite orthomodular lattices.

A connected, GREECHIE-valid, 3-uniform hypergraph with n atoms pastes into
a lattice on 2n+2 elements: bottom, top, the atoms, and their
orthocomplements (coatoms).  All operations are precomputed as numpy
tables indexed by element id:

    0 -> bottom, 1 -> top, 2..n+1 -> atoms, n+2..2n+1 -> coatoms.

Joins of two atoms sharing a block are forced: the block's third atom t is
orthogonal to both, and the join is t'.  The absence of loops of order < 5
makes that third atom unique, which is what keeps the tables well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .mmp import MmpHypergraph, validate


class PasteError(ValueError):
    pass


@dataclass(frozen=True)
class Oml:
    """Finite orthomodular lattice from a pasted Greechie diagram."""

    hypergraph: MmpHypergraph
    atom_vertices: tuple[int, ...]  # original vertex label per atom index
    leq: np.ndarray  # bool (n_el, n_el)
    meet: np.ndarray  # int16 (n_el, n_el)
    join: np.ndarray  # int16 (n_el, n_el)
    ortho: np.ndarray  # int16 (n_el,)

    @property
    def n_atoms(self) -> int:
        return len(self.atom_vertices)

    @property
    def n_elements(self) -> int:
        return 2 * self.n_atoms + 2

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return 1

    @cached_property
    def atoms(self) -> np.ndarray:
        return np.arange(2, self.n_atoms + 2)

    @cached_property
    def coatoms(self) -> np.ndarray:
        return np.arange(self.n_atoms + 2, self.n_elements)

    def atom_id(self, vertex: int) -> int:
        """Element id of the atom with the given hypergraph vertex label."""
        return 2 + self.atom_vertices.index(vertex)

    @cached_property
    def sasaki(self) -> np.ndarray:
        """Sasaki hook table: a -> b = a' v (a ^ b)."""
        n = self.n_elements
        oc = self.ortho
        idx = np.arange(n)
        return self.join[oc[idx][:, None], self.meet]

    @cached_property
    def perp(self) -> np.ndarray:
        """Orthogonality relation: x _|_ y iff x <= y'."""
        return self.leq[:, self.ortho]

    @cached_property
    def down_sets(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.leq[:, x]) for x in range(self.n_elements)]

    @cached_property
    def up_sets(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.leq[x, :]) for x in range(self.n_elements)]

    @cached_property
    def perp_sets(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.perp[x]) for x in range(self.n_elements)]

    def element_name(self, x: int) -> str:
        from .mmp import vertex_label

        n = self.n_atoms
        # parenthesized bounds: a bare "1" would collide with the atom label
        if x == 0:
            return "(0)"
        if x == 1:
            return "(1)"
        if 2 <= x < n + 2:
            return vertex_label(self.atom_vertices[x - 2])
        if n + 2 <= x < 2 * n + 2:
            return vertex_label(self.atom_vertices[x - n - 2]) + "'"
        raise IndexError(x)

    def element_id(self, name: str) -> int:
        from .mmp import vertex_index

        if name == "(0)":
            return 0
        if name == "(1)":
            return 1
        prime = name.endswith("'")
        v = vertex_index(name[:-1] if prime else name)
        x = self.atom_id(v)
        return x + self.n_atoms if prime else x

    def to_json(self) -> dict:
        return {
            "n_atoms": self.n_atoms,
            "n_elements": self.n_elements,
            "elements": [self.element_name(x) for x in range(self.n_elements)],
            "leq": self.leq.astype(int).tolist(),
            "meet": self.meet.tolist(),
            "join": self.join.tolist(),
            "ortho": self.ortho.tolist(),
        }


def paste(source: MmpHypergraph | str) -> Oml:
    """Build the orthomodular lattice of a connected 3-uniform Greechie
    diagram (accepts an MMP string or a parsed hypergraph)."""
    if isinstance(source, str):
        from .mmp import parse_mmp

        h = parse_mmp(source)
    else:
        h = source
    report = validate(h, "GREECHIE")
    if not report.valid:
        raise PasteError(f"not a Greechie diagram: {report.violations[0].message}")
    if not h.is_uniform(3):
        raise PasteError("pasting requires a 3-uniform hypergraph")
    if not h.is_connected():
        raise PasteError("pasting requires a connected hypergraph")

    atom_vertices = h.vertices
    n = len(atom_vertices)
    n_el = 2 * n + 2
    aidx = {v: i for i, v in enumerate(atom_vertices)}

    # atom-atom orthogonality: sharing a block
    aperp = np.zeros((n, n), dtype=bool)
    for blk in h.blocks:
        for i in range(3):
            for j in range(3):
                if i != j:
                    aperp[aidx[blk[i]], aidx[blk[j]]] = True

    # unique common orthogonal atom for orthogonal pairs (block's third atom)
    third = np.full((n, n), -1, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            common = np.flatnonzero(aperp[i] & aperp[j])
            if len(common) > 1:
                raise PasteError(
                    "join of two atoms is not well defined: "
                    "multiple common orthogonal atoms (loop of order < 5)"
                )
            if len(common) == 1:
                third[i, j] = common[0]

    A = slice(2, n + 2)  # atom ids
    C = slice(n + 2, n_el)  # coatom ids

    leq = np.zeros((n_el, n_el), dtype=bool)
    np.fill_diagonal(leq, True)
    leq[0, :] = True
    leq[:, 1] = True
    leq[A, C] = aperp  # a_i <= a_j'  iff  i _|_ j  (i != j handled by aperp)

    ortho = np.empty(n_el, dtype=np.int16)
    ortho[0] = 1
    ortho[1] = 0
    ortho[2 : n + 2] = np.arange(n + 2, n_el)
    ortho[n + 2 :] = np.arange(2, n + 2)

    meet = np.empty((n_el, n_el), dtype=np.int16)
    lower = leq  # meet(x,y) = x when x <= y, = y when y <= x
    for x in range(n_el):
        for y in range(n_el):
            if lower[x, y]:
                meet[x, y] = x
            elif lower[y, x]:
                meet[x, y] = y
            else:
                meet[x, y] = 0
    # incomparable coatom pairs meet in their blocks' shared atom, if any
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            x, y = n + 2 + i, n + 2 + j
            if third[i, j] >= 0:
                meet[x, y] = 2 + third[i, j]

    join = ortho[meet[ortho[:, None], ortho[None, :]]].astype(np.int16)

    return Oml(
        hypergraph=h,
        atom_vertices=atom_vertices,
        leq=leq,
        meet=meet,
        join=join,
        ortho=ortho,
    )


@dataclass
class AxiomReport:
    passed: bool
    failures: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"passed": self.passed, "failures": list(self.failures)}


def verify_axioms(L: Oml) -> AxiomReport:
    """Check the ortholattice identities and the orthomodular law directly
    against the tables.  Works on tampered tables, so it can double as a
    consistency check."""
    failures: list[str] = []
    n = L.n_elements
    J, M, O = L.join, L.meet, L.ortho
    idx = np.arange(n)

    def name(x):
        try:
            return L.element_name(int(x))
        except IndexError:
            return f"#{int(x)}"

    def first_bad(bad, label, arity):
        where = np.argwhere(bad)
        if len(where):
            args = ", ".join(name(v) for v in where[0][:arity])
            failures.append(f"{label} fails at ({args})")

    first_bad(J != J.T, "commutativity of v", 2)
    first_bad(M != M.T, "commutativity of ^", 2)
    # associativity over all triples: [a,b,c] -> op(op(a,b),c) vs op(a,op(b,c))
    first_bad(J[J, :] != np.take(J, J, axis=1), "associativity of v", 3)
    first_bad(M[M, :] != np.take(M, M, axis=1), "associativity of ^", 3)
    first_bad(O[O] != idx, "involution of '", 1)
    first_bad(J[:, J[idx, O[idx]]] != 1, "x v (y v y') = 1", 2)
    first_bad(J[idx[:, None], M] != idx[:, None] * np.ones_like(M), "absorption x v (x ^ y) = x", 2)
    first_bad(M != O[J[O[:, None], O[None, :]]], "De Morgan x ^ y = (x' v y')'", 2)
    # orthomodular law: y <= x  implies  x ^ (x' v y) = y
    for x in range(n):
        ys = np.flatnonzero(L.leq[:, x])
        bad = M[x, J[O[x], ys]] != ys
        if bad.any():
            y = int(ys[np.flatnonzero(bad)[0]])
            failures.append(
                f"orthomodular law fails at (x={name(x)}, y={name(y)})"
            )
            break
    # lattice order consistency: x <= y iff x ^ y = x
    first_bad(L.leq != (M == idx[:, None]), "order/meet consistency", 2)
    return AxiomReport(passed=not failures, failures=failures)
