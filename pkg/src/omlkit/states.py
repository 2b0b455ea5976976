"""Exact rational state-space analysis of pasted Greechie diagrams.

A state assigns a probability to every atom so that each block sums to 1;
it extends to all lattice elements by m(0)=0, m(1)=1, m(a')=1-m(a).  The
state polytope is { m >= 0 : sum over each block = 1 } (the upper bounds
m(a) <= 1 are implied by the block equalities).  Everything here runs in
exact rational arithmetic: feasibility and optima come from a two-phase
simplex with Bland's rule, dimensions from Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a hard dependency in practice
    _Q = Fraction

from .lattice import Oml
from .mmp import MmpHypergraph


def _q(x) -> object:
    return _Q(x)


# ---------------------------------------------------------------------------
# exact simplex


class LpResult:
    def __init__(self, status: str, value=None, solution=None):
        self.status = status  # "optimal" | "infeasible" | "unbounded"
        self.value = value
        self.solution = solution


def solve_lp(A: Sequence[Sequence], b: Sequence, c: Sequence, minimize: bool = True) -> LpResult:
    """min (or max) c.x subject to A x = b, x >= 0, exact rationals.

    Two-phase tableau simplex, Bland's rule (smallest-index entering and
    leaving variables), which guarantees termination.
    """
    m = len(A)
    n = len(c)
    A = [[_q(v) for v in row] for row in A]
    b = [_q(v) for v in b]
    c = [_q(v) for v in c]
    if not minimize:
        c = [-v for v in c]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]

    # tableau columns: structural 0..n-1, artificial n..n+m-1, rhs last
    width = n + m + 1
    T = [[_q(0)] * width for _ in range(m + 1)]
    for i in range(m):
        for j in range(n):
            T[i][j] = A[i][j]
        T[i][n + i] = _q(1)
        T[i][-1] = b[i]
    basis = [n + i for i in range(m)]
    # phase-1 objective: minimize sum of artificials.  Start from unit
    # costs on the artificial columns, then price out the basic rows; the
    # artificial columns end at reduced cost 0, not -1.
    obj = T[m]
    for i in range(m):
        obj[n + i] = _q(1)
    for i in range(m):
        for j in range(width):
            obj[j] -= T[i][j]

    def pivot(r: int, col: int) -> None:
        piv = T[r][col]
        T[r] = [v / piv for v in T[r]]
        for i in range(m + 1):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                Ti, Tr = T[i], T[r]
                T[i] = [Ti[j] - f * Tr[j] for j in range(width)]
        basis[r] = col

    def run(num_cols: int) -> str:
        while True:
            col = -1
            for j in range(num_cols):
                if T[m][j] < 0:
                    col = j
                    break
            if col < 0:
                return "optimal"
            row = -1
            for i in range(m):
                if T[i][col] > 0:
                    if row < 0:
                        row = i
                    else:
                        ri = T[i][-1] / T[i][col]
                        rr = T[row][-1] / T[row][col]
                        if ri < rr or (ri == rr and basis[i] < basis[row]):
                            row = i
            if row < 0:
                return "unbounded"
            pivot(row, col)

    run(n + m)
    if T[m][-1] < 0:
        return LpResult("infeasible")
    # drive any artificial variables out of the basis
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if T[i][j] != 0:
                    pivot(i, j)
                    break
    # phase 2: install the real objective
    T[m] = [_q(0)] * width
    for j in range(n):
        T[m][j] = c[j]
    for i in range(m):
        if basis[i] < n and T[m][basis[i]] != 0:
            f = T[m][basis[i]]
            Tm, Ti = T[m], T[i]
            T[m] = [Tm[j] - f * Ti[j] for j in range(width)]
    status = run(n)
    if status == "unbounded":
        return LpResult("unbounded")
    x = [_q(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    value = -T[m][-1]
    if not minimize:
        value = -value
    return LpResult("optimal", value, x)


def _rank(rows: list) -> int:
    """Rank of a rational matrix (destructive on a copy)."""
    M = [list(map(_q, r)) for r in rows]
    rank = 0
    cols = len(M[0]) if M else 0
    for col in range(cols):
        piv = None
        for i in range(rank, len(M)):
            if M[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = M[rank][col]
        M[rank] = [v / inv for v in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col] != 0:
                f = M[i][col]
                M[i] = [M[i][j] - f * M[rank][j] for j in range(cols)]
        rank += 1
        if rank == len(M):
            break
    return rank


# ---------------------------------------------------------------------------
# the state system


def block_system(h: MmpHypergraph) -> tuple[list, list, list]:
    """(A, b, atom_order): one equality row per block, sum of its atoms = 1."""
    atoms = list(h.vertices)
    index = {v: i for i, v in enumerate(atoms)}
    A = []
    for blk in h.blocks:
        row = [0] * len(atoms)
        for v in blk:
            row[index[v]] = 1
        A.append(row)
    return A, [1] * len(h.blocks), atoms


def element_affine(L: Oml, x: int) -> tuple[object, list]:
    """m(x) as (constant, coefficient-per-atom): m(0)=0, m(1)=1,
    m(atom_i)=e_i, m(atom_i')=1-e_i."""
    n = L.n_atoms
    coef = [_q(0)] * n
    if x == 0:
        return _q(0), coef
    if x == 1:
        return _q(1), coef
    if 2 <= x < n + 2:
        coef[x - 2] = _q(1)
        return _q(0), coef
    coef[x - n - 2] = _q(-1)
    return _q(1), coef


def _state_value(state_vec: list, const, coef) -> object:
    return const + sum(c * s for c, s in zip(coef, state_vec) if c != 0)


@dataclass
class StateSolution:
    """One state, as exact rationals per atom (in h.vertices order)."""

    values: list

    def to_json(self) -> list:
        return [_fmt(v) for v in self.values]


def _fmt(v) -> str:
    f = Fraction(v.numerator, v.denominator) if not isinstance(v, Fraction) else v
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


@dataclass
class StateClassReport:
    admits_state: Optional[bool] = None
    exactly_one: Optional[bool] = None
    state_freedom: Optional[int] = None
    strong_quantum: Optional[bool] = None
    strong_quantum_witness: Optional[tuple] = None
    strong_classical: Optional[bool] = None
    strong_classical_witness: Optional[tuple] = None
    two_valued: Optional[bool] = None
    two_valued_state: Optional[StateSolution] = None
    full_order_determining: Optional[bool] = None
    example_state: Optional[StateSolution] = None

    def to_json(self) -> dict:
        out: dict = {}
        for key in (
            "admits_state",
            "exactly_one",
            "state_freedom",
            "strong_quantum",
            "strong_classical",
            "two_valued",
            "full_order_determining",
        ):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.strong_quantum_witness is not None:
            out["strong_quantum_witness"] = list(self.strong_quantum_witness)
        if self.strong_classical_witness is not None:
            out["strong_classical_witness"] = list(self.strong_classical_witness)
        if self.two_valued_state is not None:
            out["two_valued_state"] = self.two_valued_state.to_json()
        if self.example_state is not None:
            out["example_state"] = self.example_state.to_json()
        return out


ALL_QUERIES = frozenset(
    {
        "admits_state",
        "exactly_one",
        "state_freedom",
        "strong_quantum",
        "strong_classical",
        "two_valued",
        "full_order_determining",
    }
)


class _StateWorkspace:
    """Shared LP plumbing plus a pool of discovered states, so that the
    thousands of pair conditions in the strong-state checks are mostly
    answered by already-known states instead of fresh LPs."""

    def __init__(self, L: Oml):
        self.L = L
        self.h = L.hypergraph
        self.A, self.b, self.atoms = block_system(self.h)
        self.n = len(self.atoms)
        self.pool: list = []  # (atom values, element values)

    def add_state(self, vec: list) -> None:
        elem = [
            _state_value(vec, *element_affine(self.L, x))
            for x in range(self.L.n_elements)
        ]
        self.pool.append((vec, elem))

    def feasible(self) -> Optional[list]:
        res = solve_lp(self.A, self.b, [0] * self.n)
        if res.status != "optimal":
            return None
        return res.solution

    def optimize_element(self, x: int, minimize: bool, pins: Sequence[tuple] = ()):
        """Optimize m(x) over states, optionally pinned by (element, value)
        equalities; returns LpResult."""
        A = [list(r) for r in self.A]
        b = list(self.b)
        for elem, val in pins:
            const, coef = element_affine(self.L, elem)
            A.append(coef)
            b.append(_q(val) - const)
        const, coef = element_affine(self.L, x)
        res = solve_lp(A, b, coef, minimize=minimize)
        if res.status == "optimal":
            res.value = res.value + const
            self.add_state(res.solution)
        return res

    def coordinate_range(self, i: int) -> tuple:
        lo = self.optimize_element(2 + i, True)
        hi = self.optimize_element(2 + i, False)
        return lo, hi


def solve_states(L: Oml, queries=ALL_QUERIES) -> StateClassReport:
    """Answer the requested state-class questions for a pasted lattice."""
    queries = set(queries)
    unknown = queries - ALL_QUERIES
    if unknown:
        raise ValueError(f"unknown queries: {sorted(unknown)}")
    ws = _StateWorkspace(L)
    report = StateClassReport()

    need_feas = queries & {"admits_state", "exactly_one", "state_freedom", "strong_quantum"}
    feas = ws.feasible() if need_feas else None
    if feas is not None:
        ws.add_state(feas)
        report.example_state = StateSolution(list(feas))
    if "admits_state" in queries:
        report.admits_state = feas is not None

    if queries & {"exactly_one", "state_freedom"}:
        if feas is None:
            report.exactly_one = False if "exactly_one" in queries else None
            if "state_freedom" in queries:
                report.state_freedom = -1  # empty polytope
        else:
            fixed = []
            unique = True
            for i in range(ws.n):
                lo, hi = ws.coordinate_range(i)
                if lo.value == hi.value:
                    fixed.append(i)
                else:
                    unique = False
            if "exactly_one" in queries:
                report.exactly_one = unique
            if "state_freedom" in queries:
                rows = [list(map(_q, r)) for r in ws.A]
                for i in fixed:
                    e = [_q(0)] * ws.n
                    e[i] = _q(1)
                    rows.append(e)
                report.state_freedom = ws.n - _rank(rows)

    if "strong_quantum" in queries:
        report.strong_quantum, report.strong_quantum_witness = _strong_quantum(ws)
    if "two_valued" in queries or "strong_classical" in queries:
        coloring = two_valued_coloring(ws.h)
        if "two_valued" in queries:
            report.two_valued = coloring is not None
            report.two_valued_state = coloring
    if "strong_classical" in queries:
        report.strong_classical, report.strong_classical_witness = _strong_classical(L)
    if "full_order_determining" in queries:
        report.full_order_determining = _full_order_determining(ws)
    return report


def _noncomparable_pairs(L: Oml):
    """Ordered pairs (x, y) with x not <= y; x = 0 and y = 1 never qualify."""
    n = L.n_elements
    for x in range(n):
        for y in range(n):
            if not L.leq[x, y]:
                yield x, y


def _strong_quantum(ws: _StateWorkspace) -> tuple:
    """True iff for every pair x not<= y some state has m(x)=1, m(y)<1."""
    L = ws.L
    one = _q(1)
    # seed the pool so most pairs are answered without an LP: for every
    # element x, try to find a state with m(x) = 1
    pinnable: dict = {}
    for x in range(L.n_elements):
        if x == 0:
            continue
        res = ws.optimize_element(x, False)  # maximize m(x)
        pinnable[x] = res.status == "optimal" and res.value == one
    for x, y in _noncomparable_pairs(L):
        if x == 0:
            return False, (L.element_name(x), L.element_name(y))
        if not pinnable.get(x, False):
            return False, (L.element_name(x), L.element_name(y))
        hit = False
        for _, elem in ws.pool:
            if elem[x] == one and elem[y] < one:
                hit = True
                break
        if hit:
            continue
        res = ws.optimize_element(y, True, pins=[(x, 1)])
        if res.status != "optimal" or res.value >= one:
            return False, (L.element_name(x), L.element_name(y))
    return True, None


def _strong_classical(L: Oml) -> tuple:
    """Strong set of classical (two-valued) states: for every pair
    x not<= y there is a 0/1 state with m(x)=1 and m(y)=0."""
    h = L.hypergraph
    n = L.n_atoms
    cache: dict = {}

    def colored(pins: tuple) -> bool:
        if pins in cache:
            return cache[pins]
        sol = two_valued_coloring(h, pins=pins)
        cache[pins] = sol is not None
        return cache[pins]

    for x, y in _noncomparable_pairs(L):
        # m(x) = 1 translated to atom pins; m(y) < 1 means m(y) = 0
        pins = []
        ok = True
        for elem, want in ((x, 1), (y, 0)):
            if elem == 0:
                ok = want == 0
            elif elem == 1:
                ok = want == 1
            elif 2 <= elem < n + 2:
                pins.append((elem - 2, want))
            else:
                pins.append((elem - n - 2, 1 - want))
            if not ok:
                break
        if ok:
            ok = colored(tuple(sorted(set(pins))))
        if not ok:
            return False, (L.element_name(x), L.element_name(y))
    return True, None


def _full_order_determining(ws: _StateWorkspace) -> bool:
    """The set of all states is order determining: whenever x, y satisfy
    m(x) <= m(y) for every state m, then x <= y.  Checked pairwise: every
    x not<= y needs a state with m(x) > m(y), found by maximizing
    m(x) - m(y)."""
    L = ws.L
    for x, y in _noncomparable_pairs(L):
        found = False
        for _, elem in ws.pool:
            if elem[x] > elem[y]:
                found = True
                break
        if found:
            continue
        cx, fx = element_affine(L, x)
        cy, fy = element_affine(L, y)
        obj = [a - b for a, b in zip(fx, fy)]
        res = solve_lp(ws.A, ws.b, obj, minimize=False)
        if res.status != "optimal":
            return False
        if res.value + cx - cy <= 0:
            return False
        ws.add_state(res.solution)
    return True


def count_state_freedom(L: Oml) -> int:
    """Dimension of the state polytope (-1 when empty): number of atoms
    minus the rank of the block equalities plus the coordinates fixed on
    the whole polytope."""
    report = solve_states(L, {"state_freedom"})
    return report.state_freedom


# ---------------------------------------------------------------------------
# two-valued states by backtracking


def two_valued_coloring(
    h: MmpHypergraph, pins: Sequence[tuple] = ()
) -> Optional[StateSolution]:
    """A 0/1 state (exactly one 1 per block), or None when none exists —
    the Kochen-Specker criterion.  pins is a sequence of (atom_index,
    value) constraints in h.vertices order.

    Backtracking on the atom appearing in the most blocks first, with unit
    propagation: a block with a 1 zeroes its other atoms, a block with all
    but one atom 0 forces the last to 1.
    """
    atoms = list(h.vertices)
    index = {v: i for i, v in enumerate(atoms)}
    blocks = [tuple(index[v] for v in blk) for blk in h.blocks]
    degree = [0] * len(atoms)
    blocks_of = [[] for _ in atoms]
    for bi, blk in enumerate(blocks):
        for a in blk:
            degree[a] += 1
            blocks_of[a].append(bi)
    order = sorted(range(len(atoms)), key=lambda a: (-degree[a], a))

    value: list = [None] * len(atoms)

    def propagate(assignments: list, trail: list) -> bool:
        while assignments:
            a, val = assignments.pop()
            if value[a] is not None:
                if value[a] != val:
                    return False
                continue
            value[a] = val
            trail.append(a)
            for bi in blocks_of[a]:
                blk = blocks[bi]
                ones = [x for x in blk if value[x] == 1]
                if len(ones) > 1:
                    return False
                unset = [x for x in blk if value[x] is None]
                if ones:
                    for x in unset:
                        assignments.append((x, 0))
                else:
                    if not unset:
                        return False
                    if len(unset) == 1:
                        assignments.append((unset[0], 1))
        return True

    def undo(trail: list, mark: int) -> None:
        while len(trail) > mark:
            value[trail.pop()] = None

    trail: list = []
    if not propagate([(a, v) for a, v in pins], trail):
        return None

    def search() -> bool:
        for a in order:
            if value[a] is None:
                for guess in (1, 0):
                    mark = len(trail)
                    if propagate([(a, guess)], trail) and search():
                        return True
                    undo(trail, mark)
                return False
        return True

    if not search():
        return None
    return StateSolution([_q(v) for v in value])
