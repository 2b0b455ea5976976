"""MMP hypergraph codec, validation, duality, and loop analysis.

An MMP hypergraph is a set of blocks (edges) over 1-based vertex indices.
The text encoding packs one hypergraph per line: blocks are comma separated,
vertices are single characters from a 90-symbol alphabet (optionally prefixed
by '+' runs to extend the alphabet indefinitely), and the line ends with '.'.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

# 90 base symbols in fixed order: digits 1-9, A-Z, a-z, then 29 punctuation
# marks.  ',', '.', and '+' are reserved by the encoding itself.
BASE_ALPHABET = (
    "123456789"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "abcdefghijklmnopqrstuvwxyz"
    "!\"#$%&'()*-/:;<=>?@[\\]^_`{|}~"
)
assert len(BASE_ALPHABET) == 90
_BASE_INDEX = {c: i for i, c in enumerate(BASE_ALPHABET)}


class MmpParseError(ValueError):
    """Raised on malformed MMP text; carries the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


def vertex_label(index: int) -> str:
    """Label for a 1-based vertex index: '+' prefixes plus one base symbol."""
    if index < 1:
        raise ValueError(f"vertex index must be positive, got {index}")
    q, r = divmod(index - 1, 90)
    return "+" * q + BASE_ALPHABET[r]


def vertex_index(label: str) -> int:
    """Inverse of vertex_label."""
    plusses = 0
    while plusses < len(label) and label[plusses] == "+":
        plusses += 1
    if plusses != len(label) - 1 or label[-1] not in _BASE_INDEX:
        raise ValueError(f"bad vertex label {label!r}")
    return plusses * 90 + _BASE_INDEX[label[-1]] + 1


@dataclass(frozen=True)
class MmpHypergraph:
    """Ordered blocks of 1-based vertex indices; vertex set is derived."""

    blocks: tuple[tuple[int, ...], ...]

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        seen = set()
        for b in self.blocks:
            seen.update(b)
        return tuple(sorted(seen))

    @cached_property
    def degrees(self) -> dict[int, int]:
        deg: dict[int, int] = {}
        for b in self.blocks:
            for v in b:
                deg[v] = deg.get(v, 0) + 1
        return deg

    @cached_property
    def blocks_of(self) -> dict[int, tuple[int, ...]]:
        """Vertex -> indices of blocks containing it (block order)."""
        out: dict[int, list[int]] = {}
        for i, b in enumerate(self.blocks):
            for v in b:
                out.setdefault(v, []).append(i)
        return {v: tuple(bs) for v, bs in out.items()}

    @property
    def n_atoms(self) -> int:
        return len(self.vertices)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def is_uniform(self, k: int = 3) -> bool:
        return all(len(b) == k for b in self.blocks)

    def is_regular(self, k: int = 3) -> bool:
        return all(d == k for d in self.degrees.values())

    def is_connected(self) -> bool:
        if not self.blocks:
            return True
        adj = self.blocks_of
        seen_blocks = {0}
        stack = [0]
        while stack:
            b = stack.pop()
            for v in self.blocks[b]:
                for nb in adj[v]:
                    if nb not in seen_blocks:
                        seen_blocks.add(nb)
                        stack.append(nb)
        return len(seen_blocks) == self.n_blocks

    def normalized(self) -> "MmpHypergraph":
        """Renumber vertices to 1..n in order of first appearance."""
        remap: dict[int, int] = {}
        for b in self.blocks:
            for v in b:
                if v not in remap:
                    remap[v] = len(remap) + 1
        return MmpHypergraph(tuple(tuple(remap[v] for v in b) for b in self.blocks))


def parse_mmp(text: str) -> MmpHypergraph:
    """Parse one MMP line.  Raises MmpParseError with a byte offset."""
    s = text.strip()
    if not s:
        raise MmpParseError("empty input", 0)
    if not s.endswith("."):
        raise MmpParseError("missing terminal '.'", len(s))
    body = s[:-1]
    blocks: list[tuple[int, ...]] = []
    block: list[int] = []
    seen_in_block: set[int] = set()
    plusses = 0
    start = 0
    for pos, ch in enumerate(body):
        if ch == "+":
            if plusses == 0:
                start = pos
            plusses += 1
        elif ch == ",":
            if plusses:
                raise MmpParseError("dangling '+' prefix", start)
            if not block:
                raise MmpParseError("empty block", pos)
            blocks.append(tuple(block))
            block, seen_in_block = [], set()
        elif ch in _BASE_INDEX:
            v = plusses * 90 + _BASE_INDEX[ch] + 1
            if v in seen_in_block:
                raise MmpParseError(f"repeated vertex {vertex_label(v)!r} in block", pos)
            seen_in_block.add(v)
            block.append(v)
            plusses = 0
        else:
            raise MmpParseError(f"character {ch!r} outside alphabet", pos)
    if plusses:
        raise MmpParseError("dangling '+' prefix", start)
    if not block:
        raise MmpParseError("empty block", len(body))
    blocks.append(tuple(block))
    return MmpHypergraph(tuple(blocks))


def serialize_mmp(h: MmpHypergraph) -> str:
    return ",".join("".join(vertex_label(v) for v in b) for b in h.blocks) + "."


def parse_mmp_lines(text: str) -> list[MmpHypergraph]:
    """One hypergraph per line; blank lines and '#' comment lines skipped."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(parse_mmp(line))
    return out


# ---------------------------------------------------------------------------
# validation


@dataclass
class Violation:
    rule: str
    message: str
    witness: tuple

    def to_json(self) -> dict:
        return {"rule": self.rule, "message": self.message, "witness": list(self.witness)}


@dataclass
class ValidationReport:
    level: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "valid": self.valid,
            "violations": [v.to_json() for v in self.violations],
        }


def _block_pairs_sharing(h: MmpHypergraph) -> Iterator[tuple[int, int, frozenset]]:
    seen: set[tuple[int, int]] = set()
    for v, bs in h.blocks_of.items():
        for x in range(len(bs)):
            for y in range(x + 1, len(bs)):
                key = (bs[x], bs[y])
                if key not in seen:
                    seen.add(key)
                    shared = frozenset(h.blocks[bs[x]]) & frozenset(h.blocks[bs[y]])
                    yield bs[x], bs[y], shared


def find_small_loops(h: MmpHypergraph, max_order: int = 4) -> list[tuple[int, ...]]:
    """Exhaustive search for loops of order 2..max_order (block index tuples).

    A loop of order n is a cyclic sequence of n distinct blocks joined by n
    mutually distinct atoms, one shared by each consecutive pair.
    """
    loops: list[tuple[int, ...]] = []
    # order 2: two blocks sharing >= 2 atoms
    for i, j, shared in _block_pairs_sharing(h):
        if len(shared) >= 2:
            loops.append((i, j))
    # adjacency with shared-atom sets
    adj: dict[int, dict[int, frozenset]] = {i: {} for i in range(h.n_blocks)}
    for i, j, shared in _block_pairs_sharing(h):
        adj[i][j] = shared
        adj[j][i] = shared

    def extend(path: list[int], atoms: list[int]) -> None:
        last = path[-1]
        for nxt, shared in adj[last].items():
            if nxt == path[0] and len(path) >= 3:
                for a in shared:
                    if a not in atoms:
                        loops.append(tuple(path))
                        break
            if nxt <= path[0] or nxt in path or len(path) >= max_order:
                continue
            for a in sorted(shared):
                if a not in atoms:
                    extend(path + [nxt], atoms + [a])
        return

    for start in range(h.n_blocks):
        extend([start], [])
    # deduplicate (same cyclic block set may be hit twice)
    uniq: dict[frozenset, tuple[int, ...]] = {}
    for lp in loops:
        uniq.setdefault(frozenset(lp), lp)
    return sorted(uniq.values(), key=lambda lp: (len(lp), lp))


def validate(h: MmpHypergraph, level: str = "MMP") -> ValidationReport:
    """level is "MMP" (Def. conditions only) or "GREECHIE" (adds diagram rules)."""
    if level not in ("MMP", "GREECHIE"):
        raise ValueError(f"unknown validation level {level!r}")
    report = ValidationReport(level=level)
    for i, b in enumerate(h.blocks):
        if len(b) < 3:
            report.violations.append(
                Violation("mmp-ii", f"block {i} has {len(b)} < 3 vertices", (i,))
            )
    for i, j, shared in _block_pairs_sharing(h):
        k = len(shared)
        need = k + 2
        for blk in (i, j):
            if len(h.blocks[blk]) < need:
                report.violations.append(
                    Violation(
                        "mmp-iii",
                        f"blocks {i},{j} share {k} vertices but block {blk} "
                        f"has only {len(h.blocks[blk])}",
                        (i, j),
                    )
                )
    if level == "GREECHIE":
        for i, j, shared in _block_pairs_sharing(h):
            if len(shared) > 1:
                report.violations.append(
                    Violation(
                        "greechie-4",
                        f"blocks {i},{j} intersect in {len(shared)} > 1 atoms",
                        (i, j),
                    )
                )
        for lp in find_small_loops(h, max_order=4):
            report.violations.append(
                Violation("greechie-5", f"loop of order {len(lp)} < 5", lp)
            )
    return report


# ---------------------------------------------------------------------------
# duality


def dualize(h: MmpHypergraph) -> MmpHypergraph:
    """Exchange atoms and blocks of a 3-regular, 3-uniform hypergraph."""
    if not h.is_uniform(3) or not h.is_regular(3):
        raise ValueError("dualize requires a 3-regular, 3-uniform hypergraph")
    # dual vertex j+1 per input block j; dual block per input vertex in
    # ascending vertex order
    return MmpHypergraph(
        tuple(
            tuple(b + 1 for b in h.blocks_of[v])
            for v in h.vertices
        )
    )


# ---------------------------------------------------------------------------
# loop analysis


@dataclass
class LoopReport:
    max_loop_order: int
    min_loop_order: Optional[int]
    witness: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "max_loop_order": self.max_loop_order,
            "min_loop_order": self.min_loop_order,
            "witness": list(self.witness),
        }


def loop_analysis(h: MmpHypergraph) -> LoopReport:
    """Exact loop-order extremes by DFS over block sequences.

    The maximum is over drawable polygon loops: every atom of every loop
    block is distinct except the chaining atoms, so an order-l loop of
    3-atom blocks uses exactly 2l atoms.  That forces the floor(n/2)
    ceiling (which also serves as an early exit).  The minimum uses the
    weaker chained definition that matches 2l-cycles in the bipartite
    incidence graph.
    """
    adj: dict[int, dict[int, frozenset]] = {i: {} for i in range(h.n_blocks)}
    for i, j, shared in _block_pairs_sharing(h):
        adj[i][j] = shared
        adj[j][i] = shared

    bound = h.n_atoms // 2 if h.is_uniform(3) else h.n_blocks
    best = 0
    best_witness: tuple[int, ...] = ()
    min_order: Optional[int] = None

    small = find_small_loops(h, max_order=4)
    if small:
        min_order = len(small[0])

    n_blocks = h.n_blocks
    atoms_of = [frozenset(b) for b in h.blocks]

    def extend(path: list[int], mult: dict, on_path: set[int]) -> bool:
        nonlocal best, best_witness
        last = path[-1]
        first = path[0]
        for nxt in sorted(adj[last]):
            if nxt == first and len(path) >= 2:
                continue  # closing handled below via fresh candidate blocks
            if nxt <= first or nxt in on_path:
                continue
            blk = atoms_of[nxt]
            # closing block: chains to last and first through two atoms
            # seen exactly once each, third atom fresh
            if len(path) >= 2 and first in adj[nxt] and len(path) + 1 > best:
                chain_last = [
                    a
                    for a in blk & atoms_of[last]
                    if mult.get(a, 0) == 1 and a not in atoms_of[first]
                ]
                chain_first = [
                    a
                    for a in blk & atoms_of[first]
                    if mult.get(a, 0) == 1 and a not in atoms_of[last]
                ]
                if chain_last and chain_first:
                    rest = blk - {chain_last[0], chain_first[0]}
                    if all(mult.get(a, 0) == 0 for a in rest):
                        best = len(path) + 1
                        best_witness = tuple(path) + (nxt,)
                        if best >= bound:
                            return True
            if len(path) + 1 >= n_blocks:
                continue
            # ordinary extension: one chain atom seen exactly once (in the
            # last block only), all other atoms fresh
            for a in sorted(blk & atoms_of[last]):
                if mult.get(a, 0) != 1:
                    continue
                others = blk - {a}
                if any(mult.get(x, 0) for x in others):
                    continue
                for x in blk:
                    mult[x] = mult.get(x, 0) + 1
                on_path.add(nxt)
                path.append(nxt)
                done = extend(path, mult, on_path)
                path.pop()
                on_path.discard(nxt)
                for x in blk:
                    mult[x] -= 1
                if done:
                    return True
        return False

    for start in range(n_blocks):
        if extend([start], {a: 1 for a in atoms_of[start]}, {start}):
            break
        if best >= bound:
            break

    # exact min order needs nothing beyond order 5 if a loop exists at all:
    # orders 2..4 were searched exhaustively above; if none and a loop was
    # found, the shortest is found via bounded BFS over loop lengths.
    if min_order is None and best > 0:
        min_order = _min_loop_order(adj, h.n_blocks)
    return LoopReport(max_loop_order=best, min_loop_order=min_order, witness=best_witness)


def _min_loop_order(adj: dict[int, dict[int, frozenset]], n_blocks: int) -> Optional[int]:
    """Shortest loop order via iterative deepening DFS over block sequences."""
    for target in range(2, n_blocks + 1):
        def dfs(path: list[int], atoms: set[int]) -> bool:
            last = path[-1]
            if len(path) == target:
                shared = adj[last].get(path[0])
                if shared and any(a not in atoms for a in shared):
                    return True
                return False
            for nxt in adj[last]:
                if nxt <= path[0] or nxt in path:
                    continue
                for a in adj[last][nxt]:
                    if a not in atoms:
                        atoms.add(a)
                        path.append(nxt)
                        if dfs(path, atoms):
                            return True
                        path.pop()
                        atoms.discard(a)
            return False

        for start in range(n_blocks):
            if dfs([start], set()):
                return target
    return None
