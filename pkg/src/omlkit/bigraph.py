"""Cubic bipartite graphs: conversion to/from MMP hypergraphs, girth,
canonical forms, and exhaustive girth-constrained generation.

A 3-regular, 3-uniform MMP hypergraph corresponds to a cubic bipartite
graph: atoms become white vertices, blocks black vertices, incidence becomes
adjacency.  Hypergraph duality is the color swap.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional

from .mmp import MmpHypergraph


@dataclass(frozen=True)
class BipartiteGraph:
    """White/black bipartite graph; adjacency lists black neighbors per white."""

    white_count: int
    black_count: int
    adjacency: tuple[tuple[int, ...], ...]  # per white vertex, sorted black ids

    def __post_init__(self):
        if len(self.adjacency) != self.white_count:
            raise ValueError("adjacency length must equal white_count")
        for row in self.adjacency:
            for b in row:
                if not (0 <= b < self.black_count):
                    raise ValueError(f"black index {b} out of range")

    @cached_property
    def black_adjacency(self) -> tuple[tuple[int, ...], ...]:
        rows: list[list[int]] = [[] for _ in range(self.black_count)]
        for w, nbrs in enumerate(self.adjacency):
            for b in nbrs:
                rows[b].append(w)
        return tuple(tuple(sorted(r)) for r in rows)

    @property
    def n_vertices(self) -> int:
        return self.white_count + self.black_count

    def is_cubic(self) -> bool:
        return all(len(r) == 3 for r in self.adjacency) and all(
            len(r) == 3 for r in self.black_adjacency
        )

    def is_connected(self) -> bool:
        n = self.n_vertices
        if n == 0:
            return True
        adj = self._unified_adj()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == n

    def _unified_adj(self) -> list[list[int]]:
        """Whites are 0..W-1, blacks W..W+B-1."""
        w = self.white_count
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for wv, nbrs in enumerate(self.adjacency):
            for b in nbrs:
                adj[wv].append(w + b)
                adj[w + b].append(wv)
        return adj

    def to_text(self) -> str:
        lines = [f"{self.white_count} {self.black_count}"]
        for nbrs in self.adjacency:
            lines.append(" ".join(str(b) for b in nbrs))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "BipartiteGraph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        w, b = map(int, lines[0].split())
        adj = tuple(tuple(sorted(map(int, ln.split()))) for ln in lines[1 : w + 1])
        return BipartiteGraph(w, b, adj)


WHITE = "WHITE"
BLACK = "BLACK"


def to_graph6(g: BipartiteGraph) -> str:
    """Compact ASCII interchange encoding (graph6) of the unified graph;
    whites come first in vertex order.  The bipartition itself is not
    stored."""
    n = g.n_vertices
    if n > 62:
        header = [126] + [63 + ((n >> s) & 63) for s in (12, 6, 0)]
    else:
        header = [63 + n]
    adj = g._unified_adj()
    adj_sets = [set(r) for r in adj]
    bits = []
    for y in range(1, n):
        for x in range(y):
            bits.append(1 if x in adj_sets[y] else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = header[:]
    for k in range(0, len(bits), 6):
        v = 0
        for bit in bits[k : k + 6]:
            v = (v << 1) | bit
        chars.append(63 + v)
    return "".join(chr(c) for c in chars)


def from_graph6(s: str) -> BipartiteGraph:
    """Decode a graph6 string into a BipartiteGraph; the graph must be
    bipartite, and each component's side containing its least vertex is
    taken white."""
    data = [ord(c) - 63 for c in s.strip()]
    if data and data[0] == 63:  # chr(126) - 63
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        data = data[4:]
    else:
        n = data[0]
        data = data[1:]
    bits = []
    for v in data:
        for shift in (5, 4, 3, 2, 1, 0):
            bits.append((v >> shift) & 1)
    adj: list[set[int]] = [set() for _ in range(n)]
    k = 0
    for y in range(1, n):
        for x in range(y):
            if bits[k]:
                adj[x].add(y)
                adj[y].add(x)
            k += 1
    color = [-1] * n
    for root in range(n):
        if color[root] != -1:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if color[u] == -1:
                    color[u] = 1 - color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    raise ValueError("graph6 input is not bipartite")
    whites = [v for v in range(n) if color[v] == 0]
    blacks = [v for v in range(n) if color[v] == 1]
    black_id = {v: i for i, v in enumerate(blacks)}
    rows = tuple(
        tuple(sorted(black_id[u] for u in adj[w])) for w in whites
    )
    return BipartiteGraph(len(whites), len(blacks), rows)


def mmp_to_graph(h: MmpHypergraph) -> BipartiteGraph:
    if not h.is_uniform(3) or not h.is_regular(3):
        raise ValueError("mmp_to_graph requires a 3-regular, 3-uniform hypergraph")
    vorder = {v: i for i, v in enumerate(h.vertices)}
    adj: list[list[int]] = [[] for _ in h.vertices]
    for bi, blk in enumerate(h.blocks):
        for v in blk:
            adj[vorder[v]].append(bi)
    return BipartiteGraph(h.n_atoms, h.n_blocks, tuple(tuple(sorted(r)) for r in adj))


def graph_to_mmp(g: BipartiteGraph, atom_color: str = WHITE) -> MmpHypergraph:
    if not g.is_cubic():
        raise ValueError("graph_to_mmp requires a cubic graph")
    if atom_color == WHITE:
        blocks = tuple(tuple(w + 1 for w in g.black_adjacency[b]) for b in range(g.black_count))
    elif atom_color == BLACK:
        blocks = tuple(tuple(b + 1 for b in g.adjacency[w]) for w in range(g.white_count))
    else:
        raise ValueError(f"atom_color must be WHITE or BLACK, got {atom_color!r}")
    return MmpHypergraph(blocks)


def girth(g: BipartiteGraph) -> float:
    """Length of the shortest cycle; inf for forests."""
    adj = g._unified_adj()
    n = g.n_vertices
    best = float("inf")
    for root in range(n):
        depth = [-1] * n
        parent = [-1] * n
        depth[root] = 0
        frontier = [root]
        while frontier and 2 * depth[frontier[0]] + 1 < best:
            nxt = []
            for v in frontier:
                for u in adj[v]:
                    if u == parent[v]:
                        continue
                    if depth[u] == -1:
                        depth[u] = depth[v] + 1
                        parent[u] = v
                        nxt.append(u)
                    else:
                        best = min(best, depth[u] + depth[v] + 1)
            frontier = nxt
    return best


# ---------------------------------------------------------------------------
# canonical forms


@dataclass(frozen=True)
class CanonicalCode:
    data: bytes

    def __lt__(self, other: "CanonicalCode") -> bool:
        return self.data < other.data


def _refine(adj: list[list[int]], colors: list[int]) -> list[int]:
    """Iterated color refinement to a stable partition; canonical color ids."""
    n = len(adj)
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(n)
        ]
        order = sorted(set(sigs))
        remap = {s: i for i, s in enumerate(order)}
        new = [remap[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


class _CanonBudget(Exception):
    pass


def _canon_search(
    adj: list[list[int]], colors: list[int], _budget: Optional[list[int]] = None
) -> bytes:
    """Individualization-refinement canonical form: minimum over branches."""
    n = len(adj)
    if _budget is not None:
        _budget[0] -= 1
        if _budget[0] < 0:
            raise _CanonBudget
    colors = _refine(adj, colors)
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(colors[v], []).append(v)
    target = None
    for c in sorted(cells):
        if len(cells[c]) > 1:
            target = cells[c]
            break
    if target is None:
        # discrete: emit code = color sequence + adjacency bits under labeling
        perm = sorted(range(n), key=lambda v: colors[v])
        pos = [0] * n
        for i, v in enumerate(perm):
            pos[v] = i
        bits = bytearray((n * n + 7) // 8)
        for v in range(n):
            for u in adj[v]:
                idx = pos[v] * n + pos[u]
                bits[idx >> 3] |= 1 << (idx & 7)
        head = bytes([n & 0xFF, n >> 8])
        return head + bytes(bits)
    best: Optional[bytes] = None
    base = max(colors) + 1
    for v in target:
        branched = list(colors)
        branched[v] = base
        code = _canon_search(adj, branched, _budget)
        if best is None or code < best:
            best = code
    assert best is not None
    return best


def canonical_code(g: BipartiteGraph, respect_colors: bool = True) -> CanonicalCode:
    adj = g._unified_adj()
    if respect_colors:
        colors = [0] * g.white_count + [1] * g.black_count
    else:
        colors = [0] * g.n_vertices
    return CanonicalCode(_canon_search(adj, colors))


def hypergraph_canonical_code(h: MmpHypergraph, respect_colors: bool = True) -> CanonicalCode:
    """Canonical code of the vertex/block incidence graph (any block sizes)."""
    vorder = {v: i for i, v in enumerate(h.vertices)}
    na = h.n_atoms
    adj: list[list[int]] = [[] for _ in range(na + h.n_blocks)]
    for bi, blk in enumerate(h.blocks):
        for v in blk:
            adj[vorder[v]].append(na + bi)
            adj[na + bi].append(vorder[v])
    colors = [0] * na + ([1] * h.n_blocks if respect_colors else [0] * h.n_blocks)
    return CanonicalCode(_canon_search(adj, colors))


def isomorphic(g1: BipartiteGraph, g2: BipartiteGraph, respect_colors: bool = True) -> bool:
    return canonical_code(g1, respect_colors) == canonical_code(g2, respect_colors)


def mmp_isomorphic(h1: MmpHypergraph, h2: MmpHypergraph) -> bool:
    return hypergraph_canonical_code(h1) == hypergraph_canonical_code(h2)


# ---------------------------------------------------------------------------
# generation


class BudgetExhausted(Exception):
    """Search ran out of budget; carries a resumable decision path."""

    def __init__(self, resume_path: tuple[int, ...], found: list):
        super().__init__(f"budget exhausted at decision path {resume_path}")
        self.resume_path = resume_path
        self.found = found


@dataclass
class GenerationJob:
    white_count: int
    min_girth: int = 10
    shard: Optional[tuple[int, int]] = None  # (i, n)
    node_budget: Optional[int] = None
    time_budget: Optional[float] = None  # seconds
    resume_path: tuple[int, ...] = ()
    cache_depth: int = 10  # explored-configuration rejection up to this many
    # added edges; 0 disables
    shard_depth: int = 6  # branch decisions used to split shards

    def __post_init__(self):
        if self.min_girth % 2 != 0 or self.min_girth < 4:
            raise ValueError("min_girth must be even and >= 4")
        if self.shard is not None:
            i, n = self.shard
            if not (0 <= i < n):
                raise ValueError("shard must satisfy 0 <= i < n")


class _GenState:
    """Backtracking state for cubic bipartite generation from a starting tree."""

    def __init__(self, job: GenerationJob):
        self.job = job
        n = job.white_count
        self.n = n
        self.nv = 2 * n  # whites 0..n-1, blacks n..2n-1
        g = job.min_girth
        self.forbid_radius = g - 2  # new edge (u,v) needs dist(u,v) >= g-1
        self.adj: list[set[int]] = [set() for _ in range(self.nv)]
        self.deg = [0] * self.nv
        self.tree_ok = self._build_tree(g // 2 - 1)

    def _build_tree(self, depth: int) -> bool:
        n = self.n
        next_white, next_black = 1, n + 1
        w0, b0 = 0, n

        def add(u, v):
            self.adj[u].add(v)
            self.adj[v].add(u)
            self.deg[u] += 1
            self.deg[v] += 1

        add(w0, b0)
        layer = [w0, b0]
        for _ in range(depth):
            nxt = []
            for v in layer:
                want = 3 - self.deg[v]
                for _ in range(want):
                    if v < n:
                        if next_black >= 2 * n:
                            return False
                        child = next_black
                        next_black += 1
                    else:
                        if next_white >= n:
                            return False
                        child = next_white
                        next_white += 1
                    add(v, child)
                    nxt.append(child)
            layer = nxt
        self.first_fresh_white = next_white
        self.first_fresh_black = next_black
        return True

    def near_mask(self, u: int) -> set[int]:
        """Vertices within distance forbid_radius of u (incl. u)."""
        seen = {u}
        frontier = [u]
        for _ in range(self.forbid_radius):
            nxt = []
            for v in frontier:
                for w in self.adj[v]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen

    def candidates(self, u: int, forbidden: set[frozenset]) -> list[int]:
        """Legal partners for a deficient vertex u; fresh vertices collapse to
        one representative per color (they are interchangeable)."""
        n = self.n
        if u < n:
            lo, hi = n, 2 * n
            fresh_rep = None
            for v in range(self.first_fresh_black, 2 * n):
                if self.deg[v] == 0:
                    fresh_rep = v
                    break
        else:
            lo, hi = 0, n
            fresh_rep = None
            for v in range(self.first_fresh_white, n):
                if self.deg[v] == 0:
                    fresh_rep = v
                    break
        near = self.near_mask(u)
        out = []
        for v in range(lo, hi):
            if self.deg[v] >= 3 or self.deg[v] == 0 or v in near:
                continue
            if frozenset((u, v)) in forbidden:
                continue
            out.append(v)
        if fresh_rep is not None and frozenset((u, fresh_rep)) not in forbidden:
            out.append(fresh_rep)
        return out

    def add_edge(self, u: int, v: int) -> None:
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.deg[u] += 1
        self.deg[v] += 1

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.deg[u] -= 1
        self.deg[v] -= 1

    def complete(self) -> bool:
        return all(d == 3 for d in self.deg)

    def snapshot(self) -> BipartiteGraph:
        n = self.n
        adj = tuple(tuple(sorted(b - n for b in self.adj[w])) for w in range(n))
        return BipartiteGraph(n, n, adj)

    def partial_code(self) -> Optional[bytes]:
        """Canonical form of the partial configuration (degrees as colors).
        Returns None if the form is too expensive (early configurations with
        large symmetry groups); those nodes are simply not cached."""
        adj = [sorted(s) for s in self.adj]
        colors = [
            (0 if v < self.n else 4) + self.deg[v] for v in range(self.nv)
        ]
        try:
            return _canon_search(adj, colors, [4000])
        except _CanonBudget:
            return None


def generate(job: GenerationJob) -> Iterator[BipartiteGraph]:
    """One representative per isomorphism class of connected cubic bipartite
    graphs on white_count+white_count vertices with girth >= min_girth.

    Backtracks on the deficient vertex with fewest candidate partners, with
    forced-edge propagation, interchangeable-fresh-vertex collapsing, an
    explored-configuration rejection cache at shallow depths, and final
    deduplication by canonical code.  Output sorted by canonical code.
    """
    found: dict[bytes, BipartiteGraph] = {}
    st = _GenState(job)
    if not st.tree_ok:
        return iter(())
    start_time = time.monotonic()
    nodes = [0]
    caches: dict[int, set[bytes]] = {}
    decisions: list[int] = []
    resume = list(job.resume_path)

    def check_budget():
        nodes[0] += 1
        if job.node_budget is not None and nodes[0] > job.node_budget:
            raise BudgetExhausted(tuple(decisions), list(found.values()))
        if job.time_budget is not None and nodes[0] % 256 == 0:
            if time.monotonic() - start_time > job.time_budget:
                raise BudgetExhausted(tuple(decisions), list(found.values()))

    def shard_of(path: list[int]) -> int:
        hsh = 0
        for c in path:
            hsh = (hsh * 1000003 + c) & 0xFFFFFFFF
        return hsh % job.shard[1]

    def search(depth: int, branch_count: int):
        check_budget()
        if st.complete():
            g = st.snapshot()
            if g.is_connected():
                code = canonical_code(g).data
                found.setdefault(code, g)
            return
        deficient = [v for v in range(st.nv) if st.deg[v] < 3]
        if not deficient:
            return
        # forced-edge propagation happens via the need==len(cands) branch
        forbidden: set[frozenset] = set()
        best_v, best_c = None, None
        for v in deficient:
            cands = st.candidates(v, forbidden)
            need = 3 - st.deg[v]
            if len(cands) < need:
                return
            if best_c is None or len(cands) - need < len(best_c) - (3 - st.deg[best_v]):
                best_v, best_c = v, cands
                if len(cands) == need:
                    break
        assert best_v is not None and best_c is not None
        for ci, v in enumerate(best_c):
            decisions.append(ci)
            skip = False
            if resume and len(decisions) <= len(resume):
                idx = len(decisions) - 1
                if decisions[idx] < resume[idx]:
                    skip = True
                elif decisions[idx] > resume[idx]:
                    del resume[:]  # past the resume point
            st.add_edge(best_v, v)
            prune = skip
            branching = len(best_c) > 1
            if not prune and job.shard is not None and branching and branch_count + 1 == job.shard_depth:
                if shard_of(decisions) != job.shard[0]:
                    prune = True
            # the rejection cache is only sound within a single complete run:
            # a pruned configuration's completions were seen earlier in *this*
            # search, so sharded runs must not use it
            use_cache = job.cache_depth and job.shard is None
            if not prune and use_cache and depth + 1 <= job.cache_depth:
                code = st.partial_code()
                if code is not None:
                    seen = caches.setdefault(depth + 1, set())
                    if code in seen:
                        prune = True
                    else:
                        seen.add(code)
            if not prune:
                search(depth + 1, branch_count + (1 if branching else 0))
            st.remove_edge(best_v, v)
            decisions.pop()
            forbidden.add(frozenset((best_v, v)))
            # re-collapsing: forbidding a fresh representative forbids all
            # fresh vertices of that color; candidates() returns a single
            # representative, so nothing further is needed here.

    search(0, 0)
    for code in sorted(found):
        yield found[code]


def generate_mmp_classes(graphs: list[BipartiteGraph]) -> list[MmpHypergraph]:
    """Split graph classes into MMP classes: self-dual graphs give one, the
    rest give two (the hypergraph and its dual)."""
    out: list[MmpHypergraph] = []
    for g in graphs:
        h = graph_to_mmp(g, WHITE)
        hd = graph_to_mmp(g, BLACK)
        out.append(h)
        if not mmp_isomorphic(h, hd):
            out.append(hd)
    return out


def brute_force_cubic_bipartite(n: int, min_girth: int = 4) -> list[BipartiteGraph]:
    """Independent oracle: all connected cubic bipartite n+n graphs with
    girth >= min_girth by row-wise enumeration, deduplicated canonically."""
    from itertools import combinations

    rows = list(combinations(range(n), 3))
    found: dict[bytes, BipartiteGraph] = {}

    def rec(w: int, coldeg: list[int], chosen: list[tuple[int, ...]]):
        if w == n:
            if all(d == 3 for d in coldeg):
                g = BipartiteGraph(n, n, tuple(chosen))
                if g.is_connected() and girth(g) >= min_girth:
                    found.setdefault(canonical_code(g).data, g)
            return
        for row in rows:
            if chosen and row < chosen[-1]:
                continue  # rows in nondecreasing order kills permutations
            ok = True
            for b in row:
                if coldeg[b] + 1 > 3:
                    ok = False
                    break
            if not ok:
                continue
            for b in row:
                coldeg[b] += 1
            chosen.append(row)
            rec(w + 1, coldeg, chosen)
            chosen.pop()
            for b in row:
                coldeg[b] -= 1

    rec(0, [0] * n, [])
    return [found[c] for c in sorted(found)]


# ---------------------------------------------------------------------------
# small Greechie hypergraph generation


def generate_greechie_small(
    max_blocks: int, block_size: int = 3, connected_only: bool = False
) -> Iterator[MmpHypergraph]:
    """All isomorphism classes of GREECHIE-valid 3-uniform hypergraphs with
    1..max_blocks blocks, grown block-by-block with canonical deduplication."""
    from itertools import combinations

    from .mmp import validate

    if block_size != 3:
        raise ValueError("only 3-uniform generation is supported")
    base = MmpHypergraph((tuple((1, 2, 3)),))
    level: dict[bytes, MmpHypergraph] = {hypergraph_canonical_code(base).data: base}
    for h in level.values():
        if not connected_only or h.is_connected():
            yield h
    for _ in range(1, max_blocks):
        nxt: dict[bytes, MmpHypergraph] = {}
        for h in level.values():
            m = h.n_atoms
            verts = list(range(1, m + 1))
            hn = h.normalized()
            for j in range(0, 4):
                for shared in combinations(verts, j):
                    fresh = tuple(range(m + 1, m + 1 + (3 - j)))
                    newblock = shared + fresh
                    cand = MmpHypergraph(hn.blocks + (newblock,))
                    if not validate(cand, "GREECHIE").valid:
                        continue
                    code = hypergraph_canonical_code(cand).data
                    if code not in nxt:
                        nxt[code] = cand
        level = nxt
        for h in level.values():
            if not connected_only or h.is_connected():
                yield h
