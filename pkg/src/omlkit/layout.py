"""Separate-level decomposition of equal-atoms/blocks hypergraphs and
static SVG rendering.

The decomposition picks a maximum set of independent blocks (pairwise
atom-disjoint, with no single block touching three of them), draws them
radially, and sorts every other block into levels: level 1 is a shortest
closed walk of connecting blocks visiting every independent block, level 2
collects further cycles of connecting blocks, and level 3 keeps whatever
remains as maximal chained sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, pi, sin
from typing import Optional, Sequence

from .mmp import MmpHypergraph, vertex_label


@dataclass
class LayoutPlan:
    hypergraph: MmpHypergraph
    independent_blocks: list  # block indices
    free_atoms: list  # vertex labels not in any independent block
    level1: list  # block indices, walk order (distinct blocks once each)
    level1_closed: bool
    level2: list  # list of cycles (each a list of block indices)
    level3: list  # list of open sequences (each a list of block indices)
    diagnostic: str = ""

    def all_level_blocks(self) -> list:
        out = list(self.independent_blocks) + list(self.level1)
        for cyc in self.level2:
            out.extend(cyc)
        for seq in self.level3:
            out.extend(seq)
        return out

    def to_json(self) -> dict:
        return {
            "independent_blocks": list(self.independent_blocks),
            "free_atoms": [vertex_label(v) for v in self.free_atoms],
            "level1": list(self.level1),
            "level1_closed": self.level1_closed,
            "level2": [list(c) for c in self.level2],
            "level3": [list(s) for s in self.level3],
            "diagnostic": self.diagnostic,
        }


def find_independent_sets(h: MmpHypergraph) -> list:
    """All maximum-cardinality sets of independent blocks: pairwise
    atom-disjoint, and no block of h meets three of them.  Returned as
    sorted tuples of block indices, lexicographically ordered."""
    blocks = [frozenset(b) for b in h.blocks]
    nb = len(blocks)
    disjoint = [
        [j for j in range(nb) if j > i and not (blocks[i] & blocks[j])]
        for i in range(nb)
    ]
    best: list = []
    best_size = [0]

    def touches_three(chosen: list, cand: int) -> bool:
        sel = chosen + [cand]
        for k, blk in enumerate(blocks):
            hits = 0
            for i in sel:
                if blk & blocks[i] and k != i:
                    hits += 1
                    if hits >= 3:
                        return True
        return False

    def extend(chosen: list, candidates: list):
        if len(chosen) > best_size[0]:
            best_size[0] = len(chosen)
            best.clear()
        if len(chosen) == best_size[0]:
            best.append(tuple(chosen))
        for idx, i in enumerate(candidates):
            if len(chosen) + (len(candidates) - idx) < best_size[0]:
                break
            if touches_three(chosen, i):
                continue
            nxt = [j for j in candidates[idx + 1 :] if not (blocks[i] & blocks[j])]
            extend(chosen + [i], nxt)

    extend([], list(range(nb)))
    return sorted(t for t in best if len(t) == best_size[0])


def build_levels(
    h: MmpHypergraph, independent: Optional[Sequence] = None
) -> LayoutPlan:
    """Decompose h's blocks into the separate-level structure around a set
    of independent blocks (default: the lexicographically least maximum
    one).  Every block lands in exactly one of independent/level1/level2/
    level3."""
    if independent is None:
        sets = find_independent_sets(h)
        independent = list(sets[0])
    independent = sorted(independent)
    blocks = [frozenset(b) for b in h.blocks]
    ind_atoms: set = set()
    _check_independent(h, independent)
    for i in independent:
        ind_atoms |= blocks[i]
    free_atoms = [v for v in h.vertices if v not in ind_atoms]
    owner = {}
    for i in independent:
        for v in blocks[i]:
            owner[v] = i

    remaining = [i for i in range(len(blocks)) if i not in independent]
    # connecting blocks: exactly two atoms inside (distinct) independent
    # blocks, one free middle atom
    edges = {}  # block index -> (ind_a, ind_b)
    for i in remaining:
        touched = sorted({owner[v] for v in blocks[i] if v in owner})
        if len(touched) == 2 and len([v for v in blocks[i] if v in owner]) == 2:
            edges[i] = tuple(touched)

    diagnostic = ""
    level1, closed = _covering_walk(independent, edges)
    used = set(level1)
    if not level1 and len(independent) > 1:
        diagnostic = "no connecting walk visits every independent block"

    rest_edges = {i: e for i, e in edges.items() if i not in used}
    level2, open_walks = _extract_cycles(rest_edges)
    for cyc in level2:
        used.update(cyc)

    leftovers = [i for i in remaining if i not in used and i not in edges]
    leftovers += open_walks
    level3 = _chain_sequences(sorted(set(leftovers)), blocks)
    return LayoutPlan(
        hypergraph=h,
        independent_blocks=list(independent),
        free_atoms=free_atoms,
        level1=level1,
        level1_closed=closed,
        level2=level2,
        level3=level3,
        diagnostic=diagnostic,
    )


def _check_independent(h: MmpHypergraph, independent: Sequence) -> None:
    blocks = [frozenset(b) for b in h.blocks]
    for i in independent:
        for j in independent:
            if i < j and blocks[i] & blocks[j]:
                raise ValueError(f"blocks {i} and {j} share an atom")
    for k, blk in enumerate(blocks):
        hits = sum(1 for i in independent if k != i and blk & blocks[i])
        if hits >= 3:
            raise ValueError(f"block {k} connects three independent blocks")


def _covering_walk(independent: Sequence, edges: dict):
    """Shortest walk through the independent-block multigraph using
    connecting blocks as edges, visiting every independent block; closed
    walks preferred, then open ones; ties broken by the lexicographically
    least block-index sequence.  Returns (distinct blocks in walk order,
    closed?)."""
    if not independent:
        return [], False
    verts = {b: k for k, b in enumerate(independent)}
    nv = len(verts)
    full = (1 << nv) - 1
    adj = [[] for _ in range(nv)]
    for i, (a, b) in sorted(edges.items()):
        adj[verts[a]].append((i, verts[b]))
        adj[verts[b]].append((i, verts[a]))
    if nv == 1:
        return [], True

    import heapq

    def shortest(require_closed: bool):
        best: dict = {}
        heap = []
        for s in range(nv):
            state = (s, 1 << s)
            heapq.heappush(heap, (0, (), s, s, 1 << s))
        while heap:
            cost, path, start, v, mask = heapq.heappop(heap)
            key = (start, v, mask) if require_closed else (v, mask)
            if key in best and best[key] <= (cost, path):
                continue
            best[key] = (cost, path)
            if mask == full and (not require_closed or v == start):
                return list(path)
            for i, w in adj[v]:
                npath = path + (i,)
                heapq.heappush(
                    heap, (cost + 1, npath, start, w, mask | (1 << w))
                )
        return None

    walk = shortest(require_closed=True)
    if walk is not None:
        return _dedup(walk), True
    walk = shortest(require_closed=False)
    if walk is not None:
        return _dedup(walk), False
    return [], False


def _dedup(seq: list) -> list:
    out = []
    for x in seq:
        if x not in out:
            out.append(x)
    return out


def _extract_cycles(edges: dict):
    """Greedy cycle decomposition of the leftover connecting blocks:
    repeatedly walk from the least unused block until the walk returns to
    its starting independent block.  Returns (cycles, blocks that could
    not be closed into any cycle)."""
    edges = dict(sorted(edges.items()))
    cycles = []
    leftover: list = []
    while edges:
        start_block, (a, b) = next(iter(edges.items()))
        cyc = [start_block]
        del edges[start_block]
        current, target = b, a
        while current != target:
            step = None
            for i, (x, y) in edges.items():
                if x == current or y == current:
                    step = i
                    break
            if step is None:
                break
            x, y = edges.pop(step)
            cyc.append(step)
            current = y if x == current else x
        if current == target:
            cycles.append(cyc)
        else:
            leftover.extend(cyc)
    return cycles, sorted(leftover)


def _chain_sequences(block_ids: list, blocks: list) -> list:
    """Group blocks into maximal sequences chained by shared atoms,
    starting from endpoints (fewest neighbors), deterministically."""
    if not block_ids:
        return []
    ids = list(block_ids)
    nbrs = {
        i: [j for j in ids if j != i and blocks[i] & blocks[j]] for i in ids
    }
    unused = set(ids)
    sequences = []
    while unused:
        start = min(
            unused, key=lambda i: (len([j for j in nbrs[i] if j in unused]), i)
        )
        seq = [start]
        unused.discard(start)
        current = start
        while True:
            nxt = [j for j in nbrs[current] if j in unused]
            if not nxt:
                break
            current = min(nxt)
            seq.append(current)
            unused.discard(current)
        sequences.append(seq)
    return sequences


# ---------------------------------------------------------------------------
# SVG rendering


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _polyline(points: list, stroke: str, width: float = 1.5) -> str:
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    return (
        f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
        f'stroke-width="{width}" />'
    )


def _dot(x: float, y: float, fill: str = "black", r: float = 3.0) -> str:
    return f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{fill}" />'


def _text(x: float, y: float, s: str) -> str:
    return (
        f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="9" '
        f'font-family="monospace" text-anchor="middle">{s}</text>'
    )


_LEVEL_COLORS = {1: "#c02020", 2: "#2040c0", 3: "#208020"}


def render_svg(plan: LayoutPlan) -> dict:
    """Deterministic SVG drawings: {"combined": svg, "level1": svg, ...}.
    Independent blocks sit on a regular polygon; each level's blocks are
    polylines in a concentric annulus, atoms as dots."""
    h = plan.hypergraph
    size = 480.0
    center = size / 2
    n_ind = max(len(plan.independent_blocks), 1)

    # coordinates for every atom: independent-block atoms on radial
    # segments, free atoms on inner rings per level
    coords: dict = {}
    r_out, r_in = size * 0.42, size * 0.30
    for k, bi in enumerate(plan.independent_blocks):
        ang = 2 * pi * k / n_ind - pi / 2
        blk = h.blocks[bi]
        for t, v in enumerate(sorted(blk)):
            r = r_out - t * (r_out - r_in) / 2
            coords[v] = (center + r * cos(ang), center + r * sin(ang))
    free = list(plan.free_atoms)
    placed = 0
    for v in sorted(free):
        ang = 2 * pi * placed / max(len(free), 1) - pi / 2
        r = size * 0.20
        coords[v] = (center + r * cos(ang), center + r * sin(ang))
        placed += 1

    def block_polyline(bi: int, color: str) -> list:
        blk = sorted(h.blocks[bi])
        pts = [coords[v] for v in blk]
        parts = [_polyline(pts, color)]
        for v in blk:
            x, y = coords[v]
            parts.append(_dot(x, y))
            parts.append(_text(x, y - 6, vertex_label(v)))
        return parts

    def document(parts: list) -> str:
        body = "\n".join(parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(size)}" '
            f'height="{int(size)}" viewBox="0 0 {int(size)} {int(size)}">\n'
            f"{body}\n</svg>\n"
        )

    ind_parts: list = []
    for bi in plan.independent_blocks:
        ind_parts.extend(block_polyline(bi, "black"))

    levels = {
        1: list(plan.level1),
        2: [b for cyc in plan.level2 for b in cyc],
        3: [b for seq in plan.level3 for b in seq],
    }
    out = {}
    combined = list(ind_parts)
    for lvl, ids in levels.items():
        parts = list(ind_parts)
        for bi in ids:
            parts.extend(block_polyline(bi, _LEVEL_COLORS[lvl]))
            combined.extend(block_polyline(bi, _LEVEL_COLORS[lvl]))
        out[f"level{lvl}"] = document(parts)
    out["combined"] = document(combined)
    return out
