"""Exact rational state-space analysis."""

from fractions import Fraction

import pytest

from omlkit.corpus import conway_kochen, load, thirty_nine
from omlkit.lattice import paste
from omlkit.states import (
    ALL_QUERIES,
    block_system,
    count_state_freedom,
    solve_lp,
    solve_states,
    two_valued_coloring,
)


def _frac(s):
    return Fraction(str(s))


# ---------------------------------------------------------------------------
# LP core


def test_lp_simple_feasible():
    # x + y = 1, minimize x -> x=0, y=1
    res = solve_lp([[1, 1]], [1], [1, 0], minimize=True)
    assert res.status == "optimal"
    assert _frac(res.value) == 0


def test_lp_infeasible():
    res = solve_lp([[1, 1], [1, 1]], [1, 2], [1, 0])
    assert res.status == "infeasible"


def test_lp_exact_rationals():
    # three overlapping unit-sum rows force exact thirds
    A = [[1, 1, 1, 0, 0], [0, 0, 1, 1, 1]]
    res = solve_lp(A, [1, 1], [0, 0, -1, 0, 0])
    assert res.status == "optimal"
    assert _frac(res.value) == -1


def test_block_system_shape():
    h = load("pentagon")
    A, b, order = block_system(h)
    assert len(A) == h.n_blocks
    assert all(v == 1 for v in b)
    assert len(order) == h.n_atoms


# ---------------------------------------------------------------------------
# classification queries


def test_boolean_block_states():
    rep = solve_states(paste("123."), ALL_QUERIES)
    assert rep.admits_state is True
    assert rep.exactly_one is False
    assert rep.state_freedom == 2
    assert rep.two_valued is True
    assert rep.strong_quantum is True
    assert rep.strong_classical is True
    assert rep.full_order_determining is True


def test_pentagon_states():
    rep = solve_states(paste(load("pentagon")), ALL_QUERIES)
    assert rep.admits_state is True
    assert rep.state_freedom == 5
    assert rep.two_valued is True
    assert rep.strong_quantum is True
    assert rep.strong_classical is True


def test_39_39_00_unique_uniform_state():
    rep = solve_states(
        paste(thirty_nine("00")),
        frozenset({"admits_state", "exactly_one", "state_freedom"}),
    )
    assert rep.admits_state is True
    assert rep.exactly_one is True
    assert rep.state_freedom == 0
    assert all(str(v) == "1/3" for v in rep.example_state.values)


def test_39_39_00_not_strong():
    rep = solve_states(paste(thirty_nine("00")), frozenset({"strong_quantum"}))
    assert rep.strong_quantum is False
    assert rep.strong_quantum_witness is not None


def test_conway_kochen_strong_but_not_colorable():
    L = paste(conway_kochen())
    rep = solve_states(L, frozenset({"strong_quantum", "two_valued"}))
    assert rep.strong_quantum is True
    assert rep.two_valued is False


def test_two_valued_coloring_direct():
    h = load("pentagon")
    sol = two_valued_coloring(h)
    assert sol is not None
    values = {v: _frac(x) for v, x in zip(h.vertices, sol.values)}
    for blk in h.blocks:
        assert sum(values[v] for v in blk) == 1
        assert all(values[v] in (0, 1) for v in blk)
    assert two_valued_coloring(conway_kochen()) is None


def test_two_valued_coloring_pins():
    h = load("pentagon")
    v0 = h.vertices[0]
    sol = two_valued_coloring(h, pins=((0, 1),))
    assert sol is not None and _frac(sol.values[0]) == 1
    # contradictory pins: two atoms of one block both forced to 1
    assert two_valued_coloring(h, pins=((0, 1), (1, 1))) is None


def test_state_freedom_count():
    assert count_state_freedom(paste("123.")) == 2
    assert count_state_freedom(paste(thirty_nine("00"))) == 0


def test_report_json_rationals():
    rep = solve_states(paste("123."), frozenset({"admits_state"}))
    j = rep.to_json()
    assert j["admits_state"] is True
    if "example_state" in j:
        for s in j["example_state"]:
            Fraction(s)  # parses as p/q
