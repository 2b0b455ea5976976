"""Separate-level block decomposition and SVG rendering."""

import json

import pytest

from omlkit.corpus import load, thirty_nine
from omlkit.layout import build_levels, find_independent_sets, render_svg
from omlkit.mmp import parse_mmp


def test_single_block():
    h = load("star-1")
    assert find_independent_sets(h) == [(0,)]
    plan = build_levels(h)
    assert plan.independent_blocks == [0]
    assert plan.free_atoms == []
    assert plan.level1 == [] and plan.level1_closed
    assert plan.level2 == [] and plan.level3 == []
    assert plan.diagnostic == ""


def test_two_blocks_sharing_one_atom():
    h = load("smallest-oml")
    assert find_independent_sets(h) == [(1, 2)]
    plan = build_levels(h)
    assert plan.independent_blocks == [1, 2]
    assert plan.level1 == [0] and plan.level1_closed


def test_pentagon_plan():
    h = load("pentagon")
    sets = find_independent_sets(h)
    assert len(sets) == 5 and sets[0] == (0, 2)
    plan = build_levels(h)
    assert plan.to_json() == {
        "independent_blocks": [0, 2],
        "free_atoms": ["4", "8", "9", "A"],
        "level1": [1],
        "level1_closed": True,
        "level2": [],
        "level3": [[3, 4]],
        "diagnostic": "",
    }


def test_thirty_nine_06_plan():
    plan = build_levels(thirty_nine("06"))
    assert plan.independent_blocks == [0, 7, 11, 17, 19, 26, 30, 35, 36]
    assert len(plan.level1) == 9 and plan.level1_closed
    assert len(plan.level2) == 3
    assert len(plan.level3) == 2
    assert plan.diagnostic == ""


@pytest.mark.parametrize("tag", ["00", "02", "06", "09"])
def test_partition_invariant(tag):
    h = thirty_nine(tag)
    plan = build_levels(h)
    levels = plan.all_level_blocks()
    assert sorted(levels) == list(range(h.n_blocks))
    free = set(plan.free_atoms)
    for bi in plan.independent_blocks:
        assert free.isdisjoint(h.blocks[bi])


def test_explicit_independent_set():
    h = load("pentagon")
    plan = build_levels(h, independent=[1, 3])
    assert plan.independent_blocks == [1, 3]
    assert sorted(plan.all_level_blocks()) == list(range(h.n_blocks))


def test_invalid_independent_sets_rejected():
    h = load("pentagon")
    with pytest.raises(ValueError):
        build_levels(h, independent=[0, 1])  # blocks 0 and 1 share atom 3


def test_connector_shape():
    # level-1 blocks bridge two distinct independent blocks with one free
    # middle atom
    h = thirty_nine("06")
    plan = build_levels(h)
    ind_atoms = set()
    for bi in plan.independent_blocks:
        ind_atoms |= set(h.blocks[bi])
    for bi in plan.level1:
        inside = [v for v in h.blocks[bi] if v in ind_atoms]
        assert len(inside) == 2
    for cyc in plan.level2:
        for bi in cyc:
            inside = [v for v in h.blocks[bi] if v in ind_atoms]
            assert len(inside) == 2


def test_diagnostic_on_unconnectable_layout():
    # two disjoint blocks with no connecting block between them
    h = parse_mmp("123,456.")
    plan = build_levels(h)
    assert plan.independent_blocks == [0, 1]
    assert plan.level1 == []
    assert plan.diagnostic != ""


def test_svg_outputs():
    plan = build_levels(load("pentagon"))
    svgs = render_svg(plan)
    assert set(svgs) == {"level1", "level2", "level3", "combined"}
    for doc in svgs.values():
        assert doc.startswith("<svg ")
        assert doc.rstrip().endswith("</svg>")
    # every atom label appears in the combined drawing
    for label in "123456789A":
        assert f">{label}</text>" in svgs["combined"]


def test_svg_deterministic():
    h = thirty_nine("06")
    a = render_svg(build_levels(h))
    b = render_svg(build_levels(h))
    assert a == b


def test_plan_json_serializable():
    plan = build_levels(thirty_nine("00"))
    blob = json.dumps(plan.to_json(), sort_keys=True)
    assert json.loads(blob)["level1_closed"] is True
