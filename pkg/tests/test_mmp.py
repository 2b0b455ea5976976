"""Encoding, validation, duality, and loop analysis."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omlkit.corpus import (
    THIRTY_NINE_TAGS,
    conway_kochen,
    corpus_names,
    load,
    load_text,
    thirty_nine,
)
from omlkit.mmp import (
    BASE_ALPHABET,
    MmpHypergraph,
    MmpParseError,
    dualize,
    find_small_loops,
    loop_analysis,
    parse_mmp,
    parse_mmp_lines,
    serialize_mmp,
    validate,
    vertex_index,
    vertex_label,
)

# ---------------------------------------------------------------------------
# alphabet


def test_alphabet_has_90_distinct_symbols():
    assert len(BASE_ALPHABET) == 90
    assert len(set(BASE_ALPHABET)) == 90
    assert not set(",.+") & set(BASE_ALPHABET)


def test_label_examples():
    assert vertex_label(1) == "1"
    assert vertex_label(9) == "9"
    assert vertex_label(10) == "A"
    assert vertex_label(90) == "~"
    assert vertex_label(91) == "+1"
    assert vertex_label(181) == "++1"


@given(st.integers(min_value=1, max_value=10_000))
def test_label_index_bijection(i):
    assert vertex_index(vertex_label(i)) == i


def test_bad_labels_rejected():
    for bad in ("", "+", "12", "+,", "."):
        with pytest.raises(ValueError):
            vertex_index(bad)


# ---------------------------------------------------------------------------
# parse / serialize


def test_parse_simple():
    h = parse_mmp("123,345.")
    assert h.blocks == ((1, 2, 3), (3, 4, 5))
    assert h.vertices == (1, 2, 3, 4, 5)
    assert h.n_atoms == 5 and h.n_blocks == 2


def test_parse_extended_labels():
    h = parse_mmp("9A+D,+1CK.")
    assert h.blocks == ((9, 10, 103), (91, 12, 20))


def test_serialize_round_trip_fixture_strings():
    for name in corpus_names():
        text = load_text(name).strip()
        assert serialize_mmp(parse_mmp(text)) == text


def test_parse_errors_carry_offset():
    for text in ("", "123", "123,.", ",123.", "113."):
        with pytest.raises(MmpParseError):
            parse_mmp(text)


def test_parse_lines_skips_blanks():
    hs = list(parse_mmp_lines("123.\n\n345.\n"))
    assert len(hs) == 2


@st.composite
def hypergraphs(draw):
    n_blocks = draw(st.integers(min_value=1, max_value=8))
    blocks = []
    for _ in range(n_blocks):
        size = draw(st.integers(min_value=2, max_value=4))
        verts = draw(
            st.lists(
                st.integers(min_value=1, max_value=200),
                min_size=size,
                max_size=size,
                unique=True,
            )
        )
        blocks.append(tuple(verts))
    return MmpHypergraph(tuple(blocks))


@settings(max_examples=300)
@given(hypergraphs())
def test_serialize_parse_fixed_point(h):
    assert parse_mmp(serialize_mmp(h)) == h


# ---------------------------------------------------------------------------
# validation


def test_fixtures_validate_greechie():
    for name in corpus_names():
        rep = validate(load(name), "GREECHIE")
        assert rep.valid, (name, rep.to_json())


def test_two_blocks_sharing_two_atoms_rejected():
    rep = validate(parse_mmp("123,124."), "GREECHIE")
    assert not rep.valid
    assert any(v.rule == "greechie-4" for v in rep.violations)


def test_small_loop_rejected():
    square = parse_mmp("123,345,567,781.")
    rep = validate(square, "GREECHIE")
    assert not rep.valid
    assert any(v.rule == "greechie-5" for v in rep.violations)
    assert len(find_small_loops(square)) >= 1


def test_triangle_loop_detected():
    tri = parse_mmp("123,345,561.")
    assert any(len(lp) == 3 for lp in find_small_loops(tri))


def test_mmp_level_ignores_loops():
    square = parse_mmp("123,345,567,781.")
    assert validate(square, "MMP").valid


# ---------------------------------------------------------------------------
# duality


def test_dualize_swaps_counts():
    h = thirty_nine("00")
    d = dualize(h)
    assert d.n_atoms == h.n_blocks and d.n_blocks == h.n_atoms


def test_dualize_requires_cubic():
    with pytest.raises(ValueError):
        dualize(parse_mmp("123,145,267."))


def test_dualize_involution():
    from omlkit.bigraph import mmp_isomorphic

    h = thirty_nine("00")
    assert mmp_isomorphic(dualize(dualize(h)), h)


# ---------------------------------------------------------------------------
# loops


def test_pentagon_loop():
    rep = loop_analysis(load("pentagon"))
    assert rep.max_loop_order == 5
    assert rep.min_loop_order == 5
    assert len(rep.witness) == 5


def test_stars_have_no_loops():
    for name in ("star-1", "star-2", "star-3", "star-4", "smallest-oml"):
        rep = loop_analysis(load(name))
        assert rep.max_loop_order == 0
        assert rep.min_loop_order is None


def test_39_39_max_loop_is_19():
    for tag in THIRTY_NINE_TAGS:
        rep = loop_analysis(thirty_nine(tag))
        assert rep.max_loop_order == 19, tag
        assert rep.min_loop_order == 5, tag


def test_loop_bound_respected_on_fixtures():
    for name in corpus_names():
        h = load(name)
        rep = loop_analysis(h)
        if h.is_uniform(3):
            assert rep.max_loop_order <= h.n_atoms // 2, name


def test_conway_kochen_loops():
    rep = loop_analysis(conway_kochen())
    assert rep.max_loop_order <= conway_kochen().n_atoms // 2
    assert rep.min_loop_order == 5
