"""Bundled hypergraph corpus: well-known Kochen-Specker and small test
diagrams shipped as .mmp files inside the package."""

from __future__ import annotations

from importlib import resources

from ..mmp import MmpHypergraph, parse_mmp

THIRTY_NINE_TAGS = (
    "00", "01a", "01b", "02", "03", "04", "05",
    "06", "07", "08a", "08b", "09", "10",
)

SELF_DUAL_39_TAGS = ("00", "02", "03", "04", "05", "06", "07", "09", "10")
DUAL_PAIR_39_TAGS = (("01a", "01b"), ("08a", "08b"))


def corpus_names() -> list[str]:
    names = []
    for entry in resources.files("omlkit.corpus").iterdir():
        if entry.name.endswith(".mmp"):
            names.append(entry.name[: -len(".mmp")])
    return sorted(names)


def load_text(name: str) -> str:
    return resources.files("omlkit.corpus").joinpath(f"{name}.mmp").read_text()


def load(name: str) -> MmpHypergraph:
    text = load_text(name).strip()
    return parse_mmp(text)


def conway_kochen() -> MmpHypergraph:
    return load("conway-kochen")


def pentagon() -> MmpHypergraph:
    return load("pentagon")


def star(blocks: int) -> MmpHypergraph:
    if not 1 <= blocks <= 4:
        raise ValueError("star corpus covers 1..4 blocks")
    return load(f"star-{blocks}")


def smallest_oml() -> MmpHypergraph:
    return load("smallest-oml")


def thirty_nine(tag: str) -> MmpHypergraph:
    if tag not in THIRTY_NINE_TAGS:
        raise ValueError(f"unknown 39-39 tag {tag!r}")
    return load(f"39-39-{tag}")


def all_thirty_nine() -> dict[str, MmpHypergraph]:
    return {tag: thirty_nine(tag) for tag in THIRTY_NINE_TAGS}
