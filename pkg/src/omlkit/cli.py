"""Command-line entry point wiring all modules together.

Exit codes: 0 = success / all checks consistent, 1 = mismatch or failed
check, 2 = usage or configuration error, 3 = budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from pathlib import Path

from . import bigraph, corpus, equations, layout as layout_mod, states, vectors
from .lattice import paste, verify_axioms
from .mmp import (
    MmpHypergraph,
    dualize,
    loop_analysis,
    parse_mmp,
    serialize_mmp,
    validate,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    return int(os.environ.get("OMLKIT_THREADS", "1"))


def _emit(obj, args) -> None:
    if getattr(args, "format", "json") == "json":
        print(json.dumps(obj, sort_keys=True, indent=2))
    else:
        _emit_text(obj)


def _emit_text(obj, indent: str = "") -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                print(f"{indent}{k}:")
                _emit_text(v, indent + "  ")
            else:
                print(f"{indent}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            _emit_text(v, indent)
    else:
        print(f"{indent}{obj}")


def _load_mmp(path: str) -> MmpHypergraph:
    if path == "-":
        return parse_mmp(sys.stdin.read())
    name = Path(path).stem
    if not Path(path).exists() and name in corpus.corpus_names():
        return corpus.load(name)
    return parse_mmp(Path(path).read_text())


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    h = _load_mmp(args.mmp)
    report = validate(h, args.level)
    _emit(report.to_json(), args)
    return EXIT_OK if report.valid else EXIT_MISMATCH


def cmd_stats(args) -> int:
    h = _load_mmp(args.mmp)
    out = {
        "atoms": h.n_atoms,
        "blocks": h.n_blocks,
        "uniform_3": h.is_uniform(3),
        "regular_3": h.is_regular(3),
        "connected": h.is_connected(),
        "degree_histogram": {
            str(d): c for d, c in sorted(Counter(h.degrees.values()).items())
        },
    }
    if not args.no_loops:
        out["loops"] = loop_analysis(h).to_json()
    if h.is_uniform(3) and h.is_regular(3):
        out["girth"] = bigraph.girth(bigraph.mmp_to_graph(h))
    _emit(out, args)
    return EXIT_OK


def cmd_dual(args) -> int:
    h = _load_mmp(args.mmp)
    print(serialize_mmp(dualize(h)))
    return EXIT_OK


def cmd_convert(args) -> int:
    src = Path(args.input)
    text = sys.stdin.read() if args.input == "-" else src.read_text()
    fmt_in = args.from_format
    if fmt_in == "auto":
        suffix = src.suffix.lower()
        fmt_in = {".mmp": "mmp", ".g6": "graph6"}.get(suffix, "graph")
        if args.input == "-" or text.rstrip().endswith("."):
            fmt_in = "mmp"
    if fmt_in == "mmp":
        g = bigraph.mmp_to_graph(parse_mmp(text))
    elif fmt_in == "graph":
        g = bigraph.BipartiteGraph.from_text(text)
    elif fmt_in == "graph6":
        g = bigraph.from_graph6(text)
    else:
        raise SystemExit(EXIT_USAGE)
    if args.to == "mmp":
        print(serialize_mmp(bigraph.graph_to_mmp(g, args.atom_color.upper())))
    elif args.to == "graph":
        sys.stdout.write(g.to_text())
    elif args.to == "graph6":
        print(bigraph.to_graph6(g))
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.vertices % 2:
        print("vertex count must be even (equal white/black)", file=sys.stderr)
        return EXIT_USAGE
    shard = None
    if args.shard:
        i, n = map(int, args.shard.split("/"))
        shard = (i, n)
    resume = tuple(map(int, args.resume.split(","))) if args.resume else ()
    job = bigraph.GenerationJob(
        white_count=args.vertices // 2,
        min_girth=args.min_girth,
        shard=shard,
        node_budget=args.budget_nodes,
        time_budget=args.budget_seconds,
        resume_path=resume,
    )
    exhausted = None
    graphs = []
    try:
        for g in bigraph.generate(job):
            graphs.append(g)
    except bigraph.BudgetExhausted as exc:
        graphs = list(exc.found)
        exhausted = exc
    if args.emit == "graph":
        for g in graphs:
            sys.stdout.write(g.to_text())
            print()
    else:
        for h in bigraph.generate_mmp_classes(graphs):
            print(serialize_mmp(h))
    if exhausted is not None:
        print(
            "budget exhausted; resume with --resume "
            + ",".join(map(str, exhausted.resume_path)),
            file=sys.stderr,
        )
        return EXIT_BUDGET
    print(f"{len(graphs)} graph(s)", file=sys.stderr)
    return EXIT_OK


def _load_condition(spec: str):
    if Path(spec).exists():
        return equations.parse_condition(Path(spec).read_text())
    if spec.partition("(")[0] in {n.partition("(")[0] for n in equations.BUILTIN_NAMES}:
        return equations.builtin(spec)
    return equations.parse_condition(spec)


def cmd_check(args) -> int:
    h = _load_mmp(args.mmp)
    L = paste(h)
    cond = _load_condition(args.eq)
    try:
        res = equations.evaluate(
            L, cond, max_tuples=args.max_tuples, threads=_threads(args)
        )
    except equations.BudgetExceeded:
        print("tuple budget exhausted", file=sys.stderr)
        return EXIT_BUDGET
    _emit(res.to_json(), args)
    if args.expect:
        return EXIT_OK if res.verdict == args.expect.upper() else EXIT_MISMATCH
    return EXIT_OK


_QUERY_SETS = {
    "all": states.ALL_QUERIES,
    "strong": frozenset({"strong_quantum", "strong_classical"}),
    "unique": frozenset({"admits_state", "exactly_one", "state_freedom"}),
    "coloring": frozenset({"two_valued"}),
}


def cmd_states(args) -> int:
    h = _load_mmp(args.mmp)
    L = paste(h)
    report = states.solve_states(L, _QUERY_SETS[args.query])
    _emit(report.to_json(), args)
    return EXIT_OK


def cmd_vectorfind(args) -> int:
    h = _load_mmp(args.mmp)
    comps = tuple(int(c) for c in args.components.split(","))
    if args.count:
        n = sum(1 for _ in vectors.vectorfind_all(h, comps))
        _emit({"solutions": n}, args)
        return EXIT_OK
    assignment = vectors.vectorfind(h, comps)
    if assignment is None:
        _emit({"found": False}, args)
        return EXIT_MISMATCH
    _emit({"found": True, "vectors": assignment.to_json()}, args)
    return EXIT_OK


def cmd_check_oa_subspace(args) -> int:
    data = json.loads(Path(args.subspaces).read_text())
    M = [vectors.span(vectors.Vec3Q.of(*v)) for v in data["M"]]
    N = [vectors.span(vectors.Vec3Q.of(*v)) for v in data["N"]]
    ok, trace = vectors.check_noa_subspace(args.n, M, N)
    _emit({"holds": ok, "trace": trace}, args)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_layout(args) -> int:
    h = _load_mmp(args.mmp)
    plan = layout_mod.build_levels(h)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "plan.json").write_text(
        json.dumps(plan.to_json(), sort_keys=True, indent=2) + "\n"
    )
    for name, svg in layout_mod.render_svg(plan).items():
        (out / f"{name}.svg").write_text(svg)
    _emit(plan.to_json(), args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# suite


def fixture_report(h: MmpHypergraph, heavy: bool = False) -> dict:
    """Deterministic per-fixture battery: validation, loop stats, dual
    class, and (optionally) equation and state verdicts."""
    rep = validate(h, "GREECHIE")
    out: dict = {
        "atoms": h.n_atoms,
        "blocks": h.n_blocks,
        "valid_greechie": rep.valid,
        "serialized": serialize_mmp(h),
    }
    loops = loop_analysis(h)
    out["max_loop_order"] = loops.max_loop_order
    if h.is_uniform(3) and h.is_regular(3):
        out["self_dual"] = bigraph.mmp_isomorphic(h, dualize(h))
        out["girth"] = bigraph.girth(bigraph.mmp_to_graph(h))
    if heavy and rep.valid and h.is_uniform(3) and h.is_connected():
        L = paste(h)
        out["axioms_ok"] = verify_axioms(L).passed
        report = states.solve_states(
            L, frozenset({"admits_state", "exactly_one", "two_valued"})
        )
        out["states"] = report.to_json()
    return out


def cmd_suite(args) -> int:
    names = sorted(corpus.corpus_names())
    if args.fixtures:
        extra = sorted(Path(args.fixtures).glob("*.mmp"))
    else:
        extra = []
    reports: dict = {}
    for name in names:
        reports[name] = fixture_report(corpus.load(name), heavy=args.heavy)
    for path in extra:
        if path.stem not in reports:
            reports[path.stem] = fixture_report(
                parse_mmp(path.read_text()), heavy=args.heavy
            )
    _emit(reports, args)
    if args.expect:
        expected = json.loads(Path(args.expect).read_text())
        mismatches = []
        for name, exp in sorted(expected.items()):
            got = reports.get(name)
            if got is None:
                mismatches.append(f"{name}: missing")
                continue
            for key, val in exp.items():
                if key in got and got[key] != val:
                    mismatches.append(f"{name}.{key}: expected {val!r}, got {got[key]!r}")
        for m in mismatches:
            print(f"MISMATCH {m}", file=sys.stderr)
        return EXIT_MISMATCH if mismatches else EXIT_OK
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="omlkit",
        description="Hypergraph, lattice, state, and vector toolkit for "
        "quantum-logic structures.",
    )
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--threads", type=int, default=None)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check hypergraph conditions")
    sp.add_argument("--mmp", required=True)
    sp.add_argument("--level", choices=("MMP", "GREECHIE"), default="GREECHIE")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("stats", help="sizes, degrees, loops, girth")
    sp.add_argument("--mmp", required=True)
    sp.add_argument("--no-loops", action="store_true")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("dual", help="swap atoms and blocks")
    sp.add_argument("--mmp", required=True)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("convert", help="translate between encodings")
    sp.add_argument("--input", required=True)
    sp.add_argument(
        "--from", dest="from_format",
        choices=("auto", "mmp", "graph", "graph6"), default="auto",
    )
    sp.add_argument("--to", choices=("mmp", "graph", "graph6"), required=True)
    sp.add_argument("--atom-color", choices=("white", "black"), default="white")
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("generate", help="enumerate cubic bipartite graphs")
    sp.add_argument("--vertices", type=int, required=True)
    sp.add_argument("--min-girth", type=int, default=10)
    sp.add_argument("--shard", help="i/n")
    sp.add_argument("--budget-seconds", type=float, default=None)
    sp.add_argument("--budget-nodes", type=int, default=None)
    sp.add_argument("--resume", help="comma-separated decision path")
    sp.add_argument("--emit", choices=("mmp", "graph"), default="mmp")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("check", help="evaluate a lattice condition")
    sp.add_argument("--eq", required=True, help="builtin name or file")
    sp.add_argument("--mmp", required=True)
    sp.add_argument("--max-tuples", type=int, default=None)
    sp.add_argument("--expect", choices=("holds", "fails"), default=None)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("states", help="state-space classification")
    sp.add_argument("--mmp", required=True)
    sp.add_argument("--query", choices=sorted(_QUERY_SETS), default="all")
    sp.set_defaults(func=cmd_states)

    sp = sub.add_parser("vectorfind", help="search vector realizations")
    sp.add_argument("--mmp", required=True)
    sp.add_argument(
        "--components",
        default=",".join(map(str, vectors.DEFAULT_COMPONENTS)),
    )
    sp.add_argument("--count", action="store_true")
    sp.set_defaults(func=cmd_vectorfind)

    sp = sub.add_parser(
        "check-oa-subspace", help="subspace identity for paired lines/planes"
    )
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--subspaces", required=True, help='JSON {"M": [...], "N": [...]}')
    sp.set_defaults(func=cmd_check_oa_subspace)

    sp = sub.add_parser("layout", help="level decomposition and SVG drawings")
    sp.add_argument("--mmp", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_layout)

    sp = sub.add_parser("suite", help="battery over the bundled corpus")
    sp.add_argument("--fixtures", default=None)
    sp.add_argument("--expect", default=None)
    sp.add_argument("--heavy", action="store_true")
    sp.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
