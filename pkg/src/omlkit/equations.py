"""Lattice terms, quantified conditions, and exact evaluation on finite
orthomodular lattices.

A condition is a quantifier prefix over ELEMENT- or ATOM-sorted variables,
a list of relational hypotheses, and a relational conclusion; the body is
always read as (hypotheses => conclusion).  evaluate() decides it exactly
by hypothesis-directed enumeration: a universal variable constrained by a
<= or _|_ hypothesis against an already-bound variable only runs over the
satisfying elements, and the innermost variables are evaluated in one
vectorized sweep over the operation tables whenever the remaining grid is
small enough.

Skipping hypothesis-violating values of a universal variable is sound in
any quantifier position, because those values satisfy the implication
trivially; existential variables always run over their full sort.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Union

import numpy as np

from .lattice import Oml

_GRID_CAP = 1 << 21  # max tuples evaluated in one vectorized sweep


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int  # 0 or 1


@dataclass(frozen=True)
class Bound:
    """A fixed element id appearing as a term (used when a quantified
    variable has been bound to a concrete element)."""

    element: int


@dataclass(frozen=True)
class Ortho:
    arg: "Term"


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sasaki:
    """Sasaki hook a -> b = a' v (a ^ b)."""

    left: "Term"
    right: "Term"


Term = Union[Var, Const, Bound, Ortho, Meet, Join, Sasaki]


def meet_all(terms: list) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = Meet(out, t)
    return out


def join_all(terms: list) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = Join(out, t)
    return out


def godowski_identity(vars: list) -> Term:
    """(a1 -> a2) ^ (a2 -> a3) ^ ... ^ (a_{n-1} -> a_n) ^ (a_n -> a1)."""
    n = len(vars)
    if n < 3:
        raise ValueError("Godowski identity needs at least 3 variables")
    return meet_all([Sasaki(vars[i], vars[(i + 1) % n]) for i in range(n)])


def oa_identity(n: int, vars: list) -> Term:
    """The n-variable equivalence used by the generalized orthoarguesian
    laws.  Base (3 variables, reference c = vars[2]):

        a =(3)= b  :=  ((a -> c) ^ (b -> c)) v ((a' -> c) ^ (b' -> c))

    and for m > 3:

        a =(m)= b  :=  (a =(m-1)= b) v ((a =(m-1)= a_m) ^ (b =(m-1)= a_m))

    Subterms are shared by construction, so evaluation with per-object
    caching stays polynomial in practice.
    """
    if n < 3:
        raise ValueError("oa identity needs n >= 3")
    if len(vars) != n:
        raise ValueError(f"oa identity of order {n} takes {n} variables")
    cache: dict = {}

    def equiv(m: int, x: Term, y: Term) -> Term:
        key = (m, id(x), id(y))
        if key in cache:
            return cache[key]
        if m == 3:
            c = vars[2]
            t = Join(
                Meet(Sasaki(x, c), Sasaki(y, c)),
                Meet(Sasaki(Ortho(x), c), Sasaki(Ortho(y), c)),
            )
        else:
            am = vars[m - 1]
            t = Join(
                equiv(m - 1, x, y),
                Meet(equiv(m - 1, x, am), equiv(m - 1, y, am)),
            )
        cache[key] = t
        return t

    return equiv(n, vars[0], vars[1])


# ---------------------------------------------------------------------------
# relations and conditions


LE, EQ, PERP = "le", "eq", "perp"

ELEMENT, ATOM = "element", "atom"
FORALL, EXISTS = "A", "E"


@dataclass(frozen=True)
class Rel:
    op: str  # le | eq | perp
    left: Term
    right: Term
    negated: bool = False

    def __post_init__(self):
        if self.op not in (LE, EQ, PERP):
            raise ValueError(f"unknown relation {self.op!r}")


@dataclass(frozen=True)
class AtomTriple(Rel):
    """Pseudo-relation: c != a  &  c != b  &  c <= a v b.  Keeps the
    compiled superposition condition in single-conclusion shape."""


@dataclass(frozen=True)
class LiteralSuperposition(Rel):
    """Pseudo-relation carrying the full quantifier-free body of the
    element-sorted superposition statement:

        (atom(a) via z & atom(b) via z & a != b)
            => (atom(c) via w & c != a & c != b & c <= a v b)

    where 'atom(x) via y' abbreviates x != 0 & ((y != 0 & y <= x) => y = x).
    """


@dataclass(frozen=True)
class QuantVar:
    quant: str  # A | E
    name: str
    sort: str = ELEMENT


@dataclass(frozen=True)
class Condition:
    """prefix . (hypotheses => conclusion); all term variables must be
    declared in the prefix (or appear pre-bound as Bound terms)."""

    prefix: tuple
    hypotheses: tuple
    conclusion: Rel
    name: str = ""

    def __post_init__(self):
        declared = {q.name for q in self.prefix}
        free: set = set()
        for rel in (*self.hypotheses, self.conclusion):
            _collect_vars(rel.left, free)
            _collect_vars(rel.right, free)
        missing = free - declared
        if missing:
            raise ValueError(f"free variables outside prefix: {sorted(missing)}")


def _collect_vars(t: Term, out: set) -> None:
    if isinstance(t, Var):
        out.add(t.name)
    elif isinstance(t, Ortho):
        _collect_vars(t.arg, out)
    elif isinstance(t, (Meet, Join, Sasaki)):
        _collect_vars(t.left, out)
        _collect_vars(t.right, out)


def universal_condition(
    var_names: Iterable[str],
    hypotheses: Iterable[Rel],
    conclusion: Rel,
    name: str = "",
    sort: str = ELEMENT,
) -> Condition:
    names = var_names.split() if isinstance(var_names, str) else list(var_names)
    prefix = tuple(QuantVar(FORALL, v, sort) for v in names)
    return Condition(prefix, tuple(hypotheses), conclusion, name)


@dataclass
class CheckResult:
    verdict: str  # HOLDS | FAILS
    counterexample: Optional[dict]
    counterexample_ids: Optional[dict]
    tuples_examined: int
    name: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict == "HOLDS"

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "tuples_examined": self.tuples_examined,
        }
        if self.name:
            out["name"] = self.name
        if self.counterexample is not None:
            out["counterexample"] = dict(self.counterexample)
        return out


class BudgetExceeded(Exception):
    """Evaluation budget ran out; carries the bindings reached so the
    caller can report or narrow the search."""

    def __init__(self, partial_env: dict, tuples_examined: int):
        super().__init__("evaluation budget exceeded")
        self.partial_env = partial_env
        self.tuples_examined = tuples_examined


# ---------------------------------------------------------------------------
# evaluation


def _eval_term(t: Term, env: dict, L: Oml, cache: dict):
    key = id(t)
    if key in cache:
        return cache[key]
    if isinstance(t, Var):
        val = env[t.name]
    elif isinstance(t, Const):
        val = t.value
    elif isinstance(t, Bound):
        val = t.element
    elif isinstance(t, Ortho):
        val = L.ortho[_eval_term(t.arg, env, L, cache)]
    elif isinstance(t, Meet):
        val = L.meet[_eval_term(t.left, env, L, cache), _eval_term(t.right, env, L, cache)]
    elif isinstance(t, Join):
        val = L.join[_eval_term(t.left, env, L, cache), _eval_term(t.right, env, L, cache)]
    elif isinstance(t, Sasaki):
        val = L.sasaki[_eval_term(t.left, env, L, cache), _eval_term(t.right, env, L, cache)]
    else:
        raise TypeError(f"not a term: {t!r}")
    cache[key] = val
    return val


def _eval_rel(rel: Rel, env: dict, L: Oml, cache: dict):
    if isinstance(rel, AtomTriple):
        a = _eval_term(rel.right.left, env, L, cache)
        b = _eval_term(rel.right.right, env, L, cache)
        c = _eval_term(rel.left, env, L, cache)
        return (c != a) & (c != b) & L.leq[c, L.join[a, b]]
    if isinstance(rel, LiteralSuperposition):
        a, b, c = env["a"], env["b"], env["c"]
        z, w = env["z"], env["w"]

        def atom_via(x, y):
            return (x != 0) & (~((y != 0) & L.leq[y, x]) | (y == x))

        hyp = atom_via(a, z) & atom_via(b, z) & (a != b)
        concl = atom_via(c, w) & (c != a) & (c != b) & L.leq[c, L.join[a, b]]
        return ~np.asarray(hyp) | concl
    a = _eval_term(rel.left, env, L, cache)
    b = _eval_term(rel.right, env, L, cache)
    if rel.op == LE:
        val = L.leq[a, b]
    elif rel.op == EQ:
        val = a == b
    else:
        val = L.perp[a, b]
    return ~np.asarray(val) if rel.negated else val


def _matrix(cond: Condition, env: dict, L: Oml):
    """Truth value(s) of hypotheses => conclusion under env; env values may
    be scalars or mutually broadcastable index arrays."""
    cache: dict = {}
    out = np.asarray(_eval_rel(cond.conclusion, env, L, cache))
    for hyp in cond.hypotheses:
        out = out | ~np.asarray(_eval_rel(hyp, env, L, cache))
    return out


def _sort_domain(L: Oml, sort: str) -> np.ndarray:
    return L.atoms if sort == ATOM else np.arange(L.n_elements)


def _candidates(L: Oml, cond: Condition, qv: QuantVar, env: dict) -> np.ndarray:
    """Domain of qv, narrowed by positive binary hypotheses against bound
    variables/constants when qv is universal."""
    dom = _sort_domain(L, qv.sort)
    if qv.quant != FORALL:
        return dom
    for hyp in cond.hypotheses:
        if hyp.negated or isinstance(hyp, (AtomTriple, LiteralSuperposition)):
            continue
        for this, other, this_is_left in (
            (hyp.left, hyp.right, True),
            (hyp.right, hyp.left, False),
        ):
            if not (isinstance(this, Var) and this.name == qv.name):
                continue
            if isinstance(other, Const):
                val = other.value
            elif isinstance(other, Bound):
                val = other.element
            elif isinstance(other, Var) and other.name in env:
                val = env[other.name]
            else:
                continue
            if hyp.op == EQ:
                allowed = np.array([val])
            elif hyp.op == PERP:
                allowed = L.perp_sets[val]
            elif this_is_left:  # qv <= val
                allowed = L.down_sets[val]
            else:  # val <= qv
                allowed = L.up_sets[val]
            dom = np.intersect1d(dom, allowed)
    return dom


def evaluate(
    L: Oml,
    cond: Condition,
    max_tuples: Optional[int] = None,
    threads: Optional[int] = None,
) -> CheckResult:
    """Exact verdict of a condition on a finite lattice.

    Enumeration order is deterministic: within the leading run of like
    quantifiers the variable with the fewest remaining candidates is bound
    first (ties by prefix position), candidate values ascending by element
    id.  The counterexample is the first found in that order; lexicographic
    minimality is not guaranteed.  When OMLKIT_THREADS (or threads=) is
    above 1 and the prefix is all-universal, the outermost variable is
    split across a thread pool and the reported counterexample is the
    lexicographically least of the per-candidate firsts, so the output does
    not depend on thread count.
    """
    if threads is None:
        threads = int(os.environ.get("OMLKIT_THREADS", "1") or "1")
    if (
        threads > 1
        and cond.prefix
        and all(q.quant == FORALL for q in cond.prefix)
        and len(cond.prefix) > 1
    ):
        return _evaluate_parallel(L, cond, threads, max_tuples)

    counter = [0]

    def bump(k: int, env: dict):
        counter[0] += k
        if max_tuples is not None and counter[0] > max_tuples:
            raise BudgetExceeded(dict(env), counter[0])

    def leading_run(remaining: list) -> int:
        q = remaining[0].quant
        j = 0
        while j < len(remaining) and remaining[j].quant == q:
            j += 1
        return j

    def grid_eval(remaining: list, cand: list, env: dict):
        k = len(remaining)
        genv = dict(env)
        shape = [len(c) for _, c in cand]
        for qv, values in cand:
            # empty domains decide at the outermost empty position
            if len(values) == 0:
                return (qv.quant == FORALL), (None if qv.quant == FORALL else dict(env))
        for i, (qv, values) in enumerate(cand):
            dims = [1] * k
            dims[i] = len(values)
            genv[qv.name] = values.reshape(dims)
        bump(int(np.prod(shape)), env)
        mat = np.broadcast_to(_matrix(cond, genv, L), shape)
        stages = [mat]
        for qv, _ in reversed(cand):
            mat = mat.any(-1) if qv.quant == EXISTS else mat.all(-1)
            stages.append(mat)
        if bool(stages[-1]):
            return True, None
        # walk into the grid for the failing assignment of leading universals
        witness = dict(env)
        idx: tuple = ()
        for d, (qv, values) in enumerate(cand):
            if qv.quant != FORALL:
                break
            level = np.asarray(stages[k - 1 - d][idx])
            j = int(np.flatnonzero(~level)[0])
            witness[qv.name] = int(values[j])
            idx = idx + (j,)
        return False, witness

    def search(remaining: list, env: dict):
        if not remaining:
            bump(1, env)
            ok = bool(_matrix(cond, env, L))
            return ok, (None if ok else dict(env))
        cand = [(qv, _candidates(L, cond, qv, env)) for qv in remaining]
        total = 1
        for _, c in cand:
            total *= max(len(c), 1)
        if total <= _GRID_CAP:
            return grid_eval(remaining, cand, env)
        run = leading_run(remaining)
        pick = min(range(run), key=lambda k: (len(cand[k][1]), k))
        qv, values = cand[pick]
        rest = remaining[:pick] + remaining[pick + 1 :]
        if qv.quant == FORALL:
            for v in values:
                env[qv.name] = int(v)
                ok, witness = search(rest, env)
                if not ok:
                    del env[qv.name]
                    return False, witness
            env.pop(qv.name, None)
            return True, None
        for v in values:
            env[qv.name] = int(v)
            ok, _ = search(rest, env)
            if ok:
                del env[qv.name]
                return True, None
        env.pop(qv.name, None)
        return False, dict(env)

    ok, witness = search(list(cond.prefix), {})
    return _result(L, cond, ok, witness, counter[0])


def _result(L: Oml, cond: Condition, ok: bool, witness, count: int) -> CheckResult:
    if ok:
        return CheckResult("HOLDS", None, None, count, cond.name)
    names = {k: L.element_name(v) for k, v in witness.items()}
    return CheckResult("FAILS", names, dict(witness), count, cond.name)


def bind_variable(cond: Condition, name: str, element: int) -> Condition:
    """Remove a variable from the prefix by substituting a fixed element."""

    def sub(t: Term) -> Term:
        if isinstance(t, Var):
            return Bound(element) if t.name == name else t
        if isinstance(t, Ortho):
            return Ortho(sub(t.arg))
        if isinstance(t, (Meet, Join, Sasaki)):
            return type(t)(sub(t.left), sub(t.right))
        return t

    prefix = tuple(q for q in cond.prefix if q.name != name)
    hyps = tuple(replace(r, left=sub(r.left), right=sub(r.right)) for r in cond.hypotheses)
    concl = replace(
        cond.conclusion, left=sub(cond.conclusion.left), right=sub(cond.conclusion.right)
    )
    return Condition(prefix, hyps, concl, cond.name)


def _evaluate_parallel(L, cond, threads, max_tuples) -> CheckResult:
    from concurrent.futures import ThreadPoolExecutor

    qv = cond.prefix[0]
    values = [int(v) for v in _candidates(L, cond, qv, {})]

    def run(v: int):
        return v, evaluate(L, bind_variable(cond, qv.name, v), max_tuples, threads=1)

    failures = []
    total = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for v, r in pool.map(run, values):
            total += r.tuples_examined
            if not r.holds:
                failures.append((v, r))
    if not failures:
        return CheckResult("HOLDS", None, None, total, cond.name)
    order = [q.name for q in cond.prefix]

    def key(item):
        v, r = item
        ids = {qv.name: v, **(r.counterexample_ids or {})}
        return tuple(ids.get(n, -1) for n in order)

    v, r = min(failures, key=key)
    ids = {qv.name: v, **(r.counterexample_ids or {})}
    names = {k: L.element_name(x) for k, x in ids.items()}
    return CheckResult("FAILS", names, ids, total, cond.name)


def evaluate_naive(L: Oml, cond: Condition) -> CheckResult:
    """Oracle evaluator: plain nested enumeration in prefix order with
    short-circuiting, no hypothesis direction, no vectorization."""
    counter = [0]

    def rec(i: int, env: dict):
        if i == len(cond.prefix):
            counter[0] += 1
            return bool(_matrix(cond, env, L)), (None,)
        qv = cond.prefix[i]
        dom = _sort_domain(L, qv.sort)
        if qv.quant == FORALL:
            for v in dom:
                env[qv.name] = int(v)
                ok, _ = rec(i + 1, env)
                if not ok:
                    witness = dict(env)
                    del env[qv.name]
                    return False, witness
            env.pop(qv.name, None)
            return True, None
        for v in dom:
            env[qv.name] = int(v)
            ok, _ = rec(i + 1, env)
            if ok:
                del env[qv.name]
                return True, None
        env.pop(qv.name, None)
        return False, dict(env)

    ok, witness = rec(0, {})
    if not ok and witness == (None,):
        witness = {}
    return _result(L, cond, ok, witness if witness != (None,) else {}, counter[0])


def check_at(L: Oml, cond: Condition, assignment: dict) -> bool:
    """Re-evaluate the quantifier-free body at a variable assignment (used
    to confirm counterexamples of all-universal conditions)."""
    return bool(_matrix(cond, dict(assignment), L))


# ---------------------------------------------------------------------------
# builtin catalog


def _vars(names: str) -> list:
    return [Var(n) for n in names.split()]


def builtin(name: str, n: Optional[int] = None) -> Condition:
    """Catalog of shipped conditions; parameterized families accept either
    builtin("noa", 4) or builtin("noa(4)")."""
    base = name.strip()
    if "(" in base:
        if n is not None:
            raise ValueError("order given both inline and as argument")
        base, _, arg = base.partition("(")
        base = base.strip()
        n = int(arg.rstrip(") ").strip())
    if base in ("noa", "godowski"):
        if n is None:
            raise ValueError(f"{base} requires an order, e.g. {base}(3)")
        if n < 3:
            raise ValueError(f"{base} requires n >= 3")
    elif n is not None:
        raise ValueError(f"{base} takes no order")

    if base == "oml_law":
        a, b, c = _vars("a b c")
        return universal_condition(
            "a b c",
            [Rel(LE, b, a), Rel(LE, c, Ortho(a))],
            Rel(EQ, Meet(a, Join(b, c)), Join(Meet(a, b), Meet(a, c))),
            name="oml_law",
        )
    if base == "modular_law":
        a, b, c = _vars("a b c")
        return universal_condition(
            "a b c",
            [Rel(LE, b, a)],
            Rel(EQ, Meet(a, Join(b, c)), Join(Meet(a, b), Meet(a, c))),
            name="modular_law",
        )
    if base == "distributive_law":
        a, b, c = _vars("a b c")
        return universal_condition(
            "a b c",
            [],
            Rel(EQ, Meet(a, Join(b, c)), Join(Meet(a, b), Meet(a, c))),
            name="distributive_law",
        )
    if base == "noa":
        vs = [Var(f"a{i}") for i in range(1, n + 1)]
        concl = Rel(
            LE,
            Meet(Sasaki(vs[0], vs[2]), oa_identity(n, vs)),
            Sasaki(vs[1], vs[2]),
        )
        return universal_condition([v.name for v in vs], [], concl, name=f"noa({n})")
    if base == "godowski":
        vs = [Var(f"a{i}") for i in range(1, n + 1)]
        forward = godowski_identity(vs)
        backward = godowski_identity(list(reversed(vs)))
        return universal_condition(
            [v.name for v in vs], [], Rel(EQ, forward, backward), name=f"godowski({n})"
        )
    if base == "mge_newst1d":
        a, b, c = _vars("a b c")
        lhs = meet_all(
            [Sasaki(Sasaki(a, b), Sasaki(c, b)), Sasaki(a, c), Sasaki(b, a)]
        )
        return universal_condition(
            "a b c", [], Rel(LE, lhs, Sasaki(c, a)), name="mge_newst1d"
        )
    if base == "e3":
        a, b, c, d, e, f = _vars("a b c d e f")
        hyps = [
            Rel(PERP, a, b),
            Rel(PERP, a, c),
            Rel(PERP, b, c),
            Rel(PERP, a, d),
            Rel(PERP, b, e),
            Rel(PERP, c, f),
        ]
        lhs = Meet(
            Join(Join(a, b), c),
            Meet(Meet(Join(a, d), Join(b, e)), Join(c, f)),
        )
        rhs = Join(Join(d, e), f)
        return universal_condition("a b c d e f", hyps, Rel(LE, lhs, rhs), name="e3")
    if base == "e4":
        a, b, c, d, e, f, g, h = _vars("a b c d e f g h")
        hyps = [
            Rel(PERP, a, b),
            Rel(PERP, a, c),
            Rel(PERP, a, d),
            Rel(PERP, b, c),
            Rel(PERP, b, d),
            Rel(PERP, c, d),
            Rel(PERP, a, e),
            Rel(PERP, b, f),
            Rel(PERP, c, g),
            Rel(PERP, d, h),
        ]
        lhs = Meet(
            Join(Join(Join(a, b), c), d),
            Meet(Meet(Meet(Join(a, e), Join(b, f)), Join(c, g)), Join(d, h)),
        )
        rhs = Join(Join(Join(e, f), g), h)
        return universal_condition(
            "a b c d e f g h", hyps, Rel(LE, lhs, rhs), name="e4"
        )
    if base == "superposition":
        # two distinct atoms admit a third atom below their join; the
        # element-sorted prenex original encodes atomhood with auxiliary
        # quantifiers and is compiled here to the ATOM sort
        a, b, c = _vars("a b c")
        prefix = (
            QuantVar(FORALL, "a", ATOM),
            QuantVar(FORALL, "b", ATOM),
            QuantVar(EXISTS, "c", ATOM),
        )
        hyps = (Rel(EQ, a, b, negated=True),)
        concl = AtomTriple(LE, c, Join(a, b))
        return Condition(prefix, hyps, concl, name="superposition")
    raise ValueError(f"unknown builtin {name!r}")


BUILTIN_NAMES = (
    "oml_law",
    "modular_law",
    "distributive_law",
    "noa(3)",
    "noa(4)",
    "noa(5)",
    "godowski(3)",
    "godowski(4)",
    "godowski(5)",
    "mge_newst1d",
    "e3",
    "e4",
    "superposition",
)


def check_superposition(L: Oml) -> CheckResult:
    """Direct form: every ordered pair of distinct atoms has a third atom
    below its join.  Equivalent to evaluate(builtin("superposition"))."""
    atoms = L.atoms
    count = 0
    for a in atoms:
        for b in atoms:
            if a == b:
                continue
            j = L.join[a, b]
            count += len(atoms)
            ok = np.any((atoms != a) & (atoms != b) & L.leq[atoms, j])
            if not ok:
                return CheckResult(
                    "FAILS",
                    {"a": L.element_name(int(a)), "b": L.element_name(int(b))},
                    {"a": int(a), "b": int(b)},
                    count,
                    "superposition",
                )
    return CheckResult("HOLDS", None, None, count, "superposition")


def superposition_literal_prenex() -> Condition:
    """The element-sorted prenex form with atomhood spelled out through
    auxiliary quantifiers: A a, A b, E c, E z, A w over elements, with the
    whole body carried by the LiteralSuperposition pseudo-relation.  The
    existential z is correct: E z (H(z) => C) is equivalent to
    (A z H(z)) => C.  Exponentially slower than the ATOM-sort compilation;
    used only to cross-check small lattices."""
    prefix = (
        QuantVar(FORALL, "a"),
        QuantVar(FORALL, "b"),
        QuantVar(EXISTS, "c"),
        QuantVar(EXISTS, "z"),
        QuantVar(FORALL, "w"),
    )
    body = LiteralSuperposition(LE, Var("c"), Join(Var("a"), Var("b")))
    return Condition(prefix, (), body, name="superposition_literal")


# ---------------------------------------------------------------------------
# condition text language


class ConditionParseError(ValueError):
    pass


_SYMBOL_TOKENS = ("=>", "=<", "->", "_|_", "&", "^", "'", "(", ")", "=", ":")


def _tokenize(text: str) -> list:
    out = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for tok in _SYMBOL_TOKENS:
            if text.startswith(tok, i):
                out.append(tok)
                i += len(tok)
                break
        else:
            if ch.isalnum() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                out.append(text[i:j])
                i = j
            else:
                raise ConditionParseError(f"bad character {ch!r} at offset {i}")
    return out


def _ident_ok(t) -> bool:
    return (
        isinstance(t, str)
        and t not in ("v", "A", "E", "atom")
        and t not in _SYMBOL_TOKENS
        and (t[0].isalpha() or t[0] == "_")
    )


def parse_condition(text: str, name: str = "") -> Condition:
    """Text language: optional quantifier prefix ("A x", "E y :atom"),
    hypotheses joined by & before =>, one conclusion.  Operators ^ (meet),
    v (join), ' (orthocomplement, postfix), -> (Sasaki hook, right
    associative, lowest precedence); relations =<, =, _|_; constants 0
    and 1.  Without an explicit prefix every variable is universally
    quantified over all elements, in order of first appearance.  The bare
    token v is reserved for join, so no variable may be named v."""
    toks = _tokenize(text)
    pos = [0]

    def peek(k=0):
        return toks[pos[0] + k] if pos[0] + k < len(toks) else None

    def take(expected=None):
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise ConditionParseError(f"expected {expected!r}, got {t!r}")
        pos[0] += 1
        return t

    prefix = []
    while peek() in ("A", "E") and _ident_ok(peek(1)):
        quant = take()
        var = take()
        sort = ELEMENT
        if peek() == ":":
            take(":")
            take("atom")
            sort = ATOM
        prefix.append(QuantVar(quant, var, sort))

    def parse_primary() -> Term:
        t = peek()
        if t == "(":
            take("(")
            out = parse_term()
            take(")")
        elif t in ("0", "1"):
            take()
            out = Const(int(t))
        elif _ident_ok(t):
            take()
            out = Var(t)
        else:
            raise ConditionParseError(f"expected a term, got {t!r}")
        while peek() == "'":
            take("'")
            out = Ortho(out)
        return out

    def parse_meet() -> Term:
        out = parse_primary()
        while peek() == "^":
            take("^")
            out = Meet(out, parse_primary())
        return out

    def parse_join() -> Term:
        out = parse_meet()
        while peek() == "v":
            take("v")
            out = Join(out, parse_meet())
        return out

    def parse_term() -> Term:
        out = parse_join()
        if peek() == "->":
            take("->")
            out = Sasaki(out, parse_term())
        return out

    def parse_rel() -> Rel:
        lhs = parse_term()
        op = peek()
        if op == "=<":
            take()
            return Rel(LE, lhs, parse_term())
        if op == "=":
            take()
            return Rel(EQ, lhs, parse_term())
        if op == "_|_":
            take()
            return Rel(PERP, lhs, parse_term())
        raise ConditionParseError(f"expected a relation operator, got {op!r}")

    rels = [parse_rel()]
    while peek() == "&":
        take("&")
        rels.append(parse_rel())
    if peek() == "=>":
        take("=>")
        hyps = rels
        concl = parse_rel()
        if peek() == "&":
            raise ConditionParseError("only one conclusion is allowed")
    else:
        if len(rels) != 1:
            raise ConditionParseError("hypotheses must be followed by =>")
        hyps = []
        concl = rels[0]
    if peek() is not None:
        raise ConditionParseError(f"trailing input at token {peek()!r}")
    if not prefix:
        seen: list = []
        for rel in (*hyps, concl):
            for side in (rel.left, rel.right):
                order: list = []
                _collect_ordered(side, order)
                for nm in order:
                    if nm not in seen:
                        seen.append(nm)
        prefix = [QuantVar(FORALL, nm) for nm in seen]
    return Condition(tuple(prefix), tuple(hyps), concl, name)


def _collect_ordered(t: Term, out: list) -> None:
    if isinstance(t, Var):
        out.append(t.name)
    elif isinstance(t, Ortho):
        _collect_ordered(t.arg, out)
    elif isinstance(t, (Meet, Join, Sasaki)):
        _collect_ordered(t.left, out)
        _collect_ordered(t.right, out)
