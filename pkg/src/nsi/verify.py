"""Certification of reduction runs: strict measure descent, the a-priori
step bound, subject reduction, and normal-form classification.

The measure parameter N is fixed once per run from the start term; free
variables never grow along reduction, so N stays an upper bound on the
free-variable count of every intermediate term.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .types import Bool, Diamond, Iota, ListT, TreeT, Type
from .terms import (
    App,
    ConstT,
    Term,
    Var,
    free_vars,
    recognize_list,
    recognize_short_numeral,
    recognize_tree,
)
from .measure import measure_at
from .reduction import FuelExhausted, Trace, normalize, redex_count, step
from .typecheck import TypeCheckError, infer


@dataclass
class DescentReport:
    N: int
    values: list[int]
    strict: bool
    bound: int
    steps_taken: int
    within_bound: bool
    rule_counts: dict[str, int] = field(default_factory=dict)
    strategy: str = "lo"
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return self.strict and self.within_bound


@dataclass
class SubjectReductionReport:
    ok: bool
    type: Type | None
    steps_checked: int
    failures: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class Classification:
    kind: str  # BoolValue | List | DiamondVar | ShortNumeral | TreeValue | HigherTypeValue | Stuck
    n: int | None
    type: Type


@dataclass
class NonSizeReport:
    input_n: int
    output_n: int | None
    ok: bool
    steps: int


@dataclass
class VerifiedRun:
    """Streaming normalize-and-check: descent, bound and subject reduction
    verified per step without retaining the intermediate terms."""

    descent: DescentReport
    subject: SubjectReductionReport
    final: Term

    @property
    def ok(self) -> bool:
        return self.descent.ok and self.subject.ok


def _fixed_n(start: Term, N: int | None) -> int:
    nfv = len(free_vars(start))
    if N is None:
        return nfv
    if N < nfv:
        raise ValueError(f"N={N} is below the free-variable count {nfv}")
    return N


def verify_descent(trace: Trace, N: int | None = None) -> DescentReport:
    """Check strict descent of the measure along a recorded trace."""
    infer(trace.start)  # untyped start terms are a caller error
    n = _fixed_n(trace.start, N)
    values = [measure_at(trace.start, n)]
    counts: dict[str, int] = {}
    for st in trace.steps:
        values.append(measure_at(st.result, n))
        counts[st.rule] = counts.get(st.rule, 0) + 1
    strict = all(a > b for a, b in zip(values, values[1:]))
    bound = values[0]
    steps_taken = len(trace.steps)
    return DescentReport(
        n, values, strict, bound, steps_taken, steps_taken <= bound,
        counts, trace.strategy, trace.seed,
    )


def verify_subject_reduction(trace: Trace) -> SubjectReductionReport:
    """Re-infer every intermediate term: same type, non-growing context."""
    try:
        res = infer(trace.start)
    except TypeCheckError as e:
        return SubjectReductionReport(False, None, 0, [(0, str(e))])
    ty, ctx = res.type, res.minimal_context
    failures = []
    for i, st in enumerate(trace.steps, start=1):
        try:
            cur = infer(st.result)
        except TypeCheckError as e:
            failures.append((i, f"untyped after step: {e}"))
            break
        if cur.type != ty:
            failures.append((i, f"type changed: {cur.type} != {ty}"))
        if not cur.minimal_context <= ctx:
            failures.append((i, "minimal context grew"))
        ctx = cur.minimal_context
    return SubjectReductionReport(not failures, ty, len(trace.steps), failures)


def run_verified(
    t: Term,
    strategy: str = "lo",
    seed: int | None = None,
    N: int | None = None,
    fuel: int | None = None,
) -> VerifiedRun:
    """Normalize while checking descent and subject reduction step by step.

    Equivalent to normalize + verify_descent + verify_subject_reduction but
    holds only the current term, so long runs stay memory-flat.
    """
    res = infer(t)
    ty, ctx = res.type, res.minimal_context
    n = _fixed_n(t, N)
    rng = random.Random(seed) if strategy == "random" else None
    values = [measure_at(t, n)]
    bound = values[0]
    counts: dict[str, int] = {}
    sr_failures: list[tuple[int, str]] = []
    cur = t
    k = 0
    while True:
        if fuel is not None and k >= fuel and redex_count(cur):
            raise FuelExhausted(Trace(t, [], strategy, seed))
        sel = step(cur, strategy, rng)
        if sel is None:
            break
        cur = sel[2]
        k += 1
        values.append(measure_at(cur, n))
        counts[sel[1]] = counts.get(sel[1], 0) + 1
        try:
            now = infer(cur)
            if now.type != ty:
                sr_failures.append((k, f"type changed: {now.type} != {ty}"))
            if not now.minimal_context <= ctx:
                sr_failures.append((k, "minimal context grew"))
            ctx = now.minimal_context
        except TypeCheckError as e:
            sr_failures.append((k, f"untyped after step: {e}"))
            break
    strict = all(a > b for a, b in zip(values, values[1:]))
    descent = DescentReport(
        n, values, strict, bound, k, k <= bound, counts, strategy,
        seed if strategy == "random" else None,
    )
    subject = SubjectReductionReport(not sr_failures, ty, k, sr_failures)
    return VerifiedRun(descent, subject, cur)


def is_almost_closed(t: Term) -> bool:
    return all(isinstance(ty, Diamond) for _, ty in free_vars(t))


def classify_normal(t: Term) -> Classification:
    """Shape of a normal, almost closed term, keyed by its type."""
    ty = infer(t).type
    if isinstance(ty, ListT):
        cl = recognize_list(t)
        return Classification("List", cl.n, ty) if cl else Classification("Stuck", None, ty)
    if isinstance(ty, Bool):
        if type(t) is ConstT and t.c.kind in ("tt", "ff"):
            return Classification("BoolValue", None, ty)
        return Classification("Stuck", None, ty)
    if isinstance(ty, Diamond):
        if type(t) is Var:
            return Classification("DiamondVar", None, ty)
        return Classification("Stuck", None, ty)
    if isinstance(ty, Iota):
        nu = recognize_short_numeral(t)
        return Classification("ShortNumeral", len(nu.bits), ty) if nu else Classification("Stuck", None, ty)
    if isinstance(ty, TreeT):
        tr = recognize_tree(t)
        return Classification("TreeValue", tr.nodes, ty) if tr else Classification("Stuck", None, ty)
    return Classification("HigherTypeValue", None, ty)


def verify_non_size_increasing(f: Term, lst: Term, strategy: str = "lo") -> NonSizeReport:
    """Apply a list-to-list function to a canonical list and compare lengths."""
    cl = recognize_list(lst)
    if cl is None:
        raise ValueError("input is not a canonical list")
    nf, trace = normalize(App(f, lst), strategy)
    out = recognize_list(nf)
    out_n = out.n if out else None
    return NonSizeReport(cl.n, out_n, out is not None and out_n <= cl.n, len(trace.steps))
