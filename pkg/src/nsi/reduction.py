"""Root conversions, the position closure, strategies and traces.

Reduction never enters lambda bodies, pair components or iteration
braces: a position is a path through application nodes only.  Iteration
rules fire only once the data argument is a full constructor spine
(canonical list / tree), which is what makes the step-count bound work.

Redex counts and root-rule tags are memoized per node; a rewrite rebuilds
only the spine from the redex to the root, so locating and firing a step
costs time proportional to that path, not to the whole term.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .types import BOOL, IOTA, Tensor
from .terms import (
    App,
    ConstT,
    FF,
    Lambda,
    ListBrace,
    Pair,
    TT,
    Term,
    TreeBrace,
    apps,
    con,
    open_bound,
    tensor,
)

RULES = (
    "Beta", "ProjFst", "ProjSnd", "IfTrue", "IfFalse", "TensorElim",
    "ListNil", "ListCons", "TreeLeaf", "TreeNode",
    "PredZero", "PredSucc", "IsZeroZero", "IsZeroSucc",
    "HeadZero", "HeadS0", "HeadS1", "LeqFire",
)

STRATEGIES = ("lo", "ri", "random")


class InvalidPosition(Exception):
    pass


class FuelExhausted(Exception):
    def __init__(self, trace):
        self.trace = trace
        super().__init__(f"fuel exhausted after {len(trace.steps)} steps")


@dataclass(frozen=True)
class TraceStep:
    position: str  # path over f/a from the root; "" is the root itself
    rule: str
    result: Term


@dataclass
class Trace:
    start: Term
    steps: list[TraceStep] = field(default_factory=list)
    strategy: str = "lo"
    seed: int | None = None

    @property
    def final(self) -> Term:
        return self.steps[-1].result if self.steps else self.start


# ---------------------------------------------------------------------------
# Root conversions

def _numeral_value(t: Term):
    nu = t._numer
    return None if nu is None else nu[0]


def _oracle_value(t: Term, ty):
    """Canonical-value ordering key at an oracle type, or None."""
    if ty == BOOL:
        if type(t) is ConstT:
            if t.c.kind == "ff":
                return 0
            if t.c.kind == "tt":
                return 1
        return None
    if ty == IOTA:
        return _numeral_value(t)
    return None


def rule_tag(t: Term) -> str | None:
    """The conversion applicable at the root, if any (memoized)."""
    try:
        return t._rule
    except AttributeError:
        pass
    r = _compute_rule(t)
    t._rule = r
    return r


def _compute_rule(t: Term) -> str | None:
    if type(t) is not App:
        return None
    f, a = t.fun, t.arg
    tf = type(f)
    if tf is Lambda:
        return "Beta"
    if tf is Pair:
        if type(a) is ConstT:
            if a.c.kind == "tt":
                return "ProjFst"
            if a.c.kind == "ff":
                return "ProjSnd"
        return None
    if tf is ConstT:
        k = f.c.kind
        if k == "tt":
            return "IfTrue" if type(a) is Pair else None
        if k == "ff":
            return "IfFalse" if type(a) is Pair else None
        if k == "pred":
            if type(a) is ConstT and a.c.kind == "zero":
                return "PredZero"
            if _succ_bit(a) is not None:
                return "PredSucc"
            return None
        if k == "iszero":
            if type(a) is ConstT and a.c.kind == "zero":
                return "IsZeroZero"
            if _succ_bit(a) is not None:
                return "IsZeroSucc"
            return None
        if k == "head":
            if type(a) is ConstT and a.c.kind == "zero":
                return "HeadZero"
            bit = _succ_bit(a)
            if bit == 0:
                return "HeadS0"
            if bit == 1:
                return "HeadS1"
            return None
        return None
    if tf is App:
        g = f.fun
        if type(g) is ConstT and g.c.kind == "leq":
            ty = g.c.t1
            if _oracle_value(f.arg, ty) is not None and _oracle_value(a, ty) is not None:
                return "LeqFire"
            return None
        if type(f.arg) is ListBrace:
            if type(g) is ConstT and g.c.kind == "nil":
                return "ListNil"
            if g._listn >= 1:
                return "ListCons"
            return None
        if type(a) is Lambda and type(a.body) is Lambda:
            if type(g) is App and type(g.fun) is ConstT and g.fun.c.kind == "tensor":
                return "TensorElim"
            return None
        if type(a) is TreeBrace:
            if f._treen == 0:
                return "TreeLeaf"
            if f._treen >= 1:
                return "TreeNode"
            return None
    return None


def _succ_bit(t: Term):
    if type(t) is App and type(t.fun) is ConstT:
        k = t.fun.c.kind
        if k == "s0":
            return 0
        if k == "s1":
            return 1
    return None


def _convert(t: App, tag: str) -> Term:
    f, a = t.fun, t.arg
    if tag == "Beta":
        return open_bound(f.body, [a])
    if tag == "ProjFst":
        return f.fst
    if tag == "ProjSnd":
        return f.snd
    if tag == "IfTrue":
        return a.fst
    if tag == "IfFalse":
        return a.snd
    if tag == "TensorElim":
        t1 = f.fun.arg
        t2 = f.arg
        return open_bound(a.body.body, [t2, t1])
    if tag == "ListNil":
        return a
    if tag == "ListCons":
        spine = f.fun  # cons d p rest
        d = spine.fun.fun.arg
        p = spine.fun.arg
        rest = spine.arg
        h = f.arg.step
        return apps(h, d, p, App(App(rest, f.arg), a))
    if tag == "TreeLeaf":
        return App(a.leaf_case, f.arg)
    if tag == "TreeNode":
        g = f.fun  # node d lab t1 applied to t2
        d = g.fun.fun.arg
        lab = g.fun.arg
        t1 = g.arg
        t2 = f.arg
        return apps(a.step, d, lab, App(t1, a), App(t2, a))
    if tag == "PredZero":
        return a
    if tag == "PredSucc":
        return a.arg
    if tag == "IsZeroZero":
        return con(tensor(BOOL, IOTA), ConstT(TT), a)
    if tag == "IsZeroSucc":
        return con(tensor(BOOL, IOTA), ConstT(FF), a)
    if tag == "HeadZero" or tag == "HeadS0":
        return con(tensor(BOOL, IOTA), ConstT(FF), a)
    if tag == "HeadS1":
        return con(tensor(BOOL, IOTA), ConstT(TT), a)
    if tag == "LeqFire":
        g = t.fun.fun
        ty = g.c.t1
        v1 = _oracle_value(t.fun.arg, ty)
        v2 = _oracle_value(a, ty)
        b = ConstT(TT) if v1 <= v2 else ConstT(FF)
        inner = con(tensor(ty, ty), t.fun.arg, a)
        return con(tensor(BOOL, Tensor(ty, ty)), b, inner)
    raise ValueError(f"unknown rule: {tag}")


def root_convert(t: Term):
    """Apply the unique matching conversion at the root, if any."""
    tag = rule_tag(t)
    if tag is None:
        return None
    return tag, _convert(t, tag)


# ---------------------------------------------------------------------------
# Closure: positions and redex counts

def redex_count(t: Term) -> int:
    """Number of redexes reachable through application nodes (memoized)."""
    if type(t) is not App:
        return 0
    try:
        return t._nredex
    except AttributeError:
        pass
    stack = [t]
    while stack:
        u = stack[-1]
        if type(u) is not App:
            stack.pop()
            continue
        try:
            u._nredex
            stack.pop()
            continue
        except AttributeError:
            pass
        fun, arg = u.fun, u.arg
        pending = False
        for kid in (fun, arg):
            if type(kid) is App:
                try:
                    kid._nredex
                except AttributeError:
                    stack.append(kid)
                    pending = True
        if pending:
            continue
        n = 1 if rule_tag(u) else 0
        if type(fun) is App:
            n += fun._nredex
        if type(arg) is App:
            n += arg._nredex
        u._nredex = n
        stack.pop()
    return t._nredex


def is_normal(t: Term) -> bool:
    return redex_count(t) == 0


def redex_positions(t: Term) -> list[str]:
    """All redex positions, leftmost-outermost first."""
    out = []
    stack = [(t, "")]
    while stack:
        u, p = stack.pop()
        if type(u) is not App or redex_count(u) == 0:
            continue
        if rule_tag(u):
            out.append(p)
        stack.append((u.arg, p + "a"))
        stack.append((u.fun, p + "f"))
    return out


def subterm_at(t: Term, pos: str) -> Term:
    for c in pos:
        if type(t) is not App:
            raise InvalidPosition(f"path {pos!r} leaves the application spine")
        t = t.fun if c == "f" else t.arg
    return t


def step_at(t: Term, pos: str):
    """Fire the conversion at an explicit position; InvalidPosition if none."""
    chain = []
    cur = t
    for c in pos:
        if type(cur) is not App:
            raise InvalidPosition(f"path {pos!r} leaves the application spine")
        chain.append((cur, c))
        cur = cur.fun if c == "f" else cur.arg
    tag = rule_tag(cur)
    if tag is None:
        raise InvalidPosition(f"no conversion applies at position {pos!r}")
    res = _convert(cur, tag)
    for parent, c in reversed(chain):
        res = App(res, parent.arg) if c == "f" else App(parent.fun, res)
    return tag, res


def step(t: Term, strategy: str = "lo", rng: random.Random | None = None, pos: str | None = None):
    """One closure step; returns (position, rule, result) or None when normal."""
    if strategy == "fixed":
        if pos is None:
            raise InvalidPosition("fixed strategy needs a position")
        tag, res = step_at(t, pos)
        return pos, tag, res

    total = redex_count(t)
    if total == 0:
        return None

    path: list[str] = []
    chain: list[Term] = []
    cur = t
    if strategy == "lo":
        while True:
            tag = rule_tag(cur)
            if tag:
                break
            if redex_count(cur.fun):
                chain.append(cur)
                path.append("f")
                cur = cur.fun
            else:
                chain.append(cur)
                path.append("a")
                cur = cur.arg
    elif strategy == "ri":
        while True:
            if type(cur) is App and redex_count(cur.arg):
                chain.append(cur)
                path.append("a")
                cur = cur.arg
            elif type(cur) is App and redex_count(cur.fun):
                chain.append(cur)
                path.append("f")
                cur = cur.fun
            else:
                tag = rule_tag(cur)
                break
    elif strategy == "random":
        if rng is None:
            rng = random.Random()
        k = rng.randrange(total)
        while True:
            tag = rule_tag(cur)
            if tag:
                if k == 0:
                    break
                k -= 1
            cf = redex_count(cur.fun)
            if k < cf:
                chain.append(cur)
                path.append("f")
                cur = cur.fun
            else:
                k -= cf
                chain.append(cur)
                path.append("a")
                cur = cur.arg
    else:
        raise ValueError(f"unknown strategy: {strategy!r}")

    res = _convert(cur, tag)
    for parent, c in zip(reversed(chain), reversed(path)):
        res = App(res, parent.arg) if c == "f" else App(parent.fun, res)
    return "".join(path), tag, res


def normalize(
    t: Term,
    strategy: str = "lo",
    fuel: int | None = None,
    seed: int | None = None,
):
    """Iterate `step` to normal form; FuelExhausted carries the partial trace."""
    rng = random.Random(seed) if strategy == "random" else None
    trace = Trace(t, [], strategy, seed if strategy == "random" else None)
    cur = t
    while True:
        if fuel is not None and len(trace.steps) >= fuel:
            if redex_count(cur):
                raise FuelExhausted(trace)
            break
        sel = step(cur, strategy, rng)
        if sel is None:
            break
        trace.steps.append(TraceStep(*sel))
        cur = sel[2]
    return cur, trace


def replay(trace: Trace) -> bool:
    """Re-run every recorded step at its recorded position and compare."""
    cur = trace.start
    for st in trace.steps:
        tag, res = step_at(cur, st.position)
        if tag != st.rule or res != st.result:
            return False
        cur = res
    return True
