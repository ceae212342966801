"""Raw term syntax: constants, terms, recognizers and substitution.

Bound variables are de Bruijn indices, so terms that differ only in the
names of bound variables are literally equal; binders keep a display hint
that takes no part in equality or hashing.  Free variables are named and
carry their type at every occurrence.

Every node precomputes a structural hash, its symbol length, the number of
binders it dangles into (`_nopen`, 0 means locally closed), and whether it
is a canonical list spine / tree / short numeral.  Reduction, measuring and
typing lean on these fields heavily; slots that are expensive to fill
(`_rule`, `_nredex`, `_ty`, ...) are left unset until first use.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .types import (
    BOOL,
    DIA,
    IOTA,
    Arrow,
    ListT,
    Tensor,
    TreeT,
    Type,
    arrows,
    show_type,
)

sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))


# ---------------------------------------------------------------------------
# Constants

@dataclass(frozen=True)
class Const:
    """A typed constructor symbol, possibly indexed by one or two types."""

    kind: str
    t1: Type | None = None
    t2: Type | None = None


TT = Const("tt")
FF = Const("ff")
ZERO = Const("zero")
S0 = Const("s0")
S1 = Const("s1")
PRED = Const("pred")
ISZERO = Const("iszero")
HEAD = Const("head")


def nil(elem: Type) -> Const:
    return Const("nil", elem)


def cons(elem: Type) -> Const:
    return Const("cons", elem)


def tensor(left: Type, right: Type) -> Const:
    return Const("tensor", left, right)


def leaf(label: Type, leaf_ty: Type) -> Const:
    return Const("leaf", label, leaf_ty)


def node(label: Type, leaf_ty: Type) -> Const:
    return Const("node", label, leaf_ty)


def leq(elem: Type) -> Const:
    return Const("leq", elem)


def const_type(c: Const) -> Type:
    """The unique type of a constructor symbol."""
    k = c.kind
    if k == "tt" or k == "ff":
        return BOOL
    if k == "nil":
        return ListT(c.t1)
    if k == "cons":
        lt = ListT(c.t1)
        return arrows(DIA, c.t1, lt, lt)
    if k == "tensor":
        return arrows(c.t1, c.t2, Tensor(c.t1, c.t2))
    if k == "leaf":
        return Arrow(c.t2, TreeT(c.t1, c.t2))
    if k == "node":
        tt_ = TreeT(c.t1, c.t2)
        return arrows(DIA, c.t1, tt_, tt_, tt_)
    if k == "zero":
        return IOTA
    if k == "s0" or k == "s1" or k == "pred":
        return Arrow(IOTA, IOTA)
    if k == "iszero" or k == "head":
        return Arrow(IOTA, Tensor(BOOL, IOTA))
    if k == "leq":
        return arrows(c.t1, c.t1, Tensor(BOOL, Tensor(c.t1, c.t1)))
    raise ValueError(f"unknown constant kind: {k}")


_CONST_LEN = {"iszero": 3, "head": 3, "leq": 4}


# ---------------------------------------------------------------------------
# Term nodes

_LAZY_SLOTS = ("_rule", "_nredex", "_ty", "_pollen", "_pan", "_pav")


class Term:
    __slots__ = ("_h", "_len", "_nopen", "_listn", "_treen", "_numer") + _LAZY_SLOTS

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"<{_sexpr(self)}>"


class Var(Term):
    __slots__ = ("name", "ty")

    def __init__(self, name: str, ty: Type):
        self.name = name
        self.ty = ty
        self._h = hash((1, name, ty))
        self._len = 1
        self._nopen = 0
        self._listn = -1
        self._treen = -1
        self._numer = None

    def __eq__(self, o):
        if self is o:
            return True
        return type(o) is Var and o._h == self._h and o.name == self.name and o.ty == self.ty


class Bound(Term):
    __slots__ = ("index",)

    def __init__(self, index: int):
        self.index = index
        self._h = hash((2, index))
        self._len = 1
        self._nopen = index + 1
        self._listn = -1
        self._treen = -1
        self._numer = None

    def __eq__(self, o):
        if self is o:
            return True
        return type(o) is Bound and o.index == self.index


class ConstT(Term):
    __slots__ = ("c",)

    def __init__(self, c: Const):
        self.c = c
        self._h = hash((3, c))
        self._len = _CONST_LEN.get(c.kind, 1)
        self._nopen = 0
        self._listn = 0 if c.kind == "nil" else -1
        self._treen = -1
        self._numer = (0, 0) if c.kind == "zero" else None

    def __eq__(self, o):
        if self is o:
            return True
        return type(o) is ConstT and o.c == self.c


class Lambda(Term):
    __slots__ = ("ty", "body", "hint")

    def __init__(self, ty: Type, body: Term, hint: str = "x"):
        self.ty = ty
        self.body = body
        self.hint = hint
        self._h = hash((4, ty, body._h))
        self._len = body._len + 1
        n = body._nopen - 1
        self._nopen = n if n > 0 else 0
        self._listn = -1
        self._treen = -1
        self._numer = None

    def __eq__(self, o):
        if self is o:
            return True
        return (
            type(o) is Lambda
            and o._h == self._h
            and o.ty == self.ty
            and o.body == self.body
        )


class Pair(Term):
    __slots__ = ("fst", "snd")

    def __init__(self, fst: Term, snd: Term):
        self.fst = fst
        self.snd = snd
        self._h = hash((5, fst._h, snd._h))
        a, b = fst._len, snd._len
        self._len = (a if a >= b else b) + 1
        a, b = fst._nopen, snd._nopen
        self._nopen = a if a >= b else b
        self._listn = -1
        self._treen = -1
        self._numer = None

    def __eq__(self, o):
        if self is o:
            return True
        return type(o) is Pair and o._h == self._h and o.fst == self.fst and o.snd == self.snd


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: Term):
        self.fun = fun
        self.arg = arg
        self._h = hash((6, fun._h, arg._h))
        self._len = fun._len + arg._len
        a, b = fun._nopen, arg._nopen
        self._nopen = a if a >= b else b

        # canonical-shape bookkeeping, all O(1) given the children's fields
        listn = -1
        treen = -1
        numer = None
        f = fun
        if type(f) is ConstT:
            k = f.c.kind
            if k == "s0" or k == "s1":
                nu = arg._numer
                if nu is not None:
                    v, w = nu
                    bit = 0 if k == "s0" else 1
                    numer = ((bit << w) | v, w + 1)
            elif k == "leaf":
                treen = 0
        elif type(f) is App:
            g = f.fun
            if type(g) is App:
                h = g.fun
                if type(h) is ConstT:
                    if h.c.kind == "cons":
                        tn = arg._listn
                        if tn >= 0:
                            listn = tn + 1
                elif type(h) is App and type(h.fun) is ConstT and h.fun.c.kind == "node":
                    n1, n2 = f.arg._treen, arg._treen
                    if n1 >= 0 and n2 >= 0:
                        treen = n1 + n2 + 1
        self._listn = listn
        self._treen = treen
        self._numer = numer

    def __eq__(self, o):
        if self is o:
            return True
        return type(o) is App and o._h == self._h and o.fun == self.fun and o.arg == self.arg


class ListBrace(Term):
    __slots__ = ("step",)

    def __init__(self, step: Term):
        self.step = step
        self._h = hash((7, step._h))
        self._len = 0
        self._nopen = step._nopen
        self._listn = -1
        self._treen = -1
        self._numer = None

    def __eq__(self, o):
        if self is o:
            return True
        return type(o) is ListBrace and o._h == self._h and o.step == self.step


class TreeBrace(Term):
    __slots__ = ("step", "leaf_case")

    def __init__(self, step: Term, leaf_case: Term):
        self.step = step
        self.leaf_case = leaf_case
        self._h = hash((8, step._h, leaf_case._h))
        self._len = leaf_case._len
        a, b = step._nopen, leaf_case._nopen
        self._nopen = a if a >= b else b
        self._listn = -1
        self._treen = -1
        self._numer = None

    def __eq__(self, o):
        if self is o:
            return True
        return (
            type(o) is TreeBrace
            and o._h == self._h
            and o.step == self.step
            and o.leaf_case == self.leaf_case
        )


def _sexpr(t: Term) -> str:
    match t:
        case Var(name=n):
            return n
        case Bound(index=i):
            return f"#{i}"
        case ConstT(c=c):
            return c.kind
        case Lambda(hint=h, body=b):
            return f"(fun {h}. {_sexpr(b)})"
        case Pair(fst=a, snd=b):
            return f"<{_sexpr(a)}, {_sexpr(b)}>"
        case App(fun=f, arg=a):
            return f"({_sexpr(f)} {_sexpr(a)})"
        case ListBrace(step=s):
            return f"{{{_sexpr(s)}}}"
        case TreeBrace(step=s, leaf_case=r):
            return f"{{{_sexpr(s)} | {_sexpr(r)}}}"
    return "?"


# match support for the plain classes above
Var.__match_args__ = ("name", "ty")
Bound.__match_args__ = ("index",)
ConstT.__match_args__ = ("c",)
Lambda.__match_args__ = ("ty", "body")
Pair.__match_args__ = ("fst", "snd")
App.__match_args__ = ("fun", "arg")
ListBrace.__match_args__ = ("step",)
TreeBrace.__match_args__ = ("step", "leaf_case")


# ---------------------------------------------------------------------------
# Builders

def apps(fun: Term, *args: Term) -> Term:
    """Left-nested application spine."""
    t = fun
    for a in args:
        t = App(t, a)
    return t


def con(c: Const, *args: Term) -> Term:
    return apps(ConstT(c), *args)


def close(t: Term, name: str, depth: int = 0) -> Term:
    """Turn free occurrences of the named variable into de Bruijn index `depth`."""
    match t:
        case Var(name=n):
            return Bound(depth) if n == name else t
        case Bound() | ConstT():
            return t
        case Lambda(ty=ty, body=b):
            return Lambda(ty, close(b, name, depth + 1), t.hint)
        case Pair(fst=a, snd=b):
            return Pair(close(a, name, depth), close(b, name, depth))
        case App(fun=f, arg=a):
            return App(close(f, name, depth), close(a, name, depth))
        case ListBrace(step=s):
            return ListBrace(close(s, name, depth))
        case TreeBrace(step=s, leaf_case=r):
            return TreeBrace(close(s, name, depth), close(r, name, depth))
    raise TypeError(f"unknown term: {t!r}")


def lam(name: str, ty: Type, body: Term) -> Term:
    """Abstract the named free variable: lam("x", B, ...x...) is fun x:B. body."""
    return Lambda(ty, close(body, name), name)


def lams(bindings, body: Term) -> Term:
    """lam over several (name, type) bindings, outermost first."""
    t = body
    for name, ty in reversed(list(bindings)):
        t = lam(name, ty, t)
    return t


# ---------------------------------------------------------------------------
# Free variables and substitution

def free_vars(t: Term) -> frozenset[tuple[str, Type]]:
    """The set of named free variables of a raw term (with their types)."""
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        tu = type(u)
        if tu is Var:
            out.add((u.name, u.ty))
        elif tu is App:
            stack.append(u.fun)
            stack.append(u.arg)
        elif tu is Lambda:
            stack.append(u.body)
        elif tu is Pair:
            stack.append(u.fst)
            stack.append(u.snd)
        elif tu is ListBrace:
            stack.append(u.step)
        elif tu is TreeBrace:
            stack.append(u.step)
            stack.append(u.leaf_case)
    return frozenset(out)


def free_names(t: Term) -> frozenset[str]:
    return frozenset(n for n, _ in free_vars(t))


def substitute(t: Term, name: str, s: Term) -> Term:
    """Replace free occurrences of the named variable by `s`.

    Binders are nameless, so capture cannot happen; the pretty-printer
    freshens clashing display hints instead.
    """
    match t:
        case Var(name=n):
            return s if n == name else t
        case Bound() | ConstT():
            return t
        case Lambda(ty=ty, body=b):
            return Lambda(ty, substitute(b, name, s), t.hint)
        case Pair(fst=a, snd=b):
            return Pair(substitute(a, name, s), substitute(b, name, s))
        case App(fun=f, arg=a):
            return App(substitute(f, name, s), substitute(a, name, s))
        case ListBrace(step=st):
            return ListBrace(substitute(st, name, s))
        case TreeBrace(step=st, leaf_case=r):
            return TreeBrace(substitute(st, name, s), substitute(r, name, s))
    raise TypeError(f"unknown term: {t!r}")


def open_bound(t: Term, subs: list[Term]) -> Term:
    """Plug locally closed terms for the innermost dangling indices.

    subs[j] replaces index depth+j; deeper dangling indices shift down by
    len(subs).  Subtrees that do not reach the spliced binders are shared
    untouched, which keeps beta steps proportional to the rewritten paths.
    """
    return _open(t, 0, subs, len(subs))


def _open(t: Term, depth: int, subs, k: int) -> Term:
    if t._nopen <= depth:
        return t
    tt_ = type(t)
    if tt_ is Bound:
        i = t.index
        if i < depth:
            return t
        if i < depth + k:
            return subs[i - depth]
        return Bound(i - k)
    if tt_ is App:
        return App(_open(t.fun, depth, subs, k), _open(t.arg, depth, subs, k))
    if tt_ is Lambda:
        return Lambda(t.ty, _open(t.body, depth + 1, subs, k), t.hint)
    if tt_ is Pair:
        return Pair(_open(t.fst, depth, subs, k), _open(t.snd, depth, subs, k))
    if tt_ is ListBrace:
        return ListBrace(_open(t.step, depth, subs, k))
    if tt_ is TreeBrace:
        return TreeBrace(_open(t.step, depth, subs, k), _open(t.leaf_case, depth, subs, k))
    raise TypeError(f"unknown term: {t!r}")


# ---------------------------------------------------------------------------
# Canonical-form recognizers

@dataclass(frozen=True)
class CanonicalList:
    """A full constructor spine cons d1 a1 (... (cons dn an nil))."""

    elem: Type
    entries: tuple[tuple[Term, Term], ...]

    @property
    def n(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class CanonicalTree:
    """leaf payload, or node (diamond, label, left, right); `nodes` counts node constructors."""

    payload: Term | None = None
    diamond: Term | None = None
    label: Term | None = None
    left: "CanonicalTree | None" = None
    right: "CanonicalTree | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.payload is not None

    @property
    def nodes(self) -> int:
        if self.is_leaf:
            return 0
        return self.left.nodes + self.right.nodes + 1


@dataclass(frozen=True)
class ShortNumeral:
    bits: tuple[int, ...]  # outermost constructor first

    @property
    def value(self) -> int:
        v = 0
        for b in self.bits:
            v = (v << 1) | b
        return v


def recognize_list(t: Term) -> CanonicalList | None:
    if t._listn < 0:
        return None
    entries = []
    cur = t
    while type(cur) is App:
        spine = cur.fun  # cons d a
        entries.append((spine.fun.arg, spine.arg))
        cur = cur.arg
    return CanonicalList(cur.c.t1, tuple(entries))


def recognize_tree(t: Term) -> CanonicalTree | None:
    if t._treen < 0:
        return None
    if t._treen == 0:
        return CanonicalTree(payload=t.arg)
    f = t.fun  # node d a t1 applied to t2
    return CanonicalTree(
        diamond=f.fun.fun.arg,
        label=f.fun.arg,
        left=recognize_tree(f.arg),
        right=recognize_tree(t.arg),
    )


def recognize_short_numeral(t: Term) -> ShortNumeral | None:
    nu = t._numer
    if nu is None:
        return None
    v, w = nu
    return ShortNumeral(tuple((v >> (w - 1 - j)) & 1 for j in range(w)))


# ---------------------------------------------------------------------------
# Head form

@dataclass(frozen=True)
class HeadForm:
    kind: str  # "var" | "const" | "lambda" | "pair" | "brace"
    head: Term
    args: tuple[Term, ...]


def head_form(t: Term) -> HeadForm:
    """Split into head and application spine; braces at the head are the
    raw-syntax case that no typed term exhibits."""
    args: list[Term] = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fun
    args.reverse()
    match t:
        case Var() | Bound():
            kind = "var"
        case ConstT():
            kind = "const"
        case Lambda():
            kind = "lambda"
        case Pair():
            kind = "pair"
        case _:
            kind = "brace"
    return HeadForm(kind, t, tuple(args))


def show_term(t: Term) -> str:
    """Debug rendering; the surface module owns the real pretty-printer."""
    return _sexpr(t)


__all__ = [
    "Const", "TT", "FF", "ZERO", "S0", "S1", "PRED", "ISZERO", "HEAD",
    "nil", "cons", "tensor", "leaf", "node", "leq", "const_type",
    "Term", "Var", "Bound", "ConstT", "Lambda", "Pair", "App",
    "ListBrace", "TreeBrace",
    "apps", "con", "lam", "lams", "close",
    "free_vars", "free_names", "substitute", "open_bound",
    "CanonicalList", "CanonicalTree", "ShortNumeral",
    "recognize_list", "recognize_tree", "recognize_short_numeral",
    "HeadForm", "head_form", "show_term",
]
