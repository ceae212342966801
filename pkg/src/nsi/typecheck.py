"""Syntax-directed typing with affine contexts.

Inference is bottom-up and never guesses: variables carry annotations,
so every typed term has exactly one type, and the computed context is
the smallest one, i.e. the free variables.  Applications dispatch on the
inferred type of the function position: arrow types consume an ordinary
argument with a disjoint context, product types a literal projection
selector, booleans a pair of branches, tensors a double abstraction, and
list / tree types their marked iteration braces, whose step terms must
be closed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .types import Arrow, Bool, ListT, Product, Tensor, TreeT, Type, show_type
from .terms import (
    App,
    Bound,
    ConstT,
    Lambda,
    ListBrace,
    Pair,
    Term,
    TreeBrace,
    Var,
    const_type,
)
from .types import BOOL, DIA, IOTA

# types at which the comparison oracle is admitted
ORACLE_TYPES = frozenset({BOOL, IOTA})


@dataclass(frozen=True)
class TypingResult:
    type: Type
    minimal_context: frozenset[tuple[str, Type]]


class TypeCheckError(Exception):
    """Typing rejection; `kind` is the taxonomy tag, `path` the subterm location.

    Path segments: f/a = function/argument of an application, b = lambda
    body, 1/2 = pair components, s/r = brace step and leaf case.
    """

    def __init__(self, kind: str, message: str, path: str = "", details: dict | None = None):
        self.kind = kind
        self.path = path
        self.details = details or {}
        super().__init__(f"{kind} at '{path or '(root)'}': {message}")


def _fail(kind, message, path, **details):
    raise TypeCheckError(kind, message, path, details)


def _show_entry(e) -> str:
    if isinstance(e, tuple):
        return e[0]
    return f"^{e}"  # bound variable, by absolute binder depth


def _disjoint(ctx1, ctx2, path):
    if ctx1 and ctx2 and not ctx1.isdisjoint(ctx2):
        shared = sorted(_show_entry(e) for e in ctx1 & ctx2)
        _fail(
            "NonDisjointContexts",
            f"variables used on both sides of an application: {', '.join(shared)}",
            path,
            shared=shared,
        )


def infer(t: Term) -> TypingResult:
    """Infer the unique type and minimal context, or raise TypeCheckError."""
    ty, ctx = _infer(t, (), "")
    return TypingResult(ty, ctx)


def check(t: Term, context, ty: Type) -> bool:
    """Does t have type ty under (a superset of) the given context?"""
    try:
        res = infer(t)
    except TypeCheckError:
        return False
    return res.type == ty and res.minimal_context <= frozenset(context)


def _infer(t: Term, benv, path: str):
    # benv: innermost-last tuple of (type, hint); locally closed results
    # are benv-independent and cached on the node.
    closed = t._nopen == 0
    if closed:
        try:
            return t._ty
        except AttributeError:
            pass
    res = _infer_raw(t, benv, path)
    if closed:
        t._ty = res
    return res


def _infer_raw(t: Term, benv, path: str):
    tt = type(t)
    if tt is Var:
        return t.ty, frozenset(((t.name, t.ty),))
    if tt is Bound:
        i = t.index
        if i >= len(benv):
            _fail("UnannotatedVariable", f"dangling bound variable #{i}", path)
        return benv[-1 - i][0], frozenset((len(benv) - 1 - i,))
    if tt is ConstT:
        c = t.c
        if c.kind == "leq" and c.t1 not in ORACLE_TYPES:
            _fail(
                "OracleDisabled",
                f"comparison oracle not available at type {show_type(c.t1)}",
                path,
            )
        return const_type(c), frozenset()
    if tt is Lambda:
        bty, bctx = _infer(t.body, benv + ((t.ty, t.hint),), path + "b")
        lvl = len(benv)
        return Arrow(t.ty, bty), bctx - {lvl}
    if tt is Pair:
        aty, actx = _infer(t.fst, benv, path + "1")
        bty, bctx = _infer(t.snd, benv, path + "2")
        return Product(aty, bty), actx | bctx
    if tt is ListBrace or tt is TreeBrace:
        _fail("BraceOutsidePosition", "iteration brace outside an elimination", path)
    # application
    fty, fctx = _infer(t.fun, benv, path + "f")
    arg = t.arg
    apath = path + "a"

    if isinstance(fty, Arrow):
        if type(arg) is ListBrace or type(arg) is TreeBrace:
            _fail("BraceOutsidePosition", "iteration brace fed to an arrow", apath)
        aty, actx = _infer(arg, benv, apath)
        if aty != fty.arg:
            _fail(
                "HeadTypeMismatch",
                f"function expects {show_type(fty.arg)}, argument has {show_type(aty)}",
                apath,
                expected=fty.arg,
                found=aty,
            )
        _disjoint(fctx, actx, path)
        return fty.res, fctx | actx

    if isinstance(fty, Product):
        if type(arg) is ConstT and arg.c.kind == "tt":
            return fty.left, fctx
        if type(arg) is ConstT and arg.c.kind == "ff":
            return fty.right, fctx
        _fail(
            "HeadTypeMismatch",
            "projection from a pair needs a literal tt or ff selector",
            apath,
            expected="tt/ff",
        )

    if isinstance(fty, Bool):
        if type(arg) is not Pair:
            _fail(
                "HeadTypeMismatch",
                "a boolean guard must be applied to a literal branch pair",
                apath,
                expected="pair",
            )
        sty, sctx = _infer(arg.fst, benv, apath + "1")
        rty, rctx = _infer(arg.snd, benv, apath + "2")
        if sty != rty:
            _fail(
                "BranchContextMismatch",
                f"branches disagree: {show_type(sty)} vs {show_type(rty)}",
                apath,
                left=sty,
                right=rty,
            )
        bctx = sctx | rctx
        _disjoint(fctx, bctx, path)
        return sty, fctx | bctx

    if isinstance(fty, Tensor):
        if not (type(arg) is Lambda and type(arg.body) is Lambda):
            _fail(
                "HeadTypeMismatch",
                "a tensor must be consumed by a double abstraction",
                apath,
                expected="fun x:_ . fun y:_ . _",
            )
        if arg.ty != fty.left or arg.body.ty != fty.right:
            _fail(
                "HeadTypeMismatch",
                f"tensor components are {show_type(fty.left)}, {show_type(fty.right)}; "
                f"binders say {show_type(arg.ty)}, {show_type(arg.body.ty)}",
                apath,
            )
        aty, actx = _infer(arg, benv, apath)
        _disjoint(fctx, actx, path)
        return aty.res.res, fctx | actx

    if isinstance(fty, ListT):
        if type(arg) is not ListBrace:
            _fail(
                "HeadTypeMismatch",
                "a list is eliminated only by an iteration brace",
                apath,
                expected="{...}",
            )
        hty = _closed_step(arg.step, benv, apath + "s")
        sig = _arrow_parts(hty, 3)
        if sig is None or sig[0] != DIA or sig[1] != fty.elem or sig[2] != sig[3]:
            _fail(
                "HeadTypeMismatch",
                f"step term has type {show_type(hty)}, expected "
                f"Dia -o {show_type(fty.elem)} -o r -o r",
                apath + "s",
                found=hty,
            )
        rho = sig[2]
        return Arrow(rho, rho), fctx

    if isinstance(fty, TreeT):
        if type(arg) is not TreeBrace:
            _fail(
                "HeadTypeMismatch",
                "a tree is eliminated only by an iteration brace",
                apath,
                expected="{...|...}",
            )
        sty = _closed_step(arg.step, benv, apath + "s")
        ssig = _arrow_parts(sty, 4)
        if (
            ssig is None
            or ssig[0] != DIA
            or ssig[1] != fty.label
            or not (ssig[2] == ssig[3] == ssig[4])
        ):
            _fail(
                "HeadTypeMismatch",
                f"node step has type {show_type(sty)}, expected "
                f"Dia -o {show_type(fty.label)} -o s -o s -o s",
                apath + "s",
                found=sty,
            )
        rty = _closed_step(arg.leaf_case, benv, apath + "r")
        rsig = _arrow_parts(rty, 1)
        if rsig is None or rsig[0] != fty.leaf or rsig[1] != ssig[2]:
            _fail(
                "HeadTypeMismatch",
                f"leaf case has type {show_type(rty)}, expected "
                f"{show_type(fty.leaf)} -o {show_type(ssig[2])}",
                apath + "r",
                found=rty,
            )
        return ssig[2], fctx

    _fail(
        "AritySurplus",
        f"a term of type {show_type(fty)} cannot be applied",
        path,
        found=fty,
    )


def _closed_step(h: Term, benv, path: str) -> Type:
    if h._nopen > 0:
        offenders = [hint for _, hint in benv[-h._nopen:]]
        _fail(
            "OpenStepTerm",
            "iteration step term captures an enclosing bound variable",
            path,
            offending=offenders,
        )
    hty, hctx = _infer(h, (), path)
    if hctx:
        names = sorted(_show_entry(e) for e in hctx)
        _fail(
            "OpenStepTerm",
            f"iteration step term has free variables: {', '.join(names)}",
            path,
            offending=names,
        )
    return hty


def _arrow_parts(ty: Type, n: int):
    """Split a -o b -o ... into n argument types plus the result, or None."""
    parts = []
    for _ in range(n):
        if not isinstance(ty, Arrow):
            return None
        parts.append(ty.arg)
        ty = ty.res
    parts.append(ty)
    return parts
