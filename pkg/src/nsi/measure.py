"""Syntactic measures: symbol length, the polynomial bound, and the
combined descent measure.

The length of a term counts the symbols that one use of the term can
reach: applications add, lambdas add one, an ordinary pair contributes
only its larger component, list braces weigh nothing and a tree brace
weighs as much as its leaf case.  The two inspection constants on
numerals weigh 3 and the comparison oracle 4 so that firing their rules
still shrinks the term.

The polynomial bound charges every brace for the iteration it can drive:
an unapplied brace may unfold as often as the term has free variables
(the X factor), while a brace already sitting on a canonical list with n
entries (or tree with n nodes) can only unfold min(X, n) times.
"""

from __future__ import annotations

from .npoly import NPoly, npoly_add, npoly_const, npoly_mul, npoly_sup, npoly_X, npoly_Xcap
from .terms import App, Bound, ConstT, Lambda, ListBrace, Pair, Term, TreeBrace, Var

_X = npoly_X()
_ZERO = npoly_const(0)
_ONE = npoly_const(1)


def length(t: Term) -> int:
    return t._len


def poly_bound(t: Term) -> NPoly:
    try:
        return t._pollen
    except AttributeError:
        pass
    tt = type(t)
    if tt is Var or tt is Bound or tt is ConstT:
        p = _ZERO
    elif tt is Lambda:
        p = poly_bound(t.body)
    elif tt is Pair:
        p = npoly_sup(poly_bound(t.fst), poly_bound(t.snd))
    elif tt is ListBrace:
        h = t.step
        p = npoly_mul(_X, npoly_add(poly_bound(h), npoly_const(h._len)))
    elif tt is TreeBrace:
        p = _tree_brace_bound(_X, t.step, t.leaf_case)
    elif tt is App:
        fun, arg = t.fun, t.arg
        n = fun._listn
        if n >= 0 and type(arg) is ListBrace:
            h = arg.step
            xn = npoly_Xcap(n)
            p = npoly_add(
                poly_bound(fun),
                npoly_mul(xn, npoly_add(poly_bound(h), npoly_const(h._len))),
            )
        else:
            m = fun._treen
            if m >= 0 and type(arg) is TreeBrace:
                p = npoly_add(poly_bound(fun), _tree_brace_bound(npoly_Xcap(m), arg.step, arg.leaf_case))
            else:
                p = npoly_add(poly_bound(fun), poly_bound(arg))
    else:
        raise TypeError(f"unknown term: {t!r}")
    t._pollen = p
    return p


def _tree_brace_bound(x: NPoly, s: Term, r: Term) -> NPoly:
    # x*P(s) + (x+1)*P(r) + x*len(s) + x*len(r)
    return npoly_add(
        npoly_add(npoly_mul(x, poly_bound(s)), npoly_mul(npoly_add(x, _ONE), poly_bound(r))),
        npoly_mul(x, npoly_const(s._len + r._len)),
    )


def _cached_at(t: Term, n: int) -> bool:
    try:
        return t._pan == n
    except AttributeError:
        return False


def pol_at(t: Term, n: int) -> int:
    """poly_bound(t) evaluated at n, without building NPoly objects.

    Values are memoized per node for the most recent n, so re-measuring
    along a reduction trace only touches freshly built nodes.
    """
    if _cached_at(t, n):
        return t._pav
    stack = [t]
    while stack:
        u = stack[-1]
        if _cached_at(u, n):
            stack.pop()
            continue
        tu = type(u)
        if tu is Var or tu is Bound or tu is ConstT:
            u._pav = 0
            u._pan = n
            stack.pop()
            continue
        if tu is Lambda:
            kids = (u.body,)
        elif tu is Pair:
            kids = (u.fst, u.snd)
        elif tu is ListBrace:
            kids = (u.step,)
        elif tu is TreeBrace:
            kids = (u.step, u.leaf_case)
        else:  # App; iteration clauses read through the brace
            arg = u.arg
            if u.fun._listn >= 0 and type(arg) is ListBrace:
                kids = (u.fun, arg.step)
            elif u.fun._treen >= 0 and type(arg) is TreeBrace:
                kids = (u.fun, arg.step, arg.leaf_case)
            else:
                kids = (u.fun, arg)
        missing = [k for k in kids if not _cached_at(k, n)]
        if missing:
            stack.extend(missing)
            continue
        if tu is Lambda:
            v = u.body._pav
        elif tu is Pair:
            a, b = u.fst._pav, u.snd._pav
            v = a if a >= b else b
        elif tu is ListBrace:
            h = u.step
            v = n * (h._pav + h._len)
        elif tu is TreeBrace:
            s, r = u.step, u.leaf_case
            v = n * s._pav + (n + 1) * r._pav + n * (s._len + r._len)
        else:
            arg = u.arg
            ln = u.fun._listn
            if ln >= 0 and type(arg) is ListBrace:
                h = arg.step
                m = ln if ln < n else n
                v = u.fun._pav + m * (h._pav + h._len)
            else:
                tn = u.fun._treen
                if tn >= 0 and type(arg) is TreeBrace:
                    s, r = arg.step, arg.leaf_case
                    m = tn if tn < n else n
                    v = u.fun._pav + m * s._pav + (m + 1) * r._pav + m * (s._len + r._len)
                else:
                    v = u.fun._pav + arg._pav
        u._pav = v
        u._pan = n
        stack.pop()
    return t._pav


def measure_at(t: Term, n: int) -> int:
    """The descent value poly_bound(t)(n) + length(t)."""
    return pol_at(t, n) + t._len
