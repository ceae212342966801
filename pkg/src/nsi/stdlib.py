"""The library of example programs: data builders, insertion sort, append,
the tree-based quicksort pipeline, and negative (untypable) examples.

Lists are built with distinct fresh diamond variables, so the length of a
list equals its free-variable count.  The comparison oracle is available
at B (ff before tt) and at I (numerals compared by value); quicksort's
driver takes an explicit clock list whose length bounds how many division
passes run -- one pass per input element always suffices.
"""

from __future__ import annotations

from itertools import count

from .types import BOOL, DIA, IOTA, Arrow, ListT, Product, Tensor, TreeT, Type, arrows
from .terms import (
    App,
    ConstT,
    FF,
    ListBrace,
    Pair,
    S0,
    S1,
    TT,
    Term,
    TreeBrace,
    Var,
    ZERO,
    apps,
    con,
    cons,
    lam,
    lams,
    leaf,
    leq,
    nil,
    node,
    recognize_list,
    tensor,
)
from .typecheck import ORACLE_TYPES

_fresh_counter = count(1)


def fresh_diamond(prefix: str = "d") -> Term:
    return Var(f"{prefix}{next(_fresh_counter)}", DIA)


def mk_bool(b: bool) -> Term:
    return ConstT(TT if b else FF)


def mk_numeral(bits) -> Term:
    """Short numeral from bits, outermost (most significant) first."""
    t: Term = ConstT(ZERO)
    for b in reversed(list(bits)):
        t = App(ConstT(S1 if b else S0), t)
    return t


def mk_list(payloads, elem: Type, prefix: str = "d") -> Term:
    """Canonical list with one fresh diamond variable per entry."""
    t: Term = ConstT(nil(elem))
    for p in reversed(list(payloads)):
        t = con(cons(elem), fresh_diamond(prefix), p, t)
    return t


def mk_bool_list(bits) -> Term:
    return mk_list([mk_bool(b) for b in bits], BOOL)


def mk_clock(n: int) -> Term:
    """A list of n throwaway boolean entries, used as an iteration budget."""
    return mk_bool_list([True] * n)


def oracle_value(t: Term, ty: Type) -> int:
    """The ordering key the comparison oracle applies at an enabled type."""
    if ty == BOOL and type(t) is ConstT:
        if t.c.kind == "ff":
            return 0
        if t.c.kind == "tt":
            return 1
    if ty == IOTA and t._numer is not None:
        return t._numer[0]
    raise ValueError(f"not a canonical oracle value at {ty}: {t!r}")


def decode_payloads(t: Term) -> list[Term]:
    cl = recognize_list(t)
    if cl is None:
        raise ValueError("not a canonical list")
    return [p for _, p in cl.entries]


def decode_bools(t: Term) -> list[bool]:
    out = []
    for p in decode_payloads(t):
        out.append(bool(oracle_value(p, BOOL)))
    return out


def _require_oracle(elem: Type):
    if elem not in ORACLE_TYPES:
        raise ValueError(f"comparison oracle not enabled at {elem}")


# ---------------------------------------------------------------------------
# Insertion sort

def leq2_term(elem: Type) -> Term:
    """Two-element sorter: returns its arguments as a tensor, smaller first."""
    _require_oracle(elem)
    tt_pair = Tensor(elem, elem)
    body = App(
        con(leq(elem), Var("p1", elem), Var("p2", elem)),
        lams(
            [("y", BOOL), ("p", tt_pair)],
            App(
                Var("p", tt_pair),
                lams(
                    [("q1", elem), ("q2", elem)],
                    App(
                        Var("y", BOOL),
                        Pair(
                            con(tensor(elem, elem), Var("q1", elem), Var("q2", elem)),
                            con(tensor(elem, elem), Var("q2", elem), Var("q1", elem)),
                        ),
                    ),
                ),
            ),
        ),
    )
    return lams([("p1", elem), ("p2", elem)], body)


def insert_term(elem: Type) -> Term:
    """insert : L(t) -o Dia -o t -o L(t); puts the element where it belongs
    in a sorted list."""
    _require_oracle(elem)
    lt = ListT(elem)
    rho = arrows(DIA, elem, lt)
    step_body = App(
        apps(leq2_term(elem), Var("y1", elem), Var("y2", elem)),
        lams(
            [("z1", elem), ("z2", elem)],
            con(
                cons(elem),
                Var("x1", DIA),
                Var("z1", elem),
                apps(Var("p", rho), Var("x2", DIA), Var("z2", elem)),
            ),
        ),
    )
    step = lams(
        [("x1", DIA), ("y1", elem), ("p", rho), ("x2", DIA), ("y2", elem)], step_body
    )
    base = lams(
        [("x", DIA), ("y", elem)],
        con(cons(elem), Var("x", DIA), Var("y", elem), ConstT(nil(elem))),
    )
    return lam("l", lt, App(App(Var("l", lt), ListBrace(step)), base))


def sort_term(elem: Type) -> Term:
    """Insertion sort : L(t) -o L(t)."""
    lt = ListT(elem)
    step = lams(
        [("x", DIA), ("y", elem), ("l2", lt)],
        apps(insert_term(elem), Var("l2", lt), Var("x", DIA), Var("y", elem)),
    )
    return lam(
        "l", lt, App(App(Var("l", lt), ListBrace(step)), ConstT(nil(elem)))
    )


def append_term(elem: Type) -> Term:
    """append : L(t) -o L(t) -o L(t), by list iteration with the cons step."""
    lt = ListT(elem)
    return lams(
        [("l1", lt), ("l2", lt)],
        App(App(Var("l1", lt), ListBrace(ConstT(cons(elem)))), Var("l2", lt)),
    )


def copy_term(elem: Type) -> Term:
    """Rebuild a list out of its own diamonds : L(t) -o L(t)."""
    lt = ListT(elem)
    return lam(
        "l", lt, App(App(Var("l", lt), ListBrace(ConstT(cons(elem)))), ConstT(nil(elem)))
    )


def erase_term(elem: Type) -> Term:
    """Drop every entry : L(t) -o L(t); output is always nil."""
    lt = ListT(elem)
    step = lams([("x", DIA), ("y", elem), ("r", lt)], Var("r", lt))
    return lam("l", lt, App(App(Var("l", lt), ListBrace(step)), ConstT(nil(elem))))


# ---------------------------------------------------------------------------
# Quicksort via labeled trees (divide and conquer)

def divide_term(elem: Type) -> Term:
    """divide : t -o L(t) -o t (x) (L(t) (x) L(t)); splits around the pivot,
    elements at most the pivot to the left."""
    _require_oracle(elem)
    lt = ListT(elem)
    ll = Tensor(lt, lt)
    resty = Tensor(elem, ll)

    def out_pair(piv, small, large):
        return con(tensor(elem, ll), piv, con(tensor(lt, lt), small, large))

    y0, y1 = Var("y0", DIA), Var("y1", elem)
    grow_small = out_pair(
        Var("xp", elem),
        con(cons(elem), y0, Var("y1b", elem), Var("l1", lt)),
        Var("l2", lt),
    )
    grow_large = out_pair(
        Var("xp", elem),
        Var("l1", lt),
        con(cons(elem), y0, Var("y1b", elem), Var("l2", lt)),
    )
    compare = App(
        con(leq(elem), y1, Var("x", elem)),
        lams(
            [("z", BOOL), ("q2", Tensor(elem, elem))],
            App(
                Var("q2", Tensor(elem, elem)),
                lams(
                    [("y1b", elem), ("xp", elem)],
                    App(Var("z", BOOL), Pair(grow_small, grow_large)),
                ),
            ),
        ),
    )
    step = lams(
        [("y0", DIA), ("y1", elem), ("p", resty)],
        App(
            Var("p", resty),
            lams(
                [("x", elem), ("q", ll)],
                App(Var("q", ll), lams([("l1", lt), ("l2", lt)], compare)),
            ),
        ),
    )
    base = out_pair(Var("x0", elem), ConstT(nil(elem)), ConstT(nil(elem)))
    return lams(
        [("x0", elem), ("l", lt)],
        App(App(Var("l", lt), ListBrace(step)), base),
    )


def conquer_term(elem: Type) -> Term:
    """conquer : Dia -o t -o L(t) -o L(t) -o L(t); sorted parts around the pivot."""
    lt = ListT(elem)
    return lams(
        [("x", DIA), ("y", elem), ("lo", lt), ("hi", lt)],
        apps(
            append_term(elem),
            Var("lo", lt),
            con(cons(elem), Var("x", DIA), Var("y", elem), Var("hi", lt)),
        ),
    )


def qsort_base(elem: Type) -> Term:
    return ConstT(nil(elem))


def quicksort_components(elem: Type):
    """The divide / conquer / base triple the driver is assembled from."""
    return divide_term(elem), conquer_term(elem), qsort_base(elem)


def _carry_divide_term(elem: Type) -> Term:
    """g : L(t) -o L(t) * T(t, L(t)); pairs the list with its one-level
    division tree, so a later pass can divide without losing the list."""
    lt = ListT(elem)
    tl = TreeT(elem, lt)
    rho = Product(lt, tl)
    divide = divide_term(elem)
    second = App(
        apps(divide, Var("a", elem), App(Var("p", rho), ConstT(TT))),
        lams(
            [("a2", elem), ("q", Tensor(lt, lt))],
            App(
                Var("q", Tensor(lt, lt)),
                lams(
                    [("l1", lt), ("l2", lt)],
                    con(
                        node(elem, lt),
                        Var("d", DIA),
                        Var("a2", elem),
                        con(leaf(elem, lt), Var("l1", lt)),
                        con(leaf(elem, lt), Var("l2", lt)),
                    ),
                ),
            ),
        ),
    )
    step = lams(
        [("d", DIA), ("a", elem), ("p", rho)],
        Pair(
            con(cons(elem), Var("d", DIA), Var("a", elem), App(Var("p", rho), ConstT(TT))),
            second,
        ),
    )
    base = Pair(ConstT(nil(elem)), con(leaf(elem, lt), ConstT(nil(elem))))
    return lam("l", lt, App(App(Var("l", lt), ListBrace(step)), base))


def expand_term(elem: Type) -> Term:
    """One division pass: apply the divider to the list in every leaf."""
    lt = ListT(elem)
    tl = TreeT(elem, lt)
    g = _carry_divide_term(elem)
    leaf_case = lam("l", lt, App(App(g, Var("l", lt)), ConstT(FF)))
    return lam(
        "t", tl, App(Var("t", tl), TreeBrace(ConstT(node(elem, lt)), leaf_case))
    )


def quicksort_term(elem: Type) -> Term:
    """quicksort : L(t) -o L(B) -o L(t).

    The second argument is the clock: each entry drives one division pass
    over the intermediate tree.  A clock as long as the input always
    suffices, since every pass consumes one pivot on every nonempty path.
    """
    lt = ListT(elem)
    tl = TreeT(elem, lt)
    lb = ListT(BOOL)
    g = _carry_divide_term(elem)
    expand = expand_term(elem)
    clock_step = lams(
        [("cd", DIA), ("ca", BOOL), ("t", tl)], App(expand, Var("t", tl))
    )
    tree0 = App(App(g, Var("l", lt)), ConstT(FF))
    grown = App(App(Var("c", lb), ListBrace(clock_step)), tree0)
    collected = App(
        grown,
        TreeBrace(conquer_term(elem), lam("lf", lt, Var("lf", lt))),
    )
    return lams([("l", lt), ("c", lb)], collected)


# ---------------------------------------------------------------------------
# Negative examples

def negative_examples() -> list[tuple[Term, str]]:
    """Raw terms that must be rejected, with the expected error kind."""
    lb = ListT(BOOL)
    dup_diamond = lam(
        "x",
        DIA,
        con(
            cons(BOOL),
            Var("x", DIA),
            ConstT(TT),
            con(cons(BOOL), Var("x", DIA), ConstT(FF), ConstT(nil(BOOL))),
        ),
    )
    dup_list = lam(
        "l",
        lb,
        App(
            App(
                Var("l", lb),
                ListBrace(
                    lams(
                        [("d", DIA), ("a", BOOL), ("r", lb)],
                        apps(append_term(BOOL), Var("r", lb), Var("r", lb)),
                    )
                ),
            ),
            ConstT(nil(BOOL)),
        ),
    )
    open_step = App(
        App(
            Var("l", lb),
            ListBrace(
                lams(
                    [("d", DIA), ("a", BOOL), ("r", lb)],
                    con(cons(BOOL), Var("y", DIA), ConstT(TT), Var("r", lb)),
                )
            ),
        ),
        ConstT(nil(BOOL)),
    )
    captured_step = lam(
        "a0",
        BOOL,
        App(
            App(
                Var("l", lb),
                ListBrace(
                    lams([("d", DIA), ("a", BOOL), ("r", lb)], Var("a0", BOOL))
                ),
            ),
            ConstT(TT),
        ),
    )
    bare_brace = ListBrace(lam("x", BOOL, Var("x", BOOL)))
    over_applied = App(App(ConstT(TT), Pair(ConstT(TT), ConstT(FF))), ConstT(TT))
    bad_branch = App(Var("b", BOOL), Pair(ConstT(TT), ConstT(nil(BOOL))))
    bad_projection = App(Pair(ConstT(TT), ConstT(FF)), Var("b", BOOL))
    return [
        (dup_diamond, "NonDisjointContexts"),
        (dup_list, "NonDisjointContexts"),
        (open_step, "OpenStepTerm"),
        (captured_step, "OpenStepTerm"),
        (bare_brace, "BraceOutsidePosition"),
        (over_applied, "AritySurplus"),
        (bad_branch, "BranchContextMismatch"),
        (bad_projection, "HeadTypeMismatch"),
    ]
