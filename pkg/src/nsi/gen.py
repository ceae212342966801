"""Generation of well-typed terms.

Two generators live here: a seeded random generator used by the property
suites, and an exhaustive size-bounded enumerator used to witness that no
closed term of the resource type exists.

The random generator is type-directed.  Affine linearity holds by
construction: wherever a rule demands disjoint contexts the available
variables are partitioned between the two sides, and wherever branches may
share (pair components, conditional branches) both sides see the same
pool.  Inside iteration braces generation switches to closed mode, where
diamonds can only come from the brace's own binders; a dead end there
raises and the caller picks another shape.
"""

from __future__ import annotations

import random

from .types import (
    BOOL,
    DIA,
    IOTA,
    Arrow,
    ListT,
    Product,
    Tensor,
    TreeT,
    Type,
)
from .terms import (
    App,
    Bound,
    ConstT,
    FF,
    HEAD,
    ISZERO,
    Lambda,
    ListBrace,
    PRED,
    Pair,
    S0,
    S1,
    TT,
    Term,
    TreeBrace,
    Var,
    ZERO,
    con,
    cons,
    const_type,
    lam,
    leaf,
    leq,
    nil,
    node,
    tensor,
)
from .typecheck import infer


class GenFail(Exception):
    pass


_DATA_TYPES = (BOOL, IOTA, Tensor(BOOL, BOOL), Product(BOOL, BOOL))
_ITER_RESULTS = (BOOL, IOTA, ListT(BOOL), Tensor(BOOL, BOOL), Arrow(BOOL, BOOL))


class TermGen:
    """Seeded generator of almost-closed typed terms."""

    def __init__(self, seed: int = 0, max_size: int = 40, max_brace_depth: int = 2):
        self.rng = random.Random(seed)
        self.max_size = max_size
        self.max_brace_depth = max_brace_depth
        self._fresh = 0

    # ------------------------------------------------------------------
    def term(self) -> Term:
        """One almost-closed, well-typed term (free variables are diamonds)."""
        for _ in range(50):
            ty = self.some_type(allow_diamond=True)
            try:
                t = self._gen(ty, {}, False, self.max_brace_depth, self.max_size)
            except GenFail:
                continue
            infer(t)  # generator bug if this ever raises
            return t
        raise GenFail("could not generate a term")

    def data_term(self, ty: Type | None = None) -> Term:
        """A term of a data type (list/bool/numeral/tree), for classification runs."""
        if ty is None:
            ty = self.rng.choice(
                (BOOL, IOTA, ListT(BOOL), ListT(IOTA), TreeT(BOOL, BOOL), DIA)
            )
        for _ in range(50):
            try:
                t = self._gen(ty, {}, False, self.max_brace_depth, self.max_size)
            except GenFail:
                continue
            infer(t)
            return t
        raise GenFail("could not generate a term")

    def subst_instance(self):
        """A typed triple (t, x, s) with x:sigma free-able in t and s : sigma
        almost closed, contexts disjoint by freshness of names."""
        sigma = self.rng.choice((BOOL, IOTA, DIA, ListT(BOOL), Tensor(BOOL, BOOL)))
        x = self._name("x")
        s = (
            Var(self._name("d"), DIA)
            if sigma == DIA
            else self._gen(sigma, {}, False, 1, self.max_size // 2)
        )
        for _ in range(50):
            ty = self.some_type()
            try:
                t = self._gen(ty, {x: sigma}, False, self.max_brace_depth, self.max_size)
            except GenFail:
                continue
            infer(t)
            return t, x, sigma, s
        raise GenFail("could not generate a substitution instance")

    # ------------------------------------------------------------------
    def some_type(self, depth: int = 2, allow_diamond: bool = False) -> Type:
        r = self.rng.random()
        if depth <= 0 or r < 0.45:
            base = [BOOL, BOOL, IOTA]
            if allow_diamond:
                base.append(DIA)
            return self.rng.choice(base)
        if r < 0.60:
            return ListT(self.rng.choice(_DATA_TYPES[:2]))
        if r < 0.70:
            return TreeT(BOOL, self.rng.choice((BOOL, ListT(BOOL))))
        if r < 0.80:
            return Arrow(self.some_type(depth - 1), self.some_type(depth - 1))
        if r < 0.90:
            return Tensor(self.some_type(depth - 1, allow_diamond), self.some_type(depth - 1))
        return Product(self.some_type(depth - 1), self.some_type(depth - 1))

    def _name(self, base: str) -> str:
        self._fresh += 1
        return f"{base}{self._fresh}"

    def _split(self, avail: dict):
        a, b = {}, {}
        for k, v in avail.items():
            (a if self.rng.random() < 0.5 else b)[k] = v
        return a, b

    # ------------------------------------------------------------------
    def _gen(self, ty: Type, avail: dict, closed: bool, braces: int, fuel: int) -> Term:
        rng = self.rng
        if fuel > 1:
            choices = ["intro", "var", "beta", "ifelse", "proj", "tensor_elim"]
            if braces > 0:
                choices += ["list_iter", "tree_iter"]
            if ty == BOOL or ty == IOTA:
                choices += ["iota_ops", "leq_proj"]
            rng.shuffle(choices)
            for choice in choices[: rng.randint(2, 4)]:
                try:
                    t = self._try(choice, ty, avail, closed, braces, fuel)
                    if t is not None:
                        return t
                except GenFail:
                    continue
        return self._intro(ty, avail, closed, braces, max(fuel, 1))

    def _try(self, choice, ty, avail, closed, braces, fuel):
        rng = self.rng
        if choice == "intro":
            return self._intro(ty, avail, closed, braces, fuel)
        if choice == "var":
            names = [n for n, t in avail.items() if t == ty]
            if not names:
                return None
            return Var(rng.choice(names), ty)
        if choice == "beta":
            sigma = self.some_type(1)
            a1, a2 = self._split(avail)
            x = self._name("x")
            a1[x] = sigma
            body = self._gen(ty, a1, closed, braces, fuel // 2)
            arg = self._gen(sigma, a2, closed, braces, fuel // 2)
            return App(lam(x, sigma, body), arg)
        if choice == "ifelse":
            a1, a2 = self._split(avail)
            guard = self._gen(BOOL, a1, closed, braces, fuel // 3)
            left = self._gen(ty, a2, closed, braces, fuel // 2)
            right = self._gen(ty, a2, closed, braces, fuel // 2)
            return App(guard, Pair(left, right))
        if choice == "proj":
            other = self.some_type(1)
            first = rng.random() < 0.5
            pty = Product(ty, other) if first else Product(other, ty)
            left = self._gen(pty.left, avail, closed, braces, fuel // 2)
            right = self._gen(pty.right, avail, closed, braces, fuel // 2)
            return App(Pair(left, right), ConstT(TT if first else FF))
        if choice == "tensor_elim":
            s1 = self.some_type(1)
            s2 = self.some_type(1)
            a1, a2 = self._split(avail)
            tens = self._gen(Tensor(s1, s2), a1, closed, braces, fuel // 2)
            x, y = self._name("x"), self._name("y")
            a2[x] = s1
            a2[y] = s2
            body = self._gen(ty, a2, closed, braces, fuel // 2)
            return App(tens, lam(x, s1, lam(y, s2, body)))
        if choice == "list_iter":
            elem = rng.choice(_DATA_TYPES[:2])
            a1, a2 = self._split(avail)
            lst = self._gen(ListT(elem), a1, closed, 0, fuel // 3)
            h = self._closed_list_step(elem, ty, braces - 1, fuel // 3)
            base = self._gen(ty, a2, closed, braces, fuel // 3)
            return App(App(lst, ListBrace(h)), base)
        if choice == "tree_iter":
            label = BOOL
            leaf_ty = rng.choice((BOOL, ListT(BOOL)))
            a1, _ = self._split(avail)
            tree = self._gen(TreeT(label, leaf_ty), a1, closed, 0, fuel // 3)
            s, r = self._closed_tree_steps(label, leaf_ty, ty, braces - 1, fuel // 3)
            return App(tree, TreeBrace(s, r))
        if choice == "iota_ops":
            if ty == IOTA:
                inner = self._gen(IOTA, avail, closed, braces, fuel - 2)
                return App(ConstT(PRED), inner)
            # ty == BOOL: inspect a numeral through a tensor elimination
            inner = self._gen(IOTA, avail, closed, braces, fuel - 4)
            probe = ConstT(ISZERO if rng.random() < 0.5 else HEAD)
            x, y = self._name("b"), self._name("i")
            return App(App(probe, inner), lam(x, BOOL, lam(y, IOTA, Var(x, BOOL))))
        if choice == "leq_proj":
            if ty != BOOL:
                return None
            oty = rng.choice((BOOL, IOTA))
            a1, a2 = self._split(avail)
            v1 = self._gen(oty, a1, closed, braces, fuel // 3)
            v2 = self._gen(oty, a2, closed, braces, fuel // 3)
            x, y = self._name("b"), self._name("p")
            body = Var(x, BOOL)
            return App(
                con(leq(oty), v1, v2),
                lam(x, BOOL, lam(y, Tensor(oty, oty), body)),
            )
        return None

    def _closed_list_step(self, elem, rho, braces, fuel):
        d, a, r = self._name("d"), self._name("a"), self._name("r")
        avail = {d: DIA, a: elem, r: rho}
        body = self._gen(rho, avail, True, max(braces, 0), fuel)
        return lam(d, DIA, lam(a, elem, lam(r, rho, body)))

    def _closed_tree_steps(self, label, leaf_ty, sigma, braces, fuel):
        d, a, x, y = self._name("d"), self._name("a"), self._name("x"), self._name("y")
        avail = {d: DIA, a: label, x: sigma, y: sigma}
        body = self._gen(sigma, avail, True, max(braces, 0), fuel)
        s = lam(d, DIA, lam(a, label, lam(x, sigma, lam(y, sigma, body))))
        z = self._name("z")
        rbody = self._gen(sigma, {z: leaf_ty}, True, max(braces, 0), fuel)
        r = lam(z, leaf_ty, rbody)
        return s, r

    # ------------------------------------------------------------------
    def _intro(self, ty: Type, avail: dict, closed: bool, braces: int, fuel: int) -> Term:
        rng = self.rng
        if ty == BOOL:
            return ConstT(TT if rng.random() < 0.5 else FF)
        if ty == DIA:
            names = [n for n, t in avail.items() if t == DIA]
            if names:
                return Var(rng.choice(names), DIA)
            if closed:
                raise GenFail("no diamond available in closed context")
            return Var(self._name("d"), DIA)
        if ty == IOTA:
            t: Term = ConstT(ZERO)
            for _ in range(rng.randint(0, max(2, fuel // 4))):
                t = App(ConstT(S0 if rng.random() < 0.5 else S1), t)
            return t
        if isinstance(ty, ListT):
            n_max = 0 if fuel < 4 else min(3, fuel // 4)
            if closed:
                n_max = min(n_max, sum(1 for t in avail.values() if t == DIA))
            k = rng.randint(0, n_max)
            t = ConstT(nil(ty.elem))
            pools = self._partition(avail, max(k, 1))
            for i in range(k):
                pool = pools[i]
                d = self._intro(DIA, pool, closed, braces, 1)
                pool.pop(d.name, None)
                payload = self._intro(ty.elem, pool, closed, braces, fuel // (k + 1))
                t = con(cons(ty.elem), d, payload, t)
            return t
        if isinstance(ty, TreeT):
            if fuel >= 6 and rng.random() < 0.4 and (not closed or any(t == DIA for t in avail.values())):
                a1, a2 = self._split(avail)
                d = self._intro(DIA, a1, closed, braces, 1)
                a1.pop(d.name, None)
                lab = self._intro(ty.label, a1, closed, braces, fuel // 4)
                left = self._intro(ty, a2, closed, braces, fuel // 3)
                right = self._intro(ty, {}, closed, braces, fuel // 3)
                return con(node(ty.label, ty.leaf), d, lab, left, right)
            payload = self._intro(ty.leaf, avail, closed, braces, fuel // 2)
            return con(leaf(ty.label, ty.leaf), payload)
        if isinstance(ty, Arrow):
            x = self._name("x")
            avail2 = dict(avail)
            avail2[x] = ty.arg
            body = self._gen(ty.res, avail2, closed, braces, fuel - 1)
            return lam(x, ty.arg, body)
        if isinstance(ty, Tensor):
            a1, a2 = self._split(avail)
            return con(
                tensor(ty.left, ty.right),
                self._gen(ty.left, a1, closed, braces, fuel // 2),
                self._gen(ty.right, a2, closed, braces, fuel // 2),
            )
        if isinstance(ty, Product):
            return Pair(
                self._gen(ty.left, avail, closed, braces, fuel // 2),
                self._gen(ty.right, avail, closed, braces, fuel // 2),
            )
        raise GenFail(f"cannot introduce {ty!r}")

    def _partition(self, avail: dict, k: int):
        pools = [dict() for _ in range(k)]
        for name, t in avail.items():
            pools[self.rng.randrange(k)][name] = t
        return pools


# ---------------------------------------------------------------------------
# Exhaustive enumeration of closed typed terms by node count

_ENUM_CONSTS = (
    TT, FF,
    nil(BOOL), cons(BOOL), nil(DIA), cons(DIA),
    tensor(BOOL, BOOL), tensor(DIA, BOOL), tensor(BOOL, DIA), tensor(DIA, DIA),
    ZERO, S0, S1, PRED, ISZERO, HEAD,
    leaf(BOOL, BOOL), node(BOOL, BOOL), leq(BOOL),
)
_ENUM_BINDERS = (DIA, BOOL)


def term_size(t: Term) -> int:
    """Raw constructor count (every node weighs 1)."""
    match t:
        case App(fun=f, arg=a):
            return 1 + term_size(f) + term_size(a)
        case Lambda(body=b):
            return 1 + term_size(b)
        case Pair(fst=a, snd=b):
            return 1 + term_size(a) + term_size(b)
        case ListBrace(step=s):
            return 1 + term_size(s)
        case TreeBrace(step=s, leaf_case=r):
            return 1 + term_size(s) + term_size(r)
        case _:
            return 1


class ClosedEnumerator:
    """All closed typed terms up to a node-count bound, over a finite pool
    of constant instantiations and binder annotations."""

    def __init__(self, consts=_ENUM_CONSTS, binders=_ENUM_BINDERS):
        self.consts = tuple(consts)
        self.binders = tuple(binders)
        self._memo: dict = {}
        self._brace_memo: dict = {}

    def closed_terms(self, max_size: int):
        """Iterate (term, type) for every closed typed term of size <= max_size."""
        for sz in range(1, max_size + 1):
            for term, ty, used in self._typed(sz, ()):
                if not used:
                    yield term, ty

    # -- typed terms of exact size under a binder stack ------------------
    def _typed(self, sz: int, benv):
        if sz < 1:
            return []
        key = (sz, benv)
        if key in self._memo:
            return self._memo[key]
        out = []
        if sz == 1:
            for c in self.consts:
                out.append((ConstT(c), const_type(c), frozenset()))
            for i in range(len(benv)):
                lvl = len(benv) - 1 - i
                out.append((Bound(i), benv[-1 - i], frozenset((lvl,))))
        else:
            # lambda
            for ann in self.binders:
                lvl = len(benv)
                for b, bty, bu in self._typed(sz - 1, benv + (ann,)):
                    out.append((Lambda(ann, b), Arrow(ann, bty), bu - {lvl}))
            # pair
            for s1 in range(1, sz - 1):
                for a, aty, au in self._typed(s1, benv):
                    for b, bty, bu in self._typed(sz - 1 - s1, benv):
                        out.append((Pair(a, b), Product(aty, bty), au | bu))
            # applications
            for s1 in range(1, sz - 1):
                s2 = sz - 1 - s1
                for f, fty, fu in self._typed(s1, benv):
                    out.extend(self._apps(f, fty, fu, s2, benv))
        self._memo[key] = out
        return out

    def _apps(self, f, fty, fu, s2, benv):
        out = []
        if isinstance(fty, Arrow):
            for a, aty, au in self._typed(s2, benv):
                if aty == fty.arg and fu.isdisjoint(au):
                    out.append((App(f, a), fty.res, fu | au))
        elif isinstance(fty, Product):
            if s2 == 1:
                out.append((App(f, ConstT(TT)), fty.left, fu))
                out.append((App(f, ConstT(FF)), fty.right, fu))
        elif fty == BOOL:
            for a, aty, au in self._typed(s2, benv):
                if (
                    type(a) is Pair
                    and isinstance(aty, Product)
                    and aty.left == aty.right
                    and fu.isdisjoint(au)
                ):
                    out.append((App(f, a), aty.left, fu | au))
        elif isinstance(fty, Tensor):
            for a, aty, au in self._typed(s2, benv):
                if (
                    type(a) is Lambda
                    and type(a.body) is Lambda
                    and a.ty == fty.left
                    and a.body.ty == fty.right
                    and fu.isdisjoint(au)
                ):
                    out.append((App(f, a), aty.res.res, fu | au))
        elif isinstance(fty, ListT):
            for brace, sig in self._list_braces(s2):
                if sig[1] == fty.elem:
                    rho = sig[2]
                    out.append((App(f, brace), Arrow(rho, rho), fu))
        elif isinstance(fty, TreeT):
            for brace, sigma in self._tree_braces(s2, fty):
                out.append((App(f, brace), sigma, fu))
        return out

    def _list_braces(self, sz: int):
        key = ("L", sz)
        if key in self._brace_memo:
            return self._brace_memo[key]
        out = []
        for h, hty, hu in self._typed(sz - 1, ()):
            if hu:
                continue
            parts = _arrow3(hty)
            if parts and parts[0] == DIA and parts[2] == parts[3]:
                out.append((ListBrace(h), parts))
        self._brace_memo[key] = out
        return out

    def _tree_braces(self, sz: int, fty: TreeT):
        key = ("T", sz, fty)
        if key in self._brace_memo:
            return self._brace_memo[key]
        out = []
        for s1 in range(1, sz - 1):
            for s, sty, su in self._typed(s1, ()):
                if su:
                    continue
                sp = _arrow4(sty)
                if not (sp and sp[0] == DIA and sp[1] == fty.label and sp[2] == sp[3] == sp[4]):
                    continue
                sigma = sp[2]
                for r, rty, ru in self._typed(sz - 1 - s1, ()):
                    if ru:
                        continue
                    if rty == Arrow(fty.leaf, sigma):
                        out.append((TreeBrace(s, r), sigma))
        self._brace_memo[key] = out
        return out


class ClosedCounter:
    """Exact count of closed typed terms by size and type, without
    materializing them.

    States abstract a term to (type, used binder levels, shape), where the
    shape records just enough syntax for the application rules: a literal
    tt/ff selector, a literal pair, a double abstraction, a single
    abstraction, or anything else.  Two terms in the same state accept
    exactly the same contexts, so counting states is equivalent to counting
    terms; the materializing enumerator cross-checks the totals at small
    sizes.
    """

    def __init__(self, consts=_ENUM_CONSTS, binders=_ENUM_BINDERS):
        self.consts = tuple(consts)
        self.binders = tuple(binders)
        self._memo: dict = {}
        self._brace_memo: dict = {}

    def counts(self, max_size: int):
        """dict type -> number of closed typed terms of size <= max_size."""
        total: dict = {}
        for sz in range(1, max_size + 1):
            for (ty, used, _shape), k in self._states(sz, ()).items():
                if not used:
                    total[ty] = total.get(ty, 0) + k
        return total

    def _states(self, sz: int, benv):
        if sz < 1:
            return {}
        key = (sz, benv)
        if key in self._memo:
            return self._memo[key]
        out: dict = {}

        def add(ty, used, shape, k):
            s = (ty, used, shape)
            out[s] = out.get(s, 0) + k

        if sz == 1:
            for c in self.consts:
                shape = c.kind if c.kind in ("tt", "ff") else "other"
                add(const_type(c), frozenset(), shape, 1)
            for i in range(len(benv)):
                add(benv[-1 - i], frozenset((len(benv) - 1 - i,)), "other", 1)
        else:
            lvl = len(benv)
            for ann in self.binders:
                for (bty, bu, bshape), k in self._states(sz - 1, benv + (ann,)).items():
                    shape = "lam2" if bshape in ("lam", "lam2") else "lam"
                    add(Arrow(ann, bty), bu - {lvl}, shape, k)
            for s1 in range(1, sz - 1):
                left = self._states(s1, benv)
                right = self._states(sz - 1 - s1, benv)
                for (aty, au, _), ka in left.items():
                    for (bty, bu, _), kb in right.items():
                        add(Product(aty, bty), au | bu, "pair", ka * kb)
            for s1 in range(1, sz - 1):
                s2 = sz - 1 - s1
                funs = self._states(s1, benv)
                args = self._states(s2, benv)
                for (fty, fu, _), kf in funs.items():
                    if isinstance(fty, Arrow):
                        for (aty, au, _), ka in args.items():
                            if aty == fty.arg and fu.isdisjoint(au):
                                add(fty.res, fu | au, "other", kf * ka)
                    elif isinstance(fty, Product):
                        if s2 == 1:
                            add(fty.left, fu, "other", kf)
                            add(fty.right, fu, "other", kf)
                    elif fty == BOOL:
                        for (aty, au, ashape), ka in args.items():
                            if (
                                ashape == "pair"
                                and isinstance(aty, Product)
                                and aty.left == aty.right
                                and fu.isdisjoint(au)
                            ):
                                add(aty.left, fu | au, "other", kf * ka)
                    elif isinstance(fty, Tensor):
                        for (aty, au, ashape), ka in args.items():
                            if (
                                ashape == "lam2"
                                and isinstance(aty, Arrow)
                                and aty.arg == fty.left
                                and isinstance(aty.res, Arrow)
                                and aty.res.arg == fty.right
                                and fu.isdisjoint(au)
                            ):
                                add(aty.res.res, fu | au, "other", kf * ka)
                    elif isinstance(fty, ListT):
                        for sig, kb in self._list_brace_counts(s2).items():
                            if sig[1] == fty.elem:
                                rho = sig[2]
                                add(Arrow(rho, rho), fu, "other", kf * kb)
                    elif isinstance(fty, TreeT):
                        for (lab, lf, sigma), kb in self._tree_brace_counts(s2).items():
                            if lab == fty.label and lf == fty.leaf:
                                add(sigma, fu, "other", kf * kb)
        self._memo[key] = out
        return out

    def _list_brace_counts(self, sz: int):
        if sz in self._brace_memo:
            return self._brace_memo[sz]
        out: dict = {}
        for (hty, hu, _), k in self._states(sz - 1, ()).items():
            if hu:
                continue
            parts = _arrow3(hty)
            if parts and parts[0] == DIA and parts[2] == parts[3]:
                sig = tuple(parts)
                out[sig] = out.get(sig, 0) + k
        self._brace_memo[sz] = out
        return out

    def _tree_brace_counts(self, sz: int):
        key = ("T", sz)
        if key in self._brace_memo:
            return self._brace_memo[key]
        out: dict = {}
        for s1 in range(1, sz - 1):
            for (sty, su, _), ks in self._states(s1, ()).items():
                if su:
                    continue
                sp = _arrow4(sty)
                if not (sp and sp[0] == DIA and sp[2] == sp[3] == sp[4]):
                    continue
                for (rty, ru, _), kr in self._states(sz - 1 - s1, ()).items():
                    if ru:
                        continue
                    if isinstance(rty, Arrow) and rty.res == sp[2]:
                        sig = (sp[1], rty.arg, sp[2])
                        out[sig] = out.get(sig, 0) + ks * kr
        self._brace_memo[key] = out
        return out


def _arrow3(ty):
    parts = []
    for _ in range(3):
        if not isinstance(ty, Arrow):
            return None
        parts.append(ty.arg)
        ty = ty.res
    parts.append(ty)
    return parts


def _arrow4(ty):
    parts = []
    for _ in range(4):
        if not isinstance(ty, Arrow):
            return None
        parts.append(ty.arg)
        ty = ty.res
    parts.append(ty)
    return parts
