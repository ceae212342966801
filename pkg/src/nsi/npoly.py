"""Exact arithmetic for pointwise-polynomially-bounded functions on naturals.

Every function we ever build is generated from constants, the identity X,
and the capped identity X_n = min(X, n) by pointwise +, * and sup.  Such a
function is eventually a polynomial: X_n is constant from n on.  The
canonical form is a finite prefix table plus a polynomial tail valid from
the threshold on, which makes evaluation, the pointwise order and equality
all exactly decidable.
"""

from __future__ import annotations

from dataclasses import dataclass


def _poly_eval(coeffs: tuple[int, ...], n: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * n + c
    return v


def _poly_trim(coeffs) -> tuple[int, ...]:
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _poly_add(a, b):
    n = max(len(a), len(b))
    return _poly_trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _poly_trim(
        (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)
    )


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _poly_trim(out)


def _sign_horizon(diff: tuple[int, ...]) -> int:
    """A bound beyond which a nonzero integer polynomial keeps the sign of
    its leading coefficient (Cauchy root bound, rounded up generously)."""
    lead = abs(diff[-1])
    rest = sum(abs(c) for c in diff[:-1])
    return 2 + rest // lead


@dataclass(frozen=True)
class NPoly:
    """Canonical (threshold, prefix, tail) form; construct via the helpers."""

    threshold: int
    prefix: tuple[int, ...]  # values at 0 .. threshold-1
    tail: tuple[int, ...]    # coefficients c0, c1, ...; () is the zero function

    def __call__(self, n: int) -> int:
        if n < self.threshold:
            return self.prefix[n]
        return _poly_eval(self.tail, n)

    @property
    def degree(self) -> int:
        return max(0, len(self.tail) - 1)

    def __add__(self, other):
        return npoly_add(self, _coerce(other))

    def __radd__(self, other):
        return npoly_add(_coerce(other), self)

    def __mul__(self, other):
        return npoly_mul(self, _coerce(other))

    def __rmul__(self, other):
        return npoly_mul(_coerce(other), self)


def _make(threshold: int, prefix, tail) -> NPoly:
    tail = _poly_trim(tail)
    prefix = list(prefix[:threshold])
    while prefix and prefix[-1] == _poly_eval(tail, len(prefix) - 1):
        prefix.pop()
    return NPoly(len(prefix), tuple(prefix), tail)


def _coerce(f) -> NPoly:
    if isinstance(f, NPoly):
        return f
    if isinstance(f, int):
        return npoly_const(f)
    raise TypeError(f"cannot treat {f!r} as an NPoly")


def npoly_const(c: int) -> NPoly:
    if c < 0:
        raise ValueError("naturals only")
    return NPoly(0, (), (c,) if c else ())


def npoly_X() -> NPoly:
    return NPoly(0, (), (0, 1))


def npoly_Xcap(n: int) -> NPoly:
    if n < 0:
        raise ValueError("naturals only")
    return _make(n, tuple(range(n)), (n,))


ZERO = npoly_const(0)
X = npoly_X()


def npoly_eval(f: NPoly, n: int) -> int:
    return f(n)


def _zip_prefix(f: NPoly, g: NPoly, op) -> NPoly:
    k = max(f.threshold, g.threshold)
    return _make(k, [op(f(i), g(i)) for i in range(k)], op(f.tail, g.tail))


def npoly_add(f: NPoly, g: NPoly) -> NPoly:
    k = max(f.threshold, g.threshold)
    return _make(k, [f(i) + g(i) for i in range(k)], _poly_add(f.tail, g.tail))


def npoly_mul(f: NPoly, g: NPoly) -> NPoly:
    k = max(f.threshold, g.threshold)
    return _make(k, [f(i) * g(i) for i in range(k)], _poly_mul(f.tail, g.tail))


def npoly_sup(f: NPoly, g: NPoly) -> NPoly:
    diff = _poly_sub(f.tail, g.tail)
    if not diff:
        k = max(f.threshold, g.threshold)
        tail = f.tail
    else:
        k = max(f.threshold, g.threshold, _sign_horizon(diff))
        tail = f.tail if diff[-1] > 0 else g.tail
    return _make(k, [max(f(i), g(i)) for i in range(k)], tail)


def npoly_leq(f: NPoly, g: NPoly) -> bool:
    """Exact pointwise order: f(n) <= g(n) for every natural n."""
    diff = _poly_sub(g.tail, f.tail)
    if diff and diff[-1] < 0:
        return False
    horizon = max(f.threshold, g.threshold, _sign_horizon(diff) if diff else 0)
    return all(f(i) <= g(i) for i in range(horizon))


def npoly_sum(fs) -> NPoly:
    out = ZERO
    for f in fs:
        out = npoly_add(out, f)
    return out


def render_npoly(f: NPoly) -> str:
    tail = _render_poly(f.tail)
    if f.threshold == 0:
        return tail
    return f"prefix={list(f.prefix)}; tail={tail}"


def _render_poly(coeffs: tuple[int, ...]) -> str:
    if not coeffs:
        return "0"
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            parts.append(str(c))
        elif k == 1:
            parts.append("X" if c == 1 else f"{c}*X")
        else:
            parts.append(f"X^{k}" if c == 1 else f"{c}*X^{k}")
    return " + ".join(parts)
