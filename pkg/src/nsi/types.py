"""Object types of the calculus.

Types are immutable and compared structurally; structural equality is the
only type equality.  The ground types are the resource type (diamond), the
booleans, and the unbounded-numeral type iota.  Composite types are the
linear arrow, the tensor (both components usable), the ordinary product
(one component usable), lists, and binary labeled trees.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Type:
    pass


@dataclass(frozen=True)
class Diamond(Type):
    pass


@dataclass(frozen=True)
class Bool(Type):
    pass


@dataclass(frozen=True)
class Iota(Type):
    pass


@dataclass(frozen=True)
class Arrow(Type):
    arg: Type
    res: Type


@dataclass(frozen=True)
class Tensor(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class Product(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class ListT(Type):
    elem: Type


@dataclass(frozen=True)
class TreeT(Type):
    label: Type
    leaf: Type


DIA = Diamond()
BOOL = Bool()
IOTA = Iota()


def arrows(*tys: Type) -> Type:
    """Right-nested arrow type: arrows(a, b, c) == a -o (b -o c)."""
    if not tys:
        raise ValueError("arrows() needs at least one type")
    out = tys[-1]
    for ty in reversed(tys[:-1]):
        out = Arrow(ty, out)
    return out


# surface / diagnostic rendering; precedence: -o (lowest) < (x) < * < atoms
def show_type(ty: Type) -> str:
    return _show(ty, 0)


def _show(ty: Type, level: int) -> str:
    match ty:
        case Diamond():
            return "Dia"
        case Bool():
            return "B"
        case Iota():
            return "I"
        case ListT(elem):
            return f"L({_show(elem, 0)})"
        case TreeT(label, leaf):
            return f"T({_show(label, 0)}, {_show(leaf, 0)})"
        case Arrow(a, r):
            s = f"{_show(a, 1)} -o {_show(r, 0)}"
            return f"({s})" if level > 0 else s
        case Tensor(a, b):
            s = f"{_show(a, 2)} (x) {_show(b, 1)}"
            return f"({s})" if level > 1 else s
        case Product(a, b):
            s = f"{_show(a, 3)} * {_show(b, 2)}"
            return f"({s})" if level > 2 else s
    raise TypeError(f"unknown type: {ty!r}")
