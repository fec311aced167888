"""Integer type system and fixed-width arithmetic semantics.

All arithmetic in the supported language is defined over fixed-width
two's-complement integers.  The helpers in this module are the single
source of truth for widths, promotions, and wraparound; both the concrete
interpreter and the interval analyzer are built on top of them so that the
two agree bit-for-bit.
"""

from __future__ import annotations

from enum import Enum


class Ty(Enum):
    """Scalar types of the supported subset (plus void for functions)."""

    BOOL = ("bool", 1, False)
    CHAR = ("char", 8, True)
    INT = ("int", 32, True)
    UINT = ("unsigned", 32, False)
    VOID = ("void", 0, False)

    def __init__(self, cname: str, width: int, signed: bool):
        self.cname = cname
        self.width = width
        self.signed = signed

    @property
    def min(self) -> int:
        if self is Ty.VOID:
            raise ValueError("void has no value range")
        return -(1 << (self.width - 1)) if self.signed else 0

    @property
    def max(self) -> int:
        if self is Ty.VOID:
            raise ValueError("void has no value range")
        return (1 << (self.width - 1)) - 1 if self.signed else (1 << self.width) - 1

    @property
    def integral(self) -> bool:
        return self is not Ty.VOID


INT_MIN = Ty.INT.min
INT_MAX = Ty.INT.max
UINT_MAX = Ty.UINT.max

_BY_NAME = {t.cname: t for t in Ty}


def type_by_name(name: str) -> Ty | None:
    return _BY_NAME.get(name)


def wrap(value: int, ty: Ty) -> int:
    """Reduce an unbounded integer to the representable range of `ty`.

    This is plain bit truncation: keep the low `width` bits and reinterpret
    them in the type's signedness (two's complement for signed types).
    """
    mask = (1 << ty.width) - 1
    v = value & mask
    if ty.signed and v >= 1 << (ty.width - 1):
        v -= 1 << ty.width
    return v


def convert(value: int, ty: Ty) -> int:
    """C-style value conversion on assignment/initialization/argument passing.

    Conversion to bool tests for zero; all other conversions truncate.
    """
    if ty is Ty.BOOL:
        return 1 if value != 0 else 0
    return wrap(value, ty)


def promote(ty: Ty) -> Ty:
    """Integer promotion: bool and char widen to int."""
    return Ty.INT if ty in (Ty.BOOL, Ty.CHAR) else ty


def common_type(lt: Ty, rt: Ty) -> Ty:
    """Usual arithmetic conversions, simplified for the two 32-bit types."""
    lp, rp = promote(lt), promote(rt)
    return Ty.UINT if Ty.UINT in (lp, rp) else Ty.INT


def trunc_div(a: int, b: int) -> int:
    """Division truncating toward zero; division by zero is defined as 0."""
    if b == 0:
        return 0
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def c_mod(a: int, b: int) -> int:
    """Remainder matching trunc_div, so a == trunc_div(a,b)*b + c_mod(a,b).

    Remainder by zero is defined as the dividend (keeps the identity).
    """
    if b == 0:
        return a
    return a - trunc_div(a, b) * b


def shift_amount(v: int) -> int:
    # Shift counts are masked to the operand width, like most 32-bit hardware.
    return v & 31
