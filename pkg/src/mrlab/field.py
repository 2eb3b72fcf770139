"""Exact arithmetic over F_p and quadratic extensions F_p[X]/(X^2 + c1*X + c0).

Elements are handled in two forms.  Hot loops (linear algebra, enumeration)
work on *raw* integer codes: an element ``a0 + a1*X`` is stored as the int
``a0 + a1*p``, so the prime field is the special case ``a1 == 0`` and zero/one
are ``0``/``1`` in every field.  :class:`FieldElement` is the immutable,
operator-friendly wrapper used at API boundaries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

MERSENNE61 = (1 << 61) - 1
MAX_MODULUS = 1 << 64

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FieldError(ValueError):
    """Invalid field parameters or an undefined field operation."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24 (covers 64-bit)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_quadratic_residue(c: int, p: int) -> bool:
    """Euler's criterion for odd p; 0 counts as a square."""
    c %= p
    if c == 0 or p == 2:
        return True
    return pow(c, (p - 1) // 2, p) == 1


def smallest_nonresidue(p: int) -> int:
    if p == 2:
        raise FieldError("F_2 has no quadratic non-residue")
    c = 2
    while is_quadratic_residue(c, p):
        c += 1
    return c


@dataclass(frozen=True)
class FieldSpec:
    """F_p, or F_p[X]/(X^2 + c1*X + c0) when ``modulus == (c0, c1)``.

    Build instances through :func:`make_prime_field`,
    :func:`make_quadratic_extension` or :func:`make_extension`; they validate
    primality and irreducibility.
    """

    p: int
    modulus: tuple[int, int] | None = None

    @property
    def is_prime(self) -> bool:
        return self.modulus is None

    @property
    def order(self) -> int:
        return self.p if self.modulus is None else self.p * self.p

    @property
    def degree(self) -> int:
        return 1 if self.modulus is None else 2

    @cached_property
    def _reduction(self) -> tuple[int, int]:
        # X^2 = r0 + r1*X
        c0, c1 = self.modulus  # type: ignore[misc]
        return (-c0) % self.p, (-c1) % self.p

    # -- raw-code arithmetic ------------------------------------------------

    def split(self, x: int) -> tuple[int, int]:
        return divmod(x, self.p)[::-1] if self.modulus is not None else (x, 0)

    def join(self, a0: int, a1: int = 0) -> int:
        p = self.p
        if self.modulus is None:
            if a1 % p:
                raise FieldError(f"F_{p} has no X component")
            return a0 % p
        return a0 % p + (a1 % p) * p

    def add(self, x: int, y: int) -> int:
        p = self.p
        if self.modulus is None:
            return (x + y) % p
        return (x % p + y % p) % p + ((x // p + y // p) % p) * p

    def sub(self, x: int, y: int) -> int:
        p = self.p
        if self.modulus is None:
            return (x - y) % p
        return (x % p - y % p) % p + ((x // p - y // p) % p) * p

    def neg(self, x: int) -> int:
        p = self.p
        if self.modulus is None:
            return -x % p
        return -(x % p) % p + (-(x // p) % p) * p

    def mul(self, x: int, y: int) -> int:
        p = self.p
        if self.modulus is None:
            return x * y % p
        x1, x0 = divmod(x, p)
        y1, y0 = divmod(y, p)
        r0, r1 = self._reduction
        top = x1 * y1
        return (x0 * y0 + top * r0) % p + ((x0 * y1 + x1 * y0 + top * r1) % p) * p

    def inv(self, x: int) -> int:
        p = self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero in a field")
        if self.modulus is None:
            return pow(x, -1, p)
        x1, x0 = divmod(x, p)
        c0, c1 = self.modulus
        # conjugate of x0 + x1*X is (x0 - c1*x1) - x1*X; their product is the norm
        norm = (x0 * x0 - c1 * x0 * x1 + c0 * x1 * x1) % p
        ninv = pow(norm, -1, p)
        return ((x0 - c1 * x1) * ninv) % p + ((-x1 * ninv) % p) * p

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def power(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv(x), -e
        if self.modulus is None:
            return pow(x, e, self.p)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.order)

    def elements(self) -> range:
        return range(self.order)

    def generator_X(self) -> int:
        if self.modulus is None:
            raise FieldError("prime field has no adjoined X")
        return self.p

    # -- wrappers ------------------------------------------------------------

    def __call__(self, a0: int | FieldElement, a1: int = 0) -> FieldElement:
        if isinstance(a0, FieldElement):
            if a0.field != self:
                raise FieldError("element belongs to a different field")
            return a0
        return FieldElement(self, self.join(a0, a1))

    def element(self, a0: int, a1: int = 0) -> FieldElement:
        return self(a0, a1)

    def raw(self, value: int | FieldElement) -> int:
        """Coerce to a raw code.  Ints in [0, q) already are raw codes a0 + a1*p;
        any other int is read as an integer of the prime subfield."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value.code
        if 0 <= value < self.order:
            return value
        return value % self.p

    def __str__(self) -> str:
        from mrlab.formats import format_field

        return format_field(self)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    code: int

    @property
    def a0(self) -> int:
        return self.field.split(self.code)[0]

    @property
    def a1(self) -> int:
        return self.field.split(self.code)[1]

    def _other(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("operands belong to different fields")
            return other.code
        return other % self.field.p

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.code, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.power(self.code, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.code))

    def __int__(self) -> int:
        if self.a1:
            raise FieldError(f"{self} is not in the prime subfield")
        return self.a0

    def __str__(self) -> str:
        from mrlab.formats import format_element

        return format_element(self.field, self.code)

    __repr__ = __str__


def _check_modulus(p: int) -> None:
    if not isinstance(p, int) or p < 2:
        raise FieldError(f"modulus must be an integer >= 2, got {p!r}")
    if p >= MAX_MODULUS:
        raise FieldError(f"modulus {p} exceeds the 64-bit range")
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")


def make_prime_field(p: int) -> FieldSpec:
    _check_modulus(p)
    return FieldSpec(p)


def _has_root(p: int, c0: int, c1: int) -> bool:
    if p <= 10**6:
        return any((x * x + c1 * x + c0) % p == 0 for x in range(p))
    if p == 2:  # pragma: no cover - covered by the exhaustive branch
        return True
    disc = (c1 * c1 - 4 * c0) % p
    return is_quadratic_residue(disc, p)


def make_extension(p: int, c0: int, c1: int = 0) -> FieldSpec:
    """F_p[X]/(X^2 + c1*X + c0); the polynomial must be irreducible."""
    _check_modulus(p)
    c0, c1 = c0 % p, c1 % p
    if _has_root(p, c0, c1):
        raise FieldError(f"X^2 + {c1}X + {c0} is reducible over F_{p}")
    return FieldSpec(p, (c0, c1))


def make_quadratic_extension(p: int, c: int | FieldElement) -> FieldSpec:
    """F_p[X]/(X^2 - c) for a quadratic non-residue c."""
    _check_modulus(p)
    if p == 2:
        raise FieldError("X^2 - c is never irreducible over F_2")
    if isinstance(c, FieldElement):
        c = int(c)
    if is_quadratic_residue(c, p):
        raise FieldError(f"{c % p} is a square mod {p}")
    return FieldSpec(p, ((-c) % p, 0))


def find_cube_root_of_unity(field: FieldSpec) -> FieldElement:
    """Smallest integer z > 1 in F_p with z^3 = 1."""
    p = field.p
    if p % 3 != 1:
        raise FieldError(f"F_{p} has no nontrivial cube root of unity (p mod 3 = {p % 3})")
    z = 2
    while pow(z, 3, p) != 1:
        z += 1
    return field(z)


_ARITH = {
    "add": lambda F, x, y: F.add(x, y),
    "sub": lambda F, x, y: F.sub(x, y),
    "mul": lambda F, x, y: F.mul(x, y),
    "inv": lambda F, x, y: F.inv(x),
    "neg": lambda F, x, y: F.neg(x),
}


def arith(op: str, x: FieldElement, y: FieldElement | None = None) -> FieldElement:
    """Dispatch one of add/sub/mul/inv/neg; unary ops ignore ``y``."""
    try:
        fn = _ARITH[op]
    except KeyError:
        raise FieldError(f"unknown operation {op!r}") from None
    if y is not None and y.field != x.field:
        raise FieldError("operands belong to different fields")
    return FieldElement(x.field, fn(x.field, x.code, y.code if y is not None else 0))


GENERIC_FIELD = FieldSpec(MERSENNE61)
