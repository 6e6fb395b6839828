"""
Exact arithmetic in GF(p^k) and in quadratic towers GF(q) < GF(q^2).

Elements are stored as integer codes ``sum(c_i * p**i)`` of their reduced
coefficient tuples, so whole matrices are plain ``numpy`` integer arrays and
every operation below works elementwise on arrays as well as on scalars.
Multiplication goes through exp/log tables built from a primitive element;
addition uses a full table for small fields and digit-wise arithmetic
otherwise.

A tower element ``u + w*v`` (``u, v`` in GF(q)) has code ``u + q*v``.  The
embedding of GF(q) is therefore the identity on codes and the
``(u, v)``-decomposition is a single ``divmod``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from gfregular.core import limits
from gfregular.core.errors import FieldError, FieldMismatchError
from gfregular.core.types import ArithOp

logger = logging.getLogger(__name__)

CodeArray = Union[int, np.ndarray]

# Fields up to this order get full addition / multiplication tables.
_TABLE_BOUND: int = 1024


# ---------------------------------------------------------------------------
# Integer helpers
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    """Trial-division primality test (desk-scale inputs only)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``.

    Raises:
        FieldError: If *q* is not a prime power.
    """
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, k


def _as_codes(a: CodeArray) -> np.ndarray:
    return np.asarray(a, dtype=np.int64)


# ---------------------------------------------------------------------------
# Polynomials over GF(p), coefficient lists constant term first
# ---------------------------------------------------------------------------

def _poly_rem(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of *num* modulo the monic polynomial *den* over GF(p)."""
    rem = list(num)
    d = len(den) - 1
    for i in range(len(rem) - 1, d - 1, -1):
        c = rem[i] % p
        if c:
            for j in range(d + 1):
                rem[i - d + j] = (rem[i - d + j] - c * den[j]) % p
    return [c % p for c in rem[:d]]


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Exhaustive factor scan: no monic factor of degree 1..k//2 divides."""
    k = len(coeffs) - 1
    poly = list(coeffs)
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_poly_rem(poly, list(low) + [1], p)):
                return False
    return True


# ---------------------------------------------------------------------------
# Field base class
# ---------------------------------------------------------------------------

class Field:
    """Table machinery shared by prime-power fields and tower fields.

    Subclasses provide ``p``, ``degree`` (over the prime field) and
    ``_mul_scalar``; everything else is derived lazily and cached.
    """

    p: int

    @property
    def degree(self) -> int:
        raise NotImplementedError

    @property
    def order(self) -> int:
        return self.p ** self.degree

    def _mul_scalar(self, a: int, b: int) -> int:
        raise NotImplementedError

    def describe(self) -> str:
        return f"GF({self.order})"

    def header(self) -> str:
        raise NotImplementedError

    # ------------------------------------------------------------------
    # Lazily built tables
    # ------------------------------------------------------------------

    @cached_property
    def _weights(self) -> np.ndarray:
        return np.array([self.p ** i for i in range(self.degree)], dtype=np.int64)

    def _digits(self, a: np.ndarray) -> np.ndarray:
        return (a[..., None] // self._weights) % self.p

    def _from_digits(self, d: np.ndarray) -> np.ndarray:
        return (d * self._weights).sum(axis=-1)

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return self._from_digits((-self._digits(np.arange(self.order, dtype=np.int64))) % self.p)

    @cached_property
    def _add_table(self) -> Optional[np.ndarray]:
        if self.order > _TABLE_BOUND:
            return None
        d = self._digits(np.arange(self.order, dtype=np.int64))
        return self._from_digits((d[:, None, :] + d[None, :, :]) % self.p)

    @cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.order
        if n == 2:
            return np.array([1, 1], dtype=np.int64), np.zeros(2, dtype=np.int64)
        for g in range(2, n):
            powers = [1]
            x = g
            while x != 1 and len(powers) < n:
                if x == 0:
                    raise FieldError(f"{self.header()}: modulus is reducible")
                powers.append(x)
                x = self._mul_scalar(x, g)
            if x == 1 and len(powers) == n - 1:
                exp = np.array(powers + powers, dtype=np.int64)
                log = np.zeros(n, dtype=np.int64)
                log[exp[: n - 1]] = np.arange(n - 1, dtype=np.int64)
                logger.debug("%s: primitive element code %d", self.describe(), g)
                return exp, log
            if x != 1:
                raise FieldError(f"{self.header()}: modulus is reducible")
        raise FieldError(f"{self.header()}: no primitive element found")

    @cached_property
    def mul_table(self) -> np.ndarray:
        """Full multiplication table (small fields only)."""
        if self.order > _TABLE_BOUND:
            raise FieldError(f"{self.describe()} is too large for a full multiplication table")
        x = np.arange(self.order, dtype=np.int64)
        return self.mul(x[:, None], x[None, :])

    @cached_property
    def scalar_tables(self) -> tuple[list[list[int]], list[list[int]], list[int]]:
        """``(add, mul, inv)`` as nested Python lists for tight scalar loops."""
        add = self._add_table
        if add is None:
            raise FieldError(f"{self.describe()} is too large for scalar tables")
        inv = [0] + self.inv(np.arange(1, self.order, dtype=np.int64)).tolist()
        return add.tolist(), self.mul_table.tolist(), inv

    # ------------------------------------------------------------------
    # Elementwise arithmetic on codes
    # ------------------------------------------------------------------

    def check_codes(self, a: CodeArray) -> np.ndarray:
        a = _as_codes(a)
        if a.size and (a.min() < 0 or a.max() >= self.order):
            raise FieldError(f"element code out of range for {self.describe()}")
        return a

    def add(self, a: CodeArray, b: CodeArray) -> np.ndarray:
        a, b = _as_codes(a), _as_codes(b)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        table = self._add_table
        if table is not None:
            return table[a, b]
        return self._from_digits((self._digits(a) + self._digits(b)) % self.p)

    def neg(self, a: CodeArray) -> np.ndarray:
        return self._neg_table[_as_codes(a)]

    def sub(self, a: CodeArray, b: CodeArray) -> np.ndarray:
        return self.add(a, self.neg(b))

    def mul(self, a: CodeArray, b: CodeArray) -> np.ndarray:
        a, b = _as_codes(a), _as_codes(b)
        exp, log = self._exp_log
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a: CodeArray) -> np.ndarray:
        a = _as_codes(a)
        if np.any(a == 0):
            raise ZeroDivisionError(f"zero has no inverse in {self.describe()}")
        exp, log = self._exp_log
        return exp[(self.order - 1 - log[a]) % (self.order - 1)]

    def div(self, a: CodeArray, b: CodeArray) -> np.ndarray:
        return self.mul(a, self.inv(b))

    def power(self, a: CodeArray, e: int) -> np.ndarray:
        a = _as_codes(a)
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return np.ones_like(a)
        exp, log = self._exp_log
        out = exp[(log[a] * e) % (self.order - 1)]
        return np.where(a == 0, 0, out)

    # ------------------------------------------------------------------
    # Elements and subfields
    # ------------------------------------------------------------------

    def elem(self, code: int) -> "Elem":
        return Elem(self, int(code))

    def elements(self) -> range:
        return range(self.order)

    def subfield_codes(self, order: int) -> np.ndarray:
        """Sorted codes of the subfield with *order* elements (roots of x^order - x)."""
        p, d = prime_power(order)
        if p != self.p or self.degree % d != 0:
            raise FieldMismatchError(f"{self.describe()} has no subfield of order {order}")
        x = np.arange(self.order, dtype=np.int64)
        return np.flatnonzero(self.power(x, order) == x)

    def in_subfield(self, a: CodeArray, order: int) -> np.ndarray:
        """Boolean mask: which codes of *a* lie in the subfield of given order."""
        a = _as_codes(a)
        return self.power(a, order) == a

    def coefficients(self, code: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._digits(np.asarray(code, dtype=np.int64)))


# ---------------------------------------------------------------------------
# GF(p^k) with a polynomial modulus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec(Field):
    """GF(p^k) as GF(p)[x] / (modulus)."""

    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise FieldError(f"degree must be positive, got {self.k}")
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise FieldError(f"modulus {self.modulus} is not monic of degree {self.k}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise FieldError(f"modulus {self.modulus} has coefficients outside GF({self.p})")

    @property
    def degree(self) -> int:
        return self.k

    def header(self) -> str:
        return " ".join(["field", str(self.p), str(self.k)] + [str(c) for c in self.modulus])

    def _mul_scalar(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        pa = [(a // p ** i) % p for i in range(k)]
        pb = [(b // p ** i) % p for i in range(k)]
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(pa):
            if x:
                for j, y in enumerate(pb):
                    prod[i + j] += x * y
        red = _poly_rem(prod, list(self.modulus), p) if k > 1 else [prod[0] % p]
        return sum(c * p ** i for i, c in enumerate(red))


def make_field(p: int, k: int = 1) -> FieldSpec:
    """Canonical GF(p^k): the lexicographically smallest monic irreducible modulus.

    Raises:
        FieldError: If *p* is not prime or *k* < 1.
        SizeBoundError: If ``p**k`` exceeds the configured field bound.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if k < 1:
        raise FieldError(f"degree must be positive, got {k}")
    limits.require(p ** k, limits.active().max_field_order, "field order")
    return _canonical_field(p, k)


@lru_cache(maxsize=None)
def _canonical_field(p: int, k: int) -> FieldSpec:
    for low in itertools.product(range(p), repeat=k):
        coeffs = tuple(low) + (1,)
        if _is_irreducible(coeffs, p):
            logger.debug("GF(%d^%d): modulus %s", p, k, coeffs)
            return FieldSpec(p, k, coeffs)
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


def field_of_order(q: int) -> FieldSpec:
    """Canonical field with *q* elements."""
    p, k = prime_power(q)
    return make_field(p, k)


# ---------------------------------------------------------------------------
# Quadratic towers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TowerField(Field):
    """GF(q^2) = GF(q)(w) with w^2 = s + t*w; code of ``u + w*v`` is ``u + q*v``."""

    base: FieldSpec
    s: int
    t: int

    @property
    def p(self) -> int:  # type: ignore[override]
        return self.base.p

    @property
    def degree(self) -> int:
        return 2 * self.base.degree

    @property
    def q(self) -> int:
        return self.base.order

    @property
    def omega(self) -> int:
        return self.base.order

    @property
    def ext(self) -> "ExtSpec":
        return ExtSpec(self.base, self)

    def describe(self) -> str:
        return f"GF({self.order})/GF({self.q})"

    def header(self) -> str:
        return f"ext {self.base.p} {self.base.k} {self.s} {self.t}"

    def _mul_scalar(self, a: int, b: int) -> int:
        base, q = self.base, self.base.order
        v1, u1 = divmod(a, q)
        v2, u2 = divmod(b, q)
        vv = int(base.mul(v1, v2))
        u = int(base.add(base.mul(u1, u2), base.mul(self.s, vv)))
        v = int(base.add(base.add(base.mul(u1, v2), base.mul(u2, v1)), base.mul(self.t, vv)))
        return u + q * v

    def split(self, w: CodeArray) -> tuple[np.ndarray, np.ndarray]:
        """Codes of ``(u, v)`` with ``w = u + w*v``."""
        w = _as_codes(w)
        return w % self.q, w // self.q

    def join(self, u: CodeArray, v: CodeArray) -> np.ndarray:
        return _as_codes(u) + self.q * _as_codes(v)


@dataclass(frozen=True)
class ExtSpec:
    """A quadratic extension GF(q^2) over GF(q), seen through the basis {1, w}."""

    base: FieldSpec
    field: TowerField

    @property
    def q(self) -> int:
        return self.base.order

    @property
    def s(self) -> int:
        return self.field.s

    @property
    def t(self) -> int:
        return self.field.t

    @property
    def omega(self) -> "Elem":
        return self.field.elem(self.field.omega)

    def embed(self, a: "Elem") -> "Elem":
        if a.field != self.base:
            raise FieldMismatchError(f"{a!r} is not an element of {self.base.describe()}")
        return self.field.elem(a.code)

    def decompose(self, w: "Elem") -> tuple["Elem", "Elem"]:
        """The unique ``(u, v)`` over GF(q) with ``w = u + w*v``."""
        if w.field != self.field:
            raise FieldMismatchError(f"{w!r} is not an element of {self.field.describe()}")
        v, u = divmod(w.code, self.q)
        return self.base.elem(u), self.base.elem(v)

    def in_subfield(self, w: CodeArray) -> np.ndarray:
        return _as_codes(w) < self.q


def quadratic_extension(base: FieldSpec) -> ExtSpec:
    """GF(q^2) over *base*, from the smallest irreducible x^2 + c1*x + c0.

    The returned constants satisfy ``w^2 = s + t*w`` with ``t = -c1`` and
    ``s = -c0``.
    """
    limits.require(base.order ** 2, limits.active().max_field_order, "field order")
    return _quadratic_extension(base)


@lru_cache(maxsize=None)
def _quadratic_extension(base: FieldSpec) -> ExtSpec:
    x = np.arange(base.order, dtype=np.int64)
    squares = base.mul(x, x)
    for c0, c1 in itertools.product(range(base.order), repeat=2):
        values = base.add(base.add(squares, base.mul(c1, x)), c0)
        if np.all(values != 0):
            s, t = int(base.neg(c0)), int(base.neg(c1))
            logger.debug("%s: w^2 = %d + %d*w", base.describe(), s, t)
            return ExtSpec(base, TowerField(base, s, t))
    raise FieldError(f"no irreducible quadratic over {base.describe()}")  # pragma: no cover


def tower(q: int) -> ExtSpec:
    """Shorthand for ``quadratic_extension(field_of_order(q))``."""
    return quadratic_extension(field_of_order(q))


# ---------------------------------------------------------------------------
# Element wrapper
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Elem:
    """A single field element with operator overloads."""

    field: Field
    code: int

    def __post_init__(self) -> None:
        if not 0 <= self.code < self.field.order:
            raise FieldError(f"code {self.code} out of range for {self.field.describe()}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coefficients(self.code)

    def _other(self, other: "Elem") -> int:
        if not isinstance(other, Elem):
            raise TypeError(f"expected Elem, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(
                f"cannot combine {self.field.describe()} with {other.field.describe()}"
            )
        return other.code

    def _wrap(self, code: CodeArray) -> "Elem":
        return Elem(self.field, int(code))

    def __add__(self, other: "Elem") -> "Elem":
        return self._wrap(self.field.add(self.code, self._other(other)))

    def __sub__(self, other: "Elem") -> "Elem":
        return self._wrap(self.field.sub(self.code, self._other(other)))

    def __mul__(self, other: "Elem") -> "Elem":
        return self._wrap(self.field.mul(self.code, self._other(other)))

    def __truediv__(self, other: "Elem") -> "Elem":
        return self._wrap(self.field.div(self.code, self._other(other)))

    def __neg__(self) -> "Elem":
        return self._wrap(self.field.neg(self.code))

    def __pow__(self, e: int) -> "Elem":
        return self._wrap(self.field.power(self.code, e))

    def inverse(self) -> "Elem":
        return self._wrap(self.field.inv(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        return f"{self.field.describe()}[{self.code}]"


def elem_arith(a: Elem, b: Optional[Union[Elem, int]], op: ArithOp) -> Elem:
    """Dispatch one field operation; *b* is an exponent for ``Pow`` and unused for ``Inv``."""
    if op == ArithOp.Add:
        return a + b
    if op == ArithOp.Sub:
        return a - b
    if op == ArithOp.Mul:
        return a * b
    if op == ArithOp.Div:
        return a / b
    if op == ArithOp.Inv:
        return a.inverse()
    if op == ArithOp.Pow:
        if not isinstance(b, int):
            raise TypeError("Pow expects an integer exponent")
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def field_from_header(tokens: Sequence[str]) -> Field:
    """Rebuild a field from the tokens of its :meth:`Field.header` line.

    Raises:
        FieldError: Unknown keyword, non-integer token, or a reducible modulus.
    """
    if not tokens or tokens[0] not in ("field", "ext"):
        raise FieldError("header must start with 'field' or 'ext'")
    try:
        values = [int(tok) for tok in tokens[1:]]
    except ValueError:
        raise FieldError(f"non-integer token in header {' '.join(tokens)!r}") from None
    if tokens[0] == "field":
        if len(values) < 2:
            raise FieldError("field header needs p, k and the modulus coefficients")
        p, k, modulus = values[0], values[1], tuple(values[2:])
        spec = FieldSpec(p, k, modulus)
        if k > 1 and not _is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        limits.require(spec.order, limits.active().max_field_order, "field order")
        return make_field(p, k) if modulus == make_field(p, k).modulus else spec
    if len(values) != 4:
        raise FieldError("ext header is 'ext p k s t'")
    p, k, s, t = values
    base = make_field(p, k)
    if not (0 <= s < base.order and 0 <= t < base.order):
        raise FieldError(f"tower constants ({s}, {t}) lie outside GF({base.order})")
    # w^2 = s + t*w must have no root in the base field.
    x = np.arange(base.order, dtype=np.int64)
    if np.any(base.sub(base.mul(x, x), base.add(base.mul(t, x), s)) == 0):
        raise FieldError(f"x^2 - {t}x - {s} is reducible over GF({base.order})")
    limits.require(base.order ** 2, limits.active().max_field_order, "field order")
    canonical = quadratic_extension(base).field
    return canonical if (canonical.s, canonical.t) == (s, t) else TowerField(base, s, t)
