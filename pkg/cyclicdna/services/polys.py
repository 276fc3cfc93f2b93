"""
Polynomials over F2 and over R, factorization of x^n - 1, and reciprocal machinery.

PolyF2 packs coefficients into an int: bit i is the coefficient of x^i, so the
zero polynomial is 0 and every nonzero polynomial is monic.
"""

from __future__ import annotations

import itertools
import logging
import math
import re
from dataclasses import dataclass
from functools import cache
from typing import TypeVar

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf, gf_irreducible_p

from cyclicdna.services.ring import RingElement, mul_value

logger = logging.getLogger(__name__)

_BITS_RE = re.compile(r"^[01]+$")
_TERM_RE = re.compile(r"^(?:(?P<const>[01])|x(?:(?:\^|\*\*)(?P<exp>\d+))?)$")


class PolyParseError(ValueError):
    """Raised when text does not describe a polynomial over F2."""


def _degree(bits: int) -> int:
    return bits.bit_length() - 1


def _mul(a: int, b: int) -> int:
    if a < b:
        a, b = b, a
    c = 0
    while b:
        if b & 1:
            c ^= a
        a <<= 1
        b >>= 1
    return c


def _divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    m = _degree(a)
    n = _degree(b)
    if m < n:
        return 0, a
    b <<= m - n
    q = 0
    for i in range(m - n + 1):
        q <<= 1
        if (a >> (m - i)) & 1:
            a ^= b
            q ^= 1
        b >>= 1
    return q, a


def _reverse_bits(bits: int) -> int:
    if bits == 0:
        return 0
    return int(format(bits, "b")[::-1], 2)


@dataclass(frozen=True, order=True, slots=True)
class PolyF2:
    """Polynomial over F2 in packed bit form."""

    bits: int

    def __post_init__(self) -> None:
        """Reject negative encodings."""
        if self.bits < 0:
            raise ValueError("PolyF2 bits must be nonnegative")

    @classmethod
    def zero(cls) -> PolyF2:
        """The zero polynomial."""
        return cls(0)

    @classmethod
    def one(cls) -> PolyF2:
        """The constant 1."""
        return cls(1)

    @classmethod
    def monomial(cls, k: int) -> PolyF2:
        """x^k."""
        return cls(1 << k)

    @classmethod
    def from_coeffs(cls, coeffs: list[int] | tuple[int, ...]) -> PolyF2:
        """Build from an ascending coefficient sequence."""
        return cls(sum((c & 1) << i for i, c in enumerate(coeffs)))

    @classmethod
    def parse(cls, text: str) -> PolyF2:
        """Parse an ascending bit string ("1101") or a human form ("1+x+x^3")."""
        cleaned = text.strip().replace(" ", "")
        if not cleaned:
            raise PolyParseError("Empty polynomial")
        if _BITS_RE.match(cleaned):
            return cls.from_coeffs([int(c) for c in cleaned])

        bits = 0
        for term in cleaned.replace("-", "+").split("+"):
            match = _TERM_RE.match(term)
            if not match:
                raise PolyParseError(f"Bad term {term!r} in polynomial {text!r}")
            if match.group("const") is not None:
                bits ^= int(match.group("const"))
            else:
                bits ^= 1 << int(match.group("exp") or 1)
        return cls(bits)

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial."""
        return None if self.bits == 0 else _degree(self.bits)

    def is_zero(self) -> bool:
        """True for the zero polynomial."""
        return self.bits == 0

    def coeffs(self) -> tuple[int, ...]:
        """Ascending coefficients without trailing zeros."""
        return tuple((self.bits >> i) & 1 for i in range(self.bits.bit_length()))

    def evaluate_at_one(self) -> int:
        """f(1) in F2."""
        return self.bits.bit_count() & 1

    def __add__(self, other: PolyF2) -> PolyF2:
        return PolyF2(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: PolyF2) -> PolyF2:
        return PolyF2(_mul(self.bits, other.bits))

    def __divmod__(self, other: PolyF2) -> tuple[PolyF2, PolyF2]:
        q, r = _divmod(self.bits, other.bits)
        return PolyF2(q), PolyF2(r)

    def __floordiv__(self, other: PolyF2) -> PolyF2:
        return divmod(self, other)[0]

    def __mod__(self, other: PolyF2) -> PolyF2:
        return divmod(self, other)[1]

    def __pow__(self, exponent: int) -> PolyF2:
        result = 1
        base = self.bits
        while exponent:
            if exponent & 1:
                result = _mul(result, base)
            base = _mul(base, base)
            exponent >>= 1
        return PolyF2(result)

    def divides(self, other: PolyF2) -> bool:
        """True iff self | other."""
        return (other % self).is_zero()

    def reciprocal(self) -> PolyF2:
        """x^deg(f) * f(1/x); drops degree when f(0) = 0."""
        return PolyF2(_reverse_bits(self.bits))

    def is_self_reciprocal(self) -> bool:
        """True iff f equals its reciprocal."""
        return self == self.reciprocal()

    def to_bits(self) -> str:
        """Ascending bit string; "0" for zero."""
        return "".join(str(c) for c in self.coeffs()) or "0"

    def to_human(self) -> str:
        """Ascending human form, e.g. "1+x+x^3"."""
        if self.bits == 0:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs()):
            if c:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return "+".join(terms)

    def __str__(self) -> str:
        return self.to_human()


def poly_add(f: PolyF2, g: PolyF2) -> PolyF2:
    """f + g over F2."""
    return f + g


def poly_mul(f: PolyF2, g: PolyF2) -> PolyF2:
    """f * g over F2."""
    return f * g


def poly_divmod(f: PolyF2, g: PolyF2) -> tuple[PolyF2, PolyF2]:
    """Quotient and remainder; raises ZeroDivisionError for g = 0."""
    return divmod(f, g)


def poly_pow(f: PolyF2, k: int) -> PolyF2:
    """f^k by repeated squaring."""
    if k < 0:
        raise ValueError(f"Exponent must be >= 0, got {k}")
    return f**k


def poly_mod_xn(f: PolyF2, n: int) -> PolyF2:
    """f mod x^n - 1, folding exponents mod n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = 0
    bits = f.bits
    i = 0
    while bits:
        if bits & 1:
            out ^= 1 << (i % n)
        bits >>= 1
        i += 1
    return PolyF2(out)


def poly_gcd(f: PolyF2, g: PolyF2) -> PolyF2:
    """Monic gcd (every nonzero F2 polynomial is monic)."""
    a, b = f.bits, g.bits
    while b:
        a, b = b, _divmod(a, b)[1]
    return PolyF2(a)


def xn_minus_1(n: int) -> PolyF2:
    """x^n - 1 (= x^n + 1 over F2)."""
    return PolyF2((1 << n) | 1)


def ideal_polynomial(n: int) -> PolyF2:
    """1 + x + ... + x^(n-1) = (x^n - 1)/(x - 1)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return PolyF2((1 << n) - 1)


def is_self_reciprocal(f: PolyF2) -> bool:
    """True iff f = f*."""
    return f.is_self_reciprocal()


P = TypeVar("P", "PolyF2", "PolyR")


def reciprocal(f: P) -> P:
    """Reciprocal polynomial x^deg(f) * f(1/x) over F2 or R."""
    return f.reciprocal()


def _split_two_adic(n: int) -> tuple[int, int]:
    s = 0
    while n % 2 == 0:
        n //= 2
        s += 1
    return n, s


def _require_odd(m: int) -> None:
    if m < 1 or m % 2 == 0:
        raise ValueError(f"m must be an odd positive integer, got {m}")


def cyclotomic_cosets(m: int) -> list[tuple[int, ...]]:
    """Orbits of {0..m-1} under doubling mod m, each listed in doubling order."""
    _require_odd(m)
    seen: set[int] = set()
    cosets = []
    for start in range(m):
        if start in seen:
            continue
        orbit = []
        k = start
        while k not in orbit:
            orbit.append(k)
            k = (2 * k) % m
        seen.update(orbit)
        cosets.append(tuple(orbit))
    return cosets


def negacyclic_condition(m: int) -> tuple[bool, int | None]:
    """Whether some 2^i = -1 (mod m), with the smallest witness i >= 1."""
    _require_odd(m)
    if m == 1:
        return True, 1
    power = 1
    for i in range(1, m + 1):
        power = (power * 2) % m
        if power == m - 1:
            return True, i
        if power == 1:
            break
    return False, None


@dataclass(frozen=True)
class Factorization:
    """x^n - 1 = prod g_i^(2^s) with the g_i distinct irreducible factors of x^m - 1."""

    n: int
    s: int
    m: int
    factors: tuple[tuple[PolyF2, int], ...]

    def product(self) -> PolyF2:
        """Multiply the factors back together."""
        result = PolyF2.one()
        for g, mult in self.factors:
            result = result * g**mult
        return result

    @property
    def irreducibles(self) -> tuple[PolyF2, ...]:
        """The distinct g_i."""
        return tuple(g for g, _ in self.factors)

    @property
    def multiplicity(self) -> int:
        """2^s, shared by every factor."""
        return 1 << self.s


def _from_sympy(coeffs: list) -> PolyF2:
    # sympy dense lists are descending
    return PolyF2.from_coeffs([int(c) % 2 for c in reversed(coeffs)])


def _to_sympy(f: PolyF2) -> list:
    return [ZZ(c) for c in reversed(f.coeffs())]


@cache
def factor_xn_minus_1(n: int) -> Factorization:
    """Factor x^n - 1 over F2; the same factorization holds over R."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    m, s = _split_two_adic(n)
    _, sympy_factors = gf_factor_sqf(_to_sympy(xn_minus_1(m)), 2, ZZ)
    irreducibles = sorted(_from_sympy(f) for f in sympy_factors)
    factorization = Factorization(n=n, s=s, m=m, factors=tuple((g, 1 << s) for g in irreducibles))
    logger.debug("Factored x^%d-1 into %d irreducibles (m=%d, s=%d)", n, len(irreducibles), m, s)
    return factorization


def is_irreducible(f: PolyF2) -> bool:
    """Irreducibility over F2."""
    if f.degree is None or f.degree < 1:
        return False
    return bool(gf_irreducible_p(_to_sympy(f), 2, ZZ))


def divisors_of_xn_minus_1(n: int) -> list[PolyF2]:
    """All monic divisors of x^n - 1, from exponent vectors over the factorization."""
    fac = factor_xn_minus_1(n)
    ranges = [range(mult + 1) for _, mult in fac.factors]
    divisors = []
    for exponents in itertools.product(*ranges):
        d = PolyF2.one()
        for (g, _), e in zip(fac.factors, exponents, strict=True):
            d = d * g**e
        divisors.append(d)
    return sorted(divisors)


def chain_count(n: int) -> int:
    """Number of divisor chains f3 | f2 | f1 | f0 | x^n - 1."""
    fac = factor_xn_minus_1(n)
    return math.prod(math.comb(mult + 4, 4) for _, mult in fac.factors)


@dataclass(frozen=True, slots=True)
class PolyR:
    """Polynomial over R, ascending coefficients, no trailing zeros."""

    coeffs: tuple[RingElement, ...]

    def __post_init__(self) -> None:
        """Enforce canonical form."""
        if self.coeffs and not self.coeffs[-1]:
            raise ValueError("PolyR coefficients must not end in zero; use PolyR.of()")

    @classmethod
    def of(cls, values: list[int] | tuple[int, ...] | list[RingElement] | tuple[RingElement, ...]) -> PolyR:
        """Build from encodings or elements, stripping trailing zeros."""
        elems = [v if isinstance(v, RingElement) else RingElement(v) for v in values]
        while elems and not elems[-1]:
            elems.pop()
        return cls(tuple(elems))

    @classmethod
    def embed(cls, f: PolyF2) -> PolyR:
        """Lossless embedding F2[x] -> R[x]."""
        return cls.of(list(f.coeffs()))

    @property
    def degree(self) -> int | None:
        """Degree, or None for zero."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        """True for the zero polynomial."""
        return not self.coeffs

    def values(self) -> tuple[int, ...]:
        """Coefficient encodings."""
        return tuple(c.value for c in self.coeffs)

    def __add__(self, other: PolyR) -> PolyR:
        a, b = self.values(), other.values()
        size = max(len(a), len(b))
        a += (0,) * (size - len(a))
        b += (0,) * (size - len(b))
        return PolyR.of([x ^ y for x, y in zip(a, b, strict=True)])

    __sub__ = __add__

    def __mul__(self, other: PolyR) -> PolyR:
        a, b = self.values(), other.values()
        if not a or not b:
            return PolyR(())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] ^= mul_value(x, y)
        return PolyR.of(out)

    def scale(self, r: RingElement) -> PolyR:
        """r * f."""
        return PolyR.of([mul_value(r.value, c) for c in self.values()])

    def mod_xn_minus_1(self, n: int) -> PolyR:
        """Reduce modulo x^n - 1 by folding exponents mod n."""
        out = [0] * n
        for i, c in enumerate(self.values()):
            out[i % n] ^= c
        return PolyR.of(out)

    def reciprocal(self) -> PolyR:
        """Coefficient sequence reversed, then re-canonicalized."""
        return PolyR.of(list(reversed(self.coeffs)))


def bar_map(f: PolyR) -> PolyF2:
    """Reduction mod (u+1): each coefficient maps to the parity of its bits."""
    return PolyF2.from_coeffs([c.value.bit_count() & 1 for c in f.coeffs])
