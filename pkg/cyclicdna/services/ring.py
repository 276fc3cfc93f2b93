"""
Exact arithmetic in R = F2[u]/(u^4 - 1) and the pair map between R and dinucleotides.

An element a0 + a1*u + a2*u^2 + a3*u^3 is stored by its canonical 4-bit encoding,
with a0 as the least-significant bit (so 0x3 is 1+u and 0xF is 1+u+u^2+u^3).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache
from typing import NewType

ORDER = 16
_MASK = 0xF

ZERO = 0x0
ONE = 0x1
U = 0x2
ONE_PLUS_U = 0x3
ONE_PLUS_U2 = 0x5
# 1+u+u^2+u^3, which is also (1+u)^3
ALL_ONES = 0xF

Dinucleotide = NewType("Dinucleotide", str)

_COMPLEMENT_LETTER = {"A": "T", "T": "A", "C": "G", "G": "C"}

# value -> dinucleotide; experimental assignment, not derivable
_PAIR_BY_VALUE: tuple[str, ...] = (
    "GG",  # 0
    "GT",  # 1
    "AG",  # u
    "AT",  # 1+u
    "TG",  # u^2
    "GC",  # 1+u^2
    "AA",  # u+u^2
    "CT",  # 1+u+u^2
    "GA",  # u^3
    "TT",  # 1+u^3
    "CG",  # u+u^3
    "AC",  # 1+u+u^3
    "TA",  # u^2+u^3
    "TC",  # 1+u^2+u^3
    "CA",  # u+u^2+u^3
    "CC",  # 1+u+u^2+u^3
)
_VALUE_BY_PAIR: dict[str, int] = {pair: value for value, pair in enumerate(_PAIR_BY_VALUE)}

_HEX_RE = re.compile(r"^[0-9a-fA-F]$")
_TERM_RE = re.compile(r"^(?:(?P<one>1)|u(?:\^(?P<exp>\d+))?)$")


class RingParseError(ValueError):
    """Raised when text does not describe an element of R or a dinucleotide."""


@dataclass(frozen=True, order=True, slots=True)
class RingElement:
    """Element of R = F2[u]/(u^4 - 1)."""

    value: int

    def __post_init__(self) -> None:
        """Reject encodings outside 0..15."""
        if not 0 <= self.value < ORDER:
            raise ValueError(f"Ring element encoding must be in 0..15, got {self.value}")

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        """Coefficients (a0, a1, a2, a3) of 1, u, u^2, u^3."""
        v = self.value
        return (v & 1, (v >> 1) & 1, (v >> 2) & 1, (v >> 3) & 1)

    @classmethod
    def from_coeffs(cls, coeffs: tuple[int, int, int, int]) -> RingElement:
        """Build an element from its four F2 coefficients."""
        return cls(sum((c & 1) << i for i, c in enumerate(coeffs)))

    def __add__(self, other: RingElement) -> RingElement:
        return add(self, other)

    def __sub__(self, other: RingElement) -> RingElement:
        return add(self, other)

    def __mul__(self, other: RingElement) -> RingElement:
        return mul(self, other)

    def __pow__(self, exponent: int) -> RingElement:
        result = RingElement(ONE)
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def __bool__(self) -> bool:
        return self.value != ZERO

    def __str__(self) -> str:
        return format_element(self, human=True)

    @property
    def hex(self) -> str:
        """Single hex digit of the canonical encoding."""
        return f"{self.value:X}"


def _rotl(value: int, k: int) -> int:
    """Multiply by u^k: rotate the 4-bit encoding left by k."""
    k %= 4
    return ((value << k) | (value >> (4 - k))) & _MASK


@cache
def multiplication_table() -> tuple[tuple[int, ...], ...]:
    """16x16 product table, built from u^i * u^j = u^((i+j) mod 4)."""
    rows = []
    for a in range(ORDER):
        row = []
        for b in range(ORDER):
            product = 0
            for i in range(4):
                if (a >> i) & 1:
                    product ^= _rotl(b, i)
            row.append(product)
        rows.append(tuple(row))
    return tuple(rows)


def mul_value(a: int, b: int) -> int:
    """Product of two encoded elements."""
    return multiplication_table()[a][b]


def all_elements() -> tuple[RingElement, ...]:
    """All 16 elements in encoding order."""
    return tuple(RingElement(v) for v in range(ORDER))


def add(x: RingElement, y: RingElement) -> RingElement:
    """Coefficientwise sum (XOR of encodings)."""
    return RingElement(x.value ^ y.value)


def mul(x: RingElement, y: RingElement) -> RingElement:
    """Ring product with exponents reduced mod 4."""
    return RingElement(mul_value(x.value, y.value))


def complement(x: RingElement) -> RingElement:
    """x + (1+u+u^2+u^3); its pair is the letterwise Watson-Crick complement of phi(x)."""
    return RingElement(x.value ^ ALL_ONES)


def pair_reverse(x: RingElement) -> RingElement:
    """u^2 * x.

    This swaps the two letters of phi(x) for every pair except AA, TT, GC and CG:
    u^2 fixes 1+u^2 (GC) and u+u^3 (CG) and exchanges u+u^2 (AA) with 1+u^3 (TT).
    Use :func:`pair_swap` for the exact letter swap.
    """
    return RingElement(_rotl(x.value, 2))


def pair_swap(x: RingElement) -> RingElement:
    """The element whose pair is phi(x) with its two letters swapped."""
    pair = _PAIR_BY_VALUE[x.value]
    return RingElement(_VALUE_BY_PAIR[pair[::-1]])


def phi(x: RingElement) -> Dinucleotide:
    """Dinucleotide assigned to x."""
    return Dinucleotide(_PAIR_BY_VALUE[x.value])


def phi_inv(pair: str) -> RingElement:
    """Ring element assigned to a dinucleotide."""
    value = _VALUE_BY_PAIR.get(pair.upper())
    if value is None:
        raise RingParseError(f"Not a dinucleotide over ACGT: {pair!r}")
    return RingElement(value)


def pair_complement(pair: str) -> str:
    """Letterwise Watson-Crick complement of a dinucleotide (no reversal)."""
    return "".join(_COMPLEMENT_LETTER[c] for c in pair)


@cache
def ideal_power(t: int) -> frozenset[int]:
    """Encodings of the ideal <(u+1)^t>, t in 0..4."""
    if not 0 <= t <= 4:
        raise ValueError(f"Ideal exponent must be in 0..4, got {t}")
    generator = ONE
    for _ in range(t):
        generator = mul_value(generator, ONE_PLUS_U)
    return frozenset(mul_value(generator, r) for r in range(ORDER))


def u1_valuation(x: RingElement) -> int:
    """Largest t with x in <(u+1)^t>; 4 for zero."""
    if x.value == ZERO:
        return 4
    return max(t for t in range(4) if x.value in ideal_power(t))


def parse_element(text: str) -> RingElement:
    """Parse a hex digit ("B") or a polynomial in u ("1+u+u^3")."""
    cleaned = text.strip().replace(" ", "")
    if not cleaned:
        raise RingParseError("Empty ring element")
    if _HEX_RE.match(cleaned):
        return RingElement(int(cleaned, 16))

    value = 0
    for term in cleaned.replace("-", "+").split("+"):
        match = _TERM_RE.match(term)
        if not match:
            raise RingParseError(f"Bad term {term!r} in ring element {text!r}")
        if match.group("one"):
            value ^= ONE
        else:
            exp = int(match.group("exp") or 1)
            value ^= 1 << (exp % 4)
    return RingElement(value)


def format_element(x: RingElement, human: bool = False) -> str:
    """Hex digit by default; polynomial form with ``human=True``."""
    if not human:
        return x.hex
    if x.value == ZERO:
        return "0"
    terms = []
    for i, c in enumerate(x.coeffs):
        if c:
            terms.append("1" if i == 0 else ("u" if i == 1 else f"u^{i}"))
    return "+".join(terms)
