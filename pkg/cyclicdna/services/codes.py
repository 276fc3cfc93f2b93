"""
Cyclic codes over R = F2[u]/(u^4 - 1) given by a divisor chain f3 | f2 | f1 | f0 | x^n - 1.

A word of R^n is packed into an int of 4n bits, coordinate j in bits 4j..4j+3, so the
code is an F2-subspace of a 4n-bit space and all membership questions reduce to
bitset row reduction (see :mod:`cyclicdna.services.gf2`).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

from cyclicdna.models.schemas import CodeDescriptor
from cyclicdna.services import gf2
from cyclicdna.services.polys import PolyF2, PolyR, factor_xn_minus_1, xn_minus_1
from cyclicdna.services.ring import ONE_PLUS_U2, RingElement, parse_element

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Sequence

logger = logging.getLogger(__name__)

DEFAULT_CAP = 1 << 20
DEFAULT_ORACLE_CAP = 16**3

# (1+u)^t for t = 0..3
LAYER_SCALARS = (0x1, 0x3, 0x5, 0xF)
LAYER_NAMES = ("f0", "f1", "f2", "f3")


class ChainError(ValueError):
    """Raised when generator data does not form a divisor chain of x^n - 1."""

    def __init__(self, message: str, pair: tuple[str, str] | None = None) -> None:
        """Keep the failing (divisor, multiple) pair for callers."""
        super().__init__(message)
        self.pair = pair


class CapExceededError(Exception):
    """Raised when an enumeration would exceed the configured cap."""


# ---------------------------------------------------------------------------
# Packed words
# ---------------------------------------------------------------------------


def _mask(n: int) -> int:
    return (1 << (4 * n)) - 1


def _ones(n: int) -> int:
    # 0x...1111: bit 0 of every nibble
    return _mask(n) // 0xF


def _shift(packed: int, n: int) -> int:
    return ((packed << 4) | (packed >> (4 * (n - 1)))) & _mask(n)


def _mul_u(packed: int, n: int) -> int:
    ones = _ones(n)
    return ((packed << 1) & (0xE * ones)) | ((packed >> 3) & ones)


def _scale(packed: int, r: int, n: int) -> int:
    out = 0
    for i in range(4):
        if (r >> i) & 1:
            out ^= packed
        packed = _mul_u(packed, n)
    return out


def _reverse(packed: int, n: int) -> int:
    out = 0
    for j in range(n):
        out |= ((packed >> (4 * j)) & 0xF) << (4 * (n - 1 - j))
    return out


def _word_count(n: int) -> int:
    return 1 << (4 * n)


def _embed(f: PolyF2, r: int, n: int) -> int:
    """The word r * (f mod x^n - 1)."""
    packed = 0
    bits = f.bits
    i = 0
    while bits:
        if bits & 1:
            packed ^= r << (4 * (i % n))
        bits >>= 1
        i += 1
    return packed


@dataclass(frozen=True, slots=True)
class RingWord:
    """A vector of n elements of R, coordinate 0 first."""

    n: int
    packed: int

    def __post_init__(self) -> None:
        """Check length and encoding range."""
        if self.n < 1:
            raise ValueError(f"Word length must be >= 1, got {self.n}")
        if not 0 <= self.packed <= _mask(self.n):
            raise ValueError(f"Packed word does not fit {self.n} coordinates")

    @classmethod
    def zero(cls, n: int) -> RingWord:
        """The all-zero word."""
        return cls(n, 0)

    @classmethod
    def from_elements(cls, values: Sequence[int | RingElement]) -> RingWord:
        """Build from encodings or ring elements."""
        packed = 0
        for j, v in enumerate(values):
            value = v.value if isinstance(v, RingElement) else RingElement(v).value
            packed |= value << (4 * j)
        return cls(len(values), packed)

    @classmethod
    def from_poly(cls, f: PolyR, n: int) -> RingWord:
        """Coefficients of f mod x^n - 1."""
        reduced = f.mod_xn_minus_1(n).values()
        return cls.from_elements(list(reduced) + [0] * (n - len(reduced)))

    @classmethod
    def parse(cls, text: str) -> RingWord:
        """Comma-separated coordinates, each a hex digit or a polynomial in u."""
        parts = [p for p in text.split(",") if p.strip()]
        if not parts:
            raise ValueError(f"Empty word: {text!r}")
        return cls.from_elements([parse_element(p) for p in parts])

    def values(self) -> tuple[int, ...]:
        """Coordinate encodings."""
        return tuple((self.packed >> (4 * j)) & 0xF for j in range(self.n))

    def elements(self) -> tuple[RingElement, ...]:
        """Coordinates as ring elements."""
        return tuple(RingElement(v) for v in self.values())

    def to_poly(self) -> PolyR:
        """The polynomial sum w_j x^j."""
        return PolyR.of(self.values())

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[RingElement]:
        return iter(self.elements())

    def __add__(self, other: RingWord) -> RingWord:
        _require_same_length(self, other)
        return RingWord(self.n, self.packed ^ other.packed)

    def __str__(self) -> str:
        return ",".join(f"{v:X}" for v in self.values())


def _require_same_length(a: RingWord, b: RingWord) -> None:
    if a.n != b.n:
        raise ValueError(f"Word lengths differ: {a.n} != {b.n}")


def word_shift(w: RingWord) -> RingWord:
    """Cyclic right shift by one coordinate (multiplication by x)."""
    return RingWord(w.n, _shift(w.packed, w.n))


def word_reverse(w: RingWord) -> RingWord:
    """Coordinate reversal."""
    return RingWord(w.n, _reverse(w.packed, w.n))


def word_complement(w: RingWord) -> RingWord:
    """Add 1+u+u^2+u^3 to every coordinate."""
    return RingWord(w.n, w.packed ^ _mask(w.n))


def word_rc(w: RingWord) -> RingWord:
    """Reverse, then complement."""
    return RingWord(w.n, _reverse(w.packed, w.n) ^ _mask(w.n))


def word_scale(w: RingWord, r: RingElement) -> RingWord:
    """Multiply every coordinate by r."""
    return RingWord(w.n, _scale(w.packed, r.value, w.n))


def u2_rc(w: RingWord) -> RingWord:
    """u^2 * w^rc; the strand-level WCC preimage off the AA/TT/GC/CG coordinates."""
    rc = _reverse(w.packed, w.n) ^ _mask(w.n)
    return RingWord(w.n, _mul_u(_mul_u(rc, w.n), w.n))


# ---------------------------------------------------------------------------
# Subspaces and ideals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CodeSpace:
    """An F2-subspace of R^n held as a canonical reduced basis."""

    n: int
    basis: tuple[int, ...]

    @classmethod
    def from_vectors(cls, n: int, vectors: Iterable[int]) -> CodeSpace:
        """Span of packed vectors."""
        return cls(n, gf2.reduce_basis(vectors))

    @classmethod
    def zero(cls, n: int) -> CodeSpace:
        """The zero subspace."""
        return cls(n, ())

    @property
    def log2_size(self) -> int:
        """F2-dimension."""
        return len(self.basis)

    @property
    def size(self) -> int:
        """Number of words."""
        return 1 << len(self.basis)

    def contains(self, w: RingWord) -> bool:
        """Exact membership; raises ValueError on a length mismatch."""
        if w.n != self.n:
            raise ValueError(f"Word of length {w.n} tested against a code of length {self.n}")
        return gf2.in_span(w.packed, self.basis)

    def __contains__(self, w: RingWord) -> bool:
        return self.contains(w)

    def is_subspace_of(self, other: CodeSpace) -> bool:
        """Containment of spans."""
        return self.n == other.n and all(gf2.in_span(b, other.basis) for b in self.basis)

    def __add__(self, other: CodeSpace) -> CodeSpace:
        return CodeSpace(self.n, gf2.span_sum(self.basis, other.basis))

    def __and__(self, other: CodeSpace) -> CodeSpace:
        return CodeSpace(self.n, gf2.intersect(self.basis, other.basis, 4 * self.n))

    def words(self) -> Iterator[RingWord]:
        """Every word, zero first, without a cap."""
        for packed in gf2.span_elements(self.basis):
            yield RingWord(self.n, packed)


def generate_ideal(n: int, words: Iterable[RingWord | int]) -> CodeSpace:
    """The ideal of R[x]/(x^n - 1) generated by *words*."""
    family = []
    for w in words:
        packed = w.packed if isinstance(w, RingWord) else w
        for _ in range(n):
            u_power = packed
            for _ in range(4):
                family.append(u_power)
                u_power = _mul_u(u_power, n)
            packed = _shift(packed, n)
    return CodeSpace.from_vectors(n, family)


@dataclass(frozen=True)
class CyclicCode:
    """The ideal <f0, (u+1)f1, (u+1)^2 f2, (u+1)^3 f3> of R[x]/(x^n - 1)."""

    n: int
    chain: tuple[PolyF2, PolyF2, PolyF2, PolyF2]
    space: CodeSpace

    @property
    def basis(self) -> tuple[int, ...]:
        """Reduced F2 basis of the code."""
        return self.space.basis

    @property
    def log2_size(self) -> int:
        """log2 of the number of codewords."""
        return self.space.log2_size

    @property
    def code_id(self) -> str:
        """Stable identifier built from the chain bit strings."""
        return f"n{self.n}:" + ",".join(f.to_bits() for f in self.chain)

    def __contains__(self, w: RingWord) -> bool:
        return self.space.contains(w)


def as_space(code: CyclicCode | CodeSpace) -> CodeSpace:
    """The subspace behind a code."""
    return code.space if isinstance(code, CyclicCode) else code


def new_code(n: int, f0: PolyF2, f1: PolyF2, f2: PolyF2, f3: PolyF2) -> CyclicCode:
    """Validate a divisor chain and build its code."""
    if n < 1:
        raise ChainError(f"Code length must be >= 1, got {n}", pair=("n", str(n)))
    modulus = xn_minus_1(n)
    chain = (f0, f1, f2, f3)
    for name, f in zip(LAYER_NAMES, chain, strict=True):
        if f.is_zero() or not f.divides(modulus):
            raise ChainError(f"{name} = {f} does not divide x^{n}-1", pair=(name, f"x^{n}-1"))
    for (big_name, big), (small_name, small) in itertools.pairwise(zip(LAYER_NAMES, chain, strict=True)):
        if not small.divides(big):
            raise ChainError(f"{small_name} = {small} does not divide {big_name} = {big}", pair=(small_name, big_name))

    generators = [_embed(f, r, n) for f, r in zip(chain, LAYER_SCALARS, strict=True)]
    space = generate_ideal(n, [g for g in generators if g])
    logger.debug("Built code n=%d chain=%s with log2_size=%d", n, [f.to_bits() for f in chain], space.log2_size)
    return CyclicCode(n=n, chain=chain, space=space)


def contains(code: CyclicCode | CodeSpace, w: RingWord) -> bool:
    """Membership of a word in a code."""
    return as_space(code).contains(w)


def enumerate_codewords(code: CyclicCode | CodeSpace, cap: int = DEFAULT_CAP) -> Iterator[RingWord]:
    """Stream all 2^log2_size codewords; raises CapExceededError past *cap* words."""
    space = as_space(code)
    if space.size > cap:
        raise CapExceededError(f"Code has 2^{space.log2_size} words, over the cap of {cap}")
    return space.words()


def enumerate_chains(n: int, dedupe: bool = False) -> Iterator[CyclicCode]:
    """One code per divisor chain of x^n - 1, optionally skipping repeated codes."""
    fac = factor_xn_minus_1(n)
    # per factor, exponents e3 <= e2 <= e1 <= e0 <= multiplicity
    per_factor = [list(itertools.combinations_with_replacement(range(mult + 1), 4)) for _, mult in fac.factors]
    seen: set[tuple[int, ...]] = set()
    emitted = 0
    for choice in itertools.product(*per_factor):
        layers = [PolyF2.one() for _ in range(4)]
        for (g, _), exponents in zip(fac.factors, choice, strict=True):
            # exponents ascend, f3 first
            for layer, e in zip((3, 2, 1, 0), exponents, strict=True):
                layers[layer] = layers[layer] * g**e
        code = new_code(n, *layers)
        if dedupe:
            if code.basis in seen:
                continue
            seen.add(code.basis)
        emitted += 1
        yield code
    logger.info("Enumerated %d chain codes of length %d%s", emitted, n, " (deduplicated)" if dedupe else "")


# ---------------------------------------------------------------------------
# Reverse-complement structure
# ---------------------------------------------------------------------------


def complement_offset(n: int) -> RingWord:
    """(1+u+u^2+u^3) * (1 + x + ... + x^(n-1)), the word rc(0)."""
    return RingWord(n, _mask(n))


def is_reverse_complement(code: CyclicCode | CodeSpace) -> bool:
    """Whether w^rc is in the code for every codeword w.

    rc is affine: w -> reverse(w) + c with c the complement offset, so it is enough
    that c is a codeword and c + reverse(b) is a codeword for each basis vector b.
    """
    space = as_space(code)
    offset = _mask(space.n)
    if not gf2.in_span(offset, space.basis):
        return False
    return all(gf2.in_span(offset ^ _reverse(b, space.n), space.basis) for b in space.basis)


def rc_sufficient(code: CyclicCode) -> bool:
    """All f_i self-reciprocal and (1+u+u^2+u^3) * (1 + ... + x^(n-1)) in the code."""
    if not all(f.is_self_reciprocal() for f in code.chain):
        return False
    return gf2.in_span(_mask(code.n), code.basis)


def rc_fixed_points(code: CyclicCode | CodeSpace, cap: int = DEFAULT_CAP) -> int:
    """Number of codewords with w = w^rc."""
    return sum(1 for w in enumerate_codewords(code, cap) if word_rc(w) == w)


@dataclass(frozen=True)
class SubcodeResult:
    """The (1+u^2) subcode by definition and the closed-form candidate <(1+u^2) f3>."""

    space: CodeSpace
    candidate: CodeSpace
    agrees: bool


def one_plus_u2_multiples(n: int) -> CodeSpace:
    """(1+u^2) * R[x]/(x^n - 1): every coordinate in {0, 1+u^2, u+u^3, 1+u+u^2+u^3}."""
    return CodeSpace.from_vectors(n, [v << (4 * j) for j in range(n) for v in (ONE_PLUS_U2, 0xA)])


def subcode_1pu2(code: CyclicCode) -> SubcodeResult:
    """Codewords that are (1+u^2) times some word, next to <(1+u^2) f3>."""
    space = code.space & one_plus_u2_multiples(code.n)
    candidate = generate_ideal(code.n, [_embed(code.chain[3], ONE_PLUS_U2, code.n)])
    agrees = space == candidate
    if not agrees:
        logger.warning(
            "Subcode of %s has 2^%d words; <(1+u^2)f3> has 2^%d",
            code.code_id,
            space.log2_size,
            candidate.log2_size,
        )
    return SubcodeResult(space=space, candidate=candidate, agrees=agrees)


# ---------------------------------------------------------------------------
# Structure checks
# ---------------------------------------------------------------------------


def expected_log2_size(code: CyclicCode) -> int:
    """sum over layers of n - deg f_t."""
    return sum(code.n - (f.degree or 0) for f in code.chain)


def size_law_holds(code: CyclicCode) -> bool:
    """Compare the measured size with 2^(sum of n - deg f_t); mismatches are logged."""
    expected = expected_log2_size(code)
    if code.log2_size != expected:
        logger.warning("Size law mismatch for %s: measured %d, expected %d", code.code_id, code.log2_size, expected)
        return False
    return True


def brute_force_ideals(n: int, cap: int = DEFAULT_ORACLE_CAP) -> frozenset[CodeSpace]:
    """Distinct ideals generated by single words and by pairs of words of R[x]/(x^n - 1)."""
    if _word_count(n) > cap:
        raise CapExceededError(f"16^{n} words exceed the oracle cap of {cap}")
    principal = {generate_ideal(n, [packed]) for packed in range(_word_count(n))}
    # <a, b> = <a> + <b>, so pairs reduce to sums of principal ideals
    ideals = set(principal)
    ideals.update(a + b for a, b in itertools.combinations(principal, 2))
    logger.info("n=%d: %d principal ideals, %d ideals from pairs", n, len(principal), len(ideals))
    return frozenset(ideals)


@dataclass(frozen=True)
class OracleReport:
    """Brute-forced ideals compared with the divisor-chain codes."""

    n: int
    ideals: int
    chain_codes: int
    unmatched: tuple[CodeSpace, ...]

    @property
    def passed(self) -> bool:
        """True when every brute-forced ideal is a chain code."""
        return not self.unmatched


def chain_oracle(n: int, cap: int = DEFAULT_ORACLE_CAP) -> OracleReport:
    """Report brute-forced ideals that no divisor chain generates."""
    ideals = brute_force_ideals(n, cap)
    chain_spaces = {code.space for code in enumerate_chains(n, dedupe=True)}
    unmatched = tuple(sorted((ideal for ideal in ideals if ideal not in chain_spaces), key=lambda s: s.basis))
    if unmatched:
        logger.warning("n=%d: %d ideals are not chain codes", n, len(unmatched))
    return OracleReport(n=n, ideals=len(ideals), chain_codes=len(chain_spaces), unmatched=unmatched)


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------


def describe(code: CyclicCode) -> CodeDescriptor:
    """JSON-ready summary of a code."""
    f0, f1, f2, f3 = (f.to_bits() for f in code.chain)
    return CodeDescriptor(
        n=code.n,
        f0=f0,
        f1=f1,
        f2=f2,
        f3=f3,
        log2_size=code.log2_size,
        rc=is_reverse_complement(code),
        self_reciprocal=[f.is_self_reciprocal() for f in code.chain],
    )


def code_from_descriptor(descriptor: CodeDescriptor) -> CyclicCode:
    """Rebuild a code from its descriptor; derived fields are recomputed."""
    chain = [PolyF2.parse(bits) for bits in (descriptor.f0, descriptor.f1, descriptor.f2, descriptor.f3)]
    return new_code(descriptor.n, *chain)


def code_from_chain(n: int, chain: Sequence[str]) -> CyclicCode:
    """Build a code from four polynomial strings (bit or human form)."""
    if len(chain) != len(LAYER_NAMES):
        raise ChainError(f"Expected four polynomials f0,f1,f2,f3, got {len(chain)}")
    return new_code(n, *(PolyF2.parse(text) for text in chain))

