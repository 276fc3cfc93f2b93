"""Tests for cyclicdna/services/codes.py"""

import pytest

from cyclicdna.models.schemas import CodeDescriptor
from cyclicdna.services.codes import (
    CapExceededError,
    ChainError,
    CodeSpace,
    RingWord,
    brute_force_ideals,
    chain_oracle,
    code_from_chain,
    code_from_descriptor,
    complement_offset,
    contains,
    describe,
    enumerate_chains,
    enumerate_codewords,
    expected_log2_size,
    generate_ideal,
    is_reverse_complement,
    new_code,
    rc_fixed_points,
    rc_sufficient,
    size_law_holds,
    subcode_1pu2,
    u2_rc,
    word_complement,
    word_rc,
    word_reverse,
    word_scale,
    word_shift,
)
from cyclicdna.services.polys import PolyF2, negacyclic_condition, xn_minus_1
from cyclicdna.services.ring import U, RingElement


def _chains(n):
    return list(enumerate_chains(n))


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------


def test_word_from_elements_and_back():
    w = RingWord.from_elements([1, 0, 0xB])
    assert w.values() == (1, 0, 0xB)
    assert str(w) == "1,0,B"
    assert len(w) == 3
    assert RingWord.parse("1, 0, 1+u+u^3") == w


def test_word_rejects_bad_length():
    with pytest.raises(ValueError):
        RingWord(0, 0)
    with pytest.raises(ValueError):
        RingWord(1, 0x10)


def test_word_poly_round_trip(rng):
    for _ in range(100):
        n = rng.randint(1, 12)
        w = RingWord(n, rng.getrandbits(4 * n))
        assert RingWord.from_poly(w.to_poly(), n) == w


def test_word_shift_is_multiplication_by_x(rng):
    x = RingWord.from_elements([0, 1]).to_poly()
    for _ in range(100):
        n = rng.randint(2, 10)
        w = RingWord(n, rng.getrandbits(4 * n))
        assert word_shift(w) == RingWord.from_poly(w.to_poly() * x, n)


def test_word_shift_examples():
    w = RingWord.from_elements([1, 2, 3])
    assert word_shift(w).values() == (3, 1, 2)
    assert word_reverse(w).values() == (3, 2, 1)
    assert word_complement(w).values() == (0xE, 0xD, 0xC)
    assert word_rc(w).values() == (0xC, 0xD, 0xE)


def test_shift_order_divides_n():
    w = RingWord.from_elements([1, 2, 3, 4, 5, 6])
    shifted = w
    for _ in range(6):
        shifted = word_shift(shifted)
    assert shifted == w


def test_word_rc_involution_and_zero(rng):
    assert word_rc(RingWord.zero(4)).values() == (0xF,) * 4
    for _ in range(200):
        n = rng.randint(1, 16)
        w = RingWord(n, rng.getrandbits(4 * n))
        assert word_rc(word_rc(w)) == w


def test_word_scale_matches_ring_multiplication(rng):
    for _ in range(100):
        n = rng.randint(1, 8)
        w = RingWord(n, rng.getrandbits(4 * n))
        r = RingElement(rng.randrange(16))
        assert word_scale(w, r).elements() == tuple(r * x for x in w.elements())


def test_u2_rc_definition():
    w = RingWord.from_elements([1, 0])
    assert u2_rc(w).values() == (0xF, 0xB)


# ---------------------------------------------------------------------------
# Construction and validation
# ---------------------------------------------------------------------------


def test_example_code_size_and_words(example_code):
    assert example_code.log2_size == 4
    words = list(enumerate_codewords(example_code))
    assert len(words) == len(set(words)) == 16
    assert all(set(w.values()) <= {0, 0xF} for w in words)
    assert all(word_scale(w, RingElement(U)) == w for w in words)


def test_example_code_membership(example_code):
    assert contains(example_code, RingWord.zero(6))
    assert contains(example_code, RingWord.from_elements([0xF, 0xF, 0xF, 0, 0, 0]))
    assert not contains(example_code, RingWord.parse("1,0,0,0,0,0"))


def test_membership_length_mismatch(example_code):
    with pytest.raises(ValueError):
        contains(example_code, RingWord.zero(5))


def test_full_and_zero_codes():
    one = PolyF2.one()
    full = new_code(1, one, one, one, one)
    assert {w.values()[0] for w in enumerate_codewords(full)} == set(range(16))

    modulus = xn_minus_1(2)
    zero = new_code(2, modulus, modulus, modulus, modulus)
    assert [w.packed for w in enumerate_codewords(zero)] == [0]


@pytest.mark.parametrize(
    ("n", "chain", "pair"),
    [
        (3, ["x+1", "x+1", "x+1", "x^2+x+1"], ("f3", "f2")),
        (3, ["x^2+x+1", "x+1", "1", "1"], ("f1", "f0")),
        (4, ["x^2+x+1", "1", "1", "1"], ("f0", "x^4-1")),
        (3, ["0", "1", "1", "1"], ("f0", "x^3-1")),
    ],
    ids=["f3-f2", "f1-f0", "non-divisor", "zero"],
)
def test_chain_violations_name_the_pair(n, chain, pair):
    with pytest.raises(ChainError) as exc_info:
        code_from_chain(n, chain)
    assert exc_info.value.pair == pair


def test_zero_length_rejected():
    one = PolyF2.one()
    with pytest.raises(ChainError):
        new_code(0, one, one, one, one)


def test_generator_ideal_equals_example_code(example_code):
    generator = RingWord.from_elements([0xF, 0xF, 0xF, 0, 0, 0])
    assert generate_ideal(6, [generator]) == example_code.space


def test_cap_exceeded(example_code):
    with pytest.raises(CapExceededError):
        list(enumerate_codewords(example_code, cap=8))


# ---------------------------------------------------------------------------
# Chain enumeration
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(("n", "count"), [(1, 5), (2, 15), (3, 25)])
def test_enumerate_chains_counts(n, count):
    assert len(_chains(n)) == count


def test_chains_are_valid_divisor_chains():
    for code in _chains(6):
        f0, f1, f2, f3 = code.chain
        assert f3.divides(f2) and f2.divides(f1) and f1.divides(f0) and f0.divides(xn_minus_1(6))


def test_dedupe_keeps_distinct_codes():
    codes = list(enumerate_chains(6, dedupe=True))
    assert len({c.basis for c in codes}) == len(codes)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_size_law(n):
    for code in _chains(n):
        assert size_law_holds(code)
        assert code.log2_size == expected_log2_size(code)


@pytest.mark.parametrize("n", range(1, 9))
def test_ideal_closure(n):
    for code in _chains(n):
        for b in code.basis:
            w = RingWord(n, b)
            assert contains(code, word_shift(w))
            assert contains(code, word_scale(w, RingElement(U)))
        for a, b in zip(code.basis, code.basis[1:], strict=False):
            assert contains(code, RingWord(n, a ^ b))


# ---------------------------------------------------------------------------
# Reverse-complement structure
# ---------------------------------------------------------------------------


def test_example_code_is_reverse_complement(example_code):
    assert is_reverse_complement(example_code)
    assert rc_sufficient(example_code)
    assert contains(example_code, complement_offset(6))
    words = set(enumerate_codewords(example_code))
    assert all(word_rc(w) in words for w in words)


def test_zero_and_full_codes_rc():
    modulus = xn_minus_1(3)
    zero = new_code(3, modulus, modulus, modulus, modulus)
    assert not is_reverse_complement(zero)
    assert not rc_sufficient(zero)

    one = PolyF2.one()
    assert is_reverse_complement(new_code(3, one, one, one, one))


def test_rc_sufficient_rejects_non_self_reciprocal():
    modulus = xn_minus_1(7)
    code = new_code(7, modulus, modulus, modulus, PolyF2.parse("x^3+x+1"))
    assert not rc_sufficient(code)


def test_is_reverse_complement_matches_exhaustive_check():
    for code in _chains(3):
        words = set(enumerate_codewords(code, cap=1 << 12))
        assert is_reverse_complement(code) == all(word_rc(w) in words for w in words)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_rc_sufficient_implies_reverse_complement(n):
    for code in _chains(n):
        if rc_sufficient(code):
            assert is_reverse_complement(code)


@pytest.mark.parametrize("n", [2, 3, 6])
def test_offset_membership_implies_rc_when_negacyclic(n):
    m = n
    while m % 2 == 0:
        m //= 2
    assert negacyclic_condition(m)[0]
    for code in _chains(n):
        if contains(code, complement_offset(n)):
            assert is_reverse_complement(code)


def test_rc_fixed_points_of_full_code():
    one = PolyF2.one()
    full = new_code(1, one, one, one, one)
    # w = w + 1+u+u^2+u^3 has no solution in characteristic two
    assert rc_fixed_points(full) == 0


def test_example_code_has_rc_fixed_points(example_code):
    generator = RingWord.from_elements([0xF, 0xF, 0xF, 0, 0, 0])
    assert word_rc(generator) == generator
    assert rc_fixed_points(example_code) == 4


# ---------------------------------------------------------------------------
# (1+u^2) subcode
# ---------------------------------------------------------------------------


def test_example_subcode_is_whole_code(example_code):
    result = subcode_1pu2(example_code)
    assert result.space == example_code.space
    assert result.candidate.log2_size > result.space.log2_size
    assert not result.agrees


def test_zero_code_subcode_is_zero():
    modulus = xn_minus_1(2)
    result = subcode_1pu2(new_code(2, modulus, modulus, modulus, modulus))
    assert result.space == CodeSpace.zero(2)
    assert result.agrees


def test_subcode_formula_agrees_iff_f2_equals_f3():
    for code in _chains(6):
        result = subcode_1pu2(code)
        assert result.space.is_subspace_of(code.space)
        assert result.agrees == (code.chain[2] == code.chain[3])


def test_subcode_coordinates_are_multiples_of_one_plus_u2():
    for code in _chains(3):
        for w in enumerate_codewords(subcode_1pu2(code).space):
            assert set(w.values()) <= {0, 0x5, 0xA, 0xF}


# ---------------------------------------------------------------------------
# Ideal oracle
# ---------------------------------------------------------------------------


def test_five_ideals_at_length_one():
    assert len(brute_force_ideals(1)) == 5


@pytest.mark.parametrize("n", [1, 3])
def test_odd_lengths_have_only_chain_ideals(n):
    report = chain_oracle(n)
    assert report.passed
    assert report.ideals == report.chain_codes


def test_length_two_has_non_chain_ideal():
    report = chain_oracle(2)
    assert not report.passed
    witness = generate_ideal(2, [RingWord.from_elements([U, 1])])
    assert witness in report.unmatched


def test_oracle_cap():
    with pytest.raises(CapExceededError):
        brute_force_ideals(4)


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------


def test_describe_example(example_code):
    descriptor = describe(example_code)
    assert descriptor.n == 6
    assert (descriptor.f0, descriptor.f3) == ("1000001", "111")
    assert descriptor.log2_size == 4
    assert descriptor.rc is True
    assert descriptor.self_reciprocal == [True, True, True, True]


def test_descriptor_round_trip(example_code):
    text = describe(example_code).model_dump_json()
    assert text.startswith('{"n":6,"f0":"1000001"')
    rebuilt = code_from_descriptor(CodeDescriptor.model_validate_json(text))
    assert rebuilt.space == example_code.space


def test_descriptor_rejects_bad_bits():
    with pytest.raises(ValueError):
        CodeDescriptor(n=2, f0="1x", f1="1", f2="1", f3="1")
