"""
Brute-force oracle suite behind ``cyclic_dna.py selfcheck``.

Every check is independent and returns a pass flag plus a short detail string; a check
that raises counts as failed.
"""

from __future__ import annotations

import itertools
import logging
import random
from typing import TYPE_CHECKING

from cyclicdna.models.schemas import SelfCheckItem, SelfCheckResult
from cyclicdna.services.codes import RingWord, brute_force_ideals, chain_oracle, word_shift
from cyclicdna.services.dna import phi_word, rotate, strand_complement, strand_wcc, wcc_preimage
from cyclicdna.services.ring import (
    ORDER,
    ONE,
    U,
    RingElement,
    add,
    all_elements,
    complement,
    ideal_power,
    mul,
    pair_complement,
    phi,
)
from cyclicdna.services.thermo import check_printed_delta_g

if TYPE_CHECKING:
    from collections.abc import Callable

    from cyclicdna.services.thermo import StemWeightTable

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 10_000
MAX_RANDOM_LENGTH = 32
DEFAULT_SEED = 20240607


def _ring_axioms() -> tuple[bool, str]:
    elems = all_elements()
    zero = RingElement(0)
    one = RingElement(ONE)
    for x, y in itertools.product(elems, repeat=2):
        if add(x, y) != add(y, x) or mul(x, y) != mul(y, x):
            return False, f"commutativity fails at {x.hex},{y.hex}"
    for x, y, z in itertools.product(elems, repeat=3):
        if mul(mul(x, y), z) != mul(x, mul(y, z)):
            return False, f"associativity fails at {x.hex},{y.hex},{z.hex}"
        if mul(x, add(y, z)) != add(mul(x, y), mul(x, z)):
            return False, f"distributivity fails at {x.hex},{y.hex},{z.hex}"
    if any(add(x, zero) != x or mul(x, one) != x for x in elems):
        return False, "identity elements fail"
    if RingElement(U) ** 4 != one:
        return False, "u^4 != 1"
    return True, "16^3 triples"


def _complement_identity() -> tuple[bool, str]:
    bad = [x.hex for x in all_elements() if phi(complement(x)) != pair_complement(phi(x))]
    return not bad, f"mismatches: {bad}" if bad else "16 elements"


def _ideal_sizes() -> tuple[bool, str]:
    sizes = [len(ideal_power(t)) for t in range(5)]
    return sizes == [16, 8, 4, 2, 1], f"sizes {sizes}"


def _random_word(rng: random.Random) -> RingWord:
    n = rng.randint(1, MAX_RANDOM_LENGTH)
    return RingWord(n, rng.getrandbits(4 * n))


def _shift_intertwining(rng: random.Random, samples: int) -> tuple[bool, str]:
    for _ in range(samples):
        w = _random_word(rng)
        if phi_word(word_shift(w)) != rotate(phi_word(w), 2):
            return False, f"fails at {w}"
    return True, f"{samples} random words"


def _wcc_intertwining(rng: random.Random, samples: int) -> tuple[bool, str]:
    exhaustive = [RingWord(1, v) for v in range(ORDER)]
    sampled = [_random_word(rng) for _ in range(samples)]
    for w in exhaustive + sampled:
        if phi_word(wcc_preimage(w)) != strand_wcc(phi_word(w)):
            return False, f"fails at {w}"
    return True, f"16 exhaustive + {samples} random words"


def _complement_intertwining() -> tuple[bool, str]:
    for v in range(ORDER):
        w = RingWord(1, v)
        if phi_word(RingWord(1, v ^ 0xF)) != strand_complement(phi_word(w)):
            return False, f"fails at {w}"
    return True, "16 elements"


def _oracle(n: int) -> tuple[bool, str]:
    report = chain_oracle(n)
    return report.passed, f"{report.ideals} ideals, {report.chain_codes} chain codes, {len(report.unmatched)} unmatched"


def _n1_ideal_count() -> tuple[bool, str]:
    count = len(brute_force_ideals(1))
    return count == 5, f"{count} ideals"


def _n2_non_chain() -> tuple[bool, str]:
    report = chain_oracle(2)
    # even length: ideals outside the chain family are expected, reported only
    return True, f"{len(report.unmatched)} of {report.ideals} ideals are not chain codes"


def run_selfcheck(
    tbl: StemWeightTable,
    *,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> SelfCheckResult:
    """Run every oracle check and collect the outcomes."""
    rng = random.Random(seed)
    checks: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("ring_axioms", _ring_axioms),
        ("complement_identity", _complement_identity),
        ("ideal_sizes", _ideal_sizes),
        ("delta_g_reconstruction", lambda: _delta_g(tbl)),
        ("ideal_count_n1", _n1_ideal_count),
        ("chain_oracle_n1", lambda: _oracle(1)),
        ("chain_oracle_n3", lambda: _oracle(3)),
        ("non_chain_ideals_n2", _n2_non_chain),
        ("shift_by_2_intertwining", lambda: _shift_intertwining(rng, samples)),
        ("wcc_intertwining", lambda: _wcc_intertwining(rng, samples)),
        ("complement_intertwining", _complement_intertwining),
    ]

    items = []
    for name, check in checks:
        try:
            passed, detail = check()
        except Exception as e:
            logger.exception("Self-check %s raised", name)
            passed, detail = False, f"raised {type(e).__name__}: {e}"
        logger.debug("Self-check %s: %s (%s)", name, "ok" if passed else "FAIL", detail)
        items.append(SelfCheckItem(name=name, passed=passed, detail=detail))
    return SelfCheckResult(passed=all(item.passed for item in items), checks=items)


def _delta_g(tbl: StemWeightTable) -> tuple[bool, str]:
    check = check_printed_delta_g(tbl)
    worst = max(abs(d) for d in check.deviations.values())
    return check.passed, f"max deviation {worst:.4f} kcal/mol"
