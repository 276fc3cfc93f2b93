"""GF(2) linear algebra on int bitsets.

A vector is a nonnegative int; a basis is a tuple of vectors in fully reduced
echelon form keyed by leading bit, sorted by descending leading bit. That form is
canonical, so two spans are equal iff their reduced bases are equal.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator


def reduce_basis(vectors: Iterable[int]) -> tuple[int, ...]:
    """Canonical reduced basis of the span of *vectors*."""
    pivots: dict[int, int] = {}
    for vec in vectors:
        while vec:
            lead = vec.bit_length() - 1
            row = pivots.get(lead)
            if row is None:
                pivots[lead] = vec
                break
            vec ^= row

    # back-substitute so every pivot bit appears in exactly one row
    leads = sorted(pivots)
    for i, lead in enumerate(leads):
        row = pivots[lead]
        for higher in leads[i + 1 :]:
            if (pivots[higher] >> lead) & 1:
                pivots[higher] ^= row
    return tuple(pivots[lead] for lead in reversed(leads))


def reduce_vector(vec: int, basis: tuple[int, ...]) -> int:
    """Remainder of *vec* after elimination against a reduced basis."""
    for row in basis:
        lead = row.bit_length() - 1
        if (vec >> lead) & 1:
            vec ^= row
    return vec


def in_span(vec: int, basis: tuple[int, ...]) -> bool:
    """Membership in the span of a reduced basis."""
    return reduce_vector(vec, basis) == 0


def rank(vectors: Iterable[int]) -> int:
    """Dimension of the span."""
    return len(reduce_basis(vectors))


def span_sum(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Reduced basis of span(a) + span(b)."""
    return reduce_basis(a + b)


def intersect(a: tuple[int, ...], b: tuple[int, ...], nbits: int) -> tuple[int, ...]:
    """Reduced basis of span(a) & span(b) by the Zassenhaus sum-intersection method."""
    rows = [(x << nbits) | x for x in a] + [y << nbits for y in b]
    low = 1 << nbits
    return reduce_basis(row for row in reduce_basis(rows) if row < low)


def span_elements(basis: tuple[int, ...]) -> Iterator[int]:
    """Every vector of the span, in Gray-code order starting at zero."""
    vec = 0
    yield vec
    for i in range(1, 1 << len(basis)):
        # flip the basis row at the lowest set bit of i
        vec ^= basis[(i & -i).bit_length() - 1]
        yield vec
