"""
DNA strands, the word-level pair map phi, and Watson-Crick operations.

Strands are stored 5'->3' left to right. Text written 3'->5' must carry an explicit
orientation prefix ("3'-ACTTAGA-5'") and is reversed on parsing.
"""

from __future__ import annotations

import io
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from Bio import SeqIO
from Bio.Seq import Seq
from Bio.SeqRecord import SeqRecord

from cyclicdna.services.codes import DEFAULT_CAP, RingWord, enumerate_codewords, word_rc
from cyclicdna.services.ring import RingParseError, pair_swap, phi, phi_inv

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from pathlib import Path

    from cyclicdna.services.codes import CodeSpace, CyclicCode

logger = logging.getLogger(__name__)

ALPHABET = "ACGT"
_LETTERS_RE = re.compile(r"^[ACGT]*$")
_ORIENTED_RE = re.compile(r"^(?P<start>[35])'-?(?P<letters>[A-Za-z]*)-?(?P<end>[35])'$")


class StrandError(ValueError):
    """Raised for letters outside ACGT, bad orientation markers, or mismatched lengths."""


class DuplicateLabelError(ValueError):
    """Raised when FASTA labels repeat."""


@dataclass(frozen=True, slots=True)
class DnaStrand:
    """A strand over {A, C, G, T}, read 5'->3'."""

    letters: str

    def __post_init__(self) -> None:
        """Restrict the alphabet."""
        if not _LETTERS_RE.match(self.letters):
            raise StrandError(f"Strand must use only A, C, G, T: {self.letters!r}")

    @property
    def seq(self) -> Seq:
        """Biopython view of the strand."""
        return Seq(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters


def parse_strand(text: str) -> DnaStrand:
    """Raw letters (taken as 5'->3') or an oriented form "5'-...-3'" / "3'-...-5'"."""
    cleaned = "".join(text.split()).replace("’", "'")
    match = _ORIENTED_RE.match(cleaned)
    if match is None:
        return DnaStrand(cleaned.upper())
    start, end = match.group("start"), match.group("end")
    if start == end:
        raise StrandError(f"Orientation markers must differ: {text!r}")
    letters = match.group("letters").upper()
    return DnaStrand(letters[::-1] if start == "3" else letters)


def _require_same_length(x: DnaStrand, y: DnaStrand) -> None:
    if len(x) != len(y):
        raise StrandError(f"Strand lengths differ: {len(x)} != {len(y)}")


def strand_reverse(s: DnaStrand) -> DnaStrand:
    """Index reversal."""
    return DnaStrand(s.letters[::-1])


def strand_complement(s: DnaStrand) -> DnaStrand:
    """Letterwise Watson-Crick complement, no reversal."""
    return DnaStrand(str(s.seq.complement()))


def strand_wcc(s: DnaStrand) -> DnaStrand:
    """Watson-Crick complement: the reverse complement, read 5'->3'."""
    return DnaStrand(str(s.seq.reverse_complement()))


def rotate(s: DnaStrand, k: int) -> DnaStrand:
    """Cyclic right rotation by k letters."""
    if not s.letters:
        return s
    k %= len(s)
    return DnaStrand(s.letters[-k:] + s.letters[:-k]) if k else s


def phi_word(w: RingWord) -> DnaStrand:
    """Concatenate the pairs of w's coordinates, coordinate 0 first."""
    return DnaStrand("".join(phi(x) for x in w.elements()))


def phi_word_inv(s: DnaStrand) -> RingWord:
    """Inverse of :func:`phi_word`; needs a nonempty strand of even length."""
    if not s.letters or len(s) % 2:
        raise StrandError(f"Strand length must be even and positive, got {len(s)}")
    try:
        return RingWord.from_elements([phi_inv(s.letters[i : i + 2]) for i in range(0, len(s), 2)])
    except RingParseError as e:
        raise StrandError(str(e)) from e


def wcc_preimage(w: RingWord) -> RingWord:
    """The word whose image is the WCC of phi_word(w): pair_swap applied to w^rc."""
    return RingWord.from_elements([pair_swap(x) for x in word_rc(w).elements()])


def _same_length(strands: set[str]) -> int | None:
    lengths = {len(s) for s in strands}
    if len(lengths) > 1:
        raise StrandError(f"Strands of mixed lengths: {sorted(lengths)}")
    return lengths.pop() if lengths else None


def _letter_set(strands: Iterable[DnaStrand | str]) -> set[str]:
    return {str(s) for s in strands}


def is_quasi_cyclic_2(strands: Iterable[DnaStrand | str]) -> bool:
    """Closure under cyclic shift by two letters; the empty set is closed."""
    pool = _letter_set(strands)
    length = _same_length(pool)
    if length is None:
        return True
    if length % 2:
        raise StrandError(f"Quasi-cyclicity of index 2 needs even length, got {length}")
    return all(str(rotate(DnaStrand(s), 2)) in pool for s in pool)


def is_wcc_closed(strands: Iterable[DnaStrand | str]) -> bool:
    """Closure under the Watson-Crick complement."""
    pool = _letter_set(strands)
    _same_length(pool)
    return all(str(strand_wcc(DnaStrand(s))) in pool for s in pool)


def gc_content(s: DnaStrand) -> Fraction:
    """Fraction of G and C letters; 0 for the empty strand."""
    if not s.letters:
        return Fraction(0)
    return Fraction(sum(1 for c in s.letters if c in "GC"), len(s))


def code_image(code: CyclicCode | CodeSpace, cap: int = DEFAULT_CAP) -> list[DnaStrand]:
    """phi images of every codeword, in enumeration order."""
    return [phi_word(w) for w in enumerate_codewords(code, cap)]


def _records(strands: Sequence[DnaStrand], labels: Sequence[str]) -> list[SeqRecord]:
    if len(strands) != len(labels):
        raise ValueError(f"{len(strands)} strands but {len(labels)} labels")
    seen: set[str] = set()
    for label in labels:
        if label in seen:
            raise DuplicateLabelError(f"Duplicate FASTA label: {label!r}")
        seen.add(label)
    return [SeqRecord(s.seq, id=label, description="") for s, label in zip(strands, labels, strict=True)]


def fasta_export(strands: Sequence[DnaStrand], labels: Sequence[str]) -> str:
    """FASTA text, one record per strand, 5'->3'."""
    records = _records(strands, labels)
    handle = io.StringIO()
    SeqIO.write(records, handle, "fasta")
    return handle.getvalue()


def write_fasta(path: Path, strands: Sequence[DnaStrand], labels: Sequence[str]) -> int:
    """Write FASTA to *path*; returns the number of records."""
    records = _records(strands, labels)
    with path.open("w") as handle:
        count = SeqIO.write(records, handle, "fasta")
    logger.info("Wrote %d FASTA records to %s", count, path)
    return count
