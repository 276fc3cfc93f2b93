"""
Nearest-neighbor stacked-pair weights and additive stem metrics.

A weight table maps each of the 16 dinucleotides (read 5'->3') to |dH - T*dS/1000|
with dH in kcal/mol and dS in cal/(mol*K). Tables are closed under reverse-complement
symmetry: a dinucleotide and its Watson-Crick complement share one stacked pair.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from multiprocessing.pool import ThreadPool
from typing import TYPE_CHECKING

import numpy as np

from cyclicdna.models.schemas import StemReport
from cyclicdna.services.codes import DEFAULT_CAP, CyclicCode, as_space, enumerate_codewords, word_rc
from cyclicdna.services.dna import DnaStrand, StrandError, phi_word, strand_wcc

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path

    from cyclicdna.services.codes import CodeSpace, RingWord

logger = logging.getLogger(__name__)

ALPHABET = "ACGT"
DINUCLEOTIDES = tuple(a + b for a in ALPHABET for b in ALPHABET)
REFERENCE_TEMPERATURE = 310.0
DELTA_G_TOLERANCE = 0.05
# numpy elements per pair block: rows * words * positions
_BLOCK_ELEMENTS = 1 << 22

# Stacked pairs keyed by the 5'->3' top strand; the partner is its reverse complement.
BUILTIN_DELTA_H: dict[str, float] = {
    "AA": -7.9,
    "AC": -8.4,
    "AG": -7.8,
    "AT": -7.2,
    "CA": -8.5,
    "CC": -8.0,
    "CG": -10.6,
    "GA": -8.2,
    "GC": -9.8,
    "TA": -7.2,
}
BUILTIN_DELTA_S: dict[str, float] = {
    "AA": -22.2,
    "AC": -22.4,
    "AG": -21.0,
    "AT": -20.4,
    "CA": -22.7,
    "CC": -19.9,
    "CG": -27.2,
    "GA": -22.2,
    "GC": -24.4,
    "TA": -21.3,
}
# Published free energies at 310 K, used to validate rebuilt tables
PRINTED_DELTA_G: dict[str, float] = {
    "AA": -1.02,
    "AC": -1.46,
    "AG": -1.29,
    "AT": -0.88,
    "CA": -1.46,
    "CC": -1.83,
    "CG": -2.17,
    "GA": -1.32,
    "GC": -2.24,
    "TA": -0.60,
}

_COMPLEMENT = str.maketrans("ACGT", "TGCA")


class WeightTableError(ValueError):
    """Raised for incomplete, inconsistent, or unreadable weight tables."""


class DegenerateCodeError(ValueError):
    """Raised when a code has no pair of distinct codewords to measure."""


def pair_wcc(pair: str) -> str:
    """Reverse complement of a dinucleotide."""
    return pair.translate(_COMPLEMENT)[::-1]


def rc_classes() -> list[tuple[str, ...]]:
    """The 10 stacked-pair classes {ab, wcc(ab)}."""
    classes: dict[str, tuple[str, ...]] = {}
    for pair in DINUCLEOTIDES:
        key = min(pair, pair_wcc(pair))
        classes[key] = tuple(sorted({pair, pair_wcc(pair)}))
    return [classes[k] for k in sorted(classes)]


def _index(pair: str) -> int:
    return 4 * ALPHABET.index(pair[0]) + ALPHABET.index(pair[1])


@dataclass(frozen=True)
class StemWeightTable:
    """Weights for all 16 dinucleotides at one temperature."""

    temperature: float
    weights: tuple[float, ...]
    delta_h: tuple[float, ...]
    delta_s: tuple[float, ...]
    provenance: str = "builtin"
    _array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        """Validate shape and sign, and cache the lookup array."""
        if len(self.weights) != len(DINUCLEOTIDES):
            raise WeightTableError(f"Expected 16 weights, got {len(self.weights)}")
        if any(w < 0 or math.isnan(w) for w in self.weights):
            raise WeightTableError("Weights must be nonnegative numbers")
        object.__setattr__(self, "_array", np.asarray(self.weights, dtype=np.float64))

    def weight(self, pair: str) -> float:
        """Weight of a 5'->3' dinucleotide."""
        try:
            return self.weights[_index(pair.upper())]
        except (ValueError, IndexError) as e:
            raise WeightTableError(f"Not a dinucleotide over ACGT: {pair!r}") from e

    def as_dict(self) -> dict[str, float]:
        """Dinucleotide -> weight."""
        return dict(zip(DINUCLEOTIDES, self.weights, strict=True))

    @property
    def array(self) -> np.ndarray:
        """Weights as a length-16 array indexed 4*a + b."""
        return self._array


def _close_under_rc(values: Mapping[str, float], quantity: str) -> list[float]:
    normalized = {k.strip().upper(): float(v) for k, v in values.items()}
    unknown = set(normalized) - set(DINUCLEOTIDES)
    if unknown:
        raise WeightTableError(f"Unknown dinucleotides in {quantity}: {sorted(unknown)}")
    closed = []
    for pair in DINUCLEOTIDES:
        partner = pair_wcc(pair)
        own, other = normalized.get(pair), normalized.get(partner)
        if own is None and other is None:
            raise WeightTableError(f"Missing {quantity} for stacked pair {pair}/{partner}")
        if own is not None and other is not None and not math.isclose(own, other):
            raise WeightTableError(f"Inconsistent {quantity} for {pair} ({own}) and {partner} ({other})")
        value = own if own is not None else other
        if value is None or math.isnan(value):
            raise WeightTableError(f"Missing {quantity} for stacked pair {pair}/{partner}")
        closed.append(value)
    return closed


def build_weight_table(
    delta_h: Mapping[str, float],
    delta_s: Mapping[str, float],
    temperature: float,
    provenance: str = "builtin",
) -> StemWeightTable:
    """weight(ab) = |dH(ab) - T*dS(ab)/1000|, closed under reverse-complement symmetry."""
    if not temperature > 0:
        raise WeightTableError(f"Temperature must be positive kelvin, got {temperature}")
    dh = _close_under_rc(delta_h, "delta_h")
    ds = _close_under_rc(delta_s, "delta_s")
    weights = tuple(abs(h - temperature * s / 1000) for h, s in zip(dh, ds, strict=True))
    return StemWeightTable(
        temperature=float(temperature),
        weights=weights,
        delta_h=tuple(dh),
        delta_s=tuple(ds),
        provenance=provenance,
    )


def builtin_weight_table(temperature: float = REFERENCE_TEMPERATURE) -> StemWeightTable:
    """The builtin stacked-pair data at *temperature*."""
    return build_weight_table(BUILTIN_DELTA_H, BUILTIN_DELTA_S, temperature)


def load_weight_table(csv_path: Path, temperature: float = REFERENCE_TEMPERATURE) -> StemWeightTable:
    """Read a CSV with columns dinucleotide, delta_h, delta_s."""
    import pandas as pd

    try:
        df = pd.read_csv(csv_path, comment="#", skipinitialspace=True)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise WeightTableError(f"Cannot read weight table {csv_path}: {e}") from e

    df.columns = [str(c).strip().lower() for c in df.columns]
    missing = {"dinucleotide", "delta_h", "delta_s"} - set(df.columns)
    if missing:
        raise WeightTableError(f"Weight table {csv_path} lacks columns: {sorted(missing)}")
    pairs = df["dinucleotide"].astype(str).str.strip().str.upper()
    if pairs.duplicated().any():
        raise WeightTableError(f"Duplicate dinucleotides in {csv_path}: {sorted(set(pairs[pairs.duplicated()]))}")
    try:
        delta_h = dict(zip(pairs, df["delta_h"].astype(float), strict=True))
        delta_s = dict(zip(pairs, df["delta_s"].astype(float), strict=True))
    except ValueError as e:
        raise WeightTableError(f"Non-numeric thermodynamic value in {csv_path}: {e}") from e

    table = build_weight_table(delta_h, delta_s, temperature, provenance=str(csv_path))
    logger.info("Loaded weight table from %s (%d rows) at T=%.1f K", csv_path, len(df), temperature)
    return table


@dataclass(frozen=True)
class DeltaGCheck:
    """Rebuilt free energies at 310 K against the published column."""

    rebuilt: dict[str, float]
    deviations: dict[str, float]
    tolerance: float

    @property
    def passed(self) -> bool:
        """All deviations within tolerance."""
        return all(abs(d) <= self.tolerance for d in self.deviations.values())


def check_printed_delta_g(tbl: StemWeightTable, tolerance: float = DELTA_G_TOLERANCE) -> DeltaGCheck:
    """Compare dH - 310*dS/1000 with the published dG for each of the 10 classes."""
    rebuilt = {}
    deviations = {}
    for pair, printed in PRINTED_DELTA_G.items():
        i = _index(pair)
        value = tbl.delta_h[i] - REFERENCE_TEMPERATURE * tbl.delta_s[i] / 1000
        rebuilt[pair] = value
        deviations[pair] = value - printed
    check = DeltaGCheck(rebuilt=rebuilt, deviations=deviations, tolerance=tolerance)
    if not check.passed:
        worst = max(deviations, key=lambda p: abs(deviations[p]))
        logger.warning("dG reconstruction off by %.3f kcal/mol at %s", deviations[worst], worst)
    return check


# ---------------------------------------------------------------------------
# Stem metrics
# ---------------------------------------------------------------------------


def _strand(s: DnaStrand | str) -> DnaStrand:
    return s if isinstance(s, DnaStrand) else DnaStrand(s)


def stem_similarity(x: DnaStrand | str, y: DnaStrand | str, tbl: StemWeightTable) -> float:
    """Sum of weight(x_i x_{i+1}) over positions where x and y share the dinucleotide."""
    a, b = _strand(x).letters, _strand(y).letters
    if len(a) != len(b):
        raise StrandError(f"Strand lengths differ: {len(a)} != {len(b)}")
    if not a:
        raise StrandError("Stem similarity needs strands of length >= 1")
    return sum(tbl.weight(a[i : i + 2]) for i in range(len(a) - 1) if a[i : i + 2] == b[i : i + 2])


def stem_distance(x: DnaStrand | str, y: DnaStrand | str, tbl: StemWeightTable) -> float:
    """S(x,x) - S(x,y); zero on the diagonal and not symmetric in general."""
    return stem_similarity(x, x, tbl) - stem_similarity(x, y, tbl)


def stem_distance_ring(x: RingWord, y: RingWord, tbl: StemWeightTable) -> float:
    """Stem distance between phi images."""
    if x.n != y.n:
        raise StrandError(f"Word lengths differ: {x.n} != {y.n}")
    return stem_distance(phi_word(x), phi_word(y), tbl)


def hybridization_energy(x: DnaStrand | str, y: DnaStrand | str, tbl: StemWeightTable) -> float:
    """S(x, wcc(y)): stability of the duplex x forms with y."""
    return stem_similarity(x, strand_wcc(_strand(y)), tbl)


# ---------------------------------------------------------------------------
# Code screening
# ---------------------------------------------------------------------------


def _pair_indices(strands: list[str]) -> np.ndarray:
    codes = np.array([[ALPHABET.index(c) for c in s] for s in strands], dtype=np.int8)
    return 4 * codes[:, :-1] + codes[:, 1:]


def _pair_block(
    start: int,
    stop: int,
    idx: np.ndarray,
    wcc_idx: np.ndarray,
    weights: np.ndarray,
    self_sim: np.ndarray,
) -> tuple[float, float]:
    """Min stem distance and max cross energy for rows start..stop against every word."""
    rows = idx[start:stop, None, :]
    row_weights = weights[start:stop, None, :]

    similarity = ((rows == idx[None, :, :]) * row_weights).sum(axis=-1)
    distance = self_sim[start:stop, None] - similarity
    distance[np.arange(stop - start), np.arange(start, stop)] = np.inf

    agree = rows == wcc_idx[None, :, :]
    energy = (agree * row_weights).sum(axis=-1)
    # the WCC partner of x forms a perfect duplex, E = S(x,x)
    energy[agree.all(axis=-1)] = -np.inf
    return float(distance.min()), float(energy.max())


@dataclass
class _Screen:
    words: list[RingWord]
    s: float | None
    d: float | None
    max_cross_energy: float | None


def _screen(words: list[RingWord], tbl: StemWeightTable, workers: int) -> _Screen:
    if not words:
        return _Screen(words, None, None, None)
    strands = [phi_word(w).letters for w in words]
    idx = _pair_indices(strands)
    wcc_idx = _pair_indices([str(strand_wcc(DnaStrand(s))) for s in strands])
    weights = tbl.array[idx]
    self_sim = weights.sum(axis=-1)

    count, positions = idx.shape
    rows_per_block = max(1, _BLOCK_ELEMENTS // (count * positions))
    blocks = [(start, min(start + rows_per_block, count)) for start in range(0, count, rows_per_block)]
    args = [(start, stop, idx, wcc_idx, weights, self_sim) for start, stop in blocks]

    if workers > 1 and len(blocks) > 1:
        with ThreadPool(workers) as pool:
            results = [pool.apply_async(_pair_block, a) for a in args]
            partials = [r.get() for r in results]
    else:
        partials = [_pair_block(*a) for a in args]

    d = min(p[0] for p in partials)
    cross = max(p[1] for p in partials)
    return _Screen(
        words=words,
        s=float(self_sim.max()),
        d=None if math.isinf(d) else d,
        max_cross_energy=None if math.isinf(cross) else cross,
    )


def analyze_code(
    code: CyclicCode | CodeSpace,
    tbl: StemWeightTable,
    *,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    code_id: str | None = None,
) -> StemReport:
    """Exhaustive stem-distance screening of a code's phi image.

    d is the minimum of D over ordered pairs of distinct codewords (None below two
    words), s the maximum self-similarity, and energy_bound = s - d. Cross energies
    skip pairs whose second strand is the WCC partner of the first. Codewords with
    w = w^rc are counted and make the code non-conforming.
    """
    if code_id is None:
        code_id = code.code_id if isinstance(code, CyclicCode) else f"n{as_space(code).n}:subspace"
    words = list(enumerate_codewords(code, cap))
    screen = _screen(words, tbl, workers)
    fixed = sum(1 for w in words if word_rc(w) == w)

    energy_bound = None if screen.s is None or screen.d is None else screen.s - screen.d
    report = StemReport(
        code_id=code_id,
        temperature=tbl.temperature,
        words=len(words),
        s=screen.s,
        d=screen.d,
        energy_bound=energy_bound,
        max_cross_energy=screen.max_cross_energy,
        rc_fixed_points=fixed,
        conforming=fixed == 0,
    )
    logger.info("Screened %s: %d words, d=%s, s=%s", code_id, len(words), report.d, report.s)
    return report


def min_stem_distance(
    code: CyclicCode | CodeSpace,
    tbl: StemWeightTable,
    *,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> float | None:
    """Minimum stem distance over ordered pairs of distinct codewords."""
    return _screen(list(enumerate_codewords(code, cap)), tbl, workers).d


def cross_energy_max(
    code: CyclicCode | CodeSpace,
    tbl: StemWeightTable,
    *,
    cap: int = DEFAULT_CAP,
) -> float | None:
    """Max E(phi x, phi y) over ordered pairs where phi y is not the WCC partner of phi x."""
    return _screen(list(enumerate_codewords(code, cap)), tbl, workers=1).max_cross_energy


def require_nondegenerate(code: CyclicCode | CodeSpace) -> None:
    """Reject codes with fewer than two codewords."""
    if as_space(code).log2_size == 0:
        raise DegenerateCodeError("degenerate code: fewer than two codewords")
