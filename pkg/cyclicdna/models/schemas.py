"""
Pydantic schemas for every JSON surface of the CLI.

Field order is declaration order, so serialized output is stable and diffable.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

FLOAT_DECIMALS = 4


def _round(value: float | None) -> float | None:
    return None if value is None else round(value, FLOAT_DECIMALS)


# Code schemas
class CodeDescriptor(BaseModel):
    """A chain code: length, generator chain as ascending bit strings, and summary flags."""

    n: int = Field(ge=1)
    f0: str
    f1: str
    f2: str
    f3: str
    log2_size: int = 0
    rc: bool = False
    self_reciprocal: list[bool] = []

    model_config = ConfigDict(extra="forbid")

    @field_validator("f0", "f1", "f2", "f3")
    @classmethod
    def _bit_string(cls, value: str) -> str:
        if not value or set(value) - {"0", "1"}:
            raise ValueError(f"Expected an ascending bit string, got {value!r}")
        return value


class SubcodeReport(BaseModel):
    """The (1+u^2) subcode by definition, next to the closed-form candidate."""

    log2_size: int
    formula_log2_size: int
    agrees: bool


# Thermodynamic schemas
class StemReport(BaseModel):
    """Stem-distance screening of a code under one weight table."""

    code_id: str
    temperature: float
    words: int
    s: float | None
    d: float | None
    energy_bound: float | None
    max_cross_energy: float | None
    rc_fixed_points: int
    conforming: bool

    @field_serializer("temperature", "s", "d", "energy_bound", "max_cross_energy")
    def _fixed_decimals(self, value: float | None) -> float | None:
        return _round(value)


class AnalysisResult(BaseModel):
    """Everything `analyze` reports for one code."""

    descriptor: CodeDescriptor
    report: StemReport
    rc_sufficient: bool
    quasi_cyclic_2: bool
    wcc_closed: bool
    subcode: SubcodeReport
    subcode_d: float | None = None

    @field_serializer("subcode_d")
    def _fixed_decimals(self, value: float | None) -> float | None:
        return _round(value)


# Factorization schemas
class FactorEntry(BaseModel):
    """One irreducible factor of x^m - 1 and its multiplicity in x^n - 1."""

    poly: str
    bits: str
    degree: int
    multiplicity: int
    self_reciprocal: bool


class FactorReport(BaseModel):
    """Factorization of x^n - 1 with cyclotomic data."""

    n: int
    m: int
    s: int
    factors: list[FactorEntry]
    cosets: list[list[int]]
    negacyclic: bool
    witness: int | None = None


# Self-check schemas
class SelfCheckItem(BaseModel):
    """Outcome of one oracle check."""

    name: str
    passed: bool
    detail: str = ""


class SelfCheckResult(BaseModel):
    """Outcome of the whole oracle suite."""

    passed: bool
    checks: list[SelfCheckItem]


# Run configuration
class RunConfig(BaseModel):
    """Validated settings for one CLI invocation."""

    command: str
    n: int | None = Field(default=None, ge=1)
    chain: list[str] | None = None
    temperature: float = Field(default=310.0, gt=0)
    cap: int = Field(default=1 << 20, gt=0)
    workers: int = Field(default=1, ge=1)
    weights_path: str | None = None
    fasta_path: str | None = None
    json_path: str | None = None
    descriptor_path: str | None = None
    min_distance: float | None = None
    rc_only: bool = False
    rc_sufficient: bool = False
    dedupe: bool = False
    min_log2_size: int | None = None
    max_log2_size: int | None = None

    @field_validator("chain")
    @classmethod
    def _four_layers(cls, value: list[str] | None) -> list[str] | None:
        if value is not None and len(value) != 4:
            raise ValueError(f"--chain needs exactly four polynomials f0,f1,f2,f3, got {len(value)}")
        return value
