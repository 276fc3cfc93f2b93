#!/usr/bin/env python3
"""
Cyclic DNA codes over F2[u]/(u^4 - 1)

Factor x^n - 1, enumerate divisor-chain codes, screen a code's DNA image with the
nearest-neighbor stem distance, and run the brute-force oracle suite.

Defaults come from the environment (a .env file is honored):
    CYCLICDNA_CAP          enumeration cap in codewords (default 1048576)
    CYCLICDNA_TEMPERATURE  kelvin (default 310)
    CYCLICDNA_WORKERS      threads for pair screening (default 1)
    CYCLICDNA_LOG_LEVEL    logging level when --verbose is not given
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from dotenv import load_dotenv
from pydantic import ValidationError

from cyclicdna.models.schemas import (
    AnalysisResult,
    CodeDescriptor,
    FactorEntry,
    FactorReport,
    RunConfig,
    SubcodeReport,
)
from cyclicdna.services.codes import (
    DEFAULT_CAP,
    CapExceededError,
    CyclicCode,
    code_from_chain,
    code_from_descriptor,
    describe,
    enumerate_chains,
    is_reverse_complement,
    rc_sufficient,
    subcode_1pu2,
)
from cyclicdna.services.dna import code_image, is_quasi_cyclic_2, is_wcc_closed, write_fasta
from cyclicdna.services.polys import chain_count, cyclotomic_cosets, factor_xn_minus_1, negacyclic_condition
from cyclicdna.services.selfcheck import DEFAULT_SAMPLES, run_selfcheck
from cyclicdna.services.thermo import (
    REFERENCE_TEMPERATURE,
    StemWeightTable,
    analyze_code,
    builtin_weight_table,
    load_weight_table,
    min_stem_distance,
    require_nondegenerate,
)

logger = logging.getLogger("cyclic_dna")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CAP = 2
EXIT_SELFCHECK = 3


def _env_number(name: str, default: float, cast: type[int] | type[float]) -> int | float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return cast(raw)
    except ValueError as e:
        raise ValueError(f"{name} must be a number, got {raw!r}") from e


def _configure_logging(verbose: bool) -> None:
    level_name = os.getenv("CYCLICDNA_LOG_LEVEL")
    if verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    elif level_name:
        logging.basicConfig(level=level_name.upper(), format="%(levelname)s %(name)s: %(message)s")


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge flags over environment defaults and validate."""
    chain = args.chain.split(",") if getattr(args, "chain", None) else None
    return RunConfig(
        command=args.command,
        n=getattr(args, "n", None),
        chain=chain,
        temperature=args.temp if args.temp is not None else _env_number("CYCLICDNA_TEMPERATURE", REFERENCE_TEMPERATURE, float),
        cap=args.cap if args.cap is not None else _env_number("CYCLICDNA_CAP", DEFAULT_CAP, int),
        workers=args.workers if args.workers is not None else _env_number("CYCLICDNA_WORKERS", 1, int),
        weights_path=args.weights,
        fasta_path=getattr(args, "fasta", None),
        json_path=args.json,
        descriptor_path=getattr(args, "descriptor", None),
        min_distance=getattr(args, "min_distance", None),
        rc_only=getattr(args, "rc_only", False),
        rc_sufficient=getattr(args, "rc_sufficient", False),
        dedupe=getattr(args, "dedupe", False),
        min_log2_size=getattr(args, "min_log2_size", None),
        max_log2_size=getattr(args, "max_log2_size", None),
    )


def load_table(config: RunConfig) -> StemWeightTable:
    """User CSV when given, builtin data otherwise."""
    if config.weights_path:
        return load_weight_table(Path(config.weights_path), config.temperature)
    return builtin_weight_table(config.temperature)


def _write_json(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
        logger.info("Wrote %s", path)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_factor(config: RunConfig) -> int:
    """Factor x^n - 1 and report cyclotomic data."""
    if config.n is None:
        raise ValueError("factor needs --n")
    fac = factor_xn_minus_1(config.n)
    negacyclic, witness = negacyclic_condition(fac.m)
    report = FactorReport(
        n=fac.n,
        m=fac.m,
        s=fac.s,
        factors=[
            FactorEntry(
                poly=g.to_human(),
                bits=g.to_bits(),
                degree=g.degree or 0,
                multiplicity=mult,
                self_reciprocal=g.is_self_reciprocal(),
            )
            for g, mult in fac.factors
        ],
        cosets=[list(c) for c in cyclotomic_cosets(fac.m)],
        negacyclic=negacyclic,
        witness=witness,
    )

    product = " ".join(f"({f.poly})^{f.multiplicity}" if f.multiplicity > 1 else f"({f.poly})" for f in report.factors)
    print(f"x^{report.n}-1 = {product}")
    print(f"m={report.m} s={report.s} chains={chain_count(report.n)}")
    for f in report.factors:
        flag = "yes" if f.self_reciprocal else "no"
        print(f"  {f.poly:<20} bits={f.bits:<12} deg={f.degree:<3} mult={f.multiplicity:<3} self-reciprocal={flag}")
    print("cosets: " + " ".join("{" + ",".join(map(str, c)) + "}" for c in report.cosets))
    if report.negacyclic:
        print(f"2^i = -1 (mod {report.m}): true (i={report.witness})")
    else:
        print(f"2^i = -1 (mod {report.m}): false")
    _write_json(config.json_path, report.model_dump_json(indent=2))
    return EXIT_OK


def _passes_filters(code: CyclicCode, config: RunConfig, tbl: StemWeightTable | None) -> bool:
    if config.min_log2_size is not None and code.log2_size < config.min_log2_size:
        return False
    if config.max_log2_size is not None and code.log2_size > config.max_log2_size:
        return False
    if config.rc_sufficient and not rc_sufficient(code):
        return False
    if config.rc_only and not is_reverse_complement(code):
        return False
    if config.min_distance is not None and tbl is not None:
        if code.space.size > config.cap:
            logger.warning("Skipping %s: 2^%d words exceed the cap", code.code_id, code.log2_size)
            return False
        d = min_stem_distance(code, tbl, cap=config.cap, workers=config.workers)
        if d is None or d < config.min_distance:
            return False
    return True


def cmd_enumerate(config: RunConfig) -> int:
    """Stream descriptors of every chain code passing the filters, as JSON Lines."""
    if config.n is None:
        raise ValueError("enumerate needs --n")
    total = chain_count(config.n)
    if total > config.cap:
        raise CapExceededError(f"{total} chains for n={config.n} exceed the cap of {config.cap}")
    tbl = load_table(config) if config.min_distance is not None else None

    handle = Path(config.json_path).open("w", encoding="utf-8") if config.json_path else sys.stdout
    emitted = 0
    try:
        for code in enumerate_chains(config.n, dedupe=config.dedupe):
            if _passes_filters(code, config, tbl):
                handle.write(describe(code).model_dump_json() + "\n")
                emitted += 1
    finally:
        if handle is not sys.stdout:
            handle.close()
    logger.info("Emitted %d of %d chain codes", emitted, total)
    return EXIT_OK


def _load_code(config: RunConfig) -> CyclicCode:
    if config.descriptor_path:
        raw = json.loads(Path(config.descriptor_path).read_text(encoding="utf-8"))
        return code_from_descriptor(CodeDescriptor.model_validate(raw))
    if config.n is None or config.chain is None:
        raise ValueError("analyze needs --descriptor or both --n and --chain")
    return code_from_chain(config.n, config.chain)


def cmd_analyze(config: RunConfig) -> int:
    """Screen one code and its (1+u^2) subcode."""
    code = _load_code(config)
    require_nondegenerate(code)
    tbl = load_table(config)

    report = analyze_code(code, tbl, cap=config.cap, workers=config.workers)
    subcode = subcode_1pu2(code)
    image = code_image(code, config.cap)
    result = AnalysisResult(
        descriptor=describe(code),
        report=report,
        rc_sufficient=rc_sufficient(code),
        quasi_cyclic_2=is_quasi_cyclic_2(image),
        wcc_closed=is_wcc_closed(image),
        subcode=SubcodeReport(
            log2_size=subcode.space.log2_size,
            formula_log2_size=subcode.candidate.log2_size,
            agrees=subcode.agrees,
        ),
        subcode_d=min_stem_distance(subcode.space, tbl, cap=config.cap, workers=config.workers),
    )
    text = result.model_dump_json(indent=2)
    print(text)
    _write_json(config.json_path, text)

    if config.fasta_path:
        path = Path(config.fasta_path)
        write_fasta(path, image, [f"w{i}" for i in range(len(image))])
        sub_image = code_image(subcode.space, config.cap)
        sub_path = path.with_name(f"{path.stem}_subcode{path.suffix}")
        write_fasta(sub_path, sub_image, [f"s{i}" for i in range(len(sub_image))])
    return EXIT_OK


def cmd_selfcheck(config: RunConfig, samples: int = DEFAULT_SAMPLES) -> int:
    """Run the oracle suite; exit status 3 on any failure."""
    result = run_selfcheck(load_table(config), samples=samples)
    for item in result.checks:
        print(f"[{'PASS' if item.passed else 'FAIL'}] {item.name}: {item.detail}")
    passed = sum(1 for item in result.checks if item.passed)
    print(f"{passed}/{len(result.checks)} checks passed")
    _write_json(config.json_path, result.model_dump_json(indent=2))
    return EXIT_OK if result.passed else EXIT_SELFCHECK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--temp", type=float, help="Temperature in kelvin (default: CYCLICDNA_TEMPERATURE or 310)")
    common.add_argument("--weights", help="Weight-table CSV (dinucleotide,delta_h,delta_s)")
    common.add_argument("--cap", type=int, help="Enumeration cap (default: CYCLICDNA_CAP or 2^20)")
    common.add_argument("--workers", type=int, help="Threads for pair screening (default: CYCLICDNA_WORKERS or 1)")
    common.add_argument("--json", help="Also write JSON output to this path")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(description="Cyclic DNA codes over F2[u]/(u^4-1)")
    subparsers = parser.add_subparsers(dest="command", help="Commands")

    factor_parser = subparsers.add_parser("factor", parents=[common], help="Factor x^n-1 over F2")
    factor_parser.add_argument("--n", type=int, required=True, help="Code length")

    enum_parser = subparsers.add_parser("enumerate", parents=[common], help="Enumerate divisor-chain codes")
    enum_parser.add_argument("--n", type=int, required=True, help="Code length")
    enum_parser.add_argument("--rc-only", action="store_true", help="Keep reverse-complement codes")
    enum_parser.add_argument("--rc-sufficient", action="store_true", help="Keep codes meeting the reciprocal test")
    enum_parser.add_argument("--min-distance", type=float, help="Keep codes with min stem distance >= this")
    enum_parser.add_argument("--min-log2-size", type=int, help="Smallest log2 code size to keep")
    enum_parser.add_argument("--max-log2-size", type=int, help="Largest log2 code size to keep")
    enum_parser.add_argument("--dedupe", action="store_true", help="Drop chains generating an already seen code")

    analyze_parser = subparsers.add_parser("analyze", parents=[common], help="Screen one code")
    analyze_parser.add_argument("--descriptor", help="JSON code descriptor")
    analyze_parser.add_argument("--n", type=int, help="Code length")
    analyze_parser.add_argument("--chain", help="f0,f1,f2,f3 as ascending bit strings")
    analyze_parser.add_argument("--fasta", help="Write the code image here and the subcode image next to it")

    check_parser = subparsers.add_parser("selfcheck", parents=[common], help="Run the oracle suite")
    check_parser.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Random words per property")

    return parser


def main(argv: list[str] | None = None) -> int:
    """CLI entry point."""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; 2 is EXIT_CAP here
        if e.code in (0, None):
            raise
        return EXIT_INVALID

    if not args.command:
        parser.print_help()
        return EXIT_INVALID

    _configure_logging(args.verbose)

    try:
        config = build_config(args)
        if config.command == "factor":
            return cmd_factor(config)
        if config.command == "enumerate":
            return cmd_enumerate(config)
        if config.command == "analyze":
            return cmd_analyze(config)
        return cmd_selfcheck(config, samples=args.samples)
    except CapExceededError as e:
        print(f"Error: {e}")
        return EXIT_CAP
    except (ValidationError, ValueError, OSError) as e:
        print(f"Error: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
