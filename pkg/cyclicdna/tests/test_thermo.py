"""Tests for cyclicdna/services/thermo.py"""

import itertools
import json

import pytest

from cyclicdna.services.codes import RingWord, enumerate_chains, is_reverse_complement, new_code, subcode_1pu2
from cyclicdna.services.dna import DnaStrand, StrandError, code_image, strand_wcc
from cyclicdna.services.polys import PolyF2, xn_minus_1
from cyclicdna.services.thermo import (
    BUILTIN_DELTA_H,
    BUILTIN_DELTA_S,
    DINUCLEOTIDES,
    PRINTED_DELTA_G,
    DegenerateCodeError,
    WeightTableError,
    analyze_code,
    build_weight_table,
    builtin_weight_table,
    check_printed_delta_g,
    cross_energy_max,
    hybridization_energy,
    load_weight_table,
    min_stem_distance,
    pair_wcc,
    rc_classes,
    require_nondegenerate,
    stem_distance,
    stem_distance_ring,
    stem_similarity,
)


def _random_strand(rng, length):
    return DnaStrand("".join(rng.choice("ACGT") for _ in range(length)))


# ---------------------------------------------------------------------------
# Weight tables
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    ("pair", "weight"),
    [("AA", 1.018), ("TT", 1.018), ("CG", 2.168), ("GC", 2.236), ("TA", 0.597), ("GG", 1.831), ("TC", 1.318)],
)
def test_builtin_weights(table, pair, weight):
    assert table.weight(pair) == pytest.approx(weight, abs=1e-3)


def test_ten_stacked_pair_classes():
    classes = rc_classes()
    assert len(classes) == 10
    assert sorted(itertools.chain.from_iterable(classes)) == sorted(DINUCLEOTIDES)


def test_table_is_rc_symmetric(table):
    for pair in DINUCLEOTIDES:
        assert table.weight(pair) == table.weight(pair_wcc(pair))
    assert all(w >= 0 for w in table.weights)


def test_printed_delta_g_reconstruction(table):
    check = check_printed_delta_g(table)
    assert check.passed
    for pair, printed in PRINTED_DELTA_G.items():
        assert check.rebuilt[pair] == pytest.approx(printed, abs=0.05)


def test_corrupted_table_fails_delta_g_check():
    delta_h = dict(BUILTIN_DELTA_H, CG=-9.0)
    check = check_printed_delta_g(build_weight_table(delta_h, BUILTIN_DELTA_S, 310))
    assert not check.passed


def test_gc_alphabet_carries_largest_weights(table):
    gc = [table.weight(p) for p in ("GG", "CC", "GC", "CG")]
    rest = [table.weight(p) for p in DINUCLEOTIDES if p not in {"GG", "CC", "GC", "CG"}]
    assert min(gc) >= max(rest)


def test_temperature_changes_weights():
    assert builtin_weight_table(330).weight("AA") != builtin_weight_table(310).weight("AA")


@pytest.mark.parametrize("temperature", [0, -10])
def test_non_positive_temperature_rejected(temperature):
    with pytest.raises(WeightTableError):
        builtin_weight_table(temperature)


def test_missing_pair_rejected():
    delta_h = {k: v for k, v in BUILTIN_DELTA_H.items() if k != "CG"}
    with pytest.raises(WeightTableError, match="CG"):
        build_weight_table(delta_h, BUILTIN_DELTA_S, 310)


def test_inconsistent_partner_rejected():
    delta_h = dict(BUILTIN_DELTA_H, TT=-5.0)
    with pytest.raises(WeightTableError, match="Inconsistent"):
        build_weight_table(delta_h, BUILTIN_DELTA_S, 310)


def test_load_weight_table(tmp_path, table):
    path = tmp_path / "weights.csv"
    rows = ["dinucleotide,delta_h,delta_s"] + [f"{k},{BUILTIN_DELTA_H[k]},{BUILTIN_DELTA_S[k]}" for k in BUILTIN_DELTA_H]
    path.write_text("\n".join(rows) + "\n")
    loaded = load_weight_table(path, 310)
    assert loaded.weights == pytest.approx(table.weights)
    assert loaded.provenance == str(path)


def test_load_weight_table_missing_column(tmp_path):
    path = tmp_path / "weights.csv"
    path.write_text("dinucleotide,delta_h\nAA,-7.9\n")
    with pytest.raises(WeightTableError, match="delta_s"):
        load_weight_table(path)


def test_load_weight_table_missing_file(tmp_path):
    with pytest.raises(WeightTableError):
        load_weight_table(tmp_path / "absent.csv")


# ---------------------------------------------------------------------------
# Stem metrics
# ---------------------------------------------------------------------------


def test_catg_self_similarity(table):
    assert stem_similarity(DnaStrand("CATG"), DnaStrand("CATG"), table) == pytest.approx(3.80, abs=0.01)


def test_no_agreement_no_similarity(table):
    assert stem_similarity(DnaStrand("AAAA"), DnaStrand("CCCC"), table) == 0
    assert hybridization_energy(DnaStrand("GGGG"), DnaStrand("GGGG"), table) == 0


def test_length_mismatch_rejected(table):
    with pytest.raises(StrandError):
        stem_similarity(DnaStrand("AC"), DnaStrand("ACG"), table)
    with pytest.raises(StrandError):
        stem_similarity(DnaStrand(""), DnaStrand(""), table)


def test_similarity_axioms(table, rng):
    for _ in range(10_000):
        length = rng.randint(1, 12)
        x, y = _random_strand(rng, length), _random_strand(rng, length)
        sxy = stem_similarity(x, y, table)
        assert sxy == pytest.approx(stem_similarity(y, x, table))
        assert sxy <= min(stem_similarity(x, x, table), stem_similarity(y, y, table)) + 1e-12
        assert stem_distance(x, x, table) == 0
        assert stem_distance(x, y, table) >= -1e-12


def test_distance_is_asymmetric(table):
    aaaa, cccc = DnaStrand("AAAA"), DnaStrand("CCCC")
    assert stem_distance(aaaa, cccc, table) == pytest.approx(3 * table.weight("AA"))
    assert stem_distance(aaaa, cccc, table) == pytest.approx(3.054, abs=1e-3)
    assert stem_distance(cccc, aaaa, table) == pytest.approx(5.493, abs=1e-3)


def test_symmetric_leg_triangle_violation(table):
    x, y, z = DnaStrand("CCCC"), DnaStrand("CCCA"), DnaStrand("AAAA")
    assert stem_distance(x, z, table) > stem_distance(x, y, table) + stem_distance(z, y, table)


def test_directed_triangle_inequality(table, rng):
    for _ in range(2000):
        x, y, z = (_random_strand(rng, 6) for _ in range(3))
        assert stem_distance(x, z, table) <= stem_distance(x, y, table) + stem_distance(y, z, table) + 1e-9


def test_perfect_duplex_energy(table, rng):
    for _ in range(200):
        x = _random_strand(rng, 8)
        assert hybridization_energy(x, strand_wcc(x), table) == pytest.approx(stem_similarity(x, x, table))


def test_ring_distance(table):
    zero = RingWord.from_elements([0])
    ones = RingWord.from_elements([0xF])
    assert stem_distance_ring(zero, zero, table) == 0
    assert stem_distance_ring(zero, ones, table) == pytest.approx(table.weight("GG"))


# ---------------------------------------------------------------------------
# Code screening
# ---------------------------------------------------------------------------


def _brute_force_screen(code, table):
    image = code_image(code)
    d = min(stem_distance(x, y, table) for x in image for y in image if x != y)
    s = max(stem_similarity(x, x, table) for x in image)
    return s, d


def test_analyze_example_code(example_code, table):
    report = analyze_code(example_code, table)
    s, d = _brute_force_screen(example_code, table)
    assert report.words == 16
    assert report.s == pytest.approx(s)
    assert report.d == pytest.approx(d)
    assert report.energy_bound == pytest.approx(report.s - report.d)
    assert report.code_id == example_code.code_id


def test_energy_bound_on_example_code(example_code, table):
    report = analyze_code(example_code, table)
    image = code_image(example_code)
    for x, y in itertools.product(image, repeat=2):
        if strand_wcc(y) != x:
            assert hybridization_energy(x, y, table) <= report.energy_bound + 1e-9
    assert report.max_cross_energy <= report.energy_bound + 1e-9


def test_cross_energy_matches_brute_force(example_code, table):
    image = code_image(example_code)
    expected = max(hybridization_energy(x, y, table) for x in image for y in image if strand_wcc(y) != x)
    assert cross_energy_max(example_code, table) == pytest.approx(expected)


def test_threaded_screen_matches_serial(table, monkeypatch):
    import cyclicdna.services.thermo as thermo

    monkeypatch.setattr(thermo, "_BLOCK_ELEMENTS", 256)
    code = next(c for c in enumerate_chains(3) if c.log2_size == 8)
    serial = analyze_code(code, table, workers=1)
    threaded = analyze_code(code, table, workers=4)
    assert threaded.d == pytest.approx(serial.d)
    assert threaded.max_cross_energy == pytest.approx(serial.max_cross_energy)


def test_zero_code_has_undefined_distance(table):
    modulus = xn_minus_1(2)
    zero = new_code(2, modulus, modulus, modulus, modulus)
    report = analyze_code(zero, table)
    assert report.words == 1
    assert report.d is None
    assert report.energy_bound is None
    with pytest.raises(DegenerateCodeError):
        require_nondegenerate(zero)


def test_rc_fixed_points_make_code_non_conforming(table, example_code):
    one = PolyF2.one()
    full = new_code(2, one, one, one, one)
    report = analyze_code(full, table)
    # (a, a + 1+u+u^2+u^3) is its own reverse complement for each of the 16 values of a
    assert report.rc_fixed_points == 16
    assert not report.conforming
    report = analyze_code(example_code, table)
    # F,F,F,0,0,0 and its shifts by three are among the four words equal to their own reverse complement
    assert report.rc_fixed_points == 4
    assert not report.conforming


def test_subcode_distance_not_smaller(table):
    for code in enumerate_chains(6):
        if code.space.size > 1 << 10 or not is_reverse_complement(code):
            continue
        d_code = min_stem_distance(code, table)
        d_sub = min_stem_distance(subcode_1pu2(code).space, table)
        if d_code is not None and d_sub is not None:
            assert d_sub >= d_code - 1e-9


def test_report_json_rounds_to_four_decimals(example_code, table):
    data = json.loads(analyze_code(example_code, table).model_dump_json())
    assert data["temperature"] == 310.0
    for key in ("s", "d", "energy_bound", "max_cross_energy"):
        assert data[key] == round(data[key], 4)
