import numpy as np
import pytest

from altdiff.algebra import AlgebraSpec
from altdiff.axioms import op_tables, validate_axioms
from altdiff.gf2 import BitMat, BitVec

SWAP2 = BitMat.from_lists([[0, 1], [1, 0]])


def test_all_fixture_algebras_pass(alg_m2d1, alg_m4d4, alg_m4d4_rank3, algs_m6d2, trapdoor_brick):
    for spec in [alg_m2d1, alg_m4d4, alg_m4d4_rank3, trapdoor_brick, *algs_m6d2.values()]:
        report = validate_axioms(spec)
        assert report.ok, report.failed_names()


def test_tables_match_scalar_operations(alg_m2d1):
    t = op_tables(alg_m2d1)
    for x in range(8):
        for y in range(8):
            assert t.circ[x, y] == alg_m2d1.circle(BitVec(3, x), BitVec(3, y)).bits
            assert t.dot[x, y] == alg_m2d1.dot(BitVec(3, x), BitVec(3, y)).bits


def test_asymmetric_matrix_fails_commutativity():
    bad = AlgebraSpec(2, 1, (BitMat.from_lists([[0, 1], [0, 0]]),))
    failed = validate_axioms(bad).failed_names()
    assert "dot-commutative" in failed and "circle-commutative" in failed


def test_diagonal_entry_fails_alternating():
    bad = AlgebraSpec(2, 1, (BitMat.from_lists([[1, 1], [1, 0]]),))
    failed = validate_axioms(bad).failed_names()
    assert "dot-alternating" in failed
    assert "circle-involution" in failed


def test_degenerate_product_fails_location_check():
    # a valid-looking skew matrix whose concatenation rank is too small:
    # the annihilator becomes larger than the last d coordinates
    bad = AlgebraSpec(4, 1, (BitMat.from_lists(
        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]), ))
    failed = validate_axioms(bad).failed_names()
    assert "annihilator-is-last-coordinates" in failed


def test_report_shape(alg_m2d1):
    report = validate_axioms(alg_m2d1)
    names = [c.name for c in report.checks]
    for expected in (
        "circle-neutral",
        "circle-associative",
        "brace-distributive",
        "brace-shift",
        "class-two",
        "lambda-homomorphism",
        "translations-normalize-xor-translations",
        "xor-translations-normalize-translations",
        "annihilator-equals-socle",
        "socle-equals-lambda-kernel",
        "translation-regularity",
    ):
        assert expected in names
    assert report.failures() == []


def test_oracle_guard():
    big = AlgebraSpec(12, 1, (BitMat.zero(12, 12),))
    with pytest.raises(ValueError):
        op_tables(big)


def test_decomposed_path_agrees_on_valid_algebra():
    # n = 9 > literal limit: triple identities go through the decomposition
    b1 = BitMat.from_lists(
        [[0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0],
         [0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 1, 0]])
    j6 = BitMat.anti_identity(6)
    z6 = BitMat.zero(6, 6)
    spec = AlgebraSpec.checked(6, 3, (b1, j6, z6))
    report = validate_axioms(spec)
    assert report.ok, report.failed_names()
    decomposed = [c for c in report.checks if "decomposition" in c.detail]
    assert decomposed, "expected decomposition-verified identities at n = 9"


def test_decomposed_path_catches_broken_product():
    # same size, asymmetric defining matrix: the literal pair-level checks
    # still run above the triple limit and catch it
    bad = AlgebraSpec(6, 3, (BitMat.from_lists(
        [[0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 1], [0, 0, 0, 1, 0, 0],
         [0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 1, 0]]),
        BitMat.anti_identity(6), BitMat.zero(6, 6)))
    report = validate_axioms(bad)
    failed = report.failed_names()
    assert "dot-commutative" in failed and "circle-commutative" in failed


def test_phi_table_matches_scalar(alg_m4d4):
    t = op_tables(alg_m4d4)
    rng = np.random.default_rng(5)
    for _ in range(200):
        x, y = int(rng.integers(0, 256)), int(rng.integers(0, 256))
        assert t.dot[x, y] == alg_m4d4.dot(BitVec(8, x), BitVec(8, y)).bits
