import itertools
import random

import pytest

from altdiff.algebra import (
    AlgebraSpec,
    InvalidAlgebraError,
    ParallelAlgebra,
    algebra_from_text,
    algebra_to_text,
    annihilator_basis,
    key_addition_difference,
    parallel_extend,
    product_image,
    r_squared_basis,
    socle_basis,
    spec_from_theta,
    theta_from_spec,
    theta_from_text,
    theta_to_text,
    unidim_data,
    validate,
)
from altdiff.gf2 import BitMat, BitVec, mat_rank

SWAP2 = BitMat.from_lists([[0, 1], [1, 0]])


def vec(n, value):
    return BitVec(n, value)


# ---------------------------------------------------------------------------
# validation


def test_validate_good_family(alg_m4d4):
    assert validate(alg_m4d4) == []


def test_validate_zero_matrix_degenerate():
    spec = AlgebraSpec(2, 1, (BitMat.zero(2, 2),))
    failures = validate(spec)
    assert any("rank" in f for f in failures)


def test_validate_diagonal_entry():
    bad = BitMat.from_lists([[1, 1], [1, 0]])
    failures = validate(AlgebraSpec(2, 1, (bad,)))
    assert any("diagonal" in f for f in failures)


def test_validate_asymmetric():
    bad = BitMat.from_lists([[0, 1], [0, 0]])
    failures = validate(AlgebraSpec(2, 1, (bad,)))
    assert any("symmetric" in f for f in failures)


def test_checked_constructor_raises():
    with pytest.raises(InvalidAlgebraError):
        AlgebraSpec.checked(2, 1, [BitMat.zero(2, 2)])


# ---------------------------------------------------------------------------
# products on the 3-dimensional algebra


def test_basis_product_table(alg_m2d1):
    e = [BitVec.basis(3, i) for i in range(3)]
    table = {
        (i, j): alg_m2d1.dot(e[i], e[j]).bits for i in range(3) for j in range(3)
    }
    assert table[0, 1] == table[1, 0] == 1  # e1*e2 = e3
    assert all(v == 0 for k, v in table.items() if k not in {(0, 1), (1, 0)})


def test_product_alternating_everywhere(alg_m2d1):
    for x in range(8):
        assert alg_m2d1.dot(vec(3, x), vec(3, x)).bits == 0


def test_circle_neutral_and_involution(alg_m2d1):
    for x in range(8):
        assert alg_m2d1.circle(vec(3, x), vec(3, 0)) == vec(3, x)
        assert alg_m2d1.circle(vec(3, x), vec(3, x)).bits == 0


def test_circle_of_first_two_basis_vectors(alg_m2d1):
    e1, e2 = BitVec.basis(3, 0), BitVec.basis(3, 1)
    assert alg_m2d1.circle(e1, e2) == BitVec.from_text("111")


def test_length_mismatch_rejected(alg_m2d1):
    with pytest.raises(ValueError):
        alg_m2d1.dot(vec(4, 1), vec(4, 1))


# ---------------------------------------------------------------------------
# lambda maps and translations


def test_lambda_at_zero_and_annihilator(alg_m2d1):
    assert alg_m2d1.lambda_of(vec(3, 0)) == BitMat.identity(3)
    assert alg_m2d1.lambda_of(BitVec.basis(3, 2)) == BitMat.identity(3)


def test_lambda_satisfies_defining_identity(alg_m2d1):
    for x, y in itertools.product(range(8), repeat=2):
        xv, yv = vec(3, x), vec(3, y)
        assert (xv @ alg_m2d1.lambda_of(yv)) ^ yv == alg_m2d1.circle(xv, yv)


def test_lambda_theta_block_columns(alg_m4d4):
    # the theta block of lambda_{e1} holds the first columns of the B_k
    lam = alg_m4d4.lambda_of(BitVec.basis(8, 0))
    block = lam.submatrix(0, 4, 4, 8)
    for k, b in enumerate(alg_m4d4.defining):
        for j in range(4):
            assert block.entry(j, k) == b.entry(j, 0)


def test_translation_identity_and_regularity(alg_m2d1):
    tau0 = alg_m2d1.translation_of(vec(3, 0))
    images = set()
    for x in range(8):
        assert tau0(vec(3, x)) == vec(3, x)
    for y in range(8):
        images.add(alg_m2d1.translation_of(vec(3, y))(vec(3, 0)).bits)
        assert alg_m2d1.translation_of(vec(3, y))(vec(3, 0)) == vec(3, y)
    assert len(images) == 8


def test_translations_compose_through_circle(alg_m2d1):
    for y, z in itertools.product(range(8), repeat=2):
        ty, tz = alg_m2d1.translation_of(vec(3, y)), alg_m2d1.translation_of(vec(3, z))
        tyz = alg_m2d1.translation_of(alg_m2d1.circle(vec(3, y), vec(3, z)))
        composed = ty.compose(tz)
        assert composed.lin == tyz.lin and composed.offset == tyz.offset


# ---------------------------------------------------------------------------
# theta conversions


def test_theta_round_trip(alg_m4d4, alg_m2d1, algs_m6d2):
    for spec in [alg_m4d4, alg_m2d1, *algs_m6d2.values()]:
        theta = theta_from_spec(spec)
        assert theta.validate() == []
        assert spec_from_theta(theta) == spec


def test_theta_matrix_value(alg_m4d4):
    rows = [
        "0000000110011011",
        "0001000011110111",
        "1001111100001001",
        "1011011110010000",
    ]
    theta = theta_from_spec(alg_m4d4)
    assert [theta.mat.row(j).to_text() for j in range(4)] == rows


def test_theta_nonzero_diagonal_rejected(alg_m2d1):
    theta = theta_from_spec(alg_m2d1)
    rows = list(theta.mat.row_bits)
    rows[0] |= 1 << (theta.mat.cols - 1)  # sets row 1 of block 1
    broken = type(theta)(theta.m, theta.d, BitMat(theta.mat.cols, tuple(rows)))
    assert any("diagonal" in f for f in broken.validate())
    with pytest.raises(InvalidAlgebraError):
        spec_from_theta(broken)


def test_theta_text_round_trip(alg_m4d4):
    theta = theta_from_spec(alg_m4d4)
    assert theta_from_text(theta_to_text(theta)).mat == theta.mat


# ---------------------------------------------------------------------------
# derived subspaces


def test_annihilator_socle_values(alg_m2d1, alg_m4d4):
    assert [v.to_text() for v in annihilator_basis(alg_m2d1)] == ["001"]
    assert [v.bits for v in annihilator_basis(alg_m4d4)] == [8, 4, 2, 1]
    assert socle_basis(alg_m2d1) == annihilator_basis(alg_m2d1)


def test_socle_by_exhaustion_matches(alg_m2d1):
    socle = {
        y
        for y in range(8)
        if all(alg_m2d1.circle(vec(3, x), vec(3, y)).bits == x ^ y for x in range(8))
    }
    assert socle == {0, 1}  # spanned by the last coordinate


def test_r_squared_full_and_proper(alg_m4d4, alg_m4d4_rank3):
    assert len(r_squared_basis(alg_m4d4)) == 4
    gens = [v.to_text() for v in r_squared_basis(alg_m4d4_rank3)]
    assert gens == ["00001001", "00000101", "00000011"]


def test_r_squared_single_matrix(alg_m2d1):
    assert len(r_squared_basis(alg_m2d1)) == 1


def test_unidim_data(alg_m2d1, algs_m6d2, alg_m4d4):
    gen, b = unidim_data(alg_m2d1)
    assert gen == SWAP2 and b.to_text() == "1"
    assert unidim_data(alg_m4d4) is None
    assert unidim_data(algs_m6d2["bb"])[1].to_text() == "11"
    assert unidim_data(algs_m6d2["b0"])[1].to_text() == "10"
    assert unidim_data(algs_m6d2["0b"])[1].to_text() == "01"


def test_product_image_sizes(alg_m4d4, alg_m2d1):
    image = product_image(alg_m4d4)
    assert len(image) == 15
    small = product_image(alg_m2d1)
    assert {v.bits for v in small} == {0, 1}
    assert vec(3, 0) in small


def test_product_image_guard():
    big = AlgebraSpec(24, 1, (BitMat.zero(24, 24),))
    with pytest.raises(ValueError):
        product_image(big)


# ---------------------------------------------------------------------------
# key addition


def test_key_addition_weak_keys(alg_m2d1):
    for x in range(8):
        for delta in range(8):
            out = key_addition_difference(alg_m2d1, vec(3, x), vec(3, 1), vec(3, delta))
            assert out == vec(3, delta)  # key in the socle


def test_key_addition_zero_difference(alg_m2d1):
    for x in range(8):
        for k in range(8):
            assert key_addition_difference(alg_m2d1, vec(3, x), vec(3, k), vec(3, 0)).bits == 0


def test_key_addition_error_term(alg_m2d1):
    e1, e2, e3 = (BitVec.basis(3, i) for i in range(3))
    for x in range(8):
        assert key_addition_difference(alg_m2d1, vec(3, x), e1, e2) == e2 ^ e3


def test_key_addition_independent_of_x(alg_m2d1, trapdoor_brick):
    for spec in (alg_m2d1, trapdoor_brick):
        size = 1 << spec.n
        for k, delta in itertools.product(range(size), repeat=2):
            expected = vec(spec.n, delta) ^ spec.dot(vec(spec.n, k), vec(spec.n, delta))
            for x in range(size):
                got = key_addition_difference(spec, vec(spec.n, x), vec(spec.n, k), vec(spec.n, delta))
                assert got == expected


# ---------------------------------------------------------------------------
# parallel extension


def test_parallel_single_brick_matches(alg_m2d1):
    par = parallel_extend(alg_m2d1, 1)
    for x, y in itertools.product(range(8), repeat=2):
        assert par.dot(vec(3, x), vec(3, y)) == alg_m2d1.dot(vec(3, x), vec(3, y))
        assert par.circle(vec(3, x), vec(3, y)) == alg_m2d1.circle(vec(3, x), vec(3, y))


def test_parallel_brick_wise_product(alg_m2d1):
    par = parallel_extend(alg_m2d1, 2)
    rng = random.Random(3)
    for _ in range(100):
        x1, x2, y1, y2 = (rng.randrange(8) for _ in range(4))
        x = vec(6, (x1 << 3) | x2)
        y = vec(6, (y1 << 3) | y2)
        expected = (alg_m2d1.dot(vec(3, x1), vec(3, y1)).bits << 3) | alg_m2d1.dot(
            vec(3, x2), vec(3, y2)
        ).bits
        assert par.dot(x, y).bits == expected


def test_parallel_socle_by_exhaustion(alg_m2d1):
    par = parallel_extend(alg_m2d1, 2)
    socle = {
        y
        for y in range(64)
        if all(par.circle(vec(6, x), vec(6, y)).bits == x ^ y for x in range(64))
    }
    # spanned by the annihilator coordinate of each brick
    assert socle == {0, 0b000001, 0b001000, 0b001001}
    assert {v.bits for v in par.socle_basis()} == {0b001000, 0b000001}


def test_parallel_guard():
    with pytest.raises(ValueError):
        ParallelAlgebra(AlgebraSpec(2, 1, (SWAP2,)), 0)


# ---------------------------------------------------------------------------
# files


def test_algebra_file_round_trip(alg_m4d4, algs_m6d2):
    for spec in [alg_m4d4, *algs_m6d2.values()]:
        assert algebra_from_text(algebra_to_text(spec)) == spec


def test_algebra_file_rejects_invalid():
    text = "2 1\n2 2\n11\n11\n"
    with pytest.raises(InvalidAlgebraError):
        algebra_from_text(text)
    assert algebra_from_text(text, check=False).m == 2


def test_algebra_file_bad_header():
    with pytest.raises(ValueError):
        algebra_from_text("two one\n")
