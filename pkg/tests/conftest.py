from pathlib import Path

import pytest

from altdiff.algebra import AlgebraSpec, algebra_from_text
from altdiff.gf2 import BitMat
from altdiff.spn import CipherSpec, SBox, cipher_from_text

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def load_algebra(name: str) -> AlgebraSpec:
    return algebra_from_text((FIXTURES / name).read_text())


def load_cipher(name: str) -> CipherSpec:
    return cipher_from_text((FIXTURES / name).read_text(), base_dir=FIXTURES)


def load_sbox(name: str) -> SBox:
    text = " ".join(
        line
        for line in (FIXTURES / name).read_text().splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    )
    return SBox.from_hex(text)


@pytest.fixture(scope="session")
def alg_m2d1() -> AlgebraSpec:
    """Three-dimensional algebra with e1*e2 = e3."""
    return load_algebra("m2d1.alg")


@pytest.fixture(scope="session")
def alg_m4d4() -> AlgebraSpec:
    """Four independent 4x4 defining matrices; product span dimension 4."""
    return load_algebra("m4d4_full.alg")


@pytest.fixture(scope="session")
def alg_m4d4_rank3() -> AlgebraSpec:
    """Same first three matrices, dependent fourth; span dimension 3."""
    return load_algebra("m4d4_rank3.alg")


@pytest.fixture(scope="session")
def algs_m6d2() -> dict[str, AlgebraSpec]:
    """The (B,B), (B,0), (0,B) family over F2^6 (+) F2^2."""
    return {
        "bb": load_algebra("m6d2_bb.alg"),
        "b0": load_algebra("m6d2_b0.alg"),
        "0b": load_algebra("m6d2_0b.alg"),
    }


@pytest.fixture(scope="session")
def trapdoor_brick() -> AlgebraSpec:
    return load_algebra("trapdoor_brick.alg")


@pytest.fixture(scope="session")
def trapdoor_cipher() -> CipherSpec:
    return load_cipher("trapdoor.cipher")


@pytest.fixture(scope="session")
def toy_sbox() -> SBox:
    return load_sbox("toy4.sbox")


@pytest.fixture(scope="session")
def present_sbox() -> SBox:
    return load_sbox("present.sbox")


def mats(*rows_lists) -> list[BitMat]:
    return [BitMat.from_lists(rows) for rows in rows_lists]
