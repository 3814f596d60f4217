#!/usr/bin/env python3
"""Regenerate everything under fixtures/ deterministically.

The trapdoor cipher fixture is built by the pipeline itself: the s-box is a
fixed 4-bit permutation with XOR uniformity 4 whose circle-DDT is maximally
biased for the selected algebra, the diffusion layer is the seed-0 sample
from the automorphism group of the parallel extension, and the round keys
are drawn from one seeded generator.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from altdiff.algebra import AlgebraSpec, ParallelAlgebra, algebra_to_text
from altdiff.autos import sample_parallel_automorphism
from altdiff.difflab import trapdoor_pipeline
from altdiff.gf2 import BitMat, BitVec
from altdiff.spn import CipherSpec, SBox, cipher_to_text

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "fixtures"

TOY_SBOX = "81a0937f6db2c4e5"
PRESENT_SBOX = "c56b90ad3ef84712"
MU_SEED = 0
KEY_SEED = 97
ROUNDS = 4


def write(name: str, text: str) -> None:
    (OUT / name).write_text(text)
    print(f"wrote fixtures/{name}")


def main() -> None:
    OUT.mkdir(exist_ok=True)

    b2 = BitMat.from_lists([[0, 1], [1, 0]])
    zero2 = BitMat.zero(2, 2)
    write(
        "m2d1.alg",
        "# three-dimensional algebra: e1*e2 = e3\n" + algebra_to_text(AlgebraSpec(2, 1, (b2,))),
    )

    b1 = BitMat.from_lists([[0, 0, 1, 1], [0, 0, 1, 0], [1, 1, 0, 1], [1, 0, 1, 0]])
    b2m = BitMat.from_lists([[0, 0, 0, 0], [0, 0, 1, 1], [0, 1, 0, 0], [0, 1, 0, 0]])
    b3 = BitMat.from_lists([[0, 0, 0, 1], [0, 0, 1, 1], [0, 1, 0, 0], [1, 1, 0, 0]])
    b4 = BitMat.from_lists([[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]])
    write(
        "m4d4_full.alg",
        "# four independent defining matrices: product span has dimension 4\n"
        + algebra_to_text(AlgebraSpec(4, 4, (b1, b2m, b3, b4))),
    )
    write(
        "m4d4_rank3.alg",
        "# dependent fourth matrix: product span has dimension 3\n"
        + algebra_to_text(AlgebraSpec(4, 4, (b1, b2m, b3, b1 ^ b2m ^ b3))),
    )

    j6 = BitMat.anti_identity(6)
    zero6 = BitMat.zero(6, 6)
    write("m6d2_bb.alg", algebra_to_text(AlgebraSpec(6, 2, (j6, j6))))
    write("m6d2_b0.alg", algebra_to_text(AlgebraSpec(6, 2, (j6, zero6))))
    write("m6d2_0b.alg", algebra_to_text(AlgebraSpec(6, 2, (zero6, j6))))

    write("toy4.sbox", "# toy 4-bit s-box fixture (XOR uniformity 4)\n" + TOY_SBOX + "\n")
    write(
        "present.sbox",
        "# 4-bit s-box of the PRESENT block cipher (Bogdanov et al., CHES 2007).\n"
        "# Externally sourced fixture data for exercising the tooling.\n" + PRESENT_SBOX + "\n",
    )

    box = SBox.from_hex(TOY_SBOX)
    report = trapdoor_pipeline(box, 2, 2, h=2, seed=11, mu_candidates=8)
    write(
        "trapdoor_brick.alg",
        "# algebra selected by the trapdoor pipeline for the toy s-box\n"
        + algebra_to_text(report.algebra),
    )

    mu = sample_parallel_automorphism(
        ParallelAlgebra(report.algebra, 2), random.Random(MU_SEED)
    )
    rng = random.Random(KEY_SEED)
    keys = tuple(BitVec(8, rng.randrange(256)) for _ in range(ROUNDS))
    cipher = CipherSpec(h=2, n=4, sbox=box, mu=mu, round_keys=keys)
    write(
        "trapdoor.cipher",
        "# 2x4-bit, 4-round trapdoor cipher: mu is the seed-0 automorphism of the\n"
        "# parallel extension of the algebra in trapdoor_brick.alg\n" + cipher_to_text(cipher),
    )


if __name__ == "__main__":
    main()
