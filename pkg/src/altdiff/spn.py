"""A toy substitution-permutation network.

One round is: brick-wise s-box, linear diffusion, XOR of the round key.
Round keys are independent inputs (a long-key cipher); there is no key
schedule.  Brick 0 is the leftmost n bits of the state, and the integer
value of a brick reads its bits most-significant-first, which fixes the
s-box lookup convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .gf2 import BitMat, BitVec, is_invertible, mat_inverse, matrix_from_lines, matrix_to_text


@dataclass(frozen=True)
class SBox:
    """A permutation of {0, ..., 2^n - 1} given by its lookup table."""

    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))

    @property
    def n(self) -> int:
        return (len(self.table) - 1).bit_length()

    def is_bijective(self) -> bool:
        size = len(self.table)
        return size == 1 << self.n and sorted(self.table) == list(range(size))

    def inverse(self) -> "SBox":
        inv = [0] * len(self.table)
        for x, y in enumerate(self.table):
            inv[y] = x
        return SBox(tuple(inv))

    def __call__(self, x: int) -> int:
        return self.table[x]

    @staticmethod
    def from_hex(text: str) -> "SBox":
        """Parse either 2^n hex digits (n = 4) or 2^n byte pairs (n = 8)."""
        tokens = text.split()
        if len(tokens) == 1 and len(tokens[0]) == 16:
            return SBox(tuple(int(c, 16) for c in tokens[0]))
        if len(tokens) == 256 and all(len(t) == 2 for t in tokens):
            return SBox(tuple(int(t, 16) for t in tokens))
        raise ValueError("s-box must be 16 hex digits or 256 byte pairs")

    def to_hex(self) -> str:
        if self.n == 4:
            return "".join(format(v, "x") for v in self.table)
        return " ".join(format(v, "02x") for v in self.table)


@dataclass(frozen=True)
class CipherSpec:
    """h bricks of n bits, an s-box, a diffusion matrix and r round keys."""

    h: int
    n: int
    sbox: SBox
    mu: BitMat
    round_keys: tuple[BitVec, ...]

    def __post_init__(self):
        object.__setattr__(self, "round_keys", tuple(self.round_keys))

    @property
    def width(self) -> int:
        return self.h * self.n

    @property
    def rounds(self) -> int:
        return len(self.round_keys)


def validate_cipher(spec: CipherSpec) -> list[str]:
    failures = []
    if spec.h < 1 or spec.n < 1:
        failures.append(f"bad brick layout: h={spec.h}, n={spec.n}")
        return failures
    if not spec.sbox.is_bijective():
        failures.append("s-box table is not a bijection")
    if spec.sbox.n != spec.n:
        failures.append(f"s-box width {spec.sbox.n} != brick width {spec.n}")
    if spec.mu.rows != spec.width or spec.mu.cols != spec.width:
        failures.append(
            f"diffusion matrix is {spec.mu.rows}x{spec.mu.cols}, expected {spec.width}x{spec.width}"
        )
    elif not is_invertible(spec.mu):
        failures.append("diffusion matrix is singular")
    for i, k in enumerate(spec.round_keys, start=1):
        if k.n != spec.width:
            failures.append(f"round key {i} has length {k.n}, expected {spec.width}")
    return failures


def sbox_layer(spec: CipherSpec, x: BitVec, inverse: bool = False) -> BitVec:
    table = spec.sbox.inverse().table if inverse else spec.sbox.table
    mask = (1 << spec.n) - 1
    out = 0
    for i in range(spec.h):
        shift = spec.n * (spec.h - 1 - i)
        out |= table[(x.bits >> shift) & mask] << shift
    return BitVec(spec.width, out)


def round_apply(spec: CipherSpec, i: int, x: BitVec) -> BitVec:
    """Round i (1-based): s-box layer, then diffusion, then key addition."""
    if not 1 <= i <= spec.rounds:
        raise ValueError(f"round index {i} out of range 1..{spec.rounds}")
    return (sbox_layer(spec, x) @ spec.mu) ^ spec.round_keys[i - 1]


def encrypt(spec: CipherSpec, x: BitVec) -> BitVec:
    for i in range(1, spec.rounds + 1):
        x = round_apply(spec, i, x)
    return x


def decrypt(spec: CipherSpec, y: BitVec) -> BitVec:
    mu_inv = mat_inverse(spec.mu)
    for i in range(spec.rounds, 0, -1):
        y = sbox_layer(spec, (y ^ spec.round_keys[i - 1]) @ mu_inv, inverse=True)
    return y


# ---------------------------------------------------------------------------
# file format
#
# Line-oriented: "h <int>", "n <int>", "r <int>", "sbox <hex>", then either
# "mu inline" followed by a matrix in the standard text format or
# "mu file <relative path>", then "keys <hex> <hex> ..." (r words, each
# width/4 hex digits).  Blank lines and '#' comments are ignored.


def cipher_to_text(spec: CipherSpec) -> str:
    digits = spec.width // 4
    keys = " ".join(format(k.bits, f"0{digits}x") for k in spec.round_keys)
    return (
        f"h {spec.h}\n"
        f"n {spec.n}\n"
        f"r {spec.rounds}\n"
        f"sbox {spec.sbox.to_hex()}\n"
        "mu inline\n" + matrix_to_text(spec.mu) + f"keys {keys}\n"
    )


def cipher_from_text(text: str, base_dir: Path | None = None) -> CipherSpec:
    fields: dict[str, str] = {}
    mu: BitMat | None = None
    lines = iter(text.splitlines())
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(" ")
        value = value.strip()
        if key == "mu":
            if value == "inline":
                mu = matrix_from_lines(lines)
            elif value.startswith("file"):
                ref = value.split(None, 1)[1]
                path = (base_dir or Path(".")) / ref
                mu = matrix_from_lines(iter(path.read_text().splitlines()))
            else:
                raise ValueError(f"bad mu field: {value!r}")
        else:
            fields[key] = value
    for required in ("h", "n", "r", "sbox", "keys"):
        if required not in fields:
            raise ValueError(f"cipher file is missing the '{required}' field")
    if mu is None:
        raise ValueError("cipher file is missing the 'mu' field")
    h, n, r = int(fields["h"]), int(fields["n"]), int(fields["r"])
    width = h * n
    if width % 4:
        raise ValueError("state width must be a multiple of 4 for hex keys")
    sbox = SBox.from_hex(fields["sbox"])
    key_words = fields["keys"].split()
    if len(key_words) != r:
        raise ValueError(f"expected {r} round keys, got {len(key_words)}")
    keys = tuple(BitVec(width, int(w, 16)) for w in key_words)
    spec = CipherSpec(h=h, n=n, sbox=sbox, mu=mu, round_keys=keys)
    failures = validate_cipher(spec)
    if failures:
        raise ValueError("; ".join(failures))
    return spec
