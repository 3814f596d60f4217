"""Dense bit-packed linear algebra over GF(2).

Vectors are rows and every linear map acts on the right: ``y = x @ M``.
Coordinate 0 is the *leftmost* bit, stored as the most significant bit of
the packed integer payload, so lexicographic order on bit strings equals
numeric order on payloads and the integer value of a vector reads its bits
left to right.  Addition is XOR throughout.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class SingularMatrixError(ValueError):
    """Raised when a matrix inverse is requested but the matrix has no inverse."""


# ---------------------------------------------------------------------------
# vectors


@dataclass(frozen=True)
class BitVec:
    """An immutable row vector over GF(2).

    Attributes:
        n: length in bits.
        bits: packed payload; bit i of the vector is ``(bits >> (n-1-i)) & 1``.
    """

    n: int
    bits: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("vector length must be positive")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError("payload has bits outside the declared length")

    @staticmethod
    def zero(n: int) -> "BitVec":
        return BitVec(n, 0)

    @staticmethod
    def basis(n: int, i: int) -> "BitVec":
        """The i-th canonical basis vector (0-indexed)."""
        if not 0 <= i < n:
            raise ValueError(f"basis index {i} out of range for length {n}")
        return BitVec(n, 1 << (n - 1 - i))

    @staticmethod
    def from_bits(bits: Sequence[int]) -> "BitVec":
        value = 0
        for b in bits:
            value = (value << 1) | (b & 1)
        return BitVec(len(bits), value)

    @staticmethod
    def from_text(text: str) -> "BitVec":
        text = text.strip()
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a bit string: {text!r}")
        return BitVec(len(text), int(text, 2))

    def bit(self, i: int) -> int:
        return (self.bits >> (self.n - 1 - i)) & 1

    def to_bits(self) -> tuple[int, ...]:
        return tuple(self.bit(i) for i in range(self.n))

    def to_text(self) -> str:
        return format(self.bits, f"0{self.n}b")

    def weight(self) -> int:
        return self.bits.bit_count()

    def concat(self, other: "BitVec") -> "BitVec":
        return BitVec(self.n + other.n, (self.bits << other.n) | other.bits)

    def slice(self, start: int, stop: int) -> "BitVec":
        """Sub-vector of coordinates [start, stop)."""
        if not 0 <= start < stop <= self.n:
            raise ValueError("bad slice bounds")
        width = stop - start
        return BitVec(width, (self.bits >> (self.n - stop)) & ((1 << width) - 1))

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BitVec(self.n, self.bits ^ other.bits)

    def __matmul__(self, m: "BitMat") -> "BitVec":
        """Right action ``x @ M`` of a matrix on a row vector."""
        if m.rows != self.n:
            raise ValueError(f"cannot apply {m.rows}x{m.cols} matrix to length-{self.n} vector")
        acc = 0
        bits = self.bits
        for i in range(self.n):
            if (bits >> (self.n - 1 - i)) & 1:
                acc ^= m.row_bits[i]
        return BitVec(m.cols, acc)

    def __repr__(self) -> str:
        return f"BitVec('{self.to_text()}')"


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class BitMat:
    """An immutable matrix over GF(2), stored as packed integer rows.

    Attributes:
        cols: number of columns.
        row_bits: one packed integer per row, leftmost column as MSB.
    """

    cols: int
    row_bits: tuple[int, ...]

    def __post_init__(self):
        if self.cols <= 0 or not self.row_bits:
            raise ValueError("matrix dimensions must be positive")
        if any(not 0 <= r < (1 << self.cols) for r in self.row_bits):
            raise ValueError("row payload has bits outside the declared width")

    @property
    def rows(self) -> int:
        return len(self.row_bits)

    @staticmethod
    def zero(rows: int, cols: int) -> "BitMat":
        return BitMat(cols, (0,) * rows)

    @staticmethod
    def identity(n: int) -> "BitMat":
        return BitMat(n, tuple(1 << (n - 1 - i) for i in range(n)))

    @staticmethod
    def anti_identity(n: int) -> "BitMat":
        """The anti-diagonal permutation matrix (1s at (i, n-1-i))."""
        return BitMat(n, tuple(1 << i for i in range(n)))

    @staticmethod
    def from_lists(entries: Sequence[Sequence[int]]) -> "BitMat":
        cols = len(entries[0])
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged rows")
        rows = []
        for r in entries:
            acc = 0
            for b in r:
                acc = (acc << 1) | (b & 1)
            rows.append(acc)
        return BitMat(cols, tuple(rows))

    @staticmethod
    def from_rows(rows: Sequence[BitVec]) -> "BitMat":
        cols = rows[0].n
        if any(r.n != cols for r in rows):
            raise ValueError("rows of unequal length")
        return BitMat(cols, tuple(r.bits for r in rows))

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.row_bits[i])

    def entry(self, i: int, j: int) -> int:
        return (self.row_bits[i] >> (self.cols - 1 - j)) & 1

    def to_lists(self) -> list[list[int]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def transpose(self) -> "BitMat":
        out = [0] * self.cols
        for i, r in enumerate(self.row_bits):
            bit = 1 << (self.rows - 1 - i)
            for j in range(self.cols):
                if (r >> (self.cols - 1 - j)) & 1:
                    out[j] |= bit
        return BitMat(self.rows, tuple(out))

    def __xor__(self, other: "BitMat") -> "BitMat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in matrix addition")
        return BitMat(self.cols, tuple(a ^ b for a, b in zip(self.row_bits, other.row_bits)))

    def __matmul__(self, other: "BitMat") -> "BitMat":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for r in self.row_bits:
            acc = 0
            for k in range(self.cols):
                if (r >> (self.cols - 1 - k)) & 1:
                    acc ^= other.row_bits[k]
            out.append(acc)
        return BitMat(other.cols, tuple(out))

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.row_bits)

    def hconcat(self, other: "BitMat") -> "BitMat":
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hconcat")
        return BitMat(
            self.cols + other.cols,
            tuple((a << other.cols) | b for a, b in zip(self.row_bits, other.row_bits)),
        )

    def flatten(self) -> BitVec:
        """Rows concatenated into one vector of length rows*cols."""
        acc = 0
        for r in self.row_bits:
            acc = (acc << self.cols) | r
        return BitVec(self.rows * self.cols, acc)

    def submatrix(self, row0: int, row1: int, col0: int, col1: int) -> "BitMat":
        """Rows [row0, row1) and columns [col0, col1)."""
        width = col1 - col0
        mask = (1 << width) - 1
        shift = self.cols - col1
        return BitMat(width, tuple((self.row_bits[i] >> shift) & mask for i in range(row0, row1)))

    def __repr__(self) -> str:
        body = ",".join(format(r, f"0{self.cols}b") for r in self.row_bits)
        return f"BitMat[{body}]"


def bilinear_form(x: BitVec, b: BitMat, y: BitVec) -> int:
    """Evaluate the scalar x * B * y^t over GF(2)."""
    if x.n != b.rows or y.n != b.cols:
        raise ValueError("dimension mismatch in bilinear form")
    return ((x @ b).bits & y.bits).bit_count() & 1


def block_matrix(blocks: Sequence[Sequence[BitMat]]) -> BitMat:
    """Assemble a matrix from a rectangular grid of blocks."""
    out: list[BitMat] = []
    for block_row in blocks:
        acc = block_row[0]
        for b in block_row[1:]:
            acc = acc.hconcat(b)
        out.append(acc)
    cat = out[0]
    rows = list(cat.row_bits)
    for b in out[1:]:
        if b.cols != cat.cols:
            raise ValueError("block rows of unequal total width")
        rows.extend(b.row_bits)
    return BitMat(cat.cols, tuple(rows))


# ---------------------------------------------------------------------------
# elimination

def _echelon(rows: list[int], cols: int) -> tuple[list[int], list[int]]:
    """In-place reduced row echelon form; leftmost-pivot tie-breaking.

    Returns (rows, pivot column indices).  Rows below the rank are zero.
    """
    pivots: list[int] = []
    rank = 0
    for col in range(cols):
        mask = 1 << (cols - 1 - col)
        pivot = next((i for i in range(rank, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
        pivots.append(col)
        rank += 1
    return rows, pivots


def mat_rank(m: BitMat) -> int:
    """Rank of a matrix over GF(2)."""
    _, pivots = _echelon(list(m.row_bits), m.cols)
    return len(pivots)


def row_space_basis(m: BitMat) -> list[BitVec]:
    """RREF basis of the row space, in pivot order (deterministic)."""
    rows, pivots = _echelon(list(m.row_bits), m.cols)
    return [BitVec(m.cols, rows[i]) for i in range(len(pivots))]


def kernel_basis(m: BitMat) -> list[BitVec]:
    """RREF basis of the left kernel {x : x @ M = 0}."""
    n = m.rows
    # Augment each row with the unit vector recording the combination.
    aug = [(m.row_bits[i] << n) | (1 << (n - 1 - i)) for i in range(n)]
    aug, _ = _echelon(aug, m.cols + n)
    width_mask = (1 << n) - 1
    combos = [r & width_mask for r in aug if (r >> n) == 0 and r != 0]
    combos, _ = _echelon(combos, n)
    return [BitVec(n, c) for c in combos if c]


def mat_inverse(m: BitMat) -> BitMat:
    """Inverse of a square matrix; raises SingularMatrixError if none exists."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = [(m.row_bits[i] << n) | (1 << (n - 1 - i)) for i in range(n)]
    aug, pivots = _echelon(aug, 2 * n)
    if pivots != list(range(n)):
        raise SingularMatrixError(f"matrix of rank {len([p for p in pivots if p < n])} < {n}")
    return BitMat(n, tuple(r & ((1 << n) - 1) for r in aug))


def is_invertible(m: BitMat) -> bool:
    return m.rows == m.cols and mat_rank(m) == m.rows


def solve_left(m: BitMat, b: BitVec) -> BitVec | None:
    """Solve x @ M = b; None if inconsistent.

    When the solution space is a coset, returns its lexicographically least
    element (least packed payload).
    """
    if b.n != m.cols:
        raise ValueError("right-hand side width mismatch")
    n = m.rows
    aug = [(m.row_bits[i] << n) | (1 << (n - 1 - i)) for i in range(n)]
    aug, _ = _echelon(aug, m.cols + n)
    residual = b.bits
    combo = 0
    for r in aug:
        left = r >> n
        if left and residual & (1 << (left.bit_length() - 1)):
            residual ^= left
            combo ^= r & ((1 << n) - 1)
    if residual:
        return None
    # Reduce to the coset leader with the kernel basis.
    for k in kernel_basis(m):
        lead = 1 << (n - 1 - next(i for i in range(n) if k.bit(i)))
        if combo & lead:
            combo ^= k.bits
    return BitVec(n, combo)


# ---------------------------------------------------------------------------
# forms and congruence


def congruence_apply(a: BitMat, x: BitMat) -> BitMat:
    """The congruence action A * X * A^t."""
    if a.rows != a.cols or x.rows != x.cols or a.cols != x.rows:
        raise ValueError("congruence needs square matrices of matching size")
    return a @ x @ a.transpose()


def hconcat_rank(mats: Sequence[BitMat]) -> int:
    """Rank of the horizontal concatenation of same-height matrices."""
    if not mats:
        raise ValueError("empty matrix list")
    acc = mats[0]
    for m in mats[1:]:
        acc = acc.hconcat(m)
    return mat_rank(acc)


def is_skew_symmetric(m: BitMat) -> bool:
    """True iff M is symmetric with an all-zero diagonal (skew over GF(2))."""
    if m.rows != m.cols:
        raise ValueError("skew-symmetry is defined for square matrices")
    return all(m.entry(i, i) == 0 for i in range(m.rows)) and m == m.transpose()


def symplectic_reduce(b: BitMat) -> tuple[BitMat, BitMat]:
    """Reduce a full-rank skew-symmetric matrix to the standard alternating form.

    Returns (A, J) with A invertible, J the anti-diagonal permutation matrix
    of the same size, and A * B * A^t = J.  Deterministic: the hyperbolic
    pairs are extracted greedily in canonical-basis order.
    """
    if not is_skew_symmetric(b):
        raise ValueError("input is not skew-symmetric")
    m = b.rows
    if m % 2 or mat_rank(b) != m:
        raise ValueError("symplectic reduction requires full (even) rank")

    def form(u: int, v: int) -> int:
        acc = 0
        for i in range(m):
            if (u >> (m - 1 - i)) & 1:
                acc ^= b.row_bits[i]
        return (acc & v).bit_count() & 1

    remaining = [1 << (m - 1 - i) for i in range(m)]
    firsts: list[int] = []
    seconds: list[int] = []
    while remaining:
        u = remaining.pop(0)
        w_idx = next(i for i, v in enumerate(remaining) if form(u, v))
        w = remaining.pop(w_idx)
        remaining = [v ^ (u if form(v, w) else 0) ^ (w if form(u, v) else 0) for v in remaining]
        firsts.append(u)
        seconds.append(w)
    a = BitMat(m, tuple(firsts + seconds[::-1]))
    j = BitMat.anti_identity(m)
    assert congruence_apply(a, b) == j
    return a, j


# ---------------------------------------------------------------------------
# matrix subspaces


class MatSpace:
    """A subspace of m x m matrices over GF(2), kept as an RREF basis.

    The basis is stored in a deterministic reduced form (matrices flattened
    row-major and row-reduced), so equal spaces compare equal.
    """

    def __init__(self, size: int, generators: Iterable[BitMat]):
        self.size = size
        flat = []
        for g in generators:
            if g.rows != size or g.cols != size:
                raise ValueError("generator of wrong shape")
            flat.append(g.flatten().bits)
        flat, _ = _echelon(flat, size * size)
        self.basis: tuple[BitMat, ...] = tuple(
            _unflatten(f, size) for f in flat if f
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, m: BitMat) -> bool:
        if m.rows != self.size or m.cols != self.size:
            return False
        rows = [b.flatten().bits for b in self.basis]
        probe = m.flatten().bits
        for r in rows:
            lead = 1 << (r.bit_length() - 1)
            if probe & lead:
                probe ^= r
        return probe == 0

    def elements(self) -> Iterator[BitMat]:
        """Every matrix in the span (2**dim of them)."""
        for mask in range(1 << self.dim):
            acc = 0
            for i in range(self.dim):
                if (mask >> i) & 1:
                    acc ^= self.basis[i].flatten().bits
            yield _unflatten(acc, self.size)

    def rank_multiset(self) -> tuple[int, ...]:
        """Sorted ranks of all span elements; congruence-invariant."""
        return tuple(sorted(mat_rank(m) for m in self.elements()))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MatSpace)
            and self.size == other.size
            and self.basis == other.basis
        )

    def __repr__(self) -> str:
        return f"MatSpace(size={self.size}, dim={self.dim})"


def _unflatten(bits: int, size: int) -> BitMat:
    mask = (1 << size) - 1
    return BitMat(size, tuple((bits >> (size * (size - 1 - i))) & mask for i in range(size)))


# ---------------------------------------------------------------------------
# text format

def matrix_to_text(m: BitMat) -> str:
    """Serialize: a "rows cols" header line, then one 0/1 row per line."""
    lines = [f"{m.rows} {m.cols}"]
    lines.extend(format(r, f"0{m.cols}b") for r in m.row_bits)
    return "\n".join(lines) + "\n"


def matrix_from_lines(lines: Iterator[str]) -> BitMat:
    """Parse one matrix from an iterator of lines (see matrix_to_text).

    Blank lines and lines starting with '#' are skipped.  The iterator is
    left positioned after the matrix, so several matrices can be read from
    one stream.
    """
    header = _next_content_line(lines)
    if header is None:
        raise ValueError("expected a matrix header line, got end of input")
    try:
        rows, cols = map(int, header.split())
    except ValueError:
        raise ValueError(f"bad matrix header: {header!r}") from None
    if rows <= 0 or cols <= 0:
        raise ValueError(f"bad matrix dimensions: {rows} x {cols}")
    out = []
    for _ in range(rows):
        line = _next_content_line(lines)
        if line is None:
            raise ValueError("matrix body ended early")
        if len(line) != cols or any(c not in "01" for c in line):
            raise ValueError(f"bad matrix row: {line!r}")
        out.append(int(line, 2))
    return BitMat(cols, tuple(out))


def matrix_from_text(text: str) -> BitMat:
    return matrix_from_lines(iter(text.splitlines()))


def _next_content_line(lines: Iterator[str]) -> str | None:
    for raw in lines:
        line = raw.strip()
        if line and not line.startswith("#"):
            return line
    return None
