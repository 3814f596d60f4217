"""Binary bi-braces / alternating algebras of class two over GF(2).

One object carries the three equivalent faces of the structure: the algebra
product x*y given by skew-symmetric defining matrices, the group operation
x o y = x + y + x*y, and the translation group {tau_y : x -> x o y} inside
the affine group.  The ambient space splits as V (+) W with dim V = m and
dim W = d, the annihilator being the last d coordinates; vectors are packed
as (V-part | W-part), leftmost coordinate first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .gf2 import (
    BitMat,
    BitVec,
    MatSpace,
    _echelon,
    bilinear_form,
    hconcat_rank,
    matrix_from_lines,
    matrix_to_text,
)


class InvalidAlgebraError(ValueError):
    """Raised when defining data fails the structure conditions."""

    def __init__(self, failures: Sequence[str]):
        super().__init__("; ".join(failures))
        self.failures = list(failures)


@dataclass(frozen=True)
class AlgebraSpec:
    """Defining data: dimensions (m, d) and d skew-symmetric m x m matrices.

    The full space has dimension n = m + d.  Construction does not validate;
    call validate() for a report or use AlgebraSpec.checked().
    """

    m: int
    d: int
    defining: tuple[BitMat, ...]

    def __post_init__(self):
        object.__setattr__(self, "defining", tuple(self.defining))

    @property
    def n(self) -> int:
        return self.m + self.d

    @classmethod
    def checked(cls, m: int, d: int, defining: Sequence[BitMat]) -> "AlgebraSpec":
        spec = cls(m, d, tuple(defining))
        failures = validate(spec)
        if failures:
            raise InvalidAlgebraError(failures)
        return spec

    # -- coordinate plumbing ------------------------------------------------

    def v_part(self, x: BitVec) -> BitVec:
        return x.slice(0, self.m)

    def w_part(self, x: BitVec) -> BitVec:
        return x.slice(self.m, self.n)

    def embed(self, v: BitVec | None, w: BitVec | None) -> BitVec:
        vb = v.bits if v is not None else 0
        wb = w.bits if w is not None else 0
        return BitVec(self.n, (vb << self.d) | wb)

    def vectors(self) -> Iterator[BitVec]:
        for value in range(1 << self.n):
            yield BitVec(self.n, value)

    # -- structure ----------------------------------------------------------

    def phi(self, v1: BitVec, v2: BitVec) -> BitVec:
        """The W-valued bilinear map on V: (v1 B_1 v2^t, ..., v1 B_d v2^t)."""
        acc = 0
        for b in self.defining:
            acc = (acc << 1) | bilinear_form(v1, b, v2)
        return BitVec(self.d, acc)

    def dot(self, x: BitVec, y: BitVec) -> BitVec:
        """Algebra product; lands in the annihilator coordinates."""
        self._check_len(x, y)
        return self.embed(None, self.phi(self.v_part(x), self.v_part(y)))

    def circle(self, x: BitVec, y: BitVec) -> BitVec:
        """The group operation x + y + x*y."""
        self._check_len(x, y)
        return x ^ y ^ self.dot(x, y)

    def lambda_of(self, y: BitVec) -> BitMat:
        """Matrix of x -> x o y + y: unitriangular with block (B_1 y^t ... B_d y^t)."""
        rows = []
        yv = self.v_part(y)
        for i in range(self.m):
            theta_row = 0
            ei = BitVec.basis(self.m, i)
            for b in self.defining:
                theta_row = (theta_row << 1) | bilinear_form(ei, b, yv)
            rows.append((1 << (self.n - 1 - i)) | theta_row)
        for i in range(self.d):
            rows.append(1 << (self.d - 1 - i))
        return BitMat(self.n, tuple(rows))

    def translation_of(self, y: BitVec) -> "AffineMap":
        """The translation tau_y: x -> x @ lambda_y + y."""
        return AffineMap(self.lambda_of(y), y)

    def _check_len(self, *xs: BitVec):
        for x in xs:
            if x.n != self.n:
                raise ValueError(f"vector length {x.n} != algebra dimension {self.n}")


@dataclass(frozen=True)
class AffineMap:
    """x -> x @ lin + offset, acting on row vectors."""

    lin: BitMat
    offset: BitVec

    def __call__(self, x: BitVec) -> BitVec:
        return (x @ self.lin) ^ self.offset

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self followed by other."""
        return AffineMap(self.lin @ other.lin, (self.offset @ other.lin) ^ other.offset)


class LambdaMap:
    """The homomorphism y -> lambda_y of a fixed algebra."""

    def __init__(self, base: AlgebraSpec):
        self.base = base

    def __call__(self, y: BitVec) -> BitMat:
        return self.base.lambda_of(y)


def validate(spec: AlgebraSpec) -> list[str]:
    """Check the defining data; returns a list of violated conditions."""
    failures = []
    if spec.m <= 0 or spec.d <= 0:
        failures.append(f"dimensions must be positive, got m={spec.m}, d={spec.d}")
        return failures
    if len(spec.defining) != spec.d:
        failures.append(f"expected {spec.d} defining matrices, got {len(spec.defining)}")
        return failures
    for i, b in enumerate(spec.defining, start=1):
        if b.rows != spec.m or b.cols != spec.m:
            failures.append(f"B{i} has shape {b.rows}x{b.cols}, expected {spec.m}x{spec.m}")
            return failures
        if any(b.entry(k, k) for k in range(spec.m)):
            failures.append(f"B{i} has a nonzero diagonal entry")
        elif b != b.transpose():
            failures.append(f"B{i} is not symmetric")
    rank = hconcat_rank(list(spec.defining))
    if rank != spec.m:
        failures.append(
            f"concatenated defining matrices have rank {rank} < {spec.m} (degenerate product)"
        )
    return failures


# ---------------------------------------------------------------------------
# derived subspaces


def annihilator_basis(spec: AlgebraSpec) -> list[BitVec]:
    """Basis of {y : x*y = 0 for all x} — the last d coordinates."""
    return [BitVec.basis(spec.n, spec.m + i) for i in range(spec.d)]


def socle_basis(spec: AlgebraSpec) -> list[BitVec]:
    """Basis of {y : x o y = x + y for all x}; equals the annihilator."""
    return annihilator_basis(spec)


def r_squared_basis(spec: AlgebraSpec) -> list[BitVec]:
    """RREF basis of the span of all products x*y, embedded in the last d bits."""
    rows = []
    for i in range(spec.m):
        for j in range(spec.m):
            rows.append(spec.phi(BitVec.basis(spec.m, i), BitVec.basis(spec.m, j)).bits)
    rows, pivots = _echelon(rows, spec.d)
    return [spec.embed(None, BitVec(spec.d, rows[k])) for k in range(len(pivots))]


def r_squared_dim(spec: AlgebraSpec) -> int:
    return len(r_squared_basis(spec))


def defining_span(spec: AlgebraSpec) -> MatSpace:
    return MatSpace(spec.m, spec.defining)


def unidim_data(spec: AlgebraSpec) -> tuple[BitMat, BitVec] | None:
    """For dim R^2 = 1: the span generator B and the coefficient vector b.

    b marks which defining matrices equal B, so the product span is
    generated by (0_m | b).  Returns None if dim R^2 != 1.
    """
    span = defining_span(spec)
    if span.dim != 1:
        return None
    gen = span.basis[0]
    coeff = 0
    for b in spec.defining:
        coeff = (coeff << 1) | (0 if b.is_zero() else 1)
    return gen, BitVec(spec.d, coeff)


def product_image(spec: AlgebraSpec) -> set[BitVec]:
    """The exact set {x*y}; not a subspace in general.  Guarded at n <= 24."""
    if spec.n > 24:
        raise ValueError(f"image enumeration guarded at n <= 24, got n = {spec.n}")
    image = set()
    for v1 in range(1 << spec.m):
        x = BitVec(spec.m, v1)
        for v2 in range(1 << spec.m):
            image.add(spec.embed(None, spec.phi(x, BitVec(spec.m, v2))))
    return image


def key_addition_difference(spec: AlgebraSpec, x: BitVec, k: BitVec, delta: BitVec) -> BitVec:
    """Output o-difference through key addition: (x+k) o ((x o delta)+k).

    Always equals delta + k*delta, independent of x; keys in the socle leave
    delta unchanged.
    """
    return spec.circle(x ^ k, spec.circle(x, delta) ^ k)


# ---------------------------------------------------------------------------
# theta form


@dataclass(frozen=True)
class ThetaMatrix:
    """Compact presentation: the m x (m*d) concatenation of blocks Theta_i.

    Row j of block Theta_i is the d-bit vector (e_j B_1 e_i^t, ..., e_j B_d e_i^t),
    i.e. the columns of Theta_i are the i-th columns of B_1, ..., B_d.
    """

    m: int
    d: int
    mat: BitMat

    def block(self, i: int) -> BitMat:
        return self.mat.submatrix(0, self.m, i * self.d, (i + 1) * self.d)

    def row_of_block(self, i: int, j: int) -> BitVec:
        return self.block(i).row(j)

    def validate(self) -> list[str]:
        failures = []
        if self.mat.rows != self.m or self.mat.cols != self.m * self.d:
            failures.append(
                f"theta has shape {self.mat.rows}x{self.mat.cols}, "
                f"expected {self.m}x{self.m * self.d}"
            )
            return failures
        for i in range(self.m):
            if self.row_of_block(i, i).bits != 0:
                failures.append(f"diagonal row {i + 1} of block {i + 1} is nonzero")
        for i in range(self.m):
            for j in range(i + 1, self.m):
                if self.row_of_block(i, j) != self.row_of_block(j, i):
                    failures.append(f"blocks {i + 1} and {j + 1} are not symmetric to each other")
        flat = [self.block(i).flatten().bits for i in range(self.m)]
        _, pivots = _echelon(flat, self.m * self.d)
        if len(pivots) != self.m:
            failures.append(f"theta blocks span dimension {len(pivots)} < {self.m}")
        return failures


def theta_from_spec(spec: AlgebraSpec) -> ThetaMatrix:
    """Assemble Theta = (Theta_1 ... Theta_m) with Theta_i = (B_1 e_i^t ... B_d e_i^t)."""
    blocks = []
    for i in range(spec.m):
        rows = []
        for j in range(spec.m):
            acc = 0
            for b in spec.defining:
                acc = (acc << 1) | b.entry(j, i)
            rows.append(acc)
        blocks.append(BitMat(spec.d, tuple(rows)))
    acc_mat = blocks[0]
    for b in blocks[1:]:
        acc_mat = acc_mat.hconcat(b)
    return ThetaMatrix(spec.m, spec.d, acc_mat)


def spec_from_theta(theta: ThetaMatrix) -> AlgebraSpec:
    """Inverse of theta_from_spec; rejects data violating the theta conditions."""
    failures = theta.validate()
    if failures:
        raise InvalidAlgebraError(failures)
    m, d = theta.m, theta.d
    mats = []
    for k in range(d):
        rows = []
        for j in range(m):
            acc = 0
            for i in range(m):
                acc = (acc << 1) | theta.block(i).entry(j, k)
            rows.append(acc)
        mats.append(BitMat(m, tuple(rows)))
    return AlgebraSpec.checked(m, d, mats)


# ---------------------------------------------------------------------------
# parallel extension


@dataclass(frozen=True)
class ParallelAlgebra:
    """Direct sum of h copies of a brick algebra, brick-major layout.

    Brick i occupies coordinates [i*(m+d), (i+1)*(m+d)); the product and the
    circle operation act brick-wise.
    """

    brick: AlgebraSpec
    h: int

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("brick count must be >= 1")

    @property
    def width(self) -> int:
        return self.brick.n

    @property
    def n(self) -> int:
        return self.h * self.brick.n

    def split(self, x: BitVec) -> list[BitVec]:
        if x.n != self.n:
            raise ValueError(f"vector length {x.n} != block width {self.n}")
        w = self.width
        return [x.slice(i * w, (i + 1) * w) for i in range(self.h)]

    def join(self, parts: Sequence[BitVec]) -> BitVec:
        acc = parts[0]
        for p in parts[1:]:
            acc = acc.concat(p)
        return acc

    def dot(self, x: BitVec, y: BitVec) -> BitVec:
        return self.join([self.brick.dot(a, b) for a, b in zip(self.split(x), self.split(y))])

    def circle(self, x: BitVec, y: BitVec) -> BitVec:
        return self.join([self.brick.circle(a, b) for a, b in zip(self.split(x), self.split(y))])

    def annihilator_basis(self) -> list[BitVec]:
        out = []
        w = self.width
        for i in range(self.h):
            for a in annihilator_basis(self.brick):
                out.append(BitVec(self.n, a.bits << (self.n - (i + 1) * w)))
        return out

    def socle_basis(self) -> list[BitVec]:
        return self.annihilator_basis()


def parallel_extend(spec: AlgebraSpec, h: int) -> ParallelAlgebra:
    return ParallelAlgebra(spec, h)


# ---------------------------------------------------------------------------
# file format

def algebra_to_text(spec: AlgebraSpec) -> str:
    """Serialize: a "m d" header line, then the d defining matrices."""
    parts = [f"{spec.m} {spec.d}\n"]
    parts.extend(matrix_to_text(b) for b in spec.defining)
    return "".join(parts)


def algebra_from_text(text: str, check: bool = True) -> AlgebraSpec:
    lines = iter(text.splitlines())
    header = _content(lines)
    if header is None:
        raise ValueError("empty algebra file")
    try:
        m, d = map(int, header.split())
    except ValueError:
        raise ValueError(f"bad algebra header: {header!r}") from None
    mats = [matrix_from_lines(lines) for _ in range(d)]
    if check:
        return AlgebraSpec.checked(m, d, mats)
    return AlgebraSpec(m, d, tuple(mats))


def theta_to_text(theta: ThetaMatrix) -> str:
    return f"theta {theta.m} {theta.d}\n" + matrix_to_text(theta.mat)


def theta_from_text(text: str) -> ThetaMatrix:
    lines = iter(text.splitlines())
    header = _content(lines)
    if header is None or not header.startswith("theta"):
        raise ValueError("theta file must start with a 'theta m d' line")
    try:
        _, m, d = header.split()
        m, d = int(m), int(d)
    except ValueError:
        raise ValueError(f"bad theta header: {header!r}") from None
    theta = ThetaMatrix(m, d, matrix_from_lines(lines))
    failures = theta.validate()
    if failures:
        raise InvalidAlgebraError(failures)
    return theta


def _content(lines) -> str | None:
    for raw in lines:
        line = raw.strip()
        if line and not line.startswith("#"):
            return line
    return None
