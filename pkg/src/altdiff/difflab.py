"""Differential analysis under XOR and under the circle operation.

Probabilities of trails are exact dyadic rationals and are kept as
Fractions; experiment loops (distinguisher, key recovery) are vectorized
and draw all randomness from one seeded generator, so fixed seeds give
bit-identical results regardless of how the work would be partitioned.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import AlgebraSpec, ParallelAlgebra
from .autos import sample_parallel_automorphism
from .axioms import op_tables
from .gf2 import BitMat, BitVec, is_invertible, mat_inverse, mat_rank
from .spn import CipherSpec, SBox

OP_XOR = "xor"
OP_CIRCLE = "circle"

TRAIL_STATE_LIMIT = 12
MARKOV_STATE_LIMIT = 10


def _require_algebra(op: str, algebra: AlgebraSpec | None, n: int) -> AlgebraSpec | None:
    if op == OP_XOR:
        return None
    if op != OP_CIRCLE:
        raise ValueError(f"unknown operation {op!r}")
    if algebra is None:
        raise ValueError("the circle operation needs an algebra")
    if algebra.n != n:
        raise ValueError(f"algebra width {algebra.n} != brick width {n}")
    return algebra


# ---------------------------------------------------------------------------
# difference distribution tables


@dataclass(frozen=True)
class DDT:
    """Exact difference counts of an s-box under the chosen operation."""

    op: str
    n: int
    counts: tuple[tuple[int, ...], ...]

    def row(self, delta_in: int) -> tuple[int, ...]:
        return self.counts[delta_in]


def ddt(sbox: SBox, op: str = OP_XOR, algebra: AlgebraSpec | None = None) -> DDT:
    """Tabulate #{x : S(x) (*) S(x (*) di) = do} for every difference pair."""
    n = sbox.n
    algebra = _require_algebra(op, algebra, n)
    size = 1 << n
    table = np.array(sbox.table, dtype=np.uint32)
    xs = np.arange(size, dtype=np.uint32)
    if op == OP_XOR:
        combine = lambda a, b: a ^ b  # noqa: E731
    else:
        circ = op_tables(algebra).circ
        combine = lambda a, b: circ[a, b]  # noqa: E731
    rows = []
    for di in range(size):
        out = combine(table[xs], table[combine(xs, np.uint32(di))])
        rows.append(tuple(int(c) for c in np.bincount(out, minlength=size)))
    return DDT(op, n, tuple(rows))


def max_bias(table: DDT) -> tuple[int, int, int]:
    """Largest count over nonzero input differences; lexicographic ties.

    Returns (delta_in, delta_out, count).
    """
    best = (0, 0, -1)
    for di in range(1, 1 << table.n):
        for do, c in enumerate(table.counts[di]):
            if c > best[2]:
                best = (di, do, c)
    return best


# ---------------------------------------------------------------------------
# key-addition factor


def key_addition_factor(spec: AlgebraSpec, delta: BitVec) -> Fraction:
    """P_k(delta + k*delta = delta) = #{k : k*delta = 0} / 2^n, exactly.

    k*delta = 0 iff the V-part of k kills the linear map v -> phi(v, dV),
    so the count is 2^(n - rank(B_1 dV^t | ... | B_d dV^t)).
    """
    if delta.n != spec.n:
        raise ValueError("difference width mismatch")
    dv = spec.v_part(delta)
    cols = []
    for i in range(spec.m):
        acc = 0
        ei = BitVec.basis(spec.m, i)
        for b in spec.defining:
            acc = (acc << 1) | ((b.row_bits[i] & dv.bits).bit_count() & 1)
        cols.append(acc)
    rank = mat_rank(BitMat(spec.d, tuple(cols)))
    return Fraction(1, 1 << rank)


def block_key_factor(parallel: ParallelAlgebra, delta: BitVec) -> Fraction:
    """Brick-wise product of key-addition factors at block width."""
    out = Fraction(1)
    for part in parallel.split(delta):
        out *= key_addition_factor(parallel.brick, part)
    return out


# ---------------------------------------------------------------------------
# diffusion-layer compatibility


def is_circle_linear(parallel: ParallelAlgebra, mu: BitMat) -> bool:
    """True iff mu is linear for both operations: (x*y)mu = (x mu)*(y mu).

    Checked on basis pairs, sufficient by bilinearity; makes circle
    differences propagate through mu deterministically.
    """
    n = parallel.n
    if mu.rows != n or mu.cols != n or not is_invertible(mu):
        return False
    basis = [BitVec.basis(n, i) for i in range(n)]
    images = [b @ mu for b in basis]
    for i in range(n):
        for j in range(i, n):
            if parallel.dot(basis[i], basis[j]) @ mu != parallel.dot(images[i], images[j]):
                return False
    return True


# ---------------------------------------------------------------------------
# trails


@dataclass(frozen=True)
class TrailRound:
    delta_in: int
    delta_mid: int
    delta_out: int
    sbox_prob: Fraction
    key_factor: Fraction


@dataclass(frozen=True)
class Trail:
    """A per-round difference sequence; entry is the input difference.

    An empty round tuple is a zero-round trail whose output difference is
    its input difference.
    """

    op: str
    width: int
    entry: int
    rounds: tuple[TrailRound, ...]

    @property
    def delta_in(self) -> int:
        return self.entry

    @property
    def delta_out(self) -> int:
        return self.rounds[-1].delta_out if self.rounds else self.entry

    @property
    def probability(self) -> Fraction:
        p = Fraction(1)
        for r in self.rounds:
            p *= r.sbox_prob * r.key_factor
        return p


def trail_search(
    cipher: CipherSpec,
    op: str = OP_XOR,
    algebra: AlgebraSpec | None = None,
    rounds: int | None = None,
    beam: int | None = None,
) -> Trail | None:
    """Highest-probability trail under round independence; branch and bound.

    Per round: brick-wise s-box transitions weighted by the DDT, the
    deterministic diffusion transition, and (for circle) the key-addition
    factor of the post-diffusion difference.  Ties resolve to the
    lexicographically least difference sequence.  A beam value caps the
    per-node branching (beam=None searches exactly).  Circle trails refuse
    diffusion layers that are not linear for the circle operation, whose
    transitions would not be deterministic.
    """
    rounds = cipher.rounds if rounds is None else rounds
    if rounds < 1:
        raise ValueError("trail needs at least one round")
    n, h, width = cipher.n, cipher.h, cipher.width
    if width > TRAIL_STATE_LIMIT:
        raise ValueError(f"trail search guarded at width <= {TRAIL_STATE_LIMIT}")
    algebra = _require_algebra(op, algebra, n)
    parallel = ParallelAlgebra(algebra, h) if algebra else None
    if op == OP_CIRCLE and not is_circle_linear(parallel, cipher.mu):
        raise ValueError(
            "non-deterministic diffusion transition: mu is not linear for the circle operation"
        )

    table = ddt(cipher.sbox, op, algebra)
    size = 1 << n
    transitions: list[list[tuple[int, int]]] = []
    for di in range(size):
        transitions.append([(do, c) for do, c in enumerate(table.counts[di]) if c])
    max_count = max(c for di in range(1, size) for _, c in transitions[di])
    round_bound = Fraction(max_count, size)

    mu_table = _matrix_table(cipher.mu)
    if op == OP_CIRCLE:
        factor_brick = [key_addition_factor(algebra, BitVec(n, v)) for v in range(size)]
    else:
        factor_brick = [Fraction(1)] * size
    mask = size - 1
    shifts = [n * (h - 1 - i) for i in range(h)]

    def block_factor(v: int) -> Fraction:
        out = Fraction(1)
        for s in shifts:
            out *= factor_brick[(v >> s) & mask]
        return out

    best: dict[str, object] = {"prob": Fraction(0), "trail": None}

    def expand(delta: int):
        """Brick-wise s-box branches: (delta_mid, sbox probability)."""
        per_brick = []
        for s in shifts:
            di = (delta >> s) & mask
            per_brick.append([(do << s, c) for do, c in transitions[di]])
        combos = []
        for parts in itertools.product(*per_brick):
            mid = 0
            num = 1
            for p, c in parts:
                mid |= p
                num *= c
            combos.append((mid, Fraction(num, size**h)))
        if beam is not None and len(combos) > beam:
            combos.sort(key=lambda t: (-t[1], t[0]))
            combos = combos[:beam]
            combos.sort(key=lambda t: t[0])
        return combos

    def dfs(delta: int, depth: int, prob: Fraction, acc: list[TrailRound]):
        if depth == rounds:
            if prob > best["prob"]:
                best["prob"] = prob
                best["trail"] = Trail(op, width, acc[0].delta_in, tuple(acc))
            return
        remaining_bound = round_bound ** (rounds - depth - 1)
        for mid, sp in expand(delta):
            out = mu_table[mid]
            kf = block_factor(out)
            nxt = prob * sp * kf
            if nxt == 0 or nxt * remaining_bound <= best["prob"]:
                continue
            acc.append(TrailRound(delta, mid, out, sp, kf))
            dfs(out, depth + 1, nxt, acc)
            acc.pop()

    for delta_in in range(1, 1 << width):
        if round_bound**rounds <= best["prob"]:
            break
        dfs(delta_in, 0, Fraction(1), [])
    return best["trail"]


def _matrix_table(m: BitMat) -> list[int]:
    """Tabulated right action of a square matrix; guarded at width <= 16."""
    n = m.rows
    if n > 16:
        raise ValueError("matrix table guarded at width <= 16")
    out = []
    for v in range(1 << n):
        acc = 0
        for i in range(n):
            if (v >> (n - 1 - i)) & 1:
                acc ^= m.row_bits[i]
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# experiments


def _np_tables(cipher: CipherSpec, op: str, algebra: AlgebraSpec | None):
    sb = np.array(cipher.sbox.table, dtype=np.uint32)
    mu_t = np.array(_matrix_table(cipher.mu), dtype=np.uint32)
    circ = op_tables(algebra).circ if op == OP_CIRCLE else None
    return sb, mu_t, circ


def _brick_map(values: np.ndarray, other, table, h: int, n: int):
    """Apply a 2-argument brick table (or XOR) brick-wise at block width."""
    mask = (1 << n) - 1
    out = np.zeros_like(values)
    for i in range(h):
        s = n * (h - 1 - i)
        a = (values >> s) & mask
        b = (other >> s) & mask
        out |= (table[a, b] if table is not None else a ^ b) << np.uint32(s)
    return out


def _sbox_layer_vec(state: np.ndarray, sb: np.ndarray, h: int, n: int) -> np.ndarray:
    mask = (1 << n) - 1
    out = np.zeros_like(state)
    for i in range(h):
        s = n * (h - 1 - i)
        out |= sb[(state >> s) & mask] << np.uint32(s)
    return out


def distinguisher(
    cipher: CipherSpec,
    delta_in: int,
    delta_out: int,
    samples: int,
    seed: int,
    op: str = OP_XOR,
    algebra: AlgebraSpec | None = None,
) -> float:
    """Observed probability of the differential over random texts and keys.

    Every sample draws a fresh plaintext and fresh independent round keys;
    the fraction of samples with E(x) (*) E(x (*) delta_in) = delta_out is
    returned.  Bit-reproducible for a fixed seed.
    """
    algebra = _require_algebra(op, algebra, cipher.n)
    h, n, width, r = cipher.h, cipher.n, cipher.width, cipher.rounds
    sb, mu_t, circ = _np_tables(cipher, op, algebra)
    rng = np.random.default_rng(seed)
    x1 = rng.integers(0, 1 << width, size=samples, dtype=np.uint32)
    keys = rng.integers(0, 1 << width, size=(r, samples), dtype=np.uint32)
    x2 = _brick_map(x1, delta_in, circ, h, n)
    s1, s2 = x1, x2
    for i in range(r):
        s1 = _sbox_layer_vec(s1, sb, h, n)
        s2 = _sbox_layer_vec(s2, sb, h, n)
        s1 = mu_t[s1] ^ keys[i]
        s2 = mu_t[s2] ^ keys[i]
    diff = _brick_map(s1, s2, circ, h, n)
    return float(np.mean(diff == delta_out))


def markov_probability(
    cipher: CipherSpec,
    delta_in: int,
    delta_out: int,
    op: str = OP_XOR,
    algebra: AlgebraSpec | None = None,
    rounds: int | None = None,
) -> float:
    """Exact differential probability under the independent-round-key model.

    Computed by propagating the full difference distribution through the
    per-round transition kernels (s-box layer by DDT product, diffusion by
    permutation, key addition by the exact brick-wise error distribution).
    All quantities are dyadic and exactly representable, so this is an
    independent oracle for the distinguisher.
    """
    algebra = _require_algebra(op, algebra, cipher.n)
    h, n, width = cipher.h, cipher.n, cipher.width
    rounds = cipher.rounds if rounds is None else rounds
    if width > MARKOV_STATE_LIMIT:
        raise ValueError(f"markov oracle guarded at width <= {MARKOV_STATE_LIMIT}")
    if op == OP_CIRCLE:
        parallel = ParallelAlgebra(algebra, h)
        if not is_circle_linear(parallel, cipher.mu):
            raise ValueError("mu is not linear for the circle operation")

    brick = np.array(ddt(cipher.sbox, op, algebra).counts, dtype=np.float64) / (1 << n)
    t_gamma = brick
    for _ in range(h - 1):
        t_gamma = np.kron(t_gamma, brick)
    mu_t = np.array(_matrix_table(cipher.mu), dtype=np.int64)

    if op == OP_CIRCLE:
        t_key_brick = np.zeros((1 << n, 1 << n), dtype=np.float64)
        for v in range(1 << n):
            image = _error_image(algebra, v)
            p = 1.0 / len(image)
            for w in image:
                t_key_brick[v, v ^ w] += p
        t_key = t_key_brick
        for _ in range(h - 1):
            t_key = np.kron(t_key, t_key_brick)
    else:
        t_key = None

    vec = np.zeros(1 << width, dtype=np.float64)
    vec[delta_in] = 1.0
    for _ in range(rounds):
        vec = vec @ t_gamma
        permuted = np.zeros_like(vec)
        permuted[mu_t] = vec
        vec = permuted
        if t_key is not None:
            vec = vec @ t_key
    return float(vec[delta_out])


def _error_image(spec: AlgebraSpec, v: int) -> list[int]:
    """All values of k*delta (as packed integers) for delta = v, k uniform."""
    delta = BitVec(spec.n, v)
    seen = {0}
    basis = []
    for i in range(spec.m):
        w = spec.dot(spec.embed(BitVec.basis(spec.m, i), None), delta).bits
        if w not in seen:
            basis.append(w)
            seen = {a ^ b for a in seen for b in [0, w]}
    return sorted(seen)


# ---------------------------------------------------------------------------
# key recovery


@dataclass(frozen=True)
class AttackResult:
    """Candidate ranking for one brick of the transformed last-round key."""

    brick_index: int
    ranking: tuple[tuple[int, int], ...]
    pairs: int
    observed: float

    @property
    def best_candidate(self) -> int:
        return self.ranking[0][0]

    def rank_of(self, candidate: int) -> int:
        for idx, (cand, _) in enumerate(self.ranking):
            if cand == candidate:
                return idx + 1
        raise ValueError("candidate outside the ranking")


def equivalent_last_round_key(cipher: CipherSpec) -> BitVec:
    """The last round key pulled through the diffusion layer: k_r @ mu^-1.

    Peeling y -> y @ mu^-1 turns the last round into a brick-local map, so
    this is the key the brick-wise attack actually recovers.
    """
    return cipher.round_keys[-1] @ mat_inverse(cipher.mu)


def last_round_key_recovery(
    cipher: CipherSpec,
    trail: Trail,
    pairs: int,
    seed: int,
    algebra: AlgebraSpec | None = None,
    brick_index: int = 0,
) -> AttackResult:
    """Rank last-round key-brick candidates by partial decryption counts.

    The trail must cover rounds-1 rounds; its output difference predicts the
    difference entering the last round.  For each of the 2^n candidates the
    last round is peeled on one brick and the predicted brick difference is
    counted over chosen-plaintext pairs.
    """
    if trail.width != cipher.width:
        raise ValueError("trail width does not match the cipher")
    if len(trail.rounds) != cipher.rounds - 1:
        raise ValueError(
            f"trail covers {len(trail.rounds)} rounds, expected {cipher.rounds - 1}"
        )
    h, n = cipher.h, cipher.n
    if pairs < (1 << n):
        raise ValueError(f"need at least {1 << n} pairs for {1 << n} candidates")
    algebra = _require_algebra(trail.op, algebra, n)
    sb, mu_t, circ = _np_tables(cipher, trail.op, algebra)
    inv_sb = np.array(cipher.sbox.inverse().table, dtype=np.uint32)
    mu_inv_t = np.array(_matrix_table(mat_inverse(cipher.mu)), dtype=np.uint32)

    rng = np.random.default_rng(seed)
    x1 = rng.integers(0, 1 << cipher.width, size=pairs, dtype=np.uint32)
    x2 = _brick_map(x1, trail.delta_in, circ, h, n)
    keys = [np.uint32(k.bits) for k in cipher.round_keys]
    s1, s2 = x1, x2
    for i in range(cipher.rounds):
        s1 = mu_t[_sbox_layer_vec(s1, sb, h, n)] ^ keys[i]
        s2 = mu_t[_sbox_layer_vec(s2, sb, h, n)] ^ keys[i]

    shift = n * (h - 1 - brick_index)
    mask = (1 << n) - 1
    c1 = (mu_inv_t[s1] >> shift) & mask
    c2 = (mu_inv_t[s2] >> shift) & mask
    target = (trail.delta_out >> shift) & mask

    counters = []
    for guess in range(1 << n):
        w1 = inv_sb[c1 ^ guess]
        w2 = inv_sb[c2 ^ guess]
        got = circ[w1, w2] if circ is not None else w1 ^ w2
        counters.append(int(np.count_nonzero(got == target)))
    ranking = tuple(
        sorted(((cand, cnt) for cand, cnt in enumerate(counters)), key=lambda t: (-t[1], t[0]))
    )
    return AttackResult(
        brick_index=brick_index,
        ranking=ranking,
        pairs=pairs,
        observed=ranking[0][1] / pairs,
    )


# ---------------------------------------------------------------------------
# trapdoor construction


@dataclass(frozen=True)
class TrapdoorReport:
    algebra: AlgebraSpec
    mu: BitMat
    h: int
    seed: int
    xor_bias: tuple[int, int, int]
    circle_bias: tuple[int, int, int]
    improves: bool
    diffusion_score: int
    algebras_scored: int
    mu_candidates: int


def enumerate_unidim_algebras(m: int, d: int):
    """All algebras with a one-dimensional product span, deterministic order.

    They are exactly the pairs (B, b): a full-rank skew-symmetric generator
    and a nonzero coefficient vector.  Guarded at m <= 6.
    """
    if m % 2 or m <= 0:
        raise ValueError("the generator must be symplectic, so m must be even")
    if m > 6:
        raise ValueError("algebra enumeration guarded at m <= 6")
    positions = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for bits in range(1 << len(positions)):
        rows = [0] * m
        for idx, (i, j) in enumerate(positions):
            if (bits >> idx) & 1:
                rows[i] |= 1 << (m - 1 - j)
                rows[j] |= 1 << (m - 1 - i)
        gen = BitMat(m, tuple(rows))
        if mat_rank(gen) != m:
            continue
        for b in range(1, 1 << d):
            mats = [gen if (b >> (d - 1 - k)) & 1 else BitMat.zero(m, m) for k in range(d)]
            yield AlgebraSpec(m, d, tuple(mats))


def diffusion_score(h: int, n: int, mu: BitMat) -> int:
    """Branch-number proxy: the minimum number of active output bricks over
    all nonzero single-brick input differences.  A heuristic, not a
    security measure."""
    width = h * n
    mask = (1 << n) - 1
    best = h + 1
    for brick in range(h):
        shift = n * (h - 1 - brick)
        for v in range(1, 1 << n):
            out = (BitVec(width, v << shift) @ mu).bits
            active = sum(1 for i in range(h) if (out >> (n * (h - 1 - i))) & mask)
            best = min(best, active)
    return best


def trapdoor_pipeline(
    sbox: SBox,
    m: int,
    d: int,
    h: int = 2,
    seed: int = 0,
    mu_candidates: int = 32,
) -> TrapdoorReport:
    """Pick the algebra giving the s-box its worst circle bias, then a
    circle-linear diffusion layer with the best diffusion proxy.

    Scores every one-dimensional-span algebra on the brick by the maximal
    circle-DDT count of the s-box, keeps the best, and samples diffusion
    layers from the automorphisms of the parallel extension.  If no algebra
    beats the XOR bias this is reported, not raised.
    """
    if m + d != sbox.n:
        raise ValueError(f"m + d = {m + d} does not match the s-box width {sbox.n}")
    xor_bias = max_bias(ddt(sbox, OP_XOR))
    best_algebra = None
    best_bias = (0, 0, -1)
    scored = 0
    for spec in enumerate_unidim_algebras(m, d):
        scored += 1
        bias = max_bias(ddt(sbox, OP_CIRCLE, spec))
        if bias[2] > best_bias[2]:
            best_bias = bias
            best_algebra = spec
    if best_algebra is None:
        raise ValueError("no one-dimensional-span algebra exists for these dimensions")

    parallel = ParallelAlgebra(best_algebra, h)
    rng = random.Random(seed)
    best_mu = None
    best_score = -1
    for _ in range(mu_candidates):
        mu = sample_parallel_automorphism(parallel, rng)
        score = diffusion_score(h, best_algebra.n, mu)
        if score > best_score:
            best_score = score
            best_mu = mu
    return TrapdoorReport(
        algebra=best_algebra,
        mu=best_mu,
        h=h,
        seed=seed,
        xor_bias=xor_bias,
        circle_bias=best_bias,
        improves=best_bias[2] > xor_bias[2],
        diffusion_score=best_score,
        algebras_scored=scored,
        mu_candidates=mu_candidates,
    )
