"""Command-line entry point.

Exit codes: 0 on success, 1 on a domain failure (invalid algebra, singular
matrix, negative verdicts), 2 on usage errors including unreadable or
malformed input files.  Results go to stdout, diagnostics to stderr.  Every
subcommand is deterministic for fixed flags; randomness always flows
through an explicit --seed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import algebra as alg
from . import autos, difflab, spn
from .algebra import InvalidAlgebraError
from .axioms import validate_axioms
from .gf2 import BitMat, BitVec, matrix_from_text, matrix_to_text


class UsageError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from e


def _load_algebra(path: str, check: bool = True) -> alg.AlgebraSpec:
    text = _read(path)
    try:
        return alg.algebra_from_text(text, check=check)
    except InvalidAlgebraError:
        raise
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from e


def _load_matrix(path: str) -> BitMat:
    try:
        return matrix_from_text(_read(path))
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from e


def _load_sbox(path: str) -> spn.SBox:
    text = " ".join(
        line for line in _read(path).splitlines() if line.strip() and not line.lstrip().startswith("#")
    )
    try:
        box = spn.SBox.from_hex(text)
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from e
    if not box.is_bijective():
        raise UsageError(f"{path}: table is not a permutation")
    return box


def _load_cipher(path: str) -> spn.CipherSpec:
    try:
        return spn.cipher_from_text(_read(path), base_dir=Path(path).parent)
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from e


# ---------------------------------------------------------------------------
# structured output


def emit(pairs: list[tuple[str, str]], structured: bool) -> None:
    if structured:
        for k, v in pairs:
            print(f"{k}={v}")
    else:
        for k, v in pairs:
            print(f"{k} = {v}")


def parse_structured(text: str) -> list[tuple[str, str]]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        k, _, v = line.partition("=")
        out.append((k, v))
    return out


def emit_structured(pairs: list[tuple[str, str]]) -> str:
    return "".join(f"{k}={v}\n" for k, v in pairs)


def _mat_field(m: BitMat) -> str:
    return ",".join(format(r, f"0{m.cols}b") for r in m.row_bits)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_validate(args) -> int:
    spec = _load_algebra(args.algebra, check=False)
    failures = alg.validate(spec)
    if not failures and args.axioms:
        report = validate_axioms(spec)
        failures = [f"axiom {c.name} fails" for c in report.failures()]
    if failures:
        for f in failures:
            print(f)
        return 1
    print("valid")
    return 0


def _cmd_info(args) -> int:
    spec = _load_algebra(args.algebra)
    r2 = alg.r_squared_basis(spec)
    soc = alg.socle_basis(spec)
    pairs = [
        ("m", str(spec.m)),
        ("d", str(spec.d)),
        ("dim_r_squared", str(len(r2))),
        ("r_squared_basis", " ".join(v.to_text() for v in r2)),
        ("annihilator_basis", " ".join(v.to_text() for v in alg.annihilator_basis(spec))),
        ("socle_basis", " ".join(v.to_text() for v in soc)),
        ("weak_keys", str(1 << len(soc))),
        ("theta", _mat_field(alg.theta_from_spec(spec).mat)),
    ]
    emit(pairs, args.format == "structured")
    return 0


def _cmd_theta(args) -> int:
    if args.theta:
        theta = alg.theta_from_text(_read(args.theta))
        spec = alg.spec_from_theta(theta)
        sys.stdout.write(alg.algebra_to_text(spec))
    else:
        spec = _load_algebra(args.algebra)
        sys.stdout.write(alg.theta_to_text(alg.theta_from_spec(spec)))
    return 0


def _cmd_aut(args) -> int:
    spec = _load_algebra(args.algebra)
    if args.check:
        beta = _load_matrix(args.check)
        if autos.is_automorphism(spec, beta):
            print("automorphism")
            return 0
        print("not an automorphism")
        return 1
    if args.sample is not None:
        sys.stdout.write(matrix_to_text(autos.sample_automorphism(spec, args.sample)))
        return 0
    witness = autos.aut_group_unidim(spec)
    print(witness.factored_order())
    return 0


def _cmd_iso(args) -> int:
    spec_r = _load_algebra(args.algebra)
    spec_s = _load_algebra(args.other)
    if args.check:
        f = _load_matrix(args.check)
        if autos.is_algebra_isomorphism(spec_r, spec_s, f):
            print("isomorphism")
            return 0
        print("not an isomorphism")
        return 1
    result = autos.are_isomorphic(spec_r, spec_s)
    if result.verdict is True:
        print(f"isomorphic ({result.reason})")
        if result.witness is not None:
            sys.stdout.write(matrix_to_text(result.witness.matrix))
        return 0
    if result.verdict is False:
        print(f"not isomorphic: {result.reason}")
    else:
        print(f"indeterminate: {result.reason}")
    return 1


def _cmd_ddt(args) -> int:
    box = _load_sbox(args.sbox)
    algebra = _load_algebra(args.algebra) if args.algebra else None
    table = difflab.ddt(box, args.op, algebra)
    di, do, count = difflab.max_bias(table)
    if args.format == "structured":
        pairs = [("op", table.op), ("n", str(table.n))]
        pairs += [
            (f"row_{di_}", " ".join(str(c) for c in row)) for di_, row in enumerate(table.counts)
        ]
        pairs.append(("max_bias", f"{di} {do} {count}"))
        emit(pairs, True)
    else:
        for row in table.counts:
            print(" ".join(f"{c:3d}" for c in row))
        print(f"max-bias: delta_in={di:#x} delta_out={do:#x} count={count}")
    return 0


def _cmd_trail(args) -> int:
    cipher = _load_cipher(args.spec)
    algebra = _load_algebra(args.algebra) if args.algebra else None
    trail = difflab.trail_search(
        cipher, op=args.op, algebra=algebra, rounds=args.rounds, beam=args.beam
    )
    if trail is None:
        print("no trail found")
        return 1
    digits = cipher.width // 4
    pairs = [
        ("op", trail.op),
        ("rounds", str(len(trail.rounds))),
        ("delta_in", format(trail.delta_in, f"0{digits}x")),
        ("delta_out", format(trail.delta_out, f"0{digits}x")),
        ("probability", str(trail.probability)),
    ]
    for i, r in enumerate(trail.rounds, start=1):
        pairs.append(
            (
                f"round_{i}",
                f"{r.delta_in:0{digits}x} -> {r.delta_mid:0{digits}x} -> {r.delta_out:0{digits}x}"
                f" p_sbox={r.sbox_prob} p_key={r.key_factor}",
            )
        )
    emit(pairs, args.format == "structured")
    return 0


def _cmd_encrypt(args, inverse: bool = False) -> int:
    cipher = _load_cipher(args.spec)
    digits = cipher.width // 4
    try:
        value = int(args.inp, 16)
    except ValueError:
        raise UsageError(f"not a hex block: {args.inp!r}") from None
    if value >= 1 << cipher.width:
        raise UsageError(f"block wider than {cipher.width} bits")
    x = BitVec(cipher.width, value)
    y = spn.decrypt(cipher, x) if inverse else spn.encrypt(cipher, x)
    print(format(y.bits, f"0{digits}x"))
    return 0


def _cmd_attack(args) -> int:
    cipher = _load_cipher(args.spec)
    algebra = _load_algebra(args.algebra) if args.algebra else None
    trail = difflab.trail_search(
        cipher, op=args.op, algebra=algebra, rounds=cipher.rounds - 1, beam=args.beam
    )
    if trail is None:
        print("no trail found", file=sys.stderr)
        return 1
    result = difflab.last_round_key_recovery(
        cipher, trail, args.pairs, args.seed, algebra=algebra, brick_index=args.brick
    )
    digits = cipher.width // 4
    pairs = [
        ("op", trail.op),
        ("delta_in", format(trail.delta_in, f"0{digits}x")),
        ("predicted_delta", format(trail.delta_out, f"0{digits}x")),
        ("trail_probability", str(trail.probability)),
        ("pairs", str(result.pairs)),
        ("seed", str(args.seed)),
        ("brick", str(result.brick_index)),
        ("observed", f"{result.observed:.6f}"),
        ("ranking", " ".join(f"{cand:x}:{cnt}" for cand, cnt in result.ranking)),
    ]
    emit(pairs, args.format == "structured")
    return 0


def _cmd_trapdoor(args) -> int:
    box = _load_sbox(args.sbox)
    report = difflab.trapdoor_pipeline(
        box, args.m, args.d, h=args.h, seed=args.seed, mu_candidates=args.mu_candidates
    )
    pairs = [
        ("m", str(args.m)),
        ("d", str(args.d)),
        ("h", str(args.h)),
        ("seed", str(args.seed)),
        ("algebras_scored", str(report.algebras_scored)),
        ("xor_bias", " ".join(str(v) for v in report.xor_bias)),
        ("circle_bias", " ".join(str(v) for v in report.circle_bias)),
        ("improves", "yes" if report.improves else "no"),
        ("diffusion_score", str(report.diffusion_score)),
        ("algebra", ";".join(_mat_field(b) for b in report.algebra.defining)),
        ("mu", _mat_field(report.mu)),
    ]
    emit(pairs, args.format == "structured")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="altdiff",
        description="Binary bi-braces and alternative differential cryptanalysis of toy SPNs.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=["text", "structured"], default="text")

    sp = sub.add_parser("validate", help="check an algebra file")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--axioms", action="store_true", help="also run the exhaustive axiom oracle")
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("info", help="dimensions, socle, annihilator, theta")
    sp.add_argument("--algebra", required=True)
    fmt(sp)
    sp.set_defaults(func=_cmd_info)

    sp = sub.add_parser("theta", help="print the theta form, or convert one back")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--algebra")
    group.add_argument("--theta")
    sp.set_defaults(func=_cmd_theta)

    sp = sub.add_parser("aut", help="automorphism group order, sampling, membership")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--sample", type=int, metavar="SEED", help="emit one seeded automorphism")
    sp.add_argument("--check", metavar="MATRIX", help="test a matrix file for membership")
    sp.set_defaults(func=_cmd_aut)

    sp = sub.add_parser("iso", help="find or check an isomorphism")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--other", required=True)
    sp.add_argument("--check", metavar="MATRIX")
    sp.set_defaults(func=_cmd_iso)

    sp = sub.add_parser("ddt", help="difference distribution table")
    sp.add_argument("--sbox", required=True)
    sp.add_argument("--op", choices=["xor", "circle"], default="xor")
    sp.add_argument("--algebra")
    fmt(sp)
    sp.set_defaults(func=_cmd_ddt)

    sp = sub.add_parser("trail", help="best trail by branch and bound")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--op", choices=["xor", "circle"], default="xor")
    sp.add_argument("--algebra")
    sp.add_argument("--rounds", type=int)
    sp.add_argument("--beam", type=int)
    fmt(sp)
    sp.set_defaults(func=_cmd_trail)

    sp = sub.add_parser("encrypt", help="encrypt one hex block")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--in", dest="inp", required=True, metavar="HEX")
    sp.set_defaults(func=_cmd_encrypt)

    sp = sub.add_parser("decrypt", help="decrypt one hex block")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--in", dest="inp", required=True, metavar="HEX")
    sp.set_defaults(func=lambda a: _cmd_encrypt(a, inverse=True))

    sp = sub.add_parser("attack", help="last-round key recovery")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--algebra")
    sp.add_argument("--op", choices=["xor", "circle"], default="circle")
    sp.add_argument("--pairs", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--brick", type=int, default=0)
    sp.add_argument("--beam", type=int)
    fmt(sp)
    sp.set_defaults(func=_cmd_attack)

    sp = sub.add_parser("trapdoor", help="search an algebra and diffusion layer")
    sp.add_argument("--sbox", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--h", type=int, default=2)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--mu-candidates", type=int, default=32)
    fmt(sp)
    sp.set_defaults(func=_cmd_trapdoor)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (InvalidAlgebraError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
