from pathlib import Path

import pytest

from altdiff.cli import emit_structured, main, parse_structured

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_good(capsys):
    code, out, _ = run(capsys, "validate", "--algebra", FIXTURES / "m2d1.alg")
    assert code == 0 and out.strip() == "valid"


def test_validate_bad_names_condition(capsys, tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("2 1\n2 2\n11\n10\n")
    code, out, _ = run(capsys, "validate", "--algebra", bad)
    assert code == 1
    assert "diagonal" in out


def test_validate_parse_error_is_usage(capsys, tmp_path):
    bad = tmp_path / "broken.alg"
    bad.write_text("2 1\n2 2\n01\n")
    code, _, err = run(capsys, "validate", "--algebra", bad)
    assert code == 2 and "error" in err


def test_missing_file_exit_two(capsys):
    code, _, err = run(capsys, "info", "--algebra", "no-such-file.alg")
    assert code == 2 and "cannot read" in err


def test_unknown_subcommand_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_info_fields(capsys):
    code, out, _ = run(capsys, "info", "--algebra", FIXTURES / "m2d1.alg")
    assert code == 0
    assert "dim_r_squared = 1" in out
    assert "socle_basis = 001" in out
    assert "weak_keys = 2" in out


def test_info_m4d4_dim(capsys):
    code, out, _ = run(capsys, "info", "--algebra", FIXTURES / "m4d4_full.alg")
    assert code == 0 and "dim_r_squared = 4" in out


def test_aut_order_line(capsys):
    code, out, _ = run(capsys, "aut", "--algebra", FIXTURES / "m2d1.alg")
    assert code == 0 and out.strip() == "6 * 1 * 2^2 = 24"


def test_aut_sample_and_check(capsys, tmp_path):
    code, out, _ = run(capsys, "aut", "--algebra", FIXTURES / "m2d1.alg", "--sample", "3")
    assert code == 0
    mat = tmp_path / "aut.mat"
    mat.write_text(out)
    code, out, _ = run(capsys, "aut", "--algebra", FIXTURES / "m2d1.alg", "--check", mat)
    assert code == 0 and "automorphism" in out
    bad = tmp_path / "bad.mat"
    bad.write_text("3 3\n001\n010\n100\n")
    code, out, _ = run(capsys, "aut", "--algebra", FIXTURES / "m2d1.alg", "--check", bad)
    assert code == 1 and "not an automorphism" in out


def test_theta_print_and_convert(capsys, tmp_path):
    code, out, _ = run(capsys, "theta", "--algebra", FIXTURES / "m4d4_full.alg")
    assert code == 0 and out.startswith("theta 4 4")
    theta_file = tmp_path / "t.theta"
    theta_file.write_text(out)
    code, out2, _ = run(capsys, "theta", "--theta", theta_file)
    assert code == 0
    assert out2 == (FIXTURES / "m4d4_full.alg").read_text().split("\n", 1)[1]


def test_iso_negative_reports_reason(capsys):
    code, out, _ = run(
        capsys,
        "iso",
        "--algebra",
        FIXTURES / "m4d4_full.alg",
        "--other",
        FIXTURES / "m4d4_rank3.alg",
    )
    assert code == 1 and "span dimensions differ" in out


def test_iso_positive_with_witness(capsys, tmp_path):
    code, out, _ = run(
        capsys, "iso", "--algebra", FIXTURES / "m6d2_bb.alg", "--other", FIXTURES / "m6d2_0b.alg"
    )
    assert code == 0 and "isomorphic" in out
    witness = tmp_path / "w.mat"
    witness.write_text(out.split("\n", 1)[1])
    code, out, _ = run(
        capsys,
        "iso",
        "--algebra",
        FIXTURES / "m6d2_bb.alg",
        "--other",
        FIXTURES / "m6d2_0b.alg",
        "--check",
        witness,
    )
    assert code == 0 and "isomorphism" in out


def test_ddt_output(capsys):
    code, out, _ = run(
        capsys,
        "ddt",
        "--sbox",
        FIXTURES / "toy4.sbox",
        "--op",
        "circle",
        "--algebra",
        FIXTURES / "trapdoor_brick.alg",
    )
    assert code == 0
    assert "max-bias: delta_in=0xc delta_out=0x5 count=16" in out


def test_encrypt_decrypt_round_trip(capsys):
    code, out, _ = run(capsys, "encrypt", "--spec", FIXTURES / "trapdoor.cipher", "--in", "3a")
    assert code == 0
    ct = out.strip()
    code, out, _ = run(capsys, "decrypt", "--spec", FIXTURES / "trapdoor.cipher", "--in", ct)
    assert code == 0 and out.strip() == "3a"


def test_trail_output(capsys):
    code, out, _ = run(
        capsys,
        "trail",
        "--spec",
        FIXTURES / "trapdoor.cipher",
        "--op",
        "circle",
        "--algebra",
        FIXTURES / "trapdoor_brick.alg",
    )
    assert code == 0 and "probability = 1/32" in out


def test_attack_runs(capsys):
    code, out, _ = run(
        capsys,
        "attack",
        "--spec",
        FIXTURES / "trapdoor.cipher",
        "--algebra",
        FIXTURES / "trapdoor_brick.alg",
        "--pairs",
        "1024",
        "--seed",
        "3",
    )
    assert code == 0
    assert "ranking" in out and "observed" in out


def test_structured_round_trip(capsys):
    code, out, _ = run(
        capsys,
        "info",
        "--algebra",
        FIXTURES / "m2d1.alg",
        "--format",
        "structured",
    )
    assert code == 0
    pairs = parse_structured(out)
    assert emit_structured(pairs) == out
    assert emit_structured(parse_structured(emit_structured(pairs))) == out


def test_cli_deterministic_including_seeds(capsys):
    outputs = []
    for _ in range(2):
        code, out, _ = run(
            capsys,
            "trapdoor",
            "--sbox",
            FIXTURES / "toy4.sbox",
            "--m",
            "2",
            "--d",
            "2",
            "--seed",
            "9",
            "--mu-candidates",
            "4",
        )
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]
