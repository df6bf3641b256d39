from pathlib import Path

import pytest

from convnc.cli import run

from conftest import FIXTURES

GOLDEN = Path(__file__).parent / "golden"


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------
# exit codes and verdicts
# ---------------------------------------------------------

def test_check_delay_one_is_negative(capsys):
    code, out, _ = invoke(
        capsys, "check", str(FIXTURES / "delayed_merge.cnc"), "--delay", "1", "--format", "machine"
    )
    assert code == 2
    assert "sink.X.decodable=false" in out
    assert "sink.X.reason=rank step 1 < omega 2" in out


def test_check_delay_two_succeeds(capsys):
    code, out, _ = invoke(
        capsys, "check", str(FIXTURES / "delayed_merge.cnc"), "--delay", "2", "--format", "machine"
    )
    assert code == 0
    assert "sink.X.minimal_delay=2" in out
    assert "sink.X.decodable=true" in out
    assert "sink.X.decoding_digest=" in out


def test_classify_exit_codes(capsys):
    code, out, _ = invoke(capsys, "classify", str(FIXTURES / "cyclic_feasible.cnc"))
    assert code == 0
    code, out, _ = invoke(
        capsys, "classify", str(FIXTURES / "overlapping_cycles.cnc"), "--format", "machine"
    )
    assert code == 2
    assert "k0_nilpotent=true" in out
    assert "k0_nilpotency_index=4" in out
    assert "et_kz_cyclic=true" in out
    assert "note=algebraically normal, physical realizability not guaranteed" in out


def test_derive_reports_coefficients(capsys):
    code, out, _ = invoke(
        capsys,
        "derive",
        str(FIXTURES / "mixing_ring.cnc"),
        "--horizon",
        "2",
        "--format",
        "machine",
    )
    assert code == 0
    assert "gek.t0=1,0,1,1,1,1;0,1,1,1,0,0" in out


def test_malformed_document_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.cnc"
    bad.write_text("field GF(2)\nomega 1\nnode S\nnode X\nchan e1 S X\nlek e1 e1 = !\n")
    code, _, err = invoke(capsys, "classify", str(bad))
    assert code == 1
    assert "line 6" in err


def test_usage_error_is_input_error(capsys):
    assert invoke(capsys, "frobnicate")[0] == 1
    assert invoke(capsys, "random")[0] == 1  # missing required seed


def test_check_without_sinks_is_input_error(capsys):
    code, _, err = invoke(capsys, "check", str(FIXTURES / "mixing_ring.cnc"))
    assert code == 1
    assert "declared sink" in err


# ---------------------------------------------------------
# simulate and decode round trip
# ---------------------------------------------------------

def test_simulate_dumps_stream(capsys):
    code, out, _ = invoke(capsys, "simulate", str(FIXTURES / "parallel_delay0.cnc"))
    assert code == 0
    assert out.splitlines()[0] == "0 | e1:1 e2:0 e3:1 e4:0"


def test_simulate_infeasible_is_negative(capsys):
    code, _, err = invoke(
        capsys, "simulate", str(FIXTURES / "overlapping_cycles.cnc"), "--seed", "5"
    )
    assert code == 2
    assert "infeasible" in err


def test_decode_round_trip_with_seeded_input(capsys):
    code, out, _ = invoke(
        capsys,
        "decode",
        str(FIXTURES / "delayed_merge.cnc"),
        "--seed",
        "42",
        "--horizon",
        "8",
        "--format",
        "machine",
    )
    assert code == 0
    assert "sink.X.roundtrip=true" in out
    assert "sink.X.delay=2" in out
    assert "sink.X.recovered_slots=7" in out


def test_decode_uses_document_inputs(capsys):
    code, out, _ = invoke(
        capsys,
        "decode",
        str(FIXTURES / "parallel_delay0.cnc"),
        "--format",
        "machine",
    )
    assert code == 0
    assert "sink.X.x0=1,0" in out
    assert "sink.X.x1=1,1" in out


# ---------------------------------------------------------
# random generation
# ---------------------------------------------------------

def test_random_is_seed_deterministic(capsys):
    a = invoke(capsys, "random", "--seed", "7", "--order", "4", "--cycle-density", "0.5")
    b = invoke(capsys, "random", "--seed", "7", "--order", "4", "--cycle-density", "0.5")
    assert a == b
    assert a[0] == 0
    c = invoke(capsys, "random", "--seed", "8", "--order", "4", "--cycle-density", "0.5")
    assert c[1] != a[1]


def test_random_document_parses_and_probes(capsys):
    code, out, err = invoke(
        capsys, "random", "--seed", "11", "--max-delay", "6", "--sinks", "2"
    )
    from convnc import parse_document

    parsed = parse_document(out)
    assert parsed.instance.graph.omega == 2
    assert "minimal delay" in err
    assert code in (0, 2)


# ---------------------------------------------------------
# stable reports
# ---------------------------------------------------------

@pytest.mark.parametrize(
    "name,args",
    [
        ("classify_cyclic_feasible", ["classify", "cyclic_feasible.cnc"]),
        ("classify_overlapping_cycles", ["classify", "overlapping_cycles.cnc"]),
        ("classify_mixing_ring", ["classify", "mixing_ring.cnc"]),
        ("classify_delayed_merge", ["classify", "delayed_merge.cnc"]),
        ("check_delayed_merge", ["check", "delayed_merge.cnc", "--max-delay", "6"]),
        ("decode_parallel_delay0", ["decode", "parallel_delay0.cnc"]),
    ],
)
def test_reports_match_golden_files(capsys, name, args):
    argv = [args[0], str(FIXTURES / args[1])] + args[2:] + ["--format", "machine"]
    _, out, _ = invoke(capsys, *argv)
    golden = (GOLDEN / f"{name}.txt").read_text()
    assert out == golden


def test_report_written_to_file(tmp_path, capsys):
    path = tmp_path / "report.txt"
    code, out, _ = invoke(
        capsys,
        "classify",
        str(FIXTURES / "cyclic_feasible.cnc"),
        "--report",
        str(path),
        "--format",
        "machine",
    )
    assert code == 0
    assert out == ""
    assert "practically_feasible=true" in path.read_text()
