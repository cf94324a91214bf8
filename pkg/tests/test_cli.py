import json
import random
import subprocess
import sys

import pytest

from icbounds.cli import EXIT_CHECK, EXIT_OK, EXIT_USAGE, main
from icbounds.harness import sample_gaussian
from icbounds.ldc import LdcParams, pre_fme_system
from icbounds.polytope import region_from_json_dict

ZERO = '{"h": [[0,0],[0,0],[0,0],[0,0]], "cb": [0,0]}'
GENERIC = '{"snr_db": [23, 14], "inr_db": [9, 31], "cb": [1.5, 0.5], "phase": [0.3, 1.1, 2.2, 0.7]}'


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ldc_region_vertices_fixture(capsys):
    code, out, err = run(capsys, "ldc-region", "--n", "2,3,1,3", "--k", "1,2",
                         "--format", "vertices")
    assert code == EXIT_OK
    assert out == "0,0\n3,0\n3,1\n2,3\n0,3\n"
    assert err == ""


def test_ldc_region_json_round_trips(capsys):
    code, out, _ = run(capsys, "ldc-region", "--n", "2,3,1,3", "--k", "1,2")
    assert code == EXIT_OK
    d = json.loads(out)
    assert region_from_json_dict(d).to_json_dict() == d


def test_ldc_region_csv_rows(capsys):
    code, out, _ = run(capsys, "ldc-region", "--n", "2,3,1,3", "--k", "1,2",
                       "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "name,a1,a2,rhs"
    assert "2,1,7" in {",".join(l.split(",")[1:]) for l in lines[1:]}


def test_ldc_region_bad_arity(capsys):
    code, _, err = run(capsys, "ldc-region", "--n", "2,3,1")
    assert code == EXIT_USAGE
    assert "--n expects 4" in err


def test_ldc_verify_ok(capsys):
    code, out, _ = run(capsys, "ldc-verify", "--n", "2,3,1,3", "--k", "1,2")
    assert code == EXIT_OK
    assert json.loads(out)["all_ok"] is True


def test_ldc_scheme_search_found_and_not_found(capsys):
    code, out, _ = run(capsys, "ldc-scheme-search", "--n", "1,0,0,1",
                       "--rate", "1,1", "--trials", "200")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["found"] and d["verified"] and d["scheme"]

    code, out, err = run(capsys, "ldc-scheme-search", "--n", "1,0,0,1",
                         "--rate", "2,0", "--trials", "200")
    assert code == EXIT_CHECK
    assert json.loads(out)["found"] is False
    assert "check_failed" in err


def test_gauss_gap_zero_channel(capsys):
    code, out, err = run(capsys, "gauss-gap", "--json", ZERO)
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["tau"] == 0.0
    assert d["within_budget"] is True
    assert err == ""


def test_gauss_gap_over_budget_channel(capsys):
    rng = random.Random(7)
    for _ in range(18):  # seed-7 draw 17 exceeds the floored budget
        p = sample_gaussian(rng)
    code, out, err = run(capsys, "gauss-gap", "--json",
                         json.dumps(p.to_json_dict()))
    assert code == EXIT_CHECK
    assert json.loads(out)["within_budget"] is False
    assert "check_failed" in err


def test_gauss_outer_round_trip_and_vertices(capsys):
    code, out, _ = run(capsys, "gauss-outer", "--json", GENERIC)
    assert code == EXIT_OK
    d = json.loads(out)
    assert region_from_json_dict(d).to_json_dict() == d

    code, out, _ = run(capsys, "gauss-outer", "--json", GENERIC,
                       "--format", "vertices")
    assert code == EXIT_OK
    first = out.splitlines()[0].split(",")
    assert float(first[0]) == 0.0 and float(first[1]) == 0.0


def test_gauss_inner_inside_outer(capsys):
    _, inner_out, _ = run(capsys, "gauss-inner", "--json", GENERIC)
    _, outer_out, _ = run(capsys, "gauss-outer", "--json", GENERIC)
    inner = region_from_json_dict(json.loads(inner_out))
    outer = region_from_json_dict(json.loads(outer_out))
    assert all(outer.contains(v, 1e-6) for v in inner.vertices)


def test_gauss_claims_csv(capsys):
    code, out, _ = run(capsys, "gauss-claims", "--json", GENERIC,
                       "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "name,slack,passed"
    assert len(lines) == 1 + 31 + 12
    assert all(line.endswith(",1") for line in lines[1:])


def test_malformed_json_reports_position(capsys):
    code, _, err = run(capsys, "gauss-gap", "--json", '{"h": [[0,0],')
    assert code == EXIT_USAGE
    assert "line 1 column" in err


def test_conflicting_inputs_rejected(capsys, tmp_path):
    f = tmp_path / "chan.json"
    f.write_text(ZERO)
    code, _, err = run(capsys, "gauss-gap", "--json", ZERO, "--file", str(f))
    assert code == EXIT_USAGE
    assert "exactly one" in err


def test_file_input(capsys, tmp_path):
    f = tmp_path / "chan.json"
    f.write_text(ZERO)
    code, out, _ = run(capsys, "gauss-gap", "--file", str(f))
    assert code == EXIT_OK
    assert json.loads(out)["tau"] == 0.0

    code, _, err = run(capsys, "gauss-gap", "--file", str(tmp_path / "absent.json"))
    assert code == EXIT_USAGE
    assert "cannot read" in err


def test_fme_projection_matches_region(capsys, tmp_path):
    sys_json = tmp_path / "sys.json"
    sys_json.write_text(json.dumps(
        pre_fme_system(LdcParams(2, 3, 1, 3, 1, 2)).to_json_dict()))
    code, out, _ = run(capsys, "fme", "--file", str(sys_json),
                       "--format", "vertices")
    assert code == EXIT_OK
    assert out == "0,0\n3,0\n3,1\n2,3\n0,3\n"


def test_fme_eliminate_emits_reduced_system(capsys, tmp_path):
    sys_json = tmp_path / "sys.json"
    sys_json.write_text(json.dumps(
        pre_fme_system(LdcParams(2, 3, 1, 3, 1, 2)).to_json_dict()))
    code, out, _ = run(capsys, "fme", "--file", str(sys_json),
                       "--eliminate", "Ro,R1o")
    assert code == EXIT_OK
    d = json.loads(out)
    assert "Ro" not in d["variables"] and "R1o" not in d["variables"]

    code, _, err = run(capsys, "fme", "--file", str(sys_json),
                       "--keep", "R1,R2", "--eliminate", "Ro")
    assert code == EXIT_USAGE
    assert "at most one" in err

    code, _, err = run(capsys, "fme", "--file", str(sys_json),
                       "--eliminate", "nope")
    assert code == EXIT_USAGE


def test_reciprocity_finding_goes_to_stderr_only(capsys):
    rng = random.Random(99)
    for _ in range(190):  # draw 189: known receiver-side undercut channel
        p = sample_gaussian(rng)
    code, out, err = run(capsys, "reciprocity", "--json",
                         json.dumps(p.to_json_dict()))
    assert code == EXIT_OK
    d = json.loads(out)  # stdout stays pure data
    assert d["findings"]["forward_exceeds_tol"] is True
    assert "forward_containment_gap" in err


def test_sweep_exit_codes_and_csv(capsys, tmp_path):
    out_csv = tmp_path / "s.csv"
    code, out, err = run(capsys, "sweep", "--mode", "ldc", "--count", "10",
                         "--seed", "3", "--out", str(out_csv))
    assert code == EXIT_OK
    assert json.loads(out)["all_passed"] is True
    assert out_csv.read_text().startswith("index,n11")

    code, out, err = run(capsys, "sweep", "--mode", "gaussian", "--count", "40",
                         "--seed", "7")
    assert code == EXIT_CHECK
    assert json.loads(out)["all_passed"] is False
    assert "check_failed" in err


def test_sweep_rerun_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    _, out1, _ = run(capsys, "sweep", "--mode", "gaussian", "--count", "15",
                     "--seed", "9", "--out", str(a))
    _, out2, _ = run(capsys, "sweep", "--mode", "gaussian", "--count", "15",
                     "--seed", "9", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert out1 == out2


def test_sweep_summary_csv_format(capsys):
    code, out, _ = run(capsys, "sweep", "--mode", "ldc", "--count", "5",
                       "--seed", "1", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "key,value"
    assert any(line.startswith("seed,1") for line in lines)


def test_unknown_subcommand_and_help(capsys):
    assert main(["bogus"]) == EXIT_USAGE
    capsys.readouterr()
    assert main(["--help"]) == 0
    assert "sweep" in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "icbounds", "ldc-region", "--n", "2,3,1,3",
         "--k", "1,2", "--format", "vertices"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "0,0\n3,0\n3,1\n2,3\n0,3\n"
