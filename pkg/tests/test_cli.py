"""End-to-end tests of the command-line driver: output bytes and exit codes."""

import json
import subprocess
import sys

import pytest

from ghost_slopes.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGhostCommand:
    def test_first_polynomial(self, capsys):
        code, out, _ = run(capsys, "ghost", "-n", "1")
        assert code == 0
        assert out == "g_1(w) = (w - w_6)\n"

    def test_zero_count_is_empty(self, capsys):
        code, out, _ = run(capsys, "ghost", "-n", "0")
        assert code == 0
        assert out == ""

    def test_table_rendering_spot_checks(self, capsys):
        code, out, _ = run(capsys, "ghost", "-n", "8")
        lines = out.strip().split("\n")
        assert code == 0
        assert len(lines) == 8
        assert "(w - w_24)^3" in lines[3]
        assert lines[3].endswith("(w - w_78)")
        assert "(w - w_48)^6" in lines[7]
        assert lines[7].endswith("(w - w_174)")

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "ghost", "-n", "3", "--format", "json")
        polys = json.loads(out)
        assert code == 0
        assert [gp["n"] for gp in polys] == [1, 2, 3]
        assert polys[0]["zeros"] == [{"k": 6, "mult": 1}]

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "ghost", "-n", "2", "--format", "csv")
        lines = out.strip().split("\n")
        assert lines[0] == "n,k,mult"
        assert lines[1] == "1,6,1"
        assert lines[2] == "2,12,1"

    def test_negative_count_rejected(self, capsys):
        code, _, err = run(capsys, "ghost", "-n", "-3")
        assert code == 1
        assert "error" in err


class TestSlopesCommand:
    def test_locked_radius(self, capsys):
        code, out, _ = run(capsys, "slopes", "-k", "24", "-r", "10")
        assert code == 0
        assert out == "11\n" * 6

    def test_intermediate_radius(self, capsys):
        code, out, _ = run(capsys, "slopes", "-k", "24", "-r", "7")
        assert out.split() == ["9", "11", "11", "11", "11", "13"]

    def test_rational_radius(self, capsys):
        code, out, _ = run(capsys, "slopes", "-k", "24", "-r", "5/2")
        assert code == 0
        assert len(out.split()) == 6

    def test_infinite_radius(self, capsys):
        code, out, _ = run(capsys, "slopes", "-k", "24", "-r", "inf")
        assert code == 0
        assert len(out.split()) == 6

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "slopes", "-k", "24", "-r", "10", "--format", "json")
        data = json.loads(out)
        assert data == {"k": 24, "radius": "10", "newslopes": ["11"] * 6}

    def test_off_class_weight_is_domain_error(self, capsys):
        code, _, err = run(capsys, "slopes", "-k", "25", "-r", "2")
        assert code == 2
        assert "not in the class" in err

    def test_bad_radius_is_config_error(self, capsys):
        code, _, err = run(capsys, "slopes", "-k", "24", "-r", "three")
        assert code == 1


class TestThresholdsCommand:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "thresholds", "-k", "24")
        assert code == 0
        assert out.split("\n")[:3] == [
            "CS_1(24) = 9 [closed]",
            "CS_2(24) = 6 [closed]",
            "CS_3(24) = 2 [sweep]",
        ]

    def test_json(self, capsys):
        code, out, _ = run(capsys, "thresholds", "-k", "24", "--format", "json")
        assert json.loads(out) == {
            "k": 24,
            "local": ["9", "6", "2", "1", "6", "9"],
            "provenance": ["closed", "closed", "sweep", "sweep", "closed", "closed"],
            "global_mult": 1,
        }

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "thresholds", "-k", "24", "--format", "csv")
        lines = out.strip().split("\n")
        assert lines[0] == "n,value,provenance"
        assert lines[1] == "1,9,closed"
        assert lines[4] == "4,1,sweep"


class TestPredictCommand:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "predict", "-k", "24", "--format", "json")
        assert json.loads(out) == {
            "k": 24,
            "linv_known": [["-10", 2], ["-7", 2]],
            "floor": "-15/4",
            "exceptional": 2,
        }

    def test_table(self, capsys):
        code, out, _ = run(capsys, "predict", "-k", "24")
        assert out == "k = 24\nlinv -10 x2\nlinv -7 x2\nfloor -15/4 x2\n"

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "predict", "-k", "24", "--format", "csv")
        assert out.strip().split("\n") == [
            "kind,slope,mult",
            "known,-10,2",
            "known,-7,2",
            "floor,-15/4,2",
        ]


class TestDistCommand:
    def test_csv_rows(self, capsys):
        code, out, _ = run(capsys, "dist", "--k-range", "10:100", "--format", "csv")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[0] == (
            "k,kind,n,moment_num,moment_den,target_num,target_den,"
            "abs_error_decimal"
        )
        assert lines[1] == "12,derivative,1,2,3,1,2,0.166666666667"
        # weights 12..96, three kinds, two moment orders each
        assert len(lines) == 1 + 15 * 6

    def test_table_reports(self, capsys):
        code, out, _ = run(capsys, "dist", "--k-range", "10:100")
        lines = out.strip().split("\n")
        assert code == 0
        assert len(lines) == 6
        assert lines[0].startswith("threshold n=1 target=1/2 ")

    def test_json_reports(self, capsys):
        code, out, _ = run(capsys, "dist", "--k-range", "10:100", "--format", "json", "-n", "3")
        rows = json.loads(out)
        assert {r["kind"] for r in rows} == {"threshold", "derivative", "linv"}
        assert {r["n"] for r in rows} == {1, 2, 3}
        row = rows[0]
        assert row["ks"] == sorted(row["ks"])
        assert all("/" in m or m.lstrip("-").isdigit() for m in row["moments"])

    def test_jobs_do_not_change_bytes(self, capsys):
        _, serial, _ = run(capsys, "dist", "--k-range", "10:100", "--format", "csv", "--jobs", "1")
        _, parallel, _ = run(capsys, "dist", "--k-range", "10:100", "--format", "csv", "--jobs", "2")
        assert serial == parallel

    def test_empty_range_is_domain_error(self, capsys):
        code, _, err = run(capsys, "dist", "--k-range", "3:5")
        assert code == 2

    def test_backwards_range_is_config_error(self, capsys):
        code, _, _ = run(capsys, "dist", "--k-range", "50:10")
        assert code == 1


class TestVerifyCommand:
    def test_default_run_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        lines = out.strip().split("\n")
        assert code == 0
        assert len(lines) == 16
        assert all(line.startswith("ok ") for line in lines)

    def test_seed_changes_samples_not_outcome(self, capsys):
        code, out, _ = run(capsys, "verify", "--seed", "12345")
        assert code == 0
        assert "FAIL" not in out

    def test_drifting_window_fails(self, capsys):
        # five weights whose first moment walks away from 1/2
        code, out, err = run(capsys, "verify", "--k-range", "36:60")
        assert code == 3
        assert "FAIL moment-trend" in out
        assert "failed" in err

    def test_too_small_range_is_config_error(self, capsys):
        code, _, _ = run(capsys, "verify", "--k-range", "10:12")
        assert code == 1


class TestConfigValidation:
    def test_composite_prime(self, capsys):
        assert run(capsys, "ghost", "-p", "9", "-n", "1")[0] == 1

    def test_strict_mode_bounds(self, capsys):
        assert run(capsys, "ghost", "-p", "7", "--mode", "strict", "-n", "1")[0] == 1
        assert run(capsys, "ghost", "-p", "11", "-a", "3", "--mode", "strict", "-n", "1")[0] == 0

    def test_bad_residual_parameter(self, capsys):
        assert run(capsys, "ghost", "-a", "99", "-n", "1")[0] == 1

    def test_missing_required_flag(self, capsys):
        assert run(capsys, "slopes", "-r", "2")[0] == 1

    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1

    def test_parser_builds_all_subcommands(self):
        parser = build_parser()
        args = parser.parse_args(["thresholds", "-k", "24", "--format", "csv"])
        assert args.command == "thresholds"
        assert args.k == 24
        assert args.fmt == "csv"


class TestCache:
    def test_cache_writes_and_rereads(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("GHOST_SLOPES_CACHE", str(tmp_path))
        code, first, _ = run(capsys, "thresholds", "-k", "24", "--format", "json")
        assert code == 0
        files = list(tmp_path.iterdir())
        assert len(files) == 1
        # the second run must come from the stored bytes
        files[0].write_text('{"tampered": true}\n')
        code, second, _ = run(capsys, "thresholds", "-k", "24", "--format", "json")
        assert code == 0
        assert second == '{"tampered": true}\n'

    def test_no_env_no_files(self, capsys, tmp_path, monkeypatch):
        monkeypatch.delenv("GHOST_SLOPES_CACHE", raising=False)
        run(capsys, "thresholds", "-k", "24")
        assert list(tmp_path.iterdir()) == []


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ghost_slopes", "ghost", "-n", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "g_1(w) = (w - w_6)\n"
