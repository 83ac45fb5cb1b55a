"""Tests for the command line interface.

Fast parsing and formatting helpers are tested in-process; end-to-end
behavior (exit codes, output formats, the worker-pool sweep) runs the
real interpreter via ``python3 -m mczeta.cli`` in a subprocess.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from mczeta.cli import (
    CliParseError,
    _merge_negative_values,
    format_complex,
    format_point,
    parse_complex_literal,
    parse_point,
    read_points_file,
)


def run_cli(*args: str, env_extra: dict | None = None,
            timeout: float = 240.0) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "mczeta.cli", *args],
        capture_output=True, text=True, env=env, timeout=timeout)


class TestComplexLiterals:
    def test_plain_real(self):
        assert parse_complex_literal("2") == 2.0 + 0.0j
        assert parse_complex_literal("-0.5") == -0.5 + 0.0j
        assert parse_complex_literal("+3.25") == 3.25 + 0.0j

    def test_exponents(self):
        assert parse_complex_literal("-1.2e-1") == -0.12 + 0.0j
        assert parse_complex_literal("1e2") == 100.0 + 0.0j

    def test_full_complex(self):
        assert parse_complex_literal("0.25+0.5i") == 0.25 + 0.5j
        assert parse_complex_literal("0.3-0.4i") == 0.3 - 0.4j
        assert parse_complex_literal("1e2+3e-1i") == 100.0 + 0.3j

    @pytest.mark.parametrize("bad", [
        "", "1 + 2i", "2j", "i", "1+2i3", "1+i", "abc", "1,2", "--1",
        "0x10", "nan", "1.2.3",
    ])
    def test_rejects(self, bad):
        with pytest.raises(CliParseError, match="malformed complex literal"):
            parse_complex_literal(bad)

    def test_point_parsing(self):
        assert parse_point("-0.5,2.7") == (-0.5 + 0j, 2.7 + 0j)
        assert parse_point("-2.2,2.5,1.5") == (-2.2 + 0j, 2.5 + 0j,
                                               1.5 + 0j)
        with pytest.raises(CliParseError):
            parse_point("-0.5,,2.7")
        with pytest.raises(CliParseError):
            parse_point("")

    @given(st.complex_numbers(allow_nan=False, allow_infinity=False,
                              max_magnitude=1e12))
    @settings(deadline=None, max_examples=120)
    def test_format_parse_roundtrip(self, z):
        assert parse_complex_literal(format_complex(z)) == z

    def test_format_point(self):
        assert format_point((-0.5 + 0j, 2.7 + 0j)) == "-0.5,2.7"
        assert format_point((0.25 + 0.5j,)) == "0.25+0.5i"


class TestArgvPreprocessing:
    def test_merges_negative_point(self):
        got = _merge_negative_values(
            ["verify", "--point", "-0.5,2.7", "--tol", "1e-6"])
        assert got == ["verify", "--point=-0.5,2.7", "--tol", "1e-6"]

    def test_leaves_other_flags_alone(self):
        argv = ["eval", "--fn", "zeta", "--args", "2"]
        assert _merge_negative_values(argv) == argv

    def test_merges_args_and_s1(self):
        got = _merge_negative_values(
            ["eval", "--args", "-1.3,3.2", "--s1", "-0.5"])
        assert got == ["eval", "--args=-1.3,3.2", "--s1=-0.5"]


class TestPointsFile:
    def test_comments_and_blanks(self, tmp_path):
        path = tmp_path / "pts.txt"
        path.write_text(
            "# heading\n-0.5,2.7\n\n-1.3,3.2  # trailing\n",
            encoding="utf-8")
        assert read_points_file(str(path)) == [
            (-0.5 + 0j, 2.7 + 0j), (-1.3 + 0j, 3.2 + 0j)]

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("-0.5,2.7\nbogus\n", encoding="utf-8")
        with pytest.raises(CliParseError, match="line 2"):
            read_points_file(str(path))

    def test_missing_file(self):
        with pytest.raises(CliParseError, match="cannot read"):
            read_points_file("/nonexistent/points.txt")


class TestEvalCommand:
    def test_zeta_at_two(self):
        proc = run_cli("eval", "--fn", "zeta", "--args", "2")
        assert proc.returncode == 0
        assert "1.6449340668" in proc.stdout

    def test_confluent_kernel_inverse_argument(self):
        proc = run_cli("eval", "--fn", "psi", "--args", "1,2,1")
        assert proc.returncode == 0
        value = complex(*_read_value(proc.stdout))
        assert abs(value - 1.0) <= 1e-10

    def test_divisor_sum(self):
        proc = run_cli("eval", "--fn", "sigma", "--args", "1,6")
        assert proc.returncode == 0
        value = complex(*_read_value(proc.stdout))
        assert value == 12.0

    def test_prints_estimate_and_terms(self):
        proc = run_cli("eval", "--fn", "zeta", "--args", "2")
        assert "abs_err_est = " in proc.stdout
        assert "terms_used = " in proc.stdout

    def test_domain_error_exit_3(self):
        proc = run_cli("eval", "--fn", "zeta_ez", "--args", "0.5")
        assert proc.returncode == 3
        assert "convergence" in proc.stderr

    def test_parse_error_exit_2(self):
        proc = run_cli("eval", "--fn", "zeta", "--args", "nope")
        assert proc.returncode == 2
        assert "malformed complex literal" in proc.stderr

    def test_unknown_function_exit_2(self):
        proc = run_cli("eval", "--fn", "frobnicate", "--args", "2")
        assert proc.returncode == 2

    def test_json_format(self):
        proc = run_cli("eval", "--fn", "zeta", "--args", "2",
                       "--format", "json")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["schema"] == "mczeta-report/1"
        assert abs(payload["value"]["re"] - math.pi ** 2 / 6.0) < 1e-10
        assert payload["value"]["im"] == 0.0
        assert payload["terms_used"] >= 1

    def test_oscillatory_sum_eval(self):
        proc = run_cli("eval", "--fn", "f_pm", "--args", "1,-0.5,2.7")
        assert proc.returncode == 0
        value = complex(*_read_value(proc.stdout))
        assert abs(value - (-0.0139003295736 + 0.0162719618918j)) < 1e-9

    def test_nested_zeta_continued_eval(self):
        proc = run_cli("eval", "--fn", "zeta_ez", "--args", "-0.5,2.7")
        assert proc.returncode == 0
        value = complex(*_read_value(proc.stdout))
        assert abs(value - 2.7657005836731616) < 1e-10


def _read_value(stdout: str) -> tuple[float, float]:
    for line in stdout.splitlines():
        if line.startswith("value = "):
            z = parse_complex_literal(line.removeprefix("value = "))
            return z.real, z.imag
    raise AssertionError(f"no value line in output: {stdout!r}")


class TestVerifyCommand:
    def test_main_r2_example(self):
        proc = run_cli("verify", "--theorem", "main", "--r", "2",
                       "--point", "-0.5,2.7", "--tol", "1e-6")
        assert proc.returncode == 0
        assert proc.stdout.startswith("PASS")

    def test_hyperplane_example(self):
        proc = run_cli("verify", "--theorem", "hyperplane", "--k", "1",
                       "--s1", "-0.5", "--tol", "1e-6")
        assert proc.returncode == 0
        assert proc.stdout.startswith("PASS")

    def test_main_r3_example(self):
        proc = run_cli("verify", "--theorem", "main", "--r", "3",
                       "--point", "-2.2,2.5,1.5", "--tol", "1e-4")
        assert proc.returncode == 0
        assert proc.stdout.startswith("PASS")

    def test_carrier_token(self):
        proc = run_cli("verify", "--theorem", "carrier",
                       "--point", "-0.5,2.7", "--tol", "1e-6")
        assert proc.returncode == 0
        assert proc.stdout.startswith("PASS")

    def test_reflection_token(self):
        proc = run_cli("verify", "--theorem", "reflection",
                       "--point", "-0.5,2.7", "--tol", "1e-6")
        assert proc.returncode == 0
        assert proc.stdout.startswith("PASS")

    def test_residual_failure_exit_1(self):
        proc = run_cli("verify", "--theorem", "main",
                       "--point", "-0.5,2.7", "--tol", "1e-30")
        assert proc.returncode == 1
        assert proc.stdout.startswith("FAIL")

    def test_skip_nonstrict_keeps_verdict(self):
        proc = run_cli("verify", "--theorem", "main",
                       "--point", "-0.5,2.7", "--point", "0.5,2.7",
                       "--tol", "1e-6")
        assert proc.returncode == 0
        lines = proc.stdout.splitlines()
        assert lines[0].startswith("PASS")
        assert lines[1].startswith("SKIP")
        assert "Re s_1" in lines[1]

    def test_skip_strict_exit_3(self):
        proc = run_cli("verify", "--theorem", "main", "--strict",
                       "--point", "-0.5,2.7", "--point", "0.5,2.7",
                       "--tol", "1e-6")
        assert proc.returncode == 3

    def test_all_skip_exit_3(self):
        proc = run_cli("verify", "--theorem", "main",
                       "--point", "0.5,2.7", "--tol", "1e-6")
        assert proc.returncode == 3

    def test_r_mismatch_exit_2(self):
        proc = run_cli("verify", "--theorem", "main", "--r", "3",
                       "--point", "-0.5,2.7", "--tol", "1e-6")
        assert proc.returncode == 2

    def test_bad_r_exit_2(self):
        proc = run_cli("verify", "--theorem", "main", "--r", "5",
                       "--point", "-0.5,2.7")
        assert proc.returncode == 2

    def test_hyperplane_needs_both_flags(self):
        proc = run_cli("verify", "--theorem", "hyperplane", "--k", "1")
        assert proc.returncode == 2

    def test_no_points_exit_2(self):
        proc = run_cli("verify", "--theorem", "main")
        assert proc.returncode == 2

    def test_json_output_round_trips(self):
        proc = run_cli("verify", "--theorem", "main",
                       "--point", "-0.5,2.7", "--format", "json")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        again = json.dumps(payload, sort_keys=True, indent=2) + "\n"
        assert again == proc.stdout
        assert payload["schema"] == "mczeta-report/1"

    def test_json_report_fields(self):
        proc = run_cli("verify", "--theorem", "main",
                       "--point", "-0.5,2.7", "--format", "json")
        report = json.loads(proc.stdout)["reports"][0]
        assert report["status"] == "PASS"
        assert report["point"] == ["-0.5", "2.7"]
        assert report["rel_residual"] <= 1e-6
        assert set(report["term_breakdown"]) == {
            "lhs_carrier_shifted", "lhs_osc_plus", "lhs_osc_minus",
            "rhs_carrier", "rhs_osc_plus", "rhs_osc_minus"}
        assert set(report["tail_estimates"]) == set(
            report["term_breakdown"])
        assert report["budgets"]["max_terms"] > 0
        assert report["wall_ms"] > 0.0

    def test_multiple_points_in_order(self):
        proc = run_cli("verify", "--theorem", "carrier",
                       "--point", "-0.5,2.7", "--point", "-1.3,3.2")
        lines = proc.stdout.splitlines()
        assert len(lines) == 2
        assert "point=-0.5,2.7" in lines[0]
        assert "point=-1.3,3.2" in lines[1]


class TestSweepCommand:
    def _write(self, tmp_path, text, name="pts.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_csv_header_and_rows_in_input_order(self, tmp_path):
        path = self._write(tmp_path, "-0.5,2.7\n-1.3,3.2\n-0.7,2.3\n")
        proc = run_cli("sweep", "--points-file", path, "--tol", "1e-6")
        assert proc.returncode == 0
        rows = list(csv.reader(io.StringIO(proc.stdout)))
        assert rows[0] == list(
            ("point", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
             "abs_residual", "rel_residual", "terms", "tail_est",
             "wall_ms", "status", "reason"))
        assert [r[0] for r in rows[1:]] == [
            "-0.5,2.7", "-1.3,3.2", "-0.7,2.3"]
        assert all(r[10] == "PASS" for r in rows[1:])
        assert all(float(r[6]) < 1e-6 for r in rows[1:])

    def test_empty_file_header_only(self, tmp_path):
        path = self._write(tmp_path, "")
        proc = run_cli("sweep", "--points-file", path)
        assert proc.returncode == 0
        rows = list(csv.reader(io.StringIO(proc.stdout)))
        assert len(rows) == 1
        assert rows[0][0] == "point"

    def test_malformed_file_exit_2_with_line(self, tmp_path):
        path = self._write(tmp_path, "-0.5,2.7\n0.5,oops\n")
        proc = run_cli("sweep", "--points-file", path)
        assert proc.returncode == 2
        assert "line 2" in proc.stderr

    def test_skip_row_carries_reason(self, tmp_path):
        path = self._write(tmp_path, "-0.5,2.7\n0.5,2.7\n")
        proc = run_cli("sweep", "--points-file", path)
        assert proc.returncode == 0
        rows = list(csv.reader(io.StringIO(proc.stdout)))
        assert rows[2][10] == "SKIP"
        assert "Re s_1" in rows[2][11]

    def test_parallel_matches_serial(self, tmp_path):
        path = self._write(tmp_path, "-0.5,2.7\n-1.9,3.8\n")
        serial = run_cli("sweep", "--points-file", path, "--jobs", "1")
        parallel = run_cli("sweep", "--points-file", path, "--jobs", "2")
        assert serial.returncode == 0 and parallel.returncode == 0
        srows = list(csv.reader(io.StringIO(serial.stdout)))
        prows = list(csv.reader(io.StringIO(parallel.stdout)))
        # identical apart from the wall_ms column
        strip = [r[:9] + r[10:] for r in srows]
        ptrip = [r[:9] + r[10:] for r in prows]
        assert strip == ptrip

    def test_requires_points_file(self):
        proc = run_cli("sweep")
        assert proc.returncode == 2

    def test_hyperplane_sweep(self, tmp_path):
        path = self._write(tmp_path, "1,-0.5\n2,-1.2\n")
        proc = run_cli("sweep", "--theorem", "hyperplane",
                       "--points-file", path, "--tol", "1e-6")
        assert proc.returncode == 0
        rows = list(csv.reader(io.StringIO(proc.stdout)))
        assert all(r[10] == "PASS" for r in rows[1:])


class TestPrecisionBackend:
    def test_unsupported_backend_exit_2(self):
        proc = run_cli("eval", "--fn", "zeta", "--args", "2",
                       env_extra={"MCZETA_PRECISION": "binary128"})
        assert proc.returncode == 2
        assert "binary64" in proc.stderr

    def test_explicit_binary64_accepted(self):
        proc = run_cli("eval", "--fn", "zeta", "--args", "2",
                       env_extra={"MCZETA_PRECISION": "binary64"})
        assert proc.returncode == 0
