"""CLI contract tests: payloads, determinism, exit codes."""

import json
import math
from pathlib import Path

import pytest

from secmin import bands, cli
from secmin.errors import VerificationError

DATA = Path(__file__).parent / "data"


def run(capsys, *argv) -> tuple[int, str]:
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def parse_kv(line: str) -> dict:
    return dict(part.split("=", 1) for part in line.split())


class TestBandsCommands:
    def test_single(self, capsys):
        code, out = run(capsys, "bands", "single", "--n", "10")
        lines = out.splitlines()
        assert code == 0
        assert parse_kv(lines[0]) == {"n": "10", "band": "1", "gap": "1", "witness": "9"}
        assert lines[1] == "status=pass"
        assert lines[2].startswith("elapsed_ms=")

    def test_single_prime_power(self, capsys):
        code, out = run(capsys, "bands", "single", "--n", "8")
        assert code == 0
        assert parse_kv(out.splitlines()[0])["band"] == "0"

    def test_verify(self, capsys):
        code, out = run(capsys, "bands", "verify", "--max", "200")
        assert code == 0
        record = parse_kv(out.splitlines()[0])
        assert record["checked"] == "199"

    def test_asymptotic_default_exponents(self, capsys):
        code, out = run(capsys, "bands", "asymptotic", "--max", "500")
        lines = out.splitlines()
        assert code == 0
        assert parse_kv(lines[0])["exponent"] == "0.535"
        assert parse_kv(lines[1])["exponent"] == repr(23 / 18)
        assert lines[2] == "status=report"


class TestSecantCommand:
    def test_both_modes_agree(self, capsys):
        code, out = run(capsys, "secant", "--g", "1", "--m", "5", "--d", "2")
        record = parse_kv(out.splitlines()[0])
        assert code == 0
        assert record["closed"] == "5" and record["oracle"] == "5" and record["agree"] == "true"

    def test_closed_only(self, capsys):
        code, out = run(capsys, "secant", "--g", "0", "--m", "5", "--d", "1", "--mode", "closed")
        assert code == 0
        assert parse_kv(out.splitlines()[0])["closed"] == "3"

    def test_precondition_violation_exits_2(self, capsys):
        code, _ = run(capsys, "secant", "--g", "2", "--m", "4", "--d", "3")
        assert code == 2


class TestBoundsCommand:
    def test_constant_over_rationals(self, capsys):
        code, out = run(capsys, "bounds", "constant", "--N", "1", "--field", "Q")
        record = parse_kv(out.splitlines()[0])
        assert code == 0
        assert math.isclose(float(record["value"]), math.log(2), rel_tol=1e-12)

    def test_height(self, capsys):
        code, out = run(
            capsys, "bounds", "height", "--g", "2", "--m", "2",
            "--L2", "1.0", "--Lw", "0.5", "--w2", "0.25",
        )
        record = parse_kv(out.splitlines()[0])
        expected = 2 * 1.0 / 4 - 0.5 / 2 + 2 * 0.25 / 16
        assert code == 0 and math.isclose(float(record["value"]), expected, rel_tol=1e-12)

    def test_omega_lambda_matches_library(self, capsys):
        from secmin.bounds import RATIONAL_FIELD, omega_lambda_floor

        code, out = run(
            capsys, "bounds", "omega-lambda", "--g", "3", "--n", "2", "--k", "1", "--w2", "1.5",
        )
        record = parse_kv(out.splitlines()[0])
        assert code == 0
        assert float(record["value"]) == omega_lambda_floor(3, 2, 1, 1.5, RATIONAL_FIELD)

    def test_top_reports_index(self, capsys):
        code, out = run(
            capsys, "bounds", "top", "--g", "2", "--m", "11", "--L2", "4.0",
        )
        record = parse_kv(out.splitlines()[0])
        assert code == 0 and record["kind"] == "top-odd" and record["index"] == "8"

    def test_explicit_field(self, capsys):
        code, out = run(
            capsys, "bounds", "constant", "--N", "1",
            "--degK", "2", "--r1", "0", "--r2", "1", "--log-disc", str(math.log(3)),
        )
        record = parse_kv(out.splitlines()[0])
        expected = 2 * math.log(2) + math.log(3) - math.log(math.pi**2 / 2)
        assert code == 0 and math.isclose(float(record["value"]), expected, rel_tol=1e-12)

    def test_incomplete_field_exits_2(self, capsys):
        code, _ = run(capsys, "bounds", "constant", "--N", "1", "--degK", "2")
        assert code == 2

    def test_missing_flags_exit_2(self, capsys):
        code, _ = run(capsys, "bounds", "lambda", "--m", "12", "--k", "3")
        assert code == 2
        code, _ = run(capsys, "bands", "single")
        assert code == 2


class TestLatticeCommand:
    def test_minima(self, capsys):
        code, out = run(capsys, "lattice", "minima", "--gram", str(DATA / "identity2.gram"))
        record = parse_kv(out.splitlines()[0])
        assert code == 0 and record["sq_minima"] == "1,1"

    def test_dual(self, capsys):
        code, out = run(capsys, "lattice", "dual", "--gram", str(DATA / "hexagonal.gram"))
        lines = out.splitlines()
        assert code == 0
        assert parse_kv(lines[0])["entries"] == "2/3,-1/3"
        assert parse_kv(lines[1])["entries"] == "-1/3,2/3"

    def test_heights(self, capsys):
        code, out = run(capsys, "lattice", "heights", "--gram", str(DATA / "hexagonal.gram"))
        lines = out.splitlines()
        assert code == 0
        assert parse_kv(lines[0])["covol2"] == "2/1"
        assert parse_kv(lines[1])["covol2"] == "3/1"

    def test_transference(self, capsys):
        code, out = run(capsys, "lattice", "transference", "--gram", str(DATA / "hexagonal.gram"))
        lines = out.splitlines()
        assert code == 0
        row1 = parse_kv(lines[0])
        assert row1["ok"] == "true"
        assert math.isclose(float(row1["lower"]), 0.5 * math.log(2 / 3), rel_tol=1e-9)

    def test_avoid(self, capsys):
        code, out = run(
            capsys, "lattice", "avoid",
            "--gram", str(DATA / "identity2.gram"), "--form", str(DATA / "product_form.txt"),
        )
        record = parse_kv(out.splitlines()[0])
        assert code == 0 and record["grid"] == "1,1" and record["within"] == "true"

    def test_avoid_requires_form(self, capsys):
        code, _ = run(capsys, "lattice", "avoid", "--gram", str(DATA / "identity2.gram"))
        assert code == 2

    def test_missing_file_exits_2(self, capsys):
        code, _ = run(capsys, "lattice", "minima", "--gram", str(DATA / "missing.gram"))
        assert code == 2


class TestContract:
    def test_usage_error_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["bands", "nonsense"])
        assert exc.value.code == 2

    def test_verification_failure_exits_1(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise VerificationError("forced failure")

        monkeypatch.setattr(bands, "verify_band_gap_identity", boom)
        code, _ = run(capsys, "bands", "verify", "--max", "100")
        assert code == 1

    def test_payload_is_byte_stable(self, capsys):
        outs = []
        for _ in range(2):
            _, out = run(capsys, "lattice", "transference", "--gram", str(DATA / "hexagonal.gram"))
            stable = [ln for ln in out.splitlines() if not ln.startswith("elapsed_ms=")]
            outs.append(stable)
        assert outs[0] == outs[1]

    def test_json_output(self, capsys):
        code, out = run(capsys, "--json", "secant", "--g", "1", "--m", "5", "--d", "2")
        payload = json.loads(out)
        assert code == 0
        assert payload["command"] == "secant" and payload["status"] == "pass"
        assert payload["records"][0]["closed"] == 5

    def test_verify_all_quick(self, capsys):
        code, out = run(capsys, "verify-all", "--quick")
        lines = out.splitlines()
        assert code == 0
        checks = [ln for ln in lines if ln.startswith("check=")]
        assert len(checks) == 11
        assert all(" status=pass " in ln for ln in checks)
