"""Tests for the gauss-sum command line."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from gauss_summation.cli import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    Column,
    Report,
    main,
    render_report,
    run,
)
from gauss_summation.config import CACHE_DIR_ENV
from gauss_summation.models import Command, OutputFormat, RunConfig
from gauss_summation.rule_core import build_rule
from gauss_summation.summator import apriori_error_hl

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def cli(tmp_path, monkeypatch):
    """Run main() against a throwaway config file and cache directory."""
    monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path / "cache"))
    config_path = tmp_path / "config.json"

    def invoke(*argv):
        return main(["--config", str(config_path), *argv])

    invoke.config_path = config_path
    invoke.cache_dir = tmp_path / "cache"
    return invoke


def read_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestRuleCommand:
    """Test the rule command."""

    def test_json_output(self, cli, capsys):
        """The one-point rule has node pi^2/15 and weight pi^2/3."""
        assert cli("rule", "--n", "1", "--format", "json") == EXIT_OK
        payload = read_json(capsys)

        assert payload["n"] == 1
        assert payload["index"] == [1]
        assert payload["nodes"][0] == pytest.approx(0.6579736267, abs=1e-10)
        assert payload["weights"][0] == pytest.approx(3.2898681337, abs=1e-10)
        assert len(payload["pseudo_indices"]) == 1

    def test_csv_output(self, cli, capsys):
        """CSV starts with summary lines and a header row."""
        assert cli("rule", "--n", "3") == EXIT_OK
        lines = capsys.readouterr().out.splitlines()

        assert lines[0] == "# n: 3"
        assert lines[1] == "j,node,weight,pseudo_index"
        assert len(lines) == 5
        assert lines[2].startswith("1,")

    def test_warm_cache_output_is_identical(self, cli, capsys):
        """A cached rule prints the same bytes as a freshly built one."""
        assert cli("rule", "--n", "12", "--format", "json") == EXIT_OK
        cold = capsys.readouterr().out
        assert (cli.cache_dir / "rule_12.json").exists()

        assert cli("rule", "--n", "12", "--format", "json") == EXIT_OK
        assert capsys.readouterr().out == cold

    def test_no_cache(self, cli, capsys):
        """--no-cache leaves the cache directory untouched."""
        assert cli("rule", "--n", "4", "--no-cache") == EXIT_OK
        assert not (cli.cache_dir / "rule_4.json").exists()

    def test_out_file_uses_lf(self, cli, tmp_path, capsys):
        """--out writes the report with LF line endings."""
        target = tmp_path / "rule.csv"
        assert cli("rule", "--n", "5", "--out", str(target)) == EXIT_OK

        raw = target.read_bytes()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")
        assert capsys.readouterr().out == ""

    def test_out_of_range_size(self, cli, capsys):
        """n = 0 is a usage error."""
        assert cli("rule", "--n", "0") == EXIT_USAGE
        assert "ValidationError" in capsys.readouterr().err

    def test_unknown_flag(self, cli):
        """Unknown flags exit with status 1."""
        with pytest.raises(SystemExit) as excinfo:
            cli("rule", "--n", "2", "--bogus")
        assert excinfo.value.code == EXIT_USAGE


class TestSumCommand:
    """Test the sum command."""

    def test_hardy_littlewood_sum(self, cli, capsys):
        """H(40) converges to 2.22e-7 within eight nodes."""
        code = cli(
            "sum",
            "--expr",
            "sin(40/k)/k",
            "--side",
            "positive",
            "--tol",
            "2.22e-7",
            "--format",
            "json",
        )
        assert code == EXIT_OK
        payload = read_json(capsys)

        assert payload["status"] == "converged"
        assert payload["n_used"] <= 8
        assert payload["side"] == "positive_half"
        assert payload["n"][0] == 2
        assert payload["deltas"][-1] is None

    def test_coth_sum(self, cli, capsys):
        """1 + sum of 1/(1 + k^2) over k != 0 is pi coth(pi)."""
        assert cli("sum", "--expr", "1/(1+k^2)", "--format", "json") == EXIT_OK
        payload = read_json(capsys)
        assert 1.0 + payload["value"] == pytest.approx(3.1533480949, abs=1e-9)

    def test_syntax_error(self, cli, capsys):
        """Parse errors are usage errors."""
        assert cli("sum", "--expr", "1/(") == EXIT_USAGE
        assert "ExprSyntaxError" in capsys.readouterr().err

    def test_deeply_nested_expression(self, cli, capsys):
        """Nesting past the parser limit is a usage error, not a crash."""
        expr = "(" * 1500 + "1/k^2" + ")" * 1500
        assert cli("sum", "--expr", expr) == EXIT_USAGE
        err = capsys.readouterr().err
        assert "ExprSyntaxError" in err
        assert "Traceback" not in err

    def test_evaluation_error(self, cli, capsys):
        """A summand that cannot be evaluated is a numerical failure."""
        assert cli("sum", "--expr", "1/(k-k)") == EXIT_NUMERICAL
        assert "EvaluationError" in capsys.readouterr().err

    def test_invalid_tolerance(self, cli):
        """A nonpositive tolerance is rejected."""
        assert cli("sum", "--expr", "1/k^4", "--tol", "0") == EXIT_USAGE


class TestBenchCommands:
    """Test the bench subcommands."""

    def test_hl_table(self, cli, capsys):
        """The eight-point rule reaches 1e-7 for H(40)."""
        code = cli(
            "bench", "hl", "--x", "40", "--n-max", "8", "--format", "json"
        )
        assert code == EXIT_OK
        payload = read_json(capsys)

        assert payload["n"] == list(range(2, 9))
        last = payload["dH(40)"][-1]
        assert last == "-" or last <= 1e-7
        estimates = payload["asymptotic(40)"]
        assert len(estimates) == 7
        assert estimates[-1] == pytest.approx(apriori_error_hl(8, 40.0, warn=False))

    def test_hl_estimate_per_x(self, cli, capsys):
        """Each x gets its own labelled asymptotic column."""
        code = cli(
            "bench", "hl", "--x", "5,40", "--n-max", "4", "--format", "json"
        )
        assert code == EXIT_OK
        payload = read_json(capsys)

        assert "asymptotic" not in payload
        for x in (5.0, 40.0):
            expected = [apriori_error_hl(n, x, warn=False) for n in (2, 3, 4)]
            assert payload[f"asymptotic({x:g})"] == pytest.approx(expected)

    def test_coth_curve(self, cli, capsys):
        """Rows carry errors, estimates and regime flags."""
        code = cli(
            "bench",
            "coth",
            "--a",
            "10",
            "--n-min",
            "2",
            "--n-max",
            "10",
            "--n-step",
            "4",
            "--workers",
            "2",
            "--format",
            "json",
        )
        assert code == EXIT_OK
        payload = read_json(capsys)

        assert payload["a"] == 10.0
        assert payload["n"] == [2, 6, 10]
        assert all(isinstance(flag, bool) for flag in payload["in_regime"])
        assert payload["rel_err"][-1] < payload["rel_err"][0]

    def test_richardson_curves(self, cli, capsys):
        """One column per order, with no rule error beyond 256 nodes."""
        code = cli(
            "bench",
            "richardson",
            "--N",
            "1,2",
            "--n-min",
            "250",
            "--n-max",
            "500",
            "--format",
            "json",
        )
        assert code == EXIT_OK
        payload = read_json(capsys)

        assert payload["n"] == [250, 500]
        assert len(payload["R1"]) == len(payload["R2"]) == 2
        assert payload["gauss"][0] <= 1e-10
        assert payload["gauss"][1] is None
        assert all(err >= 0.0 for err in payload["R1"] + payload["partial_sum"])

    def test_gautschi(self, cli, capsys):
        """Few rule points against 2730 Laplace evaluations."""
        assert cli("bench", "gautschi", "--format", "json") == EXIT_OK
        payload = read_json(capsys)

        assert payload["laplace_evaluations"] == [2730]
        assert payload["gauss_nodes"][0] <= 8

    def test_missing_benchmark(self, cli, capsys):
        """bench needs a subcommand."""
        assert cli("bench") == EXIT_USAGE
        assert "Unknown bench command" in capsys.readouterr().err


class TestZerosCommand:
    """Test the zeros command."""

    def test_small_rule(self, cli, capsys):
        """Every zero gets a row; the last has no spacing."""
        assert cli("zeros", "--n", "4", "--format", "json") == EXIT_OK
        payload = read_json(capsys)

        assert payload["j"] == [1, 2, 3, 4]
        assert payload["density"][-1] is None
        assert payload["nu"] == 10.5
        assert "tail_law_deviation" not in payload

    def test_tail_law_reported(self, cli, capsys):
        """Rules with at least 16 zeros report the tail law deviation."""
        assert cli("zeros", "--n", "16", "--format", "json") == EXIT_OK
        assert "tail_law_deviation" in read_json(capsys)


class TestConfigCommands:
    """Test config show, set and reset."""

    def test_show(self, cli, capsys):
        """show lists every key."""
        assert cli("config", "show") == EXIT_OK
        out = capsys.readouterr().out
        assert "n_max: 64" in out
        assert "tolerance: 1e-12" in out

    def test_set_persists(self, cli, capsys):
        """set writes a coerced value to the config file."""
        assert cli("config", "set", "n_max", "32") == EXIT_OK
        assert "Set n_max = 32" in capsys.readouterr().out
        saved = json.loads(cli.config_path.read_text(encoding="utf-8"))
        assert saved["n_max"] == 32

    def test_configured_format_is_used(self, cli, capsys):
        """Output format falls back to the configured one."""
        assert cli("config", "set", "output_format", "json") == EXIT_OK
        capsys.readouterr()
        assert cli("rule", "--n", "2") == EXIT_OK
        assert read_json(capsys)["n"] == 2

    def test_set_unknown_key(self, cli, capsys):
        """Unknown keys are refused."""
        assert cli("config", "set", "colour", "blue") == EXIT_USAGE
        assert "Unknown configuration key" in capsys.readouterr().err

    def test_reset(self, cli, capsys):
        """reset restores the defaults on disk."""
        cli("config", "set", "n_max", "16")
        assert cli("config", "reset") == EXIT_OK
        saved = json.loads(cli.config_path.read_text(encoding="utf-8"))
        assert saved["n_max"] == 64

    def test_missing_subcommand(self, cli):
        """config needs a subcommand."""
        assert cli("config") == EXIT_USAGE


class TestCacheCommands:
    """Test cache status and clear."""

    def test_status_and_clear(self, cli, capsys):
        """Cached rules are listed and removed."""
        cli("rule", "--n", "3")
        cli("rule", "--n", "7")
        capsys.readouterr()

        assert cli("cache", "status") == EXIT_OK
        out = capsys.readouterr().out
        assert "Cached rules: 2" in out
        assert "Rule sizes: 3, 7" in out

        assert cli("cache", "clear") == EXIT_OK
        assert "Removed 2 cached rules" in capsys.readouterr().out
        assert not (cli.cache_dir / "rule_3.json").exists()

    def test_explicit_directory(self, cli, tmp_path, capsys):
        """--cache-dir overrides the configured directory."""
        other = tmp_path / "other"
        cli("rule", "--n", "2", "--cache-dir", str(other))
        capsys.readouterr()

        assert cli("cache", "status", "--cache-dir", str(other)) == EXIT_OK
        assert "Cached rules: 1" in capsys.readouterr().out


class TestRun:
    """Test run() and report rendering directly."""

    def test_run_with_provider(self, capsys):
        """run() takes rules from the given provider."""
        requested = []

        def provider(n):
            requested.append(n)
            return build_rule(n)

        config = RunConfig(command=Command.RULE, n=6, output_format=OutputFormat.JSON)
        assert run(config, rule_provider=provider) == EXIT_OK
        assert requested == [6]
        assert read_json(capsys)["n"] == 6

    def test_non_finite_values_are_null_in_json(self):
        """Infinite estimates become JSON null."""
        report = Report(meta={}, columns=[Column("v", "v", [1.0, float("inf")])])
        payload = json.loads(render_report(report, OutputFormat.JSON))
        assert payload["v"] == [1.0, None]

    def test_csv_cells(self):
        """Floats use 17 significant digits and None is empty."""
        report = Report(
            meta={"flag": True},
            columns=[Column("a", "a", [0.5, None]), Column("b", "b", [True, 3])],
        )
        text = render_report(report, OutputFormat.CSV)
        assert text == "# flag: true\na,b\n5.0000000000000000e-01,true\n,3\n"


class TestMainEntry:
    """Test the entry point."""

    def test_no_command(self, cli, capsys):
        """Without a command, help goes to stderr with status 1."""
        assert cli() == EXIT_USAGE
        assert "usage" in capsys.readouterr().err

    def test_version(self, capsys):
        """--version prints the package version."""
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])
        assert excinfo.value.code == 0
        assert "gauss-sum 1.0.0" in capsys.readouterr().out

    def test_main_script(self, tmp_path):
        """main.py runs the command line."""
        result = subprocess.run(
            [
                sys.executable,
                "main.py",
                "--config",
                str(tmp_path / "config.json"),
                "rule",
                "--n",
                "2",
                "--no-cache",
            ],
            capture_output=True,
            text=True,
            cwd=REPO_ROOT,
        )
        assert result.returncode == 0
        assert result.stdout.startswith("# n: 2\n")
