"""Test the command-line front end."""
from __future__ import annotations

import json
import math

import pytest

from oscint import __version__
from oscint.cli import main, write_rows
from oscint.const import EXIT_NONCONVERGENCE, EXIT_OK, EXIT_USAGE


def test_complete_human(capsys):
    """Seventeen digits of the complete integral."""
    assert main(["complete", "--p", "1", "--phi", "x+x^3"]) == EXIT_OK
    out = capsys.readouterr().out.strip()
    re_text, im_text = out.split()
    assert float(re_text) == pytest.approx(0.41494101283606350, abs=1e-12)
    assert float(im_text.rstrip("i")) == pytest.approx(0.53411593027204143, abs=1e-12)


def test_negative_leading_phase(capsys):
    """A phase starting with a minus sign is passed with '='."""
    assert main(["complete", "--p", "1", "--phi=-x^2-x^3"]) == EXIT_OK
    re_text, im_text = capsys.readouterr().out.split()
    assert float(re_text) == pytest.approx(0.54028350983057729, abs=1e-12)
    assert float(im_text.rstrip("i")) == pytest.approx(-0.40844024533897794, abs=1e-12)


def test_eval_zero_limit(capsys):
    """u = 0 prints a bare zero."""
    assert main(["eval", "--p", "1", "--phi", "x^3", "--u", "0"]) == EXIT_OK
    assert capsys.readouterr().out == "0\n"


def test_eval_json(capsys):
    """JSON output carries the error estimate and method."""
    argv = ["eval", "--p", "1", "--phi", "x^3", "--u", "inf", "--format", "json"]
    assert main(argv) == EXIT_OK
    (row,) = json.loads(capsys.readouterr().out)
    assert row["method"] == "complete_closed_form"
    assert row["re"] == pytest.approx(0.77334, abs=1e-5)


def test_neumann_table_csv(capsys):
    """CSV with a header row."""
    argv = ["neumann-table", "--n", "3", "--terms", "2", "--format", "csv"]
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == [
        "s,numerator,denominator,decimal",
        "0,4,27,.14814814814814814814814815",
        "1,136,729,.18655692729766803840877915",
    ]


def test_reversion_table_json(capsys):
    """Signed Catalan numbers as JSON."""
    argv = ["reversion-table", "--family", "x+kx^2", "--order", "4", "--format", "json"]
    assert main(argv) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert [row["numerator"] for row in rows] == [1, -1, 2, -5]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["eval", "--p", "1"],
        ["eval", "--p", "1", "--phi", "x^2", "--u", "-1"],
        ["eval", "--p", "x^", "--phi", "x^2", "--u", "1"],
        ["eval", "--p", "1", "--phi", "7", "--u", "1"],
        ["neumann-table", "--n", "6"],
        ["check", "--p", "1"],
    ],
)
def test_usage_errors(argv, capsys):
    """Bad arguments and invalid problems exit with 1."""
    assert main(argv) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_nonconvergence_exit_code():
    """A starved configuration exits with 2."""
    argv = [
        "eval",
        "--p",
        "x^2",
        "--phi",
        "x+x^4",
        "--u",
        "2",
        "--K",
        "5",
        "--T",
        "1",
        "--max-segments",
        "5",
    ]
    assert main(argv) == EXIT_NONCONVERGENCE


def test_paper_tables_powers(capsys):
    """The sine-integral table reproduces."""
    assert main(["paper-tables", "--which", "powers", "--format", "json"]) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 3
    assert all(row["ok"] for row in rows)


def test_curve_extrema(capsys):
    """Extrema of Im I(u) sit at multiples of pi in phase."""
    argv = [
        "curve",
        "--p",
        "1",
        "--phi",
        "x^3",
        "--u-max",
        "3",
        "--samples",
        "300",
        "--extrema",
        "--format",
        "json",
    ]
    assert main(argv) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert [row["phi_over_pi"] for row in rows] == pytest.approx(
        [1, 2, 3, 4, 5, 6, 7, 8], rel=1e-10
    )


def test_curve_samples(capsys):
    """Plain curve output has one column for the chosen part."""
    argv = ["curve", "--p", "1", "--phi", "x^2", "--u-max", "1", "--samples", "2"]
    argv += ["--part", "real", "--format", "csv"]
    assert main(argv) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "u,real"
    assert len(lines) == 4


def test_curve_default_part(capsys):
    """Without --part the imaginary part is written."""
    argv = ["curve", "--p", "1", "--phi", "x^3", "--u-max", "6", "--samples", "60"]
    argv += ["--format", "json"]
    assert main(argv) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 61
    assert set(rows[0]) == {"u", "imag"}
    assert rows[0]["imag"] == 0
    # Im int_0^inf exp(ix^3) dx = Gamma(4/3) / 2, the tail is below 1/(3 u^2)
    assert rows[-1]["u"] == 6.0
    assert rows[-1]["imag"] == pytest.approx(math.gamma(4 / 3) / 2, abs=1e-2)


def test_bad_config(tmp_path, capsys):
    """Config errors exit with 1."""
    path = tmp_path / "bad.conf"
    path.write_text("K = zero\n", encoding="utf-8")
    argv = ["eval", "--p", "1", "--phi", "x^3", "--u", "1", "--config", str(path)]
    assert main(argv) == EXIT_USAGE
    assert "Invalid configuration" in capsys.readouterr().err

    argv = ["eval", "--p", "1", "--phi", "x^3", "--u", "1"]
    assert main(argv + ["--config", str(tmp_path / "missing.conf")]) == EXIT_USAGE


def test_check_command(capsys):
    """Explicit problems agree with the oracle."""
    argv = ["check", "--p", "x", "--phi", "x-x^3", "--u", "0.5", "--u", "1.0"]
    assert main(argv + ["--format", "json"]) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert [row["u"] for row in rows] == [0.5, 1.0]
    assert all(row["ok"] for row in rows)


def test_version(capsys):
    """--version prints the package version."""
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


def test_write_rows_human(capsys):
    """Aligned columns with a header."""
    write_rows([{"a": 1, "bb": "x"}, {"a": 22, "bb": "yy"}], "human")
    assert capsys.readouterr().out.splitlines() == ["a   bb", "1   x", "22  yy"]
    write_rows([], "human")
    assert capsys.readouterr().out == ""
