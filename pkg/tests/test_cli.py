import csv
import io
import json

import numpy as np
import pytest

from lamekit.cli import OutputRecord, build_parser, run
from lamekit.cli.grids import parse_linear, parse_list, parse_pairs
from lamekit.errors import DomainError


def _csv_rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def test_wangerin_csv(capsys) -> None:
    code = run(["wangerin", "--kind", "1", "--nu", "-1.5", "--k", "0.6", "--mmax", "2", "--format", "csv"])
    assert code == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert [r["m"] for r in rows] == ["0", "1", "2"]
    assert float(rows[0]["h"]) == pytest.approx(0.34, abs=1e-10)
    assert list(rows[0]) == ["m", "h", "ell", "truncation", "residual"]


def test_elliptic_json(capsys) -> None:
    assert run(["elliptic", "--k", "0.5", "--grid", "0:1:3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["schema_version"] == "1"
    assert payload["command"] == "elliptic"
    assert payload["columns"] == ["x", "sn", "cn", "dn", "am"]
    last = payload["results"][-1]
    assert last["x"] == pytest.approx(payload["diagnostics"]["K"])
    assert last["sn"] == pytest.approx(1.0)
    assert last["cn"] == pytest.approx(0.0, abs=1e-14)


def test_output_file(tmp_path, capsys) -> None:
    target = tmp_path / "alg.csv"
    assert run(["algebraic", "--p", "2", "--k", "0.5", "--format", "csv", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    rows = _csv_rows(target.read_text(encoding="utf-8"))
    assert len(rows) == 4
    assert {r["index"] for r in rows} == {"0", "1"}


def test_polynomial_command(capsys) -> None:
    assert run(["polynomial", "--p", "1", "--k", "0.5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert [r["classification"] for r in payload["results"]] == ["cn P(sn^2)", "sn P(sn^2)", "dn P(sn^2)"]
    assert all(r["max_residual"] < 1e-9 for r in payload["results"])


def test_eigenfunction_in_the_strip(capsys) -> None:
    args = ["eigenfunction", "--kind", "2", "--m", "1", "--nu", "0.3", "--k", "0.5", "--where", "strip", "--grid", "0.5,0.2;1.5,0.7"]
    assert run(args) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["columns"] == ["x", "y", "re", "im"]
    assert len(payload["results"]) == 2
    assert payload["diagnostics"]["terminating"] is False


def test_zeros_command(capsys) -> None:
    assert run(["zeros", "--kind", "1", "--m", "2", "--nu", "0.3", "--k", "0.5"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["diagnostics"]["count"] == 2
    assert payload["diagnostics"]["winding"] == 2
    assert all(0 < r["u_over_K"] < 1 for r in payload["results"])


def test_floquet_near_the_circular_limit(capsys) -> None:
    assert run(["floquet", "--mu", "0.4", "--nu", "0.3", "--k", "1e-4", "--mmax", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert [r["h"] for r in payload["results"]] == pytest.approx([0.16, 2.56, 5.76], abs=1e-3)


@pytest.mark.parametrize(
    "argv",
    [
        ["nosuch"],
        [],
        ["elliptic", "--k", "0.5", "--grid", "0:2"],
        ["elliptic", "--k", "1.5"],
        ["wangerin", "--kind", "1", "--nu", "0.3", "--k", "0.5", "--mmax", "2", "--tol", "-1"],
        ["limit", "--kind", "1", "--m", "0", "--nu", "0.3", "--klist", "0.05,0.1"],
    ],
)
def test_usage_errors_exit_with_two(argv: list[str]) -> None:
    assert run(argv) == 2


def test_help_exits_cleanly(capsys) -> None:
    assert run(["--help"]) == 0
    assert "wangerin" in capsys.readouterr().out


@pytest.mark.slow
def test_verify_command(capsys) -> None:
    assert run(["verify", "--suite", "c3", "--nu", "0.3", "--nu", "-2.7", "--k", "0.5", "--depth", "3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["diagnostics"]["failed"] == 0
    assert payload["params"]["nu"] == [0.3, -2.7]


def test_parser_requires_a_command() -> None:
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_output_record_converts_numpy_values() -> None:
    record = OutputRecord(
        command="test",
        params={"k": np.float64(0.5), "grid": np.arange(2)},
        columns=["a", "b"],
        results=[{"a": np.int64(3), "b": complex(1.0, -2.0)}, {"a": None, "b": True}],
    )
    assert record.params == {"k": 0.5, "grid": [0, 1]}
    assert type(record.results[0]["a"]) is int
    assert record.to_csv() == "a,b\n3,1.0-2.0j\n,true\n"
    assert json.loads(record.render("json"))["params"]["grid"] == [0, 1]


def test_grid_parsers() -> None:
    assert list(parse_linear("0:2:5")) == [0.0, 0.5, 1.0, 1.5, 2.0]
    xs, ys = parse_pairs("0.5,0.1; 1,0.2;")
    assert list(xs) == [0.5, 1.0]
    assert list(ys) == [0.1, 0.2]
    assert parse_list("0.1, 0.05") == [0.1, 0.05]
    for bad in ("0:1", "a:1:2", "0:1:2.5", "0:1:0"):
        with pytest.raises(DomainError):
            parse_linear(bad)
    with pytest.raises(DomainError):
        parse_pairs("1,2,3")
    with pytest.raises(DomainError):
        parse_list(" , ")


def test_verify_reports_skipped_checks(capsys) -> None:
    assert run(["verify", "--suite", "z2", "--nu", "-2", "--k", "0.5", "--depth", "0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["diagnostics"]["skipped"] == 2
    assert payload["diagnostics"]["failed"] == 0
    assert sum(r["skipped"] for r in payload["results"]) == 2
