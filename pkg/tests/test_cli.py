from datetime import datetime, timezone

UTC = timezone.utc
from pathlib import Path

import orjson
import pytest

from expsum.main import main
from expsum.schemas.census import CensusKeySchema, CensusRecordSchema, ProvenanceSchema


def _write_record(path: Path) -> Path:
    record = CensusRecordSchema(
        key=CensusKeySchema(p=7, kind="sympow", k=1),
        exact=[[1, 0, 0, 0, 0, 0], [-7, 0, 0, 0, 0, 0]],
        provenance=ProvenanceSchema(
            method="oracle", version="1.0.0", timestamp=datetime(2024, 6, 11, tzinfo=UTC)
        ),
    )
    path.write_bytes(orjson.dumps(record.model_dump(mode="json")))
    return path


def test_slopes_command(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["slopes", "--p", "7", "11"]) == 0
    rows = orjson.loads(capsys.readouterr().out)
    assert rows[0]["slopes"] == ["1/3", "2/3"]
    assert rows[1]["slopes"] == ["2/5", "3/5"]


def test_strict_slopes_report_the_failed_hypothesis(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["slopes", "--p", "7", "--strict"]) == 0
    row = orjson.loads(capsys.readouterr().out)[0]
    assert row["slopes"] is None
    assert "d + 6" in row["reason"]


def test_bad_input_exits_with_two(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["fibre", "--p", "4"]) == 2
    assert "CompositeP" in capsys.readouterr().err
    assert main(["no-such-command"]) == 2


def test_census_round_trip(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    cache = tmp_path / "census"
    source = _write_record(tmp_path / "m1.json")
    get_argv = ["census", "get", "--cache", str(cache), "--p", "7", "--kind", "sympow", "--k", "1"]
    assert main(get_argv) == 1
    assert main(["census", "put", "--cache", str(cache), "--file", str(source)]) == 0
    capsys.readouterr()
    assert main(["census", "list", "--cache", str(cache)]) == 0
    keys = orjson.loads(capsys.readouterr().out)
    assert keys == [{"p": 7, "d": 3, "kind": "sympow", "k": 1, "lam": None, "s": 1}]
    assert main(get_argv) == 0
    assert orjson.loads(capsys.readouterr().out)["exact"][1][0] == "-7"


def test_census_get_needs_the_key_part(tmp_path: Path) -> None:
    argv = ["census", "get", "--cache", str(tmp_path), "--p", "7", "--kind", "fibre"]
    assert main(argv) == 2


def test_polygon_export(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    source = _write_record(tmp_path / "m1.json")
    out = tmp_path / "polygon.csv"
    assert main(["polygon", "--in", str(source), "--out", str(out)]) == 0
    assert orjson.loads(capsys.readouterr().out) == {"p": 7, "slopes": ["1"]}
    lines = out.read_text().splitlines()
    assert lines == ["index,valuation_num,valuation_den", "0,0,1", "1,1,1"]


def test_fibre_command_stores_the_record(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    cache = tmp_path / "census"
    csv_out = tmp_path / "fibre.csv"
    argv = ["fibre", "--p", "7", "--z", "1", "--prec", "18", "--cache", str(cache)]
    assert main([*argv, "--csv-polygon", str(csv_out)]) == 0
    report = orjson.loads(capsys.readouterr().out)
    assert report["match"] is True
    assert report["slopes"] == ["1/3", "2/3"]
    assert (cache / "p7" / "d3" / "fibre" / "s1-lam1.json").exists()
    assert csv_out.read_text().splitlines()[0] == "index,valuation_num,valuation_den"


def test_fibre_command_over_a_quadratic_extension(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["fibre", "--p", "5", "--s", "2", "--z", "0,1", "--prec", "20"]) == 0
    report = orjson.loads(capsys.readouterr().out)
    assert report["match"] is True


def test_csv_polygon_needs_a_single_point(tmp_path: Path) -> None:
    assert main(["fibre", "--p", "7", "--csv-polygon", str(tmp_path / "x.csv")]) == 2


def test_verify_identities(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["verify", "--suite", "identities", "--nmax", "6", "--dmax", "3", "--kmax", "12"]
    assert main(argv) == 0
    report = orjson.loads(capsys.readouterr().out)
    assert report["suite"] == "identities"
    assert report["passed"] is True
