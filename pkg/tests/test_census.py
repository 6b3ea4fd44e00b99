from datetime import datetime, timezone

UTC = timezone.utc
from fractions import Fraction
from pathlib import Path

import orjson
import pytest

from expsum.core.errors import ConflictError, NotFound, StoreError
from expsum.crud.census import CensusCRUD, dump_canonical
from expsum.models.padic import PadicContext
from expsum.schemas.census import (
    CensusKeySchema,
    CensusRecordSchema,
    PadicNumberSchema,
    ProvenanceSchema,
    rational_text,
)


def _record(second: int = 0, top: int = -7) -> CensusRecordSchema:
    return CensusRecordSchema(
        key=CensusKeySchema(p=7, kind="sympow", k=1),
        exact=[[1, 0, 0, 0, 0, 0], [top, 0, 0, 0, 0, 0]],
        provenance=ProvenanceSchema(
            method="oracle",
            version="1.0.0",
            timestamp=datetime(2024, 6, 11, 12, 0, second, tzinfo=UTC),
        ),
    )


def test_file_stems() -> None:
    assert CensusKeySchema(p=7, kind="sympow", k=3).file_stem() == "k3"
    assert CensusKeySchema(p=7, kind="fibre", lam=[3]).file_stem() == "s1-lam3"
    assert CensusKeySchema(p=7, kind="fibre", lam=[1, 2], s=2).file_stem() == "s2-lam1_2"


def test_path_layout(census_root: Path) -> None:
    crud = CensusCRUD(census_root)
    key = CensusKeySchema(p=7, kind="sympow", k=1)
    assert crud.path_for(key) == census_root / "p7" / "d3" / "sympow" / "k1.json"


def test_put_then_get(census_root: Path) -> None:
    crud = CensusCRUD(census_root)
    record = _record()
    path = crud.put_record(record)
    assert path.exists()
    stored = crud.get_record(record.key)
    assert stored.exact == [["1", "0", "0", "0", "0", "0"], ["-7", "0", "0", "0", "0", "0"]]
    poly = stored.exact_lpoly()
    assert poly.coeffs[1].to_int() == -7


def test_same_payload_is_idempotent(census_root: Path) -> None:
    crud = CensusCRUD(census_root)
    path = crud.put_record(_record())
    before = path.read_bytes()
    crud.put_record(_record(second=30))
    assert path.read_bytes() == before


def test_conflicting_payload_needs_force(census_root: Path) -> None:
    crud = CensusCRUD(census_root)
    crud.put_record(_record())
    with pytest.raises(ConflictError):
        crud.put_record(_record(top=7))
    crud.put_record(_record(top=7), force=True)
    assert crud.get_record(_record().key).exact[1][0] == "7"


def test_missing_and_corrupt_records(census_root: Path) -> None:
    crud = CensusCRUD(census_root)
    key = CensusKeySchema(p=7, kind="sympow", k=3)
    with pytest.raises(NotFound):
        crud.get_record(key)
    assert crud.fetch_record(key) is None
    path = crud.path_for(key)
    path.parent.mkdir(parents=True)
    path.write_bytes(b"{not json")
    with pytest.raises(StoreError):
        crud.get_record(key)


def test_list_keys(census_root: Path) -> None:
    crud = CensusCRUD(census_root)
    assert crud.list_keys() == []
    crud.put_record(_record())
    fibre = _record().model_copy(update={"key": CensusKeySchema(p=5, kind="fibre", lam=[2])})
    crud.put_record(fibre)
    assert [key.kind for key in crud.list_keys()] == ["fibre", "sympow"]


def test_dump_canonical_sorts_keys() -> None:
    assert dump_canonical({"b": 1, "a": [2, "3"]}) == b'{"a":[2,"3"],"b":1}'
    encoded = dump_canonical(_record().model_dump(mode="json"))
    assert orjson.loads(encoded)["key"]["k"] == 1


def test_padic_numbers_keep_their_digits(ctx7: PadicContext) -> None:
    x = ctx7.from_int(7 * 3 + 49, 18)
    number = PadicNumberSchema.from_elem(x)
    assert number.start == 6
    assert number.prec == 18
    assert number.to_elem() == x


def test_rational_text() -> None:
    assert rational_text(4) == "4"
    assert rational_text(Fraction(2, 6)) == "1/3"
