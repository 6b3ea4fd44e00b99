import csv
import sys
from datetime import datetime, timezone

UTC = timezone.utc
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from expsum import __version__
from expsum.core.config import ApplicationSettings
from expsum.core.errors import DomainInputError
from expsum.crud.census import CensusCRUD, dump_canonical
from expsum.models.finite_field import FieldDescriptor, FqElem
from expsum.schemas.census import MethodType, ProvenanceSchema

PolygonRow = tuple[int, int, int]


def to_jsonable(data: Any) -> Any:
    if isinstance(data, BaseModel):
        return data.model_dump(mode="json")
    if isinstance(data, list):
        return [to_jsonable(item) for item in data]
    return data


def write_json(data: Any, out: Path | None = None) -> None:
    """Canonical JSON to a file, or to stdout when no path is given."""
    encoded = dump_canonical(to_jsonable(data))
    if out is None:
        sys.stdout.buffer.write(encoded + b"\n")
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(encoded + b"\n")


def write_polygon_csv(rows: list[PolygonRow], out: Path) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "valuation_num", "valuation_den"])
        writer.writerows(rows)


def census_for(settings: ApplicationSettings, cache: Path | None) -> CensusCRUD | None:
    """Store under --cache, else under EXPSUM_CACHE_DIR when it was set; None otherwise."""
    if cache is not None:
        return CensusCRUD(cache)
    if "cache_dir" in settings.model_fields_set:
        return CensusCRUD(settings.cache_dir)
    return None


def provenance(method: MethodType, precision: int | None) -> ProvenanceSchema:
    return ProvenanceSchema(
        method=method, precision=precision, version=__version__, timestamp=datetime.now(UTC)
    )


def parse_element(fld: FieldDescriptor, spec: str) -> FqElem:
    """'3' is the prime-field element 3; '1,2' lists base-p coordinates."""
    try:
        if "," in spec:
            return fld.element([int(part) for part in spec.split(",")])
        return fld.element(int(spec))
    except ValueError as exc:
        raise DomainInputError(f"cannot read field element {spec!r}") from exc
