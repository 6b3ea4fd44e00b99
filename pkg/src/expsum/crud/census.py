import logging
import os
from pathlib import Path

import orjson
from pydantic import ValidationError

from expsum.core.errors import ConflictError, NotFound, StoreError
from expsum.schemas.census import CensusKeySchema, CensusRecordSchema

logger = logging.getLogger(__name__)


def dump_canonical(data: object) -> bytes:
    """Sorted keys, no floats introduced; identical input gives identical bytes."""
    return orjson.dumps(data, option=orjson.OPT_SORT_KEYS)


class CensusCRUD:
    """CRUD operations for census records stored as one JSON file each."""

    def __init__(self, root: Path) -> None:
        self.root = Path(root)

    def path_for(self, key: CensusKeySchema) -> Path:
        """<root>/p<p>/d<d>/<kind>/<key>.json."""
        return self.root / f"p{key.p}" / f"d{key.d}" / key.kind / f"{key.file_stem()}.json"

    def encode(self, record: CensusRecordSchema) -> bytes:
        return dump_canonical(record.model_dump(mode="json"))

    def put_record(self, record: CensusRecordSchema, *, force: bool = False) -> Path:
        """Store a record; the same payload again is a no-op, a different one conflicts."""
        path = self.path_for(record.key)
        if path.exists():
            stored = self.get_record(record.key)
            if stored.payload() == record.payload():
                logger.debug("census %s unchanged", path)
                return path
            if not force:
                raise ConflictError(f"{path} holds a different payload for the same key")
            logger.info("overwriting census record %s", path)

        path.parent.mkdir(parents=True, exist_ok=True)
        scratch = path.with_name(f".{path.name}.{os.getpid()}.tmp")
        scratch.write_bytes(self.encode(record))
        os.replace(scratch, path)
        return path

    def get_record(self, key: CensusKeySchema) -> CensusRecordSchema:
        path = self.path_for(key)
        if not path.exists():
            raise NotFound(f"no census record at {path}")
        try:
            return CensusRecordSchema.model_validate(orjson.loads(path.read_bytes()))
        except (orjson.JSONDecodeError, ValidationError) as exc:
            raise StoreError(f"unreadable census record {path}: {exc}") from exc

    def fetch_record(self, key: CensusKeySchema) -> CensusRecordSchema | None:
        try:
            return self.get_record(key)
        except NotFound:
            return None

    def list_keys(self) -> list[CensusKeySchema]:
        """Keys of every stored record, sorted by path."""
        if not self.root.exists():
            return []
        keys = []
        for path in sorted(self.root.glob("p*/d*/*/*.json")):
            keys.append(CensusRecordSchema.model_validate(orjson.loads(path.read_bytes())).key)
        return keys
