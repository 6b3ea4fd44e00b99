import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import Any, TypeVar

from expsum.core.config import get_settings

logger = logging.getLogger(__name__)

R = TypeVar("R")


def parallel_map(
    job: Callable[..., R], arguments: Sequence[tuple[Any, ...]], *, max_workers: int | None = None
) -> list[R]:
    """Run job(*args) for every argument tuple; results come back in input order."""
    workers = max_workers if max_workers is not None else get_settings().max_workers
    if workers <= 1 or len(arguments) <= 1:
        return [job(*args) for args in arguments]

    logger.info("dispatching %d %s jobs to %d workers", len(arguments), job.__name__, workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(job, *args) for args in arguments]
        return [future.result() for future in futures]
