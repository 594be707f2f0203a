from concurrent.futures import Executor, ProcessPoolExecutor
from contextlib import contextmanager
from typing import Callable, Iterable, Iterator, List, Optional, TypeVar

from src.config import settings
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@contextmanager
def get_executor(workers: Optional[int] = None) -> Iterator[Executor]:
    """Process pool sized from the argument or the configured default."""
    workers = workers or settings.WORKERS
    executor = ProcessPoolExecutor(max_workers=workers)
    try:
        yield executor
    finally:
        executor.shutdown(wait=True, cancel_futures=True)


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None,
                chunksize: int = 1) -> List[R]:
    """
    Apply fn to every item and return the results in input order.

    With one worker the map runs inline; fn and the items must be picklable
    otherwise.
    """
    items = list(items)
    workers = settings.WORKERS if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug(f"Mapping {len(items)} items over {workers} workers")
    with get_executor(min(workers, len(items))) as executor:
        return list(executor.map(fn, items, chunksize=chunksize))
