import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

from app import settings
from .errors import NumericalDomainError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def generate_batches(iterable: Sequence[T], n: int) -> Iterable[Sequence[T]]:
    for i in range(0, len(iterable), n):
        yield iterable[i : i + n]


def parallel_map(func: Callable[[T], R], items: Sequence[T], workers: Optional[int] = None) -> List[R]:
    """Apply ``func`` to every item, concurrently, returning results in input order."""
    workers = max(1, min(workers or settings.VD_THREADS, len(items) or 1))
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def linear_grid(start: float, stop: float, n_points: int) -> np.ndarray:
    if n_points < 2:
        raise NumericalDomainError("n_points >= 2 is required")
    if not start < stop:
        raise NumericalDomainError("b_min < b_max is required")
    return np.linspace(start, stop, n_points)
