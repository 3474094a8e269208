import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, Tuple, TypeVar

T = TypeVar("T")

logger = logging.getLogger(__name__)


def worker_function(target: Callable[[int], T], index: int) -> Tuple[int, object, bool]:
    """
    Runs target(index) and returns (index, result, ok); an exception is returned
    in place of the result so one failing task does not cancel the others.
    """
    try:
        return index, target(index), True
    except Exception as e:
        logger.debug(f"Task {index} failed: {e}")
        return index, e, False


def run_indexed(
    target: Callable[[int], T], indices: Sequence[int], workers: int = 1
) -> List[Tuple[int, object, bool]]:
    """
    Evaluates target over indices, serially or on a thread pool. Results come
    back ordered by index regardless of scheduling.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(indices) <= 1:
        outcomes = [worker_function(target, i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda i: worker_function(target, i), indices))
    return sorted(outcomes, key=lambda outcome: outcome[0])
