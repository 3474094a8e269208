import pytest

from src.lib.process_utils import run_indexed, worker_function


def test_worker_function_captures_failures():
    assert worker_function(lambda i: i * 2, 3) == (3, 6, True)
    index, error, ok = worker_function(lambda i: 1 / 0, 4)
    assert index == 4 and not ok
    assert isinstance(error, ZeroDivisionError)


@pytest.mark.parametrize("workers", [1, 4])
def test_run_indexed_orders_results(workers):
    outcomes = run_indexed(lambda i: i * i, range(10), workers=workers)
    assert [index for index, _, _ in outcomes] == list(range(10))
    assert [result for _, result, _ in outcomes] == [i * i for i in range(10)]


def test_run_indexed_keeps_going_after_a_failure():
    def task(i):
        if i == 2:
            raise RuntimeError("boom")
        return i

    outcomes = run_indexed(task, range(4), workers=2)
    assert [ok for _, _, ok in outcomes] == [True, True, False, True]


def test_run_indexed_rejects_zero_workers():
    with pytest.raises(ValueError):
        run_indexed(lambda i: i, range(3), workers=0)
