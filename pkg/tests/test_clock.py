import pytest

from executor.clock import LogicalClock


def test_pops_in_time_order():
    clock = LogicalClock()
    clock.schedule(30, "late")
    clock.schedule(10, "early")

    assert clock.pop() == (10, "early")
    assert clock.now == 10
    assert clock.pop() == (30, "late")


def test_same_time_is_first_in_first_out():
    clock = LogicalClock()
    for item in ["a", "b", "c"]:
        clock.schedule(5, item)

    assert [clock.pop()[1] for _ in range(3)] == ["a", "b", "c"]


def test_delays_are_relative_to_now():
    clock = LogicalClock()
    clock.schedule(10, "first")
    clock.pop()
    clock.schedule(10, "second")

    assert clock.peek_time() == 20


def test_cancel():
    clock = LogicalClock()
    handle = clock.schedule(5, "gone")
    clock.schedule(8, "kept")
    clock.cancel(handle)

    assert len(clock) == 1
    assert clock.peek_time() == 8
    assert clock.pop() == (8, "kept")


def test_cancel_after_firing_is_harmless():
    clock = LogicalClock()
    handle = clock.schedule(1, "x")
    clock.pop()
    clock.cancel(handle)

    assert len(clock) == 0


def test_empty():
    clock = LogicalClock()

    assert clock.peek_time() is None
    with pytest.raises(IndexError):
        clock.pop()


def test_no_scheduling_into_the_past():
    with pytest.raises(ValueError):
        LogicalClock().schedule(-1, "x")
