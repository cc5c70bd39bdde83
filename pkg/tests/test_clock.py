from datetime import datetime, timezone

from chainmine.clock import EPOCH, LogicalClock, isoformat, parse_timestamp


def test_logical_clock_ticks_one_second_per_call():
    clock = LogicalClock()
    assert isoformat(clock.now()) == "2024-01-01T00:00:00Z"
    assert isoformat(clock.now()) == "2024-01-01T00:00:01Z"
    assert clock.tick == 2


def test_peek_does_not_advance():
    clock = LogicalClock(tick=5)
    assert clock.peek() == clock.peek()
    assert clock.tick == 5


def test_sleep_is_virtual():
    clock = LogicalClock()
    before = clock.monotonic()
    clock.sleep(10.0)
    assert clock.monotonic() == before + 10.0


def test_isoformat_round_trip():
    dt = datetime(2024, 3, 5, 12, 30, 45, tzinfo=timezone.utc)
    text = isoformat(dt)
    assert text.endswith("Z")
    assert parse_timestamp(text) == dt


def test_epoch_is_stable():
    assert isoformat(EPOCH) == "2024-01-01T00:00:00Z"
