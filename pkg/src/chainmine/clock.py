"""Time sources.

Replay runs must be byte-reproducible, so every timestamp the pipeline
stamps comes from a Clock. LogicalClock hands out one deterministic tick
per call; SystemClock is the real thing for live crawls.
"""

from __future__ import annotations

import time
from datetime import datetime, timedelta, timezone

EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)


class Clock:
    def now(self) -> datetime:
        raise NotImplementedError

    def sleep(self, seconds: float) -> None:
        raise NotImplementedError

    def monotonic(self) -> float:
        raise NotImplementedError


class SystemClock(Clock):
    def now(self) -> datetime:
        return datetime.now(timezone.utc)

    def sleep(self, seconds: float) -> None:
        time.sleep(seconds)

    def monotonic(self) -> float:
        return time.monotonic()


class LogicalClock(Clock):
    """Deterministic clock: each now() advances one second from a fixed epoch.

    sleep() advances virtual time without blocking, so politeness delays
    remain observable in fetch logs during replay without slowing tests.
    """

    def __init__(self, epoch: datetime = EPOCH, tick: int = 0):
        self.epoch = epoch
        self.tick = tick
        self._slept = 0.0

    def now(self) -> datetime:
        stamp = self.epoch + timedelta(seconds=self.tick)
        self.tick += 1
        return stamp

    def peek(self) -> datetime:
        return self.epoch + timedelta(seconds=self.tick)

    def sleep(self, seconds: float) -> None:
        self._slept += seconds

    def monotonic(self) -> float:
        return float(self.tick) + self._slept


def isoformat(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def parse_timestamp(text: str) -> datetime:
    return datetime.fromisoformat(text.replace("Z", "+00:00"))
