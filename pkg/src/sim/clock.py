#!/usr/bin/env python3
"""
Clock - Simulated minute clock and deterministic event scheduler
"""

import heapq
from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

# Scheduling priorities; lower runs first within a minute
TIMELINE = 0
INTERNAL = 1


class SimulationClock:
    """Monotonic simulated clock in whole minutes"""

    def __init__(self, start: int = 0):
        if start < 0:
            raise ValueError("start must be non-negative")
        self._now = start

    @property
    def now(self) -> int:
        return self._now

    def advance_to(self, time: int) -> int:
        if time < self._now:
            raise ValueError(f"cannot move the clock back from {self._now} to {time}")
        self._now = time
        return self._now


@dataclass(order=True)
class ScheduledItem:
    """Heap order: time, then priority, then submission sequence"""
    time: int
    priority: int
    seq: int
    payload: Any = field(compare=False)


class EventScheduler:
    """Deterministic scheduler; same submissions always pop in the same order"""

    def __init__(self, start: int = 0):
        self.clock = SimulationClock(start)
        self._queue: List[ScheduledItem] = []
        self._next_seq = 1
        self._wakeups = set()

    @property
    def now(self) -> int:
        return self.clock.now

    def schedule(self, time: int, payload: Any, priority: int = TIMELINE) -> ScheduledItem:
        if time < self.now:
            raise ValueError("cannot schedule in the past")
        item = ScheduledItem(time, priority, self._next_seq, payload)
        self._next_seq += 1
        heapq.heappush(self._queue, item)
        return item

    def schedule_wakeup(self, time: int, payload: Any) -> bool:
        """Internal wakeup, at most one per minute"""
        if time in self._wakeups or time < self.now:
            return False
        self._wakeups.add(time)
        self.schedule(time, payload, INTERNAL)
        return True

    def has_pending(self) -> bool:
        return bool(self._queue)

    def peek_next_time(self) -> Optional[int]:
        return self._queue[0].time if self._queue else None

    def pop_next(self) -> Optional[Tuple[int, int, Any]]:
        if not self._queue:
            return None
        item = heapq.heappop(self._queue)
        self.clock.advance_to(item.time)
        return item.time, item.priority, item.payload
