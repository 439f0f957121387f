"""Async token bucket shared by every caller of a gateway (or of the hub client)"""
import asyncio
import time
from typing import Optional


class AsyncTokenBucket:
    """Refills `rate` tokens per second up to `capacity`; rate 0 disables limiting"""

    def __init__(self, rate: float, capacity: Optional[float] = None):
        self.rate = rate
        self.capacity = capacity if capacity is not None else max(1.0, rate)
        self._tokens = self.capacity
        self._updated = time.monotonic()
        self._lock = asyncio.Lock()
        self._blocked_until = 0.0

    def _refill(self) -> None:
        now = time.monotonic()
        self._tokens = min(self.capacity, self._tokens + (now - self._updated) * self.rate)
        self._updated = now

    def pause(self, seconds: float) -> None:
        """Hold every caller back, e.g. after a 429 with Retry-After"""
        self._blocked_until = max(self._blocked_until, time.monotonic() + seconds)

    async def acquire(self) -> None:
        if self.rate <= 0 and self._blocked_until <= time.monotonic():
            return
        async with self._lock:
            while True:
                wait = self._blocked_until - time.monotonic()
                if wait > 0:
                    await asyncio.sleep(wait)
                    continue
                if self.rate <= 0:
                    return
                self._refill()
                if self._tokens >= 1:
                    self._tokens -= 1
                    return
                await asyncio.sleep((1 - self._tokens) / self.rate)
