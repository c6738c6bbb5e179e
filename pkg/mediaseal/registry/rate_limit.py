# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Rate Limiter
============

Per-client sliding window: a client holds ``capacity`` tokens, every granted
token comes back ``window`` seconds after it was taken. At most ``capacity``
grants fall in any window of length ``window``.

The grants of a client live in a ``cachetools.TTLCache`` whose time to live
restarts with every grant, so a client is forgotten once its last grant is
older than the window. Beyond ``max_clients`` tracked clients, the least
recently active are dropped first.

"""

import logging
import threading
import time
from collections import deque

from cachetools import TTLCache

_logger = logging.getLogger(__name__)

MAX_CLIENTS = 100000


class TokenBucket:
    def __init__(self, capacity, window, clock=time.monotonic, max_clients=MAX_CLIENTS):
        if capacity < 0 or window <= 0:
            raise ValueError("capacity must be >= 0 and window > 0")
        self.capacity = int(capacity)
        self.window = float(window)
        self.clock = clock
        self._grants = TTLCache(maxsize=max_clients, ttl=self.window, timer=clock)
        self._lock = threading.Lock()

    def __len__(self):
        """Number of clients holding grants"""
        with self._lock:
            self._grants.expire()
            return len(self._grants)

    def _active(self, key, now):
        grants = self._grants.get(key)
        if grants is None:
            return deque()
        while grants and now - grants[0] >= self.window:
            grants.popleft()
        return grants

    def allow(self, key):
        """Take one token for ``key``, return False when none is left"""
        with self._lock:
            now = self.clock()
            grants = self._active(key, now)
            if len(grants) >= self.capacity:
                _logger.warning("rate limit exhausted for client %s", key)
                return False
            grants.append(now)
            self._grants[key] = grants
            return True

    def remaining(self, key):
        with self._lock:
            return self.capacity - len(self._active(key, self.clock()))

    def retry_after(self, key):
        """Seconds until ``key`` gets a token back (0 when one is available)"""
        with self._lock:
            now = self.clock()
            grants = self._active(key, now)
            if len(grants) < self.capacity:
                return 0.0
            return max(0.0, self.window - (now - grants[0]))
