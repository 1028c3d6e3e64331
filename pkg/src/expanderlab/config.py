"""Process-wide worker cap, set by ``--threads`` or EXPANDERLAB_THREADS."""

import os

_threads = None


def set_threads(n):
    global _threads
    n = int(n)
    if n < 1:
        raise ValueError("threads must be >= 1")
    _threads = n


def get_threads():
    if _threads is not None:
        return _threads
    env = os.environ.get("EXPANDERLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1
