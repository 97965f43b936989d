"""Process-wide runtime knobs."""

from __future__ import annotations

import os

THREADS_ENV = "CORPUS_MIXER_THREADS"


def thread_cap() -> int:
    """Upper bound on internal worker threads; results never depend on it."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
