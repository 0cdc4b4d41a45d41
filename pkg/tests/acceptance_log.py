"""Collects one PASS/FAIL line per acceptance criterion."""

import time
from contextlib import contextmanager

LINES: list[str] = []


@contextmanager
def criterion(label: str, limit_s: float):
    """Time the body; record PASS only if it finishes cleanly and within ``limit_s``.

    The body may append detail strings to the yielded list.
    """
    details: list[str] = []
    start = time.perf_counter()
    ok = False
    try:
        yield details
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit_s
        status = "PASS" if ok and within else "FAIL"
        note = "; ".join(details)
        timing = f"{elapsed:.2f}s < {limit_s:g}s" if within else f"{elapsed:.2f}s >= {limit_s:g}s"
        line = f"{status} criterion {label} ({timing})" + (f": {note}" if note else "")
        LINES.append(line)
        print(line)
    assert within, line
