"""Timing probe for the all-author local-network scan, run in a fresh
process so earlier test allocations cannot distort the measurement.

Prints one JSON object: {"<size>": best_seconds, ...}.
"""

from __future__ import annotations

import gc
import json
import random
import sys
import time

from citetree.metrics import LineageIndex
from citetree.model import AuthorRecord
from citetree.store import SnapshotBuilder


def scaling_forest(n: int, seed: int):
    rng = random.Random(seed)
    builder = SnapshotBuilder()
    for i in range(n):
        advisors = {}
        if i and rng.random() < 0.95:
            advisors[rng.randrange(i)] = 0
            if i > 1 and rng.random() < 0.1:
                advisors.setdefault(rng.randrange(i), 0)
        builder.add_author(AuthorRecord(id=i, name=f"Person {i}", advisors=advisors))
    return builder.build()


def quiet_allocator() -> None:
    # glibc returns large freed buffers to the kernel, so repeats would
    # page-fault proportionally to corpus size; keep them in-process.
    try:
        import ctypes

        libc = ctypes.CDLL("libc.so.6")
        libc.mallopt(-3, 1 << 30)  # M_MMAP_THRESHOLD
        libc.mallopt(-1, 1 << 30)  # M_TRIM_THRESHOLD
    except OSError:
        pass


def main() -> int:
    sizes = [int(arg) for arg in sys.argv[1:]] or [1_000, 10_000, 100_000]
    rounds = {n: max(3, 9 - 2 * i) for i, n in enumerate(sorted(sizes))}
    snapshots = {n: scaling_forest(n, seed=77) for n in sizes}

    quiet_allocator()
    best = {n: float("inf") for n in sizes}
    gc.disable()
    # Interleave sizes round-robin so throttling phases hit all of them.
    for round_number in range(max(rounds.values())):
        for n in sizes:
            if round_number < rounds[n]:
                started = time.perf_counter()
                LineageIndex.build(snapshots[n])
                best[n] = min(best[n], time.perf_counter() - started)
    gc.enable()
    print(json.dumps({str(n): best[n] for n in sizes}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
