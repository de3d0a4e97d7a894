"""Forward-generate random n tables, run the pipeline back, and tally results.

    python3 scripts/run_synthetic_suite.py [COUNT] [SEED] [D] [L]
"""

from __future__ import annotations

import random
import sys
import time

from orthlmov.lmov import BpsTable, run_pipeline, verify_product
from orthlmov.synthetic import forward_free_energy, random_n_table


def main(argv: list[str]) -> int:
    count, seed, D, L = (int(a) for a in (argv + ["20", "0", "4", "1"][len(argv):]))
    rng = random.Random(seed)
    recovered = detected = 0
    start = time.perf_counter()
    for _ in range(count):
        n = random_n_table(rng, D, L=L)
        F = forward_free_energy(n, D, L=L, rng=rng)
        recovered += run_pipeline(F=F)["n"] == n
        key = rng.choice(n.keys())
        bad = BpsTable("n", {**n.entries, key: n.entries[key] + 1})
        detected += not verify_product(F, bad, D, 2 * D + 16).passed
    elapsed = time.perf_counter() - start
    print(f"recovered {recovered}/{count}, corruption detected {detected}/{count}, {elapsed:.2f}s")
    return 0 if recovered == detected == count else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
