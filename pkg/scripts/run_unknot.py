"""Print the unknot N and n tables and the product check at a chosen truncation.

    python3 scripts/run_unknot.py [D] [O]
"""

from __future__ import annotations

import sys

from orthlmov.lmov import run_pipeline, unknot_free_energy, verify_product, verify_q_inversion


def main(argv: list[str]) -> int:
    D = int(argv[0]) if argv else 6
    O = int(argv[1]) if len(argv) > 1 else 40
    F = unknot_free_energy(D)
    res = run_pipeline(F=F, order=O)
    for name in ("N", "n"):
        print(f"{name}:")
        for (mu, g, beta), v in sorted(res[name].entries.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1:])):
            print(f"  mu={[list(c) for c in mu]} g={g} beta={beta}: {v}")
    reports = res["reports"] + [verify_product(F, res["n"], D, O), verify_q_inversion(res["n"], D, O)]
    for r in reports:
        print(f"{r.check}: {r.status}")
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
