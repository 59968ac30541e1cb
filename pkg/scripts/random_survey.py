"""Run the spectral engine over random orbit complexes and tabulate what it sees."""
from __future__ import annotations

import argparse
import json
import random
import time
from collections import Counter

from qtoric.errors import UnsupportedRegime
from qtoric.models import random_complex
from qtoric.spectral import collapse_certificate, euler_report, graded_cohomology, spectral_pages


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    r = random.Random(a.seed)
    stats: Counter = Counter()
    torsion, mismatches = [], []
    t0 = time.perf_counter()
    for i in range(a.count):
        X = random_complex(r)
        stats[f"n={X.torus_rank}"] += 1
        _, E2 = spectral_pages(X)
        cert = collapse_certificate(E2)
        stats["certified" if cert.certified else "uncertified"] += 1
        rep = euler_report(X)
        if rep.mismatches:
            mismatches.append((i, rep.mismatches))
        try:
            G = graded_cohomology(X)
        except UnsupportedRegime:
            continue
        tors = {r_: str(G.total(r_)) for r_ in G.pieces if G.total(r_).torsion}
        if tors:
            torsion.append((i, tors))
    print(json.dumps({"count": a.count, "seed": a.seed, "seconds": round(time.perf_counter() - t0, 3),
                      "stats": dict(sorted(stats.items())), "euler_mismatches": mismatches,
                      "torsion_examples": torsion[:10]}, indent=2))


if __name__ == "__main__":
    main()
