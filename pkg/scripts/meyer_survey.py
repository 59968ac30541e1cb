"""Survey tau_quat on random symplectic matrices.

Records, without enforcing, whether the cocycle identity
    tau(A,B) + tau(AB,C) = tau(A,BC) + tau(B,C)
and the symmetry of the Meyer form hold. Counterexamples are printed in full.
"""
from __future__ import annotations

import argparse
import json
import random
from collections import Counter

from qtoric.signature import meyer_form, random_symplectic, tau_quat


def survey(trials: int, seed: int, length: int, bound: int) -> dict:
    r = random.Random(seed)
    failures, asym, taus = [], 0, Counter()
    for t in range(trials):
        A, B, C = (random_symplectic(r, length, bound) for _ in range(3))
        lhs = tau_quat(A, B) + tau_quat(A @ B, C)
        rhs = tau_quat(A, B @ C) + tau_quat(B, C)
        taus[tau_quat(A, B)] += 1
        if meyer_form(A, B).asymmetry != 0:
            asym += 1
        if lhs != rhs:
            failures.append({"trial": t, "lhs": lhs, "rhs": rhs,
                             "A": [[str(q) for q in row] for row in A.to_rows()],
                             "B": [[str(q) for q in row] for row in B.to_rows()],
                             "C": [[str(q) for q in row] for row in C.to_rows()]})
    return {"trials": trials, "seed": seed, "cocycle_failures": failures, "asymmetric_forms": asym,
            "tau_distribution": dict(sorted(taus.items()))}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--length", type=int, default=3, help="word length of each random matrix")
    ap.add_argument("--bound", type=int, default=1)
    a = ap.parse_args()
    print(json.dumps(survey(a.trials, a.seed, a.length, a.bound), indent=2))


if __name__ == "__main__":
    main()
