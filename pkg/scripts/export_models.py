"""Write the bundled example documents into src/qtoric/data/."""
from __future__ import annotations

import argparse
from pathlib import Path

import yaml

from qtoric import models
from qtoric.orbit_complex import Facet, OrbitComplex

DATA = Path(__file__).resolve().parents[1] / "src" / "qtoric" / "data"


def _with(X: OrbitComplex, **changes) -> OrbitComplex:
    d = X.to_dict()
    d.update(changes)
    return OrbitComplex.from_dict(d)


def documents() -> dict[str, dict]:
    docs = {name: make().to_dict() for name, make in models.BUNDLED.items()}
    docs["triangle"]["boundary_fans"] = [[[1, 0], [0, 1], [-1, -1]]]
    docs["triangle_fan"] = {"boundary_fans": [[[1, 0], [0, 1], [-1, -1]]]}
    docs["trinion_jj"] = {
        "trinions": [{"C1": "J", "C2": "J", "C3": "-I"}],
        "boundary_fans": [],
    }
    twisted = models.with_monodromy(models.product(models.interval(), models.circle(1)),
                                    {"v0*e": [[1, 0], [2, 1]], "v1*e": [[1, 0], [2, 1]]})
    docs["twisted"] = twisted.to_dict()
    docs["nonzero_euler"] = _with(models.interval(), euler_class_zero=False).to_dict()
    bad = models.simplex(2)
    facets = [Facet(f.id, (2, 0) if f.id == "f1" else f.charvec) for f in bad.facets]
    docs["corrupt_charvec"] = OrbitComplex(bad.torus_rank, bad.cells, bad.faces, tuple(facets)).to_dict()
    return docs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DATA)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, doc in documents().items():
        path = args.out / f"{name}.model"
        path.write_text(yaml.safe_dump(doc, sort_keys=False, default_flow_style=None, width=100))
        print(path)


if __name__ == "__main__":
    main()
