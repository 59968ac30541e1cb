"""Generators for small orbit complexes: simplices, polygons, circles, surfaces, products."""
from __future__ import annotations

import random
from itertools import combinations
from typing import Sequence

from .orbit_complex import Cell, Face, Facet, MonodromyRep, OrbitComplex
from .quat_linalg import Matrix


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def interval(c0: Sequence[int] = (1,), c1: Sequence[int] = (1,)) -> OrbitComplex:
    """Interval with two endpoint facets; with n = 1 this is the model of HP^1 = S^4."""
    if len(c0) != 1 or len(c1) != 1:
        raise ValueError("interval model needs torus rank 1")
    return OrbitComplex(
        torus_rank=1,
        cells=(Cell("v0", 0, "F0"), Cell("v1", 0, "F1"), Cell("e", 1, "I", (("v0", -1), ("v1", 1)))),
        faces=(Face("F0", 0, ("f0",)), Face("F1", 0, ("f1",)), Face("I", 1)),
        facets=(Facet("f0", tuple(c0)), Facet("f1", tuple(c1))),
    )


def simplex(n: int, charvecs: Sequence[Sequence[int]] | None = None) -> OrbitComplex:
    """The n-simplex with its open faces as cells; default charvecs give HP^n.

    Vertex set {0..n}; facet ``f<i>`` is the face opposite vertex i, so the
    cell spanned by V lies on the facets not indexed by V.
    """
    if n < 1:
        raise ValueError("simplex needs n >= 1")
    if charvecs is None:
        charvecs = [_unit(n, i) for i in range(n)] + [tuple([-1] * n)]
    facets = tuple(Facet(f"f{i}", tuple(v)) for i, v in enumerate(charvecs))
    cells, faces = [], []
    for d in range(n + 1):
        for V in combinations(range(n + 1), d + 1):
            cid = "s" + "_".join(map(str, V))
            fid = "F" + "_".join(map(str, V))
            on = tuple(f"f{i}" for i in range(n + 1) if i not in V)
            faces.append(Face(fid, d, on))
            bd = tuple(("s" + "_".join(map(str, V[:j] + V[j + 1:])), (-1) ** j) for j in range(len(V))) if d else ()
            if d == 2:
                a, b, c = V  # closed walk a->b->c->a
                bd = (("s%d_%d" % (a, b), 1), ("s%d_%d" % (b, c), 1), ("s%d_%d" % (a, c), -1))
            cells.append(Cell(cid, d, fid, bd))
    return OrbitComplex(n, tuple(cells), tuple(faces), facets)


def polygon(charvecs: Sequence[Sequence[int]]) -> OrbitComplex:
    """A k-gon with n = 2; edge i carries facet i, vertex i sits between facets i-1 and i."""
    k = len(charvecs)
    if k < 2:
        raise ValueError("polygon needs at least two edges")
    facets = tuple(Facet(f"f{i}", tuple(v)) for i, v in enumerate(charvecs))
    cells, faces = [], []
    for i in range(k):
        faces.append(Face(f"V{i}", 0, (f"f{(i - 1) % k}", f"f{i}")))
        cells.append(Cell(f"v{i}", 0, f"V{i}"))
    for i in range(k):
        faces.append(Face(f"E{i}", 1, (f"f{i}",)))
        cells.append(Cell(f"e{i}", 1, f"E{i}", ((f"v{i}", -1), (f"v{(i + 1) % k}", 1))))
    faces.append(Face("P", 2))
    cells.append(Cell("p", 2, "P", tuple((f"e{i}", 1) for i in range(k))))
    return OrbitComplex(len(charvecs[0]), tuple(cells), tuple(faces), facets)


def circle(n: int = 1, matrix: Sequence[Sequence[int]] | None = None) -> OrbitComplex:
    """One vertex and one loop inside a single facet-free face; optional monodromy on the loop."""
    mats = {"e": Matrix.from_rows(matrix, cols=n)} if matrix is not None else {}
    return OrbitComplex(
        torus_rank=n,
        cells=(Cell("v", 0, "S"), Cell("e", 1, "S", (("v", -1), ("v", 1)))),
        faces=(Face("S", n),),
        monodromy=MonodromyRep("v", (), mats),
    )


def surface(genus: int, n: int = 2) -> OrbitComplex:
    """Closed orientable surface of the given genus, one-vertex CW structure."""
    if n < 2:
        raise ValueError("a 2-cell needs a face of dimension >= 2")
    cells = [Cell("v", 0, "S")]
    word = []
    for i in range(1, genus + 1):
        cells.append(Cell(f"a{i}", 1, "S", (("v", -1), ("v", 1))))
        cells.append(Cell(f"b{i}", 1, "S", (("v", -1), ("v", 1))))
        word += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]
    cells.append(Cell("s", 2, "S", tuple(word)))
    return OrbitComplex(n, tuple(cells), (Face("S", n),), monodromy=MonodromyRep("v", ()))


def point() -> OrbitComplex:
    return OrbitComplex(0, (Cell("v", 0, "P"),), (Face("P", 0),))


def product(X: OrbitComplex, Y: OrbitComplex) -> OrbitComplex:
    """Cartesian product; cells, faces and monodromy are taken factorwise.

    Facets of X keep their charvecs padded by zeros, facets of Y are shifted into
    the last coordinates.  2-cells keep closed boundary words.
    """
    nx, ny = X.torus_rank, Y.torus_rank
    n = nx + ny

    def cid(a, b):
        return f"{a}*{b}"

    facets = [Facet(f"x.{f.id}", tuple(f.charvec) + (0,) * ny) for f in X.facets]
    facets += [Facet(f"y.{f.id}", (0,) * nx + tuple(f.charvec)) for f in Y.facets]
    faces = [Face(cid(F.id, G.id), F.dim + G.dim,
                  tuple(f"x.{f}" for f in F.facet_ids) + tuple(f"y.{g}" for g in G.facet_ids))
             for F in X.faces for G in Y.faces]
    cells = []
    for a in X.cells:
        for b in Y.cells:
            d = a.dim + b.dim
            if d == 1:
                bd = tuple((cid(x, b.id), s) for x, s in a.boundary) or tuple((cid(a.id, y), s) for y, s in b.boundary)
            elif d == 2 and a.dim == 1:
                ta, ha = X.edge_ends(a.id)
                tb, hb = Y.edge_ends(b.id)
                bd = ((cid(a.id, tb), 1), (cid(ha, b.id), 1), (cid(a.id, hb), -1), (cid(ta, b.id), -1))
            elif d == 2:
                bd = (tuple((cid(x, b.id), s) for x, s in X.boundary_word(a.id)) if a.dim == 2
                      else tuple((cid(a.id, y), s) for y, s in Y.boundary_word(b.id)))
            else:
                acc: dict[str, int] = {}
                for x, s in a.boundary:
                    acc[cid(x, b.id)] = acc.get(cid(x, b.id), 0) + s
                for y, s in b.boundary:
                    acc[cid(a.id, y)] = acc.get(cid(a.id, y), 0) + (-1) ** a.dim * s
                bd = tuple((k, v) for k, v in acc.items() if v)
            cells.append(Cell(cid(a.id, b.id), d, cid(a.face_id, b.face_id), bd))
    mats = {}
    for a in X.cells:
        if a.dim == 1 and a.id in X.monodromy.matrices:
            A = X.monodromy.matrices[a.id]
            for b in Y.cells_of_dim(0):
                mats[cid(a.id, b.id)] = Matrix.block_diag([A, Matrix.identity(ny)])
    for b in Y.cells:
        if b.dim == 1 and b.id in Y.monodromy.matrices:
            B = Y.monodromy.matrices[b.id]
            for a in X.cells_of_dim(0):
                mats[cid(a.id, b.id)] = Matrix.block_diag([Matrix.identity(nx), B])
    return OrbitComplex(n, tuple(cells), tuple(faces), tuple(facets), MonodromyRep(None, None, mats),
                        X.euler_class_zero and Y.euler_class_zero)


def transform(X: OrbitComplex, G: Matrix) -> OrbitComplex:
    """Change lattice coordinates by G in GL(n, Z).

    Charvecs map by G; the dual lattice (where monodromy acts) by G^{-T}.
    """
    Ginv_T = G.inverse().T
    facets = tuple(Facet(f.id, tuple(G.apply(f.charvec))) for f in X.facets)
    mats = {e: Ginv_T @ M @ G.T for e, M in X.monodromy.matrices.items()}
    m = X.monodromy
    return OrbitComplex(X.torus_rank, X.cells, X.faces, facets, MonodromyRep(m.base, m.tree, mats),
                        X.euler_class_zero, X.orientation)


def with_monodromy(X: OrbitComplex, matrices: dict) -> OrbitComplex:
    m = X.monodromy
    mats = dict(m.matrices)
    mats.update({e: M if isinstance(M, Matrix) else Matrix.from_rows(M, cols=X.torus_rank)
                 for e, M in matrices.items()})
    return OrbitComplex(X.torus_rank, X.cells, X.faces, X.facets, MonodromyRep(m.base, m.tree, mats),
                        X.euler_class_zero, X.orientation)


# ------------------------------------------------------------------------------
# random generation
# ------------------------------------------------------------------------------


def random_unimodular(rng: random.Random, n: int, steps: int = 6, bound: int = 2) -> Matrix:
    """Product of random elementary matrices and sign flips."""
    rows = [list(_unit(n, i)) for i in range(n)]
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-bound, bound)
        rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
    for i in range(n):
        if rng.random() < 0.3:
            rows[i] = [-x for x in rows[i]]
    if n >= 2 and rng.random() < 0.5:
        i, j = rng.sample(range(n), 2)
        rows[i], rows[j] = rows[j], rows[i]
    return Matrix.from_rows(rows, cols=n)


def random_fan(rng: random.Random, k: int) -> list[tuple[int, int]]:
    """Smooth complete 2-dimensional fan with k rays, built by blowing up a triangle."""
    fan = [(1, 0), (0, 1), (-1, -1)]
    while len(fan) < k:
        i = rng.randrange(len(fan))
        a, b = fan[i], fan[(i + 1) % len(fan)]
        fan.insert(i + 1, (a[0] + b[0], a[1] + b[1]))
    return fan


def random_complex(rng: random.Random) -> OrbitComplex:
    """A random valid complex with n <= 3 and at most 30 cells."""
    kind = rng.choice(["simplex", "polygon", "circle", "surface", "interval_circle",
                       "torus2", "interval_sq", "interval_cube", "polygon_interval",
                       "circle_triangle", "circle_interval_sq"])
    if kind == "simplex":
        X = simplex(rng.randint(1, 3))
    elif kind == "polygon":
        X = polygon(random_fan(rng, rng.randint(3, 6)))
    elif kind == "circle":
        n = rng.randint(1, 3)
        X = circle(n, Matrix.diag([rng.choice([1, -1]) for _ in range(n)]).to_lists())
    elif kind == "surface":
        X = surface(rng.randint(0, 2), rng.randint(2, 3))
    elif kind == "interval_circle":
        X = product(interval(), circle(1))
        c = rng.randint(-3, 3)
        X = with_monodromy(X, {"v0*e": [[1, 0], [c, 1]], "v1*e": [[1, 0], [c, 1]]})
    elif kind == "torus2":
        X = product(circle(1, [[rng.choice([1, -1])]]), circle(1, [[rng.choice([1, -1])]]))
    elif kind == "interval_sq":
        X = product(interval(), interval())
    elif kind == "interval_cube":
        X = product(product(interval(), interval()), interval())
    elif kind == "polygon_interval":
        X = product(polygon(random_fan(rng, rng.randint(3, 4))), interval())
    elif kind == "circle_triangle":
        X = product(circle(1), simplex(2))
    else:
        # monodromy stays off here: the 3-cells' closures contain the loop
        X = product(circle(1), product(interval(), interval()))
    return transform(X, random_unimodular(rng, X.torus_rank)) if X.torus_rank else X


BUNDLED = {
    "hp1": lambda: interval((1,), (1,)),
    "triangle": lambda: simplex(2),
    "hp3": lambda: simplex(3),
    "s3xs1": lambda: circle(1),
    "disk": lambda: polygon([(1, 0), (0, 1), (-1, 0), (0, -1)]),
    "torus": lambda: surface(1),
    "genus2": lambda: surface(2),
    "point": point,
}
