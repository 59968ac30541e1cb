"""Cellular chains of an orbit complex, cochains with local coefficients, and pi_1."""
from __future__ import annotations

from .homology import AbelianGroup, GroupPresentation, IntChainComplex, homology
from .orbit_complex import MonodromyRep, OrbitComplex
from .quat_linalg import Matrix


def cellular_chain_complex(X: OrbitComplex) -> IntChainComplex:
    ranks = {p: len(X.cells_of_dim(p)) for p in range(X.dim + 1)}
    maps = {p: X.boundary_matrix(p) for p in range(1, X.dim + 1)}
    return IntChainComplex(ranks, maps, -1)


def twisted_cochain_complex(X: OrbitComplex, rep: MonodromyRep | None = None,
                            m: int | None = None) -> IntChainComplex:
    """Cellular cochains with coefficients in the local system ``rep`` of rank ``m``.

    Degree p is ``Z^(m * #p-cells)``; the block for a p-cell sits at its
    basepoint frame.  With ``rep=None`` the complex's own monodromy on ``Z^n``
    is used.
    """
    if rep is None:
        rep = X.monodromy
        m = X.torus_rank if m is None else m
    if m is None:
        m = next(iter(rep.matrices.values())).rows if rep.matrices else X.torus_rank
    ranks = {p: m * len(X.cells_of_dim(p)) for p in range(X.dim + 1)}
    maps = {}
    for p in range(X.dim):
        rows = [[0] * ranks[p] for _ in range(ranks[p + 1])]
        for tpos, spos, sign, path in X.coboundary_paths.get(p, []):
            T = X.transport(path, rep, m)
            for a in range(m):
                for b in range(m):
                    rows[tpos * m + a][spos * m + b] += sign * T[a, b]
        maps[p] = Matrix.from_rows(rows, cols=ranks[p])
    C = IntChainComplex(ranks, maps, 1)
    if not C.is_complex():
        raise ValueError("twisted coboundary does not square to zero; monodromy is not flat")
    return C


def cohomology_local(X: OrbitComplex, rep: MonodromyRep | None = None,
                     m: int | None = None) -> dict[int, AbelianGroup]:
    return homology(twisted_cochain_complex(X, rep, m))


def cellular_homology(X: OrbitComplex) -> dict[int, AbelianGroup]:
    return homology(cellular_chain_complex(X))


def cellular_cohomology(X: OrbitComplex) -> dict[int, AbelianGroup]:
    return homology(cellular_chain_complex(X).dual())


def pi1_presentation(X: OrbitComplex, simplify: bool = True) -> GroupPresentation:
    """Presentation of the fundamental group of the orbit space (= that of M).

    Generators are the 1-cells outside the spanning tree; relators are the
    boundary words of the 2-cells.
    """
    if not X.is_connected():
        raise ValueError("orbit complex is disconnected")
    tree = set(X.spanning_tree)
    gens = [c.id for c in X.cells_of_dim(1) if c.id not in tree]
    index = {e: i + 1 for i, e in enumerate(gens)}
    relators = []
    for c in X.cells_of_dim(2):
        word = tuple(s * index[e] for e, s in X.boundary_word(c.id) if e in index)
        relators.append(word)
    P = GroupPresentation(len(gens), tuple(relators), tuple(gens))
    return P.simplify() if simplify else P
