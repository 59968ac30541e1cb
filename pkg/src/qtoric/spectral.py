"""Cellular Leray-Serre spectral sequence of the orbit map and the derived invariants.

A p-cell in a d-dimensional face contributes the fiber Q^d.  Its cohomology in
degree 3k is identified with Lambda^k of the annihilator lattice of the face,
sitting inside Lambda^k Z^n; d1 is the (possibly twisted) cellular coboundary
restricted to these sublattices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping

from .cellular import cellular_chain_complex
from .errors import UnsupportedRegime
from .homology import ZERO, AbelianGroup, IntChainComplex, homology
from .orbit_complex import OrbitComplex, ann_basis
from .quat_linalg import Matrix, compound_matrix, wedge_coordinates


@dataclass(frozen=True)
class FiberCohomology:
    """H^*(Q^n; Z) = exterior algebra on n generators of degree 3."""

    n: int
    ranks: Mapping[int, int]
    basis: Mapping[int, tuple[tuple[int, ...], ...]]

    def rank(self, q: int) -> int:
        return self.ranks.get(q, 0)

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())


def fiber_cohomology(n: int) -> FiberCohomology:
    if n < 0:
        raise ValueError("torus rank must be >= 0")
    ranks = {3 * k: comb(n, k) for k in range(n + 1)}
    basis = {3 * k: tuple(combinations(range(n), k)) for k in range(n + 1)}
    return FiberCohomology(n, ranks, basis)


@dataclass(frozen=True)
class SpectralPage:
    r: int
    torus_rank: int
    dim_base: int
    entries: Mapping[tuple[int, int], AbelianGroup]
    differentials: Mapping[tuple[int, int], Matrix] = field(default_factory=dict)

    def entry(self, p: int, q: int) -> AbelianGroup:
        return self.entries.get((p, q), ZERO)

    def nonzero(self) -> list[tuple[int, int]]:
        return sorted(k for k, g in self.entries.items() if not g.is_zero())

    def rows(self) -> list[int]:
        return list(range(3 * self.torus_rank + 1))

    def euler_sum(self) -> int:
        return sum((-1) ** (p + q) * g.free_rank for (p, q), g in self.entries.items())

    def to_json(self) -> dict:
        return {f"{p},{q}": str(g) for (p, q), g in sorted(self.entries.items()) if not g.is_zero()}


@dataclass(frozen=True)
class CollapseCertificate:
    certified: bool
    reason: str
    threats: tuple[tuple[int, int, int], ...] = ()

    def to_json(self) -> dict:
        return {"certified": self.certified, "reason": self.reason,
                "threats": [list(t) for t in self.threats]}


@dataclass(frozen=True)
class GradedCohomology:
    """Associated graded of H^*(M; Z): for each degree the pieces (p, q, E_inf^{p,q})."""

    pieces: Mapping[int, tuple[tuple[int, int, AbelianGroup], ...]]
    certificate: CollapseCertificate
    h1h2: Mapping[str, AbelianGroup]
    h3: Mapping[str, object]

    @property
    def degrees(self) -> list[int]:
        return sorted(self.pieces)

    def total(self, r: int) -> AbelianGroup:
        """Direct sum of the graded pieces (the extension is not resolved)."""
        out = ZERO
        for _, _, g in self.pieces.get(r, ()):
            out = out + g
        return out

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(self.total(r).free_rank for r in self.degrees)

    def euler_characteristic(self) -> int:
        return sum((-1) ** r * self.total(r).free_rank for r in self.degrees)

    def to_json(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "graded": {str(r): [{"p": p, "q": q, "group": str(g)} for p, q, g in self.pieces[r]]
                       for r in self.degrees},
            "collapse": self.certificate.to_json(),
            "H1H2": {k: str(v) for k, v in self.h1h2.items()},
            "H3": {k: (str(v) if isinstance(v, AbelianGroup) else v) for k, v in self.h3.items()},
        }


def _require_untwisted(X: OrbitComplex) -> None:
    if not X.euler_class_zero:
        raise UnsupportedRegime("euler_class", "the Euler class of the orbit map is nonzero; "
                                               "only the e(M) = 0 regime is implemented")


def _wedge_basis(X: OrbitComplex, cell_id: str, k: int) -> Matrix:
    """Columns: wedges of k-subsets of the annihilator basis, in Lambda^k Z^n coordinates."""
    n = X.torus_rank
    rows = ann_basis(X, X.face_of(cell_id))
    cols = [wedge_coordinates([rows[i] for i in S], n) for S in combinations(range(len(rows)), k)]
    return Matrix.from_cols(cols, rows=comb(n, k)) if cols else Matrix.zeros(comb(n, k), 0)


class _LeftInverse:
    """Exact solver for W X = Y with W of full column rank."""

    def __init__(self, W: Matrix):
        self.W = W
        self.L = (W.T @ W).inverse() @ W.T if W.cols else None

    def solve(self, Y: Matrix, where: str) -> Matrix:
        if self.L is None:
            if not Y.is_zero():
                raise ArithmeticError(f"coboundary leaves the fiber sublattice at {where}")
            return Matrix.zeros(0, Y.cols)
        Xs = self.L @ Y
        if self.W @ Xs != Y:
            raise ArithmeticError(f"coboundary leaves the fiber sublattice at {where}")
        if not Xs.is_integral():
            raise ArithmeticError(f"non-integral restricted coboundary at {where}")
        return Xs


def build_E1(X: OrbitComplex) -> SpectralPage:
    X.require_valid()
    _require_untwisted(X)
    n, dimB = X.torus_rank, X.dim
    entries: dict[tuple[int, int], AbelianGroup] = {}
    diffs: dict[tuple[int, int], Matrix] = {}
    transports = {}
    for p, items in X.coboundary_paths.items():
        for tpos, spos, sign, path in items:
            transports[(p, tpos, spos, path)] = X.transport(path)
    for k in range(n + 1):
        q = 3 * k
        bases = {c.id: _wedge_basis(X, c.id, k) for c in X.cells}
        offsets: dict[int, list[int]] = {}
        for p in range(dimB + 1):
            off, acc = [], 0
            for c in X.cells_of_dim(p):
                off.append(acc)
                acc += bases[c.id].cols
            offsets[p] = off + [acc]
            entries[(p, q)] = AbelianGroup(acc)
        solvers = {c.id: _LeftInverse(bases[c.id]) for c in X.cells}
        for p in range(dimB):
            src, dst = X.cells_of_dim(p), X.cells_of_dim(p + 1)
            rows = [[Fraction(0)] * offsets[p][-1] for _ in range(offsets[p + 1][-1])]
            for tpos, spos, sign, path in X.coboundary_paths.get(p, []):
                tau, sigma = dst[tpos], src[spos]
                Ws = bases[sigma.id]
                if not Ws.cols:
                    continue
                T = transports[(p, tpos, spos, path)]
                Y = (compound_matrix(T, k) @ Ws).scale(sign)
                block = solvers[tau.id].solve(Y, f"{sigma.id} -> {tau.id}, q={q}")
                r0, c0 = offsets[p + 1][tpos], offsets[p][spos]
                for i in range(block.rows):
                    for j in range(block.cols):
                        rows[r0 + i][c0 + j] += block[i, j]
            diffs[(p, q)] = Matrix.from_rows(rows, cols=offsets[p][-1])
        for p in range(dimB - 1):
            if not (diffs[(p + 1, q)] @ diffs[(p, q)]).is_zero():
                raise ArithmeticError(f"d1 does not square to zero in row q={q}")
    return SpectralPage(1, n, dimB, entries, diffs)


def _row_complex(page: SpectralPage, q: int) -> IntChainComplex:
    ranks = {p: page.entry(p, q).free_rank for p in range(page.dim_base + 1)}
    maps = {p: page.differentials[(p, q)] for p in range(page.dim_base) if (p, q) in page.differentials}
    return IntChainComplex(ranks, maps, 1)


def compute_E2(page1: SpectralPage) -> SpectralPage:
    entries = {}
    for k in range(page1.torus_rank + 1):
        q = 3 * k
        for p, g in homology(_row_complex(page1, q)).items():
            entries[(p, q)] = g
    return SpectralPage(2, page1.torus_rank, page1.dim_base, entries)


def collapse_certificate(page2: SpectralPage, dim_base: int | None = None) -> CollapseCertificate:
    """Rule out every d_r (r >= 2) whose source and target are both nonzero on E2."""
    dimB = page2.dim_base if dim_base is None else dim_base
    if dimB <= 3:
        return CollapseCertificate(True, f"base dimension {dimB} <= 3 leaves no room for d_r with r >= 4")
    threats = []
    for (p, q) in page2.nonzero():
        for r in range(2, dimB - p + 1):
            tq = q - r + 1
            if tq < 0:
                break
            if not page2.entry(p + r, tq).is_zero():
                threats.append((p, q, r))
    if threats:
        desc = ", ".join(f"d{r}: ({p},{q})->({p + r},{q - r + 1})" for p, q, r in threats)
        return CollapseCertificate(False, "potential nonzero differentials " + desc, tuple(threats))
    return CollapseCertificate(True, "every differential d_r, r >= 2, has a zero source or target")


def spectral_pages(X: OrbitComplex) -> tuple[SpectralPage, SpectralPage]:
    """(E1, E2), memoized on the complex instance."""
    cached = X.__dict__.get("_spectral_pages")
    if cached is None:
        E1 = build_E1(X)
        cached = (E1, compute_E2(E1))
        X.__dict__["_spectral_pages"] = cached
    return cached


def graded_cohomology(X: OrbitComplex, h3_split: bool = False) -> GradedCohomology:
    """gr H^*(M; Z) from E2 once collapse is certified.

    ``h3_split`` asserts the hypothesis under which the degree-3 extension
    0 -> E^{0,3} -> H^3(M) -> E^{3,0} -> 0 splits; otherwise it is reported
    unresolved.
    """
    _, E2 = spectral_pages(X)
    cert = collapse_certificate(E2)
    if not cert.certified:
        raise UnsupportedRegime("collapse", cert.reason, cert.threats)
    top = X.dim + 3 * X.torus_rank
    pieces = {}
    for r in range(max(top, 0) + 1):
        pieces[r] = tuple((p, r - p, E2.entry(p, r - p)) for p in range(max(X.dim, 0) + 1)
                          if r - p >= 0 and (r - p) % 3 == 0)
    h1h2 = {"H1(M) = H1(B)": E2.entry(1, 0), "H2(M) = H2(B)": E2.entry(2, 0)}
    h3 = {"fiber summand E^{0,3}": E2.entry(0, 3), "base quotient E^{3,0}": E2.entry(3, 0),
          "extension": "split" if h3_split else "unresolved"}
    return GradedCohomology(pieces, cert, h1h2, h3)


@dataclass(frozen=True)
class EulerReport:
    value: int
    vertex_count: int
    e1_sum: int
    e2_sum: int
    graded_sum: int | None
    mismatches: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"euler_characteristic": self.value, "vertex_cells": self.vertex_count,
                "E1_sum": self.e1_sum, "E2_sum": self.e2_sum, "graded_sum": self.graded_sum,
                "mismatches": list(self.mismatches)}


def euler_characteristic(X: OrbitComplex) -> int:
    return euler_report(X).value


def euler_report(X: OrbitComplex) -> EulerReport:
    X.require_valid()
    count = len(X.vertex_cells())
    E1, E2 = spectral_pages(X)
    graded = None
    if collapse_certificate(E2).certified:
        graded = graded_cohomology(X).euler_characteristic()
    mism = []
    for name, val in (("E1", E1.euler_sum()), ("E2", E2.euler_sum()), ("graded", graded)):
        if val is not None and val != count:
            mism.append(f"{name} alternating sum {val} differs from vertex count {count}")
    return EulerReport(count, count, E1.euler_sum(), E2.euler_sum(), graded, tuple(mism))


@dataclass(frozen=True)
class KGroups:
    """Associated graded of K^0 and K^1 as lists of (p, H^p(B; Z))."""

    K0: tuple[tuple[int, AbelianGroup], ...]
    K1: tuple[tuple[int, AbelianGroup], ...]
    reduced_K0: tuple[tuple[int, AbelianGroup], ...]
    reduced_K1: tuple[tuple[int, AbelianGroup], ...]
    caveats: tuple[str, ...] = ()

    @property
    def total_rank(self) -> int:
        return sum(g.free_rank for _, g in self.K0 + self.K1)

    def reduced_is_zero(self) -> bool:
        return all(g.is_zero() for _, g in self.reduced_K0 + self.reduced_K1)

    def to_json(self) -> dict:
        def enc(xs):
            return [{"p": p, "group": str(g)} for p, g in xs]

        return {"K0": enc(self.K0), "K1": enc(self.K1), "reduced_K0": enc(self.reduced_K0),
                "reduced_K1": enc(self.reduced_K1), "caveats": list(self.caveats)}


def ahss_kgroups(X: OrbitComplex, allow_empty_vertex_set: bool = False) -> KGroups:
    """K^*(M) read off from H^*(B; Z) under the collapsed, untwisted AHSS."""
    X.require_valid()
    _require_untwisted(X)
    if not X.vertex_cells() and not allow_empty_vertex_set:
        raise UnsupportedRegime("vertex_set", "no cell lies in a 0-dimensional face; "
                                              "the K-group isomorphism needs a nonempty vertex set")
    H = homology(cellular_chain_complex(X).dual())
    dimB = X.dim
    K0 = tuple((p, H[p]) for p in sorted(H) if p % 2 == 0)
    K1 = tuple((p, H[p]) for p in sorted(H) if p % 2 == 1)
    red0 = tuple((p, AbelianGroup(g.free_rank - 1, g.torsion) if p == 0 and g.free_rank else g) for p, g in K0)
    caveats = []
    if dimB >= 6:
        caveats.append(f"base dimension {dimB} >= 6: d3 = Sq^3 may act")
    for p in H:
        for r in range(3, dimB - p + 1, 2):
            tgt = H.get(p + r)
            if tgt is not None and not H[p].is_zero() and tgt.has_odd_torsion():
                caveats.append(f"odd torsion in H^{p + r}(B) could receive d{r} from H^{p}(B)")
    return KGroups(K0, K1, red0, K1, tuple(caveats))
