"""Integer chain complexes, Smith normal form and group presentations."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Mapping, Sequence

from .quat_linalg import Matrix


# --------------------------------------------------------------------------
# Smith normal form
# --------------------------------------------------------------------------


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D``.

    U and V are unimodular and D is diagonal with nonnegative entries
    ``d_1 | d_2 | ...``.  Pivots are chosen as the smallest nonzero absolute
    value in the active block, ties broken by lowest (row, col) index.
    """
    if not A.is_integral():
        raise ValueError("Smith normal form needs an integer matrix")
    m, n = A.rows, A.cols
    a = [[int(x) for x in r] for r in A.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for r in a:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            # reduce column t and row t modulo the pivot; a nonzero remainder
            # becomes the new (strictly smaller) pivot
            moved = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        moved = True
                        break
            if moved:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return (Matrix(m, m, tuple(map(tuple, U))),
            Matrix(m, n, tuple(map(tuple, a))),
            Matrix(n, n, tuple(map(tuple, V))))


def elementary_divisors(A: Matrix) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form, in divisor-chain order."""
    _, D, _ = smith_normal_form(A)
    return [D[i, i] for i in range(min(D.rows, D.cols)) if D[i, i]]


def hermite_rows(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of an integer row basis (zero rows dropped)."""
    a = [list(map(int, r)) for r in rows]
    out_row = 0
    for c in range(n):
        # Euclid on column c among rows out_row..
        while True:
            nz = [i for i in range(out_row, len(a)) if a[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(a[i][c]), i))
            a[out_row], a[p] = a[p], a[out_row]
            done = True
            for i in range(out_row + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[out_row][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[out_row])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if out_row < len(a) and a[out_row][c]:
            if a[out_row][c] < 0:
                a[out_row] = [-x for x in a[out_row]]
            for i in range(out_row):
                q = a[i][c] // a[out_row][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[out_row])]
            out_row += 1
    return [tuple(r) for r in a[:out_row]]


# --------------------------------------------------------------------------
# Abelian groups and chain complexes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group ``Z^free_rank + sum Z/t``, t_1 | t_2 | ..."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = tuple(int(x) for x in self.torsion)
        if any(x <= 1 for x in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"torsion {t} is not a divisor chain of integers > 1")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_invariants(cls, free_rank: int, divisors: Sequence[int]) -> "AbelianGroup":
        """Normalize arbitrary cyclic orders into the canonical divisor chain."""
        ds = [abs(int(d)) for d in divisors if abs(int(d)) != 1]
        free_rank += sum(1 for d in ds if d == 0)
        ds = [d for d in ds if d]
        if not ds:
            return cls(free_rank, ())
        D = Matrix.diag(ds)
        return cls(free_rank, tuple(d for d in elementary_divisors(D) if d > 1))

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def has_odd_torsion(self) -> bool:
        return any(t >> _v2(t) > 1 for t in self.torsion)

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_invariants(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def tensor_free(self, rank: int) -> "AbelianGroup":
        """``self (x) Z^rank``."""
        return AbelianGroup.from_invariants(self.free_rank * rank, self.torsion * rank)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def _v2(t: int) -> int:
    v = 0
    while t % 2 == 0:
        t //= 2
        v += 1
    return v


ZERO = AbelianGroup()
Z = AbelianGroup(1)


@dataclass(frozen=True)
class IntChainComplex:
    """Free Z-modules ``C_p = Z^ranks[p]`` with maps of fixed degree.

    ``maps[p]`` goes from ``C_p`` to ``C_{p + degree}``; ``degree = -1`` for a
    chain complex (boundaries) and ``+1`` for a cochain complex.
    """

    ranks: Mapping[int, int]
    maps: Mapping[int, Matrix]
    degree: int = -1

    def __post_init__(self):
        object.__setattr__(self, "ranks", dict(self.ranks))
        object.__setattr__(self, "maps", dict(self.maps))
        if self.degree not in (-1, 1):
            raise ValueError("degree must be -1 or +1")
        for p, M in self.maps.items():
            if M.shape != (self.rank(p + self.degree), self.rank(p)):
                raise ValueError(f"map in degree {p} has shape {M.shape}, expected "
                                 f"{(self.rank(p + self.degree), self.rank(p))}")

    def rank(self, p: int) -> int:
        return self.ranks.get(p, 0)

    def map(self, p: int) -> Matrix:
        if p in self.maps:
            return self.maps[p]
        return Matrix.zeros(self.rank(p + self.degree), self.rank(p))

    @property
    def degrees(self) -> list[int]:
        return sorted(p for p, r in self.ranks.items())

    def is_complex(self) -> bool:
        return all((self.map(p + self.degree) @ self.map(p)).is_zero() for p in self.degrees)

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * r for p, r in self.ranks.items())

    def dual(self) -> "IntChainComplex":
        """Hom(-, Z): transposed maps, reversed degree."""
        maps = {p + self.degree: M.T for p, M in self.maps.items()}
        return IntChainComplex(self.ranks, maps, -self.degree)


def homology(C: IntChainComplex) -> dict[int, AbelianGroup]:
    """``ker(map_p) / im(map_{p - degree})`` for every degree with a nonzero module."""
    if not C.is_complex():
        raise ValueError("maps do not compose to zero")
    out = {}
    ranks = {p: (C.map(p).rank() if C.rank(p) else 0) for p in C.degrees}
    for p in C.degrees:
        incoming = p - C.degree
        inc = C.map(incoming) if C.rank(incoming) else None
        inc_divs = elementary_divisors(inc) if inc is not None else []
        free = C.rank(p) - ranks.get(p, 0) - len(inc_divs)
        out[p] = AbelianGroup(free, tuple(d for d in inc_divs if d > 1))
    return out


def homology_from_boundaries(boundaries: Mapping[int, Sequence[Sequence[int]]],
                             ranks: Mapping[int, int]) -> dict[int, AbelianGroup]:
    """Convenience: homology from nested-list boundary matrices d_p: C_p -> C_{p-1}."""
    maps = {p: Matrix.from_rows(d, cols=ranks[p]) if d else Matrix.zeros(ranks.get(p - 1, 0), ranks[p])
            for p, d in boundaries.items()}
    return homology(IntChainComplex(ranks, maps, -1))


# --------------------------------------------------------------------------
# Group presentations
# --------------------------------------------------------------------------

Word = tuple[int, ...]  # signed 1-based generator indices


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


@dataclass(frozen=True)
class GroupPresentation:
    """``< x_1..x_g | r_1..r_s >`` with relators as signed 1-based indices."""

    generators: int
    relators: tuple[Word, ...] = ()
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relators)
        for r in rels:
            if any(x == 0 or abs(x) > self.generators for x in r):
                raise ValueError(f"relator {r} references a missing generator")
        object.__setattr__(self, "relators", rels)

    def abelianization(self) -> AbelianGroup:
        if self.generators == 0:
            return ZERO
        rows = []
        for r in self.relators:
            v = [0] * self.generators
            for x in r:
                v[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(v)
        if not rows:
            return AbelianGroup(self.generators)
        divs = elementary_divisors(Matrix.from_rows(rows, cols=self.generators))
        return AbelianGroup(self.generators - len(divs), tuple(d for d in divs if d > 1))

    def simplify(self) -> "GroupPresentation":
        """Drop trivial relators and eliminate generators killed by length-one relators.

        Only these Tietze moves are applied; an unsimplified result does not mean
        the group is nontrivial.
        """
        gens = list(range(1, self.generators + 1))
        rels = [cyclic_reduce(r) for r in self.relators]
        while True:
            rels = [r for r in rels if r]
            killer = next((r for r in rels if len(r) == 1), None)
            if killer is None:
                break
            g = abs(killer[0])
            gens.remove(g)
            rels = [cyclic_reduce(tuple(x for x in r if abs(x) != g)) for r in rels]
        renum = {g: i + 1 for i, g in enumerate(gens)}
        new_rels = tuple(sorted(set(tuple((1 if x > 0 else -1) * renum[abs(x)] for x in r) for r in rels)))
        labels = tuple(self.labels[g - 1] for g in gens) if self.labels else ()
        return GroupPresentation(len(gens), new_rels, labels)

    def is_trivially_trivial(self) -> bool:
        return self.simplify().generators == 0

    def to_json(self) -> dict:
        return {"generators": list(self.labels) if self.labels else self.generators,
                "relators": [list(r) for r in self.relators]}

    def __str__(self):
        if self.generators == 0:
            return "trivial group"
        names = list(self.labels) if self.labels else [f"x{i}" for i in range(1, self.generators + 1)]

        def word(r):
            return "".join(names[abs(x) - 1] + ("" if x > 0 else "^-1") for x in r) or "1"

        return "<" + ", ".join(names) + " | " + ", ".join(word(r) for r in self.relators) + ">"


def gcd_list(xs) -> int:
    g = 0
    for x in xs:
        g = gcd(g, int(x))
    return g
