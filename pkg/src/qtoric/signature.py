"""Signature via the quaternionic Meyer cocycle and Novikov additivity.

The manifold splits as M1 (over a surface cut into trinions, each contributing
the Meyer-type signature of its two generating monodromies) and M2 (a collar
of the boundary strata, whose intersection form is read from the boundary fan).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import UnsupportedRegime
from .homology import elementary_divisors
from .quat_linalg import (J2, Matrix, Quaternion, QuatMatrix, as_rational, dieudonne_det,
                          is_quaternionic_symplectic, realify)

I2 = QuatMatrix.identity(2)


# ------------------------------------------------------------------------------
# symmetric forms
# ------------------------------------------------------------------------------


def congruence_diagonalize(S: Matrix) -> list[Fraction]:
    """Diagonal of a form congruent to S (exact; zero pivots handled by pivot completion)."""
    if not S.is_square() or not S.is_symmetric():
        raise ValueError("form is not symmetric")
    n = S.rows
    a = [[Fraction(x) for x in row] for row in S.data]
    diag = []
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                diag.extend([Fraction(0)] * (n - k))
                break
            i, j = pair
            # e_i -> e_i + e_j makes the (i, i) entry 2 a_ij + a_jj = 2 a_ij
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            piv = i
        a[k], a[piv] = a[piv], a[k]
        for row in a:
            row[k], row[piv] = row[piv], row[k]
        p = a[k][k]
        for i in range(k + 1, n):
            c = a[i][k] / p
            if c:
                for t in range(k, n):
                    a[i][t] -= c * a[k][t]
                for t in range(k, n):
                    a[t][i] -= c * a[t][k]
        diag.append(p)
    return diag


def signature_of_symmetric(S: Matrix) -> int:
    d = congruence_diagonalize(S)
    return sum(1 for x in d if x > 0) - sum(1 for x in d if x < 0)


# ------------------------------------------------------------------------------
# Meyer cocycle
# ------------------------------------------------------------------------------


def _check_pair(C1: QuatMatrix, C2: QuatMatrix) -> None:
    if C1.shape != (2, 2) or C2.shape != (2, 2):
        raise ValueError("monodromies must be 2x2 quaternionic matrices")
    if realify(C1).det() == 0:
        raise ValueError("C1 is singular")


def meyer_map(C1: QuatMatrix, C2: QuatMatrix) -> Matrix:
    """Realified 8x16 matrix of (x, y) -> (C1^-1 - I) x + (C2 - I) y."""
    _check_pair(C1, C2)
    return realify(C1.inverse() - I2).hstack(realify(C2 - I2))


def meyer_space(C1: QuatMatrix, C2: QuatMatrix) -> list[tuple]:
    """Real basis of V = ker[(C1^-1 - I) | (C2 - I)] inside R^16 = H^2 x H^2."""
    return meyer_map(C1, C2).kernel()


@dataclass(frozen=True)
class MeyerForm:
    basis: tuple[tuple, ...]
    matrix: Matrix          # symmetrized Gram matrix on the basis
    asymmetry: Fraction     # max |(B - B^T)/2| before symmetrization

    @property
    def dim(self) -> int:
        return len(self.basis)


def meyer_form(C1: QuatMatrix, C2: QuatMatrix) -> MeyerForm:
    """Gram matrix of <(x,y),(x',y')> = Re((x+y)^* J (I - C2) y') on V."""
    basis = meyer_space(C1, C2)
    if not basis:
        return MeyerForm((), Matrix.zeros(0, 0), Fraction(0))
    R = realify(J2 @ (I2 - C2))
    I8 = Matrix.identity(8)
    P = I8.hstack(I8)                      # (x, y) -> x + y
    Q = Matrix.zeros(8, 8).hstack(I8)      # (x, y) -> y
    K = Matrix.from_cols(basis, rows=16)
    B = K.T @ P.T @ R @ Q @ K
    half = Fraction(1, 2)
    sym = (B + B.T).scale(half)
    asym = (B - B.T).scale(half)
    worst = max((abs(Fraction(x)) for row in asym.data for x in row), default=Fraction(0))
    return MeyerForm(tuple(basis), sym, worst)


def tau_quat(C1: QuatMatrix, C2: QuatMatrix) -> int:
    return signature_of_symmetric(meyer_form(C1, C2).matrix)


def random_symplectic(rng: random.Random, length: int = 4, bound: int = 2) -> QuatMatrix:
    """Random word in generators of {C : C^* J C = J}.

    Generators: [[1,b],[0,1]], [[1,0],[c,1]] (b, c real), diag(a, a/N(a)) and J.
    """
    C = I2
    for _ in range(length):
        kind = rng.randrange(4)
        if kind == 0:
            G = QuatMatrix.from_rows([[1, rng.randint(-bound, bound)], [0, 1]])
        elif kind == 1:
            G = QuatMatrix.from_rows([[1, 0], [rng.randint(-bound, bound), 1]])
        elif kind == 2:
            a = Quaternion(*[rng.randint(-bound, bound) for _ in range(4)])
            if not a:
                a = Quaternion(1)
            G = QuatMatrix.diag([a, a * (1 / a.norm())])
        else:
            G = J2
        C = C @ G
    return C


# ------------------------------------------------------------------------------
# trinions and boundary fans
# ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Trinion:
    C1: QuatMatrix
    C2: QuatMatrix
    C3: QuatMatrix


@dataclass(frozen=True)
class TrinionData:
    trinions: tuple[Trinion, ...] = ()

    def violations(self) -> list[str]:
        out = []
        for i, t in enumerate(self.trinions):
            for name in ("C1", "C2", "C3"):
                C = getattr(t, name)
                if C.shape != (2, 2):
                    out.append(f"trinion {i}: {name} is not 2x2")
                elif not is_quaternionic_symplectic(C):
                    out.append(f"trinion {i}: {name} fails C^* J C = J")
            if all(getattr(t, n).shape == (2, 2) for n in ("C1", "C2", "C3")):
                if t.C1 @ t.C2 @ t.C3 != I2:
                    out.append(f"trinion {i}: C1 C2 C3 != I")
        return out


def sigma_m1(t: TrinionData) -> int:
    bad = t.violations()
    if bad:
        raise ValueError("; ".join(bad))
    return sum(tau_quat(tr.C1, tr.C2) for tr in t.trinions)


@dataclass(frozen=True)
class BoundaryFan:
    """Cyclic sequence of facet vectors along one boundary component.

    Entries are integers (lattice data) or quaternions; the latter switch the
    diagonal to the Dieudonne fallback.
    """

    vectors: tuple[tuple, ...]

    @property
    def k(self) -> int:
        return len(self.vectors)

    def is_quaternionic(self) -> bool:
        return any(isinstance(x, Quaternion) and not x.is_real() for v in self.vectors for x in v)

    def violations(self) -> list[str]:
        out = []
        if self.k < 2:
            out.append("a boundary fan needs at least 2 vectors")
        if any(len(v) != 2 for v in self.vectors):
            out.append("fan vectors must have 2 components")
            return out
        if not self.is_quaternionic():
            for i in range(self.k):
                a, b = self.vectors[i], self.vectors[(i + 1) % self.k]
                M = Matrix.from_rows([_real(a), _real(b)], cols=2)
                divs = elementary_divisors(M) if M.is_integral() else []
                if divs != [1, 1]:
                    out.append(f"adjacent vectors {i}, {(i + 1) % self.k} are not unimodular")
        return out


def _real(v) -> tuple:
    return tuple(x.re if isinstance(x, Quaternion) else as_rational(x) for x in v)


@dataclass(frozen=True)
class IntersectionMatrix:
    matrix: Matrix
    notes: tuple[str, ...] = ()
    flagged: bool = False


def boundary_intersection_matrix(fan: BoundaryFan) -> IntersectionMatrix:
    """Intersection numbers of the boundary spheres of one component."""
    bad = fan.violations()
    if bad:
        raise ValueError("; ".join(bad))
    k = fan.k
    A = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in ((i - 1) % k, (i + 1) % k):
            if j != i:
                A[i][j] = Fraction(2 if k == 2 else 1)
    quat = fan.is_quaternionic()
    notes = ["diagonal: -det(v_{i-1}, v_{i+1}) over the two cyclic neighbours"]
    for i in range(k):
        u, w = fan.vectors[(i - 1) % k], fan.vectors[(i + 1) % k]
        if not quat:
            (a, b), (c, d) = _real(u), _real(w)
            A[i][i] = -(a * d - b * c)
        else:
            D = dieudonne_det(QuatMatrix.from_rows([[u[0], w[0]], [u[1], w[1]]]))
            if not D.is_rational:
                raise UnsupportedRegime("dieudonne_rationality",
                                        f"Dieudonne determinant of neighbours of vector {i} is irrational "
                                        f"(realified determinant {D.realified_det})")
            A[i][i] = -D.value
    if quat:
        notes.append("quaternionic data: diagonal uses the unsigned Dieudonne determinant")
    return IntersectionMatrix(Matrix.from_rows(A, cols=k), tuple(notes), quat)


@dataclass(frozen=True)
class SignatureAssembly:
    sigma_M1: int
    sigma_M2: int
    sigma_total: int
    taus: tuple[int, ...] = ()
    intersection_matrices: tuple[Matrix, ...] = ()
    component_signatures: tuple[int, ...] = ()
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "sigma_M1": self.sigma_M1, "sigma_M2": self.sigma_M2, "sigma_total": self.sigma_total,
            "trinion_taus": list(self.taus),
            "boundary_components": [{"matrix": M.to_lists(), "signature": s}
                                    for M, s in zip(self.intersection_matrices, self.component_signatures)],
            "notes": list(self.notes),
        }


def total_signature(t: TrinionData, fans: Sequence[BoundaryFan]) -> SignatureAssembly:
    bad = t.violations()
    if bad:
        raise ValueError("; ".join(bad))
    taus = tuple(tau_quat(tr.C1, tr.C2) for tr in t.trinions)
    mats, sigs, notes = [], [], []
    for fan in fans:
        im = boundary_intersection_matrix(fan)
        mats.append(im.matrix)
        sigs.append(signature_of_symmetric(im.matrix))
        notes.extend(n for n in im.notes if n not in notes)
    if not t.trinions:
        notes.append("no trinions: genus-0 base, sigma(M1) = 0")
    notes.append("orientation: boundary fans are read counterclockwise; reversing it negates sigma(M2)")
    s1, s2 = sum(taus), sum(sigs)
    return SignatureAssembly(s1, s2, s1 + s2, taus, tuple(mats), tuple(sigs), tuple(notes))
