"""Acceptance suite: one marker per criterion, summarized as PASS/FAIL lines at the end of the run."""
import random
import time
from math import comb

import pytest

from oracles import divisor_chain
from qtoric import models
from qtoric.cellular import cellular_cohomology, cellular_homology, pi1_presentation
from qtoric.documents import bundled_path, complex_from_doc, fans_from_doc, parse_text, read_text, trinions_from_doc
from qtoric.homology import AbelianGroup, elementary_divisors
from qtoric.orbit_complex import Cell, Face, OrbitComplex
from qtoric.quat_linalg import Matrix, QuatMatrix
from qtoric.signature import (I2, meyer_form, random_symplectic, signature_of_symmetric, tau_quat,
                              total_signature)
from qtoric.spectral import ahss_kgroups, euler_characteristic, euler_report, fiber_cohomology, graded_cohomology, \
    spectral_pages

criterion = pytest.mark.criterion


def bundled(name: str) -> OrbitComplex:
    return complex_from_doc(parse_text(read_text(str(bundled_path(name))), name), name)


# 1 -----------------------------------------------------------------------------------------------


@criterion(1, "fiber cohomology of Q^n, n = 1..5")
@pytest.mark.parametrize("n", range(1, 6))
def test_fiber_cohomology(n):
    F = fiber_cohomology(n)
    ranks = dict(F.ranks)
    for d in range(3 * n + 3):
        assert ranks.get(d, 0) == (comb(n, d // 3) if d % 3 == 0 else 0)
    # the same groups through the full engine: one vertex with free Q^n orbit
    X = OrbitComplex(n, (Cell("v", 0, "P"),), (Face("P", n),))
    assert graded_cohomology(X).ranks == tuple(comb(n, d // 3) if d % 3 == 0 else 0 for d in range(3 * n + 1))


# 2 -----------------------------------------------------------------------------------------------


@criterion(2, "HP^1 and HP^2 models")
def test_hp1_and_hp2():
    hp1 = bundled("hp1")
    assert graded_cohomology(hp1).ranks == (1, 0, 0, 0, 1)
    assert euler_characteristic(hp1) == 2 == len(hp1.vertex_cells())
    hp2 = bundled("triangle")
    assert [f.charvec for f in hp2.facets] == [(1, 0), (0, 1), (-1, -1)]
    assert euler_characteristic(hp2) == 3 == len(hp2.vertex_cells())


# 3 -----------------------------------------------------------------------------------------------


@criterion(3, "S^3 x S^1 model")
def test_s3xs1():
    X = bundled("s3xs1")
    assert X.torus_rank == 1 and X.monodromy.is_trivial()
    assert graded_cohomology(X).ranks == (1, 1, 0, 1, 1)
    assert euler_characteristic(X) == 0 and len(X.vertex_cells()) == 0


# 4 -----------------------------------------------------------------------------------------------


def polytope_bases():
    r = random.Random(4)
    out = [models.interval(), models.simplex(2), models.simplex(3), bundled("disk"),
           models.product(models.interval(), models.product(models.interval(), models.interval())),
           models.product(models.simplex(2), models.interval())]
    out += [models.polygon(models.random_fan(r, k)) for k in (4, 5, 7)]
    return out


@criterion(4, "K-theory collapse over polytope bases")
@pytest.mark.parametrize("X", polytope_bases())
def test_ktheory_polytopes(X):
    K = ahss_kgroups(X)
    H = cellular_cohomology(X)
    assert K.total_rank == sum(g.free_rank for g in H.values())
    assert K.reduced_is_zero()


# 5 -----------------------------------------------------------------------------------------------


@criterion(5, "spectral-sequence structure on 100 random complexes")
def test_random_suite():
    r = random.Random(20240501)
    t0 = time.perf_counter()
    for i in range(100):
        X = models.random_complex(r)
        assert X.torus_rank <= 3 and len(X.cells) <= 30
        assert X.validation.ok, X.validation.summary()
        E1, E2 = spectral_pages(X)
        for page in (E1, E2):
            for (p, q), g in page.entries.items():
                if q % 3 in (1, 2):
                    assert g.is_zero(), (i, p, q)
        for (p, q), d in E1.differentials.items():
            nxt = E1.differentials.get((p + 1, q))
            if nxt is not None:
                assert (nxt @ d).is_zero(), (i, p, q)
        rep = euler_report(X)
        assert rep.e1_sum == rep.e2_sum == rep.value, i
        assert not rep.mismatches
    assert time.perf_counter() - t0 < 30


# 6 -----------------------------------------------------------------------------------------------


@criterion(6, "quaternionic Meyer cocycle")
def test_meyer_cocycle_trivial_arguments():
    r = random.Random(6)
    for _ in range(50):
        C = random_symplectic(r)
        assert tau_quat(I2, C) == 0 and tau_quat(C, I2) == 0
        assert meyer_form(I2, C).asymmetry == 0 and meyer_form(C, I2).asymmetry == 0


@criterion(6, "quaternionic Meyer cocycle")
def test_meyer_symmetry_diagnostic():
    r = random.Random(66)
    pairs = [(random_symplectic(r), random_symplectic(r)) for _ in range(25)]
    J = QuatMatrix.from_rows([[0, 1], [-1, 0]])
    pairs += [(J, J), (J, -I2), (-I2, J), (-I2, -I2)]
    for C1, C2 in pairs:
        assert meyer_form(C1, C2).asymmetry == 0


def congruence_forms():
    r = random.Random(7)
    forms = [Matrix.from_rows([[1] * 3] * 3), Matrix.from_rows([[0, 1], [1, 0]]),
             meyer_form(QuatMatrix.from_rows([[0, 1], [-1, 0]]), QuatMatrix.from_rows([[0, 1], [-1, 0]])).matrix]
    for n in (2, 4, 5):
        a = [[r.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        forms.append(Matrix.from_rows([[a[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)]))
    return forms


@criterion(6, "quaternionic Meyer cocycle")
@pytest.mark.parametrize("S", congruence_forms())
def test_congruence_invariance(S):
    r = random.Random(S.rows)
    s = signature_of_symmetric(S)
    for _ in range(50):
        U = models.random_unimodular(r, S.rows)
        assert abs(U.det()) == 1
        assert signature_of_symmetric(U.T @ S @ U) == s


# 7 -----------------------------------------------------------------------------------------------


@criterion(7, "signature assembly and Novikov additivity")
def test_triangle_fan_document():
    doc = parse_text(read_text(str(bundled_path("triangle_fan"))), "triangle_fan")
    S = total_signature(trinions_from_doc(doc, "triangle_fan"), fans_from_doc(doc, "triangle_fan"))
    assert S.intersection_matrices == (Matrix.from_rows([[1, 1, 1]] * 3),)
    assert (S.sigma_M1, S.sigma_M2, S.sigma_total) == (0, 1, 1)


def _block(A: Matrix, B: Matrix) -> Matrix:
    n = A.rows + B.rows
    rows = [[0] * n for _ in range(n)]
    for i in range(A.rows):
        for j in range(A.cols):
            rows[i][j] = A[i, j]
    for i in range(B.rows):
        for j in range(B.cols):
            rows[A.rows + i][A.cols + j] = B[i, j]
    return Matrix.from_rows(rows, cols=n)


def _random_symmetric(r: random.Random) -> Matrix:
    n = r.randint(1, 5)
    a = [[r.randint(-6, 6) for _ in range(n)] for _ in range(n)]
    return Matrix.from_rows([[a[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)])


@criterion(7, "signature assembly and Novikov additivity")
def test_block_additivity():
    r = random.Random(77)
    for _ in range(100):
        A, B = _random_symmetric(r), _random_symmetric(r)
        assert signature_of_symmetric(_block(A, B)) == signature_of_symmetric(A) + signature_of_symmetric(B)


# 8 -----------------------------------------------------------------------------------------------


@criterion(8, "fundamental group presentations")
def test_pi1_examples():
    assert str(pi1_presentation(bundled("disk"))) == "trivial group"
    P = pi1_presentation(models.circle(1))
    assert P.generators == 1 and P.relators == ()
    assert P.abelianization() == AbelianGroup(1)


def pi1_examples():
    r = random.Random(88)
    return [f() for f in models.BUNDLED.values()] + [models.random_complex(r) for _ in range(30)]


@criterion(8, "fundamental group presentations")
@pytest.mark.parametrize("X", pi1_examples())
def test_abelianization_is_h1(X):
    assert pi1_presentation(X).abelianization() == cellular_homology(X).get(1, AbelianGroup())


# 9 -----------------------------------------------------------------------------------------------


@criterion(9, "Smith normal form against the gcd-of-minors oracle")
def test_snf_oracle():
    r = random.Random(99)
    for _ in range(200):
        m, n = r.randint(1, 6), r.randint(1, 6)
        rows = [[r.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        assert elementary_divisors(Matrix.from_rows(rows, cols=n)) == divisor_chain(rows)
