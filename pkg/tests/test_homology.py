import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import divisor_chain
from qtoric import models
from qtoric.cellular import (cellular_chain_complex, cellular_cohomology, cellular_homology, cohomology_local,
                             pi1_presentation, twisted_cochain_complex)
from qtoric.homology import (AbelianGroup, GroupPresentation, IntChainComplex, elementary_divisors,
                             homology, homology_from_boundaries, smith_normal_form)
from qtoric.orbit_complex import MonodromyRep
from qtoric.quat_linalg import Matrix

int_matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


def _check_snf(rows):
    A = Matrix.from_rows(rows)
    U, D, V = smith_normal_form(A)
    assert U @ A @ V == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = [D[i, i] for i in range(min(D.rows, D.cols))]
    assert all(D[i, j] == 0 for i in range(D.rows) for j in range(D.cols) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return nz


def test_snf_examples():
    assert _check_snf([[1, 0], [0, 1]]) == [1, 1]
    assert _check_snf([[0]]) == []
    assert _check_snf([[2, 0], [0, 3]]) == [1, 6]


@given(int_matrices)
def test_snf_property(rows):
    assert _check_snf(rows) == divisor_chain(rows)


def test_snf_deterministic():
    A = Matrix.from_rows([[4, 6, 2], [6, 9, 3]])
    assert smith_normal_form(A) == smith_normal_form(A)


def test_abelian_group_normal_form():
    G = AbelianGroup.from_invariants(1, [6, 4, 1])
    assert G == AbelianGroup(1, (2, 12))
    assert str(G) == "Z + Z/2 + Z/12"
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 6))
    assert AbelianGroup(0, (3,)).has_odd_torsion()
    assert not AbelianGroup(0, (2, 4)).has_odd_torsion()


def test_homology_examples():
    circle = homology_from_boundaries({1: [[0]]}, {0: 1, 1: 1})
    assert circle == {0: AbelianGroup(1), 1: AbelianGroup(1)}
    sphere = homology(IntChainComplex({0: 1, 2: 1}, {}))
    assert sphere[0] == AbelianGroup(1) and sphere[2] == AbelianGroup(1)
    rp2 = homology_from_boundaries({1: [[0]], 2: [[2]]}, {0: 1, 1: 1, 2: 1})
    assert rp2[0] == AbelianGroup(1) and rp2[1] == AbelianGroup(0, (2,)) and rp2[2].is_zero()


def test_homology_rejects_non_complex():
    C = IntChainComplex({0: 1, 1: 1, 2: 1}, {1: Matrix.from_rows([[1]]), 2: Matrix.from_rows([[1]])})
    with pytest.raises(ValueError):
        homology(C)


def _examples():
    r = random.Random(11)
    return [f() for f in models.BUNDLED.values()] + [models.random_complex(r) for _ in range(25)]


@pytest.mark.parametrize("X", _examples())
def test_euler_poincare(X):
    C = cellular_chain_complex(X)
    H = homology(C)
    assert sum((-1) ** p * g.free_rank for p, g in H.items()) == C.euler_characteristic()


@pytest.mark.parametrize("X", _examples())
def test_trivial_rep_agrees_with_untwisted(X):
    m = 2
    trivial = MonodromyRep(None, None, {})
    C = twisted_cochain_complex(X, trivial, m)
    D = cellular_chain_complex(X).dual()
    for p, M in D.maps.items():
        # coboundary is (transpose incidence) tensor I_m
        assert C.map(p) == Matrix.from_rows(
            [[M[i // m, j // m] if i % m == j % m else 0 for j in range(m * M.cols)] for i in range(m * M.rows)],
            cols=m * M.cols)
    H = cellular_cohomology(X)
    for p, g in cohomology_local(X, trivial, 1).items():
        assert g == H[p]


def test_twisted_circle():
    minus = models.circle(1, [[-1]])
    H = cohomology_local(minus)
    assert H[0].is_zero() and H[1] == AbelianGroup(0, (2,))
    plus = models.circle(1, [[1]])
    H = cohomology_local(plus)
    assert H[0] == AbelianGroup(1) and H[1] == AbelianGroup(1)


def test_twisted_coboundary_squares_to_zero():
    X = models.with_monodromy(models.product(models.interval(), models.circle(1)),
                              {"v0*e": [[1, 0], [3, 1]], "v1*e": [[1, 0], [3, 1]]})
    C = twisted_cochain_complex(X)
    assert C.is_complex()


def test_twisted_torus_with_sign_monodromy():
    # coefficients Z_- + Z; Kunneth with H(S^1; Z_-) = (0, Z/2)
    X = models.product(models.circle(1, [[-1]]), models.circle(1))
    H = cohomology_local(X)
    assert H[0] == AbelianGroup(1)
    assert H[1] == AbelianGroup(2, (2,))
    assert H[2] == AbelianGroup(1, (2,))


def test_pi1_examples():
    assert pi1_presentation(models.simplex(2)).generators == 0
    assert str(pi1_presentation(models.polygon([(1, 0), (0, 1), (-1, -1)]))) == "trivial group"
    P = pi1_presentation(models.circle(1))
    assert P.generators == 1 and P.relators == ()
    T = pi1_presentation(models.surface(1))
    assert T.generators == 2 and T.relators == ((1, 2, -1, -2),)


@pytest.mark.parametrize("X", _examples())
def test_pi1_abelianization_is_h1(X):
    assert pi1_presentation(X).abelianization() == cellular_homology(X).get(1, AbelianGroup())


def test_pi1_disconnected():
    X = models.circle(1)
    from qtoric.orbit_complex import Cell, OrbitComplex
    Y = OrbitComplex(1, X.cells + (Cell("w", 0, "S"),), X.faces)
    with pytest.raises(ValueError):
        pi1_presentation(Y)


def test_presentation_simplify():
    P = GroupPresentation(3, ((1,), (2, 3, -2), (3, 1, 3)))
    S = P.simplify()
    assert S.generators == 1 and S.relators == ()
    assert P.abelianization() == S.abelianization()
    with pytest.raises(ValueError):
        GroupPresentation(1, ((2,),))


def test_elementary_divisors_rank_deficient():
    assert elementary_divisors(Matrix.from_rows([[1, 0], [2, 0]])) == [1]
