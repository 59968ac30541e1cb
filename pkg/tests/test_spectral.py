import random
from math import comb

import pytest

from qtoric import models
from qtoric.cellular import cellular_cohomology, pi1_presentation
from qtoric.errors import UnsupportedRegime
from qtoric.homology import AbelianGroup
from qtoric.orbit_complex import Cell, Face, OrbitComplex
from qtoric.spectral import (SpectralPage, ahss_kgroups, build_E1, collapse_certificate, compute_E2,
                             euler_characteristic, euler_report, fiber_cohomology, graded_cohomology,
                             spectral_pages)

Z = AbelianGroup(1)


def test_fiber_cohomology_examples():
    assert dict(fiber_cohomology(0).ranks) == {0: 1}
    assert dict(fiber_cohomology(2).ranks) == {0: 1, 3: 2, 6: 1}
    assert dict(fiber_cohomology(3).ranks) == {0: 1, 3: 3, 6: 3, 9: 1}
    assert fiber_cohomology(4).total_rank == 16
    assert fiber_cohomology(2).basis[3] == ((0,), (1,))


def test_interval_E1_by_hand():
    # vertices sit in 0-dim faces (fiber a point), the open edge has full fiber Q^1
    E1 = build_E1(models.interval())
    assert E1.entry(0, 0) == AbelianGroup(2)
    assert E1.entry(1, 0) == Z
    assert E1.entry(1, 3) == Z
    assert E1.entry(0, 3).is_zero()
    assert E1.differentials[(0, 0)].to_lists() == [[-1, 1]]


def test_interval_E2_by_hand():
    E2 = compute_E2(build_E1(models.interval()))
    assert E2.nonzero() == [(0, 0), (1, 3)]
    assert E2.entry(0, 0) == Z and E2.entry(1, 3) == Z


def test_circle_E1_is_two_copies_of_cochains():
    E1, _ = spectral_pages(models.circle(1))
    for q in (0, 3):
        assert E1.entry(0, q) == Z and E1.entry(1, q) == Z
        assert E1.differentials[(0, q)].to_lists() == [[0]]


def test_rank_zero_torus_gives_base_cohomology():
    X = OrbitComplex(0, (Cell("v", 0, "P"),), (Face("P", 0),))
    _, E2 = spectral_pages(X)
    assert E2.nonzero() == [(0, 0)]


def kunneth_cases():
    return [models.circle(1), models.circle(2), models.product(models.circle(1), models.circle(1)),
            models.surface(2), models.surface(1, 3)]


@pytest.mark.parametrize("X", kunneth_cases())
def test_kunneth_facet_free(X):
    _, E2 = spectral_pages(X)
    H = cellular_cohomology(X)
    n = X.torus_rank
    for p, g in H.items():
        for k in range(n + 1):
            expected = AbelianGroup(g.free_rank * comb(n, k))
            assert E2.entry(p, 3 * k) == expected


def random_cases(count=40, seed=2):
    r = random.Random(seed)
    return [models.random_complex(r) for _ in range(count)]


@pytest.mark.parametrize("X", random_cases())
def test_structure_on_random_complexes(X):
    E1, E2 = spectral_pages(X)
    for (p, q), g in list(E1.entries.items()) + list(E2.entries.items()):
        if q % 3:
            assert g.is_zero()
    for (p, q), d in E1.differentials.items():
        nxt = E1.differentials.get((p + 1, q))
        if nxt is not None:
            assert (nxt @ d).is_zero()
    rep = euler_report(X)
    assert rep.e1_sum == rep.e2_sum == rep.value == rep.graded_sum
    assert not rep.mismatches


def test_twisted_circle_row():
    _, E2 = spectral_pages(models.circle(1, [[-1]]))
    assert E2.entry(0, 3).is_zero()
    assert E2.entry(1, 3) == AbelianGroup(0, (2,))
    assert E2.entry(0, 0) == Z and E2.entry(1, 0) == Z


def test_collapse_certificates():
    low = SpectralPage(2, 1, 1, {(0, 0): Z, (1, 3): Z})
    assert collapse_certificate(low, 1).certified
    assert collapse_certificate(SpectralPage(2, 2, 2, {(0, 0): Z, (2, 6): Z}), 2).certified
    page = SpectralPage(2, 1, 4, {(0, 3): Z, (4, 0): Z})
    cert = collapse_certificate(page, 4)
    assert not cert.certified and cert.threats == ((0, 3, 4),)
    assert "d4: (0,3)->(4,0)" in cert.reason


def test_four_dimensional_base_certified_by_sparsity():
    X = models.product(models.simplex(2), models.simplex(2))
    _, E2 = spectral_pages(X)
    cert = collapse_certificate(E2)
    assert cert.certified and "zero source or target" in cert.reason
    assert graded_cohomology(X).ranks == (1, 0, 0, 0, 2, 0, 0, 0, 3, 0, 0, 0, 2, 0, 0, 0, 1)


def test_uncertified_collapse_refuses(monkeypatch):
    import qtoric.spectral as S
    X = models.interval()
    page = SpectralPage(2, 1, 4, {(0, 3): Z, (4, 0): Z})
    monkeypatch.setattr(S, "spectral_pages", lambda _: (page, page))
    with pytest.raises(UnsupportedRegime) as err:
        S.graded_cohomology(X)
    assert err.value.assumption == "collapse" and err.value.details == ((0, 3, 4),)


@pytest.mark.parametrize("X, ranks", [
    (models.interval(), (1, 0, 0, 0, 1)),
    (models.circle(1), (1, 1, 0, 1, 1)),
    (models.point(), (1,)),
    (models.simplex(2), (1, 0, 0, 0, 1, 0, 0, 0, 1)),
])
def test_graded_cohomology_examples(X, ranks):
    assert graded_cohomology(X).ranks == ranks


def test_graded_report_fields():
    G = graded_cohomology(models.circle(1))
    assert G.h1h2["H1(M) = H1(B)"] == Z
    assert G.h3["fiber summand E^{0,3}"] == Z and G.h3["extension"] == "unresolved"
    assert graded_cohomology(models.circle(1), h3_split=True).h3["extension"] == "split"
    assert G.pieces[3] == ((0, 3, Z),)


def test_euler_examples():
    assert euler_characteristic(models.interval()) == 2
    assert euler_characteristic(models.simplex(2)) == 3
    assert euler_characteristic(models.circle(1)) == 0


def test_nonzero_euler_class_unsupported():
    X = OrbitComplex.from_dict(models.interval().to_dict() | {"euler_class_zero": False})
    with pytest.raises(UnsupportedRegime) as err:
        build_E1(X)
    assert err.value.assumption == "euler_class"
    with pytest.raises(UnsupportedRegime):
        ahss_kgroups(X)


def test_ktheory_examples():
    K = ahss_kgroups(models.simplex(2))
    assert [g for _, g in K.K0] == [Z, AbelianGroup()]
    assert all(g.is_zero() for _, g in K.K1) and K.reduced_is_zero()
    with pytest.raises(UnsupportedRegime) as err:
        ahss_kgroups(models.circle(1))
    assert err.value.assumption == "vertex_set"
    K = ahss_kgroups(models.circle(1), allow_empty_vertex_set=True)
    assert K.K0 == ((0, Z),) and K.K1 == ((1, Z),)
    g = 3
    K = ahss_kgroups(models.surface(g), allow_empty_vertex_set=True)
    assert [x.free_rank for _, x in K.K0] == [1, 1]
    assert [x.free_rank for _, x in K.K1] == [2 * g]
    assert not K.caveats


def test_ktheory_rank_matches_base_cohomology():
    for X in [models.simplex(3), models.polygon(models.random_fan(random.Random(3), 6)),
              models.product(models.interval(), models.interval())]:
        K = ahss_kgroups(X)
        H = cellular_cohomology(X)
        assert K.total_rank == sum(g.free_rank for g in H.values())


def _simply_connected_examples():
    r = random.Random(8)
    pool = [f() for f in models.BUNDLED.values()] + [models.random_complex(r) for _ in range(40)]
    return [X for X in pool if pi1_presentation(X).is_trivially_trivial()
            and cellular_cohomology(X).get(2, AbelianGroup()).is_zero()]


@pytest.mark.parametrize("X", _simply_connected_examples())
def test_two_connected_when_pi1_trivial(X):
    G = graded_cohomology(X)
    assert G.total(1).is_zero() and G.total(2).is_zero()


@pytest.mark.xfail(strict=True, reason="simply connected base with H^2(B) != 0: E^{2,0} survives, "
                                       "so H^2(M) != 0 and M is not 2-connected")
def test_two_connected_fails_over_sphere():
    X = models.surface(0)
    assert pi1_presentation(X).is_trivially_trivial()
    assert graded_cohomology(X).total(2).is_zero()
