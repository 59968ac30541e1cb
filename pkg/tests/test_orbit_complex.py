import random
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtoric import models
from qtoric.orbit_complex import (Cell, Face, Facet, InvalidComplexError, MonodromyRep, OrbitComplex,
                                  ann_lattice, holonomy, validate)
from qtoric.quat_linalg import Matrix


def vertex_complex(*charvecs):
    """A single vertex on n facets (n = 2)."""
    facets = tuple(Facet(f"f{i}", v) for i, v in enumerate(charvecs))
    return OrbitComplex(2, (Cell("v", 0, "V"),), (Face("V", 0, tuple(f.id for f in facets)),), facets)


def test_validate_vertex_examples():
    assert validate(vertex_complex((1, 0), (0, 1))).ok
    bad = validate(vertex_complex((1, 0), (2, 0)))
    assert "unimodularity" in bad.kinds()
    bad = validate(vertex_complex((1, 0), (1, 2)))
    assert [v for v in bad.violations if v.kind == "unimodularity"][0].message.startswith("elementary divisor 2")
    assert "face V" in bad.summary()


def test_report_lists_every_violation():
    X = vertex_complex((2, 0), (0, 3))
    kinds = [v.kind for v in validate(X).violations]
    assert kinds.count("not_primitive") == 2 and "unimodularity" in kinds


def generated():
    r = random.Random(5)
    return [f() for f in models.BUNDLED.values()] + [models.random_complex(r) for _ in range(30)] + [
        models.product(models.simplex(2), models.interval()),
        models.transform(models.simplex(3), models.random_unimodular(random.Random(1), 3)),
    ]


@pytest.mark.parametrize("X", generated())
def test_generated_complexes_are_valid(X):
    assert validate(X).ok, validate(X).summary()


@pytest.mark.parametrize("X", generated())
def test_ann_rank_plus_facets(X):
    for face in X.faces:
        L = ann_lattice(X, face.id)
        assert L.rows + len(face.facet_ids) == X.torus_rank
        assert L.rows == face.dim
        for f in face.facet_ids:
            v = X.facet_by_id[f].charvec
            assert all(sum(a * b for a, b in zip(u, v)) == 0 for u in L.data)


def _corruptions(X: OrbitComplex):
    """Single-field corruptions, each of which must be rejected."""
    out = {}
    if X.facets:
        f = X.facets[0]
        out["charvec"] = replace(X, facets=(replace(f, charvec=tuple(2 * x for x in f.charvec)),) + X.facets[1:])
    c = next(c for c in X.cells if c.dim >= 1)
    out["face_ref"] = replace(X, cells=tuple(replace(x, face_id="nowhere") if x is c else x for x in X.cells))
    out["boundary_ref"] = replace(X, cells=tuple(
        replace(x, boundary=((("ghost", 1),) + x.boundary[1:])) if x is c else x for x in X.cells))
    face = next((F for F in X.faces if F.facet_ids), None)
    if face is not None:
        out["facet_count"] = replace(X, faces=tuple(
            replace(F, facet_ids=F.facet_ids[1:]) if F is face else F for F in X.faces))
    top = max(X.cells, key=lambda x: x.dim)
    small = next((F for F in X.faces if F.dim < top.dim), None)
    if small is not None:
        out["cell_dim"] = replace(X, cells=tuple(replace(x, face_id=small.id) if x is top else x for x in X.cells))
    edge = next((x for x in X.cells if x.dim == 1), None)
    if edge is not None:
        out["monodromy_det"] = replace(X, monodromy=MonodromyRep(
            None, None, {edge.id: Matrix.identity(X.torus_rank).scale(2)}))
    return out


@pytest.mark.parametrize("X", [f() for f in models.BUNDLED.values() if f().dim >= 1] + [
    models.product(models.interval(), models.interval())])
def test_single_field_corruptions_rejected(X):
    for name, Y in _corruptions(X).items():
        assert not validate(Y).ok, name


def test_boundary_squared_detected():
    X = models.simplex(2)
    # flip one incidence on the 2-cell: d1 d2 != 0, boundary word no longer closes either
    cells = tuple(replace(c, boundary=(c.boundary[0], c.boundary[1], (c.boundary[2][0], 1))) if c.dim == 2 else c
                  for c in X.cells)
    rep = validate(replace(X, cells=cells))
    assert not rep.ok


def test_boundary_squared_in_dim_three():
    X = models.simplex(3)
    cells = tuple(replace(c, boundary=tuple((b, -s) if i == 0 else (b, s) for i, (b, s) in enumerate(c.boundary)))
                  if c.dim == 3 else c for c in X.cells)
    assert "boundary_squared" in validate(replace(X, cells=cells)).kinds()


def test_flatness_violation():
    X = models.product(models.circle(1), models.circle(1))
    Y = models.with_monodromy(X, {"e*v": [[0, 1], [1, 0]], "v*e": [[1, 1], [0, 1]]})
    assert "flatness" in validate(Y).kinds()


def test_monodromy_must_preserve_face_lattices():
    X = models.product(models.interval(), models.circle(1))
    Y = models.with_monodromy(X, {"v0*e": [[1, 1], [0, 1]], "v1*e": [[1, 1], [0, 1]]})
    assert "monodromy_lattice" in validate(Y).kinds()


def test_ann_lattice_examples():
    X = models.polygon([(1, 0), (0, 1), (-1, -1)])
    assert ann_lattice(X, "E0").to_lists() == [[0, 1]]
    assert ann_lattice(X, "P") == Matrix.identity(2)
    assert ann_lattice(X, "V0").rows == 0
    with pytest.raises(InvalidComplexError):
        ann_lattice(vertex_complex((1, 0), (2, 0)), "V")


def test_holonomy_examples():
    A = [[0, -1], [1, 0]]
    B = [[1, 1], [0, 1]]
    X = models.with_monodromy(models.surface(1), {"a1": A, "b1": A})
    assert holonomy(X, []) == Matrix.identity(2)
    assert holonomy(X, ["a1"]) == Matrix.from_rows(A)
    Y = models.with_monodromy(models.surface(2), {"a1": A, "b1": B})
    assert holonomy(Y, ["a1", "b1"]) == Matrix.from_rows(B) @ Matrix.from_rows(A)
    assert holonomy(Y, [("a1", -1)]) == Matrix.from_rows(A).inverse()


def test_holonomy_requires_closed_path():
    X = models.simplex(2)
    with pytest.raises(ValueError):
        holonomy(X, ["s0_1"])


@given(st.lists(st.sampled_from([("a1", 1), ("a1", -1), ("b1", 1), ("b1", -1)]), max_size=6),
       st.lists(st.sampled_from([("a1", 1), ("a1", -1), ("b1", 1), ("b1", -1)]), max_size=6))
def test_holonomy_multiplicative(p, q):
    X = models.with_monodromy(models.surface(2), {"a1": [[2, 1], [1, 1]], "b1": [[1, 0], [3, 1]]})
    assert holonomy(X, p + q) == holonomy(X, q) @ holonomy(X, p)


def test_round_trip_dict():
    for f in models.BUNDLED.values():
        X = f()
        Y = OrbitComplex.from_dict(X.to_dict())
        assert Y.to_dict() == X.to_dict()


def test_unordered_two_cell_boundary_is_chained():
    X = models.polygon([(1, 0), (0, 1), (-1, -1)])
    cells = tuple(replace(c, boundary=tuple(reversed(c.boundary))) if c.dim == 2 else c for c in X.cells)
    Y = replace(X, cells=cells)
    assert validate(Y).ok
    assert [e for e, _ in Y.boundary_word("p")] == ["e2", "e0", "e1"]


def test_unknown_monodromy_keys_rejected():
    doc = models.interval().to_dict() | {"monodromy": {"e": [[1]]}}
    with pytest.raises(ValueError, match="unknown monodromy keys"):
        OrbitComplex.from_dict(doc)
