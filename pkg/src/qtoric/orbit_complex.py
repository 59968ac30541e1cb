"""Combinatorial model of an orbit space: cells, face stratification, facet
characteristic vectors and edge monodromy.

Conventions
-----------
* Cells are ordered by their position in ``cells``; "lowest" always means
  earliest in that order.
* A 1-cell's boundary is exactly ``[(tail, -1), (head, +1)]`` (order free);
  a loop has ``tail == head``.
* A 2-cell's boundary is read as a closed edge walk.  If the entries as given
  do not chain, they are reordered greedily (fine for embedded polygons).
* ``monodromy.matrices[e]`` is the transport along edge ``e`` from its tail
  frame to its head frame, acting on the lattice ``H^3(Q^n; Z) = Z^n``.  Edges
  without a matrix transport by the identity.  Walking a path applies the
  matrices left-to-right in time, so "A then B" composes to ``B @ A``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .homology import elementary_divisors, gcd_list, hermite_rows, smith_normal_form
from .quat_linalg import Matrix

Step = tuple[str, int]  # (edge id, +1 forward / -1 backward)


class InvalidComplexError(ValueError):
    """Raised when an operation needs a validated complex and validation fails."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("orbit complex failed validation:\n" + report.summary())


@dataclass(frozen=True)
class Facet:
    id: str
    charvec: tuple[int, ...]


@dataclass(frozen=True)
class Face:
    id: str
    dim: int
    facet_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    face_id: str
    boundary: tuple[tuple[str, int], ...] = ()


@dataclass(frozen=True)
class MonodromyRep:
    base: str | None = None
    tree: tuple[str, ...] | None = None
    matrices: Mapping[str, Matrix] = field(default_factory=dict)

    def is_trivial(self) -> bool:
        return all(M == Matrix.identity(M.rows) for M in self.matrices.values())

    def exterior_power(self, k: int) -> "MonodromyRep":
        from .quat_linalg import compound_matrix

        return MonodromyRep(self.base, self.tree,
                            {e: compound_matrix(M, k) for e, M in self.matrices.items()})


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def summary(self) -> str:
        return "valid" if self.ok else "\n".join(str(v) for v in self.violations)

    def to_json(self) -> dict:
        return {"valid": self.ok,
                "violations": [{"kind": v.kind, "where": v.where, "message": v.message}
                               for v in self.violations]}


@dataclass(frozen=True)
class OrbitComplex:
    torus_rank: int
    cells: tuple[Cell, ...]
    faces: tuple[Face, ...]
    facets: tuple[Facet, ...] = ()
    monodromy: MonodromyRep = field(default_factory=MonodromyRep)
    euler_class_zero: bool = True
    orientation: Mapping[str, Any] | None = None

    # lookup tables ----------------------------------------------------------
    @cached_property
    def cell_index(self) -> dict[str, int]:
        return {c.id: i for i, c in enumerate(self.cells)}

    @cached_property
    def cell_by_id(self) -> dict[str, Cell]:
        return {c.id: c for c in self.cells}

    @cached_property
    def face_by_id(self) -> dict[str, Face]:
        return {f.id: f for f in self.faces}

    @cached_property
    def facet_by_id(self) -> dict[str, Facet]:
        return {f.id: f for f in self.facets}

    @cached_property
    def dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def cells_of_dim(self, p: int) -> list[Cell]:
        return self._cells_by_dim.get(p, [])

    @cached_property
    def _cells_by_dim(self) -> dict[int, list[Cell]]:
        out: dict[int, list[Cell]] = {}
        for c in self.cells:
            out.setdefault(c.dim, []).append(c)
        return out

    def position(self, cell_id: str) -> int:
        """Index of a cell among the cells of its own dimension."""
        return self._positions[cell_id]

    @cached_property
    def _positions(self) -> dict[str, int]:
        out = {}
        for cs in self._cells_by_dim.values():
            for i, c in enumerate(cs):
                out[c.id] = i
        return out

    def face_of(self, cell_id: str) -> Face:
        return self.face_by_id[self.cell_by_id[cell_id].face_id]

    def vertex_cells(self) -> list[Cell]:
        """Cells lying in 0-dimensional faces (the fixed-point strata)."""
        return [c for c in self.cells if c.face_id in self.face_by_id and self.face_by_id[c.face_id].dim == 0]

    # cellular structure -----------------------------------------------------
    def boundary_matrix(self, p: int) -> Matrix:
        """Integer incidence matrix of ``d_p: C_p -> C_{p-1}``."""
        rows, cols = self.cells_of_dim(p - 1), self.cells_of_dim(p)
        out = [[0] * len(cols) for _ in rows]
        for j, c in enumerate(cols):
            for b, inc in c.boundary:
                out[self.position(b)][j] += inc
        return Matrix(len(rows), len(cols), tuple(map(tuple, out)))

    def edge_ends(self, edge_id: str) -> tuple[str, str]:
        """(tail, head) of a 1-cell."""
        c = self.cell_by_id[edge_id]
        tails = [b for b, s in c.boundary if s == -1]
        heads = [b for b, s in c.boundary if s == 1]
        if len(c.boundary) != 2 or len(tails) != 1 or len(heads) != 1:
            raise ValueError(f"1-cell {edge_id} must have boundary [(tail,-1),(head,+1)]")
        return tails[0], heads[0]

    def step_ends(self, step: Step) -> tuple[str, str]:
        t, h = self.edge_ends(step[0])
        return (t, h) if step[1] > 0 else (h, t)

    def boundary_word(self, cell_id: str) -> tuple[Step, ...]:
        """The boundary of a 2-cell as a closed edge walk."""
        c = self.cell_by_id[cell_id]
        steps = [(b, 1 if s > 0 else -1) for b, s in c.boundary for _ in range(abs(s))]
        if not steps:
            return ()
        if _is_closed_walk(self, steps):
            return tuple(steps)
        # greedy chaining for cells whose boundary was listed unordered
        remaining = steps[1:]
        walk = [steps[0]]
        while remaining:
            cur = self.step_ends(walk[-1])[1]
            nxt = next((s for s in remaining if self.step_ends(s)[0] == cur), None)
            if nxt is None:
                raise ValueError(f"boundary of 2-cell {cell_id} is not a closed edge walk")
            walk.append(nxt)
            remaining.remove(nxt)
        if not _is_closed_walk(self, walk):
            raise ValueError(f"boundary of 2-cell {cell_id} is not a closed edge walk")
        return tuple(walk)

    def closure(self, cell_id: str) -> set[str]:
        out = {cell_id}
        stack = [cell_id]
        while stack:
            for b, _ in self.cell_by_id[stack.pop()].boundary:
                if b not in out:
                    out.add(b)
                    stack.append(b)
        return out

    def basepoint(self, cell_id: str) -> str:
        """Lowest 0-cell in the closure of a cell."""
        c = self.cell_by_id[cell_id]
        if c.dim == 0:
            return cell_id
        verts = [x for x in self.closure(cell_id) if self.cell_by_id[x].dim == 0]
        return min(verts, key=self.cell_index.__getitem__)

    # monodromy ------------------------------------------------------------------
    def edge_matrix(self, edge_id: str, rep: MonodromyRep | None = None, m: int | None = None) -> Matrix:
        rep = self.monodromy if rep is None else rep
        if edge_id in rep.matrices:
            return rep.matrices[edge_id]
        return Matrix.identity(self.torus_rank if m is None else m)

    def transport(self, path: Iterable[Step], rep: MonodromyRep | None = None, m: int | None = None) -> Matrix:
        """Compose edge transports along a walk (later steps on the left)."""
        size = self.torus_rank if m is None else m
        T = Matrix.identity(size)
        for e, s in path:
            A = self.edge_matrix(e, rep, size)
            if A == Matrix.identity(size):
                continue
            T = (A if s > 0 else _int_inverse(A)) @ T
        return T

    @cached_property
    def base_vertex(self) -> str | None:
        if self.monodromy.base is not None:
            return self.monodromy.base
        verts = self.cells_of_dim(0)
        return verts[0].id if verts else None

    @cached_property
    def spanning_tree(self) -> tuple[str, ...]:
        """Spanning forest of the 1-skeleton: the given tree, else BFS by cell order."""
        if self.monodromy.tree is not None:
            return tuple(self.monodromy.tree)
        return _bfs_tree(self, [c.id for c in self.cells_of_dim(1)], self.base_vertex)

    def is_connected(self) -> bool:
        verts = self.cells_of_dim(0)
        if not verts:
            return not self.cells
        seen = _reachable(self, [c.id for c in self.cells_of_dim(1)], self.base_vertex)
        return len(seen) == len(verts)

    @cached_property
    def coboundary_paths(self) -> dict[int, list[tuple[int, int, int, tuple[Step, ...]]]]:
        """Twisted incidences of the cellular coboundary.

        ``coboundary_paths[p]`` lists ``(tau_pos, sigma_pos, sign, path)`` for the
        coboundary ``C^p -> C^{p+1}``, where ``path`` walks from the basepoint of
        the p-cell sigma to the basepoint of the (p+1)-cell tau.  With constant
        coefficients the signs sum to the ordinary incidence numbers.
        """
        out: dict[int, list] = {}
        for tau in self.cells:
            p = tau.dim - 1
            if p < 0:
                continue
            entries = out.setdefault(p, [])
            tpos = self.position(tau.id)
            if tau.dim == 1:
                t, h = self.edge_ends(tau.id)
                tail_is_base = self.cell_index[t] <= self.cell_index[h]
                entries.append((tpos, self.position(h), 1, () if not tail_is_base else ((tau.id, -1),)))
                entries.append((tpos, self.position(t), -1, ((tau.id, 1),) if not tail_is_base else ()))
            elif tau.dim == 2:
                entries.extend(self._fox_entries(tau.id))
            else:
                for sigma, inc in tau.boundary:
                    if inc:
                        path = self._path_in_closure(tau.id, self.basepoint(sigma), self.basepoint(tau.id))
                        entries.append((tpos, self.position(sigma), inc, path))
        return out

    def _fox_entries(self, tau_id: str):
        word = self.boundary_word(tau_id)
        if not word:
            return []
        base = self.basepoint(tau_id)
        starts = [self.step_ends(s)[0] for s in word]
        k = starts.index(base)
        word = word[k:] + word[:k]
        tpos = self.position(tau_id)
        to_base: tuple[Step, ...] = ()
        entries = []
        for e, s in word:
            t, h = self.edge_ends(e)
            tail_is_base = self.cell_index[t] <= self.cell_index[h]
            if s > 0:
                # standing at the tail; the edge's frame sits at its basepoint
                pre = () if tail_is_base else ((e, -1),)
                entries.append((tpos, self.position(e), 1, pre + to_base))
                to_base = ((e, -1),) + to_base
            else:
                pre = () if not tail_is_base else ((e, 1),)
                entries.append((tpos, self.position(e), -1, pre + to_base))
                to_base = ((e, 1),) + to_base
        return entries

    def _path_in_closure(self, cell_id: str, start: str, goal: str) -> tuple[Step, ...]:
        edges = [x for x in self.closure(cell_id) if self.cell_by_id[x].dim == 1]
        edges.sort(key=self.cell_index.__getitem__)
        prev: dict[str, tuple[str, Step] | None] = {start: None}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for e in edges:
                t, h = self.edge_ends(e)
                for a, b, s in ((t, h, 1), (h, t, -1)):
                    if a == v and b not in prev:
                        prev[b] = (v, (e, s))
                        queue.append(b)
        if goal not in prev:
            raise ValueError(f"closure of cell {cell_id} is not connected")
        path = []
        v = goal
        while prev[v] is not None:
            u, step = prev[v]
            path.append(step)
            v = u
        return tuple(reversed(path))

    # conversion -------------------------------------------------------------
    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "OrbitComplex":
        n = int(doc["torus_rank"])
        facets = tuple(Facet(str(f["id"]), tuple(int(x) for x in f["charvec"])) for f in doc.get("facets") or ())
        faces = tuple(Face(str(f["id"]), int(f["dim"]), tuple(str(x) for x in f.get("facets") or ()))
                      for f in doc.get("faces") or ())
        cells = []
        for c in doc.get("cells") or ():
            bd = tuple((str(b[0]), int(b[1])) for b in c.get("boundary") or ())
            cells.append(Cell(str(c["id"]), int(c["dim"]), str(c["face"]), bd))
        mono = doc.get("monodromy") or {}
        extra = sorted(set(mono) - {"base", "tree", "matrices"})
        if extra:
            raise ValueError(f"unknown monodromy keys {extra} (expected base, tree, matrices)")
        mats = {str(e): Matrix.from_rows(M, cols=n) for e, M in (mono.get("matrices") or {}).items()}
        tree = mono.get("tree")
        rep = MonodromyRep(str(mono["base"]) if mono.get("base") is not None else None,
                           tuple(str(e) for e in tree) if tree is not None else None, mats)
        ecz = doc.get("euler_class_zero", True)
        if not isinstance(ecz, bool):
            raise ValueError("euler_class_zero must be a boolean")
        return cls(n, tuple(cells), faces, facets, rep, ecz, doc.get("orientation"))

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "torus_rank": self.torus_rank,
            "euler_class_zero": self.euler_class_zero,
            "facets": [{"id": f.id, "charvec": list(f.charvec)} for f in self.facets],
            "faces": [{"id": f.id, "dim": f.dim, "facets": list(f.facet_ids)} for f in self.faces],
            "cells": [{"id": c.id, "dim": c.dim, "face": c.face_id,
                       "boundary": [[b, s] for b, s in c.boundary]} for c in self.cells],
        }
        m = self.monodromy
        if m.matrices or m.tree is not None or m.base is not None:
            mono: dict[str, Any] = {}
            if m.base is not None:
                mono["base"] = m.base
            if m.tree is not None:
                mono["tree"] = list(m.tree)
            mono["matrices"] = {e: M.to_lists() for e, M in m.matrices.items()}
            doc["monodromy"] = mono
        if self.orientation is not None:
            doc["orientation"] = dict(self.orientation)
        return doc

    @cached_property
    def validation(self) -> ValidationReport:
        return validate(self)

    def require_valid(self) -> "OrbitComplex":
        if not self.validation.ok:
            raise InvalidComplexError(self.validation)
        return self


def _int_inverse(A: Matrix) -> Matrix:
    inv = A.inverse()
    if not inv.is_integral():
        raise ValueError("monodromy matrix is not in GL(n, Z)")
    return inv


def _is_closed_walk(X: OrbitComplex, steps: Sequence[Step]) -> bool:
    ends = [X.step_ends(s) for s in steps]
    return all(ends[i][1] == ends[(i + 1) % len(ends)][0] for i in range(len(ends)))


def _reachable(X: OrbitComplex, edges: Sequence[str], start: str | None) -> set[str]:
    if start is None:
        return set()
    adj: dict[str, list[str]] = {}
    for e in edges:
        t, h = X.edge_ends(e)
        adj.setdefault(t, []).append(h)
        adj.setdefault(h, []).append(t)
    seen = {start}
    stack = [start]
    while stack:
        for w in adj.get(stack.pop(), []):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _bfs_tree(X: OrbitComplex, edges: Sequence[str], start: str | None) -> tuple[str, ...]:
    if start is None:
        return ()
    seen = {start}
    tree = []
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for e in edges:
            t, h = X.edge_ends(e)
            for a, b in ((t, h), (h, t)):
                if a == v and b not in seen:
                    seen.add(b)
                    tree.append(e)
                    queue.append(b)
    return tuple(tree)


# ------------------------------------------------------------------------------
# validation
# ------------------------------------------------------------------------------


def facet_matrix(X: OrbitComplex, face: Face) -> Matrix:
    return Matrix.from_rows([X.facet_by_id[f].charvec for f in face.facet_ids], cols=X.torus_rank)


def validate(X: OrbitComplex) -> ValidationReport:
    """Check the combinatorial and lattice conditions; every problem becomes an entry."""
    v: list[Violation] = []
    n = X.torus_rank

    def bad(kind, where, msg):
        v.append(Violation(kind, str(where), msg))

    if n < 0:
        bad("torus_rank", "torus_rank", "must be >= 0")
    for name, items in (("cell", X.cells), ("face", X.faces), ("facet", X.facets)):
        ids = [x.id for x in items]
        for dup in sorted({i for i in ids if ids.count(i) > 1}):
            bad("duplicate_id", f"{name} {dup}", "id used more than once")

    for f in X.facets:
        if len(f.charvec) != n:
            bad("charvec_length", f"facet {f.id}", f"charvec has length {len(f.charvec)}, expected {n}")
        elif gcd_list(f.charvec) != 1:
            bad("not_primitive", f"facet {f.id}", f"charvec {list(f.charvec)} is not primitive "
                                                   f"(gcd {gcd_list(f.charvec)})")

    for face in X.faces:
        where = f"face {face.id}"
        if not 0 <= face.dim <= n:
            bad("face_dim", where, f"dimension {face.dim} outside [0, {n}]")
        missing = [f for f in face.facet_ids if f not in X.facet_by_id]
        if missing:
            bad("missing_facet", where, f"unknown facets {missing}")
            continue
        if len(face.facet_ids) != n - face.dim:
            bad("facet_count", where, f"{len(face.facet_ids)} facets on a face of codimension {n - face.dim}")
        if face.facet_ids and all(len(X.facet_by_id[f].charvec) == n for f in face.facet_ids):
            divs = elementary_divisors(facet_matrix(X, face))
            c = len(face.facet_ids)
            if len(divs) < c:
                bad("unimodularity", where, f"charvecs of {list(face.facet_ids)} are rank deficient "
                                            f"(rank {len(divs)} < {c})")
            elif any(d != 1 for d in divs):
                worst = max(divs)
                kind = "vertex" if face.dim == 0 else "face"
                bad("unimodularity", where, f"elementary divisor {worst} at {kind} {face.id}: charvecs "
                                            f"do not span a direct summand")

    structural_ok = True
    for c in X.cells:
        where = f"cell {c.id}"
        if c.face_id not in X.face_by_id:
            bad("missing_face", where, f"unknown face {c.face_id}")
            structural_ok = False
        elif c.dim > X.face_by_id[c.face_id].dim:
            bad("cell_dim", where, f"{c.dim}-cell inside a {X.face_by_id[c.face_id].dim}-dimensional face")
        if c.dim < 0:
            bad("cell_dim", where, "negative dimension")
        for b, inc in c.boundary:
            if b not in X.cell_by_id:
                bad("missing_cell", where, f"boundary references unknown cell {b}")
                structural_ok = False
            elif X.cell_by_id[b].dim != c.dim - 1:
                bad("boundary_dim", where, f"boundary cell {b} has dimension {X.cell_by_id[b].dim}")
                structural_ok = False
        if c.dim == 0 and c.boundary:
            bad("boundary_dim", where, "0-cells have empty boundary")
        if c.dim == 1:
            signs = sorted(s for _, s in c.boundary)
            if signs != [-1, 1]:
                bad("edge_boundary", where, "1-cell boundary must be [(tail,-1),(head,+1)]")
                structural_ok = False
    if not structural_ok:
        return ValidationReport(tuple(v))

    for c in X.cells_of_dim(2):
        try:
            X.boundary_word(c.id)
        except ValueError as exc:
            bad("boundary_word", f"cell {c.id}", str(exc))
            structural_ok = False

    # a boundary cell must lie in the closure of the face of its coface
    for c in X.cells:
        fc = set(X.face_by_id[c.face_id].facet_ids)
        for b, _ in c.boundary:
            fb = set(X.face_of(b).facet_ids)
            if not fc <= fb:
                bad("face_incidence", f"cell {c.id}",
                    f"boundary cell {b} lies in face {X.face_of(b).id}, not in the closure of face {c.face_id}")

    for p in range(2, X.dim + 1):
        if not (X.boundary_matrix(p - 1) @ X.boundary_matrix(p)).is_zero():
            bad("boundary_squared", f"dimension {p}", "d_{p-1} d_p != 0")

    _validate_monodromy(X, bad, structural_ok)
    return ValidationReport(tuple(v))


def _validate_monodromy(X: OrbitComplex, bad, structural_ok: bool) -> None:
    n = X.torus_rank
    m = X.monodromy
    mats_ok = True
    for e, M in m.matrices.items():
        where = f"monodromy {e}"
        if e not in X.cell_by_id or X.cell_by_id[e].dim != 1:
            bad("monodromy_edge", where, "matrix attached to something other than a 1-cell")
            mats_ok = False
            continue
        if M.shape != (n, n):
            bad("monodromy_shape", where, f"matrix is {M.rows}x{M.cols}, expected {n}x{n}")
            mats_ok = False
        elif not M.is_integral() or M.det() not in (1, -1):
            bad("monodromy_det", where, f"determinant {M.det()} is not +-1")
            mats_ok = False
    if m.base is not None and (m.base not in X.cell_by_id or X.cell_by_id[m.base].dim != 0):
        bad("monodromy_base", "monodromy", f"base {m.base} is not a 0-cell")
    if m.tree is not None:
        edges = [e for e in m.tree if e in X.cell_by_id and X.cell_by_id[e].dim == 1]
        if len(edges) != len(m.tree):
            bad("spanning_tree", "monodromy", "tree lists cells that are not 1-cells")
        else:
            reach = _reachable(X, edges, X.base_vertex)
            nverts = len(X.cells_of_dim(0))
            if len(reach) != nverts or len(edges) != nverts - 1:
                bad("spanning_tree", "monodromy", "tree is not a spanning tree of the 1-skeleton")
            for e in edges:
                if e in m.matrices and m.matrices[e] != Matrix.identity(n):
                    bad("spanning_tree", f"monodromy {e}", "tree edges must carry the identity")
    if not (mats_ok and structural_ok) or not m.matrices:
        return
    for c in X.cells_of_dim(2):
        hol = X.transport(X.boundary_word(c.id))
        if hol != Matrix.identity(n):
            bad("flatness", f"cell {c.id}", "holonomy around the 2-cell boundary is not the identity")
    for c in X.cells:
        if c.dim < 3:
            continue
        edges = [x for x in X.closure(c.id) if X.cell_by_id[x].dim == 1]
        base = X.basepoint(c.id)
        for e in edges:
            t, h = X.edge_ends(e)
            loop = X._path_in_closure(c.id, base, t) + ((e, 1),) + X._path_in_closure(c.id, h, base)
            if X.transport(loop) != Matrix.identity(n):
                bad("flatness", f"cell {c.id}", "monodromy is nontrivial on the closure of the cell")
                break
    # transport must carry face lattices into each other
    for p, entries in X.coboundary_paths.items():
        for tpos, spos, _, path in entries:
            tau, sigma = X.cells_of_dim(p + 1)[tpos], X.cells_of_dim(p)[spos]
            T = X.transport(path)
            src = ann_basis(X, X.face_of(sigma.id))
            dst = ann_basis(X, X.face_of(tau.id))
            if src and not _in_lattice([T.apply(u) for u in src], dst, n):
                bad("monodromy_lattice", f"cell {tau.id}",
                    f"transport from {sigma.id} does not preserve the annihilator lattice of its face")


def _in_lattice(vectors, basis, n) -> bool:
    if not basis:
        return all(not any(x) for x in vectors)
    B = Matrix.from_rows(basis, cols=n).T
    try:
        X = B.solve(Matrix.from_rows(vectors, cols=n).T)
    except ValueError:
        return False
    return X.is_integral()


# ------------------------------------------------------------------------------
# lattice queries
# ------------------------------------------------------------------------------


def ann_basis(X: OrbitComplex, face: Face) -> list[tuple[int, ...]]:
    """Saturated basis (Hermite rows) of the annihilator of the face's charvecs."""
    n = X.torus_rank
    if not face.facet_ids:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    C = facet_matrix(X, face)
    _, D, V = smith_normal_form(C)
    r = sum(1 for i in range(min(D.rows, D.cols)) if D[i, i])
    kernel = [V.col(j) for j in range(r, n)]
    return hermite_rows(kernel, n)


def ann_lattice(X: OrbitComplex, face_id: str) -> Matrix:
    """Rows form a basis of ``{u in Z^n : <u, charvec(f)> = 0 for every facet f of the face}``."""
    X.require_valid()
    if face_id not in X.face_by_id:
        raise KeyError(f"unknown face {face_id}")
    return Matrix.from_rows(ann_basis(X, X.face_by_id[face_id]), cols=X.torus_rank)


def holonomy(X: OrbitComplex, loop: Sequence[str | Step]) -> Matrix:
    """Transport around a closed edge path starting at the base vertex.

    Steps are edge ids (direction inferred from the current vertex) or explicit
    ``(edge_id, +-1)`` pairs.
    """
    cur = X.base_vertex
    steps: list[Step] = []
    for item in loop:
        if isinstance(item, str):
            t, h = X.edge_ends(item)
            if t == cur:
                step = (item, 1)
            elif h == cur:
                step = (item, -1)
            else:
                raise ValueError(f"edge {item} does not start at {cur}")
        else:
            step = (str(item[0]), 1 if item[1] > 0 else -1)
        a, b = X.step_ends(step)
        if a != cur:
            raise ValueError(f"step {step} does not start at {cur}")
        cur = b
        steps.append(step)
    if cur != X.base_vertex:
        raise ValueError("path is not closed at the base vertex")
    return X.transport(steps)
