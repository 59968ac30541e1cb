"""Reading input documents (YAML or JSON) into orbit complexes and signature data."""
from __future__ import annotations

import hashlib
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from .errors import ParseError
from .orbit_complex import OrbitComplex
from .quat_linalg import QuatMatrix, Quaternion, parse_quat_matrix
from .signature import I2, BoundaryFan, Trinion, TrinionData

COMPLEX_KEYS = {"torus_rank", "cells", "faces", "facets", "monodromy", "euler_class_zero", "orientation"}
SIGNATURE_KEYS = {"trinions", "boundary_fans"}


def bundled_path(name: str) -> Path | None:
    """Resolve ``hp1`` or ``hp1.model`` to a document shipped with the package."""
    stem = name[:-6] if name.endswith(".model") else name
    p = resources.files("qtoric") / "data" / f"{stem}.model"
    return Path(str(p)) if p.is_file() else None


def read_text(path: str) -> str:
    p = Path(path)
    if not p.exists():
        b = bundled_path(path)
        if b is None:
            raise ParseError("no such file or bundled model", path)
        p = b
    return p.read_text()


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def parse_text(text: str, source: str = "<input>") -> dict[str, Any]:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        raise ParseError(getattr(exc, "problem", None) or str(exc), loc) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be a mapping", source)
    unknown = set(doc) - COMPLEX_KEYS - SIGNATURE_KEYS
    if unknown:
        raise ParseError(f"unknown top-level fields {sorted(unknown)}", source)
    return doc


def has_complex(doc: dict) -> bool:
    return "torus_rank" in doc


def complex_from_doc(doc: dict, source: str = "<input>") -> OrbitComplex:
    if not has_complex(doc):
        raise ParseError("missing field 'torus_rank'", source)
    try:
        return OrbitComplex.from_dict(doc)
    except KeyError as exc:
        raise ParseError(f"missing field {exc}", source) from None
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(str(exc), source) from None


def _quat_matrix(obj, where: str) -> QuatMatrix:
    try:
        return parse_quat_matrix(obj)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), where) from None


def trinions_from_doc(doc: dict, source: str = "<input>") -> TrinionData:
    out = []
    for i, t in enumerate(doc.get("trinions") or ()):
        where = f"{source}: trinions[{i}]"
        if not isinstance(t, dict) or "C1" not in t or "C2" not in t:
            raise ParseError("each trinion needs C1 and C2", where)
        C1, C2 = _quat_matrix(t["C1"], where + ".C1"), _quat_matrix(t["C2"], where + ".C2")
        if "C3" in t:
            C3 = _quat_matrix(t["C3"], where + ".C3")
        else:
            try:
                C3 = (C1 @ C2).inverse()
            except (ZeroDivisionError, ValueError):
                C3 = I2
        out.append(Trinion(C1, C2, C3))
    return TrinionData(tuple(out))


def fans_from_doc(doc: dict, source: str = "<input>") -> list[BoundaryFan]:
    fans = []
    for i, f in enumerate(doc.get("boundary_fans") or ()):
        where = f"{source}: boundary_fans[{i}]"
        vecs = f.get("vectors") if isinstance(f, dict) else f
        if not isinstance(vecs, list):
            raise ParseError("a boundary fan is a list of vectors", where)
        try:
            fans.append(BoundaryFan(tuple(tuple(_fan_entry(x) for x in v) for v in vecs)))
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), where) from None
    return fans


def _fan_entry(x):
    if isinstance(x, (list, tuple)):
        q = Quaternion.coerce(x)
        return int(q.re) if q.is_real() and q.re.denominator == 1 else q
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"fan entries are integers or quaternion 4-tuples, got {x!r}")
    return x
