"""The twelve 2D point groups: generators, element enumeration, Cayley tables.

Finite groups are enumerated by fixed-point closure over their generators.
Elements are kept in a canonical order (identity first, rotations by
increasing angle, then reflections by increasing axis angle) so Cayley
tables are reproducible byte-for-byte.  The two continuous groups Cinf and
Cinf_v are represented parametrically and only ever sampled.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .tensor2d import OrthTransform, ROTATION, compose, identity, reflection, rotation

DEDUP_TOL = 1e-9

GROUP_IDS = ("C1", "C2", "C1v", "C2v", "C3", "C3v", "C4", "C4v", "C6", "C6v",
             "Cinf", "Cinf_v")

GROUP_ORDERS = {"C1": 1, "C2": 2, "C1v": 2, "C2v": 4, "C3": 3, "C3v": 6,
                "C4": 4, "C4v": 8, "C6": 6, "C6v": 12}

_GENERATORS = {
    "C1": [],
    "C2": [rotation(math.pi)],
    "C1v": [reflection(0.0)],
    "C2v": [rotation(math.pi), reflection(0.0)],
    "C3": [rotation(2.0 * math.pi / 3.0)],
    "C3v": [rotation(2.0 * math.pi / 3.0), reflection(math.pi / 2.0)],
    "C4": [rotation(math.pi / 2.0)],
    "C4v": [rotation(math.pi / 2.0), reflection(0.0)],
    "C6": [rotation(math.pi / 3.0)],
    "C6v": [rotation(math.pi / 3.0), reflection(math.pi / 2.0)],
    "Cinf": [],
    "Cinf_v": [],
}


class ContinuousGroupError(ValueError):
    """Raised when a finite-only operation is asked of Cinf or Cinf_v."""


@dataclass(frozen=True)
class PointGroup:
    id: str
    generators: tuple
    elements: tuple  # empty for continuous groups
    continuous: bool

    @property
    def order(self) -> int:
        if self.continuous:
            raise ContinuousGroupError(f"{self.id} is continuous")
        return len(self.elements)


@dataclass(frozen=True)
class CayleyTable:
    order: int
    names: tuple
    entries: tuple  # order x order tuple of element indices


def _canonical_sort(elements):
    rots = sorted((e for e in elements if e.kind == ROTATION), key=lambda e: e.angle)
    refls = sorted((e for e in elements if e.kind != ROTATION), key=lambda e: e.angle)
    return tuple(rots + refls)


def _find(elements, q: OrthTransform, tol: float) -> int:
    m = q.matrix
    for k, e in enumerate(elements):
        if np.abs(e.matrix - m).max() <= tol:
            return k
    return -1


def _closure(generators, tol: float = DEDUP_TOL):
    elements = [identity()]
    frontier = [identity()]
    while frontier:
        nxt = []
        for e in frontier:
            for g in generators:
                prod = compose(e, g)
                if _find(elements, prod, tol) < 0:
                    elements.append(prod)
                    nxt.append(prod)
        frontier = nxt
        if len(elements) > 64:
            raise RuntimeError("closure did not terminate; generators not a finite group")
    return _canonical_sort(elements)


def group(group_id: str) -> PointGroup:
    """Build one of the twelve 2D point groups by id."""
    if group_id not in _GENERATORS:
        raise KeyError(f"unknown point group {group_id!r}; expected one of {GROUP_IDS}")
    gens = tuple(_GENERATORS[group_id])
    continuous = group_id in ("Cinf", "Cinf_v")
    elements = () if continuous else _closure(gens)
    return PointGroup(group_id, gens, elements, continuous)


def enumerate_elements(g: PointGroup):
    """Elements of a finite group in canonical order."""
    if g.continuous:
        raise ContinuousGroupError(f"{g.id} cannot be enumerated")
    return list(g.elements)


def element_name(e: OrthTransform) -> str:
    """Canonical short name: e, r90, r120, ..., m0, m45, m90, ..."""
    deg = e.angle * 180.0 / math.pi
    deg_i = int(round(deg))
    if e.kind == ROTATION:
        if abs(deg) < 1e-9 or abs(deg - 360.0) < 1e-9:
            return "e"
        return f"r{deg_i}" if abs(deg - deg_i) < 1e-9 else f"r{deg:.6g}"
    return f"m{deg_i}" if abs(deg - deg_i) < 1e-9 else f"m{deg:.6g}"


def cayley_table(g: PointGroup, tol: float = DEDUP_TOL) -> CayleyTable:
    """entries[i][j] = index of element_i * element_j."""
    if g.continuous:
        raise ContinuousGroupError(f"{g.id} has no finite Cayley table")
    elems = g.elements
    rows = []
    for a in elems:
        row = []
        for b in elems:
            k = _find(elems, compose(a, b), tol)
            if k < 0:
                raise RuntimeError("group not closed under product")
            row.append(k)
        rows.append(tuple(row))
    return CayleyTable(len(elems), tuple(element_name(e) for e in elems), tuple(rows))


def contains(g: PointGroup, q: OrthTransform, tol: float = DEDUP_TOL) -> bool:
    """Membership test; continuous groups test by kind."""
    if g.continuous:
        if g.id == "Cinf_v":
            return True
        return q.kind == ROTATION
    return _find(g.elements, q, tol) >= 0


def sample_elements(g: PointGroup, n: int, rng=None):
    """n samples from a continuous group (finite groups return their elements).

    Cinf: n rotations uniform in [0, 2pi).  Cinf_v: n rotations plus n
    reflections with axis uniform in [0, pi).
    """
    if n < 1:
        raise ValueError("need n >= 1 samples")
    if not g.continuous:
        return list(g.elements)
    rng = np.random.default_rng(0) if rng is None else rng
    out = [rotation(a) for a in rng.uniform(0.0, 2.0 * math.pi, size=n)]
    if g.id == "Cinf_v":
        out += [reflection(a) for a in rng.uniform(0.0, math.pi, size=n)]
    return out


def is_latin_square(table: CayleyTable) -> bool:
    n = table.order
    want = set(range(n))
    for i in range(n):
        if set(table.entries[i]) != want:
            return False
        if {table.entries[k][i] for k in range(n)} != want:
            return False
    return True


def table_to_csv(table: CayleyTable) -> str:
    """CSV with a header row/column of quoted element names."""
    buf = io.StringIO()
    quoted = [f'"{n}"' for n in table.names]
    buf.write("," + ",".join(quoted) + "\r\n")
    for i, row in enumerate(table.entries):
        buf.write(quoted[i] + "," + ",".join(f'"{table.names[k]}"' for k in row) + "\r\n")
    return buf.getvalue()


def table_to_json(table: CayleyTable) -> str:
    return json.dumps(
        {"order": table.order, "names": list(table.names),
         "entries": [list(r) for r in table.entries]},
        sort_keys=True)
