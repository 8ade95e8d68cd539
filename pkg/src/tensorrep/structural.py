"""Structural tensor sets for the 2D point groups and their verification.

Each point group gets a small set of low-order structural elements (vectors,
symmetric or skew 2x2 tensors).  Applying a group element to the set induces
a signed permutation of its members; the set of orthogonal transformations
under which the set is invariant (its stabilizer) should recover the group.

Two matching regimes exist:

* ``"set"`` -- the set is invariant as a whole, members may permute.  Used
  by the six groups (C3, C3v, C4, C4v, C6, C6v) whose classic structural
  tensors would be of order 3, 4 or 6.
* ``"each"`` -- every member must be individually invariant (the classic
  definition).  Used by C1, C1v, C2, C2v, Cinf, Cinf_v, whose sets coincide
  with the classic low-order structural tensors.  The distinction matters:
  {i, j} is permutation-invariant under the reflection across the 45-degree
  line, which is not a C1 symmetry.

Skew elements and vectors match with sign +1 only: a reflection sends the
permutation tensor eps to -eps, which is exactly how eps strips mirror
symmetry out of a set.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import pointgroups
from .tensor2d import (EPS, OrthTransform, SkewTensor2, SymTensor2, TensorN,
                       Vector2, apply_transform, reflection, rotation,
                       transform_components)

VECTOR = "vector"
SYMMETRIC = "symmetric"
SKEW = "skew"
TENSOR_N = "tensorN"

DEFAULT_GRID = 7200
DEFAULT_TOL = 1e-9


class NotClosedError(ValueError):
    """The transformed set has a member with no match: Q is not a symmetry."""


@dataclass(frozen=True)
class StructuralElement:
    kind: str
    payload: object
    label: str

    def values(self) -> np.ndarray:
        """Flat component vector used for matching."""
        if self.kind == VECTOR:
            return self.payload.as_array()
        if self.kind == SYMMETRIC:
            return self.payload.as_matrix().ravel()
        if self.kind == SKEW:
            return np.array([self.payload.w])
        return self.payload.components.ravel()


@dataclass(frozen=True)
class StructuralSet:
    group_id: str
    elements: tuple
    match_mode: str  # "set" or "each"


@dataclass(frozen=True)
class InducedAction:
    perm: tuple   # perm[k] = index of the member that <Q>element_k equals
    signs: tuple  # always +1 for the shipped sets; slots kept for generality


_V1 = Vector2(0.0, 1.0)
_V2 = Vector2(math.sqrt(3.0) / 2.0, -0.5)
_V3 = Vector2(-math.sqrt(3.0) / 2.0, -0.5)

_I = Vector2(1.0, 0.0)
_J = Vector2(0.0, 1.0)


def _sym(m) -> SymTensor2:
    return SymTensor2.from_matrix(np.asarray(m, dtype=float))


def _vec(v: Vector2, label: str) -> StructuralElement:
    return StructuralElement(VECTOR, v, label)


def _symel(m, label: str) -> StructuralElement:
    return StructuralElement(SYMMETRIC, _sym(m), label)


def _eps_el() -> StructuralElement:
    return StructuralElement(SKEW, SkewTensor2(1.0), "eps")


def structural_set(group_id: str) -> StructuralSet:
    """The low-order structural tensor set characterizing a point group."""
    sq3_4 = math.sqrt(3.0) / 4.0
    m1_hex = _symel([[0.0, 0.0], [0.0, 1.0]], "M1")
    m2_hex = _symel([[0.75, -sq3_4], [-sq3_4, 0.25]], "M2")
    m3_hex = _symel([[0.75, sq3_4], [sq3_4, 0.25]], "M3")
    sets = {
        "C1": ("each", [_vec(_I, "i"), _vec(_J, "j")]),
        "C1v": ("each", [_vec(_I, "i")]),
        "C2": ("each", [_symel([[1.0, 0.0], [0.0, -1.0]], "P2"), _eps_el()]),
        "C2v": ("each", [_symel([[1.0, 0.0], [0.0, -1.0]], "P2")]),
        "C4": ("set", [_symel([[1.0, 0.0], [0.0, 0.0]], "M1"),
                       _symel([[0.0, 0.0], [0.0, 1.0]], "M2"), _eps_el()]),
        "C4v": ("set", [_symel([[1.0, 0.0], [0.0, 0.0]], "M1"),
                        _symel([[0.0, 0.0], [0.0, 1.0]], "M2")]),
        "C3": ("set", [_vec(_V1, "v1"), _vec(_V2, "v2"), _vec(_V3, "v3"), _eps_el()]),
        "C3v": ("set", [_vec(_V1, "v1"), _vec(_V2, "v2"), _vec(_V3, "v3")]),
        "C6": ("set", [m1_hex, m2_hex, m3_hex, _eps_el()]),
        "C6v": ("set", [m1_hex, m2_hex, m3_hex]),
        "Cinf": ("each", [_eps_el()]),
        "Cinf_v": ("each", [_symel(np.eye(2), "I")]),
    }
    if group_id not in sets:
        raise KeyError(f"unknown point group {group_id!r}")
    mode, elems = sets[group_id]
    return StructuralSet(group_id, tuple(elems), mode)


_F = np.array([[1.0, 0.0], [0.0, -1.0]])
_H = np.array([[0.0, 1.0], [1.0, 0.0]])


def zheng_tensor(n: int):
    """Zheng's order-n structural tensor built from the basis a1=i, a2=j.

    P1 = i, P2 = F, P3 = i@F - j@H, P4 = F@F - H@H,
    P6 = F@F@F - (F@H@H + H@F@H + H@H@F).
    """
    if n == 1:
        return _I
    if n == 2:
        return _sym(_F)
    if n == 3:
        comps = (np.multiply.outer(np.array([1.0, 0.0]), _F)
                 - np.multiply.outer(np.array([0.0, 1.0]), _H))
        return TensorN(3, comps)
    if n == 4:
        return TensorN(4, np.multiply.outer(_F, _F) - np.multiply.outer(_H, _H))
    if n == 6:
        fff = np.multiply.outer(np.multiply.outer(_F, _F), _F)
        fhh = np.multiply.outer(np.multiply.outer(_F, _H), _H)
        hfh = np.multiply.outer(np.multiply.outer(_H, _F), _H)
        hhf = np.multiply.outer(np.multiply.outer(_H, _H), _F)
        return TensorN(6, fff - (fhh + hfh + hhf))
    raise ValueError(f"unsupported structural tensor order {n}; use 1, 2, 3, 4 or 6")


def induced_action(s: StructuralSet, q: OrthTransform, tol: float = DEFAULT_TOL) -> InducedAction:
    """The permutation induced on the set members by <Q>.

    Matching is exact for symmetric members and sign +1 for vectors and
    skew members.  Raises NotClosedError when some transformed member has
    no match, which is the definitive test that Q is not a symmetry of
    the set.
    """
    perm = []
    for k, el in enumerate(s.elements):
        moved = apply_transform(q, el.payload)
        vals = StructuralElement(el.kind, moved, el.label).values()
        match = -1
        candidates = [k] if s.match_mode == "each" else range(len(s.elements))
        for j in candidates:
            other = s.elements[j]
            if other.kind != el.kind:
                continue
            if np.abs(vals - other.values()).max() <= tol:
                match = j
                break
        if match < 0:
            raise NotClosedError(
                f"<{q.kind} {q.angle:.6g}> {el.label} has no match in the {s.group_id} set")
        perm.append(match)
    if sorted(perm) != list(range(len(s.elements))):
        raise NotClosedError(f"induced map on the {s.group_id} set is not a permutation")
    return InducedAction(tuple(perm), tuple([1] * len(perm)))


def scan_grid(grid_n: int = DEFAULT_GRID):
    """O(2) scan grid: grid_n rotations over [0, 2pi) and grid_n reflection
    axes over [0, pi), with all multiples of pi/6 and pi/4 included exactly."""
    if grid_n < 360:
        raise ValueError("grid_n must be at least 360")

    def angles(span, count):
        base = [span * k / count for k in range(count)]
        special = [k * math.pi / 6.0 for k in range(int(round(span / (math.pi / 6.0))))]
        special += [k * math.pi / 4.0 for k in range(int(round(span / (math.pi / 4.0))))]
        out = sorted(set(base))
        for a in special:
            if min(abs(a - b) for b in base) > 1e-15:
                out.append(a)
        return sorted(out)

    grid = [rotation(a) for a in angles(2.0 * math.pi, grid_n)]
    grid += [reflection(a) for a in angles(math.pi, grid_n)]
    return grid


def _batched_values(elements, q_mats: np.ndarray, dets: np.ndarray):
    """Flat component vectors of <Q>element for every grid matrix at once."""
    out = []
    for el in elements:
        if el.kind == VECTOR:
            moved = np.einsum("nij,j->ni", q_mats, el.payload.as_array())
        elif el.kind == SYMMETRIC:
            m = el.payload.as_matrix()
            moved = np.einsum("nij,jk,nlk->nil", q_mats, m, q_mats).reshape(-1, 4)
        elif el.kind == SKEW:
            moved = (dets * el.payload.w)[:, None]
        else:
            base = transform_components  # per-grid fallback for order-n members
            moved = np.stack([base(q, el.payload.components).ravel() for q in q_mats])
        out.append(moved)
    return out


def characterized_group(s: StructuralSet, grid_n: int = DEFAULT_GRID,
                        tol: float = DEFAULT_TOL):
    """Sampled stabilizer of the set within O(2): the grid elements whose
    induced action succeeds.  A sampled surrogate for the full O(2)
    quantifier; the grid is built to contain every crystallographic angle."""
    grid = scan_grid(grid_n)
    q_mats = np.stack([q.matrix for q in grid])
    dets = np.array([q.det for q in grid])
    moved = _batched_values(s.elements, q_mats, dets)
    n = len(s.elements)
    match = np.zeros((len(grid), n, n), dtype=bool)
    for k, el in enumerate(s.elements):
        for j, other in enumerate(s.elements):
            if other.kind != el.kind:
                continue
            if s.match_mode == "each" and j != k:
                continue
            match[:, k, j] = np.abs(moved[k] - other.values()).max(axis=1) <= tol
    ok = (match.sum(axis=2) == 1).all(axis=1) & (match.sum(axis=1) == 1).all(axis=1)
    return [grid[i] for i in np.flatnonzero(ok)]


def set_to_json(s: StructuralSet) -> str:
    return json.dumps(
        {"group": s.group_id, "match_mode": s.match_mode,
         "elements": [{"label": el.label, "kind": el.kind,
                       "components": list(el.values())} for el in s.elements]},
        sort_keys=True)


def zheng_invariance_group(n: int) -> pointgroups.PointGroup:
    """The point group (in the orientation fixed by a1=i) that Zheng's P_n
    characterizes.  P3's mirror axes are {0, pi/3, 2pi/3}, a conjugate of
    the canonical C3v whose mirrors sit at {pi/6, pi/2, 5pi/6}."""
    if n == 2:
        return pointgroups.group("C2v")
    if n == 3:
        gens = (rotation(2.0 * math.pi / 3.0), reflection(0.0))
        from .pointgroups import _closure
        return pointgroups.PointGroup("C3v(a1=i)", gens, _closure(gens), False)
    if n == 4:
        return pointgroups.group("C4v")
    if n == 6:
        return pointgroups.group("C6v")
    raise ValueError(f"no invariance group recorded for order {n}")
