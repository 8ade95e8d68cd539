"""Exact small-dimension tensor algebra in 2D.

Vectors, 2x2 symmetric/skew tensors, dense order-n tensors (n <= 6), and
orthogonal transformations (rotations and reflections) together with the
transformation operator that rotates every index of a tensor.

Conventions (fixed once, everything downstream depends on them):

* rotation(theta) has matrix [[cos t, sin t], [-sin t, cos t]], so that
  rotation(2*pi/3) maps (0, 1) to (sqrt(3)/2, -1/2).
* reflection(phi) reflects across the line at angle phi from the first
  axis: [[cos 2p, sin 2p], [sin 2p, -cos 2p]].  reflection(0) = diag(1, -1).

All values are immutable; every function is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-12

#: the 2D permutation (skew) tensor [[0, 1], [-1, 0]]
EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])
IDENTITY2 = np.eye(2)

MAX_ORDER = 6


@dataclass(frozen=True)
class Vector2:
    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])

    @staticmethod
    def from_array(a) -> "Vector2":
        a = np.asarray(a, dtype=float)
        return Vector2(float(a[0]), float(a[1]))


@dataclass(frozen=True)
class SymTensor2:
    """Symmetric 2x2 tensor [[c11, c12], [c12, c22]]."""

    c11: float
    c22: float
    c12: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.c11, self.c12], [self.c12, self.c22]])

    @staticmethod
    def from_matrix(m, tol: float = 1e-9) -> "SymTensor2":
        m = np.asarray(m, dtype=float)
        if abs(m[0, 1] - m[1, 0]) > tol:
            raise ValueError(f"matrix is not symmetric: {m!r}")
        return SymTensor2(float(m[0, 0]), float(m[1, 1]), float(0.5 * (m[0, 1] + m[1, 0])))


@dataclass(frozen=True)
class SkewTensor2:
    """Antisymmetric 2x2 tensor [[0, w], [-w, 0]]."""

    w: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[0.0, self.w], [-self.w, 0.0]])

    @staticmethod
    def from_matrix(m, tol: float = 1e-9) -> "SkewTensor2":
        m = np.asarray(m, dtype=float)
        if abs(m[0, 0]) > tol or abs(m[1, 1]) > tol or abs(m[0, 1] + m[1, 0]) > tol:
            raise ValueError(f"matrix is not skew-symmetric: {m!r}")
        return SkewTensor2(float(0.5 * (m[0, 1] - m[1, 0])))


@dataclass(frozen=True)
class TensorN:
    """Dense order-n tensor over 2D, components stored row-major as shape (2,)*n."""

    order: int
    components: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.order <= MAX_ORDER:
            raise ValueError(f"order must be in 1..{MAX_ORDER}, got {self.order}")
        comps = np.asarray(self.components, dtype=float).reshape((2,) * self.order)
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)


ROTATION = "rotation"
REFLECTION = "reflection"


@dataclass(frozen=True)
class OrthTransform:
    """An element of O(2): a rotation by `angle` or a reflection across the
    line at angle `angle` from the first axis."""

    kind: str
    angle: float

    @property
    def matrix(self) -> np.ndarray:
        if self.kind == ROTATION:
            c, s = math.cos(self.angle), math.sin(self.angle)
            return np.array([[c, s], [-s, c]])
        c, s = math.cos(2.0 * self.angle), math.sin(2.0 * self.angle)
        return np.array([[c, s], [s, -c]])

    @property
    def det(self) -> float:
        return 1.0 if self.kind == ROTATION else -1.0


def rotation(theta: float) -> OrthTransform:
    """Rotation by theta (clockwise convention: [[c, s], [-s, c]])."""
    if not math.isfinite(theta):
        raise ValueError("rotation angle must be finite")
    return OrthTransform(ROTATION, theta % (2.0 * math.pi))


def reflection(phi: float) -> OrthTransform:
    """Reflection across the line at angle phi from the first axis."""
    if not math.isfinite(phi):
        raise ValueError("reflection axis angle must be finite")
    return OrthTransform(REFLECTION, phi % math.pi)


def identity() -> OrthTransform:
    return rotation(0.0)


def from_matrix(m, tol: float = 1e-9) -> OrthTransform:
    """Classify an orthogonal 2x2 matrix as a rotation or reflection."""
    m = np.asarray(m, dtype=float)
    if np.abs(m @ m.T - IDENTITY2).max() > tol:
        raise ValueError("matrix is not orthogonal")
    d = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if d > 0:
        return rotation(math.atan2(m[0, 1], m[0, 0]))
    return reflection(0.5 * math.atan2(m[0, 1], m[0, 0]))


def compose(q1: OrthTransform, q2: OrthTransform, tol: float = 1e-9) -> OrthTransform:
    """The transform whose matrix is q1.matrix @ q2.matrix."""
    return from_matrix(q1.matrix @ q2.matrix, tol)


def transform_components(q_matrix: np.ndarray, components: np.ndarray) -> np.ndarray:
    """Apply Q to every index of a dense tensor: T'_{ij...} = Q_ip Q_jq ... T_{pq...}."""
    out = np.asarray(components, dtype=float)
    for axis in range(out.ndim):
        out = np.moveaxis(np.tensordot(q_matrix, out, axes=(1, axis)), 0, axis)
    return out


def apply_transform(q: OrthTransform, t):
    """<Q>t for a Vector2, SymTensor2, SkewTensor2 or TensorN. Preserves kind."""
    m = q.matrix
    if isinstance(t, Vector2):
        return Vector2.from_array(m @ t.as_array())
    if isinstance(t, SymTensor2):
        return SymTensor2.from_matrix(m @ t.as_matrix() @ m.T)
    if isinstance(t, SkewTensor2):
        # Q W Q^T = det(Q) * W for 2x2 skew W
        return SkewTensor2(q.det * t.w)
    if isinstance(t, TensorN):
        return TensorN(t.order, transform_components(m, t.components))
    raise TypeError(f"cannot transform value of type {type(t).__name__}")


def _as_matrix(t) -> np.ndarray:
    if isinstance(t, (SymTensor2, SkewTensor2)):
        return t.as_matrix()
    a = np.asarray(t, dtype=float)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 tensor, got shape {a.shape}")
    return a


def trace_chain(ms) -> float:
    """Trace of the ordered product of 2x2 tensors (typed or raw arrays)."""
    ms = list(ms)
    if not ms:
        raise ValueError("trace_chain needs at least one factor")
    prod = _as_matrix(ms[0])
    for m in ms[1:]:
        prod = prod @ _as_matrix(m)
    return float(np.trace(prod))


def outer(v: Vector2, w: Vector2) -> np.ndarray:
    return np.outer(v.as_array(), w.as_array())


def sym_part(m) -> SymTensor2:
    m = _as_matrix(m)
    return SymTensor2.from_matrix(0.5 * (m + m.T), tol=math.inf)


def skew_part(m) -> SkewTensor2:
    m = _as_matrix(m)
    s = 0.5 * (m - m.T)
    return SkewTensor2(float(s[0, 1]))


def commutator_eps(a: SymTensor2) -> SymTensor2:
    """A*eps - eps*A, which is symmetric for symmetric 2x2 A."""
    m = a.as_matrix()
    return SymTensor2.from_matrix(m @ EPS - EPS @ m)


def allclose(a, b, tol: float = DEFAULT_TOL) -> bool:
    """Absolute-tolerance comparison of two tensor values of the same kind."""
    if isinstance(a, Vector2) and isinstance(b, Vector2):
        return abs(a.x - b.x) <= tol and abs(a.y - b.y) <= tol
    if isinstance(a, SymTensor2) and isinstance(b, SymTensor2):
        return (abs(a.c11 - b.c11) <= tol and abs(a.c22 - b.c22) <= tol
                and abs(a.c12 - b.c12) <= tol)
    if isinstance(a, SkewTensor2) and isinstance(b, SkewTensor2):
        return abs(a.w - b.w) <= tol
    if isinstance(a, TensorN) and isinstance(b, TensorN):
        return a.order == b.order and bool(np.abs(a.components - b.components).max() <= tol)
    return False
