"""Per-group representations of scalar and symmetric-tensor functions of C.

For each point group this module fixes:

* the invariant list J(C) (functions of C and the group's structural
  elements),
* the tensor generator list G(C),
* for every group generator, the signed permutations (pi, rho) that the
  structural substitution induces on invariant and generator slots, and
* the explicitly reported coefficient constraint relations.

Free coefficient expressions over the invariant names I1..In are turned
into symmetry-satisfying coefficient functions by Reynolds averaging over
the finite group H generated by the slot actions:

    alpha(J) = (1/|H|) sum_h  rho(h)^-1 . f(pi(h) . J)

which is the canonical projector onto the constrained family, so every
reported relation (and the full relation set) holds exactly by
construction.  The six groups whose structural elements are individually
invariant get an empty action set and need no symmetrization.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import exprdsl
from .exprdsl import Expr, Lit, Neg, Var
from .pointgroups import PointGroup, group, sample_elements
from .structural import structural_set
from .tensor2d import (EPS, OrthTransform, SymTensor2, apply_transform,
                       from_matrix)

#: groups whose structural elements permute under the group (need averaging)
PERMUTING_GROUPS = ("C3", "C3v", "C4", "C4v", "C6", "C6v")
#: groups whose structural elements are individually invariant
CLASSIC_GROUPS = ("C1", "C1v", "C2", "C2v", "Cinf", "Cinf_v")


# ---------------------------------------------------------------------------
# invariant and generator forms over the structural elements

@dataclass(frozen=True)
class InvariantForm:
    """A scalar invariant of C parameterized by structural element labels.

    kinds: trC, trC2, lin (tr(C X) for a constant matrix X built from the
    named elements via the builder tag).
    """
    kind: str
    labels: tuple
    builder: str  # how to build X from the labels: elem | elem_eps | outer | cross
    name: str     # display text, e.g. "tr(C*M1)"

    def matrix(self, elems: dict) -> np.ndarray:
        """The constant X with invariant = tr(C X); None for trC/trC2."""
        if self.kind == "trC":
            return np.eye(2)
        if self.kind == "trC2":
            return None
        if self.builder == "elem":
            return _mat(elems[self.labels[0]])
        if self.builder == "elem_eps":
            # tr(C M eps) = tr(C (M eps))
            return _mat(elems[self.labels[0]]) @ EPS
        if self.builder == "outer":
            v = elems[self.labels[0]].as_array()
            return np.outer(v, v)
        if self.builder == "cross":
            # i.C j = tr(C (j @ i))
            a = elems[self.labels[0]].as_array()
            b = elems[self.labels[1]].as_array()
            return np.outer(b, a)
        raise ValueError(f"unknown builder {self.builder!r}")

    def value(self, c: np.ndarray, elems: dict) -> float:
        if self.kind == "trC2":
            return float(np.trace(c @ c))
        return float(np.trace(c @ self.matrix(elems)))

    def d_dc(self, c: np.ndarray, elems: dict) -> np.ndarray:
        """Derivative w.r.t. symmetric C (symmetrized sense)."""
        if self.kind == "trC2":
            return 2.0 * c
        x = self.matrix(elems)
        return 0.5 * (x + x.T)


@dataclass(frozen=True)
class GeneratorForm:
    """A symmetric tensor generator: C itself, a constant built from the
    structural elements, or a commutator with eps."""
    kind: str   # C | I | elem | outer | sym_outer | comm_eps_C | comm_eps_elem | elem_eps
    labels: tuple
    name: str

    def value(self, c: np.ndarray, elems: dict) -> np.ndarray:
        if self.kind == "C":
            return c
        if self.kind == "I":
            return np.eye(2)
        if self.kind == "elem":
            return _mat(elems[self.labels[0]])
        if self.kind == "outer":
            v = elems[self.labels[0]].as_array()
            return np.outer(v, v)
        if self.kind == "sym_outer":
            a = elems[self.labels[0]].as_array()
            b = elems[self.labels[1]].as_array()
            return np.outer(a, b) + np.outer(b, a)
        if self.kind == "comm_eps_C":
            return c @ EPS - EPS @ c
        if self.kind == "comm_eps_elem":
            m = _mat(elems[self.labels[0]])
            return m @ EPS - EPS @ m
        if self.kind == "elem_eps":
            return _mat(elems[self.labels[0]]) @ EPS
        raise ValueError(f"unknown generator kind {self.kind!r}")


def _mat(payload) -> np.ndarray:
    return payload.as_matrix()


@dataclass(frozen=True)
class SlotAction:
    """Signed permutations of invariant and generator slots induced by one
    group generator: values transform as J'[k] = sign[k] * J[perm[k]]."""
    generator: OrthTransform
    inv_perm: tuple
    inv_signs: tuple
    gen_perm: tuple
    gen_signs: tuple

    def inv_matrix(self) -> np.ndarray:
        return _signed_perm_matrix(self.inv_perm, self.inv_signs)

    def gen_matrix(self) -> np.ndarray:
        return _signed_perm_matrix(self.gen_perm, self.gen_signs)


def _signed_perm_matrix(perm, signs) -> np.ndarray:
    n = len(perm)
    m = np.zeros((n, n))
    for k in range(n):
        m[k, perm[k]] = signs[k]
    return m


@dataclass(frozen=True)
class ConstraintRelation:
    """One reported relation: alpha_lhs(J) = sign * alpha_rhs(pi.J) where pi
    is the invariant action of `action_index`; scalar relations use
    lhs = rhs = None and read psi(J) = psi(pi.J)."""
    kind: str          # "tensor" or "scalar"
    lhs: int | None
    sign: float
    rhs: int | None
    action_index: int
    text: str


@dataclass(frozen=True)
class RepresentationSpec:
    group_id: str
    invariants: tuple     # InvariantForm
    generators: tuple     # GeneratorForm
    actions: tuple        # SlotAction per group generator
    constraints: tuple    # ConstraintRelation (reported relations)
    elements: dict        # label -> payload (structural elements)


def _inv_trCM(label: str) -> InvariantForm:
    return InvariantForm("lin", (label,), "elem", f"tr(C*{label})")


def _inv_trCMeps(label: str) -> InvariantForm:
    return InvariantForm("lin", (label,), "elem_eps", f"tr(C*{label}*eps)")


def _inv_vCv(label: str) -> InvariantForm:
    return InvariantForm("lin", (label,), "outer", f"{label}.C*{label}")


def representation_spec(group_id: str) -> RepresentationSpec:
    """Invariants, generators, slot actions and reported constraints."""
    sset = structural_set(group_id)
    elems = {el.label: el.payload for el in sset.elements}
    g = group(group_id)

    def act(q, inv_perm, inv_signs, gen_perm, gen_signs):
        return SlotAction(q, tuple(inv_perm), tuple(inv_signs),
                          tuple(gen_perm), tuple(gen_signs))

    if group_id == "C4":
        invariants = (_inv_trCM("M1"), _inv_trCM("M2"), _inv_trCMeps("M1"))
        generators = (GeneratorForm("C", (), "C"),
                      GeneratorForm("elem", ("M1",), "M1"),
                      GeneratorForm("elem", ("M2",), "M2"),
                      GeneratorForm("comm_eps_C", (), "C*eps - eps*C"),
                      GeneratorForm("comm_eps_elem", ("M1",), "M1*eps - eps*M1"))
        actions = (act(g.generators[0], (1, 0, 2), (1, 1, -1),
                       (0, 2, 1, 3, 4), (1, 1, 1, 1, -1)),)
        constraints = (
            ConstraintRelation("tensor", 0, 1.0, 0, 0, "a0(C,M1,M2,eps) = a0(C,M2,M1,eps)"),
            ConstraintRelation("tensor", 1, 1.0, 2, 0, "a1(C,M1,M2,eps) = a2(C,M2,M1,eps)"),
            ConstraintRelation("tensor", 3, 1.0, 3, 0, "a3(C,M1,M2,eps) = a3(C,M2,M1,eps)"),
            ConstraintRelation("tensor", 4, -1.0, 4, 0, "a4(C,M1,M2,eps) = -a4(C,M2,M1,eps)"),
            ConstraintRelation("scalar", None, 1.0, None, 0,
                               "psi(I1,I2,I3) = psi(I2,I1,-I3)"),
        )
    elif group_id == "C4v":
        invariants = (InvariantForm("trC2", (), "elem", "tr(C^2)"),
                      _inv_trCM("M1"), _inv_trCM("M2"))
        generators = (GeneratorForm("C", (), "C"),
                      GeneratorForm("elem", ("M1",), "M1"),
                      GeneratorForm("elem", ("M2",), "M2"))
        actions = (act(g.generators[0], (0, 2, 1), (1, 1, 1), (0, 2, 1), (1, 1, 1)),
                   act(g.generators[1], (0, 1, 2), (1, 1, 1), (0, 1, 2), (1, 1, 1)))
        constraints = (
            ConstraintRelation("tensor", 0, 1.0, 0, 0, "a0(C,M1,M2) = a0(C,M2,M1)"),
            ConstraintRelation("tensor", 1, 1.0, 2, 0, "a1(C,M1,M2) = a2(C,M2,M1)"),
            ConstraintRelation("scalar", None, 1.0, None, 0,
                               "psi(I1,I2,I3) = psi(I1,I3,I2)"),
        )
    elif group_id == "C3":
        invariants = (_inv_vCv("v1"), _inv_vCv("v2"), _inv_vCv("v3"))
        generators = (GeneratorForm("C", (), "C"),
                      GeneratorForm("outer", ("v1",), "v1@v1"),
                      GeneratorForm("outer", ("v2",), "v2@v2"),
                      GeneratorForm("outer", ("v3",), "v3@v3"),
                      GeneratorForm("comm_eps_C", (), "C*eps - eps*C"))
        actions = (act(g.generators[0], (1, 2, 0), (1, 1, 1),
                       (0, 2, 3, 1, 4), (1, 1, 1, 1, 1)),)
        constraints = (
            ConstraintRelation("tensor", 0, 1.0, 0, 0, "a0(C,v1,v2,v3,eps) = a0(C,v2,v3,v1,eps)"),
            ConstraintRelation("tensor", 1, 1.0, 3, 0, "a1(C,v1,v2,v3,eps) = a3(C,v2,v3,v1,eps)"),
            ConstraintRelation("tensor", 2, 1.0, 1, 0, "a2(C,v1,v2,v3,eps) = a1(C,v2,v3,v1,eps)"),
            ConstraintRelation("tensor", 4, 1.0, 4, 0, "a4(C,v1,v2,v3,eps) = a4(C,v2,v3,v1,eps)"),
            ConstraintRelation("scalar", None, 1.0, None, 0,
                               "psi(I1,I2,I3) = psi(I2,I3,I1)"),
        )
    elif group_id == "C3v":
        invariants = (_inv_vCv("v1"), _inv_vCv("v2"), _inv_vCv("v3"))
        generators = (GeneratorForm("C", (), "C"),
                      GeneratorForm("outer", ("v1",), "v1@v1"),
                      GeneratorForm("outer", ("v2",), "v2@v2"),
                      GeneratorForm("outer", ("v3",), "v3@v3"))
        actions = (act(g.generators[0], (1, 2, 0), (1, 1, 1),
                       (0, 2, 3, 1), (1, 1, 1, 1)),
                   act(g.generators[1], (0, 2, 1), (1, 1, 1),
                       (0, 1, 3, 2), (1, 1, 1, 1)))
        constraints = (
            ConstraintRelation("tensor", 0, 1.0, 0, 0, "a0(C,v1,v2,v3) = a0(C,v2,v3,v1)"),
            ConstraintRelation("tensor", 1, 1.0, 3, 0, "a1(C,v1,v2,v3) = a3(C,v2,v3,v1)"),
            ConstraintRelation("tensor", 2, 1.0, 1, 0, "a2(C,v1,v2,v3) = a1(C,v2,v3,v1)"),
            ConstraintRelation("tensor", 3, 1.0, 2, 1, "a3(C,v1,v2,v3) = a2(C,v1,v3,v2)"),
            ConstraintRelation("scalar", None, 1.0, None, 0,
                               "psi(I1,I2,I3) = psi(I2,I3,I1)"),
            ConstraintRelation("scalar", None, 1.0, None, 1,
                               "psi(I1,I2,I3) = psi(I1,I3,I2)"),
        )
    elif group_id == "C6":
        invariants = (_inv_trCM("M1"), _inv_trCM("M2"), _inv_trCM("M3"))
        generators = (GeneratorForm("C", (), "C"),
                      GeneratorForm("elem", ("M1",), "M1"),
                      GeneratorForm("elem", ("M2",), "M2"),
                      GeneratorForm("elem", ("M3",), "M3"),
                      GeneratorForm("comm_eps_C", (), "C*eps - eps*C"))
        actions = (act(g.generators[0], (2, 0, 1), (1, 1, 1),
                       (0, 3, 1, 2, 4), (1, 1, 1, 1, 1)),)
        constraints = (
            ConstraintRelation("tensor", 0, 1.0, 0, 0, "a0(C,M1,M2,M3,eps) = a0(C,M3,M1,M2,eps)"),
            ConstraintRelation("tensor", 1, 1.0, 2, 0, "a1(C,M1,M2,M3,eps) = a2(C,M3,M1,M2,eps)"),
            ConstraintRelation("tensor", 2, 1.0, 3, 0, "a2(C,M1,M2,M3,eps) = a3(C,M3,M1,M2,eps)"),
            ConstraintRelation("tensor", 4, 1.0, 4, 0, "a4(C,M1,M2,M3,eps) = a4(C,M3,M1,M2,eps)"),
            ConstraintRelation("scalar", None, 1.0, None, 0,
                               "psi(I1,I2,I3) = psi(I3,I1,I2)"),
        )
    elif group_id == "C6v":
        invariants = (_inv_trCM("M1"), _inv_trCM("M2"), _inv_trCM("M3"))
        generators = (GeneratorForm("C", (), "C"),
                      GeneratorForm("elem", ("M1",), "M1"),
                      GeneratorForm("elem", ("M2",), "M2"),
                      GeneratorForm("elem", ("M3",), "M3"))
        actions = (act(g.generators[0], (2, 0, 1), (1, 1, 1),
                       (0, 3, 1, 2), (1, 1, 1, 1)),
                   act(g.generators[1], (0, 2, 1), (1, 1, 1),
                       (0, 1, 3, 2), (1, 1, 1, 1)))
        constraints = (
            ConstraintRelation("tensor", 0, 1.0, 0, 0, "a0(C,M1,M2,M3) = a0(C,M3,M1,M2)"),
            ConstraintRelation("tensor", 1, 1.0, 2, 0, "a1(C,M1,M2,M3) = a2(C,M3,M1,M2)"),
            ConstraintRelation("tensor", 3, 1.0, 1, 0, "a3(C,M1,M2,M3) = a1(C,M3,M1,M2)"),
            ConstraintRelation("tensor", 2, 1.0, 3, 1, "a2(C,M1,M2,M3) = a3(C,M1,M3,M2)"),
            ConstraintRelation("scalar", None, 1.0, None, 0,
                               "psi(I1,I2,I3) = psi(I3,I1,I2)"),
            ConstraintRelation("scalar", None, 1.0, None, 1,
                               "psi(I1,I2,I3) = psi(I1,I3,I2)"),
        )
    elif group_id == "C1":
        invariants = (_inv_vCv("i"), _inv_vCv("j"),
                      InvariantForm("lin", ("i", "j"), "cross", "i.C*j"))
        generators = (GeneratorForm("outer", ("i",), "i@i"),
                      GeneratorForm("outer", ("j",), "j@j"),
                      GeneratorForm("sym_outer", ("i", "j"), "i@j + j@i"))
        actions, constraints = (), ()
    elif group_id == "C1v":
        invariants = (InvariantForm("trC", (), "elem", "tr(C)"),
                      InvariantForm("trC2", (), "elem", "tr(C^2)"),
                      _inv_vCv("i"))
        generators = (GeneratorForm("I", (), "I"),
                      GeneratorForm("outer", ("i",), "i@i"),
                      GeneratorForm("C", (), "C"))
        actions, constraints = (), ()
    elif group_id == "C2":
        invariants = (InvariantForm("trC", (), "elem", "tr(C)"),
                      _inv_trCM("P2"), _inv_trCMeps("P2"))
        generators = (GeneratorForm("I", (), "I"),
                      GeneratorForm("elem", ("P2",), "P2"),
                      GeneratorForm("elem_eps", ("P2",), "P2*eps"))
        actions, constraints = (), ()
    elif group_id == "C2v":
        invariants = (InvariantForm("trC", (), "elem", "tr(C)"),
                      InvariantForm("trC2", (), "elem", "tr(C^2)"),
                      _inv_trCM("P2"))
        generators = (GeneratorForm("I", (), "I"),
                      GeneratorForm("elem", ("P2",), "P2"),
                      GeneratorForm("C", (), "C"))
        actions, constraints = (), ()
    elif group_id == "Cinf":
        invariants = (InvariantForm("trC", (), "elem", "tr(C)"),
                      InvariantForm("trC2", (), "elem", "tr(C^2)"))
        generators = (GeneratorForm("I", (), "I"),
                      GeneratorForm("C", (), "C"),
                      GeneratorForm("comm_eps_C", (), "C*eps - eps*C"))
        actions, constraints = (), ()
    elif group_id == "Cinf_v":
        invariants = (InvariantForm("trC", (), "elem", "tr(C)"),
                      InvariantForm("trC2", (), "elem", "tr(C^2)"))
        generators = (GeneratorForm("I", (), "I"), GeneratorForm("C", (), "C"))
        actions, constraints = (), ()
    else:
        raise KeyError(f"unknown point group {group_id!r}")

    return RepresentationSpec(group_id, tuple(invariants), tuple(generators),
                              actions, constraints, elems)


def invariant_names(spec: RepresentationSpec):
    return [f"I{k + 1}" for k in range(len(spec.invariants))]


# ---------------------------------------------------------------------------
# action validation

def _transformed_elements(elems: dict, q: OrthTransform) -> dict:
    return {label: apply_transform(q, payload) for label, payload in elems.items()}


def action_consistency_check(spec: RepresentationSpec, g: PointGroup,
                             n_samples: int = 5, seed: int = 0) -> float:
    """Compose generator actions along words reaching every group element and
    compare against brute-force structural substitution.  Returns the max
    absolute deviation over invariant and generator slots."""
    if g.continuous:
        raise ValueError("action check needs a finite group")
    rng = np.random.default_rng(seed)
    cs = [_random_sym(rng) for _ in range(n_samples)]

    n_inv, n_gen = len(spec.invariants), len(spec.generators)
    start = (np.eye(2), np.eye(n_inv), np.eye(n_gen))
    seen = [start]
    frontier = [start]
    gen_actions = [(a.generator.matrix, a.inv_matrix(), a.gen_matrix())
                   for a in spec.actions]
    while frontier:
        nxt = []
        for qm, pim, rhom in frontier:
            for gm, pg, rg in gen_actions:
                # left-extending the word right-composes the slot action:
                # <gw>M_k = <g>M_{tau_w(k)} = M_{sigma_g(tau_w(k))}
                cand = (gm @ qm, pim @ pg, rhom @ rg)
                if not any(np.abs(cand[0] - s[0]).max() < 1e-9 for s in seen):
                    seen.append(cand)
                    nxt.append(cand)
        frontier = nxt

    max_dev = 0.0
    for qm, pim, rhom in seen:
        sub = _transformed_elements(spec.elements, from_matrix(qm))
        for c in cs:
            j0 = np.array([f.value(c, spec.elements) for f in spec.invariants])
            j1 = np.array([f.value(c, sub) for f in spec.invariants])
            max_dev = max(max_dev, float(np.abs(j1 - pim @ j0).max()))
            g0 = np.stack([f.value(c, spec.elements).ravel() for f in spec.generators])
            g1 = np.stack([f.value(c, sub).ravel() for f in spec.generators])
            max_dev = max(max_dev, float(np.abs(g1 - rhom @ g0).max()))
    return max_dev


def _random_sym(rng) -> np.ndarray:
    c11, c22, c12 = rng.uniform(-1.0, 1.0, size=3)
    return np.array([[c11, c12], [c12, c22]])


# ---------------------------------------------------------------------------
# models

@dataclass(frozen=True)
class Model:
    group_id: str
    kind: str            # "scalar" or "tensor"
    free_exprs: tuple    # one Expr per generator slot (tensor) or one (scalar)
    symmetrized: bool
    coeffs: tuple        # effective coefficient expressions (post-Reynolds)
    spec: RepresentationSpec


def _action_closure(mats):
    """Closure of a list of (pi, rho) matrix pairs under composition."""
    def key(pair):
        return (pair[0].round(9).tobytes(), pair[1].round(9).tobytes())

    n_inv = mats[0][0].shape[0] if mats else 0
    n_gen = mats[0][1].shape[0] if mats else 0
    ident = (np.eye(n_inv), np.eye(n_gen))
    out = {key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p, r in frontier:
            for pg, rg in mats:
                cand = (p @ pg, r @ rg)
                k = key(cand)
                if k not in out:
                    out[k] = cand
                    nxt.append(cand)
        frontier = nxt
        if len(out) > 48:
            raise RuntimeError("slot action closure did not terminate")
    return list(out.values())


def _permuted_expr(e: Expr, pi: np.ndarray, names) -> Expr:
    """f(pi . J) as an expression: substitute I_k -> sign * I_{perm(k)}."""
    mapping = {}
    for k, name in enumerate(names):
        col = np.flatnonzero(pi[k])
        if len(col) != 1:
            raise ValueError("action matrix is not a signed permutation")
        src = Var(names[int(col[0])])
        mapping[name] = src if pi[k, col[0]] > 0 else Neg(src)
    return exprdsl.substitute(e, mapping)


def symmetrize(spec: RepresentationSpec, free_exprs, kind: str = "tensor") -> Model:
    """Build a model whose coefficients satisfy all induced constraints.

    Tensor models take one free expression per generator slot; scalar models
    take exactly one.  Expressions may only reference the invariant names
    I1..In of the spec.
    """
    free_exprs = tuple(parse_if_text(e) for e in free_exprs)
    names = invariant_names(spec)
    _check_arity_and_vars(spec, free_exprs, kind, names)

    if not spec.actions:
        return Model(spec.group_id, kind, free_exprs, True, free_exprs, spec)

    pairs = [(a.inv_matrix(), a.gen_matrix()) for a in spec.actions]
    h = _action_closure(pairs)
    weight = Lit(1.0 / len(h))

    if kind == "scalar":
        terms = [_permuted_expr(free_exprs[0], p, names) for p, _ in h]
        coeffs = (exprdsl.BinOp("*", weight, _sum_exprs(terms)),)
    else:
        n_gen = len(spec.generators)
        coeffs = []
        for i in range(n_gen):
            terms = []
            for p, r in h:
                rinv = r.T  # signed permutation: inverse = transpose
                for j in range(n_gen):
                    s = rinv[i, j]
                    if s == 0.0:
                        continue
                    t = _permuted_expr(free_exprs[j], p, names)
                    terms.append(t if s > 0 else Neg(t))
            coeffs.append(exprdsl.BinOp("*", weight, _sum_exprs(terms)))
        coeffs = tuple(coeffs)
    return Model(spec.group_id, kind, free_exprs, True, coeffs, spec)


def unsymmetrized_model(spec: RepresentationSpec, free_exprs, kind: str = "tensor") -> Model:
    """Negative-control constructor: coefficients used as-is."""
    free_exprs = tuple(parse_if_text(e) for e in free_exprs)
    _check_arity_and_vars(spec, free_exprs, kind, invariant_names(spec))
    return Model(spec.group_id, kind, free_exprs, False, free_exprs, spec)


def parse_if_text(e) -> Expr:
    return exprdsl.parse(e) if isinstance(e, str) else e


def _check_arity_and_vars(spec, free_exprs, kind, names):
    if kind not in ("scalar", "tensor"):
        raise ValueError(f"unknown model kind {kind!r}")
    want = 1 if kind == "scalar" else len(spec.generators)
    if len(free_exprs) != want:
        raise ValueError(f"{spec.group_id} {kind} model needs {want} free "
                         f"expression(s), got {len(free_exprs)}")
    allowed = set(names)
    for e in free_exprs:
        extra = exprdsl.variables(e) - allowed
        if extra:
            raise ValueError(f"unknown invariant name(s) {sorted(extra)}; "
                             f"this group provides {names}")


def _sum_exprs(terms):
    if not terms:
        return Lit(0.0)
    out = terms[0]
    for t in terms[1:]:
        out = exprdsl.BinOp("+", out, t) if not isinstance(t, Neg) \
            else exprdsl.BinOp("-", out, t.arg)
    return out


# ---------------------------------------------------------------------------
# evaluation

def _c_matrix(c) -> np.ndarray:
    if isinstance(c, SymTensor2):
        return c.as_matrix()
    c = np.asarray(c, dtype=float)
    if c.shape != (2, 2) or abs(c[0, 1] - c[1, 0]) > 1e-12:
        raise ValueError("C must be a symmetric 2x2 tensor")
    return c


def invariant_values(m_or_spec, c) -> dict:
    spec = m_or_spec.spec if isinstance(m_or_spec, Model) else m_or_spec
    cm = _c_matrix(c)
    vals = {}
    with np.errstate(invalid="ignore", over="ignore"):
        values = [f.value(cm, spec.elements) for f in spec.invariants]
    for k, v in enumerate(values):
        if not math.isfinite(v):
            raise ValueError(f"non-finite invariant I{k + 1}")
        vals[f"I{k + 1}"] = v
    return vals


def coefficient_values(m: Model, c) -> np.ndarray:
    bindings = invariant_values(m, c)
    return np.array([exprdsl.evaluate(e, bindings) for e in m.coeffs])


def eval_scalar(m: Model, c) -> float:
    if m.kind != "scalar":
        raise ValueError("eval_scalar needs a scalar model")
    return float(coefficient_values(m, c)[0])


def eval_tensor(m: Model, c) -> SymTensor2:
    if m.kind != "tensor":
        raise ValueError("eval_tensor needs a tensor model")
    cm = _c_matrix(c)
    alphas = coefficient_values(m, c)
    total = np.zeros((2, 2))
    for a, gform in zip(alphas, m.spec.generators):
        total += a * gform.value(cm, m.spec.elements)
    return SymTensor2.from_matrix(0.5 * (total + total.T), tol=math.inf)


def stress_from_potential(m: Model, c) -> SymTensor2:
    """T = 2 dpsi/dC by the chain rule over the invariants."""
    if m.kind != "scalar":
        raise ValueError("stress_from_potential needs a scalar model")
    cm = _c_matrix(c)
    bindings = invariant_values(m, c)
    total = np.zeros((2, 2))
    for k, f in enumerate(m.spec.invariants):
        dpsi = exprdsl.evaluate(exprdsl.differentiate(m.coeffs[0], f"I{k + 1}"), bindings)
        total += dpsi * f.d_dc(cm, m.spec.elements)
    return SymTensor2.from_matrix(2.0 * total)


def stress_model_residual(m: Model, q: OrthTransform, c) -> float:
    """Equivariance defect of the derived stress at one (Q, C) pair."""
    cm = _c_matrix(c)
    qm = q.matrix
    lhs = qm @ stress_from_potential(m, cm).as_matrix() @ qm.T
    rhs = stress_from_potential(m, qm @ cm @ qm.T).as_matrix()
    return float(np.abs(lhs - rhs).max())


# ---------------------------------------------------------------------------
# residual checks

def random_sym_tensors(n: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    return [_random_sym(rng) for _ in range(n)]


def constraint_residuals(m: Model, n_samples: int = 100, seed: int = 0) -> dict:
    """Max |lhs - rhs| of every reported relation over random C."""
    names = invariant_names(m.spec)
    out = {}
    for rel in m.spec.constraints:
        if rel.kind != m.kind:
            continue
        pi = m.spec.actions[rel.action_index].inv_matrix()
        worst = 0.0
        for cm in random_sym_tensors(n_samples, seed):
            bindings = invariant_values(m, cm)
            permuted = {names[k]: float(pi[k] @ np.array([bindings[n] for n in names]))
                        for k in range(len(names))}
            if rel.kind == "scalar":
                lhs = exprdsl.evaluate(m.coeffs[0], bindings)
                rhs = exprdsl.evaluate(m.coeffs[0], permuted)
            else:
                lhs = exprdsl.evaluate(m.coeffs[rel.lhs], bindings)
                rhs = rel.sign * exprdsl.evaluate(m.coeffs[rel.rhs], permuted)
            worst = max(worst, abs(lhs - rhs))
        out[rel.text] = worst
    return out


def equivariance_residual(m: Model, n_samples: int = 100, seed: int = 0,
                          group_override: PointGroup | None = None,
                          continuous_samples: int = 64,
                          return_witness: bool = False):
    """Max over samples x group elements of the defining-condition defect:
    ||<Q>T(C) - T(<Q>C)||_inf for tensor models, |psi(C) - psi(<Q>C)| for
    scalar models."""
    g = group_override if group_override is not None else group(m.group_id)
    rng = np.random.default_rng(seed)
    qs = sample_elements(g, continuous_samples, rng) if g.continuous else list(g.elements)
    worst, witness = 0.0, None
    for cm in random_sym_tensors(n_samples, seed + 1):
        if m.kind == "scalar":
            base = eval_scalar(m, cm)
        else:
            base = eval_tensor(m, cm).as_matrix()
        for q in qs:
            qm = q.matrix
            moved = qm @ cm @ qm.T
            if m.kind == "scalar":
                dev = abs(base - eval_scalar(m, moved))
            else:
                dev = float(np.abs(qm @ base @ qm.T - eval_tensor(m, moved).as_matrix()).max())
            if dev > worst:
                worst, witness = dev, (q, cm)
    if return_witness:
        return worst, witness
    return worst


# ---------------------------------------------------------------------------
# model files

def model_to_json(m: Model) -> str:
    return json.dumps({"group": m.group_id, "kind": m.kind,
                       "free": [exprdsl.to_text(e) for e in m.free_exprs],
                       "symmetrize": m.symmetrized}, sort_keys=True)


def model_from_dict(doc: dict) -> Model:
    for field in ("group", "kind", "free"):
        if field not in doc:
            raise ValueError(f"model file is missing the {field!r} field")
    spec = representation_spec(doc["group"])
    exprs = [exprdsl.parse(s) for s in doc["free"]]
    if doc.get("symmetrize", True):
        return symmetrize(spec, exprs, doc["kind"])
    return unsymmetrized_model(spec, exprs, doc["kind"])


def load_model(path: str) -> Model:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
