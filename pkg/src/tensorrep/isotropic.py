"""Isotropic functional bases and tensor generators in 2D.

Given an argument list of M vectors, N symmetric and P skew 2x2 tensors,
enumerate the complete functional basis (scalar invariants) and the tensor
generator set for symmetric tensor-valued functions, in a fixed enumeration
order so downstream coefficient indices are stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .tensor2d import SkewTensor2, SymTensor2, Vector2

# invariant forms, in enumeration (row) order
INV_FORMS = ("trA", "trA2", "trAA", "vv", "vw", "trW2", "trWW",
             "vAv", "vAw", "vWw", "trAAW", "AvWv")
# generator forms, in enumeration order
GEN_FORMS = ("I", "A", "voxv", "voxw", "vWsym", "AWcomm")


@dataclass(frozen=True)
class ArgumentList:
    vectors: tuple
    syms: tuple
    skews: tuple

    @staticmethod
    def of(vectors=(), syms=(), skews=()) -> "ArgumentList":
        return ArgumentList(tuple(vectors), tuple(syms), tuple(skews))


@dataclass(frozen=True)
class InvariantDescriptor:
    form: str
    indices: tuple

    def text(self) -> str:
        i = self.indices
        return {
            "trA": lambda: f"tr(A{i[0] + 1})",
            "trA2": lambda: f"tr(A{i[0] + 1}^2)",
            "trAA": lambda: f"tr(A{i[0] + 1}*A{i[1] + 1})",
            "vv": lambda: f"v{i[0] + 1}.v{i[0] + 1}",
            "vw": lambda: f"v{i[0] + 1}.v{i[1] + 1}",
            "trW2": lambda: f"tr(W{i[0] + 1}^2)",
            "trWW": lambda: f"tr(W{i[0] + 1}*W{i[1] + 1})",
            "vAv": lambda: f"v{i[0] + 1}.A{i[1] + 1}*v{i[0] + 1}",
            "vAw": lambda: f"v{i[0] + 1}.A{i[2] + 1}*v{i[1] + 1}",
            "vWw": lambda: f"v{i[0] + 1}.W{i[2] + 1}*v{i[1] + 1}",
            "trAAW": lambda: f"tr(A{i[0] + 1}*A{i[1] + 1}*W{i[2] + 1})",
            "AvWv": lambda: f"A{i[1] + 1}*v{i[0] + 1}.W{i[2] + 1}*v{i[0] + 1}",
        }[self.form]()


@dataclass(frozen=True)
class GeneratorDescriptor:
    form: str
    indices: tuple

    def text(self) -> str:
        i = self.indices
        return {
            "I": lambda: "I",
            "A": lambda: f"A{i[0] + 1}",
            "voxv": lambda: f"v{i[0] + 1}@v{i[0] + 1}",
            "voxw": lambda: f"v{i[0] + 1}@v{i[1] + 1} + v{i[1] + 1}@v{i[0] + 1}",
            "vWsym": lambda: f"v{i[0] + 1}@W{i[1] + 1}v{i[0] + 1} + W{i[1] + 1}v{i[0] + 1}@v{i[0] + 1}",
            "AWcomm": lambda: f"A{i[0] + 1}*W{i[1] + 1} - W{i[1] + 1}*A{i[0] + 1}",
        }[self.form]()


def functional_basis(m: int, n: int, p: int):
    """All scalar invariants for M vectors, N symmetric and P skew
    arguments, in form order (INV_FORMS) then lexicographic indices."""
    if min(m, n, p) < 0:
        raise ValueError("argument counts must be non-negative")
    out = []
    out += [InvariantDescriptor("trA", (i,)) for i in range(n)]
    out += [InvariantDescriptor("trA2", (i,)) for i in range(n)]
    out += [InvariantDescriptor("trAA", c) for c in combinations(range(n), 2)]
    out += [InvariantDescriptor("vv", (a,)) for a in range(m)]
    out += [InvariantDescriptor("vw", c) for c in combinations(range(m), 2)]
    out += [InvariantDescriptor("trW2", (q,)) for q in range(p)]
    out += [InvariantDescriptor("trWW", c) for c in combinations(range(p), 2)]
    out += [InvariantDescriptor("vAv", (a, i)) for a, i in product(range(m), range(n))]
    out += [InvariantDescriptor("vAw", (a, b, i))
            for (a, b), i in product(combinations(range(m), 2), range(n))]
    out += [InvariantDescriptor("vWw", (a, b, q))
            for (a, b), q in product(combinations(range(m), 2), range(p))]
    out += [InvariantDescriptor("trAAW", (i, j, q))
            for (i, j), q in product(combinations(range(n), 2), range(p))]
    out += [InvariantDescriptor("AvWv", (a, i, q))
            for a, i, q in product(range(m), range(n), range(p))]
    return out


def generator_set(m: int, n: int, p: int):
    """Tensor generators of symmetric tensor-valued functions; I is first."""
    if min(m, n, p) < 0:
        raise ValueError("argument counts must be non-negative")
    out = [GeneratorDescriptor("I", ())]
    out += [GeneratorDescriptor("A", (i,)) for i in range(n)]
    out += [GeneratorDescriptor("voxv", (a,)) for a in range(m)]
    out += [GeneratorDescriptor("voxw", c) for c in combinations(range(m), 2)]
    out += [GeneratorDescriptor("vWsym", (a, q)) for a, q in product(range(m), range(p))]
    out += [GeneratorDescriptor("AWcomm", (i, q)) for i, q in product(range(n), range(p))]
    return out


def _vecs(args: ArgumentList):
    return [v.as_array() if isinstance(v, Vector2) else np.asarray(v, float)
            for v in args.vectors]


def _mats(items):
    return [t.as_matrix() if isinstance(t, (SymTensor2, SkewTensor2)) else np.asarray(t, float)
            for t in items]


def evaluate_invariants(descs, args: ArgumentList):
    vs, As, Ws = _vecs(args), _mats(args.syms), _mats(args.skews)
    out = []
    for d in descs:
        i = d.indices
        try:
            if d.form == "trA":
                val = np.trace(As[i[0]])
            elif d.form == "trA2":
                val = np.trace(As[i[0]] @ As[i[0]])
            elif d.form == "trAA":
                val = np.trace(As[i[0]] @ As[i[1]])
            elif d.form == "vv":
                val = vs[i[0]] @ vs[i[0]]
            elif d.form == "vw":
                val = vs[i[0]] @ vs[i[1]]
            elif d.form == "trW2":
                val = np.trace(Ws[i[0]] @ Ws[i[0]])
            elif d.form == "trWW":
                val = np.trace(Ws[i[0]] @ Ws[i[1]])
            elif d.form == "vAv":
                val = vs[i[0]] @ As[i[1]] @ vs[i[0]]
            elif d.form == "vAw":
                val = vs[i[0]] @ As[i[2]] @ vs[i[1]]
            elif d.form == "vWw":
                val = vs[i[0]] @ Ws[i[2]] @ vs[i[1]]
            elif d.form == "trAAW":
                val = np.trace(As[i[0]] @ As[i[1]] @ Ws[i[2]])
            elif d.form == "AvWv":
                val = (As[i[1]] @ vs[i[0]]) @ (Ws[i[2]] @ vs[i[0]])
            else:
                raise ValueError(f"unknown invariant form {d.form!r}")
        except IndexError:
            raise IndexError(f"descriptor {d} out of range for the argument list") from None
        out.append(float(val))
    return out


def evaluate_generators(descs, args: ArgumentList):
    vs, As, Ws = _vecs(args), _mats(args.syms), _mats(args.skews)
    out = []
    for d in descs:
        i = d.indices
        try:
            if d.form == "I":
                g = np.eye(2)
            elif d.form == "A":
                g = As[i[0]]
            elif d.form == "voxv":
                g = np.outer(vs[i[0]], vs[i[0]])
            elif d.form == "voxw":
                g = np.outer(vs[i[0]], vs[i[1]]) + np.outer(vs[i[1]], vs[i[0]])
            elif d.form == "vWsym":
                wv = Ws[i[1]] @ vs[i[0]]
                g = np.outer(vs[i[0]], wv) + np.outer(wv, vs[i[0]])
            elif d.form == "AWcomm":
                g = As[i[0]] @ Ws[i[1]] - Ws[i[1]] @ As[i[0]]
            else:
                raise ValueError(f"unknown generator form {d.form!r}")
        except IndexError:
            raise IndexError(f"descriptor {d} out of range for the argument list") from None
        out.append(SymTensor2.from_matrix(g))
    return out
