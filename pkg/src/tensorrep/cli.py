"""Command line surface.

Subcommands:

    pg list | pg elements <G> | pg table <G> [--format text|csv|json]
    st show <G> | st verify <G> [--grid N] [--tol T] | st zheng <n> [--check <G>]
    rep spec <G>
    iso basis --vec M --sym N --skew P | iso gens --vec M --sym N --skew P
    model check <file> [--samples N] [--seed S] [--tol T]
    model eval <file> --C c11,c22,c12
    model stress <file> --C c11,c22,c12

Exit codes: 0 success, 1 failed verification, 2 usage error.  The default
tolerance comes from the TENSORREP_TOL environment variable when set;
--tol overrides it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import anisorep, isotropic, pointgroups, structural
from .pointgroups import element_name
from .tensor2d import TensorN, Vector2, apply_transform


def _flat_components(t) -> np.ndarray:
    if isinstance(t, Vector2):
        return t.as_array()
    if isinstance(t, TensorN):
        return t.components.ravel()
    return t.as_matrix().ravel()


def _default_tol(fallback: float) -> float:
    raw = os.environ.get("TENSORREP_TOL")
    if raw is None:
        return fallback
    try:
        return float(raw)
    except ValueError:
        raise SystemExit(2)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tensorrep")
    sub = p.add_subparsers(dest="cmd", required=True)

    pg = sub.add_parser("pg", help="point groups").add_subparsers(dest="sub", required=True)
    pg.add_parser("list")
    q = pg.add_parser("elements")
    q.add_argument("group")
    q = pg.add_parser("table")
    q.add_argument("group")
    q.add_argument("--format", choices=("text", "csv", "json"), default="text")

    st = sub.add_parser("st", help="structural sets").add_subparsers(dest="sub", required=True)
    q = st.add_parser("show")
    q.add_argument("group")
    q = st.add_parser("verify")
    q.add_argument("group")
    q.add_argument("--grid", type=int, default=structural.DEFAULT_GRID)
    q.add_argument("--tol", type=float, default=None)
    q = st.add_parser("zheng")
    q.add_argument("order", type=int)
    q.add_argument("--check", metavar="G", default=None)
    q.add_argument("--tol", type=float, default=None)

    rep = sub.add_parser("rep", help="representations").add_subparsers(dest="sub", required=True)
    q = rep.add_parser("spec")
    q.add_argument("group")

    iso = sub.add_parser("iso", help="isotropic machinery").add_subparsers(dest="sub", required=True)
    for name in ("basis", "gens"):
        q = iso.add_parser(name)
        q.add_argument("--vec", type=int, default=0)
        q.add_argument("--sym", type=int, default=0)
        q.add_argument("--skew", type=int, default=0)

    model = sub.add_parser("model", help="model files").add_subparsers(dest="sub", required=True)
    q = model.add_parser("check")
    q.add_argument("file")
    q.add_argument("--samples", type=int, default=100)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--tol", type=float, default=None)
    for name in ("eval", "stress"):
        q = model.add_parser(name)
        q.add_argument("file")
        q.add_argument("--C", required=True, metavar="c11,c22,c12")
    return p


def _parse_c(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise SystemExit(2)
    try:
        c11, c22, c12 = (float(s) for s in parts)
    except ValueError:
        raise SystemExit(2)
    return np.array([[c11, c12], [c12, c22]])


def _fmt_tensor(m: np.ndarray) -> str:
    return (f"[[{m[0, 0]:.12g}, {m[0, 1]:.12g}], "
            f"[{m[1, 0]:.12g}, {m[1, 1]:.12g}]]")


def _pg(args, out) -> int:
    if args.sub == "list":
        for gid in pointgroups.GROUP_IDS:
            order = pointgroups.GROUP_ORDERS.get(gid, "inf")
            print(f"{gid}  order={order}", file=out)
        return 0
    g = pointgroups.group(args.group)
    if args.sub == "elements":
        for e in pointgroups.enumerate_elements(g):
            print(element_name(e), file=out)
        return 0
    table = pointgroups.cayley_table(g)
    if args.format == "csv":
        out.write(pointgroups.table_to_csv(table))
    elif args.format == "json":
        print(pointgroups.table_to_json(table), file=out)
    else:
        width = max(len(n) for n in table.names)
        header = " ".join(n.rjust(width) for n in table.names)
        print(" " * (width + 3) + header, file=out)
        for name, row in zip(table.names, table.entries):
            cells = " ".join(table.names[k].rjust(width) for k in row)
            print(f"{name.rjust(width)} | {cells}", file=out)
    return 0


def _st(args, out) -> int:
    if args.sub == "show":
        s = structural.structural_set(args.group)
        print(structural.set_to_json(s), file=out)
        return 0
    if args.sub == "verify":
        tol = _default_tol(1e-9) if args.tol is None else args.tol
        s = structural.structural_set(args.group)
        stab = structural.characterized_group(s, grid_n=args.grid, tol=tol)
        g = pointgroups.group(args.group)
        if g.continuous:
            rot_only = all(q.kind == "rotation" for q in stab)
            n_rot = sum(1 for q in stab if q.kind == "rotation")
            n_ref = len(stab) - n_rot
            if g.id == "Cinf":
                ok = rot_only and n_rot == args.grid
            else:
                ok = n_rot == args.grid and n_ref == args.grid
            verdict = "PASS" if ok else "FAIL"
            print(f"stabilizer = {g.id} ({n_rot} rotations, {n_ref} reflection "
                  f"axes on the grid): {verdict}", file=out)
        else:
            want = {element_name(e) for e in g.elements}
            got = {element_name(q) for q in stab}
            ok = want == got
            verdict = "PASS" if ok else "FAIL"
            print(f"stabilizer = {args.group} ({len(stab)} elements): {verdict}", file=out)
            if not ok:
                print(f"  expected {sorted(want)}", file=out)
                print(f"  found    {sorted(got)}", file=out)
        print("note: sampled surrogate for the full O(2) stabilizer "
              f"(grid of {args.grid} rotations and {args.grid} reflection axes)",
              file=out)
        return 0 if ok else 1
    # st zheng
    tol = _default_tol(1e-12) if args.tol is None else args.tol
    p = structural.zheng_tensor(args.order)
    comps = _flat_components(p)
    print(f"P{args.order} components (flat): "
          + ", ".join(f"{v:.12g}" for v in comps), file=out)
    if args.check is None:
        return 0
    g = pointgroups.group(args.check)
    if g.continuous:
        print("cannot check a continuous group", file=sys.stderr)
        return 2
    worst = max(float(np.abs(_flat_components(apply_transform(q, p)) - comps).max())
                for q in g.elements)
    rng = np.random.default_rng(0)
    outside = 0.0
    for q in pointgroups.sample_elements(pointgroups.group("Cinf_v"), 16, rng):
        if pointgroups.contains(g, q):
            continue
        moved = _flat_components(apply_transform(q, p))
        outside = max(outside, float(np.abs(moved - comps).max()))
    ok = worst <= tol
    print(f"invariance over {args.check}: max deviation {worst:.3e} "
          f"({'PASS' if ok else 'FAIL'} at tol {tol:g})", file=out)
    print(f"max deviation over sampled non-members: {outside:.3e}", file=out)
    return 0 if ok else 1


def _rep(args, out) -> int:
    spec = anisorep.representation_spec(args.group)
    print(f"group: {spec.group_id}", file=out)
    print("invariants:", file=out)
    for k, f in enumerate(spec.invariants):
        print(f"  I{k + 1} = {f.name}", file=out)
    print("generators:", file=out)
    for k, f in enumerate(spec.generators):
        print(f"  G{k + 1} = {f.name}", file=out)
    if spec.actions:
        print("slot actions (one per group generator):", file=out)
        for a in spec.actions:
            print(f"  {element_name(a.generator)}: "
                  f"inv perm={list(a.inv_perm)} signs={list(a.inv_signs)}; "
                  f"gen perm={list(a.gen_perm)} signs={list(a.gen_signs)}", file=out)
    else:
        print("slot actions: none (each structural element is itself invariant)",
              file=out)
    if spec.constraints:
        print("constraint relations:", file=out)
        for rel in spec.constraints:
            print(f"  [{rel.kind}] {rel.text}", file=out)
    return 0


def _iso(args, out) -> int:
    if min(args.vec, args.sym, args.skew) < 0:
        return 2
    if args.sub == "basis":
        descs = isotropic.functional_basis(args.vec, args.sym, args.skew)
    else:
        descs = isotropic.generator_set(args.vec, args.sym, args.skew)
    for d in descs:
        print(d.text(), file=out)
    return 0


def _model(args, out) -> int:
    try:
        m = anisorep.load_model(args.file)
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"cannot load model: {exc}", file=sys.stderr)
        return 2

    if args.sub == "eval":
        c = _parse_c(args.C)
        if m.kind == "scalar":
            print(f"psi = {anisorep.eval_scalar(m, c):.12g}", file=out)
        else:
            print(f"T = {_fmt_tensor(anisorep.eval_tensor(m, c).as_matrix())}",
                  file=out)
        return 0

    if args.sub == "stress":
        c = _parse_c(args.C)
        if m.kind != "scalar":
            print("stress needs a scalar (potential) model", file=sys.stderr)
            return 2
        t = anisorep.stress_from_potential(m, c)
        print(f"T = 2 dpsi/dC = {_fmt_tensor(t.as_matrix())}", file=out)
        return 0

    # model check
    tol = _default_tol(1e-9) if args.tol is None else args.tol
    ok = True
    rels = anisorep.constraint_residuals(m, n_samples=args.samples, seed=args.seed)
    for text, r in rels.items():
        good = r <= tol
        ok = ok and good
        print(f"constraint residual {r:.3e} ({'PASS' if good else 'FAIL'}): {text}",
              file=out)
    worst, witness = anisorep.equivariance_residual(
        m, n_samples=args.samples, seed=args.seed, return_witness=True)
    good = worst <= tol
    ok = ok and good
    print(f"equivariance residual max {worst:.3e} "
          f"({'PASS' if good else 'FAIL'} at tol {tol:g})", file=out)
    if witness is not None:
        q, c = witness
        print(f"  worst witness: Q={element_name(q)}, C={_fmt_tensor(c)}", file=out)
    return 0 if ok else 1


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.cmd == "pg":
            return _pg(args, out)
        if args.cmd == "st":
            return _st(args, out)
        if args.cmd == "rep":
            return _rep(args, out)
        if args.cmd == "iso":
            return _iso(args, out)
        return _model(args, out)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
