import numpy as np
import pytest

from tensorrep import isotropic as iso
from tensorrep.tensor2d import reflection, rotation


def _random_args(rng, m, n, p):
    return iso.ArgumentList(
        vectors=tuple(rng.uniform(-1, 1, size=2) for _ in range(m)),
        syms=tuple(_rand_sym(rng) for _ in range(n)),
        skews=tuple(np.array([[0.0, w], [-w, 0.0]])
                    for w in rng.uniform(-1, 1, size=p)))


def _rand_sym(rng):
    a, b, c = rng.uniform(-1, 1, size=3)
    return np.array([[a, c], [c, b]])


def test_basis_counts():
    # (1,1,1): trA, trA2, vv, trW2, vAv, AvWv
    assert len(iso.functional_basis(1, 1, 1)) == 6
    assert len(iso.functional_basis(0, 1, 0)) == 2
    assert len(iso.functional_basis(2, 0, 0)) == 3
    assert len(iso.functional_basis(0, 0, 2)) == 3
    assert len(iso.generator_set(1, 1, 1)) == 5
    assert len(iso.generator_set(0, 0, 0)) == 1  # identity only


def test_strict_index_ranges():
    descs = iso.functional_basis(2, 2, 2)
    for d in descs:
        if d.form in ("vw",):
            assert d.indices[0] < d.indices[1]
        if d.form == "trAA":
            assert d.indices[0] < d.indices[1]
        if d.form == "trAAW":
            assert d.indices[0] < d.indices[1]
        if d.form in ("vAw", "vWw"):
            assert d.indices[0] < d.indices[1]


def test_enumeration_is_table_row_major():
    forms = [d.form for d in iso.functional_basis(2, 2, 2)]
    order = [iso.INV_FORMS.index(f) for f in forms]
    assert order == sorted(order)


def test_invariant_values():
    args = iso.ArgumentList(vectors=(np.array([1.0, 0.0]),),
                            syms=(np.diag([2.0, 3.0]),),
                            skews=(np.array([[0.0, 1.0], [-1.0, 0.0]]),))
    descs = iso.functional_basis(1, 1, 1)
    vals = dict(zip((d.text() for d in descs),
                    iso.evaluate_invariants(descs, args)))
    assert vals["tr(A1)"] == pytest.approx(5.0)
    assert vals["tr(A1^2)"] == pytest.approx(13.0)
    assert vals["v1.v1"] == pytest.approx(1.0)
    assert vals["tr(W1^2)"] == pytest.approx(-2.0)
    assert vals["v1.A1*v1"] == pytest.approx(2.0)


def test_generator_values_symmetric():
    rng = np.random.default_rng(3)
    args = _random_args(rng, 2, 2, 2)
    descs = iso.generator_set(2, 2, 2)
    for g in iso.evaluate_generators(descs, args):
        m = g.as_matrix()
        assert abs(m[0, 1] - m[1, 0]) < 1e-12


def test_full_orthogonal_invariance_and_equivariance():
    rng = np.random.default_rng(4)
    qs = [rotation(a) for a in rng.uniform(0, 2 * np.pi, size=8)]
    qs += [reflection(a) for a in rng.uniform(0, np.pi, size=8)]
    inv_descs = iso.functional_basis(2, 2, 2)
    gen_descs = iso.generator_set(2, 2, 2)
    for _ in range(5):
        args = _random_args(rng, 2, 2, 2)
        base_inv = iso.evaluate_invariants(inv_descs, args)
        base_gen = [g.as_matrix() for g in iso.evaluate_generators(gen_descs, args)]
        for q in qs:
            qm = q.matrix
            moved = iso.ArgumentList(
                vectors=tuple(qm @ v for v in args.vectors),
                syms=tuple(qm @ a @ qm.T for a in args.syms),
                skews=tuple(qm @ w @ qm.T for w in args.skews))
            inv = iso.evaluate_invariants(inv_descs, moved)
            assert np.abs(np.array(inv) - np.array(base_inv)).max() < 1e-12
            gen = iso.evaluate_generators(gen_descs, moved)
            for g_moved, g_base in zip(gen, base_gen):
                assert np.abs(g_moved.as_matrix() - qm @ g_base @ qm.T).max() < 1e-12


def test_negative_counts_rejected():
    with pytest.raises(ValueError):
        iso.functional_basis(-1, 0, 0)
    with pytest.raises(ValueError):
        iso.generator_set(0, -1, 0)
