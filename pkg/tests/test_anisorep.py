import json
import math

import numpy as np
import pytest

from tensorrep import anisorep as ar
from tensorrep import exprdsl
from tensorrep.pointgroups import group
from tensorrep.tensor2d import SymTensor2

ALL_GROUPS = ("C1", "C1v", "C2", "C2v", "C3", "C3v", "C4", "C4v", "C6", "C6v",
              "Cinf", "Cinf_v")


def _random_poly(rng, names):
    terms = [f"{rng.uniform(-1, 1):.4f}"]
    for n in names:
        terms.append(f"{rng.uniform(-1, 1):.4f}*{n}")
        terms.append(f"{rng.uniform(-1, 1):.4f}*{n}^2")
    return " + ".join(terms)


def _models(gid, seed=0, kind="tensor"):
    rng = np.random.default_rng(seed)
    spec = ar.representation_spec(gid)
    names = ar.invariant_names(spec)
    n = 1 if kind == "scalar" else len(spec.generators)
    return spec, ar.symmetrize(spec, [_random_poly(rng, names) for _ in range(n)], kind)


@pytest.mark.parametrize("gid", ALL_GROUPS)
def test_spec_shapes(gid):
    spec = ar.representation_spec(gid)
    assert len(spec.invariants) >= 2
    assert len(spec.generators) >= 2
    if gid in ("C3", "C3v", "C4", "C4v", "C6", "C6v"):
        assert len(spec.actions) == len(group(gid).generators)
    else:
        assert spec.actions == ()  # elements individually invariant


@pytest.mark.parametrize("gid", ("C3", "C3v", "C4", "C4v", "C6", "C6v"))
def test_slot_actions_match_substitution(gid):
    spec = ar.representation_spec(gid)
    assert ar.action_consistency_check(spec, group(gid)) < 1e-12


@pytest.mark.parametrize("gid", ALL_GROUPS)
def test_symmetrized_models_are_equivariant(gid):
    for kind in ("tensor", "scalar"):
        _, m = _models(gid, seed=1, kind=kind)
        assert ar.equivariance_residual(m, n_samples=25, continuous_samples=32) < 1e-9


def test_symmetrize_is_idempotent_in_value():
    # re-averaging the averaged coefficients changes nothing numerically
    spec, m = _models("C6v", seed=2)
    m2 = ar.symmetrize(spec, m.coeffs, "tensor")
    rng = np.random.default_rng(0)
    for _ in range(10):
        a, b, c = rng.uniform(-1, 1, size=3)
        cm = np.array([[a, c], [c, b]])
        assert np.abs(ar.coefficient_values(m, cm)
                      - ar.coefficient_values(m2, cm)).max() < 1e-12


def test_constraint_residuals_zero_for_symmetrized():
    for gid in ("C3", "C3v", "C4", "C4v", "C6", "C6v"):
        for kind in ("tensor", "scalar"):
            _, m = _models(gid, seed=3, kind=kind)
            res = ar.constraint_residuals(m, n_samples=25)
            assert res, gid
            assert max(res.values()) < 1e-12


def test_unsymmetrized_control_fails():
    rng = np.random.default_rng(4)
    spec = ar.representation_spec("C4")
    names = ar.invariant_names(spec)
    m = ar.unsymmetrized_model(
        spec, [_random_poly(rng, names) for _ in spec.generators], "tensor")
    assert ar.equivariance_residual(m, n_samples=25) > 1e-3


def test_arity_and_variable_validation():
    spec = ar.representation_spec("C4v")
    with pytest.raises(ValueError):
        ar.symmetrize(spec, ["I1", "I2"], "tensor")  # needs 3
    with pytest.raises(ValueError):
        ar.symmetrize(spec, ["I9"], "scalar")  # unknown invariant
    with pytest.raises(ValueError):
        ar.symmetrize(spec, ["I1"], "field")


def test_eval_tensor_rejects_asymmetric_c():
    _, m = _models("C4", seed=5)
    with pytest.raises(ValueError):
        ar.eval_tensor(m, np.array([[1.0, 0.3], [0.2, 1.0]]))


def test_eval_accepts_symtensor():
    _, m = _models("C4", seed=6)
    c = SymTensor2(1.2, 0.8, 0.1)
    t1 = ar.eval_tensor(m, c)
    t2 = ar.eval_tensor(m, c.as_matrix())
    assert np.abs(t1.as_matrix() - t2.as_matrix()).max() < 1e-15


def test_stress_matches_finite_differences():
    rng = np.random.default_rng(7)
    for gid in ("C3v", "C4", "C6v", "C2", "Cinf_v"):
        spec, m = _models(gid, seed=8, kind="scalar")
        c = np.eye(2) + 0.3 * _rand_sym(rng)
        t = ar.stress_from_potential(m, c).as_matrix()
        fd = _fd_stress(m, c)
        assert np.abs(fd - t).max() <= 1e-5 * max(1.0, np.abs(t).max())


def _rand_sym(rng):
    a, b, c = rng.uniform(-1, 1, size=3)
    return np.array([[a, c], [c, b]])


def _fd_stress(m, c, h=1e-6):
    def psi(cm):
        return ar.eval_scalar(m, cm)

    fd = np.zeros((2, 2))
    for i in (0, 1):
        dp, dm = c.copy(), c.copy()
        dp[i, i] += h
        dm[i, i] -= h
        fd[i, i] = 2.0 * (psi(dp) - psi(dm)) / (2.0 * h)
    dp, dm = c.copy(), c.copy()
    dp[0, 1] += h
    dp[1, 0] += h
    dm[0, 1] -= h
    dm[1, 0] -= h
    fd[0, 1] = fd[1, 0] = (psi(dp) - psi(dm)) / (2.0 * h)
    return fd


def test_laue_pairs_for_scalars():
    for src, dst in (("C3", "C6"), ("C3v", "C6v"), ("C1", "C2"), ("C1v", "C2v")):
        _, m = _models(src, seed=9, kind="scalar")
        assert ar.equivariance_residual(m, n_samples=25,
                                        group_override=group(dst)) < 1e-9


def test_identity_argument_is_isotropic_point_for_c4v_c6v():
    for gid in ("C4v", "C6v"):
        _, m = _models(gid, seed=10)
        t = ar.eval_tensor(m, np.eye(2)).as_matrix()
        assert abs(t[0, 1]) < 1e-12
        assert abs(t[0, 0] - t[1, 1]) < 1e-12


def test_model_json_round_trip(tmp_path):
    spec, m = _models("C3v", seed=11, kind="scalar")
    path = tmp_path / "model.json"
    path.write_text(ar.model_to_json(m))
    m2 = ar.load_model(str(path))
    c = np.array([[1.1, 0.2], [0.2, 0.7]])
    assert ar.eval_scalar(m2, c) == pytest.approx(ar.eval_scalar(m, c), rel=1e-12)
    # byte-identical serialization
    assert ar.model_to_json(m2) == ar.model_to_json(m)


def test_model_file_validation(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"group": "C4", "free": ["I1"]}))
    with pytest.raises(ValueError):
        ar.load_model(str(path))


def test_non_finite_invariant_rejected():
    _, m = _models("C4", seed=12, kind="scalar")
    with pytest.raises(ValueError):
        ar.eval_scalar(m, np.array([[math.inf, 0.0], [0.0, 1.0]]))


def test_coefficients_are_expressions():
    spec, m = _models("C6", seed=13)
    for e in m.coeffs:
        assert isinstance(e, exprdsl.Expr)
        assert exprdsl.variables(e) <= set(ar.invariant_names(spec))
