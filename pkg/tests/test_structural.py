import json
import math

import numpy as np
import pytest

from tensorrep import pointgroups as pg
from tensorrep import structural as st
from tensorrep.tensor2d import apply_transform, reflection, rotation


def test_all_twelve_sets_exist():
    for gid in pg.GROUP_IDS:
        s = st.structural_set(gid)
        assert s.group_id == gid
        assert s.match_mode in ("set", "each")


def test_match_modes():
    # low-order sets must match per element, the rest as a set
    for gid in ("C1", "C1v", "C2", "C2v", "Cinf", "Cinf_v"):
        assert st.structural_set(gid).match_mode == "each"
    for gid in ("C3", "C3v", "C4", "C4v", "C6", "C6v"):
        assert st.structural_set(gid).match_mode == "set"


def test_c3_vectors():
    s = st.structural_set("C3")
    vals = {el.label: el.payload for el in s.elements}
    sq3 = math.sqrt(3.0) / 2.0
    assert np.allclose(vals["v1"].as_array(), [0.0, 1.0])
    assert np.allclose(vals["v2"].as_array(), [sq3, -0.5])
    assert np.allclose(vals["v3"].as_array(), [-sq3, -0.5])


def test_c6_tensors_are_projectors_summing_to_three_halves_identity():
    s = st.structural_set("C6v")
    ms = [el.payload.as_matrix() for el in s.elements]
    for m in ms:
        assert np.abs(m @ m - m).max() < 1e-12  # rank-1 projector
    assert np.abs(sum(ms) - 1.5 * np.eye(2)).max() < 1e-12


def test_c4_tensors_sum_to_identity():
    s = st.structural_set("C4v")
    total = sum(el.payload.as_matrix() for el in s.elements)
    assert np.abs(total - np.eye(2)).max() < 1e-12


def test_induced_action_permutation():
    s = st.structural_set("C4")
    act = st.induced_action(s, rotation(math.pi / 2.0))
    assert act.perm == (1, 0, 2)  # M1 <-> M2, eps fixed
    with pytest.raises(st.NotClosedError):
        st.induced_action(s, rotation(0.1))


def test_reflection_not_closed_for_eps_bearing_set():
    # eps flips sign under reflections, so no +1 match exists
    for gid in ("C2", "C3", "C4", "C6", "Cinf"):
        s = st.structural_set(gid)
        with pytest.raises(st.NotClosedError):
            st.induced_action(s, reflection(0.0))


def test_characterized_group_matches_group(tiny_grid=720):
    for gid in ("C2", "C3v", "C4",):
        s = st.structural_set(gid)
        stab = st.characterized_group(s, grid_n=tiny_grid)
        g = pg.group(gid)
        want = sorted(pg.element_name(e) for e in g.elements)
        got = sorted(pg.element_name(q) for q in stab)
        assert got == want


def test_zheng_tensor_orders():
    assert st.zheng_tensor(2).as_matrix()[0, 0] == 1.0
    assert st.zheng_tensor(3).components.shape == (2, 2, 2)
    assert st.zheng_tensor(4).components.shape == (2, 2, 2, 2)
    assert st.zheng_tensor(6).components.shape == (2,) * 6
    with pytest.raises(ValueError):
        st.zheng_tensor(5)


def test_zheng_invariance_each_element():
    for n in (2, 4, 6):
        p = st.zheng_tensor(n)
        g = st.zheng_invariance_group(n)
        for q in g.elements:
            moved = apply_transform(q, p)
            if hasattr(p, "components"):
                assert np.abs(moved.components - p.components).max() < 1e-12
            else:
                assert np.abs(moved.as_matrix() - p.as_matrix()).max() < 1e-12


def test_p3_invariance_group_is_conjugate_of_c3v():
    g = st.zheng_invariance_group(3)
    assert g.order == 6
    axes = sorted(e.angle for e in g.elements if e.kind == "reflection")
    assert np.allclose(axes, [0.0, math.pi / 3.0, 2.0 * math.pi / 3.0], atol=1e-9)
    p = st.zheng_tensor(3)
    for q in g.elements:
        assert np.abs(apply_transform(q, p).components - p.components).max() < 1e-12
    # the canonical C3v orientation (mirror at pi/2) does NOT fix P3
    dev = np.abs(apply_transform(reflection(math.pi / 2.0), p).components
                 - p.components).max()
    assert dev > 0.1


def test_set_to_json_round_trip():
    s = st.structural_set("C6")
    doc = json.loads(st.set_to_json(s))
    assert doc["group"] == "C6"
    assert [el["label"] for el in doc["elements"]] == ["M1", "M2", "M3", "eps"]
