import numpy as np
import pytest

import bpgauge as bg


def test_lattice_shapes():
    g = bg.square(3, 4)
    assert g.num_vertices == 12
    assert g.num_edges == 17
    assert bg.random_tree(9, 2).is_tree()
    assert bg.cubic(2, 2, 2).num_edges == 12


def test_bp_gauge_preserves_state():
    st = bg.random_tns(bg.square(3, 3), chi=2, d=2, seed=3)
    vs, report = bg.bp_gauge(st, target_delta=1e-12)
    assert report.converged
    assert len(report.deltas) == report.iterations
    assert bg.vidal_distance(vs) < 1e-9
    assert bg.relative_amplitude_error(st.state_vector(), vs.state_vector()) < 1e-10
    for lam in vs.lambdas:
        assert lam.sum() == pytest.approx(1.0)
        assert np.all(np.diff(lam) <= 1e-15)


def test_routines_share_fixed_point():
    st = bg.random_tns(bg.square(3, 3), chi=2, seed=5)
    a, ra = bg.bp_gauge(st, target_delta=1e-10)
    b, rb = bg.eager_gauge(st, target_delta=1e-10)
    c, _ = bg.simple_update_gauge(st, target_delta=1e-10)
    assert ra.iterations == rb.iterations
    for la, lb, lc in zip(a.lambdas, b.lambdas, c.lambdas):
        assert bg.spectrum_distance(la, lb) < 1e-6
        assert bg.spectrum_distance(la, lc) < 1e-6


def test_tree_expectations_exact():
    g = bg.random_tree(7, 4)
    st = bg.random_tns(g, chi=3, seed=4)
    vs, _ = bg.bp_gauge(st, target_delta=1e-12)
    sx = np.array([[0, 0.5], [0.5, 0]], dtype=complex)
    for v in range(g.num_vertices):
        assert abs(bg.rank_one_expectation(vs, "sz", v) - bg.exact_expectation(st, "sz", v)) < 1e-9
        assert abs(bg.rank_one_expectation(vs, sx, v) - bg.exact_expectation(st, "sx", v)) < 1e-9


def test_save_load_roundtrip(tmp_path):
    st = bg.random_tns(bg.hexagonal(1, 2), chi=2, seed=1)
    path = str(tmp_path / "state.tns")
    bg.save_tns(path, st)
    back = bg.load_tns(path)
    assert back.bond_dims == st.bond_dims
    assert np.allclose(back.state_vector(), st.state_vector())


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        bg.random_regular(5, 3, 1)
    with pytest.raises(ValueError):
        bg.bp_gauge(bg.random_tns(bg.path(3), chi=2), schedule="sometimes")


def test_cli_in_process():
    code, out, err = bg.run_cli("gauge", ["L=3", "chi=2"])
    assert code == 0, err
    assert out.startswith("# bpgauge gauge")
    code, _, err = bg.run_cli("gauge", ["bogus=1"])
    assert code == 3
    assert "bogus" in err
