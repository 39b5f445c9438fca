import json

import numpy as np
import pytest

from spinwrithe import grid_field as gf


def test_grid_basic():
    g = gf.Grid(-30.0, 30.0, 512)
    assert g.h == pytest.approx(60.0 / 511)
    s = g.s
    assert s.shape == (512,)
    assert s[0] == -30.0 and s[-1] == 30.0
    assert np.allclose(np.diff(s), g.h)


def test_grid_rejects_bad_bounds_and_size():
    with pytest.raises(ValueError):
        gf.Grid(1.0, -1.0, 64)
    with pytest.raises(ValueError):
        gf.Grid(0.0, 0.0, 64)
    with pytest.raises(ValueError):
        gf.Grid(-1.0, 1.0, 4)


def test_spin_field_validation():
    g = gf.Grid(-10.0, 10.0, 64)
    theta = np.zeros(64)
    phi = np.zeros(64)
    gf.SpinField(g, theta, phi)  # ok

    with pytest.raises(ValueError):
        gf.SpinField(g, theta[:-1], phi)
    with pytest.raises(ValueError):
        gf.SpinField(g, theta + np.nan, phi)
    with pytest.raises(ValueError):
        gf.SpinField(g, theta - 0.1, phi)  # theta < 0
    with pytest.raises(ValueError):
        gf.SpinField(g, theta + np.pi + 0.1, phi)  # theta > pi


def test_boundary_decay_enforced():
    g = gf.Grid(-10.0, 10.0, 64)
    theta = np.full(64, 0.5)  # does not decay at the ends
    with pytest.raises(gf.BoundaryDecayError):
        gf.SpinField(g, theta, np.zeros(64))


def test_ground_state_is_trivial():
    g = gf.Grid(-10.0, 10.0, 64)
    f = gf.ground_state(g)
    assert np.all(f.theta == 0.0)
    assert np.all(f.phi == 0.0)


def test_twist_profile_shape_and_decay():
    g = gf.Grid(-30.0, 30.0, 512)
    f = gf.twist_profile(g, np.pi / 2, 2.0, 2 * np.pi, 1.0, 0.0)
    # the grid has no node exactly at s0, so the sampled max sits slightly
    # below the profile peak
    assert f.theta.max() == pytest.approx(np.pi / 2, abs=1e-2)
    # phi winds by dphi across the domain
    assert f.phi[-1] - f.phi[0] == pytest.approx(2 * np.pi, abs=1e-9)
    assert f.theta[0] <= f.eps_bc and f.theta[-1] <= f.eps_bc


def test_random_field_deterministic_and_valid():
    g = gf.Grid(-20.0, 20.0, 256)
    a = gf.random_field(g, seed=1)
    b = gf.random_field(g, seed=1)
    assert np.array_equal(a.theta, b.theta)
    assert np.array_equal(a.phi, b.phi)
    c = gf.random_field(g, seed=2)
    assert not np.array_equal(a.theta, c.theta)
    # envelope forces exact decay at the end nodes
    assert a.theta[0] == 0.0 and a.theta[-1] == 0.0


def test_rescale_stretches_grid_keeps_samples():
    g = gf.Grid(-30.0, 30.0, 512)
    f = gf.twist_profile(g, 1.0, 2.0, 2 * np.pi, 1.0, 0.0)
    f2 = gf.rescale(f, 2.0)
    assert f2.grid.s_min == -60.0 and f2.grid.s_max == 60.0
    assert f2.grid.n == g.n
    assert np.array_equal(f2.theta, f.theta)
    assert np.array_equal(f2.phi, f.phi)
    with pytest.raises(ValueError):
        gf.rescale(f, 0.0)


def test_unit_vector_round_trip():
    g = gf.Grid(-30.0, 30.0, 512)
    f = gf.twist_profile(g, 1.2, 1.8, 3 * np.pi, 1.5, 0.0)
    n = gf.to_unit_vectors(f)
    assert np.allclose(np.linalg.norm(n, axis=1), 1.0, atol=1e-14)
    f2 = gf.from_unit_vectors(g, n, eps_bc=f.eps_bc)
    # arccos is ill-conditioned at the poles: tight agreement away from
    # them, square-root-of-eps agreement close to them
    assert np.allclose(f2.theta, f.theta, atol=1e-7)
    interior = np.sin(f.theta) > 1e-3
    assert np.allclose(f2.theta[interior], f.theta[interior], atol=1e-12)
    # phi is only defined mod 2*pi where sin(theta) ~ 0
    mask = np.sin(f.theta) > 1e-6
    assert np.allclose(np.cos(f2.phi[mask]), np.cos(f.phi[mask]), atol=1e-12)
    assert np.allclose(np.sin(f2.phi[mask]), np.sin(f.phi[mask]), atol=1e-12)


def test_save_load_round_trip(tmp_path):
    g = gf.Grid(-20.0, 20.0, 128)
    f = gf.random_field(g, seed=7)
    p = tmp_path / "field.json"
    gf.save_field(f, p)
    f2 = gf.load_field(p)
    assert f2.grid == f.grid
    assert np.array_equal(f2.theta, f.theta)
    assert np.array_equal(f2.phi, f.phi)
    # the file is plain JSON
    with open(p) as fh:
        doc = json.load(fh)
    assert set(doc) >= {"grid", "theta", "phi"}
