import numpy as np
import pytest

import beamkit as bk

RING = 0.030
RADIUS = 0.1515


def paper_array():
    z = np.sqrt(RADIUS**2 - RING**2) - RADIUS
    return np.array([[RING, 0, z], [0, RING, z], [-RING, 0, z], [0, -RING, z], [0, 0, 0]])


def test_direction_roundtrip():
    d = bk.Direction.from_degrees(30.0, 45.0)
    assert d.theta_deg == pytest.approx(30.0)
    assert np.linalg.norm(d.unit_vector()) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        bk.Direction(-1.0, 0.0)


def test_plane_wave_has_unit_magnitude():
    v = bk.plane_wave_steering(paper_array(), 1000.0, bk.Direction.from_degrees(90, 0))
    assert v.shape == (5,)
    np.testing.assert_allclose(np.abs(v), 1.0, atol=1e-14)


def test_free_field_coherence_is_sinc():
    mics = paper_array()
    f = 2000.0
    psi = bk.coherence(mics, f, n_theta=32, n_phi=64)
    k = 2 * np.pi * f / 343.0
    d = np.linalg.norm(mics[:, None, :] - mics[None, :, :], axis=-1)
    np.testing.assert_allclose(psi.real, np.sinc(k * d / np.pi), atol=1e-9)
    np.testing.assert_allclose(bk.diffuse_sinc_coherence(mics, f), np.sinc(k * d / np.pi), atol=1e-14)


def test_rigid_sphere_limits():
    assert abs(bk.rigid_sphere_surface_pressure(0.001, 1.0)) == pytest.approx(1.0, abs=1e-3)
    assert abs(bk.rigid_sphere_surface_pressure(20.0, 1.0)) == pytest.approx(2.0, rel=0.05)


def test_robust_mvdr_on_the_sphere_surrogate():
    mics = paper_array()
    sphere = bk.RigidSphere(RADIUS, np.array([0.0, 0.0, -RADIUS]))
    look = bk.Direction.from_degrees(30, 0)
    for f in (300.0, 3000.0):
        psi = bk.coherence(mics, f, sphere=sphere, n_theta=32, n_phi=64)
        v = bk.rigid_sphere_steering(mics, sphere, f, look)
        w, diag = bk.robust_mvdr(psi, v, gamma_db=-25.0)
        assert abs(np.vdot(w, v) - 1.0) < 1e-10
        assert 10 * np.log10(bk.white_noise_gain(w, v)) >= -25.0 - 1e-5
        assert diag["wng"] == pytest.approx(bk.white_noise_gain(w, v))
        assert bk.array_gain(w, v, psi) > 0.0
        assert bk.macc(psi, v) > 0.0


def test_infeasible_floor_raises():
    v = np.ones(3, dtype=complex)
    with pytest.raises(ValueError):
        bk.robust_mvdr(np.eye(3, dtype=complex), v, gamma_db=10.0)


def test_bem_sphere_against_series():
    mesh = bk.make_icosphere(2, 1.0)
    ka = 1.0
    p = bk.solve_scattering(mesh, ka * 343.0 / (2 * np.pi), bk.Direction(0.0, 0.0))
    c = mesh.centroids()
    cos_g = c[:, 2] / np.linalg.norm(c, axis=1)
    ref = np.array([bk.rigid_sphere_surface_pressure(ka, x) for x in cos_g])
    err = np.linalg.norm(p - ref) / np.linalg.norm(ref)
    assert len(mesh) == 320
    assert err < 0.05
