"""Group actions, the leafwise flow and the 2^m branched covering."""

import numpy as np
import pytest

from momentangle import (
    GroupElement,
    NumericalError,
    StructuralError,
    branched_cover,
    closed_form_kernel_vector,
    fiber_count,
    fiber_points,
    foliation_flow,
    isotropy_stratum,
    quadric_values,
    ray_radius,
    sign_act,
    sign_orbit,
    torus_act,
)


def test_torus_action_preserves_link(mixed_general_m2, batch):
    rng = np.random.default_rng(1)
    point = batch(mixed_general_m2, 1)[0]
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, mixed_general_m2.n))
    moved = torus_act(mixed_general_m2, point, phases)
    assert moved.residual_norm <= 1e-10
    np.testing.assert_array_equal(moved.w_block(mixed_general_m2),
                                  point.w_block(mixed_general_m2))
    np.testing.assert_allclose(np.abs(moved.z_block(mixed_general_m2)),
                               np.abs(point.z_block(mixed_general_m2)), atol=1e-12)


def test_torus_action_rejects_non_unit_phases(pentagon, batch):
    point = batch(pentagon, 1)[0]
    with pytest.raises(StructuralError):
        torus_act(pentagon, point, np.full(5, 1.0 + 1e-6))


def test_sign_action_orbit(mixed_general_m2, batch):
    point = batch(mixed_general_m2, 1)[0]
    flipped = sign_act(mixed_general_m2, point, np.array([-1.0, 1.0]))
    np.testing.assert_allclose(flipped.w_block(mixed_general_m2)[0],
                               -point.w_block(mixed_general_m2)[0], atol=1e-12)
    orbit = sign_orbit(mixed_general_m2, point)
    assert len(orbit) == 4
    # involution
    back = sign_act(mixed_general_m2, flipped, np.array([-1.0, 1.0]))
    np.testing.assert_allclose(back.coordinates, point.coordinates, atol=1e-12)


def test_sign_action_validation(pentagon, mixed_general_m2, batch):
    with pytest.raises(StructuralError):
        sign_act(pentagon, batch(pentagon, 1)[0], np.array([1.0]))
    point = batch(mixed_general_m2, 1)[0]
    with pytest.raises(StructuralError):
        sign_act(mixed_general_m2, point, np.array([0.5, 1.0]))


def test_sign_orbit_halves_on_stratum(mixed_general_m2, batch):
    point = batch(mixed_general_m2, 1, (0,))[0]
    assert len(sign_orbit(mixed_general_m2, point)) == 2


def test_foliation_flow_velocity(pentagon, batch):
    """d/dt flow(tT) at t = 0 equals the closed-form leaf vector v(T, 0)."""
    point = batch(pentagon, 1)[0]
    T = np.array([0.4 - 0.9j])
    eps = 1e-7
    moved = foliation_flow(pentagon, point, eps * T)
    velocity = (moved.coordinates - point.coordinates) / eps
    expected = closed_form_kernel_vector(pentagon, point.coordinates, T, 0.0)
    np.testing.assert_allclose(velocity, expected, atol=1e-6)


def test_foliation_flow_group_law(pentagon, batch):
    point = batch(pentagon, 1)[0]
    a, b = np.array([0.3 + 0.1j]), np.array([-0.2 + 0.5j])
    one = foliation_flow(pentagon, foliation_flow(pentagon, point, a), b)
    two = foliation_flow(pentagon, point, a + b)
    np.testing.assert_allclose(one.coordinates, two.coordinates, atol=1e-10)


def test_group_element_composition(mixed_general_m2, batch):
    point = batch(mixed_general_m2, 1)[0]
    rng = np.random.default_rng(3)
    g = GroupElement(
        torus_part=np.exp(1j * rng.uniform(0, 2 * np.pi, 7)),
        sign_part=np.array([-1.0, -1.0]),
    )
    moved = g.apply(mixed_general_m2, point)
    assert moved.residual_norm <= 1e-10
    with pytest.raises(StructuralError):
        GroupElement(torus_part=np.array([2.0 + 0j]))
    with pytest.raises(StructuralError):
        GroupElement(sign_part=np.array([0.0]))


def test_branched_cover_lands_on_sphere(mixed_general_m2, batch):
    for point in batch(mixed_general_m2, 3):
        zhat = branched_cover(mixed_general_m2, point)
        assert np.linalg.norm(zhat) == pytest.approx(1.0, abs=1e-12)


def test_ray_radius_solves_sphere_equation(mixed_general_m2):
    rng = np.random.default_rng(5)
    zhat = rng.normal(size=7) + 1j * rng.normal(size=7)
    zhat /= np.linalg.norm(zhat)
    r = ray_radius(mixed_general_m2, zhat)
    F = quadric_values(mixed_general_m2, zhat)
    # |w_k|^2 = r^2 |F_k| on the candidate point; total norm must be 1
    assert r**2 * (1.0 + np.sum(np.abs(F))) == pytest.approx(1.0, abs=1e-12)


def test_fiber_count_generic_and_stratified(mixed_general_m2, batch):
    rng = np.random.default_rng(6)
    zhat = rng.normal(size=7) + 1j * rng.normal(size=7)
    count = fiber_count(mixed_general_m2, zhat)
    assert count.count == 4
    assert not count.near_branch
    assert len(count.quadric_magnitudes) == 2

    # a direction from the classical sub-link: all F_k = 0, single preimage
    stratum_point = batch(mixed_general_m2, 1, (0, 1))[0]
    zdir = stratum_point.z_block(mixed_general_m2)
    stratified = fiber_count(mixed_general_m2, zdir)
    assert stratified.count == 1

    # one quadric switched off: 2 preimages
    half = batch(mixed_general_m2, 1, (0,))[0]
    assert fiber_count(mixed_general_m2, half.z_block(mixed_general_m2)).count == 2


def test_fiber_points_match_count(mixed_general_m2):
    rng = np.random.default_rng(7)
    for _ in range(3):
        zhat = rng.normal(size=7) + 1j * rng.normal(size=7)
        count = fiber_count(mixed_general_m2, zhat)
        points = fiber_points(mixed_general_m2, zhat)
        assert len(points) == count.count
        for p in points:
            assert p.residual_norm <= 1e-10
            # all preimages project back to the same direction
            np.testing.assert_allclose(
                branched_cover(mixed_general_m2, p),
                zhat / np.linalg.norm(zhat),
                atol=1e-9,
            )


def test_fiber_near_branch_flag(mixed_general_m2):
    """The flag trips exactly when a magnitude is within 10x of the branch
    tolerance (either side); steering the tolerance makes this deterministic."""
    rng = np.random.default_rng(8)
    zhat = rng.normal(size=7) + 1j * rng.normal(size=7)
    pivot = fiber_count(mixed_general_m2, zhat).quadric_magnitudes[0]
    assert pivot > 0
    assert fiber_count(mixed_general_m2, zhat, tol=pivot / 2.0).near_branch
    assert fiber_count(mixed_general_m2, zhat, tol=pivot * 2.0).near_branch
    assert not fiber_count(mixed_general_m2, zhat, tol=pivot / 1e6).near_branch


def test_isotropy_stratum(mixed_general_m2, batch):
    generic = batch(mixed_general_m2, 1)[0]
    assert isotropy_stratum(mixed_general_m2, generic) == ()
    on_stratum = batch(mixed_general_m2, 1, (1,))[0]
    assert isotropy_stratum(mixed_general_m2, on_stratum) == (1,)
    full = batch(mixed_general_m2, 1, (0, 1))[0]
    assert isotropy_stratum(mixed_general_m2, full) == (0, 1)
