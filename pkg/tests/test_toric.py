"""Gale polytopes, moment images, the infimum constant and star-shapedness."""

import numpy as np
import pytest

from momentangle import (
    Configuration,
    NumericalError,
    StructuralError,
    big_moment_map,
    estimate_c,
    fiber_polytope,
    gale_transform,
    moment_image_check,
    moment_map,
    star_shaped_check,
)
from _oracles import c_exact
from conftest import roots_of_unity


def assert_same_vertex_set(first, second, tol: float = 1e-8) -> None:
    """Greedy nearest-neighbor matching; sorting rows would let floating
    noise in tied leading coordinates scramble the pairing."""
    a = np.asarray(first, dtype=float)
    b = np.asarray(second, dtype=float)
    assert a.shape == b.shape
    unmatched = list(range(len(b)))
    for row in a:
        dists = [np.linalg.norm(b[j] - row) for j in unmatched]
        best = int(np.argmin(dists))
        assert dists[best] <= tol, (row, b[unmatched])
        unmatched.pop(best)


def test_gale_pentagon_polygon(pentagon):
    poly = gale_transform(pentagon)
    assert poly.dim == 5 - 2 * 1 - 1
    assert len(poly.vertices) == 5
    for v in poly.vertices:
        assert np.all(np.asarray(v) >= -1e-10)
        assert np.sum(v) == pytest.approx(1.0, abs=1e-9)
        assert np.abs(pentagon.lambdas[:, 0] @ np.asarray(v)) <= 1e-9


def test_gale_dimension_formula(hexagon_m2, mixed_general_m2):
    assert gale_transform(hexagon_m2).dim == 6 - 4 - 1
    assert gale_transform(mixed_general_m2).dim == 7 - 4 - 1


def test_gale_scaling_is_irrelevant(pentagon):
    a = gale_transform(pentagon, c=1.0)
    b = gale_transform(pentagon, c=0.25)
    assert a.dim == b.dim
    assert_same_vertex_set(a.vertices, b.vertices)


def test_gale_rejects_bad_inputs(pentagon):
    with pytest.raises(StructuralError):
        gale_transform(pentagon, c=0.0)
    half_plane = Configuration(
        lambdas=np.exp(1j * np.linspace(-1, 1, 5)).reshape(-1, 1), kind="classical"
    )
    with pytest.raises((StructuralError, NumericalError)):
        gale_transform(half_plane)


def test_polytope_contains_its_vertices(mixed_general_m2):
    poly = gale_transform(mixed_general_m2)
    for v in poly.vertices:
        assert poly.contains(v)
    assert not poly.contains(np.full(7, 1.0))
    payload = poly.to_dict()
    assert set(payload) >= {"equalities", "inequalities", "dim", "vertices"}


def test_fiber_polytope_specializes_to_gale(mixed_general_m2):
    fiber = fiber_polytope(mixed_general_m2, np.zeros(2))
    gale = gale_transform(mixed_general_m2, c=1.0)
    assert fiber.dim == gale.dim
    assert_same_vertex_set(fiber.vertices, gale.vertices)


def test_fiber_polytope_validation(mixed_general_m2, pentagon):
    with pytest.raises(StructuralError):
        fiber_polytope(pentagon, np.zeros(1))
    with pytest.raises(StructuralError):
        fiber_polytope(mixed_general_m2, np.zeros(3))
    with pytest.raises(StructuralError):
        fiber_polytope(mixed_general_m2, np.array([1.0, 0.1]))  # |w|^2 >= 1


def test_fiber_polytope_carries_certified_points(mixed_general_m2, batch):
    for point in batch(mixed_general_m2, 5):
        w, t = big_moment_map(mixed_general_m2, point)
        fiber = fiber_polytope(mixed_general_m2, w)
        assert fiber.contains(t, tol=1e-8)


def test_moment_map_accessors(mixed_general_m2, pentagon, batch):
    point = batch(mixed_general_m2, 1)[0]
    w = moment_map(mixed_general_m2, point)
    assert w.shape == (2,)
    np.testing.assert_array_equal(w, point.w_block(mixed_general_m2))
    with pytest.raises(StructuralError):
        moment_map(pentagon, batch(pentagon, 1)[0])


def test_moment_image_check_on_samples(mixed_general_m2, batch):
    for point in batch(mixed_general_m2, 6):
        report = moment_image_check(mixed_general_m2, point)
        assert report.constraint_residual <= 1e-9
        assert report.in_orbit_polytope
        assert report.hull_member
        assert report.w_bound_ok is None
        bounded = moment_image_check(
            mixed_general_m2, point, c_estimate=c_exact(mixed_general_m2.lambdas)
        )
        assert bounded.w_bound_ok


def test_estimate_c_matches_closed_form(mixed_general_m1):
    estimate = estimate_c(mixed_general_m1, samples=60, seed=4)
    exact = c_exact(mixed_general_m1.lambdas)
    assert exact == pytest.approx(0.5)
    assert 0.0 < estimate.value < 1.0
    # estimates from feasible points can only sit above the true infimum
    assert estimate.value >= exact - 1e-9
    assert estimate.value == pytest.approx(exact, abs=0.05)
    assert estimate.samples_used == 60


def test_estimate_c_mixed_m2(mixed_general_m2):
    estimate = estimate_c(mixed_general_m2, samples=40, seed=2)
    exact = c_exact(mixed_general_m2.lambdas)
    assert estimate.value >= exact - 1e-9
    assert estimate.value == pytest.approx(exact, abs=0.08)


def test_estimate_c_requires_mixed_admissible():
    lam = np.column_stack([roots_of_unity(5, (1,))[:, 0], np.ones(5)])
    bad = Configuration(lambdas=lam, kind="mixed-general")
    with pytest.raises(StructuralError):
        estimate_c(bad, samples=5)


def test_star_shaped_grid(mixed_general_m2):
    report = star_shaped_check(mixed_general_m2, samples=6, ray_steps=8, seed=1)
    assert report.passed
    assert report.rays_checked == 6
    assert report.steps_per_ray == 8
    assert report.violations == ()
