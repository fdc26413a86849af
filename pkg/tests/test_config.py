"""Admissibility, regularity ranks and configuration serialization."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentangle import (
    Configuration,
    StructuralError,
    check_admissible,
    check_mixed_admissible,
    check_regularity_rank,
    check_siegel,
    check_weak_hyperbolicity,
    configuration_from_dict,
    configuration_to_dict,
    hull_distance,
    load_configuration,
    origin_in_hull,
)
from _oracles import admissible_brute, origin_in_hull_brute
from conftest import roots_of_unity


def test_pentagon_is_admissible(pentagon):
    report = check_admissible(pentagon)
    assert report.siegel
    assert report.weak_hyperbolicity
    assert not report.degenerate
    assert report.admissible
    assert report.violating_subset is None
    assert report.hull_dimension == 2


def test_hexagon_m2_is_admissible(hexagon_m2):
    report = check_admissible(hexagon_m2)
    assert report.admissible
    assert report.hull_dimension == 4


def test_half_plane_configuration_fails_siegel():
    lam = np.exp(1j * np.linspace(-1.0, 1.0, 5)).reshape(5, 1)
    report = check_admissible(Configuration(lambdas=lam, kind="classical"))
    assert not report.siegel
    assert not report.admissible


def test_antipodal_pair_fails_weak_hyperbolicity():
    lam = np.array([1.0, -1.0, 1j, -0.5 + 0.8j]).reshape(4, 1)
    report = check_admissible(Configuration(lambdas=lam, kind="classical"))
    assert report.siegel
    assert not report.weak_hyperbolicity
    assert report.violating_subset == (0, 1)


def test_degeneracy_band_rejects_near_boundary():
    # A 2m-subset hull passing within (tol, 10 tol] of the origin: flag, reject.
    eps = 5e-9
    lam = np.array([1.0 + eps * 1j, -1.0 + eps * 1j, 1j, -1j * 0.7 + 0.01]).reshape(4, 1)
    report = check_admissible(Configuration(lambdas=lam, kind="classical"))
    assert report.weak_hyperbolicity  # no subset actually contains 0
    assert report.degenerate
    assert not report.admissible


def test_hull_distance_matches_hand_values():
    assert hull_distance(np.array([[1.0, 0.0], [-1.0, 0.0]])) <= 1e-12
    triangle = np.array([[1.0, 1.0], [2.0, 1.0], [1.0, 2.0]])
    assert hull_distance(triangle) == pytest.approx(1.0, abs=1e-9)
    assert origin_in_hull(np.array([[0.5, 0.0], [-0.25, 0.25], [0.0, -1.0]]))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_lp_verdicts_match_brute_hull_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 9))
    m = int(rng.integers(1, 3))
    lam = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    cfg = Configuration(lambdas=lam, kind="classical")
    siegel, _ = check_siegel(cfg)
    weak, _, _ = check_weak_hyperbolicity(cfg)
    siegel_b, weak_b = admissible_brute(cfg.realified_lambdas(), m)
    assert siegel == siegel_b
    assert weak == weak_b


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_admissibility_invariant_under_rotation_and_permutation(seed):
    rng = np.random.default_rng(seed)
    lam = rng.normal(size=(6, 1)) + 1j * rng.normal(size=(6, 1))
    cfg = Configuration(lambdas=lam, kind="classical")
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
    perm = rng.permutation(6)
    rotated = Configuration(lambdas=phase * lam[perm], kind="classical")
    assert check_admissible(cfg).admissible == check_admissible(rotated).admissible


def test_mixed_admissibility_needs_every_subset(mixed_general_m2):
    assert check_mixed_admissible(mixed_general_m2).admissible
    # Per-component fine, jointly broken: second row constant at 1 fails
    # Siegel for K = {1} (hull is the single point 1).
    lam = np.column_stack([roots_of_unity(5, (1,))[:, 0], np.ones(5)])
    bad = Configuration(lambdas=lam, kind="mixed-general")
    report = check_mixed_admissible(bad)
    assert not report.admissible
    assert (1,) in report.failing
    assert (0,) not in report.failing


def test_regularity_rank_frozen_values(pentagon):
    # Singleton: one nonzero column, complex rank 1.
    assert check_regularity_rank(pentagon, [0]) == 1
    # All lambdas equal: the columns coincide, rank stays 1.
    same = Configuration(lambdas=np.full((5, 1), 1j), kind="classical")
    assert check_regularity_rank(same, range(5)) == 1
    # A full admissible pentagon subset reaches the maximal rank m + 1.
    assert check_regularity_rank(pentagon, range(5)) == 2


def test_properties_and_sub_configuration(mixed_general_m2, mixed_s2):
    cfg = mixed_general_m2
    assert cfg.n == 7 and cfg.m == 2
    assert cfg.w_count == 2
    assert cfg.ambient_real_dim == 2 * (7 + 2)
    assert cfg.equation_count == 5
    assert cfg.manifold_dim == cfg.ambient_real_dim - cfg.equation_count
    sub = cfg.sub_configuration((1,))
    assert sub.kind == "classical" and sub.m == 1
    np.testing.assert_allclose(sub.lambdas[:, 0], cfg.lambdas[:, 1])

    assert mixed_s2.w_count == 2
    assert mixed_s2.equation_count == 3
    assert mixed_s2.manifold_dim == 2 * 5 + 2 * 2 - 3


def test_constructor_validation():
    lam = roots_of_unity(5, (1,))
    with pytest.raises(StructuralError):
        Configuration(lambdas=lam, kind="nonsense")
    with pytest.raises(StructuralError):
        Configuration(lambdas=lam[:3], kind="classical")  # n <= 3
    with pytest.raises(StructuralError):
        Configuration(lambdas=lam, kind="mixed-m1")  # missing s
    with pytest.raises(StructuralError):
        Configuration(lambdas=lam, kind="mixed-m1", s=0)
    with pytest.raises(StructuralError):
        Configuration(lambdas=roots_of_unity(5, (1, 2)), kind="mixed-m1", s=1)
    with pytest.raises(StructuralError):
        Configuration(lambdas=roots_of_unity(4, (1, 2)), kind="classical")  # n <= 2m
    # n = 5 > 2m = 4 is legal and must not raise.
    Configuration(lambdas=roots_of_unity(5, (1, 2)), kind="classical")


def test_serialization_round_trip(tmp_path, mixed_s2):
    data = configuration_to_dict(mixed_s2)
    again = configuration_from_dict(data)
    assert again.kind == mixed_s2.kind and again.s == mixed_s2.s
    np.testing.assert_allclose(again.lambdas, mixed_s2.lambdas)

    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    loaded = load_configuration(str(path))
    np.testing.assert_allclose(loaded.lambdas, mixed_s2.lambdas)


def test_loader_rejects_malformed_documents(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"m": 1, "n": 5, "kind": "classical"}))
    with pytest.raises(StructuralError):
        load_configuration(str(bad))
    bad.write_text(json.dumps({
        "m": 1, "n": 5, "kind": "classical",
        "lambdas": [[[1.0, 0.0]]] * 4,  # wrong row count
    }))
    with pytest.raises(StructuralError):
        load_configuration(str(bad))


def test_brute_hull_oracle_self_check():
    square = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
    assert origin_in_hull_brute(square)
    assert not origin_in_hull_brute(square + 2.0)
