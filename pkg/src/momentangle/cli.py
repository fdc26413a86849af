"""Command-line frontend: reproducible verification runs and reports.

Commands
--------
check     admissibility of a configuration file (exit 0/1)
verify    sample every stratum and check the kernel/volume propositions
classify  diffeomorphism type from weights or from a configuration
gale      Gale-transform polytope (dimension, vertices)
cover     branched-cover fiber counts over sphere directions
count     number of weight cycles N(n) up to rotation (or +reflection)
sample    draw and certify points, optionally on a stratum

Exit codes: 0 = pass, 1 = verification or admissibility failure,
2 = usage/parse/structural error.  All numbers print with 17 significant
digits; pass ``--json PATH`` to write a canonical JSON report whose bytes
depend only on the manifest (config, seed, tolerances, flags, timestamp).
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .config import (
    check_admissible,
    check_mixed_admissible,
    configuration_to_dict,
    load_configuration,
)
from .errors import NumericalError, ProjectionError, SamplingBudgetError, StructuralError
from .forms import (
    contact_volume_scale,
    expected_kernel_dims,
    kernel_analysis,
    kernel_family_angle,
    leaf_two_form_magnitude,
    orientation_sign,
    symplectic_leaf_rank,
)
from .report import RunManifest, build_report, canonical_json, format_float, sha256_hex
from .topology import CyclicWeights, classify, count_diffeo_types, normalize_configuration
from .toric import gale_transform
from .actions import fiber_count, fiber_points
from .variety import jacobian_rank, sample_points, sample_with_zero_pattern

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

ANGLE_LIMIT = 1e-6
VOLUME_ZERO_FACTOR = 1e-9


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StructuralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, ProjectionError, SamplingBudgetError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentangle",
        description="Verification toolkit for links of Hermitian quadric intersections.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide admissibility of a configuration")
    p.add_argument("config")
    p.add_argument("--tol", type=float, default=1e-9)
    _common_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="sample strata and verify the form propositions")
    p.add_argument("config")
    p.add_argument("--samples", type=int, default=20, help="samples per stratum")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--rank-tol", type=float, default=1e-8)
    _common_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="diffeomorphism type from weights or a config")
    p.add_argument("config", nargs="?", help="configuration file (m = 1)")
    p.add_argument("--weights", help="comma-separated cyclic weights, e.g. 1,1,1,1,1")
    p.add_argument("--s", type=int, default=1, help="number of squared variables (s >= 1)")
    _common_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gale", help="Gale-transform polytope of a configuration")
    p.add_argument("config")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-9)
    _common_flags(p)
    p.set_defaults(func=cmd_gale)

    p = sub.add_parser("cover", help="branched-cover fiber counts over directions")
    p.add_argument("config")
    p.add_argument("--direction", help="interleaved re,im,... of a direction in C^n")
    p.add_argument("--samples", type=int, default=5, help="random directions when none given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    _common_flags(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("count", help="count weight cycles N(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--equivalence", choices=("rotation", "rotation+reflection"),
                   default="rotation")
    _common_flags(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sample", help="draw certified points")
    p.add_argument("config")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--rank-tol", type=float, default=1e-8)
    p.add_argument("--pattern", help="comma-separated w indices to pin to zero "
                                     "(mixed-general)")
    p.add_argument("--null-stratum", action="store_true",
                   help="sample the null quadric stratum (mixed-m1)")
    _common_flags(p)
    p.set_defaults(func=cmd_sample)

    return parser


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", metavar="PATH", help="write a canonical JSON report")
    p.add_argument("--text", action="store_true",
                   help="print the text summary (default; kept for symmetry)")
    p.add_argument("--timestamp", default=None,
                   help="timestamp embedded in reports (default: current UTC time)")


def _manifest(args, command: str, cfg_dict: dict | None, tolerances: dict) -> RunManifest:
    timestamp = args.timestamp or datetime.now(timezone.utc).isoformat()
    return RunManifest(
        command=command,
        config_path=getattr(args, "config", None),
        config_hash=None if cfg_dict is None else sha256_hex(canonical_json(cfg_dict)),
        seed=getattr(args, "seed", None),
        tolerances=tolerances,
        timestamp=timestamp,
        version=__version__,
    )


def _emit(args, manifest: RunManifest, result: dict) -> None:
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(build_report(manifest, result))


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    cfg = load_configuration(args.config)
    cfg_dict = configuration_to_dict(cfg)
    manifest = _manifest(args, "check", cfg_dict, {"tol": args.tol})

    if cfg.kind == "classical" or cfg.m == 1:
        report = check_admissible(cfg, args.tol)
        result = {
            "admissible": report.admissible,
            "siegel": report.siegel,
            "weak_hyperbolicity": report.weak_hyperbolicity,
            "violating_subset": None if report.violating_subset is None
            else list(report.violating_subset),
            "hull_dimension": report.hull_dimension,
            "degenerate": report.degenerate,
        }
        admissible = report.admissible
        print(f"siegel: {'PASS' if report.siegel else 'FAIL'}")
        wh = "PASS" if report.weak_hyperbolicity else f"FAIL (subset {report.violating_subset})"
        print(f"weak hyperbolicity: {wh}")
        if report.degenerate:
            print("degenerate: hull distance inside the tolerance band")
    else:
        mixed = check_mixed_admissible(cfg, args.tol)
        result = {
            "admissible": mixed.admissible,
            "failing_subsets": [list(K) for K in mixed.failing],
        }
        admissible = mixed.admissible
        for K, rep in sorted(mixed.reports.items()):
            print(f"components {list(K)}: {'PASS' if rep.admissible else 'FAIL'}")
    print(f"admissible: {'yes' if admissible else 'no'}")
    _emit(args, manifest, result)
    return EXIT_OK if admissible else EXIT_FAIL


def _verification_cases(cfg, samples, seed, tol, rank_tol):
    """(name, points) pairs covering every degeneracy stratum."""
    cases = [("generic",
              sample_points(cfg, samples, seed=seed, tol=tol, rank_tol=rank_tol))]
    if cfg.kind == "mixed-m1":
        cases.append(("stratum w = 0",
                      sample_with_zero_pattern(cfg, tuple(range(cfg.s)), samples,
                                               seed=seed + 1, tol=tol, rank_tol=rank_tol)))
        if cfg.s >= 2:
            # The null quadric minus {w = 0}: kernel stays 1-dimensional and
            # the form stays contact there, so these points count as generic
            # for the per-point checks below.
            cases.append(("null-quadric stratum",
                          sample_with_zero_pattern(cfg, None, samples, seed=seed + 2,
                                                   tol=tol, rank_tol=rank_tol)))
    elif cfg.kind == "mixed-general":
        from itertools import combinations
        index = 1
        for size in range(1, cfg.m + 1):
            for K in combinations(range(cfg.m), size):
                cases.append((f"stratum w{sorted(K)} = 0",
                              sample_with_zero_pattern(cfg, K, samples, seed=seed + index,
                                                       tol=tol, rank_tol=rank_tol)))
                index += 1
    return cases


def _volume_should_vanish(cfg, point) -> bool:
    """Whether the contact volume is exactly zero at this point's stratum."""
    if cfg.kind == "classical":
        return True
    if cfg.kind == "mixed-m1":
        return len(point.zero_pattern) == cfg.w_count
    return len(point.zero_pattern) > 0


def cmd_verify(args) -> int:
    cfg = load_configuration(args.config)
    cfg_dict = configuration_to_dict(cfg)
    manifest = _manifest(args, "verify", cfg_dict,
                         {"tol": args.tol, "rank_tol": args.rank_tol})

    cases = _verification_cases(cfg, args.samples, args.seed, args.tol, args.rank_tol)
    checks: dict[str, list[int]] = {}

    def record(name: str, ok: bool) -> None:
        slot = checks.setdefault(name, [0, 0])
        slot[0] += int(ok)
        slot[1] += 1

    kappa = 0.0
    if cfg.kind != "classical":
        kappa = orientation_sign(cfg, cases[0][1][0])
    zero_scale = VOLUME_ZERO_FACTOR * contact_volume_scale(cfg)

    for name, points in cases:
        for point in points:
            record("jacobian rank maximal",
                   jacobian_rank(cfg, point, args.rank_tol) == cfg.equation_count)
            evaluation = kernel_analysis(cfg, point, args.rank_tol)
            expected = expected_kernel_dims(cfg, point)
            record("kernel dimensions per stratum",
                   (evaluation.ker_dalpha_dim,
                    evaluation.ker_alpha_cap_ker_dalpha_dim) == expected)
            record("closed-form kernel family agreement",
                   kernel_family_angle(cfg, point, args.rank_tol) < ANGLE_LIMIT)
            if cfg.kind == "classical":
                record("contact volume vanishes (total degeneracy)",
                       abs(evaluation.contact_volume) <= zero_scale)
                record(f"Poisson leaf rank {2 * cfg.m}",
                       symplectic_leaf_rank(cfg, point, args.rank_tol) == 2 * cfg.m)
                record("leaf 2-form degeneracy",
                       leaf_two_form_magnitude(cfg, point) <= 1e-8)
            elif _volume_should_vanish(cfg, point):
                record("contact volume vanishes on degenerate strata",
                       abs(evaluation.contact_volume) <= zero_scale)
            else:
                record("contact volume positive off degenerate strata",
                       kappa * evaluation.contact_volume > 0)
            record("no indeterminate ranks", not evaluation.indeterminate)

    all_ok = True
    result: dict = {"cases": [name for name, _ in cases], "checks": {}}
    for name in sorted(checks):
        ok, total = checks[name]
        passed = ok == total
        all_ok &= passed
        print(f"{name}: {'PASS' if passed else 'FAIL'} ({ok}/{total})")
        result["checks"][name] = {"passed": ok, "total": total}
    result["all_passed"] = all_ok
    _emit(args, manifest, result)
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_classify(args) -> int:
    if (args.weights is None) == (args.config is None):
        raise StructuralError("give either --weights or a configuration file")
    manifest_tols: dict = {}
    if args.weights is not None:
        try:
            weights = CyclicWeights(tuple(int(x) for x in args.weights.split(",")))
        except ValueError as exc:
            raise StructuralError(f"cannot parse weights {args.weights!r}") from exc
        cfg_dict = None
        source = {"weights": list(weights.weights)}
    else:
        cfg = load_configuration(args.config)
        cfg_dict = configuration_to_dict(cfg)
        weights = normalize_configuration(cfg)
        source = {"normalized_weights": list(weights.weights)}
        print(f"normalized weights: {','.join(str(x) for x in weights.weights)}")
    manifest = _manifest(args, "classify", cfg_dict, manifest_tols)

    diffeo = classify(weights, args.s)
    print(f"{diffeo.description()}, dim {diffeo.manifold_dimension}")
    if not diffeo.hypothesis_ok:
        print("note: outside the n > 3 hypothesis")
    result = dict(source)
    result.update({
        "s": diffeo.s,
        "summands": [list(pair) for pair in diffeo.summands],
        "manifold_dimension": diffeo.manifold_dimension,
        "hypothesis_ok": diffeo.hypothesis_ok,
        "description": diffeo.description(),
    })
    _emit(args, manifest, result)
    return EXIT_OK


def cmd_gale(args) -> int:
    cfg = load_configuration(args.config)
    cfg_dict = configuration_to_dict(cfg)
    manifest = _manifest(args, "gale", cfg_dict, {"tol": args.tol, "c": args.c})

    report = check_admissible(cfg, args.tol)
    if not report.admissible:
        print(f"configuration not admissible (violating subset "
              f"{report.violating_subset})", file=sys.stderr)
        return EXIT_FAIL
    poly = gale_transform(cfg, args.c, args.tol)
    expected_dim = cfg.n - 2 * cfg.m - 1
    print(f"dimension: {poly.dim} (expected {expected_dim})")
    if poly.vertices is not None:
        print(f"vertices: {len(poly.vertices)}")
        for v in poly.vertices:
            print("  " + " ".join(format_float(x) for x in v))
    result = poly.to_dict()
    result["expected_dim"] = expected_dim
    _emit(args, manifest, result)
    return EXIT_OK if poly.dim == expected_dim else EXIT_FAIL


def cmd_cover(args) -> int:
    cfg = load_configuration(args.config)
    cfg_dict = configuration_to_dict(cfg)
    manifest = _manifest(args, "cover", cfg_dict, {"tol": args.tol})

    directions: list[np.ndarray] = []
    if args.direction:
        try:
            flat = np.array([float(x) for x in args.direction.split(",")])
        except ValueError as exc:
            raise StructuralError(f"cannot parse direction {args.direction!r}") from exc
        if flat.size != 2 * cfg.n:
            raise StructuralError(f"direction needs {2 * cfg.n} numbers (re,im pairs)")
        directions.append(flat[0::2] + 1j * flat[1::2])
    else:
        rng = np.random.Generator(np.random.Philox(key=np.array(
            [args.seed % (1 << 64), 0], dtype=np.uint64)))
        for _ in range(args.samples):
            v = rng.normal(size=2 * cfg.n)
            directions.append((v[0::2] + 1j * v[1::2]) / np.linalg.norm(v))

    all_ok = True
    rows = []
    for i, direction in enumerate(directions):
        info = fiber_count(cfg, direction, args.tol)
        preimages = fiber_points(cfg, direction, args.tol)
        ok = info.count == len(preimages)
        all_ok &= ok
        flag = " (near branch locus)" if info.near_branch else ""
        print(f"direction {i}: fiber count {info.count}, "
              f"constructed preimages {len(preimages)}{flag}"
              f" -> {'PASS' if ok else 'FAIL'}")
        rows.append({
            "direction": [[float(c.real), float(c.imag)] for c in direction],
            "count": info.count,
            "constructed": len(preimages),
            "radius": info.radius,
            "near_branch": info.near_branch,
        })
    _emit(args, manifest, {"fibers": rows, "all_passed": all_ok})
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_count(args) -> int:
    manifest = _manifest(args, "count", None, {})
    value = count_diffeo_types(args.n, args.equivalence)
    print(value)
    _emit(args, manifest, {"n": args.n, "equivalence": args.equivalence, "count": value})
    return EXIT_OK


def cmd_sample(args) -> int:
    cfg = load_configuration(args.config)
    cfg_dict = configuration_to_dict(cfg)
    manifest = _manifest(args, "sample", cfg_dict,
                         {"tol": args.tol, "rank_tol": args.rank_tol})

    if args.pattern and args.null_stratum:
        raise StructuralError("--pattern and --null-stratum are mutually exclusive")
    if args.pattern:
        try:
            pattern = tuple(int(x) for x in args.pattern.split(","))
        except ValueError as exc:
            raise StructuralError(f"cannot parse pattern {args.pattern!r}") from exc
        points = sample_with_zero_pattern(cfg, pattern, args.samples, seed=args.seed,
                                          tol=args.tol, rank_tol=args.rank_tol)
    elif args.null_stratum:
        points = sample_with_zero_pattern(cfg, None, args.samples, seed=args.seed,
                                          tol=args.tol, rank_tol=args.rank_tol)
    else:
        points = sample_points(cfg, args.samples, seed=args.seed,
                               tol=args.tol, rank_tol=args.rank_tol)

    worst = max(p.residual_norm for p in points)
    print(f"certified {len(points)} points; worst residual {format_float(worst)}")
    result = {
        "count": len(points),
        "worst_residual": worst,
        "points": [
            {
                "coordinates": [float(x) for x in p.coordinates],
                "residual": p.residual_norm,
                "zero_pattern": list(p.zero_pattern),
            }
            for p in points
        ],
    }
    _emit(args, manifest, result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
