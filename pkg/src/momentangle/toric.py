"""Moment maps and orbit-space polytopes of the mixed links.

For a mixed-general link the torus-invariant data of a point X = (w, z) is

    moment_map(X)     = (w_1, ..., w_m)
    big_moment_map(X) = (w_1, ..., w_m, |z_1|^2, ..., |z_n|^2) =: (w, t)

and the image is cut out by the defining equations rewritten in (w, t):

    t >= 0,   sum_j t_j lambda_j^k = -w_k^2  (k = 1..m),   sum_j t_j = 1 - |w|^2.

Fixing w gives the *fiber polytope* P_w; at w = 0 this is the Gale-transform
polytope P-hat = {t >= 0, sum t_j c lambda_j = 0, sum t_j = 1} (the constraint
is invariant under the positive scaling c).  For admissible configurations
both have affine dimension n - 2m - 1.

Polytopes are stored in H-representation with the convention

    equalities:    a . x  = b
    inequalities:  a . x >= b

plus an optional V-representation (vertices enumerated as basic feasible
solutions, for ambient dimension <= 8).  The affine dimension is computed
from the support: coordinates that can be strictly positive somewhere on the
polytope; on that face only the equalities bind, so

    dim = |support| - rank(equality columns on the support).

The sign convention sum t_j lambda_j = -w^2 is the one the defining equations
w^2 + F(z) = 0 actually induce; the big-moment-map residual test pins it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .config import Configuration, check_admissible, check_mixed_admissible, hull_distance
from .errors import NumericalError, ProjectionError, StructuralError
from .variety import VarietyPoint, certify, project_to_variety, realify, sample_points

FEASIBILITY_TOL = 1e-9
RANK_TOL = 1e-8
VERTEX_ENUMERATION_MAX_DIM = 8


@dataclass(frozen=True, eq=False)
class PolytopeDescription:
    """H-representation (and small-instance V-representation) of a polytope.

    ``equalities`` are pairs (a, b) meaning a . x = b; ``inequalities`` mean
    a . x >= b.  ``vertices`` is an array with one vertex per row, or None
    when enumeration was skipped; ``dim`` is the affine dimension, -1 for an
    empty polytope.
    """

    ambient_dim: int
    equalities: tuple[tuple[np.ndarray, float], ...]
    inequalities: tuple[tuple[np.ndarray, float], ...]
    vertices: np.ndarray | None
    dim: int

    def contains(self, x, tol: float = FEASIBILITY_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise StructuralError(f"expected a vector of length {self.ambient_dim}")
        eq_ok = all(abs(float(a @ x) - b) <= tol for a, b in self.equalities)
        ub_ok = all(float(a @ x) >= b - tol for a, b in self.inequalities)
        return eq_ok and ub_ok

    @property
    def is_empty(self) -> bool:
        return self.dim < 0

    def to_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "dim": self.dim,
            "equalities": [
                {"a": [float(v) for v in a], "b": float(b)} for a, b in self.equalities
            ],
            "inequalities": [
                {"a": [float(v) for v in a], "b": float(b)} for a, b in self.inequalities
            ],
            "vertices": None
            if self.vertices is None
            else [[float(v) for v in row] for row in self.vertices],
        }


@dataclass(frozen=True)
class MomentImageReport:
    """Per-point verification of the orbit-space membership facts.

    ``constraint_residual`` is the worst violation of the (w, t) system
    above; ``hull_member`` checks that the normalized quadric vector
    -w^2 / sum(t) is a convex combination of the lambda_j (the coordinates
    being the normalized t); ``w_bound_ok`` checks |w|^2 <= 1 - c for a
    supplied estimate of c = inf sum |z_j|^2 (None when no estimate given).
    """

    constraint_residual: float
    in_orbit_polytope: bool
    hull_member: bool
    w_bound_ok: bool | None


@dataclass(frozen=True)
class CEstimate:
    """Sampled/descended estimate of c = inf over the link of sum |z_j|^2."""

    value: float
    minimizer: VarietyPoint
    samples_used: int
    descent_steps: int


@dataclass(frozen=True)
class StarShapedReport:
    """Outcome of the radial feasibility grid check on moment images."""

    rays_checked: int
    steps_per_ray: int
    violations: tuple[tuple[int, float], ...]  # (ray index, radial factor)

    @property
    def passed(self) -> bool:
        return not self.violations


def _solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=None):
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=bounds, method="highs")
    if res.status not in (0, 2):
        raise NumericalError(f"LP solver failed: {res.message}")
    return res


def _equality_rows(lambdas: np.ndarray, rhs: np.ndarray, total: float):
    """Rows (Re/Im of each quadric, then the simplex row) and right-hand sides."""
    n, m = lambdas.shape
    A = np.empty((2 * m + 1, n))
    b = np.empty(2 * m + 1)
    A[0:-1:2] = lambdas.real.T
    A[1:-1:2] = lambdas.imag.T
    A[-1] = 1.0
    b[0:-1:2] = rhs.real
    b[1:-1:2] = rhs.imag
    b[-1] = total
    return A, b


def _matrix_rank(matrix: np.ndarray, rank_tol: float = RANK_TOL) -> int:
    if matrix.size == 0:
        return 0
    sigma = np.linalg.svd(matrix, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > rank_tol * sigma[0]))


def _support(A: np.ndarray, b: np.ndarray, tol: float) -> list[int] | None:
    """Coordinates that are positive somewhere on {t >= 0, At = b}.

    Returns None when the polytope is empty.  Tries one simultaneous
    interior LP (max delta with t_j >= delta) before falling back to n
    per-coordinate maximizations.
    """
    n = A.shape[1]
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    A_eq = np.hstack([A, np.zeros((A.shape[0], 1))])
    res = _solve_lp(c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=b,
                    bounds=[(0, None)] * n + [(None, None)])
    if res.status == 2:
        return None
    if res.x is not None and res.x[-1] > tol:
        return list(range(n))

    support = []
    for j in range(n):
        c = np.zeros(n)
        c[j] = -1.0
        res = _solve_lp(c, A_eq=A, b_eq=b, bounds=[(0, None)] * n)
        if res.status == 2:
            return None
        if -res.fun > tol:
            support.append(j)
    return support


def _enumerate_vertices(A: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """All basic feasible solutions of {t >= 0, At = b}, deduplicated/sorted."""
    n = A.shape[1]
    r = _matrix_rank(A)
    found: list[np.ndarray] = []
    for cols in combinations(range(n), r):
        sub = A[:, cols]
        if _matrix_rank(sub) < r:
            continue
        sol, *_ = np.linalg.lstsq(sub, b, rcond=None)
        if np.min(sol, initial=0.0) < -1e-11:
            continue
        t = np.zeros(n)
        t[list(cols)] = np.clip(sol, 0.0, None)
        if np.linalg.norm(A @ t - b, np.inf) > tol:
            continue
        if not any(np.linalg.norm(t - u, np.inf) < 1e-7 for u in found):
            found.append(t)
    found.sort(key=tuple)
    return np.array(found) if found else np.zeros((0, n))


def _build_polytope(A: np.ndarray, b: np.ndarray,
                    tol: float = FEASIBILITY_TOL) -> PolytopeDescription:
    n = A.shape[1]
    equalities = tuple((A[i].copy(), float(b[i])) for i in range(A.shape[0]))
    inequalities = tuple((np.eye(n)[j], 0.0) for j in range(n))
    support = _support(A, b, tol)
    if support is None:
        return PolytopeDescription(n, equalities, inequalities,
                                   vertices=np.zeros((0, n)), dim=-1)
    dim = len(support) - _matrix_rank(A[:, support]) if support else 0
    vertices = _enumerate_vertices(A, b, tol) if n <= VERTEX_ENUMERATION_MAX_DIM else None
    if vertices is not None:
        for v in vertices:
            if np.linalg.norm(A @ v - b, np.inf) > tol or np.min(v) < -tol:
                raise NumericalError("vertex enumeration produced an infeasible vertex")
    return PolytopeDescription(n, equalities, inequalities, vertices=vertices, dim=dim)


def gale_transform(cfg: Configuration, c: float = 1.0,
                   tol: float = FEASIBILITY_TOL) -> PolytopeDescription:
    """The polytope {t >= 0, sum_j t_j c lambda_j = 0, sum t_j = 1}.

    Requires an admissible configuration; its affine dimension is then
    n - 2m - 1.  The scaling c > 0 is mathematically irrelevant (the
    homogeneous constraint absorbs it) and kept only to match the usual
    presentation.
    """
    if not np.isreal(c) or not c > 0:
        raise StructuralError("c must be a positive real")
    report = check_admissible(cfg, tol)
    if not report.admissible:
        raise StructuralError(
            "gale_transform needs an admissible configuration "
            f"(siegel={report.siegel}, weak_hyperbolicity={report.weak_hyperbolicity}, "
            f"violating_subset={report.violating_subset})"
        )
    A, b = _equality_rows(float(c) * cfg.lambdas, np.zeros(cfg.m, dtype=complex), 1.0)
    poly = _build_polytope(A, b, tol)
    if poly.is_empty:
        raise NumericalError("Gale polytope empty for an admissible configuration "
                             "(internal inconsistency)")
    return poly


def fiber_polytope(cfg: Configuration, w,
                   tol: float = FEASIBILITY_TOL) -> PolytopeDescription:
    """The fiber {t >= 0, sum t_j lambda_j = -w^2, sum t_j = 1 - |w|^2}.

    ``w`` is the complex m-vector of a moment-map value; |w|^2 < 1 required.
    May legitimately be empty (w outside the moment image).
    """
    if cfg.kind != "mixed-general":
        raise StructuralError("fiber polytopes are defined for mixed-general links")
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if w.shape != (cfg.m,):
        raise StructuralError(f"w must have {cfg.m} complex components")
    wsq = float(np.sum(np.abs(w) ** 2))
    if wsq >= 1.0:
        raise StructuralError("|w|^2 < 1 is required")
    A, b = _equality_rows(cfg.lambdas, -(w**2), 1.0 - wsq)
    return _build_polytope(A, b, tol)


def moment_map(cfg: Configuration, point: VarietyPoint) -> np.ndarray:
    """The w block of a mixed-general point, as a complex m-vector."""
    if cfg.kind != "mixed-general":
        raise StructuralError("the moment map is defined for mixed-general links")
    return point.w_block(cfg)


def big_moment_map(cfg: Configuration, point: VarietyPoint) -> tuple[np.ndarray, np.ndarray]:
    """(w, t) with t_j = |z_j|^2 — the full torus-invariant data of a point."""
    if cfg.kind != "mixed-general":
        raise StructuralError("the moment map is defined for mixed-general links")
    z = point.z_block(cfg)
    return point.w_block(cfg), np.abs(z) ** 2


def moment_image_check(
    cfg: Configuration,
    point: VarietyPoint,
    c_estimate: float | None = None,
    tol: float = FEASIBILITY_TOL,
) -> MomentImageReport:
    """Verify the orbit-space membership facts for one certified point.

    Checks (i) the (w, t) image satisfies the defining constraints of the
    orbit polytope, (ii) the normalized quadric vector -w^2 / sum(t) lies in
    the convex hull of the lambda_j, and (iii) optionally |w|^2 <= 1 - c.
    (The w block itself need not lie in the hull of the c-scaled lambda_j;
    the hull fact that actually holds is (ii).)
    """
    w, t = big_moment_map(cfg, point)
    quad = cfg.lambdas.T @ t + w**2
    sphere = float(np.sum(np.abs(w) ** 2) + np.sum(t) - 1.0)
    residual = max(
        float(np.max(np.abs(quad))),
        abs(sphere),
        max(0.0, -float(np.min(t))),
    )

    total = float(np.sum(t))
    target = -(w**2) / total
    shifted = cfg.lambdas - target[None, :]
    shifted_real = np.empty((cfg.n, 2 * cfg.m))
    shifted_real[:, 0::2] = shifted.real
    shifted_real[:, 1::2] = shifted.imag
    hull_member = hull_distance(shifted_real) <= tol

    w_bound_ok = None
    if c_estimate is not None:
        w_bound_ok = float(np.sum(np.abs(w) ** 2)) <= 1.0 - c_estimate + tol
    return MomentImageReport(
        constraint_residual=residual,
        in_orbit_polytope=residual <= tol,
        hull_member=hull_member,
        w_bound_ok=w_bound_ok,
    )


def estimate_c(
    cfg: Configuration,
    samples: int = 200,
    seed: int = 0,
    max_descent_steps: int = 400,
) -> CEstimate:
    """Estimate c = inf sum |z_j|^2 over the link, from above.

    Draws certified samples, takes the best, and refines it by projected
    gradient descent (gradient of sum |z_j|^2 in the ambient space, step,
    re-project, halve on failure).  The sample stream is prefix-stable in
    the budget for a fixed seed, so enlarging ``samples`` never worsens the
    sampled stage.
    """
    if cfg.kind != "mixed-general":
        raise StructuralError("estimate_c is defined for mixed-general links")
    mixed = check_mixed_admissible(cfg)
    if not mixed.admissible:
        raise StructuralError(f"configuration not mixed-admissible: {mixed.failing}")

    z_start = 2 * cfg.w_count

    def objective(coords: np.ndarray) -> float:
        return float(np.sum(coords[z_start:] ** 2))

    pts = sample_points(cfg, samples, seed=seed)
    best = min(pts, key=lambda p: objective(p.coordinates))
    x = best.coordinates.copy()
    value = objective(x)

    eta = 0.1
    steps = 0
    for _ in range(max_descent_steps):
        grad = np.zeros_like(x)
        grad[z_start:] = 2.0 * x[z_start:]
        moved = False
        while eta > 1e-13:
            try:
                candidate = project_to_variety(cfg, x - eta * grad)
            except ProjectionError:
                eta *= 0.5
                continue
            if objective(candidate) < value - 1e-15:
                x = candidate
                value = objective(candidate)
                eta *= 1.5
                moved = True
                break
            eta *= 0.5
        if not moved:
            break
        steps += 1

    minimizer = certify(cfg, x)
    return CEstimate(value=value, minimizer=minimizer,
                     samples_used=len(pts), descent_steps=steps)


def star_shaped_check(
    cfg: Configuration,
    samples: int = 50,
    ray_steps: int = 20,
    seed: int = 0,
    tol: float = FEASIBILITY_TOL,
) -> StarShapedReport:
    """Check the moment image is star-shaped about 0 on a sampled ray grid.

    For each sampled point's moment value w and each radial factor r on a
    uniform [0, 1] grid, the fiber polytope at r*w must be nonempty (LP
    feasibility).  Violations are reported as (ray index, r) witnesses.
    """
    if cfg.kind != "mixed-general":
        raise StructuralError("star_shaped_check is defined for mixed-general links")
    pts = sample_points(cfg, samples, seed=seed)
    grid = np.linspace(0.0, 1.0, ray_steps)
    violations: list[tuple[int, float]] = []
    for i, point in enumerate(pts):
        w = moment_map(cfg, point)
        for r in grid:
            poly_feasible = not fiber_polytope(cfg, r * w, tol).is_empty
            if not poly_feasible:
                violations.append((i, float(r)))
    return StarShapedReport(
        rays_checked=len(pts),
        steps_per_ray=ray_steps,
        violations=tuple(violations),
    )
