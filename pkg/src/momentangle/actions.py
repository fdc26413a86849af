"""Group actions on the links and the branched covering over the sphere.

Three commuting symmetry layers act on the links:

* the n-torus: z_j -> u_j z_j with |u_j| = 1 (w untouched);
* sign flips (mixed-general only): w_k -> sigma_k w_k, sigma_k = +-1 — the
  quadrics see only w_k^2, so this is a (Z/2)^m action whose fixed strata
  are the w-coordinate zero sets;
* the foliation flow (classical only): z_j -> e^{-i c_j(T)/b_j} z_j with
  c_j(T) = 2 Re(sum_k T_k lambda_j^k), the time-one map of the closed-form
  kernel field v(T, 0).  (The 1/b_j weight scaling keeps that identification
  exact for non-unit form weights; with unit weights it is the usual
  display.)

All actions preserve the defining residuals analytically; the implementations
re-certify numerically and return fresh points.

The branched covering ``p`` sends (w, z) to z/|z| on the unit sphere.  Its
fibers are computed by radial rescaling: a unit direction zhat lifts to
points (w, r zhat) with w_k^2 = -F_k(r zhat) = -r^2 F_k(zhat) and

    r^2 (1 + sum_k |F_k(zhat)|) = 1,

which is linear in r^2 — the 1-D radius solve on the ray therefore collapses
to a closed form and needs no iteration.  Each k with F_k != 0 contributes an
independent sign choice, so a direction with l nonzero quadric values has
exactly 2^l preimages (2^m generically, 1 on the classical stratum).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .config import Configuration
from .errors import NumericalError, StructuralError
from .variety import (
    DEFAULT_TOL,
    DUPLICATE_TOL,
    VarietyPoint,
    certify,
    realify,
)

UNIT_TOL = 1e-12
DEFAULT_BRANCH_TOL = 1e-8
#: |F_k| within a factor of this of the branch tolerance flags the verdict
NEAR_BRANCH_BAND = 10.0


@dataclass(frozen=True)
class GroupElement:
    """An element of the symmetry group acting on a link.

    Any of the three parts may be None (identity in that factor).  Unit
    moduli and exact signs are validated on construction.
    """

    torus_part: np.ndarray | None = None
    sign_part: np.ndarray | None = None
    flow_part: np.ndarray | None = None

    def __post_init__(self):
        if self.torus_part is not None:
            u = np.atleast_1d(np.asarray(self.torus_part, dtype=complex))
            _validate_phases(u)
            object.__setattr__(self, "torus_part", u)
        if self.sign_part is not None:
            sigma = np.atleast_1d(np.asarray(self.sign_part))
            _validate_signs(sigma)
            object.__setattr__(self, "sign_part", sigma.astype(float))
        if self.flow_part is not None:
            T = np.atleast_1d(np.asarray(self.flow_part, dtype=complex))
            object.__setattr__(self, "flow_part", T)

    def apply(self, cfg: Configuration, point: VarietyPoint) -> VarietyPoint:
        """Apply sign, then torus, then flow parts (they commute)."""
        out = point
        if self.sign_part is not None:
            out = sign_act(cfg, out, self.sign_part)
        if self.torus_part is not None:
            out = torus_act(cfg, out, self.torus_part)
        if self.flow_part is not None:
            out = foliation_flow(cfg, out, self.flow_part)
        return out


def _validate_phases(phases: np.ndarray) -> None:
    if np.any(np.abs(np.abs(phases) - 1.0) > UNIT_TOL):
        worst = float(np.max(np.abs(np.abs(phases) - 1.0)))
        raise StructuralError(f"torus phases must have unit modulus (off by {worst:.2e})")


def _validate_signs(signs: np.ndarray) -> None:
    if not np.all(np.isin(np.asarray(signs, dtype=float), (-1.0, 1.0))):
        raise StructuralError("signs must be exactly +1 or -1")


def torus_act(cfg: Configuration, point: VarietyPoint, phases,
              tol: float = DEFAULT_TOL) -> VarietyPoint:
    """Rotate each z_j by the unit phase u_j; w block untouched."""
    u = np.atleast_1d(np.asarray(phases, dtype=complex))
    if u.shape != (cfg.n,):
        raise StructuralError(f"expected {cfg.n} phases")
    _validate_phases(u)
    w = point.w_block(cfg)
    z = point.z_block(cfg)
    return certify(cfg, realify(np.concatenate([w, u * z])), tol=tol)


def sign_act(cfg: Configuration, point: VarietyPoint, signs,
             tol: float = DEFAULT_TOL) -> VarietyPoint:
    """Flip the signs of chosen w_k (mixed-general links only)."""
    if cfg.kind != "mixed-general":
        raise StructuralError("the sign action is defined for mixed-general links")
    sigma = np.atleast_1d(np.asarray(signs, dtype=float))
    if sigma.shape != (cfg.m,):
        raise StructuralError(f"expected {cfg.m} signs")
    _validate_signs(sigma)
    w = point.w_block(cfg)
    z = point.z_block(cfg)
    return certify(cfg, realify(np.concatenate([sigma * w, z])), tol=tol)


def foliation_flow(cfg: Configuration, point: VarietyPoint, T,
                   tol: float = DEFAULT_TOL) -> VarietyPoint:
    """Time-one map of the leafwise flow with parameter T (classical links).

    The velocity at T = 0 is the closed-form kernel vector v(T, 0); tests
    confirm this by finite differences.
    """
    if cfg.kind != "classical":
        raise StructuralError("the foliation flow is defined for classical links")
    T_arr = np.atleast_1d(np.asarray(T, dtype=complex))
    if T_arr.shape != (cfg.m,):
        raise StructuralError(f"expected {cfg.m} complex flow parameters")
    c = 2.0 * np.real(cfg.lambdas @ T_arr)
    phases = np.exp(-1j * c / cfg.weights_b)
    z = point.z_block(cfg)
    return certify(cfg, realify(phases * z), tol=tol)


def branched_cover(cfg: Configuration, point: VarietyPoint) -> np.ndarray:
    """Normalized z block: the covering map onto the unit sphere of C^n."""
    if cfg.kind != "mixed-general":
        raise StructuralError("the branched cover is defined for mixed-general links")
    z = point.z_block(cfg)
    norm = float(np.linalg.norm(z))
    if norm < 1e-12:
        raise NumericalError("z block vanishes; point cannot be projected")
    return z / norm


def quadric_values(cfg: Configuration, direction) -> np.ndarray:
    """F_k evaluated on a unit z-direction (no w contribution)."""
    zhat = np.atleast_1d(np.asarray(direction, dtype=complex))
    if zhat.shape != (cfg.n,):
        raise StructuralError(f"expected a direction in C^{cfg.n}")
    norm = float(np.linalg.norm(zhat))
    if norm < 1e-12:
        raise StructuralError("direction must be nonzero")
    zhat = zhat / norm
    return cfg.lambdas.T @ (np.abs(zhat) ** 2)


def ray_radius(cfg: Configuration, direction) -> float:
    """Radius r at which the ray over a unit direction meets the link."""
    F = quadric_values(cfg, direction)
    return float(1.0 / np.sqrt(1.0 + np.sum(np.abs(F))))


@dataclass(frozen=True)
class FiberCount:
    """Fiber cardinality of the covering over one sphere direction.

    ``count`` is 2^l with l the number of quadric values |F_k| above ``tol``
    at the rescaled point; ``near_branch`` flags directions where some |F_k|
    falls within a factor 10 of the tolerance (on either side), i.e. where
    the zero/nonzero split is not trustworthy.
    """

    count: int
    radius: float
    quadric_magnitudes: tuple[float, ...]
    near_branch: bool


def fiber_count(cfg: Configuration, direction,
                tol: float = DEFAULT_BRANCH_TOL) -> FiberCount:
    """Cardinality of the covering fiber over a unit z-direction."""
    if cfg.kind != "mixed-general":
        raise StructuralError("fiber counting is defined for mixed-general links")
    F = quadric_values(cfg, direction)
    r = float(1.0 / np.sqrt(1.0 + np.sum(np.abs(F))))
    mags = np.abs(F) * r**2
    live = int(np.count_nonzero(mags > tol))
    near = bool(np.any((mags > tol / NEAR_BRANCH_BAND) & (mags <= tol * NEAR_BRANCH_BAND)))
    return FiberCount(
        count=2**live,
        radius=r,
        quadric_magnitudes=tuple(float(x) for x in mags),
        near_branch=near,
    )


def fiber_points(cfg: Configuration, direction,
                 tol: float = DEFAULT_BRANCH_TOL,
                 certify_tol: float = DEFAULT_TOL) -> list[VarietyPoint]:
    """All preimages of a direction, by exhaustive sign-choice construction.

    Builds w_k = +-sqrt(-F_k) for every k with |F_k| > tol (w_k = 0 on the
    others), certifies each of the 2^l candidates and deduplicates.  This is
    the independent oracle for :func:`fiber_count`; exponential in m, meant
    for m <= 3.  Directions with |F_k| in the near-branch band may fail
    certification for the w_k = 0 choice — counts there are inherently
    ill-conditioned.
    """
    if cfg.kind != "mixed-general":
        raise StructuralError("fiber enumeration is defined for mixed-general links")
    zhat = np.atleast_1d(np.asarray(direction, dtype=complex))
    zhat = zhat / float(np.linalg.norm(zhat))
    F = quadric_values(cfg, zhat)
    r = float(1.0 / np.sqrt(1.0 + np.sum(np.abs(F))))
    scaled = F * r**2

    choices: list[tuple[complex, ...]] = []
    for k in range(cfg.m):
        if abs(scaled[k]) <= tol:
            choices.append((0.0 + 0.0j,))
        else:
            root = complex(np.sqrt(-scaled[k] + 0.0j))
            choices.append((root, -root))

    found: list[VarietyPoint] = []
    for combo in product(*choices):
        coords = realify(np.concatenate([np.array(combo), r * zhat]))
        point = certify(cfg, coords, tol=certify_tol)
        if not any(
            np.linalg.norm(point.coordinates - q.coordinates) < DUPLICATE_TOL
            for q in found
        ):
            found.append(point)
    return found


def sign_orbit(cfg: Configuration, point: VarietyPoint) -> list[VarietyPoint]:
    """The (Z/2)^m orbit of a point, deduplicated."""
    out: list[VarietyPoint] = []
    for signs in product((1.0, -1.0), repeat=cfg.m):
        moved = sign_act(cfg, point, np.array(signs))
        if not any(
            np.linalg.norm(moved.coordinates - q.coordinates) < DUPLICATE_TOL
            for q in out
        ):
            out.append(moved)
    return out


def isotropy_stratum(cfg: Configuration, point: VarietyPoint,
                     tol: float = DEFAULT_BRANCH_TOL) -> tuple[int, ...]:
    """Indices k (0-based) with F_k(z) = 0 at the point — its isotropy type.

    On the link |w_k|^2 = |F_k(z)| exactly, so the characterizations
    "|F_k| <= tol" and "|w_k| <= sqrt(tol)" must agree; a mismatch means the
    point does not lie on the link to tolerance, and raises.
    """
    if cfg.kind != "mixed-general":
        raise StructuralError("isotropy strata are defined for mixed-general links")
    w = point.w_block(cfg)
    z = point.z_block(cfg)
    F = cfg.lambdas.T @ (np.abs(z) ** 2)
    from_quadrics = tuple(int(k) for k in np.nonzero(np.abs(F) <= tol)[0])
    from_w = tuple(int(k) for k in np.nonzero(np.abs(w) <= np.sqrt(tol))[0])
    if from_quadrics != from_w:
        raise NumericalError(
            f"inconsistent isotropy data: F-zeros {from_quadrics} vs w-zeros {from_w}"
        )
    return from_quadrics
