"""Diffeomorphism types of the m = 1 links from cyclic weight sequences.

An admissible planar configuration reduces to a combinatorial normal form:
normalize the lambda_j to the unit circle and cut the circle at the antipodes
of the points.  Weak hyperbolicity keeps every point clear of every antipode,
so the points fall into well-defined groups between consecutive antipodes;
reading off the group sizes in cyclic order gives a tuple (n_1, ..., n_{2l+1})
of positive integers — the Siegel condition forces an odd number of groups.

The diffeomorphism type of the corresponding link (with s extra squared
variables) is determined by partial sums around the cycle,

    d_j = n_j + n_{j+1} + ... + n_{j+l-1}    (indices mod 2l+1),

as the connected sum of the sphere products S^{2d_j+s-1} x S^{2n-2d_j+s-2}.

Everything here is exact integer/stdlib combinatorics except the circle walk,
which uses a fixed angular tolerance.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .config import Configuration, check_admissible
from .errors import StructuralError

ANGULAR_TOL = 1e-9

EQUIVALENCES = ("rotation", "rotation+reflection")


def _min_rotation(seq: tuple[int, ...]) -> tuple[int, ...]:
    return min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))


@dataclass(frozen=True)
class CyclicWeights:
    """A cyclic sequence n_1, ..., n_{2l+1} of positive integer weights."""

    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if any(int(x) != x for x in self.weights):
            raise StructuralError("weights must be integers")
        if len(w) < 3 or len(w) % 2 == 0:
            raise StructuralError(
                f"weights must have odd length >= 3, got length {len(w)}"
            )
        if any(x < 1 for x in w):
            raise StructuralError("weights must be >= 1")
        object.__setattr__(self, "weights", w)

    @property
    def total(self) -> int:
        """n = sum of the weights."""
        return sum(self.weights)

    @property
    def ell(self) -> int:
        """l with 2l+1 = number of weights."""
        return len(self.weights) // 2

    def canonical(self) -> "CyclicWeights":
        """Lexicographically minimal rotation — the cyclic normal form."""
        return CyclicWeights(_min_rotation(self.weights))


@dataclass(frozen=True)
class DiffeoType:
    """A connected sum of sphere products S^{p_j} x S^{q_j}.

    ``summands`` is sorted lexicographically, so equal values mean equal
    types regardless of which rotation of the weights produced them.
    ``hypothesis_ok`` records whether the input satisfied n > 3 (the
    classification is stated under that hypothesis; smaller inputs are
    computed anyway and flagged).
    """

    s: int
    summands: tuple[tuple[int, int], ...]
    manifold_dimension: int
    hypothesis_ok: bool = True

    def description(self) -> str:
        """Human-readable connected-sum string, e.g. ``#5 (S^4 x S^5)``."""
        groups: list[tuple[tuple[int, int], int]] = []
        for pair in self.summands:
            if groups and groups[-1][0] == pair:
                groups[-1] = (pair, groups[-1][1] + 1)
            else:
                groups.append((pair, 1))
        return "#" + " # ".join(
            f"{count} (S^{p} x S^{q})" for (p, q), count in groups
        )


def classify(weights, s: int) -> DiffeoType:
    """Diffeomorphism type of the link with the given weights and s >= 1.

    Computes d_j = n_j + ... + n_{j+l-1} cyclically and emits the summand
    pairs (2 d_j + s - 1, 2n - 2 d_j + s - 2); every pair must sum to the
    manifold dimension 2n + 2s - 3, which is asserted.
    """
    if not isinstance(weights, CyclicWeights):
        weights = CyclicWeights(tuple(weights))
    if not isinstance(s, int) or s < 1:
        raise StructuralError("s must be a positive integer")
    n = weights.total
    ell = weights.ell
    length = len(weights.weights)

    hypothesis_ok = n > 3
    if not hypothesis_ok:
        warnings.warn(
            f"classification applied below its n > 3 hypothesis (n = {n})",
            stacklevel=2,
        )

    dim = 2 * n + 2 * s - 3
    pairs = []
    for j in range(length):
        d = sum(weights.weights[(j + t) % length] for t in range(ell))
        pair = (2 * d + s - 1, 2 * n - 2 * d + s - 2)
        if pair[0] + pair[1] != dim:
            raise StructuralError("dimension invariant violated (internal)")
        pairs.append(pair)
    return DiffeoType(
        s=s,
        summands=tuple(sorted(pairs)),
        manifold_dimension=dim,
        hypothesis_ok=hypothesis_ok,
    )


def normalize_configuration(
    cfg: Configuration, angular_tol: float = ANGULAR_TOL
) -> CyclicWeights:
    """Reduce an admissible planar (m = 1) configuration to its weight cycle.

    The lambda_j are normalized to unit directions; the circle is cut at the
    antipodes of the directions; maximal runs of directions between
    consecutive antipodes become the classes.  Class sizes are returned in
    cyclic order, canonicalized to the lexicographically minimal rotation.

    Raises if some lambda_j comes within ``angular_tol`` of an antipode —
    that is a weak-hyperbolicity failure at tolerance scale, and the grouping
    would be arbitrary.
    """
    if cfg.m != 1:
        raise StructuralError("normalization is defined for planar (m = 1) configurations")
    report = check_admissible(cfg)
    if not report.admissible:
        raise StructuralError(f"configuration is not admissible: {report}")

    lam = cfg.lambdas[:, 0]
    if np.any(np.abs(lam) == 0.0):
        raise StructuralError("zero lambda has no direction")
    angles = np.mod(np.angle(lam), 2.0 * np.pi)
    antipodes = np.mod(angles + np.pi, 2.0 * np.pi)

    # pairwise direction-vs-antipode separation on the circle
    diff = np.abs(angles[:, None] - antipodes[None, :])
    circle_dist = np.minimum(diff, 2.0 * np.pi - diff)
    if np.any(circle_dist < angular_tol):
        i, j = np.unravel_index(np.argmin(circle_dist), circle_dist.shape)
        raise StructuralError(
            f"lambda_{i} lies within {angular_tol:g} rad of the antipode of "
            f"lambda_{j}; weak hyperbolicity fails at tolerance scale"
        )

    # walk the circle: directions between consecutive antipodes form a class
    events = sorted(
        [(float(a), 0) for a in angles] + [(float(a), 1) for a in antipodes]
    )
    sizes: list[int] = []
    run = 0
    leading = None  # directions before the first antipode; they wrap around
    for _, is_antipode in events:
        if is_antipode:
            if leading is None:
                leading = run
            elif run:
                sizes.append(run)
            run = 0
        else:
            run += 1
    wrapped = run + (leading or 0)
    if wrapped:
        sizes.append(wrapped)

    if len(sizes) % 2 == 0 or len(sizes) < 3:
        raise StructuralError(
            f"grouping produced {len(sizes)} classes; admissible configurations "
            "always give an odd count >= 3"
        )
    if sum(sizes) != cfg.n:
        raise StructuralError("grouping lost points (internal)")
    return CyclicWeights(tuple(sizes)).canonical()


def count_diffeo_types(n: int, equivalence: str = "rotation") -> int:
    """Number N(n) of weight cycles with total n, up to the chosen equivalence.

    Enumerates all compositions of n into an odd number (>= 3) of positive
    parts and counts distinct canonical forms under rotation (optionally also
    reflection).  Exhaustive — fine for the desk-scale n where this is used
    (2^(n-1) compositions).
    """
    if not isinstance(n, int) or n < 3:
        raise StructuralError("n must be an integer >= 3")
    if equivalence not in EQUIVALENCES:
        raise StructuralError(f"equivalence must be one of {EQUIVALENCES}")
    if n <= 3:
        warnings.warn(f"counting below the n > 3 hypothesis (n = {n})", stacklevel=2)

    canonical: set[tuple[int, ...]] = set()
    for length in range(3, n + 1, 2):
        for cuts in combinations(range(1, n), length - 1):
            bounds = (0, *cuts, n)
            comp = tuple(bounds[i + 1] - bounds[i] for i in range(length))
            rep = _min_rotation(comp)
            if equivalence == "rotation+reflection":
                rep = min(rep, _min_rotation(comp[::-1]))
            canonical.add(rep)
    return len(canonical)
