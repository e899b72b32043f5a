"""Strongly-elliptic predicates and numerical stabilizer checks.

Membership in the strongly elliptic set is decided exactly on the chamber:
a point of t* is strongly elliptic iff it avoids every noncompact wall.
The matrix-side counterpart (the stabilizer algebra meets p trivially) is
checked numerically on the catalog models.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import IllConditioned
from .rootsys import pairing

SV_THRESHOLD = 1e-8
# Singular values inside (threshold, threshold * AMBIGUITY) leave the
# rank decision numerically ambiguous.
AMBIGUITY = 1e2


@dataclass(frozen=True)
class ChamberPoint:
    """Rational point of t* in doubled fundamental-weight coordinates."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coords", tuple(Fraction(c) for c in self.coords)
        )

    @property
    def rank(self):
        return len(self.coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def scale(self, s):
        return ChamberPoint(tuple(Fraction(s) * c for c in self.coords))

    def apply(self, matrix):
        """Image under an integer matrix acting on doubled coordinates."""
        return ChamberPoint(
            tuple(
                sum(row[j] * self.coords[j] for j in range(len(row)))
                for row in matrix
            )
        )


def on_noncompact_wall(rs, xi):
    """Exact test: (alpha, xi) == 0 for some noncompact root alpha."""
    return any(
        pairing(rs, r.weight.coords, xi.coords) == 0
        for r in rs.noncompact_roots
    )


def strongly_elliptic(rs, xi):
    """A chamber point is strongly elliptic iff it is off every noncompact
    wall; when there are no noncompact roots every point qualifies."""
    return not on_noncompact_wall(rs, xi)


def random_strongly_elliptic(rs, rng, span=6):
    """Random nonzero strongly elliptic chamber point with small rational
    coordinates."""
    while True:
        xi = ChamberPoint(
            tuple(
                Fraction(rng.randint(-span, span), rng.randint(1, 3))
                for _ in range(rs.rank)
            )
        )
        if not xi.is_zero() and strongly_elliptic(rs, xi):
            return xi


def random_wall_point(rs, rng, span=6):
    """Random point lying exactly on some noncompact wall (exact rational
    projection); requires a nonempty noncompact root set."""
    roots = rs.noncompact_roots
    if not roots:
        raise ValueError("system has no noncompact walls")
    alpha = roots[rng.randrange(len(roots))].weight
    base = tuple(
        Fraction(rng.randint(-span, span), rng.randint(1, 3))
        for _ in range(rs.rank)
    )
    num = pairing(rs, alpha.coords, base)
    den = pairing(rs, alpha.coords, alpha.coords)
    coef = num / den
    coords = tuple(b - coef * a for b, a in zip(base, alpha.coords))
    return ChamberPoint(coords)


def _rank_with_gap(svals, threshold=SV_THRESHOLD):
    """Count singular values above threshold; raise when any falls inside
    the ambiguity band around it."""
    for s in svals:
        if threshold <= s < threshold * AMBIGUITY:
            raise IllConditioned(
                f"singular value {s:.3e} within the ambiguity band of "
                f"{threshold:.0e}"
            )
    return int(np.sum(svals >= threshold))


def stabilizer_algebra(model, xi_dual, threshold=SV_THRESHOLD):
    """Numerical basis of the centralizer {X in g : [X, xi_dual] = 0}.

    Returns a list of matrices; raises IllConditioned when the nullspace
    rank is numerically ambiguous at the threshold.
    """
    cols = [
        (b @ xi_dual - xi_dual @ b).reshape(-1) for b in model.basis
    ]
    a = np.stack(cols, axis=1)
    _, svals, vt = np.linalg.svd(a)
    svals = np.concatenate([svals, np.zeros(len(model.basis) - len(svals))])
    rank = _rank_with_gap(svals, threshold)
    kernel_rows = vt[rank:]
    return [
        sum(c * b for c, b in zip(row, model.basis)) for row in kernel_rows
    ]


def check_gxi_cap_p(model, xi_dual, threshold=SV_THRESHOLD):
    """Dimension of (stabilizer of xi_dual) intersected with p.

    Zero exactly when the chamber representative is strongly elliptic.
    """
    cols = [
        (b @ xi_dual - xi_dual @ b).reshape(-1) for b in model.basis
    ]
    a = np.stack(cols, axis=1)
    _, svals, vt = np.linalg.svd(a)
    svals = np.concatenate([svals, np.zeros(len(model.basis) - len(svals))])
    rank = _rank_with_gap(svals, threshold)
    stab_rows = vt[rank:]  # orthonormal coefficient vectors of g_xi
    dim_stab = stab_rows.shape[0]
    dim_p = len(model.p_indices)
    if dim_stab == 0 or dim_p == 0:
        return 0
    p_rows = np.zeros((dim_p, len(model.basis)))
    for r, idx in enumerate(model.p_indices):
        p_rows[r, idx] = 1.0
    stacked = np.vstack([stab_rows, p_rows])
    svals2 = np.linalg.svd(stacked, compute_uv=False)
    joint = _rank_with_gap(svals2, threshold)
    return dim_stab + dim_p - joint
