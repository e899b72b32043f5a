"""Discrete-series parameters and the Dirac-induction reduction map.

The reduction identity is verified twice: once exactly, as a polynomial
identity in the character ring (the product of the series' character
numerator with the dual spinor difference character collapses to a single
compact-subsystem Weyl character carrying the sign (-1)^q), and once
numerically on random regular torus points.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .charring import (
    FormalCharacter,
    VirtualRep,
    antisymmetrize,
    evaluate,
    exact_divide,
    weyl_character,
    _weyl,
)
from .errors import (
    IdentityViolation,
    NotCompatible,
    NotIntegral,
    Singular,
)
from .rootsys import Weight, dominant, inner


@dataclass(frozen=True)
class DiscreteSeriesParam:
    """Regular parameter lambda with its induced positive system."""

    rs: object
    lam: Weight
    positive_system: tuple  # Root records with inner(alpha, lam) > 0
    q: int  # noncompact roots in the positive system
    lowest_k_type: Weight  # lambda - rho_c

    @property
    def sign(self):
        """(-1)^{dim G/K / 2} = (-1)^q."""
        return -1 if self.q % 2 else 1

    @property
    def noncompact_positive(self):
        return tuple(r for r in self.positive_system if r.noncompact)

    @property
    def compact_positive(self):
        return tuple(r for r in self.positive_system if not r.noncompact)


@dataclass(frozen=True)
class CharFraction:
    """sign * numerator / prod_{alpha in denominator_roots}(e^{a/2}-e^{-a/2}).

    Denominators are kept as root sets so cancellation against spinor
    factors is an exact set difference.
    """

    numerator: FormalCharacter
    denominator_roots: tuple
    sign: int


def make_param(rs, lam):
    """Validate and package a Harish-Chandra parameter.

    Requires lam regular, strictly dominant for the fixed compact positive
    system, and lam - rho on the weight lattice (so lam - rho_c is a
    K-type of K or of its spin double cover).
    """
    if not (lam - rs.rho).is_integral():
        raise NotIntegral(f"{lam} - rho is off the weight lattice")
    pos = []
    for r in rs.roots:
        v = inner(rs, r.weight, lam)
        if v == 0:
            raise Singular(f"parameter pairs to zero with root {r.weight}")
        if v > 0:
            pos.append(r)
    for r in rs.compact_positive:
        if inner(rs, r.weight, lam) <= 0:
            raise NotCompatible(
                f"parameter is not strictly dominant for compact root {r.weight}"
            )
    pos = tuple(pos)
    q = sum(1 for r in pos if r.noncompact)
    return DiscreteSeriesParam(
        rs=rs,
        lam=lam,
        positive_system=pos,
        q=q,
        lowest_k_type=lam - rs.rho_c,
    )


def half_difference_product(rank, roots):
    """Product of (e^{alpha/2} - e^{-alpha/2}) over the given roots."""
    prod = FormalCharacter.one(rank)
    for r in roots:
        half = Weight(tuple(c // 2 for c in r.weight.coords))
        prod = prod * (
            FormalCharacter.exponential(half)
            - FormalCharacter.exponential(-half)
        )
    return prod


def spinor_difference_char(rs):
    """Difference character of the spinor module of p, on the torus:
    the product over noncompact positive roots of (e^{a/2} - e^{-a/2})."""
    return half_difference_product(rs.rank, rs.noncompact_positive)


def harish_chandra_numerator(p):
    """The character of the series on the regular torus, as a fraction:
    sign (-1)^q, numerator antisymmetrize(lambda) over the compact Weyl
    group, denominator the full positive system of the parameter."""
    wk = _weyl(p.rs, "compact")
    return CharFraction(
        numerator=antisymmetrize(p.lam, wk),
        denominator_roots=p.positive_system,
        sign=p.sign,
    )


def ds_times_spinor_dual(p):
    """Multiplicity content of (series character) * (dual spinor character).

    The noncompact denominator factors cancel against the spinor product
    (exact set difference of root sets), leaving
    sign * antisymmetrize(lambda) / (compact Weyl denominator), which must
    collapse to sign * (a single irreducible character of highest weight
    lambda - rho_c).  Returns that content as a VirtualRep over the
    compact chamber; raises IdentityViolation if the collapse fails.
    """
    rs = p.rs
    wk = _weyl(rs, "compact")
    numerator = antisymmetrize(p.lam, wk)
    compact_denominator = half_difference_product(rs.rank, p.compact_positive)
    try:
        quotient = exact_divide(numerator, compact_denominator)
    except Exception as exc:
        raise IdentityViolation(f"character division failed: {exc}") from exc
    if quotient.is_zero():
        raise IdentityViolation("quotient is zero")
    top, coeff = quotient.leading()
    if coeff not in (1, -1):
        raise IdentityViolation(f"leading coefficient {coeff} is not a unit")
    if not dominant(rs, top, "compact"):
        raise IdentityViolation(f"leading weight {top} is not compact-dominant")
    expected = weyl_character(rs, top, "compact", allow_half_lattice=True)
    if quotient - coeff * expected != FormalCharacter.zero(rs.rank):
        raise IdentityViolation("quotient is not a single Weyl character")
    if top != p.lowest_k_type:
        raise IdentityViolation(
            f"collapsed to {top}, expected {p.lowest_k_type}"
        )
    return VirtualRep({top: p.sign * coeff}, chamber="compact")


def dirac_induction_reduce(p, rep):
    """Reduction of a Dirac-induced virtual K-representation at the series:
    (-1)^q times the multiplicity of the lambda - rho_c type."""
    return p.sign * rep.multiplicity(p.lowest_k_type)


def _regular_torus_point(rs, denominator_roots, rng, band=1e-6):
    """Uniform theta in [0, 2pi)^rank, rejecting any point where a
    denominator factor |e^{ia/2.theta} - e^{-ia/2.theta}| falls below the band."""
    while True:
        theta = [rng.uniform(0.0, 2.0 * math.pi) for _ in range(rs.rank)]
        ok = True
        for r in denominator_roots:
            half = [c // 2 for c in r.weight.coords]
            phase = sum(a * t for a, t in zip(half, theta))
            if abs(2.0 * math.sin(phase)) < band:
                ok = False
                break
        if ok:
            return theta


def verify_character_identity(p, n_points=100, tol=1e-9, seed=0,
                              corrupt_sign=False):
    """Numerically compare the fraction form of the reduced product with
    the collapsed Weyl character on random regular torus points.

    Returns a JSON-ready report dict.  ``corrupt_sign`` flips the expected
    sign, for exercising the failure path.
    """
    rs = p.rs
    rng = random.Random(seed)
    frac = harish_chandra_numerator(p)
    spinor = half_difference_product(rs.rank, p.noncompact_positive)
    target = weyl_character(
        rs, p.lowest_k_type, "compact", allow_half_lattice=True
    )
    sign = -p.sign if corrupt_sign else p.sign
    max_resid = 0.0
    for _ in range(n_points):
        theta = _regular_torus_point(rs, frac.denominator_roots, rng)
        den = 1.0 + 0.0j
        for r in frac.denominator_roots:
            half = [c // 2 for c in r.weight.coords]
            phase = sum(a * t for a, t in zip(half, theta))
            den *= 2j * math.sin(phase)
        lhs = frac.sign * evaluate(frac.numerator, theta) \
            * evaluate(spinor, theta) / den
        rhs = sign * evaluate(target, theta)
        max_resid = max(max_resid, abs(lhs - rhs))
    return {
        "identity": "dirac-induction-reduction",
        "group": rs.name or "custom",
        "lambda": list(p.lam.coords),
        "n_points": n_points,
        "max_residual": max_resid,
        "pass": bool(max_resid < tol),
    }


def report_json(report):
    return json.dumps(report, sort_keys=True)
