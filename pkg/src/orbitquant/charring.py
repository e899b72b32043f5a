"""Exact formal characters over the half-weight lattice.

A FormalCharacter is a finite integer combination of exponentials e^{mu}
with mu on the half-weight lattice (doubled coordinates).  Products,
alternating sums, exact division by leading-term elimination, and three
independent weight-multiplicity algorithms live here.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import rootsys
from .errors import (
    DimensionMismatch,
    NotDivisible,
    NotDominant,
    NotIntegral,
)
from .rootsys import Weight, dominant, inner, weyl_group

_DIV_CAP = 10**6


class FormalCharacter:
    """Sparse integer Laurent combination of lattice exponentials."""

    __slots__ = ("terms", "rank")

    def __init__(self, terms=None, rank=None):
        self.terms = {}
        self.rank = rank
        if terms:
            for w, c in terms.items():
                if not isinstance(w, Weight):
                    w = Weight(tuple(w))
                if self.rank is None:
                    self.rank = w.rank
                elif w.rank != self.rank:
                    raise DimensionMismatch("mixed ranks in character")
                if c:
                    self.terms[w] = self.terms.get(w, 0) + c
            self.terms = {w: c for w, c in self.terms.items() if c}

    @classmethod
    def exponential(cls, weight, coeff=1):
        return cls({weight: coeff}, rank=weight.rank)

    @classmethod
    def one(cls, rank):
        return cls({Weight((0,) * rank): 1}, rank=rank)

    @classmethod
    def zero(cls, rank):
        return cls({}, rank=rank)

    def is_zero(self):
        return not self.terms

    def copy(self):
        out = FormalCharacter(rank=self.rank)
        out.terms = dict(self.terms)
        return out

    def _check(self, other):
        if not isinstance(other, FormalCharacter):
            raise TypeError("expected FormalCharacter")
        if self.rank is not None and other.rank is not None:
            if self.rank != other.rank:
                raise DimensionMismatch("character ranks differ")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        res = FormalCharacter(rank=self.rank or other.rank)
        res.terms = out
        return res

    def __neg__(self):
        res = FormalCharacter(rank=self.rank)
        res.terms = {w: -c for w, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            res = FormalCharacter(rank=self.rank)
            if other:
                res.terms = {w: c * other for w, c in self.terms.items()}
            return res
        self._check(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                s = out.get(w, 0) + c1 * c2
                if s:
                    out[w] = s
                else:
                    del out[w]
        res = FormalCharacter(rank=self.rank or other.rank)
        res.terms = out
        return res

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, FormalCharacter) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, weight):
        return self.terms.get(weight, 0)

    def support(self):
        return set(self.terms)

    def dimension(self):
        """Sum of coefficients: the virtual dimension (value at theta=0)."""
        return sum(self.terms.values())

    def pullback_negate(self):
        """The character composed with mu -> -mu."""
        res = FormalCharacter(rank=self.rank)
        res.terms = {-w: c for w, c in self.terms.items()}
        return res

    def leading(self):
        """(weight, coeff) of the graded-lexicographically largest term."""
        w = max(self.terms, key=_grlex_key)
        return w, self.terms[w]

    def trailing(self):
        w = min(self.terms, key=_grlex_key)
        return w, self.terms[w]

    def to_json_obj(self):
        return [
            {"weight": list(w.coords), "coeff": c}
            for w, c in sorted(self.terms.items())
        ]

    def __repr__(self):
        if not self.terms:
            return "FormalCharacter(0)"
        bits = [f"{c}*e{w.coords}" for w, c in sorted(self.terms.items())]
        return "FormalCharacter(" + " + ".join(bits) + ")"


def _grlex_key(w):
    return (sum(w.coords), w.coords)


def char_add(a, b):
    return a + b


def char_mul(a, b):
    return a * b


def antisymmetrize(lam, weyl):
    """Sum of eps(w) e^{w lam}; zero when lam is singular for the group."""
    out = {}
    for w, sign in zip(weyl.elements, weyl.signs):
        img = weyl.apply(w, lam)
        s = out.get(img, 0) + sign
        if s:
            out[img] = s
        else:
            del out[img]
    res = FormalCharacter(rank=lam.rank)
    res.terms = out
    return res


def exact_divide(numerator, denominator):
    """Quotient q with q*denominator == numerator, exactly.

    Leading-term elimination under the graded-lexicographic order on
    doubled coordinates; raises NotDivisible on any nonzero remainder.
    """
    if denominator.is_zero():
        raise ZeroDivisionError("zero character denominator")
    if numerator.is_zero():
        return FormalCharacter.zero(numerator.rank or denominator.rank)
    dlead_w, dlead_c = denominator.leading()
    dtrail_w, _ = denominator.trailing()
    ntrail_w, _ = numerator.trailing()
    # Any exact quotient term lies at or above trailing(num) - trailing(den).
    low = _grlex_key(ntrail_w - dtrail_w)
    quotient = {}
    rem = numerator.copy()
    steps = 0
    while rem.terms:
        steps += 1
        if steps > _DIV_CAP:
            raise NotDivisible("division does not terminate")
        rlead_w, rlead_c = rem.leading()
        q, r = divmod(rlead_c, dlead_c)
        if r:
            raise NotDivisible(f"coefficient {rlead_c} not divisible by {dlead_c}")
        qw = rlead_w - dlead_w
        if _grlex_key(qw) < low:
            raise NotDivisible("remainder drops below the exact-quotient range")
        quotient[qw] = quotient.get(qw, 0) + q
        shift = FormalCharacter.exponential(qw, q)
        rem = rem - shift * denominator
    res = FormalCharacter(rank=numerator.rank)
    res.terms = {w: c for w, c in quotient.items() if c}
    return res


# -- Weyl groups and half-sums per chamber, cached -----------------------------


@lru_cache(maxsize=None)
def _weyl(rs, chamber):
    return weyl_group(rs, chamber)


def _chamber_rho(rs, chamber):
    return rs.rho if chamber == "full" else rs.rho_c


def weyl_denominator(rs, chamber="full"):
    """Product of (e^{a/2} - e^{-a/2}) over the chamber's positive roots."""
    prod = FormalCharacter.one(rs.rank)
    roots = rs.positive_roots if chamber == "full" else rs.compact_positive
    for r in roots:
        half = Weight(tuple(c // 2 for c in r.weight.coords))
        prod = prod * (
            FormalCharacter.exponential(half)
            - FormalCharacter.exponential(-half)
        )
    return prod


def weyl_character(rs, lam, subsystem="full", allow_half_lattice=False):
    """Character of the irreducible with highest weight lam.

    Computed as antisymmetrize(lam + rho') / antisymmetrize(rho') for the
    chosen subsystem.  Weights of double covers (odd doubled coordinates)
    are admitted only when allow_half_lattice is set; the formal quotient
    is the character of the corresponding double-cover representation.
    """
    if not allow_half_lattice and not lam.is_integral():
        raise NotIntegral(f"{lam} has odd doubled coordinates")
    if not dominant(rs, lam, subsystem):
        raise NotDominant(f"{lam} is not {subsystem}-dominant")
    w = _weyl(rs, subsystem)
    rho = _chamber_rho(rs, subsystem)
    return exact_divide(antisymmetrize(lam + rho, w), antisymmetrize(rho, w))


# -- Kostant partition function -------------------------------------------------


@lru_cache(maxsize=None)
def _partition_count(vecs, target, idx):
    """Number of ways to write target (simple-root coords) as a nonnegative
    integer combination of vecs[idx:]."""
    if all(t == 0 for t in target):
        return 1
    if idx == len(vecs):
        return 0
    if any(t < 0 for t in target):
        return 0
    v = vecs[idx]
    total = 0
    cur = target
    while True:
        total += _partition_count(vecs, cur, idx + 1)
        nxt = tuple(c - d for c, d in zip(cur, v))
        if any(c < 0 for c in nxt):
            break
        cur = nxt
    return total


def _simple_coords(rs, mu):
    """Coordinates of mu in the simple-root basis, or None when mu is not
    an integer vector of that lattice."""
    n = rs.rank
    # Solve C c = m with m the fundamental coordinates (doubled halved).
    aug = [
        [Fraction(rs.cartan_matrix[i][j]) for j in range(n)]
        + [Fraction(mu.coords[i], 2)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    coords = [row[n] for row in aug]
    if any(c.denominator != 1 for c in coords):
        return None
    return tuple(int(c) for c in coords)


def kostant_partition(rs, mu, positive_set=None):
    """Number of ways to write mu as a nonnegative integer combination of
    the given positive roots (defaults to the full positive system)."""
    if positive_set is None:
        roots = rs.positive_roots
    else:
        roots = tuple(positive_set)
    target = _simple_coords(rs, mu)
    if target is None or any(t < 0 for t in target):
        return 0
    vecs = tuple(
        r.simple_coeffs if isinstance(r, rootsys.Root)
        else _simple_coords(rs, r)
        for r in roots
    )
    vecs = tuple(sorted(vecs, reverse=True))
    return _partition_count(vecs, target, 0)


# -- weight multiplicities -------------------------------------------------------


def _require_dominant_integral(rs, lam, chamber="full"):
    if not lam.is_integral():
        raise NotIntegral(f"{lam} has odd doubled coordinates")
    if not dominant(rs, lam, chamber):
        raise NotDominant(f"{lam} is not dominant")


def mult_kostant(rs, lam, mu):
    """dim V_lam(mu) by the alternating sum over the full Weyl group of
    Kostant partition values at w(lam+rho) - (mu+rho)."""
    _require_dominant_integral(rs, lam)
    w = _weyl(rs, "full")
    rho = rs.rho
    lam_rho = lam + rho
    mu_rho = mu + rho
    total = 0
    for elt, sign in zip(w.elements, w.signs):
        total += sign * kostant_partition(rs, w.apply(elt, lam_rho) - mu_rho)
    return total


def _reflect(rs, mu, root_weight):
    """s_beta(mu), exact also for half-lattice mu."""
    k = rootsys.coroot_pairing(rs, mu, root_weight)
    coords = []
    for a, b in zip(mu.coords, root_weight.coords):
        entry = a - k * b
        assert entry.denominator == 1
        coords.append(int(entry))
    return Weight(tuple(coords))


def dominant_representative(rs, mu, chamber="full"):
    """The chamber-dominant Weyl representative of mu."""
    roots = rs.positive_roots if chamber == "full" else rs.compact_positive
    cur = mu
    while True:
        for r in roots:
            if inner(rs, r.weight, cur) < 0:
                cur = _reflect(rs, cur, r.weight)
                break
        else:
            return cur


def mult_freudenthal(rs, lam, mu, subsystem="full", allow_half_lattice=False):
    """dim V_lam(mu) by the recursive norm formula.

    Valid for the reductive compact subsystem as well; the central
    directions cancel in the norm difference.
    """
    if not allow_half_lattice and not lam.is_integral():
        raise NotIntegral(f"{lam} has odd doubled coordinates")
    if not dominant(rs, lam, subsystem):
        raise NotDominant(f"{lam} is not dominant")
    mu = dominant_representative(rs, mu, subsystem)
    memo = {}
    rho = _chamber_rho(rs, subsystem)
    positives = (
        rs.positive_roots if subsystem == "full" else rs.compact_positive
    )
    lam_rho = lam + rho
    norm_top = inner(rs, lam_rho, lam_rho)

    def below(nu):
        # Every weight of V_lam satisfies lam - nu in the positive root cone
        # of the subsystem; for a positive root alpha the condition is
        # monotone along nu -> nu + alpha, so string loops may break on it.
        diff = _subsystem_cone_coords(rs, lam - nu, subsystem)
        return diff is not None and all(c >= 0 for c in diff)

    def mult(nu):
        nu = dominant_representative(rs, nu, subsystem)
        if nu == lam:
            return 1
        if nu in memo:
            return memo[nu]
        if not below(nu):
            memo[nu] = 0
            return 0
        acc = Fraction(0)
        for r in positives:
            k = 1
            while True:
                up = nu + r.weight.scale(k)
                if not below(up):
                    break
                m = mult(up)
                if m:
                    acc += m * inner(rs, up, r.weight)
                k += 1
        nu_rho = nu + rho
        den = norm_top - inner(rs, nu_rho, nu_rho)
        if den == 0:
            memo[nu] = 0
            return 0
        val = 2 * acc / den
        assert val.denominator == 1 and val >= 0, "Freudenthal recursion broke"
        memo[nu] = int(val)
        return memo[nu]

    return mult(mu)


def _subsystem_cone_coords(rs, delta, subsystem):
    """Coordinates of delta in the subsystem's positive-root cone basis, or
    None when delta is not an integer combination of those roots."""
    if subsystem == "full":
        return _simple_coords(rs, delta)
    roots = rs.compact_positive
    # Express delta in the simple-root basis and restrict to the compact
    # roots' span; for the catalog systems the compact positives are
    # linearly independent, so solve exactly.
    full = _simple_coords(rs, delta)
    if full is None:
        return None
    basis = [r.simple_coeffs for r in roots]
    coeffs = _solve_integer(basis, full)
    return coeffs


def _solve_integer(basis, target):
    """Solve sum c_i basis_i = target with integer c_i, else None."""
    n = len(target)
    m = len(basis)
    aug = [
        [Fraction(basis[j][i]) for j in range(m)] + [Fraction(target[i])]
        for i in range(n)
    ]
    row = 0
    pivots = []
    for col in range(m):
        piv = next((r for r in range(row, n) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [a * inv for a in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    # Consistency of the remaining rows.
    for r in range(row, n):
        if aug[r][m] != 0:
            return None
    sol = [Fraction(0)] * m
    for r, col in enumerate(pivots):
        sol[col] = aug[r][m]
    if any(s.denominator != 1 for s in sol):
        return None
    return tuple(int(s) for s in sol)


# -- virtual representations and tensor products -----------------------------------


@dataclass
class VirtualRep:
    """Sparse integer multiplicity map over dominant weights of a chamber."""

    mults: dict
    chamber: str = "full"

    def __post_init__(self):
        self.mults = {
            (w if isinstance(w, Weight) else Weight(tuple(w))): int(c)
            for w, c in self.mults.items()
            if c
        }

    def multiplicity(self, w):
        return self.mults.get(w, 0)

    def __add__(self, other):
        if self.chamber != other.chamber:
            raise DimensionMismatch("mixed chambers")
        out = dict(self.mults)
        for w, c in other.mults.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                del out[w]
        return VirtualRep(out, self.chamber)

    def scale(self, k):
        return VirtualRep({w: k * c for w, c in self.mults.items()}, self.chamber)

    def total_dimension(self, rs):
        return sum(
            c * weyl_dimension(rs, w, self.chamber)
            for w, c in self.mults.items()
        )

    def to_json_obj(self):
        return [
            {"weight": list(w.coords), "coeff": c}
            for w, c in sorted(self.mults.items())
        ]


def validate_virtual_rep(rs, rep):
    for w in rep.mults:
        if not dominant(rs, w, rep.chamber):
            raise NotDominant(f"{w} not dominant for {rep.chamber} chamber")
    return rep


def weyl_dimension(rs, lam, chamber="full"):
    """Dimension of V_lam by the product formula over positive roots."""
    roots = rs.positive_roots if chamber == "full" else rs.compact_positive
    rho = _chamber_rho(rs, chamber)
    num = Fraction(1)
    den = Fraction(1)
    for r in roots:
        num *= inner(rs, lam + rho, r.weight)
        den *= inner(rs, rho, r.weight)
    val = num / den
    assert val.denominator == 1
    return int(val)


def _extract_max_dominant(rs, char, chamber):
    best = None
    for w in char.terms:
        if dominant(rs, w, chamber):
            if best is None or w.coords > best.coords:
                best = w
    return best


def tensor_decompose(rs, lam1, lam2, subsystem="full", allow_half_lattice=False):
    """Multiplicities of the irreducible constituents of V_lam1 (x) V_lam2.

    Character product followed by repeated extraction of the largest
    dominant weight in the remaining support.
    """
    product = weyl_character(rs, lam1, subsystem, allow_half_lattice) * \
        weyl_character(rs, lam2, subsystem, allow_half_lattice)
    out = {}
    while product.terms:
        top = _extract_max_dominant(rs, product, subsystem)
        if top is None:
            raise NotDominant("support lost Weyl symmetry during extraction")
        c = product.terms[top]
        out[top] = out.get(top, 0) + c
        product = product - c * weyl_character(
            rs, top, subsystem, allow_half_lattice=True
        )
    return VirtualRep({w: c for w, c in out.items() if c}, subsystem)


# -- numerical evaluation ------------------------------------------------------------


def evaluate(char, theta):
    """Value of the character at the torus point theta.

    The pairing is the plain coordinate dot product of the stored doubled
    coordinates with theta, so e^{mu} evaluates to exp(i <2 mu, theta>).
    """
    theta = tuple(theta)
    if char.rank is not None and len(theta) != char.rank:
        raise DimensionMismatch("theta length != rank")
    total = 0j
    for w, c in char.terms.items():
        total += c * cmath.exp(1j * sum(a * t for a, t in zip(w.coords, theta)))
    return total
