"""Exact root systems for equal-rank real forms.

Weights are stored in *doubled* fundamental-weight coordinates: the vector
kept for a weight mu is 2*mu, so half-sums of roots and e^{alpha/2}
exponents stay integral.  A weight is *integral* (a genuine lattice weight
of the group rather than of a double cover) iff every stored coordinate is
even.

The simple roots carry compact/noncompact markings; the grading of every
root is the mod-2 additive extension of the markings, which is validated
against the Z2-grading rule grade(a+b) = grade(a) XOR grade(b).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatch, GradingInconsistent, InvalidCartan

_MAX_CLOSURE = 10000


@dataclass(frozen=True, order=True)
class Weight:
    """Lattice point of Lambda/2 in doubled fundamental-weight coordinates."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def rank(self):
        return len(self.coords)

    def is_integral(self):
        return all(c % 2 == 0 for c in self.coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __add__(self, other):
        self._check(other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return Weight(tuple(-a for a in self.coords))

    def scale(self, k):
        """Integer multiple k*mu (k may be negative)."""
        return Weight(tuple(k * a for a in self.coords))

    def _check(self, other):
        if len(self.coords) != len(other.coords):
            raise DimensionMismatch(
                f"rank {len(self.coords)} vs {len(other.coords)}"
            )

    def __repr__(self):
        return f"Weight{self.coords}"


@dataclass(frozen=True)
class Root:
    """A root together with its grading and simple-root coefficients."""

    weight: Weight
    noncompact: bool
    simple_coeffs: tuple

    @property
    def height(self):
        return sum(self.simple_coeffs)

    @property
    def positive(self):
        return self.height > 0


@dataclass(frozen=True)
class RealRootSystem:
    """Cartan data plus the compact/noncompact grading of the roots."""

    rank: int
    cartan_matrix: tuple
    symmetrizer: tuple
    simple_markings: tuple  # True where the simple root is noncompact
    roots: tuple  # all roots, as Root records
    name: str = ""
    _gram: tuple = field(default=None, repr=False, compare=False)

    # -- derived views ----------------------------------------------------

    @property
    def positive_roots(self):
        return tuple(r for r in self.roots if r.positive)

    @property
    def compact_positive(self):
        return tuple(r for r in self.positive_roots if not r.noncompact)

    @property
    def noncompact_positive(self):
        return tuple(r for r in self.positive_roots if r.noncompact)

    @property
    def noncompact_roots(self):
        return tuple(r for r in self.roots if r.noncompact)

    @property
    def q(self):
        """Number of noncompact positive roots, half of dim G/K."""
        return len(self.noncompact_positive)

    @property
    def rho(self):
        return _half_sum_over(self.positive_roots, self.rank)

    @property
    def rho_c(self):
        return _half_sum_over(self.compact_positive, self.rank)

    @property
    def rho_n(self):
        return _half_sum_over(self.noncompact_positive, self.rank)

    def simple_roots(self):
        out = [None] * self.rank
        for r in self.roots:
            if r.positive and r.height == 1:
                out[r.simple_coeffs.index(1)] = r
        return tuple(out)

    def root_by_weight(self, w):
        for r in self.roots:
            if r.weight == w:
                return r
        raise KeyError(w)

    # -- serialization -----------------------------------------------------

    def to_dict(self):
        return {
            "type": self.name,
            "cartan": [list(row) for row in self.cartan_matrix],
            "noncompact_simple": [
                i + 1 for i, m in enumerate(self.simple_markings) if m
            ],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _half_sum_over(roots, rank):
    """Half-sum of the given roots; the stored doubled vector is the plain
    sum of the roots' undoubled coordinates, hence exact."""
    total = [0] * rank
    for r in roots:
        for i, c in enumerate(r.weight.coords):
            total[i] += c // 2
    return Weight(tuple(total))


# -- construction ----------------------------------------------------------


def _validate_cartan(cartan):
    n = len(cartan)
    for row in cartan:
        if len(row) != n:
            raise InvalidCartan("matrix is not square")
    for i in range(n):
        if cartan[i][i] != 2:
            raise InvalidCartan("diagonal entries must equal 2")
        for j in range(n):
            a = cartan[i][j]
            if not isinstance(a, int):
                raise InvalidCartan("entries must be integers")
            if i != j:
                if a > 0:
                    raise InvalidCartan("off-diagonal entries must be <= 0")
                if (a == 0) != (cartan[j][i] == 0):
                    raise InvalidCartan("zero pattern must be symmetric")


def _symmetrizer(cartan):
    """Positive integers d with d_i C_ij = d_j C_ji, min 1 per component."""
    n = len(cartan)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        comp = [start]
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and cartan[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Fraction(cartan[i][j], cartan[j][i])
                    comp.append(j)
                    stack.append(j)
        if any(d[i] <= 0 for i in comp):
            raise InvalidCartan("matrix is not symmetrizable")
        low = min(d[i] for i in comp)
        for i in comp:
            d[i] /= low
    out = []
    for v in d:
        if v.denominator != 1:
            raise InvalidCartan("symmetrizer is not integral")
        out.append(int(v))
    return tuple(out)


def _check_finite_type(cartan, d):
    """Leading principal minors of the symmetrized matrix must be positive."""
    n = len(cartan)
    sym = [[Fraction(d[i] * cartan[i][j]) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if _det_fraction([row[:k] for row in sym[:k]]) <= 0:
            raise InvalidCartan("matrix is not of finite type")


def _det_fraction(m):
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def build_root_system(cartan_matrix, noncompact_simple=(), name=""):
    """Generate the full graded root system from Cartan data.

    ``noncompact_simple`` holds 1-based indices of the simple roots marked
    noncompact; the grading of every other root is the mod-2 additive
    extension of the markings.
    """
    cartan = tuple(tuple(int(a) for a in row) for row in cartan_matrix)
    _validate_cartan(cartan)
    n = len(cartan)
    d = _symmetrizer(cartan)
    _check_finite_type(cartan, d)

    marks = [False] * n
    for i in noncompact_simple:
        if not 1 <= i <= n:
            raise InvalidCartan(f"noncompact simple index {i} out of range")
        marks[i - 1] = True
    marks = tuple(marks)

    # Doubled coordinates of alpha_j = column j of the Cartan matrix, doubled.
    simple_doubled = [
        tuple(2 * cartan[i][j] for i in range(n)) for j in range(n)
    ]

    # Closure under simple reflections; track simple-root coefficients.
    seen = {}
    frontier = []
    for j in range(n):
        coeffs = tuple(1 if i == j else 0 for i in range(n))
        seen[simple_doubled[j]] = coeffs
        frontier.append(simple_doubled[j])
    while frontier:
        if len(seen) > _MAX_CLOSURE:
            raise InvalidCartan("root closure does not terminate")
        x = frontier.pop()
        coeffs = seen[x]
        for i in range(n):
            # s_i in fundamental coordinates: m -> m - m_i * alpha_i.
            mi = x[i] // 2  # doubled coords of roots are even
            y = tuple(
                x[k] - mi * simple_doubled[i][k] for k in range(n)
            )
            ycoeffs = tuple(
                c - (mi if k == i else 0) for k, c in enumerate(coeffs)
            )
            if y not in seen:
                seen[y] = ycoeffs
                frontier.append(y)

    roots = []
    for x, coeffs in sorted(seen.items()):
        grade = sum(c for c, m in zip(coeffs, marks) if m) % 2
        roots.append(Root(Weight(x), bool(grade), coeffs))

    gram = _gram_matrix(cartan, d)
    rs = RealRootSystem(
        rank=n,
        cartan_matrix=cartan,
        symmetrizer=d,
        simple_markings=marks,
        roots=tuple(roots),
        name=name,
        _gram=gram,
    )
    _validate_grading(rs)
    return rs


def _gram_matrix(cartan, d):
    """D * C^{-1} as exact Fractions; m^T G n is the inner product on
    fundamental coordinates, normalized so short roots have length^2 = 2."""
    n = len(cartan)
    aug = [
        [Fraction(cartan[i][j]) for j in range(n)]
        + [Fraction(int(i == j)) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    cinv = [row[n:] for row in aug]
    return tuple(
        tuple(d[i] * cinv[i][j] for j in range(n)) for i in range(n)
    )


def _validate_grading(rs):
    by_weight = {r.weight.coords: r for r in rs.roots}
    for a in rs.roots:
        neg = tuple(-c for c in a.weight.coords)
        if neg not in by_weight:
            raise GradingInconsistent("root set not closed under negation")
        if by_weight[neg].noncompact != a.noncompact:
            raise GradingInconsistent("grading not even under negation")
        for b in rs.roots:
            s = tuple(x + y for x, y in zip(a.weight.coords, b.weight.coords))
            if s in by_weight:
                want = a.noncompact != b.noncompact
                if by_weight[s].noncompact != want:
                    raise GradingInconsistent(
                        f"grading of {s} violates the Z2 rule"
                    )


# -- inner product and chambers ---------------------------------------------


def pairing(rs, xcoords, ycoords):
    """Exact bilinear form on raw coordinate vectors (Fractions allowed).

    For doubled vectors x = 2*mu, y = 2*nu this equals 4*(mu, nu) in the
    normalization where short roots have squared length 2.
    """
    if len(xcoords) != rs.rank or len(ycoords) != rs.rank:
        raise DimensionMismatch("coordinate length != rank")
    g = rs._gram
    total = Fraction(0)
    for i, xi in enumerate(xcoords):
        if xi:
            row = g[i]
            total += xi * sum(row[j] * yj for j, yj in enumerate(ycoords) if yj)
    return total


def inner(rs, mu, nu):
    """W-invariant inner product of two stored (doubled) weight vectors.

    Returns half the raw pairing of the doubled vectors, so for a short
    root alpha, inner(alpha, alpha) == 4.  Every predicate built on it
    (dominance, walls, regularity) is invariant under this global scale.
    """
    return pairing(rs, mu.coords, nu.coords) / 2


def coroot_pairing(rs, mu, beta_weight):
    """<mu, beta^vee> = 2 (mu, beta) / (beta, beta), exact."""
    num = 2 * pairing(rs, mu.coords, beta_weight.coords)
    den = pairing(rs, beta_weight.coords, beta_weight.coords)
    return num / den


def dominant(rs, mu, chamber="full"):
    """True iff (alpha, mu) >= 0 for every positive root of the chamber."""
    roots = _chamber_positive(rs, chamber)
    return all(inner(rs, r.weight, mu) >= 0 for r in roots)


def _chamber_positive(rs, chamber):
    if chamber == "full":
        return rs.positive_roots
    if chamber == "compact":
        return rs.compact_positive
    raise ValueError(f"unknown chamber {chamber!r}")


# -- Weyl groups -------------------------------------------------------------


@dataclass(frozen=True)
class WeylGroup:
    """Finite reflection group as integer matrices on doubled coordinates."""

    elements: tuple  # tuples of row-tuples
    signs: tuple  # det(w) per element
    generator_roots: tuple  # Root records of the generating reflections

    def __len__(self):
        return len(self.elements)

    def apply(self, w, weight):
        return Weight(
            tuple(
                sum(row[j] * weight.coords[j] for j in range(len(row)))
                for row in w
            )
        )

    def orbit(self, weight):
        return {self.apply(w, weight) for w in self.elements}


def reflection_matrix(rs, beta):
    """Integer matrix of s_beta acting on (doubled) coordinates."""
    n = rs.rank
    x = beta.weight.coords
    den = pairing(rs, x, x)
    # v_k turns a doubled vector into its coroot pairing: sum_k v_k x_k
    # equals <mu, beta^vee>; v may be half-integral but x_a * v_b is not.
    vs = []
    for k in range(n):
        e = tuple(1 if i == k else 0 for i in range(n))
        vs.append(2 * pairing(rs, e, x) / den)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            entry = (1 if a == b else 0) - x[a] * vs[b]
            if entry.denominator != 1:
                raise InvalidCartan("non-integral reflection matrix entry")
            row.append(int(entry))
        rows.append(tuple(row))
    return tuple(rows)


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _det_int(m):
    return int(_det_fraction([[Fraction(a) for a in row] for row in m]))


def weyl_group(rs, generators="full"):
    """Group generated by reflections in all roots or compact roots only."""
    gen_roots = _chamber_positive(rs, generators)
    gens = [reflection_matrix(rs, r) for r in gen_roots]
    identity = tuple(
        tuple(1 if i == j else 0 for j in range(rs.rank))
        for i in range(rs.rank)
    )
    elements = {identity}
    frontier = [identity]
    while frontier:
        w = frontier.pop()
        for g in gens:
            wg = _mat_mul(g, w)
            if wg not in elements:
                if len(elements) > _MAX_CLOSURE:
                    raise InvalidCartan("Weyl closure does not terminate")
                elements.add(wg)
                frontier.append(wg)
    elements = tuple(sorted(elements))
    signs = tuple(_det_int(w) for w in elements)
    return WeylGroup(elements=elements, signs=signs, generator_roots=tuple(gen_roots))


# -- catalog and JSON ---------------------------------------------------------

_CARTAN = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "C2": ((2, -2), (-1, 2)),
}

CATALOG = {
    "sl2r": ("A1", (1,)),
    "su21": ("A2", (2,)),
    "sp4r": ("C2", (2,)),
    "su2": ("A1", ()),
    "su3": ("A2", ()),
}


def catalog(name):
    """Build a named root system: sl2r, su21, sp4r, su2 or su3."""
    try:
        ctype, marks = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown root system {name!r}") from None
    return build_root_system(_CARTAN[ctype], marks, name=name)


def from_dict(doc):
    return build_root_system(
        doc["cartan"],
        doc.get("noncompact_simple", ()),
        name=doc.get("type", ""),
    )


def from_json(text):
    return from_dict(json.loads(text))
