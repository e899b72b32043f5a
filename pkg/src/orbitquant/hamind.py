"""Numerical verification of Hamiltonian induction on matrix models.

Every check runs on coadjoint orbits G.xi realized inside the algebra via
Killing duality: the induced two-form (orbit block plus p block, no cross
terms at the base point), the momentum map g.xi -> Ad(g)xi, the pairing
omega(X_m, Y_m) = -<xi, [X, Y]>, and the cross-section correspondence
between Killing-orthogonality to p and membership in the K-orbit.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from . import rootsys
from .elliptic import ChamberPoint, strongly_elliptic
from .errors import (
    InvariantViolation,
    NotKFixed,
    UnknownModel,
    ZeroXi,
)

_CATALOG_ENV = "ORBITQUANT_CATALOG"
_RANK_TOL = 1e-8


@dataclass
class LieModel:
    """Matrix realization of a real semisimple algebra with its k/p split."""

    name: str
    n: int
    basis: list  # real n x n numpy arrays
    k_indices: list
    p_indices: list
    torus_indices: list
    simple_root_functionals: np.ndarray
    rs: object  # abstract root system from the rootsys catalog
    killing: np.ndarray = field(default=None)
    _flat: np.ndarray = field(default=None, repr=False)
    _dual_map: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self):
        return len(self.basis)

    def cartan_involution(self, x):
        return -x.T

    def coefficients(self, mat):
        """Coefficients of mat in the basis; raises when mat leaves the span."""
        coef, res, *_ = np.linalg.lstsq(self._flat, mat.reshape(-1), rcond=None)
        recon = self._flat @ coef
        if np.max(np.abs(recon - mat.reshape(-1))) > 1e-9:
            raise InvariantViolation("matrix is not in the algebra span")
        return coef

    def ad(self, x):
        """Matrix of ad(x) on basis coefficients."""
        cols = [self.coefficients(x @ b - b @ x) for b in self.basis]
        return np.stack(cols, axis=1)

    def killing_pair(self, x, y):
        """B(x, y) = trace(ad x . ad y), via the precomputed Gram matrix."""
        cx = self.coefficients(x)
        cy = self.coefficients(y)
        return float(cx @ self.killing @ cy)

    def k_basis(self):
        return [self.basis[i] for i in self.k_indices]

    def p_basis(self):
        return [self.basis[i] for i in self.p_indices]

    def torus_basis(self):
        return [self.basis[i] for i in self.torus_indices]

    def random_element(self, rng, indices=None, scale=1.0):
        idx = range(self.dim) if indices is None else indices
        out = np.zeros((self.n, self.n))
        for i in idx:
            out = out + rng.uniform(-scale, scale) * self.basis[i]
        return out

    def chamber_to_dual(self, xi):
        """Matrix H in t with B(H, .) equal to the functional of xi."""
        coords = xi.coords if isinstance(xi, ChamberPoint) else tuple(xi)
        vec = self._dual_map @ np.array([float(c) for c in coords])
        out = np.zeros((self.n, self.n))
        for c, i in zip(vec, self.torus_indices):
            out = out + c * self.basis[i]
        return out


def _catalog_path():
    override = os.environ.get(_CATALOG_ENV)
    if override:
        return override
    return os.path.join(os.path.dirname(__file__), "data", "models.json")


def _load_catalog():
    with open(_catalog_path()) as fh:
        return json.load(fh)


def load_model(name):
    """Load and validate a catalog model: sl2r, su21, sp4r or su2."""
    catalog = _load_catalog()
    if name not in catalog:
        raise UnknownModel(f"{name!r}; available: {sorted(catalog)}")
    doc = catalog[name]
    basis = [np.array(m, dtype=float) for m in doc["basis"]]
    model = LieModel(
        name=name,
        n=doc["n"],
        basis=basis,
        k_indices=list(doc["k_indices"]),
        p_indices=list(doc["p_indices"]),
        torus_indices=list(doc["torus_indices"]),
        simple_root_functionals=np.array(doc["simple_root_functionals"]),
        rs=rootsys.catalog(doc["root_system"]),
    )
    model._flat = np.stack([m.reshape(-1) for m in basis], axis=1)
    ads = [model.ad(b) for b in basis]
    model.killing = np.array(
        [[np.trace(a @ b) for b in ads] for a in ads]
    )
    _validate_model(model)
    model._dual_map = _dual_map(model)
    return model


def _validate_model(model, tol_bracket=1e-10, tol_sign=1e-9):
    """Cartan-split invariants: bracket grading, Killing definiteness,
    Killing orthogonality of k and p, commuting torus inside k."""
    kset = set(model.k_indices)
    pset = set(model.p_indices)
    if kset | pset != set(range(model.dim)) or kset & pset:
        raise InvariantViolation("k/p indices do not split the basis")

    def mass_outside(mat, allowed):
        coef = model.coefficients(mat)
        outside = [c for i, c in enumerate(coef) if i not in allowed]
        return max((abs(c) for c in outside), default=0.0)

    for i in range(model.dim):
        for j in range(i + 1, model.dim):
            br = model.basis[i] @ model.basis[j] - model.basis[j] @ model.basis[i]
            target = (
                kset
                if ((i in kset) == (j in kset))
                else pset
            )
            if mass_outside(br, target) > tol_bracket:
                raise InvariantViolation(
                    f"bracket [{i},{j}] violates the Cartan grading"
                )

    kk = model.killing[np.ix_(model.k_indices, model.k_indices)]
    if model.k_indices and np.max(np.linalg.eigvalsh(kk)) > -tol_sign:
        raise InvariantViolation("Killing form not negative definite on k")
    if model.p_indices:
        pp = model.killing[np.ix_(model.p_indices, model.p_indices)]
        if np.min(np.linalg.eigvalsh(pp)) < tol_sign:
            raise InvariantViolation("Killing form not positive definite on p")
        kp = model.killing[np.ix_(model.k_indices, model.p_indices)]
        if np.max(np.abs(kp)) > tol_bracket:
            raise InvariantViolation("k and p are not Killing-orthogonal")

    ts = model.torus_basis()
    for i, a in enumerate(ts):
        if model.torus_indices[i] not in kset:
            raise InvariantViolation("torus index outside k")
        for b in ts[i + 1:]:
            if np.max(np.abs(a @ b - b @ a)) > tol_bracket:
                raise InvariantViolation("torus basis does not commute")


def _dual_map(model):
    """Matrix sending doubled chamber coordinates to torus coefficients of
    the Killing dual."""
    rs = model.rs
    n = rs.rank
    cinv = np.linalg.inv(np.array(rs.cartan_matrix, dtype=float))
    fun = model.simple_root_functionals  # row l: functional of alpha_l
    # Functional of the weight with doubled coordinates x, on torus basis:
    # eta(K_j) = sum_i (x_i / 2) sum_l Cinv[l, i] fun[l, j].
    # Row i: halved functional of the i-th fundamental weight.
    weight_fn = 0.5 * (cinv.T @ fun)
    ts = model.torus_basis()
    gram = np.array(
        [[model.killing_pair(a, b) for b in ts] for a in ts]
    )
    if n != len(ts):
        raise InvariantViolation("torus dimension differs from the rank")
    return np.linalg.solve(gram, weight_fn.T)


@dataclass
class InducedPointModel:
    """Base-point data of the induced symplectic manifold G x_K N."""

    model: LieModel
    xi: ChamberPoint
    xi_dual: np.ndarray
    kind: str  # "point" or "k_orbit"
    orbit_generators: list  # elements of k generating the N-tangent
    n_tangent: list  # tangent matrices [Y_a, xi_dual]
    omega_matrix: np.ndarray

    @property
    def chart_dim(self):
        return len(self.orbit_generators) + len(self.model.p_indices)

    def chart_generators(self):
        return list(self.orbit_generators) + self.model.p_basis()


def build_induced(model, xi, n_kind="point"):
    """Assemble the induced two-form at the base point.

    For N a point the form lives on p alone; for N the K-orbit of xi the
    orbit block carries the canonical orbit pairing and the p block the
    term -<xi, [X, Y]>.  Cross blocks vanish at the base point.
    """
    if isinstance(xi, ChamberPoint):
        if xi.is_zero():
            raise ZeroXi("chamber point is zero")
    xi_dual = model.chamber_to_dual(xi)
    if np.max(np.abs(xi_dual)) < 1e-14:
        raise ZeroXi("chamber point dualizes to zero")

    def bracket(a, b):
        return a @ b - b @ a

    if n_kind == "point":
        scale = np.max(np.abs(xi_dual))
        worst = max(
            np.max(np.abs(bracket(k, xi_dual))) for k in model.k_basis()
        )
        if worst > 1e-10 * max(scale, 1.0):
            raise NotKFixed(
                f"[k, xi] has mass {worst:.3e}; point induction needs a "
                "K-fixed chamber point"
            )
        gens = []
    elif n_kind == "k_orbit":
        cols = [
            model.coefficients(bracket(k, xi_dual)) for k in model.k_basis()
        ]
        a = np.stack(cols, axis=1)
        _, svals, vt = np.linalg.svd(a)
        rank = int(np.sum(svals > _RANK_TOL * max(svals[0], 1e-30)))
        gens = []
        for row in vt[:rank]:
            gens.append(
                sum(c * k for c, k in zip(row, model.k_basis()))
            )
    else:
        raise ValueError(f"unknown N kind {n_kind!r}")

    tangent = [bracket(y, xi_dual) for y in gens]
    r = len(gens)
    dp = len(model.p_indices)
    omega = np.zeros((r + dp, r + dp))
    for i in range(r):
        for j in range(r):
            omega[i, j] = -model.killing_pair(
                xi_dual, bracket(gens[i], gens[j])
            )
    pb = model.p_basis()
    for i in range(dp):
        for j in range(dp):
            omega[r + i, r + j] = -model.killing_pair(
                xi_dual, bracket(pb[i], pb[j])
            )
    return InducedPointModel(
        model=model,
        xi=xi if isinstance(xi, ChamberPoint) else ChamberPoint(tuple(xi)),
        xi_dual=xi_dual,
        kind=n_kind,
        orbit_generators=gens,
        n_tangent=tangent,
        omega_matrix=omega,
    )


def check_nondegenerate(induced, tol=1e-9):
    """Smallest singular value of the assembled form exceeds tol."""
    if induced.omega_matrix.size == 0:
        return False
    svals = np.linalg.svd(induced.omega_matrix, compute_uv=False)
    return bool(svals[-1] > tol)


def orbit_form_value(model, eta, a, b):
    """Canonical orbit two-form at eta applied to tangent matrices a, b:
    represent a = [A, eta], b = [B, eta] and return -B(eta, [A, B]).
    The value does not depend on the representatives."""
    la = np.stack(
        [model.coefficients(x @ eta - eta @ x) for x in model.basis], axis=1
    )
    ca, *_ = np.linalg.lstsq(la, model.coefficients(a), rcond=None)
    cb, *_ = np.linalg.lstsq(la, model.coefficients(b), rcond=None)
    amat = sum(c * x for c, x in zip(ca, model.basis))
    bmat = sum(c * x for c, x in zip(cb, model.basis))
    br = amat @ bmat - bmat @ amat
    return -model.killing_pair(eta, br)


def momentum_residual(induced, n_samples=50, h=1e-5, seed=0):
    """Worst finite-difference defect of the momentum identity
    d<Phi, X>(v) = omega(v, X_M) near the base point.

    The differential follows curves s -> Ad(exp(sY)) eta with a central
    difference, so the residual is O(h^2).
    """
    model = induced.model
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(n_samples):
        z = model.random_element(rng, scale=0.2)
        g = expm(z)
        eta = g @ induced.xi_dual @ np.linalg.inv(g)
        x = model.random_element(rng)
        y = model.random_element(rng)
        gp = expm(h * y)
        gm = expm(-h * y)
        f_plus = model.killing_pair(gp @ eta @ np.linalg.inv(gp), x)
        f_minus = model.killing_pair(gm @ eta @ np.linalg.inv(gm), x)
        diff = (f_plus - f_minus) / (2.0 * h)
        pairing_value = model.killing_pair(eta, x @ y - y @ x)
        worst = max(worst, abs(diff - pairing_value))
    return worst


def kks_pairing_check(model, xi, n_samples=100, seed=0, induced=None):
    """Worst defect of omega(X_m, Y_m) + B(xi, [X, Y]) at the base point,
    with the left side evaluated through the assembled block form."""
    if induced is None:
        induced = build_induced(model, xi, "k_orbit")
    rng = random.Random(seed)
    r = len(induced.orbit_generators)
    frame = np.stack(
        [model.coefficients(t) for t in induced.n_tangent], axis=1
    ) if r else None
    worst = 0.0
    for _ in range(n_samples):
        xs = [model.random_element(rng) for _ in range(2)]
        coords = []
        for x in xs:
            ck = np.zeros(r + len(model.p_indices))
            xk = np.zeros((model.n, model.n))
            coef = model.coefficients(x)
            for pos, idx in enumerate(model.p_indices):
                ck[r + pos] = coef[idx]
            for idx in model.k_indices:
                xk = xk + coef[idx] * model.basis[idx]
            if r:
                tk = xk @ induced.xi_dual - induced.xi_dual @ xk
                sol, *_ = np.linalg.lstsq(
                    frame, model.coefficients(tk), rcond=None
                )
                ck[:r] = sol
            coords.append(ck)
        lhs = float(coords[0] @ induced.omega_matrix @ coords[1])
        br = xs[0] @ xs[1] - xs[1] @ xs[0]
        rhs = -model.killing_pair(induced.xi_dual, br)
        worst = max(worst, abs(lhs - rhs))
    return worst


def closedness_residual(induced, h=1e-4, n_triples=12, seed=0,
                        component_override=None):
    """Finite-difference estimate of the exterior derivative of the orbit
    form at the base point, in exponential chart coordinates.

    Outer derivatives use forward differences, so the residual of the
    (identically closed) form is O(h).  ``component_override(x, j, k)``
    replaces the chart component function, for injecting test forms.
    """
    model = induced.model
    gens = induced.chart_generators()
    d = len(gens)
    if d < 3:
        return 0.0

    def point(xvec):
        z = sum(c * g for c, g in zip(xvec, gens))
        g = expm(z)
        return g @ induced.xi_dual @ np.linalg.inv(g)

    def tangent(xvec, j):
        step = 1e-6
        ep = np.zeros(d)
        ep[j] = step
        return (point(xvec + ep) - point(xvec - ep)) / (2.0 * step)

    def component(xvec, j, k):
        if component_override is not None:
            return component_override(xvec, j, k)
        eta = point(xvec)
        return orbit_form_value(model, eta, tangent(xvec, j), tangent(xvec, k))

    rng = random.Random(seed)
    triples = set()
    limit = min(n_triples, d * (d - 1) * (d - 2) // 6)
    while len(triples) < limit:
        t = tuple(sorted(rng.sample(range(d), 3)))
        triples.add(t)

    worst = 0.0
    base = np.zeros(d)
    for (i, j, k) in sorted(triples):
        def deriv(a, b, c):
            ea = np.zeros(d)
            ea[a] = h
            return (component(ea, b, c) - component(base, b, c)) / h

        val = deriv(i, j, k) - deriv(j, i, k) + deriv(k, i, j)
        worst = max(worst, abs(val))
    return worst


def _orbit_distance(model, eta, xi_dual, starts=2, seed=0):
    """Frobenius distance from eta to the K-orbit of xi_dual, by quasi-
    Newton minimization over exponential coordinates of K."""
    kb = model.k_basis()
    rng = np.random.default_rng(seed)

    def cost(c):
        z = sum(ci * k for ci, k in zip(c, kb))
        g = expm(z)
        return float(np.linalg.norm(g @ xi_dual @ np.linalg.inv(g) - eta))

    best = cost(np.zeros(len(kb)))
    for _ in range(starts):
        x0 = rng.uniform(-1.5, 1.5, size=len(kb))
        res = minimize(cost, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14,
                                "maxiter": 4000})
        best = min(best, float(res.fun))
        if best < 1e-9:
            break
    return best


def cross_section_check(model, xi, n_samples=200, tol=1e-6, seed=0):
    """Numerical shadow of the cross-section correspondence: a point of
    the coadjoint orbit annihilates p exactly when it lies on the K-orbit
    of the base point.

    Samples group elements (half of them inside K), classifies each orbit
    point both ways, and reports counts and worst margins.
    """
    xi_dual = model.chamber_to_dual(xi)
    rng = random.Random(seed)
    pb = model.p_basis()
    members = 0
    false_pos = 0
    false_neg = 0
    worst_member_defect = 0.0  # largest |B(eta, p)| over in-orbit points
    worst_nonmember_margin = np.inf  # smallest defect over out points
    for i in range(n_samples):
        in_k = i % 2 == 0
        indices = model.k_indices if in_k else None
        z = model.random_element(rng, indices=indices)
        g = expm(z)
        eta = g @ xi_dual @ np.linalg.inv(g)
        defect = max(
            (abs(model.killing_pair(eta, p)) for p in pb), default=0.0
        )
        membership = defect < tol
        sym_mass = float(np.linalg.norm((eta + eta.T) / 2.0))
        if sym_mass > 10.0 * tol:
            in_orbit = False
            dist = sym_mass  # certified lower bound on the distance
        else:
            dist = _orbit_distance(model, eta, xi_dual, seed=seed + i)
            in_orbit = dist < tol
        if membership:
            members += 1
            worst_member_defect = max(worst_member_defect, defect)
            if not in_orbit:
                false_pos += 1
        else:
            worst_nonmember_margin = min(worst_nonmember_margin, defect)
            if in_orbit:
                false_neg += 1
    return {
        "check": "cross-section",
        "model": model.name,
        "xi": [str(c) for c in xi.coords],
        "samples": n_samples,
        "members": members,
        "false_positives": false_pos,
        "false_negatives": false_neg,
        "worst_member_defect": worst_member_defect,
        "worst_nonmember_margin": (
            None if worst_nonmember_margin is np.inf
            else worst_nonmember_margin
        ),
        "pass": bool(false_pos == 0 and false_neg == 0),
    }


def report_json(report):
    return json.dumps(report, sort_keys=True)
