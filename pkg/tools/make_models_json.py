#!/usr/bin/env python3
"""Regenerate src/orbitquant/data/models.json.

Builds the matrix catalog (basis matrices, k/p split, torus, simple-root
functionals on the torus basis) and cross-validates each model against its
abstract root system by comparing ad-eigenvalue multisets before writing.
"""

import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from orbitquant import rootsys  # noqa: E402


def realify(mat):
    """Complex n x n -> real 2n x 2n block matrix [[A, -B], [B, A]]."""
    a = np.real(mat)
    b = np.imag(mat)
    top = np.hstack([a, -b])
    bot = np.hstack([b, a])
    return np.vstack([top, bot])


def build_sl2r():
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    p1 = np.array([[1.0, 0.0], [0.0, -1.0]])
    p2 = np.array([[0.0, 1.0], [1.0, 0.0]])
    return {
        "n": 2,
        "basis": [j, p1, p2],
        "k_indices": [0],
        "p_indices": [1, 2],
        "torus_indices": [0],
        # alpha(J) = 2: ad(J) has eigenvalues +-2i on the complexified p.
        "simple_root_functionals": [[2.0]],
        "root_system": "sl2r",
    }


def build_su2():
    l1 = np.array([[0.0, 0, 0], [0, 0, -1], [0, 1, 0]])
    l2 = np.array([[0.0, 0, 1], [0, 0, 0], [-1, 0, 0]])
    l3 = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]])
    return {
        "n": 3,
        "basis": [l1, l2, l3],
        "k_indices": [0, 1, 2],
        "p_indices": [],
        "torus_indices": [2],
        "simple_root_functionals": [[1.0]],
        "root_system": "su2",
    }


def build_su21():
    def cmat(rows):
        return np.array(rows, dtype=complex)

    k1 = cmat([[1j, 0, 0], [0, -1j, 0], [0, 0, 0]])
    k2 = cmat([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    k3 = cmat([[0, 1j, 0], [1j, 0, 0], [0, 0, 0]])
    k4 = cmat([[1j, 0, 0], [0, 1j, 0], [0, 0, -2j]])
    p1 = cmat([[0, 0, 1], [0, 0, 0], [1, 0, 0]])
    p2 = cmat([[0, 0, 1j], [0, 0, 0], [-1j, 0, 0]])
    p3 = cmat([[0, 0, 0], [0, 0, 1], [0, 1, 0]])
    p4 = cmat([[0, 0, 0], [0, 0, 1j], [0, -1j, 0]])
    basis = [realify(m) for m in (k1, k2, k3, k4, p1, p2, p3, p4)]
    return {
        "n": 6,
        "basis": basis,
        "k_indices": [0, 1, 2, 3],
        "p_indices": [4, 5, 6, 7],
        "torus_indices": [0, 3],
        # torus H(a,b) = a*k1 + b*k4 = diag(i(a+b), i(b-a), -2ib):
        # e_1 - e_2 -> 2a, e_2 - e_3 -> -a + 3b.
        "simple_root_functionals": [[2.0, 0.0], [-1.0, 3.0]],
        "root_system": "su21",
    }


def build_sp4r():
    z = np.zeros((2, 2))
    a_skew = np.array([[0.0, 1.0], [-1.0, 0.0]])
    b1 = np.diag([1.0, 0.0])
    b2 = np.diag([0.0, 1.0])
    b3 = np.array([[0.0, 1.0], [1.0, 0.0]])

    def kmat(a, b):
        return np.vstack([np.hstack([a, b]), np.hstack([-b, a])])

    def pmat(a, b):
        return np.vstack([np.hstack([a, b]), np.hstack([b, -a])])

    basis = [
        kmat(a_skew, z),
        kmat(z, b1),
        kmat(z, b2),
        kmat(z, b3),
        pmat(b1, z),
        pmat(b2, z),
        pmat(b3, z),
        pmat(z, b1),
        pmat(z, b2),
        pmat(z, b3),
    ]
    return {
        "n": 4,
        "basis": basis,
        "k_indices": [0, 1, 2, 3],
        "p_indices": [4, 5, 6, 7, 8, 9],
        "torus_indices": [1, 2],
        # torus H(a,b) = a*T1 + b*T2 ~ u(2) diag(ia, ib):
        # e_1 - e_2 -> a - b, 2 e_2 -> 2b.
        "simple_root_functionals": [[1.0, -1.0], [0.0, 2.0]],
        "root_system": "sp4r",
    }


def validate(model):
    """ad-eigenvalues of random torus elements must match the abstract
    root functionals (multiset per 1e-8)."""
    basis = model["basis"]
    dim = len(basis)
    flat = np.stack([m.reshape(-1) for m in basis], axis=1)

    def ad_matrix(x):
        cols = []
        for m in basis:
            br = x @ m - m @ x
            coef, res, *_ = np.linalg.lstsq(flat, br.reshape(-1), rcond=None)
            assert not res or res[0] < 1e-18
            cols.append(coef)
        return np.stack(cols, axis=1)

    rs = rootsys.catalog(model["root_system"])
    fun = np.array(model["simple_root_functionals"])
    rng = np.random.default_rng(12345)
    for _ in range(3):
        coeffs = rng.uniform(-1.0, 1.0, size=len(model["torus_indices"]))
        h = sum(c * basis[i] for c, i in zip(coeffs, model["torus_indices"]))
        eig = np.linalg.eigvals(ad_matrix(h))
        assert np.max(np.abs(np.real(eig))) < 1e-8
        got = np.sort(np.imag(eig))
        want = [0.0] * (dim - len(rs.roots))
        for r in rs.roots:
            val = sum(
                c * np.dot(fun[i], coeffs)
                for i, c in enumerate(r.simple_coeffs)
            )
            want.append(val)
        want = np.sort(np.array(want))
        assert np.max(np.abs(got - want)) < 1e-8, (
            model["root_system"], got, want)
    print(f"validated {model['root_system']}")


def main():
    out = {}
    for build in (build_sl2r, build_su2, build_su21, build_sp4r):
        model = build()
        validate(model)
        name = model["root_system"]
        out[name] = {
            "n": model["n"],
            "basis": [[[float(x) for x in row] for row in m]
                      for m in model["basis"]],
            "k_indices": model["k_indices"],
            "p_indices": model["p_indices"],
            "torus_indices": model["torus_indices"],
            "simple_root_functionals": model["simple_root_functionals"],
            "root_system": name,
        }
    path = os.path.join(
        os.path.dirname(__file__), "..", "src", "orbitquant", "data",
        "models.json",
    )
    with open(path, "w") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {os.path.abspath(path)}")


if __name__ == "__main__":
    main()
