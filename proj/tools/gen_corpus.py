#!/usr/bin/env python3
"""Regenerates data/corpus from closed-form definitions using numpy only."""

import json
import math
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus"


def entries(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def emission(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, 1]], dtype=complex)


def rot(a):
    return np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]], dtype=complex)


def env_outer_to_sys_outer(m, n, d):
    t = m.reshape(d, n, d, n).transpose(1, 0, 3, 2)
    return t.reshape(n * d, n * d)


def block_example(alpha, beta, theta):
    m = np.zeros((8, 8), dtype=complex)
    m[0:2, 0:2] = rot(alpha)
    m[2:4, 2:4] = rot(beta)
    m[4:8, 4:8] = emission(theta)
    return env_outer_to_sys_outer(m, 2, 4)


def unit(d, i, j):
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1
    return e


def operator_file(name, n, d, m, kind="unitary"):
    return {"schema_version": 1, "name": name, "kind": kind, "sys_dim": n, "env_dim": d,
            "matrix": entries(m)}


def dipole_file(name, h_s, couplings):
    return {"schema_version": 1, "name": name, "kind": "dipole", "sys_dim": h_s.shape[0],
            "env_dim": len(couplings) + 1, "h_s": entries(h_s),
            "couplings": [entries(v) for v in couplings]}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    i2 = np.eye(2, dtype=complex)
    u_swapped = np.kron(sz, unit(2, 0, 1)) + np.kron(i2, unit(2, 1, 0))
    v_swapped = np.kron(i2, unit(2, 0, 0)) + np.kron(sz, unit(2, 1, 1))

    skew = np.eye(4, dtype=complex)
    eps = 0.05
    while True:
        skew[0, 1] = skew[1, 0] = eps
        r = np.linalg.norm(skew.conj().T @ skew - np.eye(4))
        if abs(r - 0.1) < 1e-12:
            break
        eps *= 0.1 / r

    files = {
        "emission_pi_6": operator_file("emission_pi_6", 2, 2, emission(math.pi / 6)),
        "emission_pi_3": operator_file("emission_pi_3", 2, 2, emission(math.pi / 3)),
        "emission_pi_2": operator_file("emission_pi_2", 2, 2, emission(math.pi / 2)),
        "block_example": operator_file("block_example", 2, 4, block_example(0.3, 0.7, math.pi / 4)),
        "swapped_pair_u": operator_file("swapped_pair_u", 2, 2, u_swapped),
        "swapped_pair_v": operator_file("swapped_pair_v", 2, 2, v_swapped),
        "identity_2x3": operator_file("identity_2x3", 2, 3, np.eye(6)),
        "dipole_sx": dipole_file("dipole_sx", np.zeros((2, 2)), [sx]),
        "dipole_sx_sz": dipole_file("dipole_sx_sz", np.zeros((2, 2)), [sx, sz]),
        "dipole_sx_padded": dipole_file("dipole_sx_padded", sz, [sx, np.zeros((2, 2)), np.zeros((2, 2))]),
        "non_unitary": operator_file("non_unitary", 2, 2, skew),
    }
    for name, doc in files.items():
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n")

    manifest = {"schema_version": 1, "entries": [
        {"file": "emission_pi_6.json", "expect": {"dim_A": 4, "dim_Ar": 4, "commutant_A": 1, "kc_dim": 0, "kq_dim": 2}},
        {"file": "emission_pi_3.json", "expect": {"dim_A": 4, "dim_Ar": 4, "commutant_A": 1, "kc_dim": 0, "kq_dim": 2}},
        {"file": "emission_pi_2.json", "expect": {"dim_A": 4, "dim_Ar": 4, "commutant_A": 1, "kc_dim": 0, "kq_dim": 2}},
        {"file": "block_example.json", "expect": {"kc_dim": 2, "kq_dim": 2, "classical_form": "U_c",
                                                 "kc_span": [0, 1], "angles": [0.3, 0.7]}},
        {"file": "swapped_pair_u.json", "expect": {"dim_A": 4, "dim_Ar": 2, "Ar_commutative": True,
                                                  "same_action_with": "swapped_pair_v.json",
                                                  "w": [[0, 1], [1, 0]]}},
        {"file": "swapped_pair_v.json", "expect": {"dim_A": 2, "dim_Ar": 2}},
        {"file": "identity_2x3.json", "expect": {"dim_A": 1, "dim_Ar": 1, "kc_dim": 3, "kq_dim": 0}},
        {"file": "dipole_sx.json", "expect": {"case": "commutative-rank-one", "theta": 0.0, "m": 1}},
        {"file": "dipole_sx_sz.json", "expect": {"case": "block-split", "dim_A": 9, "m": 2}},
        {"file": "dipole_sx_padded.json", "expect": {"case": "commutative-rank-one", "m": 1}},
        {"file": "non_unitary.json", "expect": {"exit": 2}},
    ]}
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")


if __name__ == "__main__":
    main()
