"""Independent reference computations used to check the production code."""
from functools import reduce

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
P0 = np.diag([1, 0]).astype(complex)
P1 = np.diag([0, 1]).astype(complex)


def ry(t):
    return np.array([[np.cos(t / 2), -np.sin(t / 2)], [np.sin(t / 2), np.cos(t / 2)]], dtype=complex)


def rz(p):
    return np.diag([np.exp(-0.5j * p), np.exp(0.5j * p)])


def embed(op, q, n):
    """Full 2^n operator acting with ``op`` on qubit q (qubit 0 = least significant)."""
    mats = [op if k == q else I2 for k in reversed(range(n))]
    return reduce(np.kron, mats)


def cnot_full(c, t, n):
    return embed(P0, c, n) + embed(P1, c, n) @ embed(X, t, n)


def circuit_unitary(theta, n):
    """Dense unitary of the H / RY / RZ / CNOT-chain circuit."""
    u = np.eye(2**n, dtype=complex)
    for q in range(n):
        u = embed(H, q, n) @ u
    for j in range(n):
        u = embed(ry(theta[j]), j, n) @ u
        u = embed(rz(theta[j + n]), j, n) @ u
    for k in range(n - 1):
        u = cnot_full(k, k + 1, n) @ u
    return u


def parity_oracle(theta, n):
    """<psi| Z x ... x Z |psi> by dense matrices."""
    psi = circuit_unitary(theta, n)[:, 0]
    zz = reduce(np.kron, [np.diag([1.0, -1.0])] * n)
    return float(np.real(np.conj(psi) @ zz @ psi))
