"""Independent oracles the library must agree with.

These deliberately avoid the library's own code paths: the W-matrix entropy
uses only the Kraus operators directly, the purified entanglement fidelity
goes through an explicit reference system, and the conditional-entropy bound
check enumerates every deterministic guessing map by brute force.
"""

import itertools
import math

import numpy as np


def w_matrix_entropy(rho_mat: np.ndarray, kraus: list[np.ndarray]) -> float:
    """Entropy exchange from W_ij = tr(E_i rho E_j^dagger)."""
    k = len(kraus)
    w = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            w[i, j] = np.trace(kraus[i] @ rho_mat @ kraus[j].conj().T)
    vals = np.linalg.eigvalsh(w)
    vals = vals[vals > 1e-12]
    return float(-np.sum(vals * np.log2(vals)))


def purified_entanglement_fidelity(rho_mat: np.ndarray, kraus: list[np.ndarray]) -> float:
    """<RQ| (I (x) E)(|RQ><RQ|) |RQ> for an explicit purification of rho."""
    d = rho_mat.shape[0]
    vals, vecs = np.linalg.eigh(rho_mat)
    psi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if vals[i] > 0.0:
            e = np.zeros(d, dtype=complex)
            e[i] = 1.0
            psi += math.sqrt(vals[i]) * np.kron(e, vecs[:, i])
    joint = np.outer(psi, psi.conj())
    out = np.zeros_like(joint)
    eye = np.eye(d, dtype=complex)
    for k in kraus:
        big = np.kron(eye, k)
        out += big @ joint @ big.conj().T
    return float(np.real(psi.conj() @ out @ psi))


def best_guess_conditional_entropy(joint: np.ndarray) -> tuple[float, float]:
    """(H(X|Y), best achievable error probability) by exhaustive guess maps."""
    joint = np.asarray(joint, dtype=float)
    py = joint.sum(axis=0)
    hxy = 0.0
    for x in range(joint.shape[0]):
        for y in range(joint.shape[1]):
            if joint[x, y] > 0.0:
                hxy -= joint[x, y] * math.log2(joint[x, y] / py[y])
    best_err = 1.0
    for guess in itertools.product(range(joint.shape[0]), repeat=joint.shape[1]):
        err = sum(joint[x, y] for y in range(joint.shape[1])
                  for x in range(joint.shape[0]) if x != guess[y])
        best_err = min(best_err, err)
    return hxy, best_err


def bloch_grid_min_fidelity(kraus: list[np.ndarray], steps: int = 40) -> float:
    """Dense Bloch-sphere grid minimum of the pure-state channel fidelity."""
    best = 1.0
    for i in range(steps + 1):
        theta = math.pi * i / steps
        for j in range(2 * steps):
            phi = math.pi * j / steps
            psi = np.array([math.cos(theta / 2),
                            complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2)])
            rho = np.outer(psi, psi.conj())
            out = sum(k @ rho @ k.conj().T for k in kraus)
            val = float(np.real(psi.conj() @ out @ psi))
            best = min(best, math.sqrt(max(val, 0.0)))
    return best
