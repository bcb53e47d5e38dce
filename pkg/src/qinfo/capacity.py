"""Channel capacity: classical alternating optimisation and quantum estimates.

A classical channel is a row-stochastic matrix p(y|x).  Its capacity
max over inputs of H(X:Y) is computed by the standard alternating-optimisation
iteration; the quantum product-state capacity is lower-bounded by a direct
search over pure-state ensembles of the output Holevo quantity.  The
square-root ("pretty good") measurement used by block decoding is built
explicitly from the signal projectors.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.optimize

from .entropy import mutual_information, validate_dist, validate_stochastic
from .qentropy import holevo_chi, von_neumann_entropy
from .rng import stream
from .states import (
    TOL_EIG,
    DensityMatrix,
    QuantumChannel,
    clamp_spectrum,
    dag,
    eig_hermitian,
    ket,
    outer,
)


def channel_mutual_info(px, transition) -> float:
    """H(X:Y) of the joint p(x) p(y|x) induced by feeding px into the channel."""
    px = validate_dist(px)
    t = validate_stochastic(transition)
    if t.shape[0] != px.size:
        raise ValueError("input distribution does not match the channel rows")
    return mutual_information(px[:, None] * t)


class ConvergenceError(RuntimeError):
    """Iteration cap reached; carries the best estimate found so far."""

    def __init__(self, capacity_bits: float, px: np.ndarray):
        super().__init__(f"capacity iteration did not converge (best {capacity_bits:.9f})")
        self.capacity_bits = capacity_bits
        self.px = px


def channel_capacity(transition, tol: float = 1e-9,
                     max_iter: int = 10_000) -> tuple[float, np.ndarray]:
    """Capacity of a discrete memoryless channel and a maximising input.

    Alternating optimisation over the input distribution and the backward
    channel; stops when the capacity increment falls below ``tol``.  Columns
    that no input can produce are dropped before iterating (support
    restriction), which also keeps every logarithm finite.
    """
    t = validate_stochastic(transition)
    live_cols = t.sum(axis=0) > 0.0
    t = t[:, live_cols]
    m = t.shape[0]
    r = np.full(m, 1.0 / m)
    mask = t > 0.0

    def achieved(rx: np.ndarray) -> float:
        py = np.maximum(rx @ t, 1e-300)
        ratio = np.where(mask, t / py[None, :], 1.0)
        return float(np.sum(rx[:, None] * np.where(mask, t * np.log2(ratio), 0.0)))

    last = -math.inf
    for _ in range(max_iter):
        q = r[:, None] * t                    # backward channel, unnormalised
        q /= np.maximum(q.sum(axis=0, keepdims=True), 1e-300)
        logq = np.where(mask, np.log(np.maximum(q, 1e-300)), 0.0)
        # log q already carries log r, so this is the whole multiplicative step
        expo = np.sum(np.where(mask, t * logq, 0.0), axis=1)
        expo -= expo.max()
        r = np.exp(expo)
        r /= r.sum()
        cap = achieved(r)
        if abs(cap - last) < tol:
            return cap, r
        last = cap
    raise ConvergenceError(last, r)


def bsc(flip: float) -> np.ndarray:
    """Binary symmetric channel; capacity 1 - H_bin(flip)."""
    if not 0.0 <= flip <= 1.0:
        raise ValueError("flip probability must lie in [0, 1]")
    return np.array([[1.0 - flip, flip], [flip, 1.0 - flip]])


def bec(erase: float) -> np.ndarray:
    """Binary erasure channel (third output = erasure); capacity 1 - erase."""
    if not 0.0 <= erase <= 1.0:
        raise ValueError("erasure probability must lie in [0, 1]")
    return np.array([[1.0 - erase, erase, 0.0], [0.0, erase, 1.0 - erase]])


def noiseless(k: int) -> np.ndarray:
    return np.eye(k)


def hsw_chi(op: QuantumChannel, ensemble: list[tuple[float, np.ndarray]]) -> float:
    """Holevo quantity of the channel outputs for a pure-state input ensemble.

    ``ensemble`` holds (probability, state vector) pairs.  This is the
    quantity whose maximum over ensembles is the product-state capacity.
    """
    probs = validate_dist([p for p, _ in ensemble])
    outputs = []
    for p, psi in zip(probs, ensemble):
        vec = np.asarray(psi[1], dtype=complex).ravel()
        if vec.size != op.dim_in:
            raise ValueError("ensemble state does not match the channel input")
        vec = vec / np.linalg.norm(vec)
        outputs.append((p, DensityMatrix(op.apply_mat(outer(vec)))))
    return holevo_chi(outputs)


def _theta_to_ensemble(theta: np.ndarray, d: int) -> list[tuple[float, np.ndarray]]:
    """Unconstrained reals -> (simplex weights, unit vectors) for d^2 states."""
    m = d * d
    logits = theta[:m]
    logits = logits - logits.max()
    w = np.exp(logits)
    w /= w.sum()
    out = []
    rest = theta[m:].reshape(m, 2 * d)
    for j in range(m):
        vec = rest[j, :d] + 1j * rest[j, d:]
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            vec = ket(j % d, d)
            norm = 1.0
        out.append((float(w[j]), vec / norm))
    return out


def hsw_capacity_estimate(op: QuantumChannel, restarts: int = 16, tol: float = 1e-8,
                          seed: int = 0) -> tuple[float, list[tuple[float, np.ndarray]]]:
    """Lower bound on the product-state capacity by direct ensemble search.

    Optimises ensembles of exactly d^2 pure states (enough for the maximum)
    with a derivative-free simplex search.  The first start is the
    computational-basis ensemble; the rest are random with seeds derived from
    ``seed``, so the result is deterministic and nondecreasing in
    ``restarts``.
    """
    d = op.dim_in
    m = d * d
    size = m + m * 2 * d

    def objective(theta: np.ndarray) -> float:
        return -hsw_chi(op, _theta_to_ensemble(theta, d))

    canonical = np.zeros(size)
    block = canonical[m:].reshape(m, 2 * d)
    for j in range(m):
        block[j, j % d] = 1.0

    best_val = -math.inf
    best_theta = canonical
    for trial in range(restarts + 1):
        if trial == 0:
            theta0 = canonical
        else:
            rng = stream(seed, f"hsw-restart-{trial}")
            theta0 = rng.normal(size=size)
        res = scipy.optimize.minimize(
            objective, theta0, method="Nelder-Mead",
            options={"maxiter": 2000, "xatol": 1e-7, "fatol": tol, "adaptive": True})
        if -res.fun > best_val:
            best_val = -res.fun
            best_theta = res.x
    return best_val, _theta_to_ensemble(best_theta, d)


def square_root_measurement(p_global: np.ndarray,
                            signals: list[np.ndarray]) -> list[np.ndarray]:
    """POVM E_M = T^(-1/2) P P_M P T^(-1/2) with T = sum_M P P_M P.

    The inverse square root is taken on the support of T; the returned list
    carries one element per signal plus a final completion element
    I - (support projector), so the whole list sums to the identity.  Each
    element is positive semidefinite.
    """
    p = np.asarray(p_global, dtype=complex)
    d = p.shape[0]
    if d > 16:
        raise ValueError("square-root measurement capped at dimension 16")
    compressed = [p @ np.asarray(s, dtype=complex) @ p for s in signals]
    total = np.zeros((d, d), dtype=complex)
    for c in compressed:
        total += c
    w, v = eig_hermitian(total)
    w = clamp_spectrum(w, tol=1e-8)
    support = w > max(TOL_EIG, 1e-12 * max(w.max(), 1.0))
    inv_sqrt_diag = np.where(support, 1.0 / np.sqrt(np.where(support, w, 1.0)), 0.0)
    inv_sqrt = v @ np.diag(inv_sqrt_diag.astype(complex)) @ dag(v)
    povm = [inv_sqrt @ c @ inv_sqrt for c in compressed]
    support_proj = v @ np.diag(support.astype(complex)) @ dag(v)
    povm.append(np.eye(d, dtype=complex) - support_proj)
    return povm


def output_entropy_bound(op: QuantumChannel, ensemble) -> float:
    """S of the average channel output; an upper bound for the Holevo quantity."""
    probs = validate_dist([p for p, _ in ensemble])
    avg = np.zeros((op.dim_out, op.dim_out), dtype=complex)
    for p, psi in zip(probs, ensemble):
        vec = np.asarray(psi[1], dtype=complex).ravel()
        vec = vec / np.linalg.norm(vec)
        avg += p * op.apply_mat(outer(vec))
    return von_neumann_entropy(DensityMatrix(avg))
