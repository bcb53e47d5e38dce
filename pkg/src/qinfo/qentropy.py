"""Von Neumann entropy and the derived quantum information measures.

The bipartite measures expect a DensityMatrix carrying two subsystem dims
(left factor = A).  Ensembles are plain lists of ``(probability, state)``
pairs.  Entropies are in bits.

Unlike the classical case, the conditional entropy S(A|B) can be negative;
for a pure joint state that is exactly the signature of entanglement.
"""

from __future__ import annotations

import math

import numpy as np

from . import entropy as centropy
from .states import (
    TOL_EIG,
    TOL_RECON,
    DensityMatrix,
    QuantumChannel,
    as_density,
    clamp_spectrum,
    dag,
    eig_hermitian,
    ket,
    outer,
    partial_trace,
    purify,
    random_pure_state,
)


def von_neumann_entropy(rho) -> float:
    """S(rho) = -tr(rho log2 rho); 0 iff pure, log2 d iff maximally mixed."""
    w = as_density(rho).eigenvalues()
    mask = w > 0.0
    return float(-np.sum(w[mask] * np.log2(w[mask])))


def quantum_relative_entropy(rho, sigma) -> float:
    """S(rho||sigma) = tr(rho log rho) - tr(rho log sigma), possibly inf.

    Nonnegative and zero iff the states coincide.  Evaluated in sigma's
    eigenbasis with clamped eigenvalues; if rho has weight on sigma's kernel
    the measure is infinite (support violation).
    """
    rho = as_density(rho)
    sigma = as_density(sigma)
    if rho.dim != sigma.dim:
        raise ValueError("states must share a dimension")
    wr, vr = eig_hermitian(rho.mat)
    wr = clamp_spectrum(wr)
    mask = wr > 0.0
    term_rho = float(np.sum(wr[mask] * np.log2(wr[mask])))

    ws, vs = eig_hermitian(sigma.mat)
    ws = clamp_spectrum(ws)
    # weight of rho on each sigma eigenvector
    weight = np.einsum("ij,ji->i", dag(vs) @ rho.mat, vs).real
    weight = np.clip(weight, 0.0, None)
    kernel = ws <= TOL_EIG
    if np.any(weight[kernel] > TOL_RECON):
        return math.inf
    live = (~kernel) & (weight > 0.0)
    term_sigma = float(np.sum(weight[live] * np.log2(ws[live])))
    return term_rho - term_sigma


def _bipartite(rho) -> DensityMatrix:
    rho = as_density(rho)
    if rho.dims is None or len(rho.dims) != 2:
        raise ValueError("operation needs a state with two subsystem dims")
    return rho


def quantum_joint_entropy(rho_ab) -> float:
    """S(A,B), the entropy of the composite state."""
    return von_neumann_entropy(_bipartite(rho_ab))


def quantum_conditional_entropy(rho_ab) -> float:
    """S(A|B) = S(A,B) - S(B); negative values flag entanglement."""
    rho_ab = _bipartite(rho_ab)
    return von_neumann_entropy(rho_ab) - von_neumann_entropy(partial_trace(rho_ab, "B"))


def quantum_mutual_information(rho_ab) -> float:
    """S(A:B) = S(A) + S(B) - S(A,B)."""
    rho_ab = _bipartite(rho_ab)
    sa = von_neumann_entropy(partial_trace(rho_ab, "A"))
    sb = von_neumann_entropy(partial_trace(rho_ab, "B"))
    return sa + sb - von_neumann_entropy(rho_ab)


def is_entangled_pure(psi: np.ndarray, dims: tuple[int, int]) -> bool:
    """True iff the bipartite pure state has Schmidt rank > 1.

    Equivalent to S(A|B) < 0 for the pure joint state.  Mixed-state
    entanglement is out of scope for this criterion.
    """
    rho = DensityMatrix.pure(psi, tuple(dims))
    w = partial_trace(rho, "A").eigenvalues()
    return int(np.sum(w > TOL_EIG)) > 1


Ensemble = list  # alias: list of (probability, DensityMatrix) pairs


def ensemble_state(ensemble: Ensemble) -> DensityMatrix:
    """Average state sum_x p_x rho_x of an ensemble."""
    probs = centropy.validate_dist([p for p, _ in ensemble])
    states = [as_density(r) for _, r in ensemble]
    dim = states[0].dim
    if any(s.dim != dim for s in states):
        raise ValueError("ensemble members must share a dimension")
    avg = np.zeros((dim, dim), dtype=complex)
    for p, s in zip(probs, states):
        avg += p * s.mat
    return DensityMatrix(avg, states[0].dims)


def holevo_chi(ensemble: Ensemble) -> float:
    """chi = S(sum p rho) - sum p S(rho): the accessible-information bound.

    Nonnegative, at most H(p), and an upper bound on the classical mutual
    information extractable from the ensemble by any measurement.
    """
    avg = ensemble_state(ensemble)
    chi = von_neumann_entropy(avg)
    for p, s in ensemble:
        if p > 0.0:
            chi -= p * von_neumann_entropy(as_density(s))
    return chi


def entropy_exchange(rho, op: QuantumChannel) -> float:
    """Noise S(rho, E) injected by a channel, via explicit purification.

    Purify rho with a reference R, apply I_R (x) E, and take the entropy of
    the joint output R'Q'.  Independent of the purification chosen.
    """
    rho = as_density(rho)
    if op.dim_in != rho.dim or op.dim_out != rho.dim:
        raise ValueError("entropy exchange needs a square channel matching the state")
    psi = purify(rho)
    joint = outer(psi)
    extended = op.extend_left(rho.dim)
    out = DensityMatrix(extended.apply_mat(joint))
    return von_neumann_entropy(out)


def coherent_information(rho, op: QuantumChannel) -> float:
    """I(rho, E) = S(E(rho)) - S(rho, E), the quantum mutual-information analogue."""
    rho = as_density(rho)
    out = op.apply_mat(rho.mat)
    return von_neumann_entropy(DensityMatrix(out)) - entropy_exchange(rho, op)


def fidelity(rho, sigma) -> float:
    """F(rho, sigma) = tr sqrt(rho^1/2 sigma rho^1/2), in [0, 1].

    Symmetric, 1 iff the states coincide, and |<psi|phi>| on pure states.
    """
    rho = as_density(rho)
    sigma = as_density(sigma)
    if rho.dim != sigma.dim:
        raise ValueError("states must share a dimension")
    w, v = eig_hermitian(rho.mat)
    sqrt_rho = v @ np.diag(np.sqrt(clamp_spectrum(w)).astype(complex)) @ dag(v)
    inner = sqrt_rho @ sigma.mat @ sqrt_rho
    mu = clamp_spectrum(np.linalg.eigvalsh(inner), tol=1e-8)
    return float(min(1.0, np.sum(np.sqrt(mu))))


def entanglement_fidelity(rho, op: QuantumChannel) -> float:
    """F(rho, E) = sum_i |tr(rho E_i)|^2: how well E preserves entanglement.

    Equals the squared overlap of a purification with the channel output on
    the purified state.
    """
    rho = as_density(rho)
    if op.dim_in != rho.dim or op.dim_out != rho.dim:
        raise ValueError("entanglement fidelity needs a square channel matching the state")
    total = 0.0
    for k in op.kraus:
        total += abs(np.trace(rho.mat @ k)) ** 2
    return float(min(1.0, total))


def ensemble_average_fidelity(ensemble: Ensemble, op: QuantumChannel) -> float:
    """F-bar = sum_j p_j F(rho_j, E(rho_j))^2."""
    probs = centropy.validate_dist([p for p, _ in ensemble])
    total = 0.0
    for p, (_, s) in zip(probs, ensemble):
        s = as_density(s)
        total += p * fidelity(s, DensityMatrix(op.apply_mat(s.mat))) ** 2
    return float(total)


def min_fidelity_estimate(op: QuantumChannel, trials: int = 256,
                          rng: np.random.Generator | None = None,
                          refine_steps: int = 32) -> float:
    """Upper estimate of min over pure states of F(|psi>, E(|psi><psi|)).

    Samples ``trials`` uniform pure states, then runs a coordinate-descent
    refinement from the best one (step halving per round).  The estimate never
    lies below the true minimum; for a fixed generator stream it is
    nonincreasing in ``trials`` (exactly so with ``refine_steps=0``, up to
    refinement convergence jitter otherwise).
    """
    if rng is None:
        rng = np.random.default_rng(0)
    d = op.dim_in

    def pure_fidelity(psi: np.ndarray) -> float:
        out = op.apply_mat(outer(psi))
        val = np.real(np.conj(psi) @ out @ psi)
        return float(np.sqrt(max(val, 0.0)))

    best_psi = random_pure_state(d, rng)
    best = pure_fidelity(best_psi)
    for _ in range(max(trials - 1, 0)):
        psi = random_pure_state(d, rng)
        f = pure_fidelity(psi)
        if f < best:
            best, best_psi = f, psi

    step = 0.5
    coords = [(i, part) for i in range(d) for part in (1.0, 1j)]
    for _ in range(refine_steps):
        improved = False
        for i, part in coords:
            for sign in (1.0, -1.0):
                cand = best_psi.copy()
                cand[i] += sign * step * part
                cand /= np.linalg.norm(cand)
                f = pure_fidelity(cand)
                if f < best:
                    best, best_psi = f, cand
                    improved = True
        if not improved:
            step *= 0.5
    return best


def quantum_fano_gap(rho, op: QuantumChannel) -> float:
    """Slack of the noise bound S(rho,E) <= H(F) + (1-F) log2(d^2 - 1).

    F is the entanglement fidelity; the returned gap (bound minus entropy
    exchange) is nonnegative up to numerical tolerance.
    """
    rho = as_density(rho)
    f = entanglement_fidelity(rho, op)
    d2 = rho.dim ** 2
    bound = centropy.binary_entropy(f) + (1.0 - f) * math.log2(d2 - 1)
    return bound - entropy_exchange(rho, op)


def classical_quantum_state(ensemble: Ensemble) -> DensityMatrix:
    """Block state sum_i p_i |i><i| (x) rho_i used by the mixing bound."""
    probs = centropy.validate_dist([p for p, _ in ensemble])
    states = [as_density(r) for _, r in ensemble]
    n = len(states)
    d = states[0].dim
    big = np.zeros((n * d, n * d), dtype=complex)
    for i, (p, s) in enumerate(zip(probs, states)):
        big += p * np.kron(outer(ket(i, n)), s.mat)
    return DensityMatrix(big, (n, d))
