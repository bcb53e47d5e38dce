"""Typical sequences, block compression schemes, and their quantum analogues.

A source emits i.i.d. symbols from a finite alphabet; a block of n symbols is
epsilon-typical when its per-symbol surprisal sits within epsilon of the source
entropy.  Everything here is exact at desk scale: sets are enumerated, masses
are summed, and the quantum case is handled densely in the source eigenbasis
(ambient dimension capped at 256).  Asymptotic statements are therefore
checked as monotone trends over small n, never as limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .entropy import shannon_entropy, validate_dist
from .states import DensityMatrix, as_density, clamp_spectrum, dag, eig_hermitian, ket, outer

ENUMERATION_CAP_BITS = 24   # typical_set enumerates at most 2^24 sequences
QUANTUM_DIM_CAP = 256       # dense projectors capped at d^n <= 256


@dataclass(frozen=True)
class SourceModel:
    """i.i.d. classical source: symbol distribution, block length, epsilon."""
    probs: tuple[float, ...]
    block_length: int
    epsilon: float

    def __post_init__(self):
        validate_dist(np.asarray(self.probs))
        if self.block_length < 1:
            raise ValueError("block length must be at least 1")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")

    @property
    def alphabet_size(self) -> int:
        return len(self.probs)

    @property
    def entropy(self) -> float:
        return shannon_entropy(np.asarray(self.probs))


@dataclass(frozen=True)
class QuantumSourceModel:
    """i.i.d. quantum source: single-copy state, block length, epsilon."""
    rho: DensityMatrix
    block_length: int
    epsilon: float

    def __post_init__(self):
        as_density(self.rho)
        if self.block_length < 1:
            raise ValueError("block length must be at least 1")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")


def sequence_prob(seq, probs) -> float:
    """Product probability of an i.i.d. symbol sequence."""
    p = np.asarray(probs, dtype=float)
    out = 1.0
    for s in seq:
        out *= p[s]
    return out


def is_typical(seq, model: SourceModel) -> bool:
    """|surprisal(seq)/n - H| <= epsilon.

    Sequences containing a zero-probability symbol have infinite surprisal and
    are never typical.
    """
    p = np.asarray(model.probs, dtype=float)
    n = model.block_length
    if len(seq) != n:
        raise ValueError(f"sequence length {len(seq)} != block length {n}")
    total = 0.0
    for s in seq:
        s = int(s)
        if not 0 <= s < p.size:
            raise ValueError(f"symbol {s} outside the alphabet")
        if p[s] == 0.0:
            return False
        total -= math.log2(p[s])
    return abs(total / n - model.entropy) <= model.epsilon


def typical_set(model: SourceModel) -> list[tuple[int, ...]]:
    """Exact enumeration of the epsilon-typical set, in lexicographic order."""
    n, a = model.block_length, model.alphabet_size
    if n * math.log2(a) > ENUMERATION_CAP_BITS:
        raise ValueError("typical set enumeration above the size cap")
    p = np.asarray(model.probs, dtype=float)
    sur = [(-math.log2(x) if x > 0.0 else math.inf) for x in p]
    h, eps = model.entropy, model.epsilon
    out = []
    for seq in product(range(a), repeat=n):
        total = 0.0
        for s in seq:
            total += sur[s]
            if total == math.inf:
                break
        if abs(total / n - h) <= eps:
            out.append(seq)
    return out


def typical_set_mass(model: SourceModel) -> float:
    """Exact total probability of the typical set."""
    return float(sum(sequence_prob(seq, model.probs) for seq in typical_set(model)))


def multinomial_count(model: SourceModel) -> tuple[int, float]:
    """Exact count of sequences with the round(n p) composition, and 2^(nH).

    The ratio of the logarithms approaches 1 as n grows, which is the counting
    heart of block compression.  Requires the composition to round to integers
    summing to n.
    """
    n = model.block_length
    comp = [round(n * p) for p in model.probs]
    if sum(comp) != n:
        raise ValueError(f"composition {comp} does not sum to n={n}")
    exact = math.factorial(n)
    for c in comp:
        exact //= math.factorial(c)
    approx = 2.0 ** (n * model.entropy)
    return exact, approx


class CapacityError(ValueError):
    """Typical set does not fit the index space even though the rate exceeds H."""


class ShannonScheme:
    """Fixed-rate block compression built on the typical set.

    Sequences in ``included`` (a subset of the typical set) map bijectively to
    indices 1..len(included), assigned in lexicographic order; index 0 is the
    reserved failure index that every other sequence compresses to.
    ``reliability`` is the exact probability that decompression inverts
    compression.
    """

    def __init__(self, model: SourceModel, rate: float):
        if rate * model.block_length < 1.0:
            raise ValueError("rate times block length must be at least 1 bit")
        self.model = model
        self.rate = rate
        self.index_bits = int(math.floor(rate * model.block_length))
        capacity = (1 << self.index_bits) - 1  # index 0 is reserved
        seqs = typical_set(model)
        if len(seqs) > capacity:
            if rate > model.entropy:
                raise CapacityError(
                    f"typical set ({len(seqs)}) exceeds {capacity} indices at rate {rate} > H")
            # Undersized rate: keep the most probable typical sequences.
            seqs = sorted(seqs, key=lambda s: (-sequence_prob(s, model.probs), s))[:capacity]
            seqs.sort()
        self.included = seqs
        self._to_index = {seq: i + 1 for i, seq in enumerate(seqs)}
        self.reliability = float(sum(sequence_prob(s, model.probs) for s in seqs))

    def compress(self, seq) -> int:
        return self._to_index.get(tuple(int(s) for s in seq), 0)

    def decompress(self, index: int) -> tuple[int, ...] | None:
        if 1 <= index <= len(self.included):
            return self.included[index - 1]
        return None


def shannon_scheme(model: SourceModel, rate: float) -> ShannonScheme:
    return ShannonScheme(model, rate)


def _eigen_source(q: QuantumSourceModel) -> tuple[np.ndarray, np.ndarray, SourceModel]:
    """Classical source over the eigenvalues of the single-copy state."""
    rho = as_density(q.rho)
    if rho.dim ** q.block_length > QUANTUM_DIM_CAP:
        raise ValueError("dense quantum block above the dimension cap")
    w, v = eig_hermitian(rho.mat)
    w = clamp_spectrum(w)
    w = w / w.sum()
    return w, v, SourceModel(tuple(w), q.block_length, q.epsilon)


def typical_subspace_projector(q: QuantumSourceModel) -> np.ndarray:
    """Projector onto the span of typical eigenvector blocks of rho^(x n).

    In the source eigenbasis this reduces exactly to the classical typical
    set, so its rank equals the classical set size and tr(P rho^(x n)) equals
    the classical typical mass.
    """
    w, v, cls = _eigen_source(q)
    n = q.block_length
    d = w.size
    mask = np.zeros(d ** n, dtype=float)
    sur = [(-math.log2(x) if x > 0.0 else math.inf) for x in w]
    h = cls.entropy
    for flat, seq in enumerate(product(range(d), repeat=n)):
        total = sum(sur[s] for s in seq)
        if total < math.inf and abs(total / n - h) <= q.epsilon:
            mask[flat] = 1.0
    vn = _kron_power(v, n)
    return vn @ np.diag(mask.astype(complex)) @ dag(vn)


def _kron_power(m: np.ndarray, n: int) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for _ in range(n):
        out = np.kron(out, m)
    return out


def block_state(q: QuantumSourceModel) -> np.ndarray:
    """rho^(x n) as a dense matrix."""
    rho = as_density(q.rho)
    return _kron_power(rho.mat, q.block_length)


def schumacher_compress(q: QuantumSourceModel, sigma) -> DensityMatrix:
    """Compression map: project onto the typical subspace, dump the rest on |0>.

    C(sigma) = P sigma P + tr((I-P) sigma) |0><0| with |0> the first
    computational basis vector of the ambient block space.  Trace preserving
    by construction; decompression is the identity.
    """
    p = typical_subspace_projector(q)
    sig = as_density(sigma, dims=None).mat
    if sig.shape != p.shape:
        raise ValueError("state dimension does not match the block space")
    dn = p.shape[0]
    rest = np.eye(dn) - p
    weight = float(np.trace(rest @ sig).real)
    out = p @ sig @ p + weight * outer(ket(0, dn))
    return DensityMatrix(out)


def schumacher_fidelity(q: QuantumSourceModel, max_rank: int | None = None) -> float:
    """Entanglement fidelity of the compression scheme on rho^(x n).

    F = |tr(rho_n P)|^2 + sum_i |<i| rho_n |0>|^2 over an orthonormal basis
    of the orthocomplement.  ``max_rank`` optionally caps the kept subspace at
    the most probable eigenvector blocks, for rate-limited experiments.
    """
    w, v, cls = _eigen_source(q)
    n = q.block_length
    d = w.size
    sur = [(-math.log2(x) if x > 0.0 else math.inf) for x in w]
    h = cls.entropy
    tuples = list(product(range(d), repeat=n))
    lam = np.array([math.prod(w[s] for s in seq) for seq in tuples])
    surprisals = [sum(sur[s] for s in seq) for seq in tuples]
    typ = np.array([t < math.inf and abs(t / n - h) <= q.epsilon for t in surprisals])
    if max_rank is not None:
        order = np.argsort(-lam, kind="stable")
        typ = np.zeros(len(tuples), dtype=bool)
        typ[order[:max_rank]] = True

    rho_n = block_state(q)
    vn = _kron_power(v, n)
    mask = typ.astype(complex)
    p = vn @ np.diag(mask) @ dag(vn)
    fid = abs(np.trace(rho_n @ p)) ** 2
    e0 = ket(0, d ** n)
    rho_e0 = rho_n @ e0
    for flat in np.nonzero(~typ)[0]:
        fid += abs(np.vdot(vn[:, flat], rho_e0)) ** 2
    return float(fid)
