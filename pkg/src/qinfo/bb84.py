"""Monte-Carlo simulator of BB84 key distribution with CSS reconciliation.

One protocol run follows the classical-computation variant end to end: random
bits are basis-encoded into qubits, pushed one by one through a noise model
(each qubit carried as its own 2x2 density matrix, never a joint state),
measured by the receiver in random bases, sifted, spot-checked against a
disagreement threshold, reconciled blockwise with the C1 code of a CSS pair,
and privacy-amplified down to the coset key of C2 in C1.

Aborts are ordinary outcomes recorded on the transcript, not errors.  All
randomness comes from named per-purpose streams derived from the master seed,
so a transcript can be replayed bit-exactly; note that a pseudorandom
generator only approximates the ideal of perfectly random protocol bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .codes import CssCode, coset_key, decode, encode, syndrome_table
from .entropy import mutual_information
from .qentropy import coherent_information, holevo_chi
from .rng import stream
from .states import (
    HADAMARD,
    ID2,
    KET_0,
    KET_1,
    KET_MINUS,
    KET_PLUS,
    DensityMatrix,
    QuantumChannel,
    as_density,
    depolarizing_channel,
    identity_channel,
    measure,
    outer,
    projective_measurement,
)

COMPUTATIONAL, HADAMARD_BASIS = 0, 1

# state_vectors[basis][bit]; bit 0/1 in the computational or Hadamard basis
STATE_VECTORS = np.array([[KET_0, KET_1], [KET_PLUS, KET_MINUS]])
STATE_MATRICES = np.array([[outer(KET_0), outer(KET_1)],
                           [outer(KET_PLUS), outer(KET_MINUS)]])


def bb84_state(bit: int, basis: int) -> np.ndarray:
    """The signal state for one (bit, basis) pair: |0>, |1>, |+> or |->."""
    return STATE_VECTORS[basis][bit]


def basis_matrix(basis: int) -> np.ndarray:
    return ID2 if basis == COMPUTATIONAL else HADAMARD


@dataclass(frozen=True)
class ChannelModel:
    """Per-qubit transport model: ideal, depolarizing(f) or intercept_resend(q)."""
    kind: str
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in ("ideal", "depolarizing", "intercept_resend"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not 0.0 <= self.param <= 1.0:
            raise ValueError("channel parameter must lie in [0, 1]")

    def operation(self) -> QuantumChannel:
        """The model as a single-qubit trace-preserving operation."""
        if self.kind == "ideal":
            return identity_channel(2)
        if self.kind == "depolarizing":
            return depolarizing_channel(self.param)
        q = self.param
        kraus = [np.sqrt(1.0 - q) * ID2]
        for basis in (COMPUTATIONAL, HADAMARD_BASIS):
            for bit in (0, 1):
                kraus.append(np.sqrt(q / 2.0) * STATE_MATRICES[basis][bit])
        return QuantumChannel(kraus)


@dataclass(frozen=True)
class ProtocolConfig:
    """Run parameters: key block n, qubit overhead delta, abort threshold, code."""
    n: int
    delta: float
    threshold: int
    code: CssCode
    master_seed: int

    def __post_init__(self):
        if self.n < 1 or self.delta < 0.0:
            raise ValueError("need n >= 1 and delta >= 0")
        if not 0 <= self.threshold < self.n:
            raise ValueError("threshold must satisfy 0 <= t < n")
        if self.code.logical_bits < 0 or self.code.t < 1:
            raise ValueError("reconciliation needs a CSS code correcting >= 1 error")

    @property
    def qubits_sent(self) -> int:
        return math.ceil((4 + self.delta) * self.n)


@dataclass(frozen=True)
class ProtocolTranscript:
    """Complete replayable record of one protocol run."""
    config_seed: int
    aborted: bool
    abort_reason: str | None
    alice_bits: np.ndarray
    alice_bases: np.ndarray
    bob_bases: np.ndarray
    bob_bits: np.ndarray
    sift_mask: np.ndarray
    check_indices: np.ndarray
    keep_indices: np.ndarray
    disagreements: int
    qber_estimate: float
    announced_offset: np.ndarray     # per block, x - v_k (mod 2), flattened
    alice_key: np.ndarray
    bob_key: np.ndarray
    block_success: np.ndarray
    eve_mask: np.ndarray | None = None
    eve_bases: np.ndarray | None = None
    eve_bits: np.ndarray | None = None

    @property
    def keys_match(self) -> bool:
        return (not self.aborted and self.alice_key.size > 0
                and np.array_equal(self.alice_key, self.bob_key))


def _born_p0(rhos: np.ndarray, bases: np.ndarray) -> np.ndarray:
    """Probability of outcome 0 for each qubit measured in its own basis."""
    v0 = STATE_VECTORS[bases, 0]
    return np.einsum("ni,nij,nj->n", v0.conj(), rhos, v0).real


def measure_qubit(rho, basis: int, rng: np.random.Generator) -> int:
    """Measure one qubit state in the computational or Hadamard basis."""
    ops = projective_measurement(basis_matrix(basis))
    p0 = measure(as_density(rho), ops)[0][0]
    return 0 if rng.random() < p0 else 1


def _measure_batch(rhos: np.ndarray, bases: np.ndarray,
                   rng: np.random.Generator) -> np.ndarray:
    p0 = _born_p0(rhos, bases)
    return (rng.random(p0.size) >= p0).astype(np.uint8)


def _transmit(rhos: np.ndarray, ch: ChannelModel, seed: int):
    """Send the qubit states through the channel; returns (states, eve record)."""
    if ch.kind == "ideal":
        return rhos, None
    if ch.kind == "depolarizing":
        f = ch.param
        return (1.0 - f) * rhos + (f / 2.0) * ID2[None, :, :], None
    count = rhos.shape[0]
    mask = stream(seed, "eve-mask").random(count) < ch.param
    eve_bases = stream(seed, "eve-bases").integers(0, 2, count).astype(np.uint8)
    eve_bits = _measure_batch(rhos, eve_bases, stream(seed, "eve-measure"))
    out = rhos.copy()
    out[mask] = STATE_MATRICES[eve_bases[mask], eve_bits[mask]]
    return out, (mask, eve_bases, eve_bits)


def reconcile_and_amplify(code: CssCode, x_alice: np.ndarray, x_bob: np.ndarray,
                          v: np.ndarray, table=None):
    """One reconciliation + privacy amplification block.

    Alice announces offset = x_alice - v; Bob decodes x_bob - offset with C1
    to recover v, and both reduce to the coset key of v + C2 in C1.  Returns
    (key_alice, key_bob, success); success means Bob's decode landed on v
    exactly, which is guaranteed when the strings differ in <= t places.
    """
    offset = (np.asarray(x_alice, dtype=np.uint8) ^ v).astype(np.uint8)
    key_a = coset_key(code, v)
    word = (np.asarray(x_bob, dtype=np.uint8) ^ offset).astype(np.uint8)
    out = decode(code.c1, word, code.t, table)
    if out is None:
        return key_a, np.zeros_like(key_a), False, offset
    v_hat = out[0]
    key_b = coset_key(code, v_hat)
    return key_a, key_b, bool(np.array_equal(v_hat, v)), offset


def run_bb84(cfg: ProtocolConfig, ch: ChannelModel) -> ProtocolTranscript:
    """Execute one complete protocol run.

    Steps: random bits and bases, basis encoding, transport, random-basis
    measurement, basis announcement and sifting (abort below 2n survivors),
    random selection of n check bits (abort above the disagreement
    threshold), then per-block codeword announcement, C1 decoding and coset
    key extraction.
    """
    seed = cfg.master_seed
    n, total = cfg.n, cfg.qubits_sent
    code = cfg.code

    alice_bits = stream(seed, "alice-bits").integers(0, 2, total).astype(np.uint8)
    alice_bases = stream(seed, "alice-bases").integers(0, 2, total).astype(np.uint8)
    bob_bases = stream(seed, "bob-bases").integers(0, 2, total).astype(np.uint8)

    n_blocks = n // code.n
    if n_blocks < 1:
        raise ValueError(f"key block n={n} shorter than one code block ({code.n})")
    msgs = stream(seed, "codewords").integers(0, 2, (n_blocks, code.c1.k)).astype(np.uint8)

    rhos = STATE_MATRICES[alice_bases, alice_bits]
    rhos, eve = _transmit(rhos, ch, seed)
    bob_bits = _measure_batch(rhos, bob_bases, stream(seed, "bob-measure"))

    sift_mask = alice_bases == bob_bases
    sifted = np.nonzero(sift_mask)[0]
    eve_fields = dict(
        eve_mask=eve[0] if eve else None,
        eve_bases=eve[1] if eve else None,
        eve_bits=eve[2] if eve else None,
    )
    base = dict(
        config_seed=seed,
        alice_bits=alice_bits, alice_bases=alice_bases,
        bob_bases=bob_bases, bob_bits=bob_bits, sift_mask=sift_mask,
        **eve_fields,
    )
    empty = np.zeros(0, dtype=np.uint8)

    if sifted.size < 2 * n:
        return ProtocolTranscript(
            aborted=True, abort_reason="sifting left fewer than 2n bits",
            check_indices=empty, keep_indices=empty, disagreements=0,
            qber_estimate=float("nan"), announced_offset=empty,
            alice_key=empty, bob_key=empty,
            block_success=np.zeros(0, dtype=bool), **base)

    perm = stream(seed, "selection").permutation(sifted.size)
    chosen = sifted[perm[:2 * n]]
    check_idx = np.sort(chosen[:n])
    keep_idx = np.sort(chosen[n:])
    disagreements = int(np.sum(alice_bits[check_idx] != bob_bits[check_idx]))
    qber = disagreements / n

    if disagreements > cfg.threshold:
        return ProtocolTranscript(
            aborted=True, abort_reason="check-bit disagreements above threshold",
            check_indices=check_idx, keep_indices=keep_idx,
            disagreements=disagreements, qber_estimate=qber,
            announced_offset=empty, alice_key=empty, bob_key=empty,
            block_success=np.zeros(0, dtype=bool), **base)

    x_alice = alice_bits[keep_idx]
    x_bob = bob_bits[keep_idx]
    table = syndrome_table(code.c1, code.t)
    keys_a, keys_b, offsets, successes = [], [], [], []
    for b in range(n_blocks):
        blk = slice(b * code.n, (b + 1) * code.n)
        v = encode(code.c1, msgs[b])
        ka, kb, ok, off = reconcile_and_amplify(code, x_alice[blk], x_bob[blk], v, table)
        keys_a.append(ka)
        keys_b.append(kb)
        offsets.append(off)
        successes.append(ok)

    return ProtocolTranscript(
        aborted=False, abort_reason=None,
        check_indices=check_idx, keep_indices=keep_idx,
        disagreements=disagreements, qber_estimate=qber,
        announced_offset=np.concatenate(offsets) if offsets else empty,
        alice_key=np.concatenate(keys_a) if keys_a else empty,
        bob_key=np.concatenate(keys_b) if keys_b else empty,
        block_success=np.array(successes, dtype=bool), **base)


def run_batch(cfg: ProtocolConfig, ch: ChannelModel, trials: int) -> list[ProtocolTranscript]:
    """Independent protocol runs with per-trial seeds derived from the master."""
    out = []
    for i in range(trials):
        trial_seed = int(stream(cfg.master_seed, "trial", str(i)).integers(0, 2 ** 62))
        out.append(run_bb84(replace(cfg, master_seed=trial_seed), ch))
    return out


def privacy_lower_bound(rho, op) -> float:
    """Guaranteed excess information of the receiver over the eavesdropper.

    Equals the coherent information of the transport channel on the signal
    state; negative values mean no privacy can be certified this way.
    """
    if isinstance(op, ChannelModel):
        op = op.operation()
    return coherent_information(as_density(rho), op)


def eve_holevo_bound() -> float:
    """Holevo bound on intercept-resend leakage per sifted bit.

    Eve's side information per signal is her intercepted qubit together with
    the basis announced afterwards, modelled as the block states
    sum_b 1/2 |psi_(a,b)><psi_(a,b)| (x) |b><b| conditioned on the key bit a.
    """
    blocks = []
    for a in (0, 1):
        big = np.zeros((4, 4), dtype=complex)
        for b in (COMPUTATIONAL, HADAMARD_BASIS):
            big += 0.5 * np.kron(STATE_MATRICES[b][a], outer(np.eye(2, dtype=complex)[b]))
        blocks.append((0.5, DensityMatrix(big, (2, 2))))
    return holevo_chi(blocks)


def eve_information_estimate(transcripts: list[ProtocolTranscript]) -> tuple[float, float]:
    """Empirical eavesdropper information, with its Holevo ceiling.

    Pools every sifted position Eve intercepted and plugs the joint counts of
    (Alice bit) versus (Eve bit, basis-matched flag) into the mutual
    information; the matched flag is available to Eve once bases are public.
    Returns (bits per intercepted sifted bit, Holevo bound).  No intercepted
    material gives 0.
    """
    counts = np.zeros((2, 4))
    for t in transcripts:
        if t.eve_mask is None:
            continue
        pos = np.nonzero(t.sift_mask & t.eve_mask)[0]
        if pos.size == 0:
            continue
        a = t.alice_bits[pos]
        e = t.eve_bits[pos]
        matched = (t.eve_bases[pos] == t.alice_bases[pos]).astype(np.uint8)
        np.add.at(counts, (a, e + 2 * matched), 1)
    total = counts.sum()
    if total == 0:
        return 0.0, eve_holevo_bound()
    return mutual_information(counts / total), eve_holevo_bound()
