"""GF(2) linear block codes, syndrome decoding, and CSS quantum codes.

Bit strings are numpy uint8 vectors of 0/1.  A generator matrix G is n x k and
acts on column messages (codeword = G m mod 2); the parity check H is
(n - k) x n with H G = 0.  Decoding uses an exhaustive syndrome lookup table
over error patterns of weight <= t, so it is exact at desk scale (n <= 24).

The CSS section builds quantum codes from a nested classical pair C2 within C1
and verifies the correction procedure with a dense statevector simulation
(n <= 10 qubits).  Qubit 0 is the leftmost bit and owns the most significant
index bit of the 2^n amplitude vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .entropy import binary_entropy

TOL_AMP = 1e-9  # amplitudes below this are treated as zero


def bits(value) -> np.ndarray:
    """Coerce a 0/1 sequence (or "0110"-style string) to a uint8 vector."""
    if isinstance(value, str):
        value = [int(c) for c in value]
    b = np.asarray(value, dtype=np.uint8)
    if b.ndim != 1 or b.size == 0:
        raise ValueError("bit string must be a nonempty vector")
    if np.any(b > 1):
        raise ValueError("bits must be 0 or 1")
    return b


def bits_to_str(b: np.ndarray) -> str:
    return "".join(str(int(x)) for x in b)


def bits_to_index(b: np.ndarray) -> int:
    """Big-endian integer of a bit string (bit 0 most significant)."""
    idx = 0
    for x in b:
        idx = (idx << 1) | int(x)
    return idx


def index_to_bits(idx: int, n: int) -> np.ndarray:
    return np.array([(idx >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def hamming_distance(a, b) -> int:
    """Number of positions where two equal-length bit strings differ."""
    a, b = bits(a), bits(b)
    if a.size != b.size:
        raise ValueError("bit strings must have equal length")
    return int(np.sum(a ^ b))


def in_sphere(center, s, radius: int) -> bool:
    """Membership of s in the Hamming sphere around center."""
    return hamming_distance(center, s) <= radius


# GF(2) linear algebra

def gf2_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.uint8) @ b.astype(np.uint8)) % 2


def gf2_rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2); returns (rref, pivot columns)."""
    r = np.array(m, dtype=np.uint8) % 2
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        hot = np.nonzero(r[row:, col])[0]
        if hot.size == 0:
            continue
        pivot = row + hot[0]
        r[[row, pivot]] = r[[pivot, row]]
        for other in range(rows):
            if other != row and r[other, col]:
                r[other] ^= r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def gf2_rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return len(gf2_rref(m)[1])


def gf2_nullspace(m: np.ndarray) -> np.ndarray:
    """Rows span {x : m x = 0 over GF(2)}; shape (cols - rank, cols)."""
    rows, cols = m.shape
    r, pivots = gf2_rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for prow, pc in enumerate(pivots):
            if r[prow, fc]:
                basis[i, pc] = 1
    return basis


def gf2_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution x of a x = b over GF(2), or None when inconsistent."""
    rows, cols = a.shape
    aug = np.concatenate([a % 2, (b % 2).reshape(-1, 1)], axis=1).astype(np.uint8)
    r, pivots = gf2_rref(aug)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for prow, pc in enumerate(pivots):
        x[pc] = r[prow, cols]
    return x


def gf2_inv(a: np.ndarray) -> np.ndarray:
    """Inverse of a square full-rank matrix over GF(2)."""
    k = a.shape[0]
    aug = np.concatenate([a % 2, np.eye(k, dtype=np.uint8)], axis=1).astype(np.uint8)
    r, pivots = gf2_rref(aug)
    if pivots[:k] != list(range(k)):
        raise ValueError("matrix is singular over GF(2)")
    return r[:, k:]


class LinearCode:
    """An [n, k] (optionally [n, k, d]) binary linear code.

    The minimum distance is computed exhaustively at construction whenever
    k <= 16, and a caller-supplied distance is verified the same way.
    """

    def __init__(self, generator: np.ndarray, parity_check: np.ndarray | None = None,
                 distance: int | None = None):
        g = np.array(generator, dtype=np.uint8) % 2
        if g.ndim != 2:
            raise ValueError("generator must be an n x k matrix")
        n, k = g.shape
        if k > 0 and gf2_rank(g) != k:
            raise ValueError("generator columns must be independent")
        if parity_check is None:
            h = gf2_nullspace(g.T)
        else:
            h = np.array(parity_check, dtype=np.uint8) % 2
        if h.shape != (n - k, n):
            raise ValueError(f"parity check must be {(n - k, n)}, got {h.shape}")
        if h.size and gf2_rank(h) != n - k:
            raise ValueError("parity check rows must be independent")
        if h.size and k and np.any(gf2_mul(h, g)):
            raise ValueError("parity check does not annihilate the generator (HG != 0)")
        g.setflags(write=False)
        h.setflags(write=False)
        self.generator = g
        self.parity_check = h
        if k == 0:
            self.distance = None
        elif k <= 16:
            true_d = self._min_weight()
            if distance is not None and distance != true_d:
                raise ValueError(f"declared distance {distance} but found {true_d}")
            self.distance = true_d
        else:
            self.distance = distance

    @property
    def n(self) -> int:
        return self.generator.shape[0]

    @property
    def k(self) -> int:
        return self.generator.shape[1]

    def messages(self) -> np.ndarray:
        """All 2^k messages as rows (k <= 16 only)."""
        if self.k > 16:
            raise ValueError("message enumeration capped at k <= 16")
        count = 1 << self.k
        m = ((np.arange(count)[:, None] >> np.arange(self.k - 1, -1, -1)) & 1)
        return m.astype(np.uint8)

    def codewords(self) -> np.ndarray:
        """All 2^k codewords as rows (k <= 16 only)."""
        return gf2_mul(self.messages(), self.generator.T)

    def _min_weight(self) -> int:
        words = self.codewords()
        weights = words.sum(axis=1)
        return int(weights[weights > 0].min())

    def contains(self, word) -> bool:
        return not np.any(syndrome(self, word))

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinearCode)
                and self.generator.shape == other.generator.shape
                and np.array_equal(self.generator, other.generator)
                and np.array_equal(self.parity_check, other.parity_check))

    def __hash__(self) -> int:
        return hash((self.generator.tobytes(), self.parity_check.tobytes()))

    def __repr__(self) -> str:
        return f"LinearCode[n={self.n}, k={self.k}, d={self.distance}]"


def encode(code: LinearCode, msg) -> np.ndarray:
    """Codeword G m of a k-bit message."""
    m = bits(msg) if code.k else np.zeros(0, dtype=np.uint8)
    if m.size != code.k:
        raise ValueError(f"message length {m.size} != k = {code.k}")
    return gf2_mul(code.generator, m)


def syndrome(code: LinearCode, received) -> np.ndarray:
    """H y: zero exactly on codewords, and H(y + e) = H e."""
    y = bits(received)
    if y.size != code.n:
        raise ValueError(f"received length {y.size} != n = {code.n}")
    return gf2_mul(code.parity_check, y)


def syndrome_table(code: LinearCode, t: int) -> dict[bytes, np.ndarray]:
    """Syndrome -> minimum-weight error pattern, for weights <= t.

    Patterns are enumerated by increasing weight and, within a weight, by
    position order, so the lowest-index pattern deterministically wins a tie.
    """
    table: dict[bytes, np.ndarray] = {}
    for w in range(t + 1):
        for positions in combinations(range(code.n), w):
            e = np.zeros(code.n, dtype=np.uint8)
            e[list(positions)] = 1
            s = gf2_mul(code.parity_check, e).tobytes()
            if s not in table:
                table[s] = e
    return table


def decode(code: LinearCode, received, t: int,
           table: dict[bytes, np.ndarray] | None = None) -> tuple[np.ndarray, np.ndarray] | None:
    """Nearest-codeword decoding within radius t via syndrome lookup.

    Returns ``(codeword, error_pattern)`` or None when no pattern of weight
    <= t explains the syndrome.  Requires 2t + 1 <= d when the distance is
    known, so the correction inside the radius is unique.
    """
    if code.distance is not None and 2 * t + 1 > code.distance:
        raise ValueError(f"t={t} exceeds the correction radius of d={code.distance}")
    y = bits(received)
    s = syndrome(code, y).tobytes()
    if table is None:
        table = syndrome_table(code, t)
    e = table.get(s)
    if e is None:
        return None
    return y ^ e, e


def dual_code(code: LinearCode) -> LinearCode:
    """The [n, n-k] dual: generator H^T, parity check G^T."""
    return LinearCode(code.parity_check.T, code.generator.T)


def is_weakly_self_dual(code: LinearCode) -> bool:
    """C subset of its dual, i.e. all pairs of codewords are orthogonal."""
    return not np.any(gf2_mul(code.generator.T, code.generator))


@dataclass(frozen=True)
class BoundsReport:
    n: int
    k: int
    distance: int
    t: int
    singleton_ok: bool        # n - k >= d - 1
    gv_rate: float            # 1 - H_bin(t/n)
    meets_gv_rate: bool       # k/n >= gv_rate


def code_bounds(code: LinearCode) -> BoundsReport:
    """Singleton check and Gilbert-Varshamov rate for a code of known distance."""
    if code.distance is None:
        raise ValueError("distance unavailable; bounds need it")
    d = code.distance
    t = (d - 1) // 2
    gv = 1.0 - binary_entropy(t / code.n)
    return BoundsReport(
        n=code.n, k=code.k, distance=d, t=t,
        singleton_ok=(code.n - code.k >= d - 1),
        gv_rate=gv,
        meets_gv_rate=(code.k / code.n >= gv),
    )


@dataclass(frozen=True)
class QuantumBoundsReport:
    n: int
    k: int
    distance: int
    quantum_singleton_ok: bool   # n - k >= 2 (d - 1)
    quantum_gv_rate: float       # 1 - 2 H_bin(2t/n), reported only


def css_code_bounds(code: "CssCode") -> QuantumBoundsReport:
    """Quantum Singleton check and quantum GV rate for a CSS code.

    The code distance is the smaller of d(C1) and d(dual C2); the GV rate is
    informational only (no construction attains it here).
    """
    d1 = code.c1.distance
    d2perp = dual_code(code.c2).distance
    if d1 is None or d2perp is None:
        raise ValueError("distance unavailable; bounds need it")
    d = min(d1, d2perp)
    k = code.logical_bits
    return QuantumBoundsReport(
        n=code.n, k=k, distance=d,
        quantum_singleton_ok=(code.n - k >= 2 * (d - 1)),
        quantum_gv_rate=1.0 - 2.0 * binary_entropy(min(2 * code.t / code.n, 1.0)),
    )


class CssCode:
    """Quantum code built from classical codes C2 within C1.

    Logical dimension is 2^(k1 - k2); it corrects t bit flips through C1 and
    t phase flips through the dual of C2.  ``u`` and ``v`` shift the basis
    states (bit offset u, phase pattern v) and default to all-zero.
    """

    def __init__(self, c1: LinearCode, c2: LinearCode, u=None, v=None, t: int = 0):
        if c1.n != c2.n:
            raise ValueError("component codes must share the block length n")
        for col in range(c2.k):
            if not c1.contains(c2.generator[:, col]):
                raise ValueError("C2 is not contained in C1")
        self.c1 = c1
        self.c2 = c2
        self.u = bits(u) if u is not None else np.zeros(c1.n, dtype=np.uint8)
        self.v = bits(v) if v is not None else np.zeros(c1.n, dtype=np.uint8)
        if self.u.size != c1.n or self.v.size != c1.n:
            raise ValueError("u and v must have length n")
        self.t = int(t)
        self._key_cache = None

    @property
    def n(self) -> int:
        return self.c1.n

    @property
    def logical_bits(self) -> int:
        return self.c1.k - self.c2.k

    def __repr__(self) -> str:
        return f"CssCode[[{self.n}, {self.logical_bits}]] (t={self.t})"


def css_construct(c1: LinearCode, c2: LinearCode, u=None, v=None) -> CssCode:
    """Validated CSS code of C1 over C2.

    Requires C2 within C1 and derives t from the distances of C1 and of the
    dual of C2 (both must correct at least one error).
    """
    d1 = c1.distance
    d2perp = dual_code(c2).distance
    if d1 is None or d2perp is None:
        raise ValueError("component distances unavailable")
    t = min((d1 - 1) // 2, (d2perp - 1) // 2)
    if t < 1:
        raise ValueError(f"insufficient distance: C1 d={d1}, dual(C2) d={d2perp}")
    return CssCode(c1, c2, u, v, t=t)


def canonical_coset_rep(code: LinearCode, word) -> np.ndarray:
    """Deterministic representative of word + C: zero out the pivot positions."""
    w = bits(word).copy()
    if code.k == 0:
        return w
    basis, pivots = gf2_rref(code.generator.T)
    for row, col in enumerate(pivots):
        if w[col]:
            w ^= basis[row]
    return w


def _key_machinery(code: CssCode):
    """Cached pieces for coset_key: a G1 left inverse and the C2 message image."""
    if code._key_cache is None:
        g1 = code.c1.generator
        _, pivot_rows = gf2_rref(g1.T)
        inv = gf2_inv(g1[pivot_rows, :])
        if code.c2.k:
            img = np.zeros((code.c2.k, code.c1.k), dtype=np.uint8)
            for j in range(code.c2.k):
                img[j] = gf2_solve(g1, code.c2.generator[:, j])
            red, pivots = gf2_rref(img)
        else:
            red, pivots = np.zeros((0, code.c1.k), dtype=np.uint8), []
        free = [c for c in range(code.c1.k) if c not in pivots]
        code._key_cache = (np.array(pivot_rows), inv, red, pivots, free)
    return code._key_cache


def coset_key(code: CssCode, v) -> np.ndarray:
    """Label of the coset v + C2 in C1 as k1 - k2 key bits.

    Solves G1 m = v for the message m, reduces m modulo the image of C2 in
    message space (rref pivots), and reads the surviving free coordinates in
    ascending position order.  Representatives of the same coset map to the
    same key.
    """
    v = bits(v)
    pivot_rows, inv, red, pivots, free = _key_machinery(code)
    m = gf2_mul(inv, v[pivot_rows])
    if np.any(gf2_mul(code.c1.generator, m) != v):
        raise ValueError("word is not a codeword of C1")
    for row, col in enumerate(pivots):
        if m[col]:
            m ^= red[row]
    return m[free]


def css_basis_state(code: CssCode, x) -> np.ndarray:
    """Amplitude vector of the logical basis state for a coset of C2 in C1.

    The state is the equal superposition over x + y + u for y in C2, with
    phases (-1)^(v.y), normalised by sqrt(|C2|).  It depends on x only through
    its coset, and distinct cosets give orthogonal states.  Dense scale cap:
    n <= 16.
    """
    if code.n > 16:
        raise ValueError("dense basis states capped at n <= 16")
    x = bits(x)
    if not code.c1.contains(x):
        raise ValueError("x must be a codeword of C1")
    vec = np.zeros(1 << code.n, dtype=complex)
    norm = 1.0 / math.sqrt(1 << code.c2.k)
    for y in code.c2.codewords():
        phase = (-1.0) ** int(gf2_mul(code.v[None, :], y)[0])
        vec[bits_to_index(x ^ y ^ code.u)] += phase * norm
    return vec


def apply_bit_flips(vec: np.ndarray, e, n: int) -> np.ndarray:
    """X errors: permute amplitudes by XOR with the error pattern."""
    mask = bits_to_index(bits(e))
    perm = np.arange(vec.size) ^ mask
    return vec[perm]


def apply_phase_flips(vec: np.ndarray, e, n: int) -> np.ndarray:
    """Z errors: sign (-1)^(bits(i) . e) on each amplitude."""
    mask = bits_to_index(bits(e))
    parity = np.bitwise_count(np.arange(vec.size) & mask) & 1
    return vec * np.where(parity, -1.0, 1.0)


def hadamard_all(vec: np.ndarray) -> np.ndarray:
    """Normalised Walsh-Hadamard transform (a Hadamard gate on every qubit)."""
    out = np.array(vec, dtype=complex)
    size = out.size
    h = 1
    while h < size:
        for start in range(0, size, 2 * h):
            a = out[start:start + h].copy()
            b = out[start + h:start + 2 * h].copy()
            out[start:start + h] = a + b
            out[start + h:start + 2 * h] = a - b
        h *= 2
    return out / math.sqrt(size)


def _support_word(vec: np.ndarray, n: int) -> np.ndarray:
    idx = int(np.argmax(np.abs(vec) > TOL_AMP))
    return index_to_bits(idx, n)


@dataclass(frozen=True)
class CssCorrectionResult:
    recovered: np.ndarray            # canonical representative of the decoded coset
    success: bool
    dual_frame: np.ndarray           # state right after the Hadamard step


def simulate_css_correction(code: CssCode, x, e1, e2) -> CssCorrectionResult:
    """Run the CSS correction procedure on a dense statevector.

    Starting from the basis state of x + C2, injects bit flips e1 and phase
    flips e2, corrects the bit flips with C1's decoder, moves to the Hadamard
    frame (where the phase flips become bit flips on the dual-code words),
    corrects those with the decoder of the dual of C2, and reads back the
    coset.  Success requires both decodes to return the injected patterns;
    it is guaranteed when both error weights are <= t.  Cap: n <= 10.
    """
    if code.n > 10:
        raise ValueError("dense correction simulation capped at n <= 10")
    if np.any(code.u) or np.any(code.v):
        raise ValueError("correction simulation expects the u = v = 0 code")
    x = bits(x)
    vec = css_basis_state(code, x)
    vec = apply_bit_flips(vec, e1, code.n)
    vec = apply_phase_flips(vec, e2, code.n)

    target = canonical_coset_rep(code.c2, x)
    failed = CssCorrectionResult(np.zeros(code.n, dtype=np.uint8), False,
                                 np.zeros_like(vec))

    # Bit-flip round: every support word shares the syndrome H1 e1.
    out = decode(code.c1, _support_word(vec, code.n), code.t)
    if out is None:
        return failed
    vec = apply_bit_flips(vec, out[1], code.n)

    # Hadamard frame: phase flips now look like bit flips on C2-dual words.
    vec = hadamard_all(vec)
    dual_frame = vec.copy()
    c2perp = dual_code(code.c2)
    out = decode(c2perp, _support_word(vec, code.n), code.t)
    if out is None:
        return CssCorrectionResult(np.zeros(code.n, dtype=np.uint8), False, dual_frame)
    vec = apply_bit_flips(vec, out[1], code.n)

    # Back to the computational frame; the support is the recovered coset.
    vec = hadamard_all(vec)
    word = _support_word(vec, code.n)
    if not code.c1.contains(word):
        return CssCorrectionResult(word, False, dual_frame)
    recovered = canonical_coset_rep(code.c2, word)
    return CssCorrectionResult(recovered, bool(np.array_equal(recovered, target)), dual_frame)


# Shipped code fixtures.  The Hamming generator is in systematic form
# (message bits first, three parity bits after), so encode(hamming_7_4(),
# [1,0,0,0]) == [1,0,0,0,0,1,1].

def repetition_code(n: int = 3) -> LinearCode:
    return LinearCode(np.ones((n, 1), dtype=np.uint8))


def parity_code(n: int = 3) -> LinearCode:
    """[n, n-1, 2] even-weight code."""
    g = np.vstack([np.eye(n - 1, dtype=np.uint8), np.ones((1, n - 1), dtype=np.uint8)])
    return LinearCode(g)


def hamming_7_4() -> LinearCode:
    g = np.array([
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [0, 1, 1, 1],
        [1, 0, 1, 1],
        [1, 1, 0, 1],
    ], dtype=np.uint8)
    return LinearCode(g)


def simplex_7_3() -> LinearCode:
    return dual_code(hamming_7_4())


def steane_css() -> CssCode:
    """The [[7, 1]] code: Hamming [7,4,3] over its own dual."""
    c1 = hamming_7_4()
    return css_construct(c1, dual_code(c1))
