"""Density matrices, measurements and quantum channels on small Hilbert spaces.

Everything here works on dense complex numpy arrays and is meant for desk-scale
dimensions (d <= 64).  States are immutable once constructed; all operations are
pure functions returning new objects, so values can be shared freely between
threads or processes.

Conventions fixed once and used everywhere:

* logarithms are base 2 and ``0 * log 0 == 0``,
* in a tensor product the *left* factor is subsystem A and owns the
  slowest-varying (most significant) index, exactly as ``numpy.kron``,
* eigenvalues are reported in descending order.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

# Numerical tolerances.  Double precision with headroom for eigendecompositions
# up to dimension 64.
TOL_NORM = 1e-9    # trace / probability normalisation
TOL_HERM = 1e-9    # Hermiticity
TOL_UNIT = 1e-8    # unitarity / Kraus completeness
TOL_EIG = 1e-9     # eigenvalue positivity slack
TOL_RECON = 1e-7   # reconstruction identities
TOL_PROB = 1e-12   # probabilities treated as zero

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = (KET_0 + KET_1) / np.sqrt(2)
KET_MINUS = (KET_0 - KET_1) / np.sqrt(2)


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(m).T


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis vector |index> in a dim-dimensional space."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def outer(psi: np.ndarray, phi: np.ndarray | None = None) -> np.ndarray:
    """|psi><phi| (|psi><psi| when phi is omitted)."""
    if phi is None:
        phi = psi
    return np.outer(psi, np.conj(phi))


def is_hermitian(m: np.ndarray, tol: float = TOL_HERM) -> bool:
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - dag(m))) <= tol


def is_unitary(u: np.ndarray, tol: float = TOL_UNIT) -> bool:
    d = u.shape[0]
    return u.shape == (d, d) and np.max(np.abs(u @ dag(u) - np.eye(d))) <= tol


def is_projector(p: np.ndarray, tol: float = TOL_RECON) -> bool:
    return is_hermitian(p, tol) and np.max(np.abs(p @ p - p)) <= tol


def is_normal(m: np.ndarray, tol: float = TOL_HERM) -> bool:
    return np.max(np.abs(m @ dag(m) - dag(m) @ m)) <= tol


class DensityMatrix:
    """A positive semidefinite, unit-trace complex matrix.

    ``dims`` optionally records a tensor factorisation of the carrier space
    (product of the entries must equal ``dim``); it is required by the partial
    trace and the bipartite entropy measures.

    Invariants checked at construction: Hermitian within ``TOL_HERM``, unit
    trace within ``TOL_NORM``, and all eigenvalues >= ``-TOL_EIG``.
    """

    __slots__ = ("mat", "dims")

    def __init__(self, matrix: np.ndarray, dims: tuple[int, ...] | None = None):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if not is_hermitian(m):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TOL_NORM:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        w = np.linalg.eigvalsh(m)
        if w.min() < -TOL_EIG:
            raise ValueError(f"density matrix has negative eigenvalue {w.min()!r}")
        if dims is not None:
            dims = tuple(int(d) for d in dims)
            if int(np.prod(dims)) != m.shape[0]:
                raise ValueError(f"subsystem dims {dims} do not multiply to {m.shape[0]}")
        m.setflags(write=False)
        self.mat = m
        self.dims = dims

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def pure(cls, amplitudes: np.ndarray, dims: tuple[int, ...] | None = None) -> "DensityMatrix":
        """Density matrix |psi><psi| of a normalised state vector."""
        psi = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"state vector norm is {norm!r}, expected 1")
        psi = psi / norm
        return cls(outer(psi), dims)

    @classmethod
    def maximally_mixed(cls, dim: int, dims: tuple[int, ...] | None = None) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim, dims)

    def with_dims(self, dims: tuple[int, ...]) -> "DensityMatrix":
        return DensityMatrix(self.mat, dims)

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order, negative dust clamped to zero."""
        w = np.linalg.eigvalsh(self.mat)[::-1]
        return clamp_spectrum(w)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, dims={self.dims})"


def as_density(rho, dims: tuple[int, ...] | None = None) -> DensityMatrix:
    """Coerce an ndarray (or pass through a DensityMatrix) with optional dims."""
    if isinstance(rho, DensityMatrix):
        if dims is not None and rho.dims != tuple(dims):
            return rho.with_dims(tuple(dims))
        return rho
    return DensityMatrix(rho, dims)


def clamp_spectrum(w: np.ndarray, tol: float = TOL_EIG) -> np.ndarray:
    """Zero out eigenvalues in [-tol, 0); values below -tol are a hard error."""
    if w.min() < -tol:
        raise ValueError(f"eigenvalue {w.min()!r} below -{tol}")
    return np.where(w < 0.0, 0.0, w)


def eig_hermitian(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` sorted descending and unitary
    ``v`` whose columns are the matching eigenvectors, so that
    ``m == v @ diag(w) @ v.conj().T`` within TOL_RECON.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError("eig_hermitian requires a Hermitian matrix")
    w, v = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def tensor_product(a, b):
    """Kronecker product; subsystem dims multiply.

    For two density matrices the result is a valid DensityMatrix whose
    ``dims`` is the concatenation of the factors' dims (each factor defaulting
    to its own full dimension).
    """
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        dims = (a.dims or (a.dim,)) + (b.dims or (b.dim,))
        return DensityMatrix(np.kron(a.mat, b.mat), dims)
    amat = a.mat if isinstance(a, DensityMatrix) else np.asarray(a, dtype=complex)
    bmat = b.mat if isinstance(b, DensityMatrix) else np.asarray(b, dtype=complex)
    return np.kron(amat, bmat)


def partial_trace(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """Reduced state of one half of a bipartite system.

    ``keep`` is "A" (left factor) or "B" (right factor); the other subsystem is
    traced out.  The input must carry exactly two subsystem dims.
    """
    rho = as_density(rho)
    if rho.dims is None or len(rho.dims) != 2:
        raise ValueError("partial_trace needs a state with two subsystem dims")
    da, db = rho.dims
    t = rho.mat.reshape(da, db, da, db)
    if keep == "A":
        red = np.trace(t, axis1=1, axis2=3)
    elif keep == "B":
        red = np.trace(t, axis1=0, axis2=2)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return DensityMatrix(red)


def partial_trace_mat(mat: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """partial_trace on a raw matrix (no DensityMatrix validation)."""
    da, db = dims
    t = np.asarray(mat, dtype=complex).reshape(da, db, da, db)
    if keep == "A":
        return np.trace(t, axis1=1, axis2=3)
    if keep == "B":
        return np.trace(t, axis1=0, axis2=2)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def apply_unitary(rho: DensityMatrix, u: np.ndarray) -> DensityMatrix:
    """U rho U^dagger.  Trace and spectrum are preserved."""
    rho = as_density(rho)
    u = np.asarray(u, dtype=complex)
    if u.shape != (rho.dim, rho.dim):
        raise ValueError(f"unitary shape {u.shape} does not match dim {rho.dim}")
    if not is_unitary(u):
        raise ValueError("matrix is not unitary")
    return DensityMatrix(u @ rho.mat @ dag(u), rho.dims)


def check_measurement(operators: list[np.ndarray], dim: int) -> None:
    """Raise unless sum_m M_m^dagger M_m == I (completeness relation)."""
    acc = np.zeros((dim, dim), dtype=complex)
    for m in operators:
        m = np.asarray(m, dtype=complex)
        if m.shape != (dim, dim):
            raise ValueError(f"measurement operator shape {m.shape} != ({dim},{dim})")
        acc += dag(m) @ m
    if np.max(np.abs(acc - np.eye(dim))) > TOL_UNIT:
        raise ValueError("measurement operators do not satisfy the completeness relation")


def measure(rho: DensityMatrix, operators: list[np.ndarray]) -> list[tuple[float, DensityMatrix | None]]:
    """General measurement {M_m} on a state.

    Returns one ``(probability, post_state)`` pair per operator, where
    ``p(m) = tr(M_m rho M_m^dagger)`` and the post state is
    ``M_m rho M_m^dagger / p(m)``.  Outcomes with probability below TOL_PROB
    carry ``None`` in place of the (undefined) post state.  The probabilities
    sum to 1 within TOL_NORM.
    """
    rho = as_density(rho)
    check_measurement(operators, rho.dim)
    results = []
    for m in operators:
        m = np.asarray(m, dtype=complex)
        out = m @ rho.mat @ dag(m)
        p = float(np.trace(out).real)
        if p < TOL_PROB:
            results.append((max(p, 0.0), None))
        else:
            results.append((p, DensityMatrix(out / p, rho.dims)))
    return results


def projective_measurement(basis: np.ndarray) -> list[np.ndarray]:
    """Rank-1 projectors onto the columns of a unitary basis matrix."""
    return [outer(basis[:, i]) for i in range(basis.shape[1])]


class QuantumChannel:
    """A trace-preserving quantum operation given by Kraus operators.

    ``kraus`` is a list of dim_out x dim_in matrices with
    ``sum_i E_i^dagger E_i == I``; the channel acts as
    ``rho -> sum_i E_i rho E_i^dagger``.
    """

    __slots__ = ("kraus",)

    def __init__(self, kraus: list[np.ndarray]):
        ops = [np.array(k, dtype=complex) for k in kraus]
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        din = ops[0].shape[1]
        acc = np.zeros((din, din), dtype=complex)
        for k in ops:
            if k.shape[1] != din:
                raise ValueError("Kraus operators have inconsistent input dimension")
            acc += dag(k) @ k
        if np.max(np.abs(acc - np.eye(din))) > TOL_UNIT:
            raise ValueError("Kraus operators are not trace preserving")
        for k in ops:
            k.setflags(write=False)
        self.kraus = ops

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, rho) -> DensityMatrix:
        return apply_channel(rho, self)

    def apply_mat(self, mat: np.ndarray) -> np.ndarray:
        out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
        for k in self.kraus:
            out += k @ mat @ dag(k)
        return out

    def compose(self, inner: "QuantumChannel") -> "QuantumChannel":
        """Channel equal to self applied after ``inner``."""
        if inner.dim_out != self.dim_in:
            raise ValueError("channel dimensions do not chain")
        return QuantumChannel([a @ b for a in self.kraus for b in inner.kraus])

    def extend_left(self, dim_ancilla: int) -> "QuantumChannel":
        """I_ancilla (x) channel, acting on an enlarged space."""
        eye = np.eye(dim_ancilla, dtype=complex)
        return QuantumChannel([np.kron(eye, k) for k in self.kraus])


def apply_channel(rho: DensityMatrix, op: QuantumChannel) -> DensityMatrix:
    """sum_i E_i rho E_i^dagger as a validated DensityMatrix."""
    rho = as_density(rho)
    if op.dim_in != rho.dim:
        raise ValueError(f"channel input dim {op.dim_in} != state dim {rho.dim}")
    dims = rho.dims if op.dim_out == rho.dim else None
    return DensityMatrix(op.apply_mat(rho.mat), dims)


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel([np.eye(dim, dtype=complex)])


def unitary_channel(u: np.ndarray) -> QuantumChannel:
    if not is_unitary(np.asarray(u, dtype=complex)):
        raise ValueError("matrix is not unitary")
    return QuantumChannel([np.asarray(u, dtype=complex)])


def depolarizing_channel(f: float) -> QuantumChannel:
    """Qubit channel rho -> (1-f) rho + f I/2, in Pauli Kraus form."""
    if not 0.0 <= f <= 1.0:
        raise ValueError("depolarizing strength must lie in [0, 1]")
    return QuantumChannel([
        np.sqrt(1.0 - 3.0 * f / 4.0) * ID2,
        np.sqrt(f / 4.0) * PAULI_X,
        np.sqrt(f / 4.0) * PAULI_Y,
        np.sqrt(f / 4.0) * PAULI_Z,
    ])


def purify(rho: DensityMatrix) -> np.ndarray:
    """Canonical purification of rho on R (x) Q.

    Returns the vector ``sum_i sqrt(w_i) |i_R>|v_i>`` built from the
    eigendecomposition (eigenvalues descending), living in a space of
    dimension ``dim**2`` with the reference system R on the left.  Tracing out
    R recovers rho.
    """
    rho = as_density(rho)
    w, v = eig_hermitian(rho.mat)
    w = clamp_spectrum(w)
    d = rho.dim
    psi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if w[i] > 0.0:
            psi += np.sqrt(w[i]) * np.kron(ket(i, d), v[:, i])
    return psi


def schmidt_decompose(psi: np.ndarray, dims: tuple[int, int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt decomposition of a bipartite pure state.

    Returns ``(coeffs, basis_a, basis_b)`` with nonnegative coefficients in
    descending order satisfying ``sum coeffs**2 == 1`` and
    ``psi == sum_i coeffs[i] * kron(basis_a[:, i], basis_b[:, i])``.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    da, db = int(dims[0]), int(dims[1])
    if da * db != psi.size:
        raise ValueError(f"dims {dims} do not match a vector of length {psi.size}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"state vector norm is {norm!r}, expected 1")
    psi = psi / norm
    m = psi.reshape(da, db)
    u, s, vh = np.linalg.svd(m)
    return s, u, vh.T


def thermal_state(h: np.ndarray, beta: float) -> DensityMatrix:
    """Gibbs state exp(-beta H) / tr exp(-beta H) of a Hamiltonian.

    beta = 0 gives the maximally mixed state; large beta concentrates on the
    ground space.  Computed in the eigenbasis with the spectrum shifted for
    numerical stability, so it commutes with H by construction.
    """
    h = np.asarray(h, dtype=complex)
    if beta < 0.0:
        raise ValueError("beta must be nonnegative")
    w, v = eig_hermitian(h)
    logits = -beta * (w - w.min())
    p = np.exp(logits)
    p /= p.sum()
    return DensityMatrix(v @ np.diag(p.astype(complex)) @ dag(v))


def _cyclic_shift(d: int, shift: int) -> np.ndarray:
    """Permutation unitary sending diagonal entry (k+shift) mod d to slot k."""
    v = np.zeros((d, d), dtype=complex)
    for k in range(d):
        v[k, (k + shift) % d] = 1.0
    return v


def cyclic_averaging(a: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    """Unitaries whose conjugation average scrambles a normal matrix to tr(a) I.

    For a d x d normal matrix returns ``(unitaries, average)`` with d unitaries
    ``U_i`` such that ``average == sum_i U_i a U_i^dagger == tr(a) * I`` within
    TOL_RECON.  Each U_i composes the diagonalising unitary with one cyclic
    permutation of the diagonal.
    """
    a = np.asarray(a, dtype=complex)
    if not is_normal(a):
        raise ValueError("cyclic_averaging requires a normal matrix")
    d = a.shape[0]
    # Schur form of a normal matrix is diagonal: a = z t z^dagger.
    _, z = scipy.linalg.schur(a, output="complex")
    unitaries = [_cyclic_shift(d, i) @ dag(z) for i in range(d)]
    average = np.zeros((d, d), dtype=complex)
    for u in unitaries:
        average += u @ a @ dag(u)
    return unitaries, average


def projector_unitary_mixture(p: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Write the projective map P.P + Q.Q as an equal mixture of two unitaries.

    Returns ``(u1, u2, 0.5)`` with ``u1 = Q - P`` and ``u2 = I`` so that for
    every state ``P rho P + Q rho Q == (u1 rho u1^dagger + u2 rho u2^dagger)/2``
    where ``Q = I - P``.
    """
    p = np.asarray(p, dtype=complex)
    if not is_projector(p):
        raise ValueError("input is not a projector")
    d = p.shape[0]
    eye = np.eye(d, dtype=complex)
    return eye - 2.0 * p, eye, 0.5


# Random objects for property tests and stochastic estimators.  All take an
# explicit numpy Generator so results are reproducible per seed.

def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform pure state via a normalised complex normal vector."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary (QR of a complex Ginibre matrix, phases fixed)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None,
                          dims: tuple[int, ...] | None = None) -> DensityMatrix:
    """Random mixed state G G^dagger / tr with a complex Ginibre factor G."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ dag(g)
    return DensityMatrix(m / np.trace(m).real, dims)


def random_projector(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Projector onto a Haar-random rank-dimensional subspace."""
    u = random_unitary(dim, rng)
    return u[:, :rank] @ dag(u[:, :rank])


def random_channel(dim: int, n_kraus: int, rng: np.random.Generator) -> QuantumChannel:
    """Random trace-preserving channel from a Haar-random isometry.

    The isometry V : dim -> dim * n_kraus is the first block-column of a random
    unitary; slicing it into dim x dim blocks yields the Kraus operators.
    """
    big = random_unitary(dim * n_kraus, rng)
    iso = big[:, :dim]
    return QuantumChannel([iso[i * dim:(i + 1) * dim, :] for i in range(n_kraus)])
