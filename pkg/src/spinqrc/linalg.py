"""Dense complex linear algebra for small multi-qubit density matrices.

All operators are plain ``numpy`` arrays of ``complex128``. Qubit 0 is the
most significant bit of the basis index, i.e. the leftmost tensor factor;
an n-qubit operator has shape (2**n, 2**n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

HERMITICITY_RTOL = 1e-9


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def hermitianize(m: np.ndarray) -> np.ndarray:
    """Hermitian part (m + m†)/2."""
    return 0.5 * (m + m.conj().T)


def hermiticity_error(m: np.ndarray) -> float:
    """Max |m - m†| entry, relative to max |m| (0 for the zero matrix)."""
    scale = np.abs(m).max()
    if scale == 0.0:
        return 0.0
    return float(np.abs(m - m.conj().T).max() / scale)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(a, b)


def kron_all(factors) -> np.ndarray:
    """Left-to-right Kronecker product of a sequence of matrices."""
    out = np.array([[1.0 + 0.0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


def embed_single_qubit(op: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Embed a 2x2 operator on one qubit of an n-qubit register."""
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit index {qubit} out of range for {n_qubits} qubits")
    return kron_all(
        op if i == qubit else PAULI_I for i in range(n_qubits)
    )


def n_qubits_of(m: np.ndarray) -> int:
    """Number of qubits of a square 2**n dimensional matrix."""
    d = m.shape[0]
    if m.ndim != 2 or m.shape[1] != d:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = d.bit_length() - 1
    if 2**n != d:
        raise ValueError(f"dimension {d} is not a power of two")
    return n


@dataclass(frozen=True)
class QubitPartition:
    """Bipartition of an n-qubit register into subsystem A and the rest.

    ``subsystem_a`` must be a nonempty proper subset of {0..n_qubits-1}.
    """

    subsystem_a: frozenset[int]
    n_qubits: int

    def __post_init__(self):
        a = frozenset(int(q) for q in self.subsystem_a)
        object.__setattr__(self, "subsystem_a", a)
        if not a:
            raise ValueError("subsystem A must be nonempty")
        if any(q < 0 or q >= self.n_qubits for q in a):
            raise ValueError(f"qubit indices {sorted(a)} out of range for n={self.n_qubits}")
        if len(a) == self.n_qubits:
            raise ValueError("subsystem A must be a proper subset")

    @property
    def complement(self) -> "QubitPartition":
        rest = frozenset(range(self.n_qubits)) - self.subsystem_a
        return QubitPartition(rest, self.n_qubits)


def partial_trace(rho: np.ndarray, traced, n_qubits: int) -> np.ndarray:
    """Trace out the given qubits, keeping the rest in ascending-index order.

    The input must be 2**n x 2**n; ``traced`` must be a proper subset of
    {0..n-1}. The trace of the result equals the trace of the input.
    """
    traced = sorted(set(int(q) for q in traced))
    if rho.shape != (2**n_qubits, 2**n_qubits):
        raise ValueError(f"rho has shape {rho.shape}, expected {(2**n_qubits,)*2}")
    if any(q < 0 or q >= n_qubits for q in traced):
        raise ValueError(f"traced qubits {traced} out of range for n={n_qubits}")
    if len(traced) >= n_qubits:
        raise ValueError("cannot trace out every qubit")

    t = rho.reshape([2] * (2 * n_qubits))
    # Trace highest indices first so remaining axis numbers stay valid.
    n_left = n_qubits
    for q in reversed(traced):
        t = np.trace(t, axis1=q, axis2=q + n_left)
        n_left -= 1
    d = 2**n_left
    return np.ascontiguousarray(t.reshape(d, d))


def partial_transpose(rho: np.ndarray, partition: QubitPartition) -> np.ndarray:
    """Transpose the indices of subsystem A only; trace is unchanged."""
    n = partition.n_qubits
    if rho.shape != (2**n, 2**n):
        raise ValueError(f"rho has shape {rho.shape}, expected {(2**n,)*2}")
    axes = list(range(2 * n))
    for q in partition.subsystem_a:
        axes[q], axes[q + n] = axes[q + n], axes[q]
    t = rho.reshape([2] * (2 * n)).transpose(axes)
    return np.ascontiguousarray(t.reshape(2**n, 2**n))


def permute_qubits(rho: np.ndarray, order) -> np.ndarray:
    """Rearrange tensor factors so the qubit at old position order[j] lands at j.

    ``permute_qubits(kron(a, b), [1, 0])`` equals ``kron(b, a)``.
    """
    order = [int(q) for q in order]
    n = n_qubits_of(rho)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order {order} is not a permutation of 0..{n - 1}")
    axes = order + [q + n for q in order]
    t = rho.reshape([2] * (2 * n)).transpose(axes)
    return np.ascontiguousarray(t.reshape(2**n, 2**n))


def hermitian_eigenvalues(m: np.ndarray, rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ascending.

    The input is symmetrized before solving; anti-Hermitian residue beyond
    ``rtol`` (relative to max |entry|) is rejected.
    """
    err = hermiticity_error(m)
    if err > rtol:
        raise ValueError(f"matrix is not Hermitian: relative residue {err:.3e} > {rtol:.1e}")
    return np.linalg.eigvalsh(hermitianize(m))


def trace_norm(m: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix: sum of |eigenvalues|."""
    return float(np.abs(hermitian_eigenvalues(m)).sum())


def expectation(rho: np.ndarray, obs: np.ndarray, imag_tol: float = 1e-10) -> float:
    """Re Tr(rho @ obs) for a Hermitian observable.

    Raises if the imaginary residue of the trace exceeds ``imag_tol``.
    """
    if rho.shape != obs.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {obs.shape}")
    val = complex(np.einsum("ij,ji->", rho, obs))
    if abs(val.imag) > imag_tol:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def check_density_matrix(rho: np.ndarray) -> dict:
    """Diagnostics for a would-be density matrix.

    Returns trace error, Hermiticity residue and minimum eigenvalue; callers
    decide the tolerances.
    """
    herm = hermiticity_error(rho)
    tr_err = abs(float(np.trace(rho).real) - 1.0) + abs(float(np.trace(rho).imag))
    min_eig = float(np.linalg.eigvalsh(hermitianize(rho))[0])
    return {"trace_error": tr_err, "hermiticity_error": herm, "min_eigenvalue": min_eig}
