"""Spin-network Hamiltonian, local dissipators, and master-equation integration.

The model is an n-qubit network with local Z fields and pairwise XX couplings,

    H = sum_i (h_z/2) Z_i + sum_{i<j} (J_ij/2) X_i X_j,

opened to local environments through one jump operator per qubit,

    L_i = sqrt(gamma) * (Z_i + i Y_i)/2        (convention "paper")
    L_i = sqrt(gamma) * (X_i + i Y_i)/2        (convention "sigma_minus")

and evolved with the Lindblad master equation

    drho/dt = -i[H, rho] + sum_i (L_i rho L_i† - 1/2 {L_i†L_i, rho}).

Integration is fixed-step classical RK4. Because the generator is linear and
time independent, the RK4 update is exactly the degree-4 Taylor polynomial of
the Liouvillian applied to vec(rho); ``rk4_step`` applies that cached
polynomial (one 4^n x 4^n matrix-vector product) and ``evolve`` composes steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    embed_single_qubit,
    hermitianize,
    hermiticity_error,
    kron_all,
)
from .streams import COUPLING_DOMAIN, as_key, stream

DISSIPATOR_CONVENTIONS = ("paper", "sigma_minus")

# Largest |lambda|*dt the RK4 stability polynomial is allowed to see. The
# imaginary-axis stability boundary is 2*sqrt(2); 0.9 keeps a wide margin and
# only forces extra substeps for strongly coupled networks (J_s above ~20).
RK4_STABILITY_MARGIN = 0.9


def sample_coupling_matrix(j_s: float, n_qubits: int, seed) -> np.ndarray:
    """Random symmetric coupling matrix with zero diagonal.

    Entries i<j are i.i.d. uniform on [-j_s/2, j_s/2], drawn in row-major pair
    order from the stream keyed by ``seed``; deterministic for a fixed seed.
    The underlying uniforms do not depend on j_s, so the same seed yields the
    same connectivity pattern rescaled as j_s varies.
    """
    if j_s < 0:
        raise ValueError("j_s must be nonnegative")
    rng = stream(COUPLING_DOMAIN, *as_key(seed))
    j = np.zeros((n_qubits, n_qubits))
    for a in range(n_qubits):
        for b in range(a + 1, n_qubits):
            j[a, b] = j[b, a] = rng.uniform(-j_s / 2.0, j_s / 2.0)
    return j


@dataclass(frozen=True, eq=False)
class SpinNetworkModel:
    """Static description of one reservoir instance.

    ``coupling_scale`` and ``coupling_seed`` record how ``coupling`` was
    generated; they do not enter the dynamics.
    """

    coupling: np.ndarray
    n_qubits: int = 4
    h_z: float = 1.5
    gamma: float = 0.01
    coupling_scale: float = 0.0
    coupling_seed: tuple = (0,)

    def __post_init__(self):
        j = np.asarray(self.coupling, dtype=float)
        if j.shape != (self.n_qubits, self.n_qubits):
            raise ValueError(f"coupling has shape {j.shape}, expected {(self.n_qubits,)*2}")
        if not np.allclose(j, j.T, atol=1e-12):
            raise ValueError("coupling matrix must be symmetric")
        if np.abs(np.diag(j)).max(initial=0.0) > 0:
            raise ValueError("coupling matrix must have zero diagonal")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        object.__setattr__(self, "coupling", j)
        object.__setattr__(self, "coupling_seed", as_key(self.coupling_seed))


def random_model(j_s: float, seed, n_qubits: int = 4, h_z: float = 1.5,
                 gamma: float = 0.01) -> SpinNetworkModel:
    """Model with couplings freshly sampled from the seed's stream."""
    coupling = sample_coupling_matrix(j_s, n_qubits, seed)
    return SpinNetworkModel(coupling=coupling, n_qubits=n_qubits, h_z=h_z,
                            gamma=gamma, coupling_scale=j_s, coupling_seed=as_key(seed))


def build_hamiltonian(model: SpinNetworkModel) -> np.ndarray:
    """Transverse-field Ising Hamiltonian: local Z fields plus pairwise XX."""
    n = model.n_qubits
    h = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        h += (model.h_z / 2.0) * embed_single_qubit(PAULI_Z, i, n)
    for i in range(n):
        for j in range(i + 1, n):
            jij = model.coupling[i, j]
            if jij == 0.0:
                continue
            term = kron_all(
                PAULI_X if q in (i, j) else PAULI_I for q in range(n)
            )
            h += (jij / 2.0) * term
    return h


def single_qubit_jump(gamma: float, convention: str = "paper") -> np.ndarray:
    """One-qubit jump operator block sqrt(gamma) * (Z + iY)/2 (or (X + iY)/2)."""
    if convention == "paper":
        base = 0.5 * (PAULI_Z + 1j * PAULI_Y)
    elif convention == "sigma_minus":
        base = 0.5 * (PAULI_X + 1j * PAULI_Y)
    else:
        raise ValueError(f"unknown dissipator convention {convention!r}")
    return math.sqrt(gamma) * base


def build_jump_operators(model: SpinNetworkModel, convention: str = "paper") -> list[np.ndarray]:
    """One local jump operator per qubit, embedded in the full register."""
    block = single_qubit_jump(model.gamma, convention)
    return [embed_single_qubit(block, i, model.n_qubits) for i in range(model.n_qubits)]


def _liouvillian(hamiltonian: np.ndarray, jump_ops) -> np.ndarray:
    """Matrix of the Lindblad generator acting on row-major vec(rho)."""
    d = hamiltonian.shape[0]
    eye = np.eye(d)
    m = -1j * (np.kron(hamiltonian, eye) - np.kron(eye, hamiltonian.T))
    if jump_ops:
        acc = np.zeros((d, d), dtype=complex)
        for l in jump_ops:
            m += np.kron(l, l.conj())
            acc += l.conj().T @ l
        half = 0.5 * acc
        m -= np.kron(half, eye) + np.kron(eye, half.T)
    return m


class LindbladSystem:
    """Hamiltonian, jump operators and precomputed generator data.

    Immutable after construction (the step-propagator cache only memoizes
    pure functions of the stored generator) and safe to share across threads.
    """

    def __init__(self, hamiltonian: np.ndarray, jump_ops):
        if hermiticity_error(hamiltonian) > 1e-9:
            raise ValueError("hamiltonian must be Hermitian")
        self.hamiltonian = hermitianize(np.asarray(hamiltonian, dtype=complex))
        self.jump_ops = [np.asarray(l, dtype=complex) for l in jump_ops]
        self.dim = self.hamiltonian.shape[0]
        # Hot-loop precomputation: L†L products and the full generator matrix.
        self.ldl_products = [l.conj().T @ l for l in self.jump_ops]
        self.liouvillian = _liouvillian(self.hamiltonian, self.jump_ops)
        eigs = np.linalg.eigvalsh(self.hamiltonian)
        self.spectral_spread = float(eigs[-1] - eigs[0])
        self._step_props: dict[float, np.ndarray] = {}
        self._interval_props: dict[tuple[float, int], np.ndarray] = {}

    def step_propagator(self, dt: float) -> np.ndarray:
        """RK4 one-step map I + dt M + ... + dt^4/24 M^4 on vec(rho)."""
        p = self._step_props.get(dt)
        if p is None:
            m = self.liouvillian
            d2 = m.shape[0]
            p = np.eye(d2, dtype=complex)
            term = np.eye(d2, dtype=complex)
            for order in range(1, 5):
                term = (dt / order) * (term @ m)
                p = p + term
            self._step_props[dt] = p
        return p

    def interval_propagator(self, dt: float, n_steps: int) -> np.ndarray:
        """n_steps-fold composition of the RK4 one-step map."""
        key = (dt, n_steps)
        p = self._interval_props.get(key)
        if p is None:
            p = np.linalg.matrix_power(self.step_propagator(dt), n_steps)
            self._interval_props[key] = p
        return p


def build_lindblad_system(model: SpinNetworkModel, convention: str = "paper") -> LindbladSystem:
    """Assemble the full open system for one model instance."""
    return LindbladSystem(build_hamiltonian(model), build_jump_operators(model, convention))


def lindblad_rhs(rho: np.ndarray, sys: LindbladSystem) -> np.ndarray:
    """Lindblad right-hand side -i[H,rho] + dissipators; traceless, Hermitian."""
    d = sys.dim
    if rho.shape != (d, d):
        raise ValueError(f"rho has shape {rho.shape}, expected {(d, d)}")
    return (sys.liouvillian @ rho.reshape(-1)).reshape(d, d)


def rk4_step(rho: np.ndarray, sys: LindbladSystem, dt: float) -> np.ndarray:
    """One classical RK4 update of duration dt; output is re-symmetrized."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    p = sys.step_propagator(dt)
    out = (p @ rho.reshape(-1)).reshape(sys.dim, sys.dim)
    return hermitianize(out)


def evolve(rho: np.ndarray, sys: LindbladSystem, duration: float, dt: float) -> np.ndarray:
    """Repeated rk4_step over the duration, plus a final partial step if the
    duration is not an integer multiple of dt."""
    if duration < 0:
        raise ValueError("duration must be nonnegative")
    if duration == 0:
        return rho
    ratio = duration / dt
    n = int(round(ratio))
    if abs(ratio - n) <= 1e-9 * max(1.0, ratio):
        remainder = 0.0
    else:
        n = int(math.floor(ratio))
        remainder = duration - n * dt
    for _ in range(n):
        rho = rk4_step(rho, sys, dt)
    if remainder > 0.0:
        rho = rk4_step(rho, sys, remainder)
    return rho


def stable_step_count(sys: LindbladSystem, duration: float, dt_request: float) -> int:
    """Number of equal RK4 substeps covering ``duration``.

    Honors the requested dt, then adds substeps whenever the generator's
    spectral extent would push |lambda|*dt past RK4's imaginary-axis
    stability margin. The coherent part dominates: commutator eigenvalues
    reach the Hamiltonian's eigenvalue spread; the weak local dissipators
    contribute at most a few gamma on top.
    """
    n_requested = max(1, int(math.ceil(duration / dt_request - 1e-9)))
    dissipator_pad = 3.0 * sum(float(np.trace(p).real) for p in sys.ldl_products)
    reach = sys.spectral_spread + dissipator_pad
    n_stable = int(math.ceil(duration * reach / RK4_STABILITY_MARGIN))
    return max(n_requested, n_stable, 1)
