"""Quantum states, Pauli building blocks and the PPT entanglement oracle."""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, InvalidStateError
from .qmath import (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, HERMITIAN_TOL, check_dims,
                    hermitian_eig, ket_to_dm, partial_transpose)

TRACE_TOL = 1e-9
PSD_FLOOR = -1e-7
NORM_TOL = 1e-9
ENTANGLEMENT_MARGIN = 1e-9

# Axis labels 1, 2, 3 follow the measurement order sigma_z, sigma_x, sigma_y.
PAULI_AXES = {1: PAULI_Z, 2: PAULI_X, 3: PAULI_Y}
OUTCOMES = (+1, -1)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix over an ordered list of subsystems."""

    matrix: np.ndarray
    dims: tuple

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got {mat.shape}")
        dims = check_dims(self.dims, mat.shape[0])
        if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError("density matrix is not Hermitian")
        if abs(np.trace(mat) - 1) > TRACE_TOL:
            raise InvalidStateError(f"trace {np.trace(mat).real:.12g} != 1")
        mat = (mat + mat.conj().T) / 2
        if np.linalg.eigvalsh(mat)[0] < PSD_FLOOR:
            raise InvalidStateError("density matrix has a negative eigenvalue")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True)
class PauliProjector:
    """Projector onto the ``outcome`` eigenspace of the Pauli matrix ``axis``."""

    outcome: int
    axis: int

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"outcome must be +1 or -1, got {self.outcome}")
        if self.axis not in PAULI_AXES:
            raise ValueError(f"axis must be 1, 2 or 3, got {self.axis}")

    @property
    def op(self):
        return pauli_projector(self.outcome, self.axis)


def pauli_projector(outcome, axis):
    return (PAULI_I + outcome * PAULI_AXES[axis]) / 2


def pauli_projectors():
    """All six single-qubit projectors, shape (3 axes, 2 outcomes, 2, 2)."""
    return np.array([[pauli_projector(c, z) for c in OUTCOMES] for z in (1, 2, 3)])


def bell_phi_plus(d=2):
    """Maximally entangled ket (1/sqrt d) sum_i |ii>."""
    if d < 2:
        raise DimensionError(f"local dimension must be >= 2, got {d}")
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return psi


def phi_plus_projector(d=2):
    return ket_to_dm(bell_phi_plus(d))


_EIGENSTATES = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
    "R": np.array([1, 1j], dtype=complex) / np.sqrt(2),
    "L": np.array([1, -1j], dtype=complex) / np.sqrt(2),
}
# label -> (outcome, axis) of the Pauli projector that fixes the state
EIGENSTATE_LABELS = {"0": (+1, 1), "1": (-1, 1), "+": (+1, 2), "-": (-1, 2),
                     "R": (+1, 3), "L": (-1, 3)}


def pauli_eigenstate(label):
    """One of the six Pauli eigenstates |0>, |1>, |+>, |->, |R>, |L>."""
    label = {"−": "-"}.get(label, label)
    try:
        return _EIGENSTATES[label].copy()
    except KeyError:
        raise ValueError(f"unknown eigenstate label {label!r}") from None


def isotropic(p, d=2):
    """p |Phi+><Phi+| + (1 - p) 1/d^2."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n = d * d
    return DensityMatrix(p * phi_plus_projector(d) + (1 - p) * np.eye(n) / n, (d, d))


def haar_ket(d, rng):
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return psi / np.linalg.norm(psi)


def random_separable(num_terms, seed, dims=(2, 2)):
    """Dirichlet-weighted mixture of Haar-random pure product states."""
    if num_terms < 1:
        raise ValueError("num_terms must be >= 1")
    rng = np.random.default_rng(seed)
    dA, dB = dims
    weights = rng.dirichlet(np.ones(num_terms))
    rho = np.zeros((dA * dB, dA * dB), dtype=complex)
    for q in weights:
        rho += q * ket_to_dm(np.kron(haar_ket(dA, rng), haar_ket(dB, rng)))
    rho /= np.trace(rho).real
    return DensityMatrix(rho, dims)


def random_density(dims, seed):
    """Hilbert-Schmidt random mixed state (normalized Ginibre square).

    ``seed`` may be an int or an existing ``numpy.random.Generator``.
    """
    rng = np.random.default_rng(seed)
    n = int(np.prod(dims))
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, tuple(dims))


def random_npt_states(count, seed, dims=(2, 2)):
    """``count`` NPT states drawn by rejection from the Hilbert-Schmidt ensemble."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        rho = random_density(dims, rng)
        if is_entangled_ppt(rho):
            out.append(rho)
    return out


def min_pt_eigenvalue(rho):
    rho = as_density(rho)
    _check_bipartite(rho)
    vals, _ = hermitian_eig(partial_transpose(rho.matrix, rho.dims, 1))
    return float(vals[0])


def is_entangled_ppt(rho):
    """True when the partial transpose on B has an eigenvalue below -1e-9.

    Exact separability test for 2x2 and 2x3 systems; elsewhere a sufficient
    condition for entanglement only.
    """
    return min_pt_eigenvalue(rho) < -ENTANGLEMENT_MARGIN


def _check_bipartite(rho):
    if len(rho.dims) != 2:
        raise DimensionError(f"expected a bipartite state, got dims {rho.dims}")


def as_density(rho, dims=None):
    """Coerce an array (or DensityMatrix) into a validated DensityMatrix."""
    if isinstance(rho, DensityMatrix):
        if dims is not None and tuple(dims) != rho.dims:
            raise DimensionError(f"state dims {rho.dims} != expected {tuple(dims)}")
        return rho
    mat = np.asarray(rho, dtype=complex)
    if dims is None:
        d = int(round(np.sqrt(mat.shape[0])))
        if d * d != mat.shape[0]:
            raise DimensionError("cannot infer bipartite dims; pass dims explicitly")
        dims = (d, d)
    return DensityMatrix(mat, tuple(dims))


def product_state(kets: Sequence[np.ndarray], dims=None):
    psi = np.ones(1, dtype=complex)
    for k in kets:
        psi = np.kron(psi, k)
    dims = dims or tuple(len(k) for k in kets)
    return DensityMatrix(ket_to_dm(psi), dims)
