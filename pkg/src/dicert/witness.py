"""Entanglement witnesses and their expansion over Pauli-projector products.

A witness on ``n_A + n_B`` qubits is expanded as

    W = sum omega[c, d, z, w] P_A[z, c] (x) P_B[w, d]

where ``P[z, c]`` is a tensor product of single-qubit projectors
``(1 + c_k sigma_{z_k}) / 2``. Strings of axes ``z`` and outcomes ``c`` are
flattened with the first qubit most significant; outcome index 0 is +1 and
index 1 is -1. For two qubits this is the familiar ``omega[c, d, z, w]`` with
``z, w`` over (sigma_z, sigma_x, sigma_y).

The 6^n projector products over-span the operator space, so the expansion is
not unique. We spread the identity component evenly over the three axes, which
gives the closed form

    omega = t_00/9 + c t_z0/3 + d t_0w/3 + c d t_zw     (two qubits)

with ``t_jk = tr[W sigma_j (x) sigma_k] / 4``.
"""
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, NotHermitianError, PPTInputError
from .qmath import (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, check_dims, hermitian_eig,
                    is_hermitian, ket_to_dm, partial_transpose)
from .states import DensityMatrix, as_density, haar_ket, is_entangled_ppt, pauli_projectors

RECONSTRUCTION_TOL = 1e-9

# sigma_0 followed by the three axes in measurement order
_PAULI_BASIS = np.array([PAULI_I, PAULI_Z, PAULI_X, PAULI_Y])
# single-qubit map from Pauli coefficients to projector coefficients, (axis, outcome, k)
_PROJECTOR_MAP = np.zeros((3, 2, 4))
for _z in range(3):
    for _ci, _c in enumerate((1, -1)):
        _PROJECTOR_MAP[_z, _ci, 0] = 1 / 3
        _PROJECTOR_MAP[_z, _ci, _z + 1] = _c


def num_qubits(d):
    n = int(round(np.log2(d)))
    if 2**n != d:
        raise DimensionError(f"local dimension {d} is not a power of two")
    return n


def projector_family(d):
    """Tensor-product Pauli projectors on ``log2(d)`` qubits, shape (3^n, 2^n, d, d)."""
    fam = np.ones((1, 1, 1, 1), dtype=complex)
    single = pauli_projectors()
    for _ in range(num_qubits(d)):
        z, c, m, _ = fam.shape
        fam = np.einsum("zcij,ykab->zyckiajb", fam, single).reshape(z * 3, c * 2, m * 2, m * 2)
    return fam


def pauli_coefficients(W, dims):
    """t[k_1, ..., k_n] = tr[W sigma_k1 (x) ... (x) sigma_kn] / 2^n over all qubits."""
    n = sum(num_qubits(d) for d in dims)
    t = np.asarray(W, dtype=complex).reshape((2,) * (2 * n))
    for q in range(n):
        # after q contractions the remaining row axes are 0..n-q-1, column axes n-q..2(n-q)-1
        m = n - q
        t = np.tensordot(t, _PAULI_BASIS, axes=([0, m], [2, 1]))
    return (t / 2**n).real


def decompose_pauli(W, dims=(2, 2)):
    """Projector coefficients ``omega`` of a Hermitian operator, see module docstring."""
    W = np.asarray(W, dtype=complex)
    dims = check_dims(dims, W.shape[0])
    if len(dims) != 2:
        raise DimensionError("witness must be bipartite")
    if not is_hermitian(W):
        raise NotHermitianError("witness is not Hermitian")
    nA, nB = num_qubits(dims[0]), num_qubits(dims[1])
    t = pauli_coefficients(W, dims)
    omega = t
    for _ in range(nA + nB):
        # consumes the leading Pauli index, appends (axis, outcome)
        omega = np.tensordot(omega, _PROJECTOR_MAP, axes=([0], [2]))
    n = nA + nB
    # axes now: (z_1, c_1, z_2, c_2, ..., z_n, c_n)
    z_axes = [2 * k for k in range(n)]
    c_axes = [2 * k + 1 for k in range(n)]
    omega = omega.transpose(c_axes[:nA] + c_axes[nA:] + z_axes[:nA] + z_axes[nA:])
    return omega.reshape(2**nA, 2**nB, 3**nA, 3**nB)


def reconstruct(omega, dims=(2, 2)):
    dA, dB = dims
    PA, PB = projector_family(dA), projector_family(dB)
    W = np.einsum("cdzw,zcij,wdkl->ikjl", omega, PA, PB)
    return W.reshape(dA * dB, dA * dB)


@dataclass(frozen=True, eq=False)
class WitnessSpec:
    """Hermitian witness matrix with its projector coefficient tensor.

    ``omega`` is left as None when a side is not a power-of-two dimension.
    """

    W: np.ndarray
    dims: tuple
    omega: np.ndarray = field(default=None)

    def __post_init__(self):
        W = np.array(self.W, dtype=complex)
        dims = check_dims(self.dims, W.shape[0])
        if not is_hermitian(W):
            raise NotHermitianError("witness is not Hermitian")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "dims", dims)
        if self.omega is None:
            # projector coefficients only exist when both sides are qubit registers
            if all(d & (d - 1) == 0 for d in dims) and len(dims) == 2:
                object.__setattr__(self, "omega", decompose_pauli(W, dims))
        else:
            object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float))

    def value(self, rho):
        return float(np.real(np.trace(self.W @ np.asarray(rho))))

    def reconstruction_error(self):
        return float(np.max(np.abs(reconstruct(self.omega, self.dims) - self.W)))


def witness_from_state(rho):
    """Witness (|eta><eta|)^{T_B} built from the most negative eigenvector of rho^{T_B}."""
    rho = as_density(rho)
    if not is_entangled_ppt(rho):
        raise PPTInputError("PPT input: no PPT witness exists; supply a witness explicitly")
    vals, vecs = hermitian_eig(partial_transpose(rho.matrix, rho.dims, 1))
    W = partial_transpose(ket_to_dm(vecs[:, 0]), rho.dims, 1)
    return WitnessSpec(W, rho.dims)


def _product_minimum(W, dims, rng, tol=1e-10, max_iter=500):
    """Local minimum of <a,b|W|a,b> by alternating exact eigen-steps."""
    dA, dB = dims
    Wt = W.reshape(dA, dB, dA, dB)
    a = haar_ket(dA, rng)
    b = haar_ket(dB, rng)
    best = np.inf
    for _ in range(max_iter):
        WB = np.einsum("i,ijkl,k->jl", a.conj(), Wt, a)
        _, vecs = np.linalg.eigh((WB + WB.conj().T) / 2)
        b = vecs[:, 0]
        WA = np.einsum("j,ijkl,l->ik", b.conj(), Wt, b)
        vals, vecs = np.linalg.eigh((WA + WA.conj().T) / 2)
        a = vecs[:, 0]
        if best - vals[0] < tol:
            best = min(best, vals[0])
            break
        best = vals[0]
    return float(best)


def verify_witness(ws, rho, samples=20, seed=0):
    """Value on the target state and the minimum over product states.

    The separable minimum is taken over ``samples`` Haar-random product
    starting points, each refined by alternating optimization.
    """
    rng = np.random.default_rng(seed)
    rho = as_density(rho, ws.dims)
    starts = max(int(samples), 1)
    min_sep = min(_product_minimum(ws.W, ws.dims, rng) for _ in range(starts))
    return {"min_separable_value": min_sep, "target_value": ws.value(rho.matrix)}
