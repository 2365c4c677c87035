"""Dense complex linear algebra on multipartite operators.

Operators are plain ``numpy`` arrays. Subsystem structure is always passed
explicitly as ``dims``, an ordered sequence of local dimensions whose product
is the matrix side length.
"""
import numpy as np

from .exceptions import DimensionError, NotHermitianError

HERMITIAN_TOL = 1e-9

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def check_dims(dims, side=None):
    dims = tuple(int(d) for d in dims)
    if len(dims) == 0 or any(d < 2 for d in dims):
        raise DimensionError(f"subsystem dimensions must be >= 2, got {dims}")
    if side is not None and int(np.prod(dims)) != side:
        raise DimensionError(f"dims {dims} do not multiply to side length {side}")
    return dims


def _square(M):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    return M


def is_hermitian(M, tol=HERMITIAN_TOL):
    M = _square(M)
    return bool(np.max(np.abs(M - M.conj().T), initial=0.0) <= tol)


def tensor(*ops):
    """Kronecker product of any number of operators (left to right)."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, np.asarray(op))
    return out


def partial_trace(M, dims, keep):
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems appear in their original order regardless of the order
    of ``keep``.
    """
    M = _square(M)
    dims = check_dims(dims, M.shape[0])
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"invalid keep set {keep} for {n} subsystems")
    t = M.reshape(dims + dims)
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out_idx = keep + [k + n for k in keep]
    t = np.einsum(t, row + col, out_idx)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d_keep, d_keep)


def partial_transpose(M, dims, subsystem):
    """Transpose subsystem ``subsystem`` in the computational basis."""
    M = _square(M)
    dims = check_dims(dims, M.shape[0])
    n = len(dims)
    if not 0 <= subsystem < n:
        raise DimensionError(f"subsystem index {subsystem} out of range for {n} subsystems")
    axes = list(range(2 * n))
    axes[subsystem], axes[subsystem + n] = axes[subsystem + n], axes[subsystem]
    return M.reshape(dims + dims).transpose(axes).reshape(M.shape)


def hermitian_eig(M, tol=HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ascending real eigenvalues and the matching orthonormal
    eigenvectors as the columns of a unitary matrix.
    """
    M = _square(M)
    if not is_hermitian(M, tol):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    herm = (M + M.conj().T) / 2
    return np.linalg.eigh(herm)


def ket_to_dm(psi):
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def expectation(op, rho):
    return float(np.real(np.trace(np.asarray(op) @ np.asarray(rho))))
