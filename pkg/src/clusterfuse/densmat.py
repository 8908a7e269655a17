"""Dense density-matrix core.

Qubits are labelled 1..q. Qubit 1 is the leftmost tensor factor and the most
significant bit of a basis index, so ``|b1 b2 ... bq>`` sits at index
``sum(b_k << (q - k))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Centralized tolerances.
ATOL_STRUCT = 1e-12
ATOL_SPECTRAL = 1e-10
ATOL_FORMULA = 1e-9

MAX_QUBITS = 10


class DimensionError(ValueError):
    """Raised for mismatched or unsupported dimensions."""


class QubitLabelError(ValueError):
    """Raised when a qubit label does not exist in the state."""


class NotHermitianError(ValueError):
    pass


class KrausCompletenessError(ValueError):
    pass


def _qubits_for_dim(dim: int) -> int:
    q = int(dim).bit_length() - 1
    if dim < 1 or (1 << q) != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    if q > MAX_QUBITS:
        raise DimensionError(f"{q} qubits exceeds the supported maximum of {MAX_QUBITS}")
    return q


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Immutable ``dim x dim`` complex matrix on ``qubits`` qubits."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {arr.shape}")
        _qubits_for_dim(arr.shape[0])
        object.__setattr__(self, "data", _frozen(arr))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def qubits(self) -> int:
        return self.dim.bit_length() - 1

    def trace(self) -> float:
        return float(np.trace(self.data).real)

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    @classmethod
    def from_pure(cls, state: "PureState | np.ndarray") -> "DensityMatrix":
        vec = state.amplitudes if isinstance(state, PureState) else np.asarray(state, dtype=complex)
        return cls(np.outer(vec, vec.conj()))

    @classmethod
    def maximally_mixed(cls, qubits: int) -> "DensityMatrix":
        dim = 1 << qubits
        return cls(np.eye(dim) / dim)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector of length ``2**q``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=complex)
        if vec.ndim != 1:
            raise DimensionError("amplitudes must be one-dimensional")
        _qubits_for_dim(vec.shape[0])
        norm = np.linalg.norm(vec)
        if abs(norm**2 - 1.0) > ATOL_STRUCT:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm**2!r})")
        object.__setattr__(self, "amplitudes", _frozen(vec))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def qubits(self) -> int:
        return self.dim.bit_length() - 1


def _as_array(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return m.data
    return np.asarray(m, dtype=complex)


def _check_labels(labels: Iterable[int], q: int) -> list[int]:
    labels = sorted(set(labels))
    for k in labels:
        if not 1 <= k <= q:
            raise QubitLabelError(f"qubit {k} not in 1..{q}")
    return labels


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Kronecker product with ``a`` on the leading (more significant) qubits."""
    if a.qubits + b.qubits > MAX_QUBITS:
        raise DimensionError(f"{a.qubits + b.qubits} qubits exceeds {MAX_QUBITS}")
    return DensityMatrix(np.kron(a.data, b.data))


def partial_trace(rho: DensityMatrix, discard: Iterable[int]) -> DensityMatrix:
    """Trace out the qubits in ``discard``; remaining qubits keep their relative order."""
    q = rho.qubits
    discard = _check_labels(discard, q)
    t = rho.data.reshape([2] * (2 * q))
    # Trace highest labels first so lower axis indices stay valid.
    n = q
    for k in reversed(discard):
        t = np.trace(t, axis1=k - 1, axis2=k - 1 + n)
        n -= 1
    d = 1 << n
    return DensityMatrix(t.reshape(d, d))


def partial_transpose(rho: DensityMatrix, subset: Iterable[int]) -> DensityMatrix:
    """Transpose the row/column indices of the qubits in ``subset`` only."""
    q = rho.qubits
    subset = _check_labels(subset, q)
    t = rho.data.reshape([2] * (2 * q))
    axes = list(range(2 * q))
    for k in subset:
        axes[k - 1], axes[k - 1 + q] = axes[k - 1 + q], axes[k - 1]
    return DensityMatrix(t.transpose(axes).reshape(rho.dim, rho.dim))


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    The matrix is symmetrized before diagonalization; an anti-Hermitian part
    larger than ``ATOL_SPECTRAL`` is rejected.
    """
    arr = _as_array(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    asym = np.max(np.abs(arr - arr.conj().T)) if arr.size else 0.0
    if asym > ATOL_SPECTRAL:
        raise NotHermitianError(f"matrix deviates from Hermitian by {asym:.3e}")
    return np.linalg.eigvalsh((arr + arr.conj().T) / 2)


def min_pt_eigenvalue(rho: DensityMatrix, subset: Iterable[int]) -> float:
    """Most negative eigenvalue of the partial transpose (negativity as used here)."""
    return float(hermitian_eigenvalues(partial_transpose(rho, subset))[0])


def fidelity_pure(rho: DensityMatrix, target: PureState) -> float:
    """``<psi|rho|psi>`` for a pure target."""
    if rho.dim != target.dim:
        raise DimensionError(f"state dim {rho.dim} != target dim {target.dim}")
    psi = target.amplitudes
    val = np.vdot(psi, rho.data @ psi).real
    return float(min(max(val, 0.0), 1.0))


def purity(rho: DensityMatrix) -> float:
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho.data) ** 2))


def check_kraus_completeness(ops: Sequence[np.ndarray], atol: float = ATOL_SPECTRAL) -> None:
    ops = [np.asarray(k, dtype=complex) for k in ops]
    d = ops[0].shape[1]
    total = sum(k.conj().T @ k for k in ops)
    err = np.max(np.abs(total - np.eye(d)))
    if err > atol:
        raise KrausCompletenessError(f"sum K^dag K deviates from identity by {err:.3e}")


def apply_kraus(
    rho: DensityMatrix,
    ops: Sequence[np.ndarray],
    *,
    trace_preserving: bool = True,
) -> DensityMatrix:
    """Return ``sum_k K rho K^dag``.

    Operators act on the whole register. Pass ``trace_preserving=False`` for
    measurement branches, which skips the completeness check.
    """
    ops = [np.asarray(k, dtype=complex) for k in ops]
    if not ops:
        raise ValueError("empty Kraus set")
    for k in ops:
        if k.shape[1] != rho.dim:
            raise DimensionError(f"Kraus operator shape {k.shape} incompatible with dim {rho.dim}")
    if trace_preserving:
        check_kraus_completeness(ops)
    out = sum(k @ rho.data @ k.conj().T for k in ops)
    return DensityMatrix(out)


def apply_local(rho: DensityMatrix, op: np.ndarray, qubit: int) -> np.ndarray:
    """Return ``O_k rho O_k^dag`` (raw array) for a single-qubit operator on ``qubit``."""
    q = rho.qubits
    _check_labels([qubit], q)
    t = rho.data.reshape([2] * (2 * q))
    op = np.asarray(op, dtype=complex)
    k = qubit - 1
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [k])), 0, k)
    t = np.moveaxis(np.tensordot(t, op.conj(), axes=([k + q], [1])), -1, k + q)
    return t.reshape(rho.dim, rho.dim)


def apply_local_kraus(rho: DensityMatrix, ops: Sequence[np.ndarray], qubit: int) -> DensityMatrix:
    """Single-qubit channel on one qubit, identity elsewhere."""
    check_kraus_completeness(ops)
    return DensityMatrix(sum(apply_local(rho, k, qubit) for k in ops))


def permute_qubits(rho: DensityMatrix, order: Sequence[int]) -> DensityMatrix:
    """Reorder qubits so that new qubit ``i+1`` is old qubit ``order[i]``."""
    q = rho.qubits
    if sorted(order) != list(range(1, q + 1)):
        raise QubitLabelError(f"{list(order)} is not a permutation of 1..{q}")
    axes = [k - 1 for k in order]
    axes = axes + [a + q for a in axes]
    t = rho.data.reshape([2] * (2 * q)).transpose(axes)
    return DensityMatrix(t.reshape(rho.dim, rho.dim))


def is_valid_state(rho: DensityMatrix) -> bool:
    """Hermitian, unit trace, and positive semidefinite within tolerance."""
    arr = rho.data
    if np.max(np.abs(arr - arr.conj().T)) > ATOL_STRUCT:
        return False
    if abs(np.trace(arr) - 1.0) > ATOL_STRUCT:
        return False
    return hermitian_eigenvalues(arr)[0] >= -ATOL_SPECTRAL
