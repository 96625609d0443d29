"""Dense complex-matrix kernel: Kronecker products, Schatten norms, state checks.

Basis convention used throughout the package: for a single qubit, index 0 is
the excited state |1> and index 1 is the ground state |0>. Multi-qubit indices
follow the Kronecker order, so for two qubits the basis reads
(|11>, |10>, |01>, |00>).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapacityError, DensityMatrixError, NumericInputError

# Validity tolerances, shared by every check in the package.
HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_ATOL = 1e-10
NORM_ATOL = 1e-12

MAX_QUBITS = 10


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    return a


def tensor_product(a, b, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Kronecker product ``a ⊗ b`` with a capacity guard on the result size."""
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    dim = a.shape[0] * b.shape[0]
    if dim > 2**max_qubits:
        raise CapacityError(
            f"tensor product of dimension {dim} exceeds the {max_qubits}-qubit limit"
        )
    return np.kron(a, b)


def tensor_all(mats: Sequence, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = tensor_product(out, m, max_qubits=max_qubits)
    return out


def is_hermitian(a: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= atol)


def singular_values(a) -> np.ndarray:
    """Singular values in descending order.

    Hermitian input uses ``|eigenvalues|`` directly; otherwise the square roots
    of the eigenvalues of ``a^† a`` are returned.
    """
    a = _as_square(a)
    if not np.all(np.isfinite(a)):
        raise NumericInputError("matrix contains non-finite entries")
    if is_hermitian(a):
        s = np.abs(np.linalg.eigvalsh(a))
    else:
        s = np.sqrt(np.clip(np.linalg.eigvalsh(a.conj().T @ a), 0.0, None))
    return np.sort(s)[::-1]


def schatten_from_singular(s: np.ndarray, axis: int = -1) -> np.ndarray:
    """Stack the (1, 2, inf) Schatten norms computed from singular values."""
    s = np.abs(s)
    return np.stack(
        [s.sum(axis=axis), np.sqrt((s * s).sum(axis=axis)), s.max(axis=axis)],
        axis=-1,
    )


def schatten_norm(a, p) -> float:
    """Schatten p-norm for ``p`` in ``{1, 2, inf}``.

    Args:
        a: square matrix.
        p: 1 (trace norm), 2 (Hilbert-Schmidt) or ``np.inf`` / ``"inf"``
            (operator norm).
    """
    s = singular_values(a)
    if p == 1:
        return float(s.sum())
    if p == 2:
        return float(np.sqrt(np.sum(s * s)))
    if p in (np.inf, "inf", "∞"):
        return float(s[0])
    raise ValueError(f"unsupported Schatten index {p!r}; expected 1, 2 or inf")


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix; construct through :func:`validate_density`."""

    matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return int(round(np.log2(self.dim)))

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def validate_density(m) -> DensityMatrix:
    """Check hermiticity, unit trace and positivity; wrap on success.

    Raises:
        DensityMatrixError: naming the violated property and its magnitude.
    """
    m = _as_square(m)
    if not np.all(np.isfinite(m)):
        raise NumericInputError("density matrix contains non-finite entries")
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > HERMITIAN_ATOL:
        raise DensityMatrixError(f"not Hermitian: max|A - A^dag| = {herm:.3e}")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise DensityMatrixError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    lam_min = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    if lam_min < -PSD_ATOL:
        raise DensityMatrixError(f"not positive semidefinite: min eigenvalue {lam_min:.3e}")
    frozen = m.copy()
    frozen.setflags(write=False)
    return DensityMatrix(frozen)


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector of an ``n_qubits`` register."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.n_qubits < 1 or amps.size != 2**self.n_qubits:
            raise ValueError(
                f"expected {2**max(self.n_qubits, 0)} amplitudes for {self.n_qubits} qubits, got {amps.size}"
            )
        if self.n_qubits > MAX_QUBITS:
            raise CapacityError(f"{self.n_qubits} qubits exceeds the {MAX_QUBITS}-qubit limit")
        norm_err = abs(float(np.vdot(amps, amps).real) - 1.0)
        if norm_err > NORM_ATOL:
            raise ValueError(f"state is not normalized (|<psi|psi> - 1| = {norm_err:.3e})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = int(round(np.log2(amps.size)))
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    @classmethod
    def basis(cls, label: str) -> "PureState":
        """Computational basis state from a bit string such as ``"101"``."""
        amps = np.zeros(2 ** len(label), dtype=complex)
        amps[basis_index(label)] = 1.0
        return cls(len(label), amps)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> DensityMatrix:
        return validate_density(self.projector())


def basis_index(label: str) -> int:
    """Row index of the ket ``|label>`` under the excited-first convention."""
    if not label or set(label) - {"0", "1"}:
        raise ValueError(f"invalid basis label {label!r}")
    idx = 0
    for bit in label:
        idx = 2 * idx + (1 - int(bit))
    return idx
