"""Exact small-dimension substrate for the open-system amplifier.

Superoperators are 4x4 matrices acting on column-stacked 2x2 matrices:
vec([[a, b], [c, d]]) = (a, c, b, d). All builders below go through vec/unvec
so the stacking convention cannot drift. Evolution re-projects results onto
the physical set (hermitian, trace one, PSD up to tolerance); eigenvalues
below -1e-10 are treated as genuine bugs, not noise, and raise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

Mat2 = np.ndarray  # 2x2 complex

IDENTITY2: Mat2 = np.eye(2, dtype=complex)
PROJ_GROUND: Mat2 = np.array([[1, 0], [0, 0]], dtype=complex)
PROJ_EXCITED: Mat2 = np.array([[0, 0], [0, 1]], dtype=complex)
LOWERING: Mat2 = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
PAULI_Z: Mat2 = np.array([[1, 0], [0, -1]], dtype=complex)

_ZERO_EIG = 1e-10
_HERM_TOL = 1e-12
_TRACE_TOL = 1e-12
_PSD_FLOOR = -1e-10


def vec(m: Mat2) -> np.ndarray:
    """Column-stack a 2x2 matrix into a length-4 vector."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> Mat2:
    return np.asarray(v, dtype=complex).reshape(2, 2, order="F")


def left_mult(a: Mat2) -> np.ndarray:
    """Superoperator matrix of rho -> a @ rho."""
    return np.kron(IDENTITY2, np.asarray(a, dtype=complex))


def right_mult(b: Mat2) -> np.ndarray:
    """Superoperator matrix of rho -> rho @ b."""
    return np.kron(np.asarray(b, dtype=complex).T, IDENTITY2)


def sandwich(a: Mat2, b: Mat2) -> np.ndarray:
    """Superoperator matrix of rho -> a @ rho @ b."""
    return np.kron(np.asarray(b, dtype=complex).T, np.asarray(a, dtype=complex))


def commutator(a: Mat2, b: Mat2) -> Mat2:
    return a @ b - b @ a


def anticommutator(a: Mat2, b: Mat2) -> Mat2:
    return a @ b + b @ a


@dataclass(frozen=True)
class DensityMatrix2:
    """A 2x2 density matrix: hermitian, unit trace, positive semidefinite."""

    matrix: Mat2

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > _HERM_TOL:
            raise ValueError("matrix is not hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > _TRACE_TOL or abs(np.trace(m).imag) > _TRACE_TOL:
            raise ValueError(f"trace {np.trace(m)} deviates from 1 beyond 1e-12")
        if np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)) < _PSD_FLOOR:
            raise ValueError("matrix has an eigenvalue below -1e-10")
        object.__setattr__(self, "matrix", m)
        m.setflags(write=False)

    @classmethod
    def ground(cls) -> "DensityMatrix2":
        return cls(PROJ_GROUND.copy())

    @classmethod
    def excited(cls) -> "DensityMatrix2":
        return cls(PROJ_EXCITED.copy())

    @classmethod
    def plus(cls) -> "DensityMatrix2":
        """The (e0+e1)/sqrt(2) pure state: the default classifier probe."""
        return cls(np.full((2, 2), 0.5, dtype=complex))

    @classmethod
    def from_populations(cls, excited_weight: float) -> "DensityMatrix2":
        """diag(1-x, x): the diagonal embedding used by the chaos amplifier."""
        x = float(excited_weight)
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"population {x} outside [0, 1]")
        return cls(np.diag([1.0 - x, x]).astype(complex))

    @classmethod
    def pure(cls, amp0: complex, amp1: complex) -> "DensityMatrix2":
        v = np.array([amp0, amp1], dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @property
    def p1(self) -> float:
        """Excited-level population <e1|rho|e1>."""
        return float(self.matrix[1, 1].real)

    @property
    def coherence(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass
class Superoperator:
    """4x4 matrix acting on column-stacked 2x2 matrices."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("superoperator has non-finite entries")
        self.matrix = m

    def __call__(self, rho: Mat2) -> Mat2:
        return unvec(self.matrix @ vec(rho))

    @cached_property
    def _eig(self) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
        """Eigendecomposition (w, V, V^-1), or None if too ill-conditioned."""
        w, v = np.linalg.eig(self.matrix)
        if np.linalg.cond(v) > 1e10:
            return None
        return w, v, np.linalg.inv(v)

    def is_trace_preserving(self, tol: float = 1e-9) -> bool:
        # d/dt Tr(rho) = <vec(I), L vec(rho)>; column stacking puts the
        # diagonal at vec positions 0 and 3.
        trace_row = vec(IDENTITY2).conj() @ self.matrix
        return float(np.max(np.abs(trace_row))) < tol


def expm_superop(sup: Superoperator, t: float) -> Superoperator:
    """exp(t L), by eigendecomposition when well conditioned, otherwise by
    scipy's scaling-and-squaring."""
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    eig = sup._eig
    if eig is not None:
        w, v, v_inv = eig
        m = (v * np.exp(t * w)) @ v_inv
    else:
        m = scipy.linalg.expm(t * sup.matrix)
    return Superoperator(m, label=f"exp({t:g}*{sup.label or 'L'})")


def evolve(sup: Superoperator, rho: DensityMatrix2, t: float) -> DensityMatrix2:
    """Propagate a state: unvec(exp(tL) vec(rho)), re-projected to physical."""
    if not sup.is_trace_preserving():
        raise ValueError(f"generator {sup.label or repr(sup.matrix)} is not trace-preserving")
    out = unvec(expm_superop(sup, t).matrix @ vec(rho.matrix))
    return _project_physical(out)


def heisenberg_evolve(sup: Superoperator, observable: Mat2, t: float) -> Mat2:
    """Propagate an observable under the dual generator; no normalization."""
    return unvec(expm_superop(sup, t).matrix @ vec(observable))


def _project_physical(m: Mat2) -> DensityMatrix2:
    herm = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(herm)
    if w.min() < _PSD_FLOOR:
        raise ValueError(f"evolution produced eigenvalue {w.min():.3e} below -1e-10")
    w = np.clip(w, 0.0, None)
    herm = (v * w) @ v.conj().T
    herm /= np.trace(herm).real
    return DensityMatrix2(herm)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue summary of a generator: kernel dimension and decay gap."""

    eigenvalues: tuple[complex, ...]
    zero_modes: int
    gap: float


def spectrum(sup: Superoperator) -> Spectrum:
    eigs = np.linalg.eigvals(sup.matrix)
    nonzero = [z for z in eigs if abs(z) >= _ZERO_EIG]
    gap = min((abs(z.real) for z in nonzero), default=0.0)
    return Spectrum(
        eigenvalues=tuple(sorted(map(complex, eigs), key=lambda z: (z.real, z.imag))),
        zero_modes=len(eigs) - len(nonzero),
        gap=float(gap),
    )


def trace_distance(a: DensityMatrix2, b: DensityMatrix2) -> float:
    """Half the sum of singular values of the difference."""
    return float(0.5 * np.sum(np.linalg.svd(a.matrix - b.matrix, compute_uv=False)))
