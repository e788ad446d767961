"""Finite-dimensional quantum state algebra for the anonymous-key protocols.

Everything else in the package is built from the objects defined here:
density operators with validated invariants, the ring of ``M`` phase states
on the (sigma_1, sigma_3) great circle of the Bloch sphere, the modulation
rotation about the sigma_2 axis, tensor products, overlaps, and ensembles
with prior probabilities.

Conventions
-----------
* A qubit density operator is ``rho = (I + r1*s1 + r2*s2 + r3*s3) / 2`` with
  real Bloch vector ``(r1, r2, r3)``.
* Circle state ``ell`` (out of ``M``, a multiple of 4) is the pure state with
  Bloch vector ``(cos(2*pi*ell/M), 0, sin(2*pi*ell/M))``.  Indices are taken
  modulo ``M``; ``ell = M`` and ``ell = 0`` are the same reference state.
* ``rotate_circle(rho, a)`` advances the circle phase by ``+a`` radians, so a
  clockwise modulation step is a negative angle (index decreases).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ATOL = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


class DensityOperator:
    """A validated d x d density operator.

    The matrix is checked on construction for Hermiticity (1e-9), unit trace
    (1e-9) and positive semidefiniteness (eigenvalues >= -1e-9), and stored
    read-only so instances can be shared freely.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix) -> None:
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density operator must be square, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=ATOL, rtol=0.0):
            raise ValueError("density operator must be Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"density operator must have unit trace, got {tr}")
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -ATOL:
            raise ValueError("density operator must be positive semidefinite")
        self._matrix = _readonly(m)

    @classmethod
    def _trusted(cls, matrix: np.ndarray) -> "DensityOperator":
        # fast path for operations that preserve validity algebraically
        # (unitary conjugation, convex mixtures, tensor products); the
        # public constructor stays fully validated
        self = object.__new__(cls)
        self._matrix = _readonly(matrix)
        return self

    @property
    def matrix(self) -> np.ndarray:
        """Read-only complex matrix."""
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def bloch(self) -> "BlochVector":
        """Bloch vector of a qubit operator."""
        if self.dim != 2:
            raise ValueError("bloch() is defined for qubits only")
        r = [float(np.real(np.trace(self._matrix @ s))) for s in PAULIS]
        return BlochVector(*r)

    def purity(self) -> float:
        return float(np.real(np.trace(self._matrix @ self._matrix)))

    def is_pure(self, atol: float = ATOL) -> bool:
        return abs(self.purity() - 1.0) <= atol

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"DensityOperator(dim={self.dim})"


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector representing a qubit state."""

    r1: float
    r2: float
    r3: float

    def norm(self) -> float:
        return math.sqrt(self.r1**2 + self.r2**2 + self.r3**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.r1, self.r2, self.r3], dtype=float)


@dataclass(frozen=True)
class CircleStateIndex:
    """Index ``ell`` into the ring of ``M`` great-circle states.

    ``M`` must be a multiple of 4 so that a quarter-turn maps ring states to
    ring states.  ``ell`` may be any integer; arithmetic is modulo ``M``.
    """

    ell: int
    M: int

    def __post_init__(self) -> None:
        if self.M <= 0 or self.M % 4 != 0:
            raise ValueError(f"M must be a positive multiple of 4, got {self.M}")

    @property
    def phase(self) -> float:
        """Circle phase 2*pi*ell/M in radians."""
        return 2.0 * math.pi * (self.ell % self.M) / self.M


@dataclass(frozen=True)
class Ensemble:
    """Pure or mixed states with prior probabilities."""

    states: tuple
    priors: tuple

    def __post_init__(self) -> None:
        states = tuple(self.states)
        priors = tuple(float(p) for p in self.priors)
        if not states:
            raise ValueError("ensemble must contain at least one state")
        if len(states) != len(priors):
            raise ValueError("states and priors must have equal length")
        dim = states[0].dim
        if any(s.dim != dim for s in states):
            raise ValueError("all ensemble states must share one dimension")
        if any(p < -ATOL for p in priors):
            raise ValueError("priors must be nonnegative")
        if abs(sum(priors) - 1.0) > ATOL:
            raise ValueError(f"priors must sum to 1, got {sum(priors)}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", priors)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].dim


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def bloch_to_density(r) -> DensityOperator:
    """Build the qubit density operator (I + r.sigma)/2.

    Parameters
    ----------
    r : BlochVector or length-3 sequence
        Bloch vector with norm at most 1 (within 1e-9).

    Raises
    ------
    ValueError
        If the Bloch vector norm exceeds 1 + 1e-9.
    """
    if isinstance(r, BlochVector):
        vec = r.as_array()
    else:
        vec = np.asarray(r, dtype=float)
        if vec.shape != (3,):
            raise ValueError("Bloch vector must have three components")
    n = float(np.linalg.norm(vec))
    if n > 1.0 + ATOL:
        raise ValueError(f"Bloch vector norm {n} exceeds 1")
    m = 0.5 * (np.eye(2, dtype=complex) + sum(c * s for c, s in zip(vec, PAULIS)))
    return DensityOperator._trusted(m)


def circle_phase(ell: int, M: int) -> float:
    """Phase angle 2*pi*ell/M of ring state ``ell``."""
    return CircleStateIndex(ell, M).phase


def circle_state_at(phase: float) -> DensityOperator:
    """Pure state at an arbitrary phase on the (sigma_1, sigma_3) circle."""
    return bloch_to_density((math.cos(phase), 0.0, math.sin(phase)))


def circle_ket(phase: float) -> np.ndarray:
    """Real state vector for the circle state at ``phase``.

    The two amplitudes are ``cos(b/2), sin(b/2)`` with ``b = pi/2 - phase``,
    which reproduces the Bloch vector ``(cos(phase), 0, sin(phase))``.
    """
    b = math.pi / 2 - phase
    return np.array([math.cos(b / 2), math.sin(b / 2)], dtype=complex)


def circle_state(ell: int, M: int) -> DensityOperator:
    """Ring state ``ell`` of the ``M`` uniformly spaced great-circle states."""
    return circle_state_at(circle_phase(ell, M))


def sphere_state(theta: float, phi: float) -> DensityOperator:
    """Pure state with Bloch vector (sin t cos p, cos t, sin t sin p)."""
    return bloch_to_density(
        (math.sin(theta) * math.cos(phi), math.cos(theta), math.sin(theta) * math.sin(phi))
    )


def rotation_unitary(angle: float) -> np.ndarray:
    """Unitary advancing the circle phase by ``+angle``.

    This is the Bloch rotation about the sigma_2 axis: real orthogonal on the
    qubit amplitudes, mapping circle state ``ell`` to ``ell + angle*M/(2*pi)``.
    """
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def rotate_circle(state: DensityOperator, angle: float) -> DensityOperator:
    """Rotate a qubit state by ``angle`` along the great circle.

    Positive angles increase the circle phase; the modulation steps of the
    key protocols are ``angle = +pi/2`` (bit 0) and ``-pi/2`` (bit 1).
    """
    if state.dim != 2:
        raise ValueError("rotate_circle acts on qubits")
    u = rotation_unitary(angle)
    return DensityOperator._trusted(u @ state.matrix @ u.conj().T)


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------


def overlap(rho: DensityOperator, sigma: DensityOperator) -> float:
    """tr(rho sigma); for pure qubits this equals (1 + r.r')/2."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    return float(np.real(np.trace(rho.matrix @ sigma.matrix)))


def tensor(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    """Kronecker product of two states."""
    return DensityOperator._trusted(np.kron(a.matrix, b.matrix))


def partial_trace(rho: DensityOperator, dims: tuple, keep: int) -> DensityOperator:
    """Trace out all subsystems except ``keep`` from a product-space state.

    Parameters
    ----------
    dims : tuple of int
        Subsystem dimensions whose product equals ``rho.dim``.
    keep : int
        Index of the subsystem to keep.
    """
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != rho.dim:
        raise ValueError("subsystem dimensions do not match the operator")
    if not 0 <= keep < len(dims):
        raise ValueError("keep index out of range")
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    for i in reversed(range(n)):
        if i == keep:
            continue
        t = np.trace(t, axis1=i, axis2=i + (t.ndim // 2))
    return DensityOperator._trusted(t)


def ensemble_mixture(e: Ensemble) -> DensityOperator:
    """Average state sum_i p_i rho_i of an ensemble."""
    m = sum(p * s.matrix for p, s in zip(e.priors, e.states))
    return DensityOperator._trusted(m)


def hermitian_eig(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues.

    Returns ``(w, V)`` with ``h = V diag(w) V^dagger``.  Raises on visibly
    non-Hermitian input instead of silently symmetrizing it.
    """
    h = np.asarray(h, dtype=complex)
    if not np.allclose(h, h.conj().T, atol=1e-8, rtol=0.0):
        raise ValueError("matrix is not Hermitian")
    w, v = np.linalg.eigh(h)
    return w, v


# ---------------------------------------------------------------------------
# standard ensembles
# ---------------------------------------------------------------------------


def uniform_circle_ensemble(M: int) -> Ensemble:
    """The ``M`` ring states with equal priors 1/M."""
    states = tuple(circle_state(ell, M) for ell in range(1, M + 1))
    return Ensemble(states, tuple(1.0 / M for _ in range(M)))


def six_state_ensemble() -> Ensemble:
    """The six Bloch-axis pole states (+-x, +-y, +-z) with equal priors."""
    axes = [
        (1, 0, 0), (-1, 0, 0),
        (0, 1, 0), (0, -1, 0),
        (0, 0, 1), (0, 0, -1),
    ]
    states = tuple(bloch_to_density(a) for a in axes)
    return Ensemble(states, tuple(1.0 / 6 for _ in range(6)))


def sphere_grid_ensemble(n: int) -> Ensemble:
    """Quasi-uniform n-point covering of the Bloch sphere, equal priors.

    ``n = 6`` returns the exact axis poles; larger ``n`` uses a Fibonacci
    lattice.  Used to probe the full-sphere (continuum) limit numerically.
    """
    if n == 6:
        return six_state_ensemble()
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    phi = math.pi * (1.0 + math.sqrt(5.0)) * i
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    states = tuple(
        bloch_to_density((s[j] * math.cos(phi[j]), s[j] * math.sin(phi[j]), z[j]))
        for j in range(n)
    )
    return Ensemble(states, tuple(1.0 / n for _ in range(n)))


def operators_close(a: DensityOperator, b: DensityOperator, atol: float = ATOL) -> bool:
    """Entrywise comparison of two density operators."""
    return a.dim == b.dim and bool(np.allclose(a.matrix, b.matrix, atol=atol, rtol=0.0))
