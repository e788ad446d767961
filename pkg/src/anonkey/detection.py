"""Optimal quantum detection for the protocol ensembles.

Implements the square-root measurement for symmetric pure-state ensembles,
the binary Helstrom test, the standard necessary-and-sufficient optimality
certificate, and the acceptance-probability figure of merit

    P_a = sum_{l,l'} p_l * tr(Pi_l' rho_l) * tr(rho_l rho_l')

which scores an interceptor who measures, re-prepares the estimated state,
and must pass the sender's verification.  For the uniform ring of M states
the square-root measurement identifies the state with probability 2/M and is
accepted with probability 3/4 for every M; pure guessing scores 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import (
    ATOL,
    DensityOperator,
    Ensemble,
    circle_state,
    hermitian_eig,
    uniform_circle_ensemble,
)

COMPLETENESS_ATOL = 1e-8
SUPPORT_CUTOFF = 1e-12
OPTIMALITY_ATOL = 1e-7


@dataclass(frozen=True)
class Povm:
    """A positive operator-valued measure.

    Elements must be Hermitian and PSD within 1e-9 and sum to the identity
    within 1e-8; they are stored read-only.
    """

    elements: tuple

    def __post_init__(self) -> None:
        els = []
        for i, e in enumerate(self.elements):
            m = np.asarray(e, dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"POVM element {i} is not square")
            if not np.allclose(m, m.conj().T, atol=ATOL, rtol=0.0):
                raise ValueError(f"POVM element {i} is not Hermitian")
            if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -ATOL:
                raise ValueError(f"POVM element {i} is not positive semidefinite")
            m = m.copy()
            m.setflags(write=False)
            els.append(m)
        if not els:
            raise ValueError("POVM must have at least one element")
        dim = els[0].shape[0]
        if any(e.shape[0] != dim for e in els):
            raise ValueError("POVM elements must share one dimension")
        total = sum(els)
        if not np.allclose(total, np.eye(dim), atol=COMPLETENESS_ATOL, rtol=0.0):
            raise ValueError("POVM elements must sum to the identity")
        object.__setattr__(self, "elements", tuple(els))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class DetectionReport:
    """Summary of one detection problem: who wins, and by how much."""

    pc: float
    pa: float
    povm: Povm
    certified_optimal: bool

    def __post_init__(self) -> None:
        if not 0.0 - ATOL <= self.pc <= 1.0 + ATOL:
            raise ValueError("pc must be a probability")
        if not 0.0 - ATOL <= self.pa <= 1.0 + ATOL:
            raise ValueError("pa must be a probability")
        if self.pa < self.pc - ATOL:
            raise ValueError("acceptance cannot be below correct identification")


def _inv_sqrt_on_support(m: np.ndarray) -> np.ndarray:
    w, v = hermitian_eig(m)
    inv = np.where(w > SUPPORT_CUTOFF, 1.0 / np.sqrt(np.maximum(w, SUPPORT_CUTOFF)), 0.0)
    return (v * inv) @ v.conj().T


def square_root_measurement(e: Ensemble) -> Povm:
    """Square-root measurement S^(-1/2) p_i rho_i S^(-1/2), S = sum p_i rho_i.

    For symmetric pure-state ensembles with uniform priors this is the
    minimum-error measurement.  If the ensemble does not span the space a
    trailing element covering the orthogonal complement is appended so the
    returned POVM is complete; outcome ``i < len(states)`` still means
    "state i".
    """
    mix = sum(p * s.matrix for p, s in zip(e.priors, e.states))
    w, v = hermitian_eig(mix)
    if w.max() <= SUPPORT_CUTOFF:
        raise ValueError("ensemble mixture has rank zero")
    s_inv = _inv_sqrt_on_support(mix)
    elements = [s_inv @ (p * s.matrix) @ s_inv for p, s in zip(e.priors, e.states)]
    support = (v * (w > SUPPORT_CUTOFF)) @ v.conj().T
    complement = np.eye(e.dim) - support
    if np.linalg.norm(complement) > COMPLETENESS_ATOL:
        elements.append(complement)
    return Povm(tuple(elements))


def uniform_guess_povm(n: int, dim: int) -> Povm:
    """The n-outcome POVM I/n: reporting an estimate without measuring."""
    return Povm(tuple(np.eye(dim, dtype=complex) / n for _ in range(n)))


def correct_id_probability(e: Ensemble, m: Povm) -> float:
    """Probability sum_i p_i tr(Pi_i rho_i) that outcome i hits state i."""
    if m.dim != e.dim:
        raise ValueError("POVM and ensemble dimensions differ")
    if m.size < e.size:
        raise ValueError(f"POVM has {m.size} elements for {e.size} states")
    return float(
        sum(p * np.real(np.trace(el @ s.matrix)) for p, s, el in zip(e.priors, e.states, m.elements))
    )


def acceptance_probability(e: Ensemble, m: Povm) -> float:
    """Probability that the re-prepared estimate passes verification.

    Outcome ``l'`` of the POVM means the interceptor re-prepares state
    ``rho_l'`` of the ensemble; the sender's check then succeeds with
    probability ``tr(rho_l rho_l')``.
    """
    if m.dim != e.dim:
        raise ValueError("POVM and ensemble dimensions differ")
    if m.size < e.size:
        raise ValueError(f"POVM has {m.size} elements for {e.size} states")
    n = e.size
    cond = np.empty((n, n))
    accept = np.empty((n, n))
    for i, s in enumerate(e.states):
        for j in range(n):
            cond[i, j] = np.real(np.trace(m.elements[j] @ s.matrix))
            accept[i, j] = np.real(np.trace(s.matrix @ e.states[j].matrix))
    priors = np.asarray(e.priors)
    return float(np.sum(priors[:, None] * cond * accept))


def helstrom_binary(
    rho0: DensityOperator, rho1: DensityOperator, p0: float
) -> tuple[Povm, float]:
    """Optimal two-outcome test between rho0 (prior p0) and rho1.

    Projects onto the positive/nonpositive eigenspaces of
    ``p0 rho0 - (1-p0) rho1``; zero eigenvalues are assigned to outcome 1
    (the optimal value does not depend on the tie rule).  Returns the
    projective POVM and the optimal success probability.
    """
    if rho0.dim != rho1.dim:
        raise ValueError("states must share one dimension")
    if not 0.0 <= p0 <= 1.0:
        raise ValueError("p0 must be a probability")
    gamma = p0 * rho0.matrix - (1.0 - p0) * rho1.matrix
    w, v = hermitian_eig(gamma)
    positive = w > SUPPORT_CUTOFF
    pi0 = (v * positive) @ v.conj().T
    pi1 = np.eye(rho0.dim) - pi0
    povm = Povm((pi0, pi1))
    pc = p0 * np.real(np.trace(pi0 @ rho0.matrix)) + (1.0 - p0) * np.real(
        np.trace(pi1 @ rho1.matrix)
    )
    return povm, float(pc)


def certify_optimality(e: Ensemble, m: Povm, atol: float = OPTIMALITY_ATOL) -> bool:
    """Check the standard optimality conditions for minimum-error detection.

    ``Y = sum_j p_j rho_j Pi_j`` must be Hermitian, and ``Y - p_j rho_j``
    must be PSD for every j.  Both are necessary and sufficient.
    """
    if m.dim != e.dim or m.size < e.size:
        raise ValueError("POVM does not match the ensemble")
    y = sum(p * s.matrix @ el for p, s, el in zip(e.priors, e.states, m.elements))
    if not np.allclose(y, y.conj().T, atol=atol, rtol=0.0):
        return False
    y = (y + y.conj().T) / 2
    for p, s in zip(e.priors, e.states):
        if np.linalg.eigvalsh(y - p * s.matrix).min() < -atol:
            return False
    return True


def evaluate_detection(e: Ensemble, m: Povm | None = None) -> DetectionReport:
    """Convenience wrapper: build the SRM if no POVM is given, score it."""
    if m is None:
        m = square_root_measurement(e)
    return DetectionReport(
        pc=correct_id_probability(e, m),
        pa=acceptance_probability(e, m),
        povm=m,
        certified_optimal=certify_optimality(e, m),
    )


def random_basis_strategy(M: int, rng_seed: int, trials: int) -> tuple[float, float]:
    """Monte Carlo acceptance of the random-orthogonal-basis interceptor.

    The interceptor picks ``k`` uniformly, measures the orthogonal basis
    formed by ring states ``k`` and ``k + M/2`` (the antipodal pair), and
    re-prepares the outcome state.  Works without knowledge of ``M``:
    the acceptance is 3/4 on the ring for every M.

    Returns
    -------
    (estimate, stderr)
        Fraction of accepted trials and its binomial standard error.
    """
    if M <= 0 or M % 4 != 0:
        raise ValueError("M must be a positive multiple of 4")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(rng_seed)
    # overlap table between ring states d steps apart, from the matrix algebra
    ov = np.array(
        [np.real(np.trace(circle_state(d, M).matrix @ circle_state(0, M).matrix)) for d in range(M)]
    )
    true = rng.integers(0, M, size=trials)
    k = rng.integers(0, M, size=trials)
    p_first = ov[(k - true) % M]
    first = rng.random(trials) < p_first
    reported = np.where(first, k, (k + M // 2) % M)
    accepted = rng.random(trials) < ov[(reported - true) % M]
    p = float(np.mean(accepted))
    se = float(np.sqrt(max(p * (1.0 - p), 1e-300) / trials))
    return p, se


def rotated_srm_acceptance(M: int, angles: np.ndarray) -> np.ndarray:
    """Acceptance of the SRM conjugated by a circle rotation of each angle.

    Used to confirm numerically that no rotated variant of the square-root
    measurement improves the acceptance probability on the uniform ring.
    """
    e = uniform_circle_ensemble(M)
    ov = np.empty((M, M))
    for i in range(M):
        for j in range(M):
            ov[i, j] = np.real(np.trace(e.states[i].matrix @ e.states[j].matrix))
    angles = np.asarray(angles, dtype=float)
    # p(l'|l) for the rotated SRM: (2/M) |<psi_l | U(a) psi_l'>|^2, and the
    # ring overlap depends only on the phase difference.
    l = np.arange(M)
    dphi = 2.0 * np.pi * (l[:, None] - l[None, :]) / M  # phase(l) - phase(l')
    out = np.empty(angles.shape)
    for idx, a in enumerate(angles):
        cond = (2.0 / M) * (1.0 + np.cos(dphi - a)) / 2.0
        out[idx] = float(np.sum((1.0 / M) * cond * ov))
    return out
