"""Anonymous-key identification: challenge, response, verification.

The verifier (Adam) stores a key qubit whose preparation phase ``phi_b`` he
does not know; only the legitimate prover (Babe) knows it.  A round sends
the stored state rotated by a fresh random phase ``phi_a``; the prover
removes ``phi_b`` and returns the bare ``phi_a`` state, which the verifier
checks with a one-shot projection.  An impersonator who must fabricate the
response from a measured estimate of the key phase is accepted on one qubit
with probability equal to the acceptance bound of the ring detector (3/4 at
M = 4), so m qubits push the cheat rate to that value to the m-th power.

The random challenge phase is what blocks a replay of the fixed reference
state: returning the phase-zero state against random challenges is accepted
only half the time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .detection import square_root_measurement
from .states import (
    DensityOperator,
    circle_state,
    circle_state_at,
    overlap,
    rotate_circle,
    uniform_circle_ensemble,
)

_TWO_PI = 2.0 * math.pi
_EXACT_ATOL = 1e-12


@dataclass(frozen=True)
class AkiChallenge:
    """One outgoing challenge: the masked state and both phases.

    ``phi_b`` rides along for bookkeeping only; verifier-side code must not
    read it (see :class:`SecretCirclePhase` for the audited holder).
    """

    phi_a: float
    phi_b: float
    sent_state: DensityOperator

    def __post_init__(self) -> None:
        expected = circle_state_at(self.phi_a + self.phi_b)
        if abs(overlap(expected, self.sent_state) - 1.0) > 1e-9:
            raise ValueError("sent_state must be the pure state at phi_b + phi_a")


class SecretCirclePhase:
    """Audited holder for a stored key state's preparation phase.

    The simulator stands in for quantum memory with the classical phase; this
    wrapper keeps honest code honest.  Physical operations on the stored
    qubit (modulating a challenge) and the prover's own use of her knowledge
    (removing the phase) are allowed and logged; any outright read of the
    phase must go through :meth:`reveal` and lands in the audit log, so tests
    can assert the verifier never peeked.
    """

    __slots__ = ("_phase", "audit_log")

    def __init__(self, phase: float) -> None:
        self._phase = float(phase) % _TWO_PI
        self.audit_log: list[tuple[str, str]] = []

    def modulated_state(self, phi_a: float) -> DensityOperator:
        """Rotate the stored qubit by ``phi_a``; a physical operation."""
        self.audit_log.append(("modulate", ""))
        return circle_state_at(self._phase + phi_a)

    def remove_phase(self, state: DensityOperator) -> DensityOperator:
        """Prover-side unwinding of the key phase."""
        self.audit_log.append(("remove", ""))
        return rotate_circle(state, -self._phase)

    def reveal(self, purpose: str) -> float:
        """Read the phase outright; always audited."""
        self.audit_log.append(("reveal", purpose))
        return self._phase


def aki_challenge(
    phi_b: float,
    rng: np.random.Generator,
    M: int = 4,
    phi_a: float | None = None,
) -> AkiChallenge:
    """Draw a fresh challenge phase from the M-point ring and mask the key.

    ``phi_a`` can be forced for deterministic tests; otherwise it is uniform
    over the M ring phases.
    """
    if M <= 0 or M % 4 != 0:
        raise ValueError("M must be a positive multiple of 4")
    if phi_a is None:
        phi_a = _TWO_PI * int(rng.integers(0, M)) / M
    return AkiChallenge(
        phi_a=float(phi_a), phi_b=float(phi_b), sent_state=circle_state_at(phi_b + phi_a)
    )


def aki_respond(state: DensityOperator, phi_b: float) -> DensityOperator:
    """Honest response: rotate the received state by ``-phi_b``."""
    return rotate_circle(state, -phi_b)


def aki_verify(returned: DensityOperator, phi_a: float, rng: np.random.Generator) -> bool:
    """Sample the projection onto the expected challenge state.

    Outcome probabilities within 1e-12 of 0 or 1 are snapped exact, so the
    honest noiseless round accepts with probability one rather than
    one-minus-rounding-error.
    """
    p = overlap(returned, circle_state_at(phi_a))
    p = min(max(p, 0.0), 1.0)
    if p >= 1.0 - _EXACT_ATOL:
        return True
    if p <= _EXACT_ATOL:
        return False
    return bool(rng.random() < p)


def run_honest_aki_round(key: SecretCirclePhase, rng: np.random.Generator, M: int = 4) -> bool:
    """One full honest round against an audited key: never reads the phase."""
    phi_a = _TWO_PI * int(rng.integers(0, M)) / M
    sent = key.modulated_state(phi_a)
    returned = key.remove_phase(sent)
    return aki_verify(returned, phi_a, rng)


def aki_impersonation(m: int, M: int, trials: int, seed: int) -> tuple[float, float]:
    """Monte Carlo acceptance of the optimal measure-and-respond cheat.

    The impersonator measures a copy of the key state with the optimal ring
    detector and answers the challenge rotated by minus the estimate, so her
    response misses the expected state by exactly her estimation error.  A
    session accepts only if all ``m`` independent rounds accept.

    Returns
    -------
    (estimate, stderr)
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if M <= 0 or M % 4 != 0:
        raise ValueError("M must be a positive multiple of 4")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    ensemble = uniform_circle_ensemble(M)
    srm = square_root_measurement(ensemble)
    pmf = np.array(
        [float(np.real(np.trace(srm.elements[d] @ ensemble.states[0].matrix))) for d in range(M)]
    )
    pmf = np.clip(pmf, 0.0, None)
    pmf = pmf / pmf.sum()
    ov = np.array(
        [overlap(circle_state(0, M), circle_state(d, M)) for d in range(M)]
    )

    # per round: estimate offset delta ~ detector pmf; the returned state
    # misses the target by delta, and the projection accepts with ov[delta]
    delta = rng.choice(M, size=(trials, m), p=pmf)
    accepted = rng.random((trials, m)) < ov[delta]
    success = accepted.all(axis=1)
    p = float(np.mean(success))
    se = float(np.sqrt(max(p * (1.0 - p), 1e-300) / trials))
    return p, se
