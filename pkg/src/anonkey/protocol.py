"""Anonymous-key encryption sessions: state machines for Adam and Babe.

One session runs the four protocol steps: Adam sends random ring states
(enough to cover loss and the code rate); Babe encodes her raw bits through
the classical code, modulates each surviving qubit a quarter-turn up or down
the circle, and returns the stream in secret per-block orders (two secret
bits select one of four overlap-free arrangements per 8-qubit block); Adam
restores the order, measures each return in the orthogonal basis formed by
his own state rotated a quarter-turn each way, decodes, and both sides hash
the 8k sifted bits down to a 4k key; a trial encryption of a fixed public
plaintext catches disagreement.

The per-qubit quantum mechanics is exact: all measurement and interception
probabilities are tabulated once per ``M`` from the density-operator algebra
in :mod:`anonkey.states` / :mod:`anonkey.detection`, then sessions sample
from those tables, which keeps thousand-session experiments cheap without
approximating anything.

Adversaries
-----------
``eve_strategy`` selects the attack run inside the session:

* ``"none"`` - honest channel.
* ``"opaque"`` - intercept-resend: Eve measures every outgoing qubit with
  the optimal ring detector and forwards her estimate.  Adam's raw bit error
  settles at 1 - 3/4 = 1/4.
* ``"impersonate-order"`` - Eve answers in Babe's place with her own bits,
  guessing each block's secret order (right with probability 1/4); wrongly
  ordered blocks hand Adam a coin-flip per qubit.
* ``"translucent"`` - a non-disturbing tap of both legs, scored by the
  loose information bound (deterministic bits for order-guessed blocks,
  channel-capacity bits elsewhere).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from functools import lru_cache

import numpy as np

from . import coding
from .adversary import AttackReport, binary_entropy, impersonation_order_pmf, opaque_bound
from .detection import square_root_measurement
from .states import DensityOperator, circle_state, overlap, uniform_circle_ensemble

EVE_STRATEGIES = ("none", "opaque", "impersonate-order", "translucent")

#: The four return orders, written as the source slot for each stream
#: position (1-based digits, as conventionally quoted).
ORDER_STRINGS = ("12345678", "87654321", "38462715", "41236587")
ORDER_TABLE = np.array([[int(c) - 1 for c in s] for s in ORDER_STRINGS])
INVERSE_ORDER_TABLE = np.argsort(ORDER_TABLE, axis=1)
BLOCK_SIZE = 8

#: Fixed public plaintext for the trial encryption (hex digits of pi).
TRIAL_PLAINTEXT = np.array(
    [int(b) for b in bin(0x243F6A8885A308D3)[2:].zfill(64)], dtype=np.uint8
)


@dataclass(frozen=True)
class OrderTable:
    """The four block orders plus their defining property.

    Every stream position receives four pairwise distinct source slots
    across the orders, so a wrong order guess misplaces all eight qubits.
    """

    orders: tuple = tuple(tuple(row) for row in ORDER_TABLE)

    def __post_init__(self) -> None:
        if len(self.orders) != 4 or any(sorted(o) != list(range(8)) for o in self.orders):
            raise ValueError("orders must be four permutations of 0..7")
        for p in range(BLOCK_SIZE):
            if len({o[p] for o in self.orders}) != 4:
                raise ValueError(f"orders collide at position {p}")


def order_permute(block, order_id: int):
    """Arrange an 8-item block into transmission order ``order_id``."""
    if not 0 <= order_id <= 3:
        raise ValueError("order_id must be in 0..3")
    items = list(block)
    if len(items) != BLOCK_SIZE:
        raise ValueError(f"block must have {BLOCK_SIZE} items, got {len(items)}")
    return type(block)(items[src] for src in ORDER_TABLE[order_id])


def order_unpermute(block, order_id: int):
    """Invert :func:`order_permute` for the same ``order_id``."""
    if not 0 <= order_id <= 3:
        raise ValueError("order_id must be in 0..3")
    items = list(block)
    if len(items) != BLOCK_SIZE:
        raise ValueError(f"block must have {BLOCK_SIZE} items, got {len(items)}")
    return type(block)(items[pos] for pos in INVERSE_ORDER_TABLE[order_id])


@dataclass(frozen=True)
class ChannelModel:
    """Per-qubit loss and depolarization, applied once per round trip."""

    loss_prob: float = 0.0
    depolarize_prob: float = 0.0

    def __post_init__(self) -> None:
        for name in ("loss_prob", "depolarize_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")


def apply_channel(
    state: DensityOperator, ch: ChannelModel, rng: np.random.Generator
) -> DensityOperator | None:
    """Send one qubit through the channel.

    Returns ``None`` when the qubit is lost; otherwise the state, replaced by
    the maximally mixed state when depolarized.
    """
    if rng.random() < ch.loss_prob:
        return None
    if rng.random() < ch.depolarize_prob:
        return DensityOperator(np.eye(state.dim, dtype=complex) / state.dim)
    return state


@dataclass(frozen=True)
class SessionConfig:
    """Everything one key-distribution session depends on.

    ``k`` counts 8-qubit data blocks: the session distills a 4k-bit key from
    8k sifted bits.  Identical configs (seeds included) produce bit-identical
    transcripts.
    """

    k: int
    M: int = 4
    channel: ChannelModel = field(default_factory=ChannelModel)
    cecc: str = "hamming74"
    pa_hash_seed: int = 0
    rng_seed: int = 0
    eve_strategy: str = "none"
    send_margin: float = 0.25

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.M <= 0 or self.M % 4 != 0:
            raise ValueError("M must be a positive multiple of 4")
        if self.cecc not in coding.CODES:
            raise ValueError(f"unknown cecc {self.cecc!r}; choose from {coding.CODES}")
        if self.eve_strategy not in EVE_STRATEGIES:
            raise ValueError(
                f"unknown eve_strategy {self.eve_strategy!r}; choose from {EVE_STRATEGIES}"
            )
        if self.send_margin < 0.0:
            raise ValueError("send_margin must be nonnegative")


@dataclass
class SessionTranscript:
    """Full record of one session; serializes to a stable JSON shape.

    ``states_sent`` holds ring indices 0..M-1 (index 0 is the reference
    state).  ``raw_bits_babe`` / ``final_key_babe`` belong to whoever
    answered Adam: the honest responder normally, Eve under the
    impersonation strategy (``eve_report["strategy"]`` says which).
    """

    config: dict
    aborted: bool
    abort_reason: str | None
    states_sent: list
    orders_used: list
    expended_order_bits: int
    raw_bits_babe: list
    raw_bits_adam: list
    final_key_adam: list
    final_key_babe: list
    trial_check_passed: bool
    corrected_blocks: int
    eve_report: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)


@lru_cache(maxsize=None)
def _ring_tables(M: int) -> dict:
    """Exact per-qubit probability tables for ring size ``M``.

    Derived from the density-operator algebra once and cached:

    * ``ov[d]`` - overlap tr(rho_l rho_{l+d}) between ring states d apart.
    * ``decrypt_p0[d]`` - probability that the decrypt measurement for an
      expected state ``l`` yields bit 0 when the returned qubit actually sits
      at ``l + d``; the bit-0 basis state is the expected state rotated
      +M/4 steps.
    * ``srm[d]`` - probability that the optimal ring detector reports an
      offset of d steps from the true state.
    """
    q = M // 4
    states = [circle_state(l, M) for l in range(M)]
    ov = np.array([overlap(states[0], states[d]) for d in range(M)])
    decrypt_p0 = np.array([overlap(states[d], states[q % M]) for d in range(M)])
    srm = square_root_measurement(uniform_circle_ensemble(M))
    # uniform ring: p(report offset d) is l-independent; evaluate at l = 0
    base = uniform_circle_ensemble(M).states[0]
    srm_pmf = np.array(
        [float(np.real(np.trace(srm.elements[(0 + d) % M] @ base.matrix))) for d in range(M)]
    )
    srm_pmf = np.clip(srm_pmf, 0.0, None)
    srm_pmf = srm_pmf / srm_pmf.sum()
    return {"ov": ov, "decrypt_p0": decrypt_p0, "srm": srm_pmf, "q": q}


def _abort(cfg: SessionConfig, sent: np.ndarray, reason: str) -> SessionTranscript:
    return SessionTranscript(
        config=_config_dict(cfg),
        aborted=True,
        abort_reason=reason,
        states_sent=[int(x) for x in sent],
        orders_used=[],
        expended_order_bits=0,
        raw_bits_babe=[],
        raw_bits_adam=[],
        final_key_adam=[],
        final_key_babe=[],
        trial_check_passed=False,
        corrected_blocks=0,
        eve_report=asdict(AttackReport(strategy=cfg.eve_strategy)),
    )


def _config_dict(cfg: SessionConfig) -> dict:
    d = asdict(cfg)
    d["channel"] = asdict(cfg.channel)
    return d


def run_ake_session(cfg: SessionConfig) -> SessionTranscript:
    """Run one full key-distribution session.

    Insufficient surviving qubits produce an aborted transcript, not an
    exception.  All randomness flows from ``cfg.rng_seed`` in a fixed draw
    order, so equal configs give byte-identical transcripts.
    """
    rng = np.random.default_rng(cfg.rng_seed)
    tables = _ring_tables(cfg.M)
    M, q = cfg.M, tables["q"]

    n_raw = 8 * cfg.k
    n_coded = len(coding.cecc_encode(np.zeros(n_raw, dtype=np.uint8), cfg.cecc))
    n_blocks = math.ceil(n_coded / BLOCK_SIZE)
    n_slots = BLOCK_SIZE * n_blocks
    n_pad = n_slots - n_coded
    n_sent = math.ceil(n_slots * (1.0 + cfg.send_margin))

    # step (i): Adam transmits random ring states
    sent = rng.integers(0, M, size=n_sent)

    # channel, one application per qubit round trip
    lost = rng.random(n_sent) < cfg.channel.loss_prob
    depolarized = rng.random(n_sent) < cfg.channel.depolarize_prob
    depolarized &= ~lost

    # opaque interception happens on the way out: Eve measures the optimal
    # ring detector and forwards her estimate
    eve_offsets = None
    if cfg.eve_strategy == "opaque":
        eve_offsets = rng.choice(M, size=n_sent, p=tables["srm"])
        carried = (sent + eve_offsets) % M
    else:
        carried = sent.copy()

    arrived = np.flatnonzero(~lost)
    if len(arrived) < n_slots:
        return _abort(
            cfg, sent, f"only {len(arrived)} of {n_slots} needed qubits survived the channel"
        )
    used = arrived[:n_slots]  # publicly acknowledged fill order

    # step (ii): the responder's data, coding, modulation, secret orders
    counterpart_raw = rng.integers(0, 2, size=n_raw, dtype=np.uint8)
    coded = coding.cecc_encode(counterpart_raw, cfg.cecc)
    pad = rng.integers(0, 2, size=n_pad, dtype=np.uint8)
    slot_bits = np.concatenate([coded, pad])

    src = carried[used]
    src_dep = depolarized[used]
    # bit 0 rotates +M/4 steps along the ring, bit 1 rotates -M/4
    returned = (src + q * (1 - 2 * slot_bits.astype(np.int64))) % M

    orders = rng.integers(0, 4, size=n_blocks)
    expended_order_bits = 2 * n_blocks

    if cfg.eve_strategy == "impersonate-order":
        guesses = rng.integers(0, 4, size=n_blocks)
        # Adam restores with the true order; Eve packed with her guess.  The
        # slot he reads at position s actually holds slot sigma[s] of the
        # block, and the four orders never agree at any position, so a wrong
        # guess misplaces every qubit of the block.
        sigma = np.empty(n_slots, dtype=np.int64)
        for b in range(n_blocks):
            s = slice(b * BLOCK_SIZE, (b + 1) * BLOCK_SIZE)
            sigma[s] = b * BLOCK_SIZE + ORDER_TABLE[guesses[b]][INVERSE_ORDER_TABLE[orders[b]]]
    else:
        sigma = np.arange(n_slots)

    # step (iii): Adam restores order and measures his quarter-turn basis
    expected = sent[used]
    actual = returned[sigma]
    actual_dep = src_dep[sigma]
    p0 = tables["decrypt_p0"][(actual - expected) % M]
    p0 = np.where(actual_dep, 0.5, p0)
    adam_coded = (rng.random(n_slots) >= p0).astype(np.uint8)
    adam_raw, corrected = coding.cecc_decode(adam_coded[:n_coded], cfg.cecc)

    # privacy amplification of the 8k sifted bits down to 4k
    out_len = 4 * cfg.k
    key_adam = coding.privacy_amplify(adam_raw, cfg.pa_hash_seed, out_len)
    key_counterpart = coding.privacy_amplify(counterpart_raw, cfg.pa_hash_seed, out_len)

    # step (iv): trial encryption of the fixed public plaintext
    t = min(len(TRIAL_PLAINTEXT), out_len)
    tag = key_counterpart[:t] ^ TRIAL_PLAINTEXT[:t]
    trial_ok = bool(np.array_equal(key_adam[:t] ^ tag, TRIAL_PLAINTEXT[:t]))

    if cfg.eve_strategy == "opaque":
        hits = eve_offsets[used] == 0
        pre_code_err = float(np.mean(adam_coded[:n_coded] != coded[:n_coded]))
        eve_report = asdict(
            AttackReport(strategy="opaque", per_qubit_success=float(np.mean(hits)))
        )
        eve_report.update(
            adam_coded_bit_error_rate=pre_code_err,
            intercepted_qubits=int(n_sent),
        )
    elif cfg.eve_strategy == "impersonate-order":
        right = guesses == orders
        wrong_slots = np.repeat(~right, BLOCK_SIZE)
        coded_slots_mask = np.arange(n_slots) < n_coded
        wrong_errs = int(
            np.sum((adam_coded != slot_bits) & wrong_slots & coded_slots_mask)
        )
        eve_report = asdict(
            AttackReport(
                strategy="impersonate-order",
                per_qubit_success=float(np.mean(adam_coded[:n_coded] == coded)),
                order_guess_distribution=tuple(
                    float(x) for x in impersonation_order_pmf(n_blocks)
                ),
            )
        )
        eve_report.update(
            blocks_guessed_right=int(np.sum(right)),
            blocks_total=int(n_blocks),
            wrong_block_qubits=int(np.sum(wrong_slots & coded_slots_mask)),
            wrong_block_errors=wrong_errs,
        )
    elif cfg.eve_strategy == "translucent":
        # non-disturbing tap, scored by the loose bound: order-guessed
        # blocks leak their bits outright, the rest leak at the capacity of
        # a binary channel with the two-copy success rate
        pa = opaque_bound(M)
        guessed = rng.random(n_blocks) < 0.25
        det_bits = int(np.sum(guessed) * BLOCK_SIZE)
        other = int(n_slots - det_bits)
        eve_report = asdict(
            AttackReport(
                strategy="translucent",
                per_qubit_success=pa,
                deterministic_bits=det_bits,
                shannon_bits=float(other * (1.0 - binary_entropy(pa))),
            )
        )
        eve_report.update(blocks_guessed_right=int(np.sum(guessed)))
    else:
        eve_report = asdict(AttackReport(strategy="none"))

    return SessionTranscript(
        config=_config_dict(cfg),
        aborted=False,
        abort_reason=None,
        states_sent=[int(x) for x in sent],
        orders_used=[int(x) for x in orders],
        expended_order_bits=int(expended_order_bits),
        raw_bits_babe=[int(x) for x in counterpart_raw],
        raw_bits_adam=[int(x) for x in adam_raw],
        final_key_adam=[int(x) for x in key_adam],
        final_key_babe=[int(x) for x in key_counterpart],
        trial_check_passed=trial_ok,
        corrected_blocks=int(corrected),
        eve_report=eve_report,
    )
