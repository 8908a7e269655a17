"""Photon loss during fusion attempts, tracked at the chain-topology level.

A Type I fusion routes the two edge photons so that success shows exactly one
detector click and failure shows zero or two. Loss and detector inefficiency
make the observed click count lie about what happened:

* partner photon missing, no click: looks like a failure and is one in effect;
* partner photon missing, the remaining photon clicks: looks like a success
  but the chains are still separate;
* both photons present, one goes undetected: a success looks like a failure
  (the chains are silently merged), or a two-photon failure looks like a
  success.

Loss itself is an input; only the fusion branch and detector clicks are drawn.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np


class Lost(str, Enum):
    NONE = "none"
    EDGE_A = "edge_a"
    EDGE_B = "edge_b"


class Perceived(str, Enum):
    SUCCESS = "success"
    FAILURE = "failure"


class Actual(str, Enum):
    CONNECTED = "connected"
    SEPARATE = "separate"  # genuinely separate, as a failure would leave them
    DISCONNECTED = "disconnected"  # reported as joined, actually separate
    SILENTLY_MERGED = "silently_merged"  # reported as failed, actually joined


@dataclass(frozen=True)
class LossScenario:
    m: int
    n: int
    lost: Lost = Lost.NONE
    detector_efficiency: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "lost", Lost(self.lost))
        if self.m < 1 or self.n < 1:
            raise ValueError(f"chain lengths must be >= 1 (got {self.m}, {self.n})")
        if not 0.0 <= self.detector_efficiency <= 1.0:
            raise ValueError("detector efficiency must be in [0, 1]")


@dataclass(frozen=True)
class LossEventOutcome:
    perceived: Perceived
    actual: Actual
    presumed_lengths: tuple[int, ...]
    resulting_lengths: tuple[int, ...]
    doubled_node: int | None = None
    lost_positions: tuple[int, ...] = ()


def _draws(rng_draws, k: int) -> list[float]:
    if isinstance(rng_draws, np.random.Generator):
        return [float(x) for x in rng_draws.random(k)]
    draws = list(rng_draws)
    if len(draws) < k:
        raise ValueError(f"need {k} uniform draws, got {len(draws)}")
    return draws[:k]


def classify_fusion_with_loss(
    s: LossScenario, rng_draws: Sequence[float] | np.random.Generator
) -> LossEventOutcome:
    """Classify one fusion attempt given three uniform draws in [0, 1).

    Draw 0 picks the optical branch (below 1/2: one photon reaches a
    detector), draws 1 and 2 decide whether each arriving photon clicks.
    """
    u, d1, d2 = _draws(rng_draws, 3)
    eff = s.detector_efficiency
    m, n = s.m, s.n
    joined = (m + n - 1,)
    split = (m - 1, n - 1)

    if s.lost is not Lost.NONE:
        # the surviving photon reaches a detector half the time
        clicked = u < 0.5 and d1 < eff
        if clicked:
            return LossEventOutcome(Perceived.SUCCESS, Actual.DISCONNECTED, joined, split)
        return LossEventOutcome(Perceived.FAILURE, Actual.SEPARATE, split, split)

    if u < 0.5:
        # genuine success: exactly one photon at the detector
        if d1 < eff:
            return LossEventOutcome(Perceived.SUCCESS, Actual.CONNECTED, joined, joined)
        return LossEventOutcome(Perceived.FAILURE, Actual.SILENTLY_MERGED, split, joined)

    # genuine failure: both photons at the detectors
    clicks = int(d1 < eff) + int(d2 < eff)
    if clicks == 1:
        return LossEventOutcome(Perceived.SUCCESS, Actual.DISCONNECTED, joined, split)
    return LossEventOutcome(Perceived.FAILURE, Actual.SEPARATE, split, split)


def perceived_failure_probability(s: LossScenario) -> float:
    """Probability an attempt is reported as failed."""
    eff = s.detector_efficiency
    if s.lost is not Lost.NONE:
        return 1.0 - eff / 2
    one_click_on_failure = 2 * eff * (1 - eff)
    return 0.5 * (1 - eff) + 0.5 * (1 - one_click_on_failure)


def retry_after_false_failure(m: int, n: int, second_success: bool) -> LossEventOutcome:
    """Retry a fusion that silently succeeded but was reported as failed.

    The actual chain has length ``m + n - 1`` with the hidden fused photon at
    position ``m``. The retry uses the photons at positions ``m - 1`` and
    ``m + 1``. Success leaves a chain of length ``m + n - 3`` whose position
    ``m - 1`` holds two mutually attached photons. Failure loses both retry
    photons and the hidden one.
    """
    if m < 2 or n < 2:
        raise ValueError(f"retry needs m, n >= 2 (got {m}, {n})")
    if second_success:
        length = (m - 2) + 1 + (n - 2)
        return LossEventOutcome(
            Perceived.SUCCESS, Actual.CONNECTED, (length,), (length,), doubled_node=m - 1
        )
    presumed = (m - 2, n - 2)
    return LossEventOutcome(
        Perceived.FAILURE,
        Actual.SEPARATE,
        presumed,
        presumed,
        lost_positions=(m - 1, m, m + 1),
    )
