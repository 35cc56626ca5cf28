"""Normalised power radiation patterns with a separately stored gain."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ISOTROPIC = "isotropic"
COSINE_EXPONENT = "cosine_exponent"


class InvalidBeamwidthError(ValueError):
    pass


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    if value == 0.0:
        return -math.inf
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class PatternModel:
    """Pattern shape ``F(theta, phi)`` plus a linear gain.

    ``F`` is normalised to 1 at boresight and is zero behind the aperture
    (``theta > pi/2``). The gain is not derived from ``F``; both are inputs.
    """

    kind: str = ISOTROPIC
    exponent_q: float = 0.0
    gain: float = 1.0

    def __post_init__(self):
        if self.kind not in (ISOTROPIC, COSINE_EXPONENT):
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.exponent_q < 0:
            raise ValueError("exponent_q must be >= 0")
        if self.gain < 1.0:
            raise ValueError("gain must be >= 1 (linear)")

    @classmethod
    def cosine(cls, hpbw: float, gain: float = 1.0) -> "PatternModel":
        """Cosine-power pattern whose half-power beamwidth is ``hpbw`` radians."""
        return cls(COSINE_EXPONENT, q_from_hpbw(hpbw), gain)

    def __call__(self, theta, phi=0.0):
        return evaluate(self, theta, phi)


def evaluate(model: PatternModel, theta, phi=0.0):
    """``F(theta, phi)`` in ``[0, 1]``; azimuth-symmetric, so ``phi`` is unused.

    Accepts scalars or arrays of ``theta``.
    """
    theta = np.asarray(theta, dtype=float)
    front = theta <= np.pi / 2
    if model.kind == ISOTROPIC:
        out = np.where(front, 1.0, 0.0)
    else:
        c = np.clip(np.cos(np.where(front, theta, 0.0)), 0.0, 1.0)
        out = np.where(front, c**model.exponent_q, 0.0)
    return float(out) if out.ndim == 0 else out


def q_from_hpbw(hpbw: float) -> float:
    """Exponent ``q`` with ``cos(hpbw / 2) ** q == 0.5``."""
    if not 0.0 < hpbw < math.pi:
        raise InvalidBeamwidthError(f"half-power beamwidth must lie in (0, pi), got {hpbw}")
    return math.log(0.5) / math.log(math.cos(hpbw / 2.0))
