"""
Windowed fits of eigenvalue sequences against a power law C n^(-gamma).
"""

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from config import config


class RatioMode(str, Enum):
    RATIO = "ratio"  # n^gamma lambda_n / C
    RAW = "raw"  # n^gamma lambda_n, used when C = 0


@dataclass(frozen=True)
class WindowFit:
    n_lo: int
    n_hi: int
    count: int
    slope: Optional[float]  # log-log slope of lambda_n over the window
    mean_ratio: Optional[float]
    max_ratio: Optional[float]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "WindowFit":
        return cls(**data)


def scaled_sequence(values: Sequence[float], gamma: float, constant: float) -> tuple[np.ndarray, RatioMode]:
    """n^gamma lambda_n / C, or n^gamma lambda_n when C = 0"""
    values = np.asarray(values, dtype=float)
    n = np.arange(1, values.size + 1, dtype=float)
    scaled = n ** gamma * values
    if constant > 0:
        return scaled / constant, RatioMode.RATIO
    return scaled, RatioMode.RAW


def fit_window(values: Sequence[float], gamma: float, constant: float, window: tuple[int, int]) -> WindowFit:
    """Slope and mean of the scaled sequence over n in [n_lo, n_hi] (1-based, clipped to what is available)"""
    n_lo, n_hi = int(window[0]), int(window[1])
    values = np.asarray(values, dtype=float)
    seq, _ = scaled_sequence(values, gamma, constant)
    lo, hi = max(n_lo, 1), min(n_hi, values.size)
    if hi < lo:
        return WindowFit(n_lo, n_hi, 0, None, None, None)

    n = np.arange(lo, hi + 1, dtype=float)
    chunk = values[lo - 1: hi]
    part = seq[lo - 1: hi]
    slope = None
    if chunk.size >= 2 and np.all(chunk > 0):
        slope = float(np.polyfit(np.log(n), np.log(chunk), 1)[0])
    return WindowFit(n_lo, n_hi, int(chunk.size), slope, float(np.mean(part)), float(np.max(part)))


def dyadic_medians(seq: Sequence[float], blocks: tuple[int, int]) -> list[float]:
    """Medians of seq over n in [2^k, 2^(k+1)) for k in blocks[0]..blocks[1]-1; incomplete blocks are skipped"""
    seq = np.asarray(seq, dtype=float)
    medians = []
    for k in range(blocks[0], blocks[1]):
        lo, hi = 2 ** k, 2 ** (k + 1)
        if hi - 1 > seq.size:
            break
        medians.append(float(np.median(seq[lo - 1: hi - 1])))
    return medians


def strictly_decreasing(values: Sequence[float]) -> bool:
    return len(values) >= 2 and all(b < a for a, b in zip(values, values[1:]))


def relative_decay(
    difference: Sequence[float],
    target: Sequence[float],
    gamma: float,
    floor: float,
    blocks: tuple[int, int] = config.DECAY_BLOCKS,
    drop: float = config.DECAY_DROP,
) -> tuple[tuple[float, ...], bool]:
    """
    Dyadic medians of s_n(difference) / s_n(target), kept while the target's
    own n^gamma s_n median stays at or above floor.

    Passes when at least two blocks are kept, the medians strictly decrease
    and the last is at most drop times the first. A difference with the
    target's own decay rate keeps the ratio flat and fails.
    """
    difference = np.asarray(difference, dtype=float)
    target = np.asarray(target, dtype=float)
    count = min(difference.size, target.size)
    resolved = 0
    for median in dyadic_medians(scaled_sequence(target[:count], gamma, 0.0)[0], blocks):
        if median < floor:
            break
        resolved += 1
    medians = tuple(dyadic_medians(difference[:count] / target[:count], blocks)[:resolved])
    passed = strictly_decreasing(medians) and medians[-1] <= drop * medians[0]
    return medians, passed
