"""Provisional uncertainty and ignorance measures for credal sets.

Uncertainty is the Shannon entropy (bits) of the maximum-entropy member of
the model.  Ignorance is the gap ``upper(A) - lower(A)`` averaged over all
``2**N`` events ``A``.  Both choices are provisional stand-ins.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from . import credal
from .credal import ConditionedModel, Model
from .errors import CapExceededError
from .mce import MceConfig, entropy_bits, maxent

DEFAULT_EVENT_N = 4


@dataclass(frozen=True)
class MeasureReport:
    uncertainty_bits: float
    ignorance: float
    provisional: bool = True

    def to_json(self) -> dict:
        return asdict(self)


def uncertainty(M: Model, config: MceConfig | None = None, max_letters: int = 4) -> float:
    base = M.base if isinstance(M, credal.PartialModel) else credal.as_constraints(M, max_letters)
    return entropy_bits(maxent(base, config).result)


def event_gaps(M: Model, max_letters: int = DEFAULT_EVENT_N) -> list[Fraction]:
    """``upper(A) - lower(A)`` for every event ``A``, indexed by the event's bitmask.

    Uses ``upper(A) = 1 - lower(complement of A)``, which holds for any set of
    probability functions, so only lower envelopes are solved.
    """
    lang = M.lang
    if lang.n > max_letters:
        raise CapExceededError(f"event enumeration capped at {max_letters} letters")
    full = lang.full
    lows = [credal.lower(M, event) for event in range(full + 1)]
    return [1 - lows[full ^ event] - lows[event] for event in range(full + 1)]


def ignorance_exact(M: Model, max_letters: int = DEFAULT_EVENT_N) -> Fraction:
    gaps = event_gaps(M, max_letters)
    return sum(gaps, Fraction(0)) / len(gaps)


def ignorance(M: Model, max_letters: int = DEFAULT_EVENT_N) -> float:
    return float(ignorance_exact(M, max_letters))


def measure(M: Model, config: MceConfig | None = None, max_letters: int = DEFAULT_EVENT_N) -> MeasureReport:
    return MeasureReport(uncertainty(M, config, max_letters), ignorance(M, max_letters))


__all__ = [
    "MeasureReport",
    "uncertainty",
    "ignorance",
    "ignorance_exact",
    "event_gaps",
    "measure",
    "ConditionedModel",
]
