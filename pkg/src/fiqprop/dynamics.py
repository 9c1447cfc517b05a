"""Digit-shift chaotic maps acting on FIQ states.

The doubling map ``x -> 2x mod 1`` is a left shift of the binary expansion.
It is applied exactly to the digit list: indeterminate low-significance
digits move up one place per step until they dominate the value.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .fiq import DEFAULT_MAX_LENGTH, Fiq, ResourceLimitError, format_fiq
from .measurement import (ActualizationEvent, NoMechanism, apply_mechanism,
                          measure)
from .rng import ExactSampler, split_seed


@dataclass(frozen=True)
class ShiftBy:
    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("shift must be >= 1")

    def describe(self):
        return "doubling" if self.k == 1 else f"shift:{self.k}"


DoublingMap = ShiftBy(1)


def parse_map(text: str) -> ShiftBy:
    s = text.strip()
    if s == "doubling":
        return DoublingMap
    kind, _, k = s.partition(":")
    if kind == "shift":
        try:
            return ShiftBy(int(k))
        except ValueError:
            pass
    raise ValueError(f"map: expected 'doubling' or 'shift:<k>' with k >= 1, got {text!r}")


def step_map(x: Fiq, map_kind: ShiftBy = DoublingMap):
    """Shift ``x`` left by ``map_kind.k`` digits; returns ``(x', discarded)``."""
    k = map_kind.k
    discarded = [x.digit(j) for j in range(1, k + 1)]
    return Fiq._trusted(x.digits[k:]), discarded


@dataclass(frozen=True)
class TrajectoryRecord:
    step: int
    state: Fiq
    discarded_bits: tuple = ()
    events: tuple = ()

    def to_line(self) -> str:
        disc = ",".join(f"{q.numerator}/{q.denominator}" for q in self.discarded_bits) or "-"
        ev = ",".join(f"{e.digit_index}:{e.resulting_bit}:{e.mechanism_tag}"
                      for e in self.events) or "-"
        return f"{self.step}\t{format_fiq(self.state)}\t{disc}\t{ev}"


@dataclass
class Trajectory:
    records: list = field(default_factory=list)

    @property
    def final(self) -> Fiq:
        return self.records[-1].state

    @property
    def events(self):
        return [e for r in self.records for e in r.events]

    def lines(self):
        return [r.to_line() for r in self.records]


def run_trajectory(x0: Fiq, map_kind: ShiftBy = DoublingMap, steps: int = 0,
                   mechanism=None, rng_seed: int = 0,
                   max_length: int = DEFAULT_MAX_LENGTH) -> Trajectory:
    """Alternate one map step and one mechanism tick, ``steps`` times."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if len(x0) > max_length:
        raise ResourceLimitError(f"initial state has {len(x0)} explicit digits > {max_length}")
    mechanism = mechanism or NoMechanism()
    rng = ExactSampler(rng_seed)
    x = x0
    traj = Trajectory([TrajectoryRecord(0, x)])
    for t in range(1, steps + 1):
        x, discarded = step_map(x, map_kind)
        x, events = apply_mechanism(x, mechanism, rng, t, max_length)
        traj.records.append(TrajectoryRecord(t, x, tuple(discarded), tuple(events)))
    return traj


def ensemble_spread(x0: Fiq, map_kind: ShiftBy = DoublingMap, steps: int = 0,
                    trials: int = 1, rng_seed: int = 0, precision: int = 1,
                    max_length: int = DEFAULT_MAX_LENGTH) -> Counter:
    """Histogram of the leading ``precision`` bits after ``steps`` map steps.

    Each trial evolves ``x0`` without actualization and then measures the
    final state. Trial ``i`` samples with seed ``split_seed(rng_seed, i)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    final = run_trajectory(x0, map_kind, steps, None, rng_seed, max_length).final
    hist = Counter()
    for i in range(trials):
        out = measure(final, precision, ExactSampler(split_seed(rng_seed, i)), max_length)
        hist[out.bits] += 1
    return hist


def leading_digit_after(x0: Fiq, map_kind: ShiftBy, steps: int):
    """Propensity that sits in position 1 after ``steps`` shifts."""
    return x0.digit(1 + steps * map_kind.k)


__all__ = ["ActualizationEvent", "DoublingMap", "ShiftBy", "Trajectory",
           "TrajectoryRecord", "ensemble_spread", "parse_map", "run_trajectory",
           "step_map", "leading_digit_after"]
