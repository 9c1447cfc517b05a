"""Actualization mechanisms: measurement-induced and spontaneous collapse of digits."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .fiq import (DEFAULT_MAX_LENGTH, Fiq, Propensity, ResourceLimitError,
                  actualize_digit)
from .rng import ExactSampler


class MechanismParseError(ValueError):
    """Malformed mechanism descriptor; ``field`` names the offending part."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class NoMechanism:
    def describe(self):
        return "none"


@dataclass(frozen=True)
class MeasurementInduced:
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("measurement precision must be >= 1")

    def describe(self):
        return f"measure:m={self.precision}"


@dataclass(frozen=True)
class Spontaneous:
    rate: Fraction
    window: int

    def __post_init__(self):
        object.__setattr__(self, "rate", Propensity(self.rate))
        if self.window < 1:
            raise ValueError("spontaneous window must be >= 1")

    def describe(self):
        return f"spont:lambda={self.rate.numerator}/{self.rate.denominator},w={self.window}"


ActualizationMechanism = NoMechanism | MeasurementInduced | Spontaneous


@dataclass(frozen=True)
class ActualizationEvent:
    step: int
    digit_index: int
    resulting_bit: int
    mechanism_tag: str


@dataclass(frozen=True)
class MeasurementOutcome:
    bits: str
    collapsed_state: Fiq
    consumed_randomness: int
    actualized: tuple = field(default=())  # indices that were indeterminate before measuring


def measure(x: Fiq, m: int, rng: ExactSampler,
            max_length: int = DEFAULT_MAX_LENGTH) -> MeasurementOutcome:
    """Actualize digits 1..m in ascending order and read them out."""
    if m < 1:
        raise ValueError("measurement precision must be >= 1")
    if m > max_length:
        raise ResourceLimitError(f"precision {m} exceeds max explicit length {max_length}")
    start = rng.draws
    bits, actualized = [], []
    for j in range(1, m + 1):
        if not x.digit(j).is_determined():
            actualized.append(j)
        x, bit = actualize_digit(x, j, rng, max_length)
        bits.append(str(bit))
    return MeasurementOutcome("".join(bits), x, rng.draws - start, tuple(actualized))


def spontaneous_hook(x: Fiq, rate, window: int, rng: ExactSampler, step: int = 0,
                     max_length: int = DEFAULT_MAX_LENGTH):
    """One spontaneous-collapse tick.

    Each indeterminate digit with index <= ``window`` (implicit 1/2 tail
    included) independently actualizes with probability ``rate``.
    Returns the new state and the list of events.
    """
    rate = Propensity(rate)
    if window > max_length:
        raise ResourceLimitError(f"window {window} exceeds max explicit length {max_length}")
    events = []
    if rate == 0:
        return x, events
    for j in range(1, window + 1):
        if x.digit(j).is_determined():
            continue
        if rng.bernoulli(rate):
            x, bit = actualize_digit(x, j, rng, max_length)
            events.append(ActualizationEvent(step, j, bit, "spontaneous"))
    return x, events


def apply_mechanism(x: Fiq, mechanism, rng: ExactSampler, step: int,
                    max_length: int = DEFAULT_MAX_LENGTH):
    """Run ``mechanism`` once; returns ``(x', events)``."""
    if isinstance(mechanism, NoMechanism) or mechanism is None:
        return x, []
    if isinstance(mechanism, MeasurementInduced):
        out = measure(x, mechanism.precision, rng, max_length)
        y = out.collapsed_state
        events = [ActualizationEvent(step, j, int(y.digit(j)), "measurement")
                  for j in out.actualized]
        return y, events
    if isinstance(mechanism, Spontaneous):
        return spontaneous_hook(x, mechanism.rate, mechanism.window, rng, step, max_length)
    raise TypeError(f"unknown mechanism {mechanism!r}")


def parse_mechanism(text: str):
    """Parse ``none``, ``measure:m=<int>`` or ``spont:lambda=<a/b>,w=<int>``."""
    s = text.strip()
    kind, _, rest = s.partition(":")
    if kind == "none":
        if rest:
            raise MechanismParseError("none", "takes no parameters")
        return NoMechanism()
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise MechanismParseError(key.strip() or kind, f"expected key=value, got {item!r}")
        params[key.strip()] = value.strip()
    if kind == "measure":
        expected = {"m"}
    elif kind == "spont":
        expected = {"lambda", "w"}
    else:
        raise MechanismParseError("kind", f"unknown mechanism {kind!r}")
    for key in params.keys() - expected:
        raise MechanismParseError(key, "unknown parameter")
    for key in sorted(expected - params.keys()):
        raise MechanismParseError(key, "missing parameter")
    if kind == "measure":
        m = _parse_int(params["m"], "m")
        if m < 1:
            raise MechanismParseError("m", "must be >= 1")
        return MeasurementInduced(m)
    try:
        rate = Propensity(params["lambda"])
    except (ValueError, ZeroDivisionError) as exc:
        raise MechanismParseError("lambda", str(exc)) from None
    w = _parse_int(params["w"], "w")
    if w < 1:
        raise MechanismParseError("w", "must be >= 1")
    return Spontaneous(rate, w)


def _parse_int(value, name):
    try:
        return int(value)
    except ValueError:
        raise MechanismParseError(name, f"not an integer: {value!r}") from None
