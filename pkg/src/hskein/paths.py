"""Skein expansion of paths of links through crossing changes.

A path is recorded by its endpoints and the ordered list of mixed crossing
changes it passes through.  Each change carries its sign and the (wrapping
class of the) link obtained by smoothing the double point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Hashable, Iterable

from .groups import GroupModel, GroupParseError
from .ring import LaurentPoly, RPoly
from .wrap import SkeinVector, WrapClass, parse_wrap


class PathEndpointError(ValueError):
    pass


@dataclass(frozen=True)
class CrossingEvent:
    sign: int
    smoothed: Hashable

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"crossing sign must be +1 or -1, got {self.sign!r}")
        if isinstance(self.smoothed, WrapClass) and len(self.smoothed) < 1:
            raise ValueError("a smoothing has at least one component")


@dataclass(frozen=True)
class PathWord:
    start: Hashable
    end: Hashable
    events: tuple[CrossingEvent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def __len__(self):
        return len(self.events)

    @property
    def is_loop(self) -> bool:
        return self.start == self.end


def loop(state, events: Iterable[CrossingEvent] = ()) -> PathWord:
    return PathWord(state, state, tuple(events))


def q_power(k: int) -> RPoly:
    return RPoly(LaurentPoly({k: 1}))


def index(gamma: PathWord) -> int:
    return sum(e.sign for e in gamma.events)


def s_eval(gamma: PathWord) -> SkeinVector:
    terms = []
    before = 0
    for e in gamma.events:
        terms.append((e.smoothed, RPoly(LaurentPoly({2 * before + e.sign: e.sign}))))
        before += e.sign
    return SkeinVector(terms)


def compose(g1: PathWord, g2: PathWord) -> PathWord:
    if g1.end != g2.start:
        raise PathEndpointError(f"cannot compose: path ends at {g1.end} but next starts at {g2.start}")
    return PathWord(g1.start, g2.end, g1.events + g2.events)


def invert(gamma: PathWord) -> PathWord:
    return PathWord(gamma.end, gamma.start, tuple(CrossingEvent(-e.sign, e.smoothed) for e in reversed(gamma.events)))


def s_f(gamma: PathWord) -> SkeinVector:
    return SkeinVector.basis(gamma.end, q_power(2 * index(gamma))) + s_eval(gamma).scale(RPoly.z())


def s_if(gamma: PathWord) -> SkeinVector:
    return s_f(gamma) - SkeinVector.basis(gamma.start)


# -- the local computation at two simultaneous double points -----------------
#
# Labels K<x><y>: x, y describe the first and second double point as
# + / - (crossing), 0 (smoothed) or o (sign forgotten up to link homotopy).

def delta_loop_path() -> PathWord:
    """K+- -> K-- -> K-+ -> K++ -> K+- around the two double points."""
    return PathWord(
        "K+-",
        "K+-",
        (
            CrossingEvent(+1, "K0-"),
            CrossingEvent(-1, "K-0"),
            CrossingEvent(-1, "K0+"),
            CrossingEvent(+1, "K+0"),
        ),
    )


def delta_loop_raw() -> SkeinVector:
    return s_eval(delta_loop_path())


def delta_loop(paired: bool) -> SkeinVector:
    raw = delta_loop_raw()
    if paired:
        # both double points involve the same pair of components; after
        # smoothing one, the other is a self-crossing and its sign is invisible
        return raw.substitute({
            "K0+": SkeinVector.basis("K0o"),
            "K0-": SkeinVector.basis("K0o"),
            "K+0": SkeinVector.basis("Ko0"),
            "K-0": SkeinVector.basis("Ko0"),
        })
    zq = RPoly.z() * RPoly.q()
    return raw.substitute({
        "K0+": SkeinVector({"K0-": q_power(2), "K00": zq}),
        "K+0": SkeinVector({"K-0": q_power(2), "K00": zq}),
    })


# -- path literals -------------------------------------------------------------

_EVENT = re.compile(r"\(\s*([+-]?\d+)\s*:\s*(<[^<>]*>|[^()\s:]+)\s*\)")


def _label(text: str, model: GroupModel | None):
    text = text.strip()
    if model is not None and text.startswith("<"):
        return parse_wrap(model, text)
    return text


def parse_path(text: str, model: GroupModel | None = None) -> PathWord:
    """Parse ``start=<...>; events=(+1:<...>)(-1:<...>); end=<...>``.

    Missing endpoints default to the symbols K_start and K_end.  Without a
    group model, ``<...>`` labels stay opaque strings.
    """
    fields = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        if "=" not in part:
            raise GroupParseError(text, text.find(part), "expected key=value")
        key, value = part.split("=", 1)
        key = key.strip()
        if key not in ("start", "end", "events") or key in fields:
            raise GroupParseError(text, text.find(part), f"unexpected field {key!r}")
        fields[key] = value
    events = []
    raw = fields.get("events", "")
    pos = 0
    offset = text.find(raw) if raw else 0
    while raw[pos:].strip():
        m = _EVENT.match(raw, pos + (len(raw[pos:]) - len(raw[pos:].lstrip())))
        if not m:
            raise GroupParseError(text, offset + pos, "expected event (sign:<smoothing>)")
        sign = int(m.group(1))
        if sign not in (1, -1):
            raise GroupParseError(text, offset + m.start(1), "sign must be +1 or -1")
        events.append(CrossingEvent(sign, _label(m.group(2), model)))
        pos = m.end()
    start = _label(fields["start"], model) if "start" in fields else "K_start"
    end = _label(fields["end"], model) if "end" in fields else "K_end"
    return PathWord(start, end, tuple(events))


def format_path(gamma: PathWord) -> str:
    ev = "".join(f"({e.sign:+d}:{e.smoothed})" for e in gamma.events)
    return f"start={gamma.start}; events={ev}; end={gamma.end}"
