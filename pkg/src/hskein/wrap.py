"""Wrapping classes (multisets of conjugacy classes) and free skein vectors over them."""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

from .groups import ConjClass, GroupModel, GroupParseError
from .ring import LaurentPoly, RPoly, UPoly


@functools.total_ordering
class WrapClass:
    """Unordered sequence of conjugacy classes, stored sorted (trivial classes first)."""

    __slots__ = ("classes", "model", "_hash")

    def __init__(self, classes: Iterable[ConjClass] = (), model: GroupModel | None = None):
        cls = tuple(sorted(classes))
        models = {c.model for c in cls}
        if model is not None:
            models.add(model)
        if len(models) > 1:
            raise ValueError("classes from different group models")
        self.classes = cls
        self.model = model if model is not None else (cls[0].model if cls else None)
        self._hash = hash(cls)

    @classmethod
    def of(cls, model: GroupModel, *elems) -> "WrapClass":
        return cls([model.conj_class(model.parse(e) if isinstance(e, str) else e) for e in elems], model)

    @classmethod
    def parse(cls, model: GroupModel, text: str) -> "WrapClass":
        return parse_wrap(model, text)

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __eq__(self, other):
        return isinstance(other, WrapClass) and self.classes == other.classes

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (len(self.classes), self.classes)

    def __lt__(self, other):
        if not isinstance(other, WrapClass):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    @property
    def is_trivial(self) -> bool:
        """True for members of the set of all-trivial classes (including the empty class)."""
        return all(c.is_trivial for c in self.classes)

    @property
    def trivial_count(self) -> int:
        return sum(1 for c in self.classes if c.is_trivial)

    def nontrivial_part(self) -> "WrapClass":
        return WrapClass([c for c in self.classes if not c.is_trivial], self.model)

    def remove(self, *cs: ConjClass) -> "WrapClass":
        rest = list(self.classes)
        for c in cs:
            try:
                rest.remove(c)
            except ValueError:
                raise KeyError(f"{c} does not occur in {self}") from None
        return WrapClass(rest, self.model)

    def add(self, *cs: ConjClass) -> "WrapClass":
        return WrapClass(self.classes + cs, self.model)

    def __contains__(self, c):
        return c in self.classes

    def __str__(self):
        return "<" + ", ".join(str(c) for c in self.classes) + ">"

    def __repr__(self):
        return f"WrapClass({self})"


def _split_top(text: str, start: int) -> list[tuple[str, int]]:
    parts, depth, cur_start = [], 0, start
    for i in range(start, len(text)):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((text[cur_start:i], cur_start))
            cur_start = i + 1
    parts.append((text[cur_start:], cur_start))
    return parts


def parse_wrap(model: GroupModel, text: str) -> WrapClass:
    s = text.strip()
    if not (s.startswith("<") and s.endswith(">")):
        raise GroupParseError(text, 0, "wrapping class must be written <...>")
    offset = text.index("<") + 1
    inner = text[offset: text.rindex(">")]
    if not inner.strip():
        return WrapClass((), model)
    classes = []
    for piece, at in _split_top(inner, 0):
        if not piece.strip():
            raise GroupParseError(text, offset + at, "empty entry")
        try:
            classes.append(model.conj_class(model.parse(piece)))
        except GroupParseError as e:
            raise GroupParseError(text, offset + at + e.pos, str(e).split(" at column")[0]) from None
    return WrapClass(classes, model)


# -- combinatorics -----------------------------------------------------------

def _conjugators(model: GroupModel, conj_bound: int):
    if model.is_abelian:
        return [model.identity()]
    return model.ball(conj_bound)


def descendants(alpha: WrapClass, model: GroupModel, conj_bound: int = 1) -> set[WrapClass]:
    """First-order descendants: merge one pair of entries through each conjugator."""
    out: set[WrapClass] = set()
    if len(alpha) < 2:
        return out
    seen_pairs = set()
    cls = alpha.classes
    gs = _conjugators(model, conj_bound)
    for i in range(len(cls)):
        for j in range(i + 1, len(cls)):
            pair = (cls[i], cls[j])
            if pair in seen_pairs:
                continue
            seen_pairs.add(pair)
            rest = alpha.remove(cls[i], cls[j])
            for g in gs:
                merged = model.merge_classes(cls[i].rep, g, cls[j].rep)
                out.add(rest.add(merged))
    return out


@dataclass(frozen=True)
class SkeinClosedSet:
    members: frozenset
    closure_bound: int
    model: GroupModel = field(repr=False)

    def __contains__(self, alpha):
        return alpha in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def is_closed(self) -> bool:
        return all(descendants(a, self.model, self.closure_bound) <= self.members for a in self.members)


def skein_closure(C: Iterable[WrapClass], model: GroupModel, conj_bound: int = 1) -> SkeinClosedSet:
    members = set(C)
    queue = deque(members)
    while queue:
        alpha = queue.popleft()
        for d in descendants(alpha, model, conj_bound):
            if d not in members:
                members.add(d)
                queue.append(d)
    return SkeinClosedSet(frozenset(members), conj_bound, model)


def u_act(alpha: WrapClass, i: int = 1, model: GroupModel | None = None) -> WrapClass:
    if i < 0:
        raise ValueError("u acts with non-negative powers only")
    model = model or alpha.model
    if i == 0:
        return alpha
    if model is None:
        raise ValueError("cannot adjoin trivial classes without a group model")
    return alpha.add(*([model.trivial_class()] * i))


class StarClosure:
    """The set of classes obtained by adjoining any number of trivial classes to members of C."""

    def __init__(self, C: Iterable[WrapClass]):
        self.cores = frozenset(C)

    def __contains__(self, beta: WrapClass) -> bool:
        k = beta.trivial_count
        cls = list(beta.classes)
        for i in range(k + 1):
            # strip i trivial classes (they sort first)
            if WrapClass(cls[i:], beta.model) in self.cores:
                return True
        return False


def star_closure(C: Iterable[WrapClass]) -> StarClosure:
    return StarClosure(C)


def homology_class(alpha: WrapClass, model: GroupModel | None = None) -> tuple[int, ...]:
    model = model or alpha.model
    if model is None:
        return ()
    out = [0] * model.rank if model.kind == "free" else [0] * model.h1_rank
    for c in alpha.classes:
        for i, v in enumerate(model.abelianize(c.rep)):
            out[i] += v
    return tuple(out)


# -- skein vectors -------------------------------------------------------------

def _key_order(k):
    if isinstance(k, WrapClass):
        return (0, k.sort_key())
    return (1, str(k))


def _coerce_coeff(c):
    if isinstance(c, UPoly):
        return c
    return RPoly(c)


class SkeinVector:
    """Finitely supported map from generators (WrapClass or symbols) to coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Hashable, object] | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            c = _coerce_coeff(c)
            acc[k] = acc[k] + c if k in acc else c
        self._terms = {k: c for k, c in acc.items() if c}

    @classmethod
    def basis(cls, key, coeff=1) -> "SkeinVector":
        return cls({key: coeff})

    @classmethod
    def zero(cls) -> "SkeinVector":
        return cls()

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _key_order(kv[0]))

    def keys(self):
        return [k for k, _ in self.items()]

    def support(self) -> set:
        return set(self._terms)

    def __getitem__(self, key):
        return self._terms.get(key, RPoly())

    def __contains__(self, key):
        return key in self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other):
        if not isinstance(other, SkeinVector):
            return NotImplemented
        return SkeinVector(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self):
        return SkeinVector({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SkeinVector):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "SkeinVector":
        if isinstance(c, (RPoly, UPoly)):
            return SkeinVector({k: c * v for k, v in self._terms.items()})
        c = RPoly(c)
        return SkeinVector({k: c * v for k, v in self._terms.items()})

    def __mul__(self, c):
        if isinstance(c, SkeinVector):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, SkeinVector):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def map_coeffs(self, f: Callable) -> "SkeinVector":
        return SkeinVector({k: f(c) for k, c in self._terms.items()})

    def map_keys(self, f: Callable) -> "SkeinVector":
        return SkeinVector([(f(k), c) for k, c in self._terms.items()])

    def substitute(self, table: Mapping) -> "SkeinVector":
        """Replace basis keys by vectors from ``table``; other keys stay."""
        out = SkeinVector()
        for k, c in self._terms.items():
            out = out + (table[k].scale(c) if k in table else SkeinVector({k: c}))
        return out

    def unit_ratio(self, other: "SkeinVector"):
        """(sign, k) with self == sign * q^k * other, or None."""
        if self.support() != other.support():
            return None
        if not self._terms:
            return (1, 0)
        key = self.keys()[0]
        a, b = self._terms[key], other._terms[key]
        (ka, la), (kb, lb) = next(iter(a.items())), next(iter(b.items()))
        if ka != kb or not isinstance(la, LaurentPoly):
            return None
        k = la.max_exp - lb.max_exp
        sign = 1 if la.terms[la.max_exp] * lb.terms[lb.max_exp] > 0 else -1
        if self == other.scale(RPoly(LaurentPoly({k: sign}))):
            return (sign, k)
        return None

    def equal_up_to_unit(self, other: "SkeinVector") -> bool:
        return self.unit_ratio(other) is not None

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for k, c in self.items():
            label = str(k)
            text = str(c)
            neg = text.startswith("-") and _is_atomic(text)
            if neg:
                text = text[1:]
            if text == "1":
                term = label
            elif _is_atomic(text):
                term = f"{text}*{label}"
            else:
                term = f"({text})*{label}"
            if not out:
                out = ("-" if neg else "") + term
            else:
                out += (" - " if neg else " + ") + term
        return out

    def __repr__(self):
        return f"SkeinVector({self})"


def _is_atomic(text: str) -> bool:
    # a single product of factors with no top-level sum
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and text[i - 1] not in "^(":
            return False
    return True


# -- R-hat lowering ----------------------------------------------------------

def to_hat(v: SkeinVector) -> SkeinVector:
    """Rewrite <1^i, beta> as u^i * beta, with coefficients in the u-graded ring."""
    out = []
    for k, c in v.items():
        if isinstance(k, WrapClass):
            i = k.trivial_count
            out.append((k.nontrivial_part(), UPoly({i: c}) if not isinstance(c, UPoly) else c * UPoly.u() ** i))
        else:
            out.append((k, c if isinstance(c, UPoly) else UPoly(c)))
    return SkeinVector(out)


def from_hat(v: SkeinVector, model: GroupModel) -> SkeinVector:
    """Inverse of :func:`to_hat`: u^i * beta becomes <1^i, beta>."""
    out = []
    for k, c in v.items():
        up = c if isinstance(c, UPoly) else UPoly(c)
        for i in range(up.degree + 1):
            ci = up.coeff(i)
            if ci:
                out.append((u_act(k, i, model) if isinstance(k, WrapClass) else k, ci))
    return SkeinVector(out)


def specialize_vector(v: SkeinVector, q_to=1, z_to=0) -> dict:
    """Coefficient-wise specialization; drops zero values."""
    from .ring import specialize

    out = {}
    for k, c in v.items():
        if isinstance(c, UPoly):
            c = c.to_rpoly()
        val = specialize(c, q_to, z_to)
        if val:
            out[k] = val
    return out
