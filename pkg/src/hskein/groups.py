"""Group models with a solvable conjugacy problem.

Elements are plain tuples interpreted by their :class:`GroupModel`:

* abelian / cyclic: integer vector, free coordinates first, then torsion
  residues normalized into ``[0, k)``;
* free: reduced word as a tuple of nonzero letters, ``i+1`` for the i-th
  generator and ``-(i+1)`` for its inverse.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Elem = tuple

ABELIAN = "abelian"
FREE = "free"
CYCLIC = "cyclic"


class GroupParseError(ValueError):
    def __init__(self, text, pos, msg):
        super().__init__(f"{msg} at column {pos + 1} in {text!r}")
        self.text = text
        self.pos = pos


class UnsupportedModel(Exception):
    """Raised when an operation needs structure the group model does not have."""


@dataclass(frozen=True)
class GroupModel:
    kind: str
    rank: int = 0
    torsion: tuple[int, ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in (ABELIAN, FREE, CYCLIC):
            raise ValueError(f"unsupported group kind {self.kind!r}")
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        if any(k < 2 for k in self.torsion):
            raise ValueError("torsion orders must be >= 2")
        if self.kind == FREE and self.torsion:
            raise ValueError("free groups have no torsion")
        if self.kind == CYCLIC and (self.rank or len(self.torsion) != 1):
            raise ValueError("finite cyclic model needs exactly one torsion order")
        if len(self.names) != self.ngens:
            raise ValueError(f"expected {self.ngens} generator names, got {len(self.names)}")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        for n in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", n):
                raise ValueError(f"bad generator name {n!r}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def free_abelian(cls, rank: int, torsion: Sequence[int] = (), names=None) -> "GroupModel":
        if names is None:
            names = [f"b{i + 1}" for i in range(rank)]
            if len(torsion) == 1:
                names.append("t")
            else:
                names += [f"t{i + 1}" for i in range(len(torsion))]
        return cls(ABELIAN, rank, tuple(torsion), tuple(names))

    @classmethod
    def free(cls, rank: int, names=None) -> "GroupModel":
        if names is None:
            names = ["x", "y"][:rank] if rank <= 2 else [f"x{i + 1}" for i in range(rank)]
        return cls(FREE, rank, (), tuple(names))

    @classmethod
    def cyclic(cls, order: int, name: str = "t") -> "GroupModel":
        return cls(CYCLIC, 0, (order,), (name,))

    # -- basic structure ---------------------------------------------------

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def is_free(self) -> bool:
        return self.kind == FREE

    @property
    def is_abelian(self) -> bool:
        return self.kind != FREE or self.rank <= 1

    @property
    def is_cyclic(self) -> bool:
        if self.kind == FREE:
            return self.rank <= 1
        if self.rank == 1:
            return not self.torsion
        if self.rank == 0:
            return all(math.gcd(x, y) == 1 for x, y in itertools.combinations(self.torsion, 2))
        return False

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def h1_rank(self) -> int:
        return self.rank

    def describe(self) -> str:
        if self.kind == FREE:
            return f"F{self.rank}" if self.rank else "1"
        parts = ["Z"] * self.rank + [f"Z/{k}" for k in self.torsion]
        if self.rank > 1 and not self.torsion:
            return f"Z^{self.rank}"
        return " + ".join(parts) if parts else "1"

    def identity(self) -> Elem:
        return () if self.kind == FREE else (0,) * self.ngens

    def generators(self) -> list[Elem]:
        if self.kind == FREE:
            return [(i + 1,) for i in range(self.rank)]
        gens = []
        for i in range(self.ngens):
            v = [0] * self.ngens
            v[i] = 1
            gens.append(self.normalize(tuple(v)))
        return gens

    def normalize(self, x: Elem) -> Elem:
        if self.kind == FREE:
            return _free_reduce(x)
        x = tuple(x)
        if len(x) != self.ngens:
            raise ValueError(f"element {x} has wrong length for {self.describe()}")
        return x[: self.rank] + tuple(v % k for v, k in zip(x[self.rank:], self.torsion))

    def is_identity(self, x: Elem) -> bool:
        return self.normalize(x) == self.identity()

    def mul(self, *xs: Elem) -> Elem:
        if self.kind == FREE:
            return _free_reduce(tuple(itertools.chain.from_iterable(xs)))
        out = [0] * self.ngens
        for x in xs:
            for i, v in enumerate(x):
                out[i] += v
        return self.normalize(tuple(out))

    def inv(self, x: Elem) -> Elem:
        if self.kind == FREE:
            return tuple(-l for l in reversed(x))
        return self.normalize(tuple(-v for v in x))

    def pow(self, x: Elem, k: int) -> Elem:
        if k < 0:
            x, k = self.inv(x), -k
        if self.kind == FREE:
            return _free_reduce(tuple(x) * k)
        return self.normalize(tuple(v * k for v in x))

    def conjugate(self, g: Elem, x: Elem) -> Elem:
        """g x g^-1"""
        return self.mul(g, x, self.inv(g))

    def abelianize(self, x: Elem) -> tuple[int, ...]:
        """Free part of the homology class of x."""
        if self.kind == FREE:
            out = [0] * self.rank
            for l in x:
                out[abs(l) - 1] += 1 if l > 0 else -1
            return tuple(out)
        return tuple(x[: self.rank])

    def length(self, x: Elem) -> int:
        if self.kind == FREE:
            return len(x)
        return sum(abs(v) for v in x)

    def elem_key(self, x: Elem) -> tuple:
        if self.kind == FREE:
            return (len(x), tuple(_letter_key(l) for l in x))
        word = []
        for i, v in enumerate(x):
            word += [2 * i + (1 if v < 0 else 0)] * abs(v)
        return (self.length(x), tuple(word))

    def ball(self, radius: int) -> list[Elem]:
        """All elements of length <= radius in shortlex order.

        For abelian models the radius bounds the L1 norm of the free part;
        torsion coordinates range over all residues.
        """
        if radius < 0:
            return []
        if self.kind == FREE:
            out = [()]
            frontier = [()]
            letters = sorted([i + 1 for i in range(self.rank)] + [-(i + 1) for i in range(self.rank)], key=_letter_key)
            for _ in range(radius):
                nxt = []
                for w in frontier:
                    for l in letters:
                        if w and w[-1] == -l:
                            continue
                        nxt.append(w + (l,))
                out += nxt
                frontier = nxt
            return out
        free = [v for v in itertools.product(range(-radius, radius + 1), repeat=self.rank)
                if sum(map(abs, v)) <= radius]
        tors = list(itertools.product(*[range(k) for k in self.torsion]))
        elems = [tuple(f) + tuple(t) for f in free for t in tors]
        return sorted(elems, key=self.elem_key)

    # -- conjugacy ---------------------------------------------------------

    def conj_class(self, x: Elem) -> "ConjClass":
        x = self.normalize(x)
        if self.kind != FREE:
            return ConjClass((0 if x == self.identity() else 1, self.elem_key(x), x), x, self)
        _, core = _cyclic_reduce(x)
        rep = _least_rotation(core)
        return ConjClass((len(rep), tuple(_letter_key(l) for l in rep)), rep, self)

    def class_of(self, text: str) -> "ConjClass":
        return self.conj_class(self.parse(text))

    def trivial_class(self) -> "ConjClass":
        return self.conj_class(self.identity())

    def merge_classes(self, a: Elem, g: Elem, b: Elem) -> "ConjClass":
        """Class of a g b g^-1; conjugator irrelevant in abelian models."""
        return self.conj_class(self.mul(a, g, b, self.inv(g)))

    def root(self, x: Elem) -> tuple[Elem, int]:
        """(r, k) with x = r^k and k maximal; (x, 1) when no finer root exists."""
        x = self.normalize(x)
        if self.kind == FREE:
            if not x:
                return (), 1
            w, core = _cyclic_reduce(x)
            p, k = _primitive_period(core)
            return self.conjugate(w, p), k
        free = x[: self.rank]
        d = math.gcd(*free) if any(free) else 0
        if d == 0:
            return x, 1
        for k in sorted((k for k in range(1, d + 1) if d % k == 0), reverse=True):
            tors = []
            for t, n in zip(x[self.rank:], self.torsion):
                sol = next((y for y in range(n) if (k * y - t) % n == 0), None)
                if sol is None:
                    break
                tors.append(sol)
            else:
                return tuple(v // k for v in free) + tuple(tors), k
        raise AssertionError("unreachable: k = 1 always solves")

    def centralizer_data(self, a: Elem) -> "Centralizer":
        a = self.normalize(a)
        if self.is_abelian or not a:
            r, k = self.root(a) if a != self.identity() else (a, 1)
            return Centralizer(True, self.ngens, r, k, self.generators())
        r, k = self.root(a)
        return Centralizer(False, 1, r, k, [r])

    def power_of(self, r: Elem, g: Elem) -> int | None:
        """k with g = r^k, or None."""
        g = self.normalize(g)
        r = self.normalize(r)
        if g == self.identity():
            return 0
        if r == self.identity():
            return None
        if self.kind == FREE:
            w, core = _cyclic_reduce(r)
            h = self.mul(self.inv(w), g, w)
            n = len(core)
            if len(h) % n:
                return None
            k = len(h) // n
            if h == core * k:
                return k
            if h == self.inv(core) * k:
                return -k
            return None
        free_r = r[: self.rank]
        if any(free_r):
            j = next(i for i, v in enumerate(free_r) if v)
            if g[j] % free_r[j]:
                return None
            k = g[j] // free_r[j]
            return k if self.pow(r, k) == g else None
        order = self.element_order(r)
        return next((k for k in range(order) if self.pow(r, k) == g), None)

    def element_order(self, x: Elem) -> int:
        """Order of x, 0 if infinite."""
        x = self.normalize(x)
        if x == self.identity():
            return 1
        if self.kind == FREE or any(x[: self.rank]):
            return 0
        out = 1
        for t, n in zip(x[self.rank:], self.torsion):
            out = math.lcm(out, n // math.gcd(t, n))
        return out

    def cyclic_subgroup_member(self, a: Elem, g: Elem) -> tuple[bool, int | None]:
        """(True, k) iff g = root(a)^k."""
        r, _ = self.root(a)
        k = self.power_of(r, g)
        return (k is not None, k)

    # -- double cosets -----------------------------------------------------

    def double_coset_test(self, a: Elem, g: Elem, b: Elem):
        """Return a predicate deciding membership in <a> g <b>."""
        if self.kind == FREE:
            return _BenoisAutomaton(a, g, b).accepts
        lattice = _Lattice(
            [list(a), list(b)]
            + [[0] * (self.rank + i) + [k] + [0] * (len(self.torsion) - i - 1) for i, k in enumerate(self.torsion)]
        )
        g = self.normalize(g)
        return lambda x: lattice.contains([u - v for u, v in zip(self.normalize(x), g)])

    def double_cosets(self, a: Elem, b: Elem, word_bound: int) -> list["CosetRep"]:
        """Canonical representatives of the non-trivial double cosets <a> g <b>
        meeting the ball of radius ``word_bound``."""
        a, b = self.normalize(a), self.normalize(b)
        if a == self.identity() or b == self.identity():
            raise ValueError("double cosets need non-trivial a and b")
        if word_bound < 0:
            raise ValueError("word_bound must be >= 0")
        tests = [self.double_coset_test(a, self.identity(), b)]
        reps = []
        for g in self.ball(word_bound):
            if any(t(g) for t in tests):
                continue
            reps.append(CosetRep(g, a, b))
            tests.append(self.double_coset_test(a, g, b))
        return reps

    # -- text --------------------------------------------------------------

    def format(self, x: Elem) -> str:
        x = self.normalize(x)
        parts = []
        if self.kind == FREE:
            for l, run in itertools.groupby(x):
                n = len(list(run)) * (1 if l > 0 else -1)
                name = self.names[abs(l) - 1]
                parts.append(name if n == 1 else f"{name}^{n}")
        else:
            for name, v in zip(self.names, x):
                if v:
                    parts.append(name if v == 1 else f"{name}^{v}")
        return "*".join(parts) if parts else "1"

    def parse(self, text: str) -> Elem:
        return _ElemParser(self, text).parse()


def _letter_key(l: int) -> int:
    # x < x^-1 < y < y^-1 < ...
    return 2 * (abs(l) - 1) + (0 if l > 0 else 1)


def _free_reduce(word: Iterable[int]) -> Elem:
    out: list[int] = []
    for l in word:
        if l == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def _cyclic_reduce(word: Elem) -> tuple[Elem, Elem]:
    """Split a reduced word as w * core * w^-1 with core cyclically reduced."""
    i, j = 0, len(word) - 1
    while i < j and word[i] == -word[j]:
        i += 1
        j -= 1
    return word[:i], word[i: j + 1]


def _least_rotation(word: Elem) -> Elem:
    if not word:
        return word
    keys = [_letter_key(l) for l in word]
    n = len(word)
    best = min(range(n), key=lambda s: keys[s:] + keys[:s])
    return word[best:] + word[:best]


def _primitive_period(core: Elem) -> tuple[Elem, int]:
    n = len(core)
    for d in range(1, n + 1):
        if n % d == 0 and core[:d] * (n // d) == core:
            return core[:d], n // d
    return core, 1


@dataclass(frozen=True, order=True)
class ConjClass:
    """Canonical conjugacy class; ordered with the trivial class first."""

    key: tuple
    rep: Elem = field(compare=False)
    model: GroupModel = field(compare=False, repr=False)

    @property
    def is_trivial(self) -> bool:
        return self.model.is_identity(self.rep)

    def inverse(self) -> "ConjClass":
        return self.model.conj_class(self.model.inv(self.rep))

    def __str__(self):
        return self.model.format(self.rep)


@dataclass(frozen=True)
class CosetRep:
    g: Elem
    left_root: Elem
    right_root: Elem

    def same_coset(self, model: GroupModel, other: "CosetRep") -> bool:
        if (self.left_root, self.right_root) != (other.left_root, other.right_root):
            return False
        return model.double_coset_test(self.left_root, self.g, self.right_root)(other.g)


@dataclass(frozen=True)
class Centralizer:
    whole_group: bool
    rank: int
    root: Elem
    exponent: int
    generators: list = field(compare=False)


class _BenoisAutomaton:
    """Finite automaton for the rational set <a> g <b> of a free group, saturated
    under cancellation of inverse letter pairs so that reduced words are accepted
    exactly when they represent members of the set."""

    def __init__(self, a: Elem, g: Elem, b: Elem):
        self.trans: dict[int, set[tuple[int, int]]] = {}
        self.eps: dict[int, set[int]] = {}
        self._n = 0
        self.start = self._new()
        self.g_start = self._new()
        self._loop(self.start, a)
        self._edge_eps(self.start, self.g_start)
        cur = self.g_start
        for l in g:
            nxt = self._new()
            self.trans[cur].add((l, nxt))
            cur = nxt
        self.accept = self._new()
        self._edge_eps(cur, self.accept)
        self._loop(self.accept, b)
        self._saturate()

    def _new(self) -> int:
        s = self._n
        self._n += 1
        self.trans[s] = set()
        self.eps[s] = set()
        return s

    def _edge_eps(self, p, r):
        self.eps[p].add(r)

    def _loop(self, base: int, word: Elem):
        # A circle labelled by word, walkable in both directions.
        cur = base
        for i, l in enumerate(word):
            nxt = base if i == len(word) - 1 else self._new()
            self.trans[cur].add((l, nxt))
            self.trans[nxt].add((-l, cur))
            cur = nxt

    def _closure(self, states: Iterable[int]) -> set[int]:
        seen = set(states)
        stack = list(seen)
        while stack:
            p = stack.pop()
            for r in self.eps[p]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    def _saturate(self):
        changed = True
        while changed:
            changed = False
            closures = {p: self._closure([p]) for p in self.trans}
            for p in self.trans:
                targets = set()
                for p1 in closures[p]:
                    for l, x in self.trans[p1]:
                        for x1 in closures[x]:
                            for l2, r in self.trans[x1]:
                                if l2 == -l:
                                    targets.add(r)
                new = targets - closures[p]
                if new:
                    self.eps[p] |= new
                    changed = True

    def accepts(self, word: Elem) -> bool:
        cur = self._closure([self.start])
        for l in _free_reduce(word):
            cur = self._closure(r for p in cur for (l2, r) in self.trans[p] if l2 == l)
            if not cur:
                return False
        return self.accept in cur


class _Lattice:
    """Integer row lattice in echelon form, for membership tests."""

    def __init__(self, rows: list[list[int]]):
        pool = [list(r) for r in rows if any(r)]
        self.pivots: list[tuple[int, list[int]]] = []
        ncols = len(rows[0]) if rows else 0
        for col in range(ncols):
            while True:
                live = [r for r in pool if r[col]]
                if len(live) <= 1:
                    break
                piv = min(live, key=lambda r: abs(r[col]))
                for r in live:
                    if r is not piv:
                        f = r[col] // piv[col]
                        for i in range(ncols):
                            r[i] -= f * piv[i]
                pool = [r for r in pool if any(r)]
            live = [r for r in pool if r[col]]
            if live:
                self.pivots.append((col, live[0]))
                pool = [r for r in pool if r is not live[0]]

    def contains(self, x: list[int]) -> bool:
        x = list(x)
        for col, row in self.pivots:
            if x[col] % row[col]:
                return False
            f = x[col] // row[col]
            if f:
                x = [u - f * v for u, v in zip(x, row)]
        return not any(x)


_ELEM_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z_0-9]*)|(\d+)|([-+*^()\[\],]))")


class _ElemParser:
    def __init__(self, model: GroupModel, text: str):
        self.model = model
        self.text = text
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _ELEM_TOKEN.match(stripped, pos)
            if not m:
                raise GroupParseError(text, pos, "unexpected character")
            self.tokens.append((m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.tokens.append(("$", len(stripped)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self, expected=None):
        tok, at = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise GroupParseError(self.text, at, f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok, at

    def parse(self) -> Elem:
        if self.peek() == "$":
            raise GroupParseError(self.text, 0, "empty element")
        x = self.expr()
        if self.peek() != "$":
            raise GroupParseError(self.text, self.tokens[self.i][1], f"trailing {self.peek()!r}")
        return x

    def expr(self) -> Elem:
        m = self.model
        if self.peek() == "-":
            self._additive_ok()
            self.take()
            x = m.inv(self.factor())
        else:
            x = self.factor()
        while self.peek() in ("*", "+", "-"):
            op, _ = self.take()
            if op != "*":
                self._additive_ok()
            y = self.factor()
            x = m.mul(x, m.inv(y) if op == "-" else y)
        return x

    def _additive_ok(self):
        if self.model.kind == FREE:
            tok, at = self.tokens[self.i]
            raise GroupParseError(self.text, at, "additive notation needs an abelian model")

    def factor(self) -> Elem:
        x = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() in ("-", "+"):
                sign = -1 if self.take()[0] == "-" else 1
            tok, at = self.take()
            if not tok.isdigit():
                raise GroupParseError(self.text, at, "expected integer exponent")
            x = self.model.pow(x, sign * int(tok))
        return x

    def atom(self) -> Elem:
        m = self.model
        tok, at = self.take()
        if tok == "(":
            x = self.expr()
            self.take(")")
            return x
        if tok == "1":
            return m.identity()
        if tok == "[":
            if m.kind == FREE:
                raise GroupParseError(self.text, at, "vector literal needs an abelian model")
            vals = []
            while True:
                sign = 1
                if self.peek() == "-":
                    self.take()
                    sign = -1
                t, a2 = self.take()
                if not t.isdigit():
                    raise GroupParseError(self.text, a2, "expected integer")
                vals.append(sign * int(t))
                if self.peek() == ",":
                    self.take()
                    continue
                self.take("]")
                break
            if len(vals) != m.ngens:
                raise GroupParseError(self.text, at, f"vector needs {m.ngens} entries")
            return m.normalize(tuple(vals))
        if tok in m.names:
            i = m.names.index(tok)
            if m.kind == FREE:
                return (i + 1,)
            return m.generators()[i]
        raise GroupParseError(self.text, at, f"unknown generator {tok!r}")


# Module-level conveniences mirroring the model methods.

def conj_class(model: GroupModel, x: Elem) -> ConjClass:
    return model.conj_class(x)


def merge_classes(model: GroupModel, a: Elem, g: Elem, b: Elem) -> ConjClass:
    return model.merge_classes(a, g, b)


def double_cosets(model: GroupModel, a: Elem, b: Elem, word_bound: int) -> list[CosetRep]:
    return model.double_cosets(a, b, word_bound)


def centralizer_data(model: GroupModel, a: Elem) -> Centralizer:
    return model.centralizer_data(a)


def cyclic_subgroup_member(model: GroupModel, a: Elem, g: Elem) -> tuple[bool, int | None]:
    return model.cyclic_subgroup_member(a, g)
