"""Exact arithmetic in Z[q^{+-1}], Z[q^{+-1}, z] and Z[q^{+-1}, z, u].

All three types are immutable sparse polynomials with structural equality:
zero coefficients are never stored, so ``a == b`` compares term maps.

    >>> q, z = RPoly.q(), RPoly.z()
    >>> str((q - q**-1) * (q + q**-1))
    'q^2 - q^-2'
    >>> RPoly.parse('q^2 - 1 + z*q') == q**2 - 1 + z*q
    True
"""

from __future__ import annotations

import re
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping, Union

__all__ = [
    "LaurentPoly",
    "RPoly",
    "UPoly",
    "PolyParseError",
    "add",
    "mul",
    "specialize",
    "cyclotomic_q2",
    "geometric_sum",
    "equal_up_to_unit",
]


class PolyParseError(ValueError):
    def __init__(self, text, pos, msg):
        super().__init__(f"{msg} at column {pos + 1} in {text!r}")
        self.text = text
        self.pos = pos


def _clean(terms):
    return {k: v for k, v in terms.items() if v}


class LaurentPoly:
    """Element of Z[q, q^-1] as a map exponent -> nonzero integer."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | int | None = None):
        if terms is None:
            terms = {}
        elif isinstance(terms, int):
            terms = {0: terms}
        elif isinstance(terms, LaurentPoly):
            terms = terms._terms
        clean = {}
        for e, c in terms.items():
            if not isinstance(e, int) or not isinstance(c, int):
                raise TypeError("LaurentPoly needs integer exponents and coefficients")
            if c:
                clean[e] = clean.get(e, 0) + c
        self._terms = dict(sorted(_clean(clean).items()))
        self._hash = None

    @classmethod
    def q(cls, k: int = 1) -> "LaurentPoly":
        return cls({k: 1})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, (RPoly, UPoly)):
            return x.to_laurent()
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    @property
    def terms(self) -> Mapping[int, int]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        elif isinstance(other, (RPoly, UPoly)):
            return other == self
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, (RPoly, UPoly)):
            return NotImplemented
        other = LaurentPoly.coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (RPoly, UPoly)):
            return NotImplemented
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (RPoly, UPoly)):
            return NotImplemented
        other = LaurentPoly.coerce(other)
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise ValueError(f"{self} is not a unit; negative power undefined")
            (e, c), = self._terms.items()
            return LaurentPoly({e * n: c ** (-n)})
        out = LaurentPoly(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_unit(self) -> bool:
        """Units of Z[q^{+-1}] are exactly +-q^k."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    @property
    def min_exp(self):
        return min(self._terms) if self._terms else None

    @property
    def max_exp(self):
        return max(self._terms) if self._terms else None

    def evaluate(self, q) -> Fraction:
        q = Fraction(q)
        if q == 0 and self.min_exp is not None and self.min_exp < 0:
            raise ZeroDivisionError("q is a unit and cannot be sent to 0")
        return sum((c * q**e for e, c in self._terms.items()), Fraction(0))

    def coefficient_sum(self) -> int:
        return sum(self._terms.values())

    def divmod_unit_normal(self):
        """Split into (unit, normalized) with normalized having lowest exponent 0
        and positive leading coefficient."""
        if not self:
            return LaurentPoly(1), self
        lo = self.min_exp
        sign = 1 if self._terms[self.max_exp] > 0 else -1
        return LaurentPoly({lo: sign}), LaurentPoly({e - lo: sign * c for e, c in self._terms.items()})

    def to_laurent(self):
        return self

    def __str__(self):
        return RPoly(self).__str__()

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return _parse(text).to_laurent()


class _Graded:
    """Sparse polynomial in one non-negative variable over a coefficient ring."""

    __slots__ = ("_terms", "_hash")
    _var = ""
    _coeff: type = LaurentPoly

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif isinstance(terms, type(self)):
            terms = terms._terms
        elif isinstance(terms, UPoly):
            terms = terms.to_rpoly()._terms
        elif not isinstance(terms, Mapping):
            terms = {0: terms}
        out = {}
        for k, c in terms.items():
            if not isinstance(k, int) or k < 0:
                raise ValueError(f"{self._var}-degree must be a non-negative integer, got {k!r}")
            c = self._coeff.coerce(c)
            if k in out:
                c = out[k] + c
            out[k] = c
        self._terms = dict(sorted((k, c) for k, c in out.items() if c))
        self._hash = None

    @classmethod
    def coerce(cls, x):
        if isinstance(x, cls):
            return x
        if isinstance(x, (int, LaurentPoly, _Graded)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to {cls.__name__}")

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def coeff(self, k: int):
        return self._terms.get(k, self._coeff())

    def items(self):
        return self._terms.items()

    @property
    def degree(self):
        return max(self._terms) if self._terms else -1

    def __bool__(self):
        return bool(self._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._var, tuple(self._terms.items())))
        return self._hash

    def _common(self, other):
        """Return (cls, a, b) with both operands lifted to the larger ring."""
        if isinstance(other, UPoly) and not isinstance(self, UPoly):
            return UPoly, UPoly.coerce(self), other
        cls = type(self)
        return cls, self, cls.coerce(other)

    def __eq__(self, other):
        try:
            _, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return a._terms == b._terms

    def __add__(self, other):
        try:
            cls, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        out = dict(a._terms)
        for k, c in b._terms.items():
            out[k] = out[k] + c if k in out else c
        return cls(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        try:
            cls, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            cls, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        out: dict = {}
        for k1, c1 in a._terms.items():
            for k2, c2 in b._terms.items():
                prod = c1 * c2
                k = k1 + k2
                out[k] = out[k] + prod if k in out else prod
        return cls(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) == 1 and 0 in self._terms:
                return type(self)(self._terms[0] ** n)
            raise ValueError(f"{self} is not a unit; negative power undefined")
        out = type(self)(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self):
        return _render(self)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


class RPoly(_Graded):
    """Element of R = Z[q^{+-1}, z]: map z-degree -> LaurentPoly."""

    __slots__ = ()
    _var = "z"
    _coeff = LaurentPoly

    @classmethod
    def q(cls, k: int = 1) -> "RPoly":
        return cls(LaurentPoly.q(k))

    @classmethod
    def z(cls, k: int = 1) -> "RPoly":
        return cls({k: 1})

    def to_laurent(self) -> LaurentPoly:
        if any(k for k in self._terms):
            raise ValueError(f"{self} involves z")
        return self._terms.get(0, LaurentPoly())

    def to_rpoly(self):
        return self

    def is_unit(self) -> bool:
        return set(self._terms) <= {0} and bool(self) and self._terms[0].is_unit()

    def monomials(self) -> Iterator[tuple[int, int, int]]:
        """Yield (z-degree, q-exponent, coefficient)."""
        for k, lp in self._terms.items():
            for e, c in lp.items():
                yield k, e, c

    @classmethod
    def parse(cls, text: str) -> "RPoly":
        return _parse(text).to_rpoly()


class UPoly(_Graded):
    """Element of Z[q^{+-1}, z, u]: map u-degree -> RPoly."""

    __slots__ = ()
    _var = "u"
    _coeff = RPoly

    @classmethod
    def u(cls, k: int = 1) -> "UPoly":
        return cls({k: 1})

    def to_rpoly(self) -> RPoly:
        if any(k for k in self._terms):
            raise ValueError(f"{self} involves u")
        return self._terms.get(0, RPoly())

    def to_laurent(self) -> LaurentPoly:
        return self.to_rpoly().to_laurent()

    @classmethod
    def parse(cls, text: str) -> "UPoly":
        return _parse(text)


Poly = Union[LaurentPoly, RPoly, UPoly]


def _render(p) -> str:
    """Terms sorted by (u-degree, z-degree) ascending, then q-exponent descending."""
    if isinstance(p, LaurentPoly):
        p = RPoly(p)
    if isinstance(p, RPoly):
        p = UPoly(p)
    pieces = []
    for ku, rp in p.items():
        for kz, lp in rp.items():
            for e in sorted(lp.terms, reverse=True):
                c = lp.terms[e]
                factors = []
                for name, k in (("u", ku), ("z", kz), ("q", e)):
                    if k == 1:
                        factors.append(name)
                    elif k:
                        factors.append(f"{name}^{k}")
                if abs(c) != 1 or not factors:
                    factors.insert(0, str(abs(c)))
                pieces.append((c < 0, "*".join(factors)))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([quz])|(\^)|([-+*()]))")


def _parse(text: str) -> UPoly:
    tokens = []
    pos = 0
    text_s = text.rstrip()
    while pos < len(text_s):
        m = _TOKEN.match(text_s, pos)
        if not m:
            raise PolyParseError(text, pos, "unexpected character")
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("$", len(text_s)))
    i = 0

    def peek():
        return tokens[i][0]

    def take(expected=None):
        nonlocal i
        tok, at = tokens[i]
        if expected is not None and tok != expected:
            raise PolyParseError(text, at, f"expected {expected!r}, found {tok!r}")
        i += 1
        return tok, at

    def signed_int():
        sign = 1
        while peek() in ("+", "-"):
            if take()[0] == "-":
                sign = -sign
        if peek() == "(":
            take("(")
            val = signed_int()
            take(")")
            return sign * val
        tok, at = take()
        if not tok.isdigit():
            raise PolyParseError(text, at, "expected integer exponent")
        return sign * int(tok)

    def atom():
        tok, at = take()
        if tok.isdigit():
            return UPoly(int(tok))
        if tok == "q":
            return UPoly(LaurentPoly.q())
        if tok == "z":
            return UPoly(RPoly.z())
        if tok == "u":
            return UPoly.u()
        if tok == "(":
            val = expr()
            take(")")
            return val
        raise PolyParseError(text, at, f"unexpected {tok!r}")

    def power():
        base = atom()
        if peek() == "^":
            _, at = take("^")
            n = signed_int()
            try:
                return base**n
            except ValueError as exc:
                raise PolyParseError(text, at, str(exc)) from None
        return base

    def unary():
        if peek() == "-":
            take()
            return -unary()
        if peek() == "+":
            take()
            return unary()
        return power()

    def term():
        val = unary()
        while peek() == "*":
            take()
            val = val * unary()
        return val

    def expr():
        val = term()
        while peek() in ("+", "-"):
            op, _ = take()
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    if peek() == "$":
        raise PolyParseError(text, 0, "empty polynomial")
    result = expr()
    if peek() != "$":
        raise PolyParseError(text, tokens[i][1], f"trailing {peek()!r}")
    return result


def add(a, b):
    return RPoly.coerce(a) + b


def mul(a, b):
    return RPoly.coerce(a) * b


def specialize(a, q_to=None, z_to=None):
    """Image of ``a`` under q -> q_to and/or z -> z_to.

    ``None`` keeps a variable symbolic.  Keeping q requires an integer z
    target (the result is then a LaurentPoly); keeping z requires q -> +-1
    (result stays in R).  Specializing both gives a Fraction.
    """
    a = RPoly.coerce(a)
    if q_to is not None:
        q_to = Fraction(q_to)
        if q_to == 0:
            raise ValueError("q is a unit and cannot be sent to 0")
    if z_to is not None:
        z_to = Fraction(z_to)

    if q_to is None and z_to is None:
        return a
    if q_to is None:
        if z_to.denominator != 1:
            raise ValueError("z -> non-integer leaves Z[q^{+-1}]; specialize q as well")
        zi = int(z_to)
        out = LaurentPoly()
        for k, lp in a.items():
            out = out + lp * (zi**k)
        return out
    if z_to is None:
        if abs(q_to) != 1:
            raise ValueError("keeping z symbolic requires q -> +-1")
        qi = int(q_to)
        return RPoly({k: int(lp.evaluate(qi)) for k, lp in a.items()})
    return sum((lp.evaluate(q_to) * z_to**k for k, lp in a.items()), Fraction(0))


def cyclotomic_q2(lam: int) -> LaurentPoly:
    """q^{2 lam} - 1, the annihilator of the lam-summand (0 for a free summand)."""
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    if lam == 0:
        return LaurentPoly()
    return LaurentPoly({2 * lam: 1, 0: -1})


def geometric_sum(eps: int, step: int = 1) -> RPoly:
    """The Laurent polynomial p with p * (1 - q^step) = 1 - q^{2 eps}.

    ``step`` must divide ``2*eps``.  With step=1 this is
    1 + q + ... + q^{2eps-1} for eps > 0 and -(q^-1 + ... + q^{2eps}) for eps < 0.
    """
    if step <= 0 or (2 * eps) % step:
        raise ValueError(f"step {step} does not divide 2*eps = {2 * eps}")
    n = 2 * eps // step
    if n >= 0:
        return RPoly(LaurentPoly({step * i: 1 for i in range(n)}))
    return RPoly(LaurentPoly({step * i: -1 for i in range(n, 0)}))


def equal_up_to_unit(a, b) -> bool:
    """a == +-q^k * b for some k (scalars or skein vectors)."""
    if hasattr(a, "equal_up_to_unit"):
        return a.equal_up_to_unit(b)
    a, b = RPoly.coerce(a), RPoly.coerce(b)
    if not a or not b:
        return not a and not b
    (ka, la), (kb, lb) = next(iter(a.items())), next(iter(b.items()))
    if ka != kb:
        return False
    shift = la.max_exp - lb.max_exp
    sign = 1 if la.terms[la.max_exp] * lb.terms[lb.max_exp] > 0 else -1
    return a == b * RPoly(LaurentPoly({shift: sign}))
