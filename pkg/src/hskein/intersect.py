"""Manifold descriptors and the invariants computed from intersection data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .groups import ConjClass, Elem, GroupModel, UnsupportedModel
from .paths import PathEndpointError, PathWord, index
from .ring import LaurentPoly, cyclotomic_q2
from .wrap import WrapClass, homology_class


class DescriptorError(ValueError):
    """Inconsistent manifold descriptor."""


@dataclass(frozen=True)
class Flags:
    """Topological hypotheses.  These are user assertions; nothing here checks them."""

    pi2_zero: bool = False
    atoroidal: bool = False
    surface_product: bool = False
    cyclic_pi1: bool = False

    def asserted(self) -> list[str]:
        return [k for k in ("pi2_zero", "atoroidal", "surface_product", "cyclic_pi1") if getattr(self, k)]


def _matrix(rows, nrows, ncols, what):
    rows = tuple(tuple(int(v) for v in r) for r in rows)
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise DescriptorError(f"{what} must be {nrows}x{ncols}")
    return rows


@dataclass(frozen=True)
class ManifoldData:
    name: str
    pi1: GroupModel
    b1: int
    b1_boundary: int
    h2_rank: int
    pairing: tuple = ()
    torus_class: tuple = ()
    sphere_subgroup: tuple = ()
    flags: Flags = Flags()
    boundary_tori: tuple = ()
    theta_specs: tuple = field(default=(), compare=False)
    delta_specs: tuple = field(default=(), compare=False)

    def __post_init__(self):
        n, m = self.pi1.h1_rank, self.h2_rank
        if min(self.b1, self.b1_boundary, m) < 0:
            raise DescriptorError("Betti numbers must be non-negative")
        if self.b1 != n:
            raise DescriptorError(f"b1 = {self.b1} but the group model has free rank {n}")
        set_ = lambda k, v: object.__setattr__(self, k, v)
        set_("pairing", _matrix(self.pairing or [[0] * n for _ in range(m)], m, n, "pairing"))
        tc = self.torus_class or [[[0] * m for _ in range(n)] for _ in range(n)]
        if len(tc) != n or any(len(r) != n for r in tc):
            raise DescriptorError(f"torus_class must be {n}x{n}")
        tc = tuple(tuple(tuple(int(v) for v in cell) for cell in row) for row in tc)
        for i in range(n):
            for j in range(n):
                if len(tc[i][j]) != m:
                    raise DescriptorError(f"torus_class[{i}][{j}] must have length {m}")
                if tc[i][j] != tuple(-v for v in tc[j][i]):
                    raise DescriptorError(f"torus_class is not antisymmetric at ({i},{j})")
        set_("torus_class", tc)
        spheres = tuple(tuple(int(v) for v in s) for s in self.sphere_subgroup)
        if any(len(s) != m for s in spheres):
            raise DescriptorError(f"sphere_subgroup vectors must have length {m}")
        set_("sphere_subgroup", spheres)
        if self.flags.pi2_zero and any(any(s) for s in spheres):
            raise DescriptorError("pi2_zero is asserted but sphere_subgroup is nonempty")
        if self.flags.cyclic_pi1 != self.pi1.is_cyclic:
            raise DescriptorError(
                f"cyclic_pi1 flag is {self.flags.cyclic_pi1} but {self.pi1.describe()} is "
                + ("cyclic" if self.pi1.is_cyclic else "not cyclic")
            )
        set_("boundary_tori", tuple((tuple(a), tuple(b)) for a, b in self.boundary_tori))
        for a, b in self.boundary_tori:
            for x in (a, b):
                if self.pi1.normalize(x) != tuple(x):
                    raise DescriptorError(f"boundary torus generator {x} is not in normal form")
        set_("theta_specs", tuple(self.theta_specs))
        set_("delta_specs", tuple(self.delta_specs))

    @property
    def n(self) -> int:
        return self.pi1.h1_rank

    def has_spheres(self) -> bool:
        return any(any(s) for s in self.sphere_subgroup)


def _require_abelian(M: ManifoldData):
    if not M.pi1.is_abelian:
        raise UnsupportedModel(f"{M.name}: intersection data needs an abelian fundamental group, got {M.pi1.describe()}")


def torus_class(M: ManifoldData, a: Elem, h: Elem) -> tuple[int, ...]:
    """H2 class of the torus swept by a loop in class a moving along h (bilinear, alternating)."""
    _require_abelian(M)
    av, hv = M.pi1.abelianize(a), M.pi1.abelianize(h)
    out = [0] * M.h2_rank
    for i, x in enumerate(av):
        if not x:
            continue
        for j, y in enumerate(hv):
            if y:
                for k, t in enumerate(M.torus_class[i][j]):
                    out[k] += x * y * t
    return tuple(out)


def pair(M: ManifoldData, s: Sequence[int], c: Sequence[int]) -> int:
    return sum(s[i] * M.pairing[i][j] * c[j] for i in range(M.h2_rank) for j in range(M.n))


def iota_f(M: ManifoldData, a: Elem, h: Elem, sphere: Sequence[int] | None, beta: WrapClass) -> int:
    tau = torus_class(M, a, h)
    if sphere:
        tau = tuple(x + y for x, y in zip(tau, sphere))
    return pair(M, tau, homology_class(beta, M.pi1))


def iota_alpha_a(M: ManifoldData, alpha: WrapClass, a: ConjClass) -> int:
    _require_abelian(M)
    if a not in alpha:
        raise KeyError(f"{a} does not occur in {alpha}")
    rest = alpha.remove(a)
    g = 0
    for h in M.pi1.generators():
        g = math.gcd(g, iota_f(M, a.rep, h, None, rest))
    zero = M.pi1.identity()
    for s in M.sphere_subgroup:
        g = math.gcd(g, iota_f(M, a.rep, zero, s, rest))
    return g


def lambda_alpha(M: ManifoldData, alpha: WrapClass) -> int:
    g = 0
    for a in set(alpha.classes):
        g = math.gcd(g, iota_alpha_a(M, alpha, a))
    return g


@dataclass(frozen=True)
class LinkingSummand:
    alpha: WrapClass
    lam: int
    annihilator: LaurentPoly

    @property
    def is_free(self) -> bool:
        return self.lam == 0


def linking_module(M: ManifoldData, alphas) -> list[LinkingSummand]:
    out = []
    for alpha in sorted(set(alphas)):
        lam = lambda_alpha(M, alpha)
        out.append(LinkingSummand(alpha, lam, cyclotomic_q2(lam)))
    return out


def linking_number(M: ManifoldData, alpha: WrapClass, gamma: PathWord) -> int:
    """Index of a path ending at the standard link of alpha, mod lambda(alpha)."""
    if gamma.end != alpha:
        raise PathEndpointError(f"path ends at {gamma.end}, not at the standard link of {alpha}")
    lam = lambda_alpha(M, alpha)
    e = index(gamma)
    return e % lam if lam else e


@dataclass(frozen=True)
class Verdict:
    h_verdict: str
    h_clause: str
    c_verdict: str
    c_clause: str
    assertions: tuple[str, ...]

    def lines(self) -> list[str]:
        out = [f"H(M): {self.h_verdict} ({self.h_clause})", f"C(M): {self.c_verdict} ({self.c_clause})"]
        out.append("user assertions: " + (", ".join(self.assertions) if self.assertions else "none"))
        return out


def freeness_verdict(M: ManifoldData) -> Verdict:
    ab = M.pi1.is_abelian
    balanced = 2 * M.b1 == M.b1_boundary
    if ab and balanced:
        h, hc = "FREE", "abelian, 2b1=b1(∂)"
    elif not ab:
        h, hc = "TORSION", f"pi1 = {M.pi1.describe()} is not abelian"
    else:
        h, hc = "TORSION", f"abelian but 2b1={2 * M.b1} != b1(∂)={M.b1_boundary}"
    used = ("pi2_zero", "atoroidal")
    if M.flags.pi2_zero and M.flags.atoroidal:
        c, cc = "FREE", "pi2=0 and atoroidal (asserted)"
    else:
        missing = [k for k in used if not getattr(M.flags, k)]
        c, cc = "UNDECIDED", "not asserted: " + ", ".join(missing)
    return Verdict(h, hc, c, cc, tuple(M.flags.asserted()))
