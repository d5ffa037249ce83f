"""Relation generators, structure sets and presentation matrices."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import sympy

from .groups import ConjClass, CosetRep, Elem, GroupModel, UnsupportedModel
from .intersect import ManifoldData, lambda_alpha, pair as h2_pair, torus_class
from .paths import CrossingEvent, PathWord, loop, s_f, s_if
from .ring import LaurentPoly, RPoly, UPoly, specialize
from .wrap import SkeinVector, WrapClass, from_hat, homology_class, skein_closure, to_hat, u_act

THETA = "theta"
DELTA = "delta"
SPHERE = "sphere"
R_MODE = "R"
RHAT_MODE = "Rhat"


class MissingEventData(Exception):
    """A surviving generator has no event data and none can be defaulted."""


# -- event specifications ------------------------------------------------------

@dataclass(frozen=True)
class SpecEvent:
    """A crossing of the moving component with another component.

    ``target`` names the class of the other component; the smoothing merges
    the moving component with it through ``conjugator``.  An explicit
    ``smoothed`` class overrides that rule.
    """

    sign: int
    target: ConjClass | None = None
    conjugator: Elem | None = None
    smoothed: WrapClass | None = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("event sign must be +1 or -1")
        if self.target is None and self.smoothed is None:
            raise ValueError("event needs a target component or an explicit smoothing")

    def materialize(self, model: GroupModel, base: WrapClass, mover: ConjClass) -> CrossingEvent:
        if self.smoothed is not None:
            return CrossingEvent(self.sign, self.smoothed)
        try:
            rest = base.remove(mover, self.target)
        except KeyError:
            raise ValueError(f"{self.target} is not another component of {base}") from None
        g = self.conjugator if self.conjugator is not None else model.identity()
        return CrossingEvent(self.sign, rest.add(model.merge_classes(mover.rep, g, self.target.rep)))


@dataclass(frozen=True)
class SelfHomotopySpec:
    alpha: WrapClass
    component: ConjClass
    events: tuple[SpecEvent, ...]
    h: Elem | None = None
    h2_class: tuple | None = None
    label: str = ""

    @property
    def epsilon(self) -> int:
        return sum(e.sign for e in self.events)

    def epsilon_by_target(self) -> dict:
        out: dict = {}
        for e in self.events:
            out[e.target] = out.get(e.target, 0) + e.sign
        return out


@dataclass(frozen=True)
class BandSpec:
    alpha: WrapClass
    pair: tuple[ConjClass, ConjClass]
    g: Elem
    events: tuple[SpecEvent, ...]
    label: str = ""


@dataclass(frozen=True)
class Bounds:
    conj_bound: int = 1
    coset_bound: int = 1


@dataclass(frozen=True)
class GeneratorDescriptor:
    kind: str
    alpha: WrapClass
    a: ConjClass | None = None
    h: Elem | None = None
    sphere: tuple | None = None
    pair: tuple | None = None
    coset: CosetRep | None = None
    spec: object = None
    label: str = ""

    def __post_init__(self):
        if self.kind == DELTA and any(c.is_trivial for c in self.pair):
            raise ValueError("band generators need two non-trivial classes")

    def describe(self) -> str:
        if self.label:
            tag = f" [{self.label}]"
        else:
            tag = ""
        if self.kind == SPHERE:
            return f"Sphere(s={list(self.sphere)}){tag}"
        if self.kind == THETA:
            model = self.alpha.model
            parts = [f"a={self.a}"]
            if self.h is not None:
                parts.append(f"h={model.format(self.h)}")
            if self.sphere is not None:
                parts.append(f"s={list(self.sphere)}")
            return f"Theta({', '.join(parts)}){tag}"
        model = self.alpha.model
        return f"Delta(a={self.pair[0]}, b={self.pair[1]}, g={model.format(self.coset.g)}){tag}"


# -- default event data --------------------------------------------------------

def _intersections_known(M: ManifoldData) -> bool:
    return M.pi1.is_abelian or M.h2_rank == 0


def _crossings(M: ManifoldData, cls2: tuple, others: Iterable[ConjClass]) -> tuple[SpecEvent, ...]:
    """|e| events of sign(e) against each other component, e its intersection number."""
    events = []
    for c in others:
        e = h2_pair(M, cls2, homology_class(WrapClass([c], M.pi1), M.pi1)) if M.h2_rank else 0
        events += [SpecEvent(1 if e > 0 else -1, c)] * abs(e)
    return tuple(events)


def default_theta_events(M: ManifoldData, alpha: WrapClass, a: ConjClass, h: Elem | None,
                         sphere: Sequence[int] | None) -> tuple[SpecEvent, ...]:
    if not _intersections_known(M):
        raise MissingEventData(f"no event data for Theta at {alpha}, a={a}: non-abelian model with H2 != 0")
    cls2 = [0] * M.h2_rank
    if h is not None and M.h2_rank:
        cls2 = list(torus_class(M, a.rep, h))
    if sphere is not None:
        cls2 = [x + y for x, y in zip(cls2, sphere)]
    return _crossings(M, tuple(cls2), alpha.remove(a).classes)


def band_merge(M: ManifoldData, alpha: WrapClass, pair: tuple, g: Elem) -> tuple[WrapClass, ConjClass]:
    """alpha(1,2;g) together with its merged entry."""
    a, b = pair
    merged = M.pi1.merge_classes(a.rep, g, b.rep)
    return alpha.remove(a, b).add(merged), merged


def default_band_events(M: ManifoldData, alpha: WrapClass, pair: tuple, g: Elem) -> tuple[SpecEvent, ...]:
    if not _intersections_known(M):
        raise MissingEventData(f"no event data for Delta at {alpha}: non-abelian model with H2 != 0")
    target, merged = band_merge(M, alpha, pair, g)
    cls2 = torus_class(M, pair[0].rep, g) if M.h2_rank else ()
    return _crossings(M, cls2, target.remove(merged).classes)


# -- relation generators -------------------------------------------------------

def theta_generator(M: ManifoldData, alpha: WrapClass, spec: SelfHomotopySpec) -> SkeinVector:
    if spec.component not in alpha:
        raise KeyError(f"{spec.component} does not occur in {alpha}")
    events = [e.materialize(M.pi1, alpha, spec.component) for e in spec.events]
    return s_if(loop(alpha, events))


def theta_sphere_generator(M: ManifoldData, alpha: WrapClass, s: Sequence[int],
                           events: Sequence | None = None) -> SkeinVector:
    """Row of a sphere generator over the u-graded ring.

    An adjoined trivial component sweeps once over the sphere; every crossing
    smooths back to alpha, so the row is u(q^{2e}-1)alpha plus z times a
    q-polynomial multiple of alpha (plus whatever explicit smoothings add).
    """
    base = u_act(alpha, 1, M.pi1)
    trivial = M.pi1.trivial_class()
    if events is None:
        events = _crossings(M, tuple(s), alpha.classes)
    mats = []
    for e in events:
        mats.append(e if isinstance(e, CrossingEvent) else e.materialize(M.pi1, base, trivial))
    return to_hat(s_if(loop(base, mats)))


def delta_tilde(M: ManifoldData, alpha: WrapClass, pair: tuple, g: Elem,
                band_events: Sequence | None = None) -> SkeinVector:
    a, b = pair
    if a.is_trivial or b.is_trivial:
        raise ValueError("band generators need two non-trivial classes")
    target, merged = band_merge(M, alpha, pair, g)  # raises KeyError if the pair is absent
    baseline, _ = band_merge(M, alpha, pair, M.pi1.identity())
    if band_events is None:
        band_events = default_band_events(M, alpha, pair, g)
    events = [e if isinstance(e, CrossingEvent) else e.materialize(M.pi1, target, merged) for e in band_events]
    gamma = PathWord(("band", str(alpha), M.pi1.format(g)), target, tuple(events))
    return s_f(gamma) - SkeinVector.basis(baseline)


def delta_generator(M: ManifoldData, alpha: WrapClass, pair: tuple, g: Elem,
                    band_events: Sequence | None = None) -> SkeinVector:
    factor = RPoly.z() * RPoly(LaurentPoly({-1: 1, 1: -1}))
    return delta_tilde(M, alpha, pair, g, band_events).scale(factor)


# -- structure sets --------------------------------------------------------------

def _theta_generators_for(M: ManifoldData, alpha: WrapClass, a: ConjClass) -> list[GeneratorDescriptor]:
    out = []
    spheres = [s for s in M.sphere_subgroup if any(s)]
    if not a.is_trivial:
        if M.pi1.is_abelian:
            hs = M.pi1.generators()
        else:
            hs = [M.pi1.centralizer_data(a.rep).root]
        for h in hs:
            out.append(GeneratorDescriptor(THETA, alpha, a=a, h=h))
    # a trivial component contributes only through spheres
    for s in spheres:
        out.append(GeneratorDescriptor(THETA, alpha, a=a, h=M.pi1.identity(), sphere=s))
    return out


def _delta_generators_for(M: ManifoldData, alpha: WrapClass, pair: tuple, bound: int) -> list[GeneratorDescriptor]:
    a, b = pair
    return [GeneratorDescriptor(DELTA, alpha, pair=pair, coset=c)
            for c in M.pi1.double_cosets(a.rep, b.rep, bound)]


def _distinct_pairs(alpha: WrapClass):
    seen = set()
    cls = alpha.classes
    for i, j in itertools.combinations(range(len(cls)), 2):
        p = (cls[i], cls[j])
        if p not in seen:
            seen.add(p)
            yield p


def structure_set(M: ManifoldData, alpha: WrapClass, mode: str = R_MODE,
                  bounds: Bounds | None = None) -> list[GeneratorDescriptor]:
    bounds = bounds or Bounds()
    out: list[GeneratorDescriptor] = []
    if mode == R_MODE:
        for a in sorted(set(alpha.classes)):
            if alpha.remove(a).is_trivial:
                continue
            out += _theta_generators_for(M, alpha, a)
        for p in _distinct_pairs(alpha):
            if p[0].is_trivial or p[1].is_trivial or alpha.remove(*p).is_trivial:
                continue
            out += _delta_generators_for(M, alpha, p, bounds.coset_bound)
    elif mode == RHAT_MODE:
        if alpha.trivial_count:
            raise ValueError("u-graded generators carry no trivial classes")
        for s in M.sphere_subgroup:
            if any(s):
                out.append(GeneratorDescriptor(SPHERE, alpha, sphere=s))
        if len(alpha) >= 2:
            for a in sorted(set(alpha.classes)):
                out += [d for d in _theta_generators_for(M, alpha, a) if d.sphere is None or not a.is_trivial]
        if len(alpha) >= 3:
            for p in _distinct_pairs(alpha):
                out += _delta_generators_for(M, alpha, p, bounds.coset_bound)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return out


# -- reductions -----------------------------------------------------------------------

def _in_subgroup(model: GroupModel, gens: Sequence[Elem], x: Elem) -> bool:
    from .groups import _Lattice

    rows = [list(g) for g in gens] + [
        [0] * (model.rank + i) + [k] + [0] * (len(model.torsion) - i - 1) for i, k in enumerate(model.torsion)
    ]
    return _Lattice(rows or [[0] * model.ngens]).contains(list(model.normalize(x)))


def _relation_lattice(model: GroupModel, elems: Sequence[Elem]) -> list[list[int]]:
    """Basis of {c in Z^k : prod elems[i]^c[i] = 1} for an abelian model."""
    k, w = len(elems), model.ngens
    rows = [list(e) + [1 if j == i else 0 for j in range(k)] for i, e in enumerate(elems)]
    rows += [[0] * (model.rank + i) + [t] + [0] * (len(model.torsion) - i - 1) + [0] * k
             for i, t in enumerate(model.torsion)]
    pool = [r for r in rows if any(r)]
    for col in range(w):
        while True:
            live = [r for r in pool if r[col]]
            if len(live) <= 1:
                break
            piv = min(live, key=lambda r: abs(r[col]))
            for r in live:
                if r is not piv:
                    f = r[col] // piv[col]
                    for i in range(len(r)):
                        r[i] -= f * piv[i]
        pool = [r for r in pool if not r[col]]
    return [r[w:] for r in pool if any(r[w:])]


def generate_cyclic(model: GroupModel, elems: Sequence[Elem]) -> bool:
    """True iff all elems lie in one cyclic subgroup."""
    elems = [model.normalize(e) for e in elems if model.normalize(e) != model.identity()]
    if len(elems) <= 1:
        return True
    if not model.is_abelian:
        roots = {model.root(e)[0] for e in elems}
        r0 = next(iter(roots))
        return all(r == r0 or r == model.inv(r0) for r in roots)
    k = len(elems)
    K = _relation_lattice(model, elems)
    if not K:
        return False
    Km = sympy.Matrix(K)
    if Km.rank() < k - 1:
        return False
    g = 0
    for rows in itertools.combinations(range(Km.rows), k - 1):
        for cols in itertools.combinations(range(k), k - 1):
            g = math.gcd(g, int(Km.extract(list(rows), list(cols)).det()))
            if g == 1:
                return True
    return g == 1


def _peripheral_subgroups(M: ManifoldData, x: Elem) -> list[list[Elem]]:
    """Peripheral subgroups (as generator lists) containing x; abelian models only."""
    if not M.pi1.is_abelian:
        return []
    return [list(t) for t in M.boundary_tori if _in_subgroup(M.pi1, list(t), x)]


def explain_reduction(M: ManifoldData, d: GeneratorDescriptor) -> str | None:
    """Reason the generator's image vanishes, or None if no rule applies."""
    model = M.pi1
    if d.kind == DELTA:
        a, b = d.pair
        g = d.coset.g
        if M.flags.cyclic_pi1:
            return "cyclic pi1: band relations vanish"
        if generate_cyclic(model, [a.rep, b.rep, g]):
            return "a, b and g lie in a common cyclic subgroup (R1)"
        for x in (a.rep, b.rep):
            for P in _peripheral_subgroups(M, x):
                if _in_subgroup(model, P, g):
                    return "band runs in a peripheral torus subgroup (R2)"
        return None
    if d.kind == THETA:
        if M.flags.surface_product:
            return "surface times interval: self-homotopy relations vanish"
        if d.sphere is None and d.h is not None:
            if M.flags.pi2_zero and model.cyclic_subgroup_member(d.a.rep, d.h)[0]:
                return "h lies in the cyclic part <a>_c and pi2 = 0"
            if any(_in_subgroup(model, P, d.h) for P in _peripheral_subgroups(M, d.a.rep)):
                return "h lies in a peripheral subgroup containing a"
    return None


def reduce_structure_set(M: ManifoldData, gens: Sequence[GeneratorDescriptor]):
    """Split generators into (kept, dropped-with-reason)."""
    kept, dropped = [], []
    for d in gens:
        why = explain_reduction(M, d)
        if why is None:
            kept.append(d)
        else:
            dropped.append((d, why))
    return kept, dropped


# -- presentation matrices -----------------------------------------------------------

@dataclass
class RowProvenance:
    alpha: WrapClass
    descriptor: GeneratorDescriptor
    source: str

    def describe(self) -> str:
        return f"{self.alpha}: {self.descriptor.describe()} ({self.source})"


@dataclass
class PresentationMatrix:
    model: GroupModel
    mode: str
    columns: list
    rows: list
    provenance: list
    incomplete: list = field(default_factory=list)
    dropped: list = field(default_factory=list)
    zero_rows: list = field(default_factory=list)
    bounds: Bounds = Bounds()

    def is_zero(self) -> bool:
        return not self.rows

    def r_rows(self) -> list[SkeinVector]:
        """Rows over the ungraded basis (u-powers re-expanded into trivial classes)."""
        if self.mode == R_MODE:
            return list(self.rows)
        return [from_hat(r, self.model) for r in self.rows]

    def z_zero_matrix(self) -> list[list[LaurentPoly]]:
        out = []
        for r in self.rows:
            row = []
            for c in self.columns:
                coeff = r[c]
                if isinstance(coeff, UPoly):
                    raise ValueError("z=0 matrices are taken in the ungraded mode")
                row.append(specialize(coeff, None, 0))
            out.append(row)
        return out

    def to_table(self) -> str:
        lines = [f"columns ({len(self.columns)}): " + "  ".join(str(c) for c in self.columns)]
        for i, (r, p) in enumerate(zip(self.rows, self.provenance)):
            lines.append(f"r{i}: {r}")
            lines.append(f"    from {p.describe()}")
        if self.zero_rows:
            lines.append(f"zero rows: {len(self.zero_rows)}")
        for d, why in self.dropped:
            lines.append(f"dropped {d.alpha}: {d.describe()}: {why}")
        for alpha, d, why in self.incomplete:
            lines.append(f"INCOMPLETE {alpha}: {d.describe()}: {why}")
        return "\n".join(lines)

    def to_payload(self) -> dict:
        return {
            "mode": self.mode,
            "columns": [str(c) for c in self.columns],
            "rows": [[[str(k), str(c)] for k, c in r.items()] for r in self.rows],
            "provenance": [p.describe() for p in self.provenance],
            "dropped": [f"{d.alpha}: {d.describe()}: {why}" for d, why in self.dropped],
            "incomplete": [f"{a}: {d.describe()}: {why}" for a, d, why in self.incomplete],
        }


def _catalog_extras(M: ManifoldData, alpha: WrapClass, specs) -> list[GeneratorDescriptor]:
    out = []
    for sp in specs:
        if sp.alpha != alpha:
            continue
        if isinstance(sp, SelfHomotopySpec):
            out.append(GeneratorDescriptor(THETA, alpha, a=sp.component, h=sp.h, sphere=sp.h2_class,
                                           spec=sp, label=sp.label or "spec"))
        elif isinstance(sp, BandSpec):
            out.append(GeneratorDescriptor(DELTA, alpha, pair=sp.pair, coset=CosetRep(sp.g, sp.pair[0].rep, sp.pair[1].rep),
                                           spec=sp, label=sp.label or "spec"))
    return out


def generator_row(M: ManifoldData, d: GeneratorDescriptor) -> tuple[SkeinVector, str]:
    """(row, source) for a descriptor; raises MissingEventData when no data exists."""
    alpha = d.alpha
    if d.kind == SPHERE:
        return theta_sphere_generator(M, alpha, d.sphere), "default"
    if d.kind == THETA:
        if isinstance(d.spec, SelfHomotopySpec):
            return theta_generator(M, alpha, d.spec), "spec"
        events = default_theta_events(M, alpha, d.a, d.h, d.sphere)
        sp = SelfHomotopySpec(alpha, d.a, events, d.h, d.sphere)
        return theta_generator(M, alpha, sp), "default"
    if isinstance(d.spec, BandSpec):
        return delta_generator(M, alpha, d.pair, d.coset.g, d.spec.events), "spec"
    return delta_generator(M, alpha, d.pair, d.coset.g), "default"


def assemble_presentation(M: ManifoldData, seeds: Iterable[WrapClass], mode: str = R_MODE,
                          bounds: Bounds | None = None, specs: Sequence = ()) -> PresentationMatrix:
    bounds = bounds or Bounds()
    model = M.pi1
    closure = skein_closure(seeds, model, bounds.conj_bound)
    if mode == R_MODE:
        alphas = sorted(closure.members)
    elif mode == RHAT_MODE:
        alphas = sorted({a.nontrivial_part() for a in closure.members})
    else:
        raise ValueError(f"unknown mode {mode!r}")
    extra = list(M.theta_specs) + list(M.delta_specs) + list(specs)
    rows, prov, incomplete, dropped_all, zero = [], [], [], [], []
    for alpha in alphas:
        gens = structure_set(M, alpha, mode, bounds) + _catalog_extras(M, alpha, extra)
        kept, dropped = reduce_structure_set(M, gens)
        dropped_all += dropped
        for d in kept:
            try:
                row, source = generator_row(M, d)
            except MissingEventData as e:
                incomplete.append((alpha, d, str(e)))
                continue
            if mode == RHAT_MODE and d.kind != SPHERE:
                row = to_hat(row)
            if row.is_zero():
                zero.append(RowProvenance(alpha, d, source))
                continue
            rows.append(row)
            prov.append(RowProvenance(alpha, d, source))
    cols = set(alphas)
    for r in rows:
        cols |= {k for k in r.support() if isinstance(k, WrapClass)}
    return PresentationMatrix(model, mode, sorted(cols), rows, prov, incomplete, dropped_all, zero, bounds)


# -- torsion certificates ----------------------------------------------------------------

_q, _z, _u = sympy.symbols("q z u")


def _to_poly_exprs(coeffs: Sequence) -> tuple[list, int]:
    """Polynomial sympy expressions p_i with coeff_i = p_i * q^(-shift)."""
    mons = []
    for c in coeffs:
        up = c if isinstance(c, UPoly) else UPoly(c)
        mons.append([(ku, kz, e, v) for ku, rp in up.items() for kz, lp in rp.items() for e, v in lp.items()])
    shift = -min((m[2] for ms in mons for m in ms), default=0)
    exprs = [sum((v * _u**ku * _z**kz * _q**(e + shift) for ku, kz, e, v in ms), sympy.Integer(0)) for ms in mons]
    return exprs, shift


def _from_expr(expr, shift: int = 0) -> UPoly:
    poly = sympy.Poly(sympy.expand(expr), _q, _z, _u)
    acc: dict = {}
    for (eq, ez, eu), v in poly.terms():
        if v.q != 1:
            raise ValueError("non-integral coefficient")
        acc.setdefault(eu, {}).setdefault(ez, {})[eq - shift] = int(v)
    return UPoly({ku: RPoly({kz: LaurentPoly(t) for kz, t in zs.items()}) for ku, zs in acc.items()})


def _narrow(p: UPoly):
    return p.to_rpoly() if p.degree <= 0 else p


def row_content(row: SkeinVector) -> tuple[object, SkeinVector]:
    """(c, w) with row = c * w, c the non-unit content (up to +-q^k)."""
    keys = row.keys()
    exprs, shift = _to_poly_exprs([row[k] for k in keys])
    c = sympy.Poly(sympy.gcd_list(exprs) if len(exprs) > 1 else exprs[0], _q, _z, _u)
    # remove the unit part: powers of q and the sign
    cexpr = c.as_expr()
    qpow = min(m[0] for m in c.monoms())
    cexpr = sympy.expand(cexpr / _q**qpow)
    if sympy.Poly(cexpr, _q, _z, _u).LC() < 0:
        cexpr = -cexpr
    w = []
    for k, e in zip(keys, exprs):
        quo, rem = sympy.div(sympy.Poly(e, _q, _z, _u), sympy.Poly(cexpr, _q, _z, _u))
        assert rem.is_zero
        w.append((k, _narrow(_from_expr(quo.as_expr(), shift))))
    return _narrow(_from_expr(cexpr)), SkeinVector(w)


@dataclass
class TorsionCertificate:
    found: bool
    row_index: int | None = None
    alpha: WrapClass | None = None
    factor: object = None
    witness: SkeinVector | None = None
    method: str = ""
    detail: str = ""

    def lines(self) -> list[str]:
        if not self.found:
            return ["torsion certificate: NOT-FOUND" + (f" ({self.detail})" if self.detail else "")]
        return [
            f"torsion certificate: row r{self.row_index} from {self.alpha}",
            f"  ({self.factor}) * w = 0 with w = {self.witness}",
            f"  w is nonzero by {self.method}: {self.detail}",
        ]


def augmentation(v: SkeinVector) -> dict:
    """Image under q -> 1, z -> 0 (u-powers re-expanded first)."""
    out = {}
    for k, c in v.items():
        if isinstance(c, UPoly):
            raise ValueError("expand u-graded vectors before augmenting")
        val = specialize(c, 1, 0)
        if val:
            out[k] = int(val)
    return out


def linking_image(M: ManifoldData, v: SkeinVector) -> dict:
    """z -> 0 image, each coefficient reduced modulo q^{2 lambda} - 1 of its class."""
    out = {}
    for k, c in v.items():
        lp = specialize(c, None, 0)
        if not lp:
            continue
        lam = lambda_alpha(M, k)
        if lam:
            # exponents modulo 2*lam
            acc: dict = {}
            for e, x in lp.items():
                acc[e % (2 * lam)] = acc.get(e % (2 * lam), 0) + x
            lp = LaurentPoly(acc)
        if lp:
            out[k] = (lam, lp)
    return out


def certify_row(row: SkeinVector, M: ManifoldData | None = None, model: GroupModel | None = None):
    """Split row = c * w and show w != 0 in the skein module; None if that fails.

    Since the row is a relation, c * w = 0 there, so a nonzero w is torsion.
    """
    if row.is_zero():
        return None
    if any(isinstance(c, UPoly) for _, c in row.items()):
        if model is None:
            raise ValueError("u-graded rows need the group model to re-expand")
        row = from_hat(row, model)
    c, w = row_content(row)
    if c.is_unit():
        return None
    aug = augmentation(w)
    if aug:
        detail = ", ".join(f"{v}*{k}" for k, v in aug.items())
        return c, w, "augmentation q->1, z->0", detail
    if M is not None:
        try:
            img = linking_image(M, w)
        except UnsupportedModel:
            img = {}
        if img:
            detail = ", ".join(f"({lp})*{k} with lambda={lam}" for k, (lam, lp) in img.items())
            return c, w, "z->0 image in the linking module", detail
    return None


def torsion_certificates(P: PresentationMatrix, alpha: WrapClass | None = None,
                         M: ManifoldData | None = None) -> list[TorsionCertificate]:
    out = []
    for i, (r, prov) in enumerate(zip(P.r_rows(), P.provenance)):
        if alpha is not None and prov.alpha != alpha:
            continue
        found = certify_row(r, M)
        if found is not None:
            c, w, method, detail = found
            out.append(TorsionCertificate(True, i, prov.alpha, c, w, method, detail))
    return out


def torsion_certificate(P: PresentationMatrix, alpha: WrapClass | None = None,
                        M: ManifoldData | None = None) -> TorsionCertificate:
    """First certificate among the rows (restricted to rows from ``alpha`` if given)."""
    found = torsion_certificates(P, alpha, M)
    if found:
        return found[0]
    return TorsionCertificate(False, detail="no row with a non-unit content and a visibly nonzero quotient")


# -- Smith normal form over Q[q] ------------------------------------------------------------

def _qpoly(lp: LaurentPoly, shift: int):
    return sympy.Poly({(e + shift,): v for e, v in lp.items()} or {(0,): 0}, _q, domain="QQ")


def _normalize_invariant(p) -> LaurentPoly:
    if p.is_zero:
        return LaurentPoly()
    _, prim = p.clear_denoms()
    prim = prim.set_domain("ZZ").primitive()[1]
    if prim.LC() < 0:
        prim = -prim
    terms = {m[0]: int(v) for m, v in prim.terms()}
    low = min(terms)
    return LaurentPoly({e - low: v for e, v in terms.items()})


def smith_normal_form_q(Mx: Sequence[Sequence]) -> list[LaurentPoly]:
    """Diagonal invariants of a matrix over Z[q^{+-1}], computed over Q[q^{+-1}].

    Entries are normalized to primitive integer polynomials with positive
    leading coefficient and no factor of q; zero invariants come last.
    """
    rows = [list(map(LaurentPoly.coerce, r)) for r in Mx]
    if not rows or not rows[0]:
        return []
    m, n = len(rows), len(rows[0])
    A = []
    for r in rows:
        shift = -min((lp.min_exp for lp in r if lp), default=0)
        A.append([_qpoly(lp, shift) for lp in r])
    diag = []
    for t in range(min(m, n)):
        nz = [(A[i][j].degree(), i, j) for i in range(t, m) for j in range(t, n) if not A[i][j].is_zero]
        if not nz:
            break
        _, i0, j0 = min(nz)
        A[t], A[i0] = A[i0], A[t]
        for r in A:
            r[t], r[j0] = r[j0], r[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                if not A[i][t].is_zero:
                    quo, rem = A[i][t].div(A[t][t])
                    A[i] = [x - quo * y for x, y in zip(A[i], A[t])]
                    if not rem.is_zero:
                        A[t], A[i] = A[i], A[t]
                        changed = True
            for j in range(t + 1, n):
                if not A[t][j].is_zero:
                    quo, rem = A[t][j].div(A[t][t])
                    for r in A:
                        r[j] = r[j] - quo * r[t]
                    if not rem.is_zero:
                        for r in A:
                            r[t], r[j] = r[j], r[t]
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if not A[i][j].rem(A[t][t]).is_zero), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
        diag.append(A[t][t])
    out = [_normalize_invariant(p) for p in diag]
    return out + [LaurentPoly()] * (min(m, n) - len(out))
