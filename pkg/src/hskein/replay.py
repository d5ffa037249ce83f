"""Replays of the worked examples against stored expected values.

Each replay returns a :class:`Replay` with pass/fail and printable lines;
``hskein examples`` runs them from the command line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .catalog import catalog_entry, lens_space
from .intersect import freeness_verdict, lambda_alpha, linking_module
from .paths import delta_loop, delta_loop_raw
from .present import (
    Bounds, DELTA, certify_row, delta_tilde, reduce_structure_set, structure_set,
    theta_generator,
)
from .ring import LaurentPoly, RPoly
from .wrap import SkeinVector, WrapClass, parse_wrap


@dataclass
class Replay:
    name: str
    title: str
    checks: list = field(default_factory=list)  # (label, ok, detail)

    def check(self, label: str, ok: bool, detail: str = ""):
        self.checks.append((label, bool(ok), detail))
        return ok

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def lines(self) -> list[str]:
        out = [f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.title}"]
        for label, ok, detail in self.checks:
            out.append(f"  {'ok ' if ok else 'BAD'} {label}" + (f": {detail}" if detail else ""))
        return out


def _vec(pairs) -> SkeinVector:
    return SkeinVector([(k, RPoly.parse(c)) for k, c in pairs])


def replay_delta_loop() -> Replay:
    r = Replay("5", "local loop around two double points")
    raw = delta_loop_raw()
    want = _vec([("K0-", "q"), ("K-0", "-q"), ("K0+", "-q^-1"), ("K+0", "q^-1")])
    r.check("raw loop value", raw == want, str(raw))
    un = delta_loop(False)
    r.check("unpaired expansion vanishes", un.is_zero(), str(un))
    pa = delta_loop(True)
    want_p = _vec([("K0o", "q - q^-1"), ("Ko0", "q^-1 - q")])
    r.check("paired value (q - q^-1)(K0o - Ko0)", pa == want_p, str(pa))
    return r


def replay_theta_t3() -> Replay:
    r = Replay("6.6", "self-homotopy relations on the 3-torus")
    M = catalog_entry("t3")
    m = M.pi1
    alpha = parse_wrap(m, "<b1, b2, b3>")
    A, B = parse_wrap(m, "<b1*b2, b3>"), parse_wrap(m, "<b1*b3, b2>")
    specs = {s.label: s for s in M.theta_specs}
    th = theta_generator(M, alpha, specs["h"])
    want = SkeinVector({alpha: RPoly.parse("q^2 - 1"), A: RPoly.parse("z*q")})
    r.check("Theta(h) = (q^2-1)alpha + zq<b1b2,b3>", th == want, str(th))
    th2 = theta_generator(M, alpha, specs["h'"])
    want2 = SkeinVector({A: RPoly.parse("z*q"), B: RPoly.parse("-z*q")})
    r.check("Theta(h') = zq(<b1b2,b3> - <b1b3,b2>)", th2 == want2, str(th2))
    cert = certify_row(th2, M)
    ok = cert is not None and cert[1].equal_up_to_unit(SkeinVector({A: 1, B: -1}))
    r.check("<b1b2,b3> - <b1b3,b2> is torsion", ok, cert[3] if cert else "no certificate")
    return r


def replay_delta_t3() -> Replay:
    r = Replay("6-delta", "band relation on the 3-torus")
    M = catalog_entry("t3")
    m = M.pi1
    spec = M.delta_specs[0]
    dt = delta_tilde(M, spec.alpha, spec.pair, spec.g, spec.events)
    one_b2, b2 = parse_wrap(m, "<1, b2>"), parse_wrap(m, "<b2>")
    want = SkeinVector({one_b2: RPoly.parse("1 - q^2"), b2: RPoly.parse("-q*z")})
    ratio = dt.unit_ratio(want)
    r.check("Delta~ = (1-q^2)<1,b2> - qz<b2> up to a unit", ratio is not None,
            f"{dt} = {ratio[0]}*q^{ratio[1]} * expected" if ratio else str(dt))
    lam = lambda_alpha(M, one_b2)
    r.check("lambda<1,b2> = 0", lam == 0, str(lam))
    row = dt.scale(RPoly.z() * RPoly(LaurentPoly({-1: 1, 1: -1})))
    cert = certify_row(row, M)
    r.check("certified through the linking module", cert is not None and "linking" in cert[2],
            cert[3] if cert else "no certificate")
    return r


def extract_etas(row: SkeinVector, first: WrapClass, second: WrapClass):
    """(eta1, eta2) if row = zq(q^eta1 first - q^eta2 second) + z^2*tail, else None."""
    linear = {}
    for k, c in row.items():
        if c.coeff(0):
            return None
        if c.coeff(1):
            linear[k] = c.coeff(1)
    if set(linear) != {first, second}:
        return None
    out = []
    for k, sign in ((first, 1), (second, -1)):
        lp = linear[k]
        if len(lp.terms) != 1:
            return None
        (e, v), = lp.items()
        if v != sign:
            return None
        out.append(e - 1)
    return tuple(out)


def replay_sphere_s2s1() -> Replay:
    r = Replay("6.8", "sphere relation on S2 x S1")
    M = catalog_entry("s2xs1")
    m = M.pi1
    spec = M.theta_specs[0]
    row = theta_generator(M, spec.alpha, spec)
    etas = extract_etas(row, parse_wrap(m, "<a^2, a^-1>"), parse_wrap(m, "<1, a>"))
    r.check("row = zq(q^eta1 <a^2,a^-1> - q^eta2 <1,a>) + z^2 tail", etas is not None,
            f"{row}; eta = {etas}")
    r.check("epsilon(h) = 0", spec.epsilon == 0)
    cert = certify_row(row, M)
    r.check("torsion certified", cert is not None, cert[3] if cert else "no certificate")
    return r


def replay_linking() -> Replay:
    r = Replay("1.2", "linking module desk checks")
    T = catalog_entry("t3")
    S = catalog_entry("s2xs1")
    for M, lit, want in ((T, "<b1, b2, b3>", 1), (T, "<1, b2>", 0), (S, "<a, a, a^-1>", 2)):
        lam = lambda_alpha(M, parse_wrap(M.pi1, lit))
        r.check(f"lambda{lit} on {M.name} = {want}", lam == want, str(lam))
    bad = []
    for p in range(2, 8):
        for q in range(1, p):
            try:
                L = lens_space(p, q)
            except ValueError:
                continue
            classes = [L.pi1.conj_class((k,)) for k in range(p)]
            alphas = [WrapClass(c, L.pi1) for n in range(1, 4) for c in itertools.combinations_with_replacement(classes, n)]
            if not all(s.is_free for s in linking_module(L, alphas)):
                bad.append(L.name)
    r.check("lens spaces L(p,q), p < 8: all summands free", not bad, ", ".join(bad))
    return r


def nonabelian_witness(genus: int = 1, bound: int = 1):
    """(M, alpha, pair, g, Delta~) for alpha = <x, x^-1, y>, pair (x, x^-1), band g = y.

    The third component keeps alpha minus the pair out of the trivial classes,
    so the generator is not excluded from the structure set.
    """
    M = catalog_entry(f"fxi:{genus}")
    m = M.pi1
    x, y = m.names[0], m.names[1]
    alpha = parse_wrap(m, f"<{x}, {x}^-1, {y}>")
    pair = (m.class_of(x), m.class_of(f"{x}^-1"))
    g = m.parse(y)
    return M, alpha, pair, g, delta_tilde(M, alpha, pair, g)


def replay_verdicts() -> Replay:
    r = Replay("1.1", "freeness verdicts")
    expect = {"s3": "FREE", "d3": "FREE", "s1xd2": "FREE", "t2xi": "FREE",
              "t3": "TORSION", "s2xs1": "TORSION", "fxi:1": "TORSION", "fxi:2": "TORSION"}
    for name, want in expect.items():
        v = freeness_verdict(catalog_entry(name))
        r.check(f"{name}: H {want}", v.h_verdict == want, v.h_clause)
    M, alpha, pair, g, dt = nonabelian_witness()
    m = M.pi1
    merged = m.merge_classes(pair[0].rep, g, pair[1].rep)
    r.check("(x y x^-1 y^-1) is not trivial", not merged.is_trivial, str(merged))
    gens = structure_set(M, alpha, bounds=Bounds(1, 1))
    kept, _ = reduce_structure_set(M, gens)
    survives = any(d.kind == DELTA and d.coset.g == g for d in kept)
    r.check("band generator g = y survives the reductions", survives)
    row = dt.scale(RPoly.z() * RPoly(LaurentPoly({-1: 1, 1: -1})))
    cert = certify_row(row, M)
    r.check("non-abelian torsion witness certified", cert is not None, f"Delta~ = {dt}")
    return r


REPLAYS = {
    "5": replay_delta_loop,
    "6.6": replay_theta_t3,
    "6-delta": replay_delta_t3,
    "6.8": replay_sphere_s2s1,
    "1.2": replay_linking,
    "1.1": replay_verdicts,
}


def run(name: str) -> list[Replay]:
    if name == "all":
        return [f() for f in REPLAYS.values()]
    if name not in REPLAYS:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(REPLAYS)} or all")
    return [REPLAYS[name]()]
