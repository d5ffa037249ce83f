"""Manifold descriptor files (JSON) and the built-in catalog."""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

from .groups import GroupModel, GroupParseError, UnsupportedModel
from .intersect import DescriptorError, Flags, ManifoldData
from .present import BandSpec, SelfHomotopySpec, SpecEvent
from .wrap import parse_wrap

ALIASES = {"s2xs1": "s1xs2", "t2xi": "t2xi", "s1xs1xi": "t2xi"}
FIXED = ("s3", "d3", "s1xd2", "s1xs2", "t2xi", "t3")


class DescriptorParseError(ValueError):
    """Syntax error in a descriptor file, with line and column."""

    def __init__(self, origin, line, col, msg):
        super().__init__(f"{origin}:{line}:{col}: {msg}")
        self.line, self.col = line, col


_KEYS = {"name", "pi1", "b1", "b1_boundary", "h2_rank", "pairing", "torus_class", "sphere_subgroup",
         "flags", "boundary_tori", "theta_specs", "delta_specs"}


def _group(d: dict) -> GroupModel:
    if not isinstance(d, dict) or "kind" not in d:
        raise DescriptorError("pi1 must be an object with a 'kind'")
    kind = d["kind"]
    names = d.get("generators")
    if kind == "abelian":
        return GroupModel.free_abelian(int(d.get("rank", 0)), tuple(d.get("torsion", ())), names)
    if kind == "free":
        return GroupModel.free(int(d["rank"]), names)
    if kind == "cyclic":
        return GroupModel.cyclic(int(d["order"]), *(names or []))
    raise UnsupportedModel(f"group kind {kind!r} is not supported (abelian, free, cyclic)")


def _event(model, d) -> SpecEvent:
    return SpecEvent(
        int(d["sign"]),
        model.conj_class(model.parse(d["target"])) if "target" in d else None,
        model.parse(d["conjugator"]) if "conjugator" in d else None,
        parse_wrap(model, d["smoothed"]) if "smoothed" in d else None,
    )


def _theta_spec(model, d) -> SelfHomotopySpec:
    alpha = parse_wrap(model, d["alpha"])
    h2 = d.get("h2_class")
    return SelfHomotopySpec(
        alpha,
        model.conj_class(model.parse(d["component"])),
        tuple(_event(model, e) for e in d.get("events", ())),
        model.parse(d["h"]) if "h" in d else None,
        tuple(h2) if h2 is not None else None,
        d.get("label", ""),
    )


def _band_spec(model, d) -> BandSpec:
    a, b = (model.conj_class(model.parse(x)) for x in d["pair"])
    return BandSpec(
        parse_wrap(model, d["alpha"]),
        (a, b),
        model.parse(d["g"]),
        tuple(_event(model, e) for e in d.get("events", ())),
        d.get("label", ""),
    )


def descriptor_from_dict(d: dict) -> ManifoldData:
    if not isinstance(d, dict):
        raise DescriptorError("descriptor must be a JSON object")
    unknown = set(d) - _KEYS
    if unknown:
        raise DescriptorError(f"unknown keys: {', '.join(sorted(unknown))}")
    missing = {"name", "pi1", "b1", "b1_boundary", "h2_rank"} - set(d)
    if missing:
        raise DescriptorError(f"missing keys: {', '.join(sorted(missing))}")
    model = _group(d["pi1"])
    flags = d.get("flags", {})
    bad = set(flags) - {"pi2_zero", "atoroidal", "surface_product", "cyclic_pi1"}
    if bad:
        raise DescriptorError(f"unknown flags: {', '.join(sorted(bad))}")
    try:
        tori = [(model.parse(a), model.parse(b)) for a, b in d.get("boundary_tori", ())]
        thetas = [_theta_spec(model, s) for s in d.get("theta_specs", ())]
        deltas = [_band_spec(model, s) for s in d.get("delta_specs", ())]
    except GroupParseError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise DescriptorError(f"bad spec or boundary data: {e}") from None
    return ManifoldData(
        name=str(d["name"]),
        pi1=model,
        b1=int(d["b1"]),
        b1_boundary=int(d["b1_boundary"]),
        h2_rank=int(d["h2_rank"]),
        pairing=d.get("pairing", ()),
        torus_class=d.get("torus_class", ()),
        sphere_subgroup=d.get("sphere_subgroup", ()),
        flags=Flags(**{k: bool(v) for k, v in flags.items()}),
        boundary_tori=tori,
        theta_specs=thetas,
        delta_specs=deltas,
    )


def parse_descriptor(text: str, origin: str = "<descriptor>") -> ManifoldData:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise DescriptorParseError(origin, e.lineno, e.colno, e.msg) from None
    return descriptor_from_dict(d)


def _event_dict(model, e: SpecEvent) -> dict:
    out = {"sign": e.sign}
    if e.target is not None:
        out["target"] = str(e.target)
    if e.conjugator is not None:
        out["conjugator"] = model.format(e.conjugator)
    if e.smoothed is not None:
        out["smoothed"] = str(e.smoothed)
    return out


def descriptor_to_dict(M: ManifoldData) -> dict:
    model = M.pi1
    if model.kind == "cyclic":
        pi1 = {"kind": "cyclic", "order": model.torsion[0], "generators": list(model.names)}
    elif model.kind == "free":
        pi1 = {"kind": "free", "rank": model.rank, "generators": list(model.names)}
    else:
        pi1 = {"kind": "abelian", "rank": model.rank, "torsion": list(model.torsion), "generators": list(model.names)}
    return {
        "name": M.name,
        "pi1": pi1,
        "b1": M.b1,
        "b1_boundary": M.b1_boundary,
        "h2_rank": M.h2_rank,
        "pairing": [list(r) for r in M.pairing],
        "torus_class": [[list(c) for c in row] for row in M.torus_class],
        "sphere_subgroup": [list(s) for s in M.sphere_subgroup],
        "flags": {k: getattr(M.flags, k) for k in ("pi2_zero", "atoroidal", "surface_product", "cyclic_pi1")},
        "boundary_tori": [[model.format(a), model.format(b)] for a, b in M.boundary_tori],
        "theta_specs": [
            {"label": s.label, "alpha": str(s.alpha), "component": str(s.component),
             **({"h": model.format(s.h)} if s.h is not None else {}),
             **({"h2_class": list(s.h2_class)} if s.h2_class is not None else {}),
             "events": [_event_dict(model, e) for e in s.events]}
            for s in M.theta_specs
        ],
        "delta_specs": [
            {"label": s.label, "alpha": str(s.alpha), "pair": [str(s.pair[0]), str(s.pair[1])],
             "g": model.format(s.g), "events": [_event_dict(model, e) for e in s.events]}
            for s in M.delta_specs
        ],
    }


def lens_space(p: int, q: int) -> ManifoldData:
    if p < 2 or math.gcd(p, q) != 1:
        raise DescriptorError(f"L({p},{q}) needs p >= 2 and gcd(p, q) = 1")
    return ManifoldData(
        name=f"L({p},{q})",
        pi1=GroupModel.cyclic(p),
        b1=0,
        b1_boundary=0,
        h2_rank=0,
        flags=Flags(pi2_zero=True, atoroidal=True, cyclic_pi1=True),
    )


def surface_times_interval(genus: int) -> ManifoldData:
    """One-holed genus-g surface times an interval (a handlebody of genus 2g)."""
    if genus < 1:
        raise DescriptorError("genus must be >= 1")
    return ManifoldData(
        name=f"F{genus}xI",
        pi1=GroupModel.free(2 * genus),
        b1=2 * genus,
        b1_boundary=4 * genus,
        h2_rank=0,
        flags=Flags(pi2_zero=True, atoroidal=True, surface_product=True, cyclic_pi1=False),
    )


def catalog_names() -> list[str]:
    return list(FIXED) + ["lens:p:q", "fxi:g"]


def catalog_entry(name: str) -> ManifoldData:
    key = name.lower()
    if key.startswith("catalog:"):
        key = key[len("catalog:"):]
    key = ALIASES.get(key, key)
    if key.startswith("lens:"):
        parts = key.split(":")
        if len(parts) != 3:
            raise DescriptorError("lens spaces are named lens:p:q")
        return lens_space(int(parts[1]), int(parts[2]))
    if key.startswith("fxi:"):
        return surface_times_interval(int(key.split(":", 1)[1]))
    if key not in FIXED:
        raise KeyError(f"no catalog entry {name!r}; known: {', '.join(catalog_names())}")
    text = resources.files("hskein").joinpath("data", f"{key}.json").read_text()
    return parse_descriptor(text, f"catalog:{key}")


def is_catalog_name(name: str) -> bool:
    key = name.lower().removeprefix("catalog:")
    key = ALIASES.get(key, key)
    return key in FIXED or key.startswith(("lens:", "fxi:"))


def load_descriptor(source: str) -> ManifoldData:
    """A catalog name (optionally prefixed ``catalog:``) or a path to a JSON file."""
    if source.lower().startswith("catalog:") or (is_catalog_name(source) and not Path(source).exists()):
        return catalog_entry(source)
    path = Path(source)
    return parse_descriptor(path.read_text(), str(path))
