"""Scenario files: schema validation and exact decoding of payloads.

A file holds either one scenario object or ``{"scenarios": [...]}``.  Each
scenario has an ``id``, an optional ``kind`` (defaults to the subcommand) and
its payload, either inline or under ``"payload"``.  Every number that is not
a plain integer count travels as a string such as ``"3/2"`` or
``"1 + 1/2*sqrt(7)"``.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema

from .bundles import Curve, HNProfile, SplitBundle
from .chow import DivClass
from .ns_cone import NSClass, NSLattice
from .numbers import ParseError, format_field, parse_field, parse_rational
from .rationalization import EffectivityInstance

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KINDS = ("classify", "hn", "frobsplit", "cone", "rationalize", "counterexample")


class ScenarioError(ValueError):
    """Schema or decoding failure, located by scenario id and JSON pointer."""

    def __init__(self, message: str, scenario_id: str | None = None, pointer: str = ""):
        self.scenario_id = scenario_id
        self.pointer = pointer
        where = f"{scenario_id or '?'} at {pointer or '/'}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class Scenario:
    id: str
    kind: str
    payload: dict
    decoded: dict


_NUM = {"type": "string"}
_INT = {"type": "integer"}
_POS = {"type": "integer", "minimum": 1}

_BASE = {
    "type": "object",
    "properties": {
        "genus": {"type": "integer", "minimum": 0},
        "char": {"type": "integer", "minimum": 0},
        "over_fpbar": {"type": "boolean"},
    },
    "required": ["genus", "char"],
    "additionalProperties": False,
}
_BUNDLE = {
    "type": "object",
    "properties": {
        "split": {"type": "array", "items": _INT, "minItems": 1},
        "hn": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "prefixItems": [_POS, _NUM], "minItems": 2, "maxItems": 2},
        },
    },
    "minProperties": 1,
    "maxProperties": 1,
    "additionalProperties": False,
}
_DIVISOR = {
    "type": "object",
    "properties": {"theta": _NUM, "fiber": _NUM},
    "required": ["theta", "fiber"],
    "additionalProperties": False,
}
_LATTICE = {
    "type": "object",
    "properties": {
        "rho": {"type": "integer", "minimum": 3},
        "anchor_square": _POS,
        "negatives": {"type": "array", "items": _POS},
    },
    "required": ["rho", "anchor_square", "negatives"],
    "additionalProperties": False,
}
_CLASS = {
    "type": "object",
    "properties": {"coords": {"type": "array", "items": _NUM, "minItems": 1}},
    "required": ["coords"],
    "additionalProperties": False,
}


def _obj(properties: dict, required: list[str]) -> dict:
    return {"type": "object", "properties": properties, "required": required,
            "additionalProperties": False}


SCHEMAS = {
    "classify": _obj({"base": _BASE, "bundle": _BUNDLE, "divisor": _DIVISOR,
                      "nakai": {"type": "boolean"}, "pullback": _POS},
                     ["base", "bundle", "divisor"]),
    "hn": _obj({"base": _BASE, "bundle": _BUNDLE, "sym": _POS,
                "frobenius": {"type": "integer", "minimum": 0}, "cover": _POS},
               ["bundle"]),
    "frobsplit": _obj({"base": _BASE, "bundle": _BUNDLE}, ["base", "bundle"]),
    "cone": _obj({"lattice": _LATTICE, "class": _CLASS, "other": _CLASS}, ["lattice", "class"]),
    "rationalize": _obj({
        "d_prime": {"type": "array", "items": _NUM},
        "principals": {"type": "array", "items": {"type": "array", "items": _NUM}},
        "coeffs": {"type": "array", "items": _NUM},
    }, ["d_prime", "principals", "coeffs"]),
    "counterexample": _obj({
        "lattice": _LATTICE,
        "t": _NUM,
        "refute": _obj({"gammas": {"type": "array", "items": _CLASS},
                        "c": {"type": "array", "items": _NUM}}, ["gammas", "c"]),
    }, ["lattice", "t"]),
}


def _pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def load_document(path: str | Path) -> Any:
    path = Path(path)
    raw = path.read_bytes()
    try:
        if path.suffix.lower() == ".toml":
            return tomllib.loads(raw.decode("utf-8"))
        return json.loads(raw.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ScenarioError(f"cannot parse {path.name}: {exc}") from None


class _Decoder:
    """Build domain objects from validated payload dicts, tracking the pointer."""

    def __init__(self, sid: str, prefix: list):
        self.sid = sid
        self.prefix = prefix

    def fail(self, path: list, exc: Exception) -> ScenarioError:
        return ScenarioError(str(exc), self.sid, _pointer(self.prefix + path))

    def number(self, value, path, rational=False):
        try:
            return parse_rational(value) if rational else parse_field(value)
        except ParseError as exc:
            raise self.fail(path, exc) from None

    def build(self, path, factory, *args, **kwargs):
        try:
            return factory(*args, **kwargs)
        except (ValueError, TypeError) as exc:
            raise self.fail(path, exc) from None

    def base(self, obj, path):
        over = obj.get("over_fpbar", obj["char"] > 0)
        return self.build(path, Curve, obj["genus"], obj["char"], over)

    def bundle(self, obj, path):
        if "split" in obj:
            return self.build(path + ["split"], SplitBundle, obj["split"])
        pieces = [(r, self.number(d, path + ["hn", i, 1], rational=True))
                  for i, (r, d) in enumerate(obj["hn"])]
        return self.build(path + ["hn"], HNProfile, pieces)

    def divisor(self, obj, path):
        return DivClass(self.number(obj["theta"], path + ["theta"]),
                        self.number(obj["fiber"], path + ["fiber"]))

    def lattice(self, obj, path):
        return self.build(path, NSLattice, obj["rho"], obj["anchor_square"], obj["negatives"])

    def ns_class(self, obj, path, lattice=None):
        coords = [self.number(c, path + ["coords", i]) for i, c in enumerate(obj["coords"])]
        if lattice is not None and len(coords) != lattice.rho:
            raise self.fail(path + ["coords"], ValueError(f"expected {lattice.rho} coordinates"))
        return self.build(path, NSClass, coords)


def _decode(kind: str, payload: dict, dec: _Decoder) -> dict:
    out: dict = {}
    if "base" in payload:
        out["base"] = dec.base(payload["base"], ["base"])
    if "bundle" in payload:
        out["bundle"] = dec.bundle(payload["bundle"], ["bundle"])
    if kind == "classify":
        out["divisor"] = dec.divisor(payload["divisor"], ["divisor"])
        out["nakai"] = payload.get("nakai", False)
        out["pullback"] = payload.get("pullback")
    elif kind == "hn":
        out.update({k: payload.get(k) for k in ("sym", "frobenius", "cover")})
    elif kind == "cone":
        L = out["lattice"] = dec.lattice(payload["lattice"], ["lattice"])
        out["class"] = dec.ns_class(payload["class"], ["class"], L)
        if "other" in payload:
            out["other"] = dec.ns_class(payload["other"], ["other"], L)
    elif kind == "rationalize":
        d_prime = [dec.number(x, ["d_prime", i], rational=True)
                   for i, x in enumerate(payload["d_prime"])]
        principals = [[dec.number(x, ["principals", j, i], rational=True) for i, x in enumerate(p)]
                      for j, p in enumerate(payload["principals"])]
        coeffs = [dec.number(x, ["coeffs", j]) for j, x in enumerate(payload["coeffs"])]
        out["instance"] = dec.build([], EffectivityInstance, d_prime, principals, coeffs)
    elif kind == "counterexample":
        L = out["lattice"] = dec.lattice(payload["lattice"], ["lattice"])
        out["t"] = dec.number(payload["t"], ["t"], rational=True)
        if "refute" in payload:
            ref = payload["refute"]
            out["gammas"] = [dec.ns_class(g, ["refute", "gammas", i], L)
                             for i, g in enumerate(ref["gammas"])]
            out["c"] = [dec.number(x, ["refute", "c", i]) for i, x in enumerate(ref["c"])]
    return out


def parse_document(doc: Any, default_kind: str | None = None) -> list[Scenario]:
    if not isinstance(doc, dict):
        raise ScenarioError("top level must be an object")
    if "scenarios" in doc:
        entries = doc["scenarios"]
        if not isinstance(entries, list):
            raise ScenarioError("'scenarios' must be a list", pointer="/scenarios")
        prefixes = [["scenarios", i] for i in range(len(entries))]
    else:
        entries, prefixes = [doc], [[]]

    out: list[Scenario] = []
    seen: set[str] = set()
    for index, (entry, prefix) in enumerate(zip(entries, prefixes)):
        if not isinstance(entry, dict):
            raise ScenarioError("scenario must be an object", pointer=_pointer(prefix))
        sid = entry.get("id", f"s{index}")
        if not isinstance(sid, str) or not sid:
            raise ScenarioError("id must be a nonempty string", pointer=_pointer(prefix + ["id"]))
        if sid in seen:
            raise ScenarioError("duplicate scenario id", sid, _pointer(prefix + ["id"]))
        seen.add(sid)
        kind = entry.get("kind", default_kind)
        if kind not in KINDS:
            raise ScenarioError(f"unknown kind {kind!r}", sid, _pointer(prefix + ["kind"]))
        if default_kind is not None and kind != default_kind:
            raise ScenarioError(f"kind {kind!r} does not match subcommand {default_kind!r}",
                                sid, _pointer(prefix + ["kind"]))
        if "payload" in entry:
            payload, ppath = entry["payload"], prefix + ["payload"]
        else:
            payload = {k: v for k, v in entry.items() if k not in ("id", "kind")}
            ppath = prefix
        validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
        errors = sorted(validator.iter_errors(payload), key=lambda e: list(e.absolute_path))
        if errors:
            err = errors[0]
            raise ScenarioError(err.message, sid, _pointer(ppath + list(err.absolute_path)))
        decoded = _decode(kind, payload, _Decoder(sid, ppath))
        out.append(Scenario(sid, kind, payload, decoded))
    return out


def parse_scenarios(path: str | Path, default_kind: str | None = None) -> list[Scenario]:
    return parse_document(load_document(path), default_kind)


# -- canonical emission -------------------------------------------------------

def _enc_bundle(E) -> dict:
    if isinstance(E, SplitBundle):
        return {"split": list(E.degrees)}
    return {"hn": [[r, str(d)] for r, d in E.pieces]}


def _enc_class(x: NSClass) -> dict:
    return {"coords": [format_field(c) for c in x.coords]}


def _enc_lattice(L: NSLattice) -> dict:
    return {"rho": L.rho, "anchor_square": L.anchor_square, "negatives": list(L.negatives)}


def encode_payload(s: Scenario) -> dict:
    d = s.decoded
    out: dict = {}
    if "base" in d:
        c = d["base"]
        out["base"] = {"genus": c.genus, "char": c.char, "over_fpbar": c.over_fpbar}
    if "bundle" in d:
        out["bundle"] = _enc_bundle(d["bundle"])
    if s.kind == "classify":
        out["divisor"] = {"theta": format_field(d["divisor"].theta),
                          "fiber": format_field(d["divisor"].fiber)}
        if d["nakai"]:
            out["nakai"] = True
        if d["pullback"] is not None:
            out["pullback"] = d["pullback"]
    elif s.kind == "hn":
        out.update({k: d[k] for k in ("sym", "frobenius", "cover") if d[k] is not None})
    elif s.kind == "cone":
        out["lattice"] = _enc_lattice(d["lattice"])
        out["class"] = _enc_class(d["class"])
        if "other" in d:
            out["other"] = _enc_class(d["other"])
    elif s.kind == "rationalize":
        inst = d["instance"]
        out["d_prime"] = [str(x) for x in inst.d_prime]
        out["principals"] = [[str(x) for x in p] for p in inst.principals]
        out["coeffs"] = [format_field(a) for a in inst.coeffs]
    elif s.kind == "counterexample":
        out["lattice"] = _enc_lattice(d["lattice"])
        out["t"] = str(d["t"])
        if "gammas" in d:
            out["refute"] = {"gammas": [_enc_class(g) for g in d["gammas"]],
                             "c": [format_field(x) for x in d["c"]]}
    return out


def emit_document(scenarios: list[Scenario]) -> str:
    doc = {"scenarios": [{"id": s.id, "kind": s.kind, "payload": encode_payload(s)}
                         for s in scenarios]}
    return json.dumps(doc, indent=2) + "\n"
