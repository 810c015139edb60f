"""Command-line batch runner.

Exit status: 0 when every scenario succeeds, 1 when some scenario failed
(details in the report), 2 when the input cannot be parsed or validated.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import checks
from .bundles import (CharZero, SplitBundle, as_profile, frobenius_pullback, h0_genus0,
                      pullback_cover, splitting_frobenius_power, sym_power)
from .fourier_motzkin import fm_feasible
from .numbers import FieldElem, MixedRadicand, format_field
from .ns_cone import (DegenerateChoice, NotBoundaryClass, ZeroClass, effective_decomposition_refuter,
                      is_boundary, nef_membership, pairing, ray_is_rational)
from .positivity import PreconditionViolated, classify, is_ample_rank2_nakai, pullback_invariance_check
from .rationalization import (IndependenceViolated, NotEffective, admissible_system,
                              normalize_instance, rationalize, zero_row_forcing)
from .scenarios import KINDS, Scenario, ScenarioError, parse_scenarios

log = logging.getLogger("divpos")

# failures that belong to one scenario and must not abort the batch
SCENARIO_ERRORS = (CharZero, MixedRadicand, PreconditionViolated, DegenerateChoice,
                   NotBoundaryClass, ZeroClass, IndependenceViolated, NotEffective,
                   ValueError, ArithmeticError)


def _profile_json(P) -> list:
    return [[r, str(d)] for r, d in P.pieces]


def run_classify(d: dict) -> dict:
    E, c, D = d["bundle"], d["base"], d["divisor"]
    out = classify(D, E, c).to_json()
    if d["nakai"]:
        if not isinstance(E, SplitBundle):
            raise PreconditionViolated("the Nakai check takes a split bundle")
        cert = is_ample_rank2_nakai(D, E, c)
        out["nakai"] = {"ample": cert.ample, "self_intersection": format_field(cert.self_intersection)}
    if d["pullback"] is not None:
        out["pullback_invariant"] = pullback_invariance_check(D, E, d["pullback"], c)
    return out


def run_hn(d: dict) -> dict:
    E = d["bundle"]
    P = as_profile(E)
    out = {"profile": _profile_json(P), "slopes": [str(s) for s in P.slopes],
           "mu_max": str(P.slopes[0]), "mu_min": str(P.slopes[-1]),
           "rank": P.rank, "degree": str(P.degree)}
    if d.get("sym") is not None:
        if not isinstance(E, SplitBundle):
            raise ValueError("symmetric powers need a split bundle")
        S = sym_power(E, d["sym"])
        out["sym"] = {"m": d["sym"], "degrees": sorted(S.degrees, reverse=True)}
    if d.get("cover") is not None:
        out["cover"] = {"n": d["cover"], "profile": _profile_json(pullback_cover(P, d["cover"]))}
    if d.get("frobenius") is not None:
        if "base" not in d:
            raise ValueError("Frobenius pullback needs a base curve")
        F = frobenius_pullback(P, d["frobenius"], d["base"])
        out["frobenius"] = {"m": d["frobenius"], "profile": _profile_json(F)}
    if isinstance(E, SplitBundle) and "base" in d and d["base"].genus == 0:
        out["h0"] = h0_genus0(E)
    return out


def run_frobsplit(d: dict) -> dict:
    P, c = as_profile(d["bundle"]), d["base"]
    m = splitting_frobenius_power(P, c)
    return {"m": m, "slopes": [str(s) for s in P.slopes], "genus": c.genus, "char": c.char}


def run_cone(d: dict) -> dict:
    L, x = d["lattice"], d["class"]
    out = {
        "self_pairing": format_field(pairing(L, x, x)),
        "anchor_pairing": format_field(pairing(L, x, L.anchor)),
        "nef": nef_membership(L, x),
        "boundary": is_boundary(L, x),
        "ray_rational": None if x.is_zero() else ray_is_rational(x),
    }
    if "other" in d:
        out["pairing_with_other"] = format_field(pairing(L, x, d["other"]))
    return out


def run_rationalize(d: dict) -> dict:
    inst = d["instance"]
    a = rationalize(inst)
    norm = normalize_instance(inst)
    feasible, witness = fm_feasible(admissible_system(inst)) if inst.principals else (True, ())
    return {
        "rationalized": [str(x) for x in a],
        "basis": [format_field(b) for b in norm.basis],
        "coords": norm.coords,
        "forced_slots": zero_row_forcing(norm.instance),
        "combined": [format_field(v) for v in inst.combined(a)],
        "fm_feasible": feasible,
        "fm_witness": None if witness is None else [format_field(v) for v in witness],
    }


def run_counterexample(d: dict) -> dict:
    from .ns_cone import build_counterexample, support_functional

    L = d["lattice"]
    D, cert = build_counterexample(L, d["t"])
    out = {
        "class": [format_field(c) for c in D.coords],
        "radicand": next((c.radicand for c in D.coords if c.radicand), None),
        "certificate": {"nef": cert.nef, "boundary": cert.boundary,
                        "ray_rational": cert.ray_rational,
                        "self_pairing": format_field(cert.self_pairing)},
        "functional_at_class": format_field(support_functional(L, D)(D)),
    }
    if "gammas" in d:
        ref = effective_decomposition_refuter(L, D, d["gammas"], d["c"])
        out["refutation"] = {"refuted": ref.refuted, "step": ref.step, "detail": ref.detail,
                             "functional_values": [format_field(v) for v in ref.functional_values]}
    return out


RUNNERS = {
    "classify": run_classify,
    "hn": run_hn,
    "frobsplit": run_frobsplit,
    "cone": run_cone,
    "rationalize": run_rationalize,
    "counterexample": run_counterexample,
}


def run_scenario(s: Scenario) -> dict:
    log.info("running %s (%s)", s.id, s.kind)
    try:
        result = RUNNERS[s.kind](s.decoded)
    except SCENARIO_ERRORS as exc:
        log.debug("scenario %s failed", s.id, exc_info=True)
        return {"id": s.id, "kind": s.kind, "ok": False,
                "error": {"type": type(exc).__name__, "message": str(exc)}}
    return {"id": s.id, "kind": s.kind, "ok": True, "result": result}


def _text_lines(prefix: str, value) -> list[str]:
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            lines += _text_lines(f"{prefix}.{k}" if prefix else k, v)
        return lines
    return [f"  {prefix} = {json.dumps(value, ensure_ascii=False)}"]


def render(command: str, records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"command": command, "results": records}, indent=2,
                          ensure_ascii=False) + "\n"
    lines = []
    for rec in records:
        status = "ok" if rec["ok"] else "FAILED"
        lines.append(f"[{rec['id']}] {rec.get('kind', command)}: {status}")
        body = rec.get("result") if rec["ok"] else rec.get("error")
        lines += _text_lines("", body or {})
    return "\n".join(lines) + "\n"


def run_selftest() -> list[dict]:
    records = []
    for name, fn in checks.SUITES.items():
        log.info("selftest suite %s", name)
        res = fn()
        records.append({"id": name, "kind": "selftest", "ok": res.ok,
                        "result" if res.ok else "error": {"cases": res.cases,
                                                          "failures": res.failures}})
    return records


def _configure_logging() -> None:
    level = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("DIVPOS_LOG", "quiet").lower(), logging.ERROR)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divpos",
        description="Exact positivity of divisor classes on projective bundles and NS lattices.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in KINDS + ("selftest",):
        p = sub.add_parser(name)
        if name != "selftest":
            p.add_argument("--input", required=True, help="scenario file (.json or .toml)")
            p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--out", help="report path (default: standard output)")
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "selftest":
        records = run_selftest()
    else:
        try:
            scenarios = parse_scenarios(args.input, default_kind=args.command)
        except ScenarioError as exc:
            print(f"divpos: {exc}", file=sys.stderr)
            return 2
        except OSError as exc:
            print(f"divpos: cannot read input: {exc}", file=sys.stderr)
            return 2
        if args.jobs > 1 and len(scenarios) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                records = list(pool.map(run_scenario, scenarios))
        else:
            records = [run_scenario(s) for s in scenarios]

    text = render(args.command, records, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if all(r["ok"] for r in records) else 1


if __name__ == "__main__":
    raise SystemExit(main())
