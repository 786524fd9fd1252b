"""Command-line front end.

Exit status: 0 certified / successful computation, 2 not SCRC, 3 inconclusive
(or not certified, or a negative refinement check), 1 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import jsonschema

from . import linalg
from .campana import (
    CampanaOrbifold,
    multiplicities_from_json,
    multiplicities_to_json,
    orbifold_from_json,
    scrc_check,
    sigma_from_json,
    sigma_to_json,
)
from .fan import FanError, Kind, adjacency, classify_all, fan_to_json, is_refinement, star_subdivide, validate
from .oracle import BudgetExhausted, SearchBudget, brute_force_witnesses
from .witness import Status, crit_sing_failures, decide, wps_repair, wps_verdict
from .wps import wps_fan

EXIT_OK, EXIT_INPUT, EXIT_NOT_SCRC, EXIT_INCONCLUSIVE = 0, 1, 2, 3

_INT_LIST = {"type": "array", "items": {"type": "integer"}}

FAN_SCHEMA = {
    "type": "object",
    "required": ["dim", "rays", "max_cones"],
    "properties": {
        "dim": {"type": "integer", "minimum": 1},
        "rays": {"type": "array", "minItems": 1, "items": _INT_LIST},
        "max_cones": {"type": "array", "minItems": 1, "items": {**_INT_LIST, "items": {"type": "integer", "minimum": 0}}},
        "multiplicities": {
            "type": "array",
            "items": {"anyOf": [{"type": "integer", "minimum": 1}, {"const": "inf"}]},
        },
    },
}

SIGMA_SCHEMA = {
    "type": "object",
    "required": ["markings"],
    "properties": {
        "markings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["ray", "coeff"],
                "properties": {
                    "ray": {"type": "integer", "minimum": 0},
                    "coeff": {"type": "integer", "minimum": 1},
                },
            },
        }
    },
}

_STATUS_EXIT = {
    Status.CERTIFIED: EXIT_OK,
    Status.NOT_SCRC: EXIT_NOT_SCRC,
    Status.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class InputError(Exception):
    pass


def _load(path: str, schema: dict, what: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: cannot read {what}: {exc}") from exc
    err = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(schema).iter_errors(data))
    if err is not None:
        where = "/".join(str(x) for x in err.absolute_path) or "<root>"
        raise InputError(f"{path}: {what} field {where}: {err.message}")
    return data


def _load_orbifold(path: str) -> CampanaOrbifold:
    data = _load(path, FAN_SCHEMA, "fan")
    try:
        orb = orbifold_from_json(data)
        validate(orb.fan)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    return orb


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not linalg.is_prime(p):
        raise argparse.ArgumentTypeError(f"--char must be a prime, got {p}")
    return p


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _multiplicity(text: str):
    if text == "inf":
        return "inf"
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"multiplicity must be a positive integer or 'inf', got {text!r}")
    if m < 1:
        raise argparse.ArgumentTypeError(f"multiplicity must be positive, got {m}")
    return m


# --------------------------------------------------------------------------
# subcommands; each returns (report, exit status)


def cmd_check(args):
    orb = _load_orbifold(args.fan)
    sigma = sigma_from_json(_load(args.sigma, SIGMA_SCHEMA, "contact orders"))
    bad = [mk.ray for mk in sigma.markings if mk.ray >= orb.fan.n_rays]
    if bad:
        raise InputError(f"{args.sigma}: markings reference unknown rays {bad}")
    cert = scrc_check(sigma, orb, args.char)
    return cert.to_json(), EXIT_OK if cert.certified else EXIT_INCONCLUSIVE


def cmd_witness(args):
    orb = _load_orbifold(args.fan)
    coarse = _load_orbifold(args.coarse).fan if args.coarse else None
    if coarse is not None and not is_refinement(orb.fan, coarse):
        raise InputError(f"{args.fan} does not refine {args.coarse}")
    v = decide(orb, args.char, coarse, seed=args.seed)
    return v.to_json(), _STATUS_EXIT[v.status]


def cmd_classify(args):
    fan = _load_orbifold(args.fan).fan
    p = args.char
    classes = classify_all(fan, p)
    adj = adjacency(fan)
    cones = [
        {"cone": list(c), "class": cls.kind.value, "index": cls.index}
        for c, cls in zip(fan.max_cones, classes)
    ]
    rays = []
    for r in range(fan.n_rays):
        away = adj.non_adjacent(r)
        good = [k for k in away if classes[k].kind is not Kind.WILD]
        rays.append({"ray": r, "non_adjacent": list(away), "smooth_or_tame_non_adjacent": good})
    report = {
        "char": p,
        "cones": cones,
        "rays": rays,
        "crit_sing_holds": fan.dim == 2 and not crit_sing_failures(fan, p),
    }
    return report, EXIT_OK


def _weights(args):
    if any(q < 1 for q in args.weights):
        raise InputError("weights must be positive")
    return tuple(args.weights)


def cmd_wps(args):
    Q = _weights(args)
    mults = None
    if args.mult:
        if len(args.mult) != len(Q):
            raise InputError(f"{len(args.mult)} multiplicities for {len(Q)} weights")
        mults = multiplicities_from_json(args.mult)
    try:
        v = wps_verdict(Q, args.char, mults)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    fan = wps_fan(Q)
    report = v.to_json()
    report["fan"] = {
        **fan_to_json(fan),
        "multiplicities": multiplicities_to_json(mults or (float("inf"),) * len(Q)),
    }
    report["weights"] = list(Q)
    return report, _STATUS_EXIT[v.status]


def cmd_repair(args):
    Q = _weights(args)
    try:
        fan, sigma, cert = wps_repair(Q, args.char)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = {
        "weights": list(Q),
        "fan": fan_to_json(fan),
        "witness": sigma_to_json(sigma),
        "certificate": cert.to_json(),
        "cone_classes": [c.kind.value for c in classify_all(fan, args.char)],
    }
    return report, EXIT_OK if cert.certified else EXIT_INCONCLUSIVE


def cmd_subdivide(args):
    orb = _load_orbifold(args.fan)
    try:
        fine = star_subdivide(orb.fan, args.ray)
    except FanError as exc:
        raise InputError(str(exc)) from exc
    report = fan_to_json(fine)
    report["multiplicities"] = multiplicities_to_json(orb.multiplicities + (float("inf"),))
    return report, EXIT_OK


def cmd_refine(args):
    fine = _load_orbifold(args.fine).fan
    coarse = _load_orbifold(args.coarse).fan
    try:
        ok = is_refinement(fine, coarse)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return {"refinement": ok}, EXIT_OK if ok else EXIT_INCONCLUSIVE


def cmd_oracle(args):
    orb = _load_orbifold(args.fan)
    try:
        budget = SearchBudget(args.bound, args.max_markings, args.max_steps)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    try:
        found = brute_force_witnesses(orb, args.char, budget)
    except BudgetExhausted as exc:
        return {
            "error": str(exc),
            "steps": exc.steps,
            "partial": [sigma_to_json(s) for s in exc.partial],
        }, EXIT_INCONCLUSIVE
    return [sigma_to_json(s) for s in found], EXIT_OK


# --------------------------------------------------------------------------
# output


def _scalar(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x):
        return "(" + ", ".join(str(y) for y in x) + ")"
    return str(x)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and any(isinstance(y, (dict, list)) for y in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), _scalar(obj)


def render_text(report) -> str:
    rows = list(_flatten(report))
    if not rows:
        return "(empty)"
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled searches")
    char = argparse.ArgumentParser(add_help=False)
    char.add_argument("--char", type=_prime, required=True, metavar="P", help="characteristic (prime)")

    parser = argparse.ArgumentParser(
        prog="campana-toric",
        description="Certify separable Campana rational connectedness of toric orbifolds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common, char], help="check a contact-order set")
    p.add_argument("fan")
    p.add_argument("sigma")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("witness", parents=[common, char], help="construct a certified witness")
    p.add_argument("fan")
    p.add_argument("--coarse", help="fan of a blow-down to run the surface criterion on")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("classify", parents=[common, char], help="cone singularity table")
    p.add_argument("fan")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("wps", parents=[common, char], help="verdict for a weighted projective space")
    p.add_argument("weights", type=int, nargs="+")
    p.add_argument("--mult", type=_multiplicity, nargs="+", help="per-ray multiplicities (default: all inf)")
    p.set_defaults(func=cmd_wps)

    p = sub.add_parser("repair-wps", parents=[common, char], help="blow-up with a certified witness")
    p.add_argument("weights", type=int, nargs="+")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("subdivide", parents=[common], help="star-subdivide a fan at a new ray")
    p.add_argument("fan")
    p.add_argument("--ray", type=_vector, required=True, help="new ray, e.g. 0,-1")
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("refine-check", parents=[common], help="is FINE a refinement of COARSE")
    p.add_argument("fine")
    p.add_argument("coarse")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("oracle", parents=[common, char], help="brute-force witness enumeration")
    p.add_argument("fan")
    p.add_argument("--bound", type=int, default=12, help="maximum coefficient (default 12)")
    p.add_argument("--max-markings", type=int, default=1, help="markings per ray (default 1)")
    p.add_argument("--max-steps", type=int, default=None, help="candidate budget")
    p.set_defaults(func=cmd_oracle)
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report, status = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    if args.format == "text":
        print(render_text(report), file=out)
    else:
        print(json.dumps(report, indent=2, ensure_ascii=False), file=out)
    return status


def main() -> None:
    sys.exit(run())
