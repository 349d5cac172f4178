"""Command-line front end: JSON job in, JSON report out.

A job looks like::

    {"schema_version": 1, "command": "classify", "field": {"kind": "rationals"},
     "vars": ["x", "y"], "inputs": {"F": {"coords": ["x", "y + x^2"]}}}

Exit codes: 0 success, 2 bad input, 3 inconclusive or budget exceeded,
4 internal invariant violation.  Errors are printed to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from . import classify, endo, ideal, lnd, torus
from .casestudy import run_poloni_moser
from .errors import BudgetExceeded, InputError, InvariantViolation
from .lnd import Derivation, ParametricMap
from .poly import PolyRing, parse_scalar
from .scalar import field_from_json

SCHEMA_VERSION = 1

COMMANDS = (
    "compose", "invert", "iterate-degrees", "order", "exp", "log", "psi-degree",
    "weight-split", "build-flow", "decompose", "gb", "reduce", "fixpoints",
    "unique-fixpoint", "invariants", "classify", "poloni-moser", "verify-conjugacy",
)

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_INTERNAL = 0, 2, 3, 4

JOB_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "command"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": list(COMMANDS)},
        "field": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["rationals", "cyclotomic", "rational_functions"]},
                "m": {"type": "integer", "minimum": 1},
                "param": {"type": "string"},
            },
        },
        "vars": {"type": "array", "items": {"type": "string"}},
        "order": {"enum": ["lex", "degrevlex"]},
        "inputs": {"type": "object"},
        "budgets": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_pairs": {"type": "integer", "minimum": 1},
                "max_terms": {"type": "integer", "minimum": 1},
                "degree_bound": {"type": "integer", "minimum": 0},
                "order_bound": {"type": "integer", "minimum": 1},
            },
        },
    },
}


class Inconclusive(Exception):
    """Carries a finished report whose outcome is undecided."""

    def __init__(self, report):
        super().__init__("inconclusive")
        self.report = report


class Job:
    def __init__(self, doc: dict):
        jsonschema.validate(doc, JOB_SCHEMA)
        self.command = doc["command"]
        self.field = field_from_json(doc.get("field", {"kind": "rationals"}))
        self.inputs = doc.get("inputs", {})
        self.budgets = doc.get("budgets", {})
        self.ring = None
        if self.command != "poloni-moser":
            if "vars" not in doc:
                raise InputError("'vars' is required")
            self.ring = PolyRing(self.field, doc["vars"], doc.get("order", "lex"))

    def need(self, name):
        if name not in self.inputs:
            raise InputError(f"missing input {name!r}")
        return self.inputs[name]

    def poly(self, name):
        value = self.need(name)
        if not isinstance(value, str):
            raise InputError(f"input {name!r} must be a polynomial string")
        return self.ring.parse(value)

    def scalar(self, name):
        value = self.need(name)
        if not isinstance(value, (str, int)) or isinstance(value, bool):
            raise InputError(f"input {name!r} must be a scalar literal")
        return parse_scalar(self.field, str(value))

    def map(self, name) -> endo.PolyMap:
        doc = self.need(name)
        if not isinstance(doc, dict):
            raise InputError(f"input {name!r} must be a map descriptor")
        doc = dict(doc)
        ring_doc = doc.pop("ring", None)
        if ring_doc is not None and PolyRing.from_json(ring_doc) != self.ring:
            raise InputError(f"map {name!r} declares a different ring")
        return endo.PolyMap.from_json(self.ring, doc)

    def derivation(self, name) -> Derivation:
        doc = self.need(name)
        images = doc.get("images") if isinstance(doc, dict) else doc
        if not isinstance(images, list):
            raise InputError(f"input {name!r} needs a list of images")
        return Derivation(self.ring, images)

    def integer(self, name, default=None):
        value = self.inputs.get(name, default)
        if not isinstance(value, int) or isinstance(value, bool):
            raise InputError(f"input {name!r} must be an integer")
        return value

    def gb_budgets(self):
        return {k: self.budgets[k] for k in ("max_pairs", "max_terms") if k in self.budgets}


def _fmt(field, c):
    return field.format(c)


def _compose(job):
    return {"map": endo.compose(job.map("F"), job.map("G")).to_json()}


def _invert(job):
    return {"map": endo.invert(job.map("F")).to_json()}


def _iterate_degrees(job):
    F = job.map("F")
    N = job.integer("N")
    kw = {"max_terms": job.budgets["max_terms"]} if "max_terms" in job.budgets else {}
    return {"degrees": endo.iterate_degrees(F, N, **kw)}


def _order(job):
    bound = job.budgets.get("order_bound", classify.DEFAULT_ORDER_BOUND)
    kw = {"max_terms": job.budgets["max_terms"]} if "max_terms" in job.budgets else {}
    d = endo.order_up_to(job.map("F"), bound, **kw)
    report = {"order": d, "bound": bound}
    if d is None:
        raise Inconclusive(report)
    return report


def _exp(job):
    param = job.inputs.get("param", "u")
    return lnd.exp_flow(job.derivation("D"), param=param).to_json()


def _log(job):
    bound = job.integer("bound", 64)
    return lnd.log_unipotent(job.map("F"), bound=bound).to_json()


def _psi_degree(job):
    deg = lnd.psi_degree(job.derivation("D"), job.poly("f"))
    return {"degree": deg if isinstance(deg, int) else "-inf"}


def _weight_split(job):
    rng = job.need("range")
    if not (isinstance(rng, list) and len(rng) == 2 and all(isinstance(v, int) for v in rng)):
        raise InputError("'range' must be [r, s]")
    return torus.weight_split(job.map("F"), job.scalar("a"), job.poly("f"), tuple(rng)).to_json()


def _build_flow(job):
    param = job.inputs.get("param", "v")
    return torus.build_gm_flow(job.map("F"), job.scalar("a"), param=param).to_json()


def _parametric(job, name) -> ParametricMap:
    doc = job.need(name)
    if not isinstance(doc, dict) or "coords" not in doc:
        raise InputError(f"input {name!r} must be {{'param', 'coords', 'shift'}}")
    return ParametricMap(job.ring, doc.get("param", "u"), doc["coords"], doc.get("shift", 0))


def _decompose(job):
    h = job.need("h")
    if not isinstance(h, dict) or set(h) != {"kind", "value"}:
        raise InputError("'h' must be {'kind', 'value'}")
    value = parse_scalar(job.field, str(h["value"]))
    group = torus.GroupElement(h["kind"], value)
    out = torus.finite_part_decompose(job.map("F"), _parametric(job, "psi"), job.integer("r"), group)
    return out.to_json()


def _ideal(job):
    gens = job.need("generators")
    if not isinstance(gens, list):
        raise InputError("'generators' must be a list of polynomial strings")
    return ideal.Ideal(job.ring, gens)


def _gb(job):
    return ideal.buchberger(_ideal(job), job.ring.order, **job.gb_budgets()).to_json()


def _reduce(job):
    G = ideal.buchberger(_ideal(job), job.ring.order, **job.gb_budgets())
    return {"normal_form": str(G.reduce(job.poly("f")))}


def _fixpoints(job):
    F = job.map("F")
    I = ideal.fixpoint_ideal(F)
    G = ideal.buchberger(I, job.ring.order, **job.gb_budgets())
    point = ideal.rational_fixpoint_candidate(F, **job.gb_budgets())
    return {
        "ideal": I.to_json()["generators"],
        "groebner_basis": G.to_json()["basis"],
        "empty": G.is_unit(),
        "unique_rational_point": None if point is None else [_fmt(job.field, c) for c in point],
    }


def _unique_fixpoint(job):
    pt = job.need("point")
    if not isinstance(pt, list):
        raise InputError("'point' must be a list of scalars")
    point = [parse_scalar(job.field, str(c)) for c in pt]
    return {"unique": ideal.unique_fixpoint(job.map("F"), point, **job.gb_budgets())}


def _invariants(job):
    D = job.budgets.get("degree_bound", classify.DEFAULT_INVARIANT_DEGREE_BOUND)
    return {"degree_bound": D, "basis": [str(f) for f in classify.invariant_basis(job.map("F"), D)]}


def _classify(job):
    report = classify.classify_plane(
        job.map("F"),
        order_bound=job.budgets.get("order_bound", classify.DEFAULT_ORDER_BOUND),
        invariant_degree_bound=job.budgets.get("degree_bound", classify.DEFAULT_INVARIANT_DEGREE_BOUND),
    ).to_json()
    if report["verdict"] == "inconclusive":
        raise Inconclusive(report)
    return report


def _poloni_moser(job):
    report = run_poloni_moser(job.budgets.get("degree_bound", 6), **job.gb_budgets()).to_json()
    if report["conclusion"] != "success":
        raise Inconclusive(report)
    return report


def _verify_conjugacy(job):
    return {"conjugate": endo.verify_conjugacy(job.map("h"), job.map("A"), job.map("B"))}


HANDLERS = {
    "compose": _compose, "invert": _invert, "iterate-degrees": _iterate_degrees,
    "order": _order, "exp": _exp, "log": _log, "psi-degree": _psi_degree,
    "weight-split": _weight_split, "build-flow": _build_flow, "decompose": _decompose,
    "gb": _gb, "reduce": _reduce, "fixpoints": _fixpoints, "unique-fixpoint": _unique_fixpoint,
    "invariants": _invariants, "classify": _classify, "poloni-moser": _poloni_moser,
    "verify-conjugacy": _verify_conjugacy,
}


def run(doc: dict) -> tuple[dict, int]:
    """Execute a job; returns ``(report, exit code)``. Errors become reports too."""
    try:
        job = Job(doc)
        return HANDLERS[job.command](job), EXIT_OK
    except Inconclusive as exc:
        return exc.report, EXIT_INCONCLUSIVE
    except jsonschema.ValidationError as exc:
        return _error("SchemaError", exc.message), EXIT_INPUT
    except BudgetExceeded as exc:
        return _error(type(exc).__name__, str(exc)), EXIT_INCONCLUSIVE
    except (InvariantViolation, AssertionError) as exc:
        return _error(type(exc).__name__, str(exc)), EXIT_INTERNAL
    except (InputError, KeyError, TypeError, ValueError) as exc:
        return _error(type(exc).__name__, str(exc)), EXIT_INPUT


def _error(kind, message):
    return {"error": kind, "message": message}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_job(path: str) -> dict:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return json.loads(text)


def _add_budget_flags(p):
    p.add_argument("--max-pairs", type=int)
    p.add_argument("--max-terms", type=int)
    p.add_argument("--degree-bound", type=int)
    p.add_argument("--order-bound", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyauto", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run a job file ('-' for stdin)")
    p.add_argument("job")
    _add_budget_flags(p)
    for name in COMMANDS:
        if name == "poloni-moser":
            continue
        p = sub.add_parser(name, help=f"run a '{name}' job; the file may omit 'command'")
        p.add_argument("job")
        _add_budget_flags(p)
    p = sub.add_parser("poloni-moser", help="run the 3-space case study")
    _add_budget_flags(p)
    p.add_argument("--json", metavar="PATH", help="also write the report to PATH")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "poloni-moser":
            doc = {"schema_version": SCHEMA_VERSION, "command": "poloni-moser"}
        else:
            doc = _load_job(args.job)
            if not isinstance(doc, dict):
                raise InputError("job must be a JSON object")
            if args.command != "run":
                if doc.setdefault("command", args.command) != args.command:
                    raise InputError(f"job command {doc['command']!r} does not match {args.command!r}")
    except (OSError, json.JSONDecodeError, InputError) as exc:
        sys.stderr.write(_dump(_error(type(exc).__name__, str(exc))))
        return EXIT_INPUT
    flags = {k: getattr(args, k) for k in ("max_pairs", "max_terms", "degree_bound", "order_bound")}
    flags = {k: v for k, v in flags.items() if v is not None}
    if flags:
        doc["budgets"] = {**doc.get("budgets", {}), **flags}
    report, code = run(doc)
    if code != EXIT_OK and set(report) == {"error", "message"}:
        sys.stderr.write(_dump(report))
        return code
    out = _dump(report)
    sys.stdout.write(out)
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
