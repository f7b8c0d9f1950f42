"""Batch front end: ``workbench <command> --spec FILE``.

Exit codes: 0 success, 2 negative analysis verdict (for example a derivation
that does not preserve the ideal), 1 tool or input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import jsonschema

from . import __version__
from .lattice import algebra_grading, grading_group, weights_of
from .lnd import (Derivation, IdealNotPreserved, NotHomogeneousDerivation, NotLND,
                  ZeroDerivation, check_locally_nilpotent, check_preserves_ideal, classify_type,
                  composition_defect, exponential, homogeneity_degree, search_homogeneous_lnds)
from .orbits import (DifferentStrata, census, admissible_supports, transport,
                     transport_spot_checks)
from .parsing import PolynomialSyntaxError, parse_polynomial, parse_var
from .poly import Polynomial, RationalFunction, VarId, normal_form
from .rigidity import check_witness, rigidity_verdict
from .sampling import default_rng
from .variety import (PresentedAlgebra, TrinomialData, dimension, example_hypersurface, relations,
                      torus_invariant, validate)

COMMANDS = ("validate", "rigidity", "grading", "strata", "census", "lnd-check", "lnd-search",
            "exp", "transport", "example-hypersurface")

_RATIONAL = {"oneOf": [{"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
                       {"type": "integer"}]}
_INT_LIST = {"type": "array", "items": {"type": "integer"}, "minItems": 1}
_COMPLEX = {"oneOf": [{"type": "number"},
                      {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}
_POINT = {"type": "object", "additionalProperties": _COMPLEX}

SCHEMA = {
    "type": "object",
    "properties": {
        "type": {"enum": [1, 2]},
        "m": {"type": "integer", "minimum": 0},
        "blocks": {"type": "array", "minItems": 1, "items": {
            "type": "object", "required": ["l"],
            "properties": {"l": {"type": "array", "items": {"type": "integer"}}}}},
        "A": {"type": "array", "items": {"oneOf": [_RATIONAL, {"type": "array", "items": _RATIONAL}]}},
        "derivations": {"type": "object", "additionalProperties": {
            "type": "object", "additionalProperties": {"type": "string"}}},
        "invariant": {"type": "object", "required": ["num"],
                      "properties": {"num": {"type": "string"}, "den": {"type": "string"}}},
        "options": {"type": "object", "properties": {
            "epsilon": {"type": "number", "exclusiveMinimum": 0},
            "cap": {"type": "integer", "minimum": 1},
            "degree": {"type": "array", "items": {"type": "integer"}},
            "max_image_degree": {"type": "integer", "minimum": 1},
            "pairs": {"type": "integer", "minimum": 1}}},
        "points": {"type": "object", "required": ["alpha", "beta"],
                   "properties": {"alpha": _POINT, "beta": _POINT}},
        "hypersurface": {"type": "object", "required": ["k", "b", "c", "p", "r"], "properties": {
            "k": {"type": "integer", "minimum": 1}, "b": _INT_LIST, "c": _INT_LIST,
            "p": {"type": "integer", "minimum": 1}, "r": _INT_LIST}},
    },
    "if": {"not": {"required": ["hypersurface"]}},
    "then": {"required": ["type", "blocks", "A"]},
}


class SchemaError(ValueError):
    """Spec document failing the schema; ``path`` is a JSON pointer."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path or '/'}: {message}")


class UnknownCommand(ValueError):
    pass


@dataclass
class SpecFile:
    path: str
    digest: str
    document: Dict[str, Any]
    data: Optional[TrinomialData]
    derivations: Dict[str, Dict[VarId, Polynomial]] = field(default_factory=dict)
    invariant: Optional[RationalFunction] = None
    options: Dict[str, Any] = field(default_factory=dict)
    points: Optional[Tuple[Dict[VarId, complex], Dict[VarId, complex]]] = None
    hypersurface: Optional[Dict[str, Any]] = None

    def algebra(self) -> PresentedAlgebra:
        if self.hypersurface is not None:
            h = self.hypersurface
            return example_hypersurface(h["k"], h["b"], h["c"], h["p"], h["r"]).algebra
        return relations(self.data)

    def variables(self) -> List[VarId]:
        if self.hypersurface is not None:
            return list(self.algebra().variables)
        return self.data.variables


def _pointer(parts) -> str:
    return "".join(f"/{p}" for p in parts)


def _schema_check(doc: Any) -> None:
    validator = jsonschema.Draft7Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if not errors:
        return
    err = errors[0]
    path = list(err.absolute_path)
    if err.validator == "required" and isinstance(err.instance, dict):
        missing = [k for k in err.validator_value if k not in err.instance]
        path.append(missing[0])
        raise SchemaError(_pointer(path), "required property is missing")
    raise SchemaError(_pointer(path), err.message)


def _complex(x) -> complex:
    return complex(x[0], x[1]) if isinstance(x, list) else complex(x)


def _parse_poly(text: str, variables, where: str) -> Polynomial:
    try:
        return parse_polynomial(text, variables)
    except PolynomialSyntaxError as exc:
        raise PolynomialSyntaxError(exc.text, exc.pos, exc.expected, where) from None


def parse_spec_file(path) -> SpecFile:
    """Read, schema-check and parse a JSON spec; polynomial strings are parsed eagerly."""
    raw = Path(path).read_bytes()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"not valid JSON ({exc})") from exc
    _schema_check(doc)
    data = None
    if "type" in doc:
        A = doc["A"]
        if doc["type"] == 2:
            if not all(isinstance(row, list) for row in A):
                raise SchemaError("/A", "type 2 needs a 2-row matrix of rationals")
            constants = tuple(tuple(Fraction(str(a).replace(" ", "")) for a in row) for row in A)
        else:
            if any(isinstance(a, list) for a in A):
                raise SchemaError("/A", "type 1 needs a list of rationals")
            constants = tuple(Fraction(str(a).replace(" ", "")) for a in A)
        data = TrinomialData(doc["type"], tuple(tuple(b["l"]) for b in doc["blocks"]),
                             constants, doc.get("m", 0))
    spec = SpecFile(str(path), hashlib.sha256(raw).hexdigest(), doc, data,
                    options=dict(doc.get("options", {})), hypersurface=doc.get("hypersurface"))
    if spec.hypersurface is not None and len(spec.hypersurface["r"]) != spec.hypersurface["p"]:
        raise SchemaError("/hypersurface/r", "length must equal p")
    variables = spec.variables()
    loc = f"{path}:"
    for name, images in sorted(doc.get("derivations", {}).items()):
        parsed = {}
        for key, text in images.items():
            where = f"{loc}/derivations/{name}/{key}"
            v = parse_var(key, variables)
            parsed[v] = _parse_poly(text, variables, where)
        spec.derivations[name] = parsed
    if "invariant" in doc:
        inv = doc["invariant"]
        num = _parse_poly(inv["num"], variables, f"{loc}/invariant/num")
        den = _parse_poly(inv.get("den", "1"), variables, f"{loc}/invariant/den")
        spec.invariant = RationalFunction(num, den)
    if "points" in doc:
        pts = []
        for label in ("alpha", "beta"):
            given = {parse_var(k, variables): _complex(x) for k, x in doc["points"][label].items()}
            for v in variables:
                if v not in given:
                    raise SchemaError(f"/points/{label}/{v}", "coordinate is missing")
            pts.append(given)
        spec.points = (pts[0], pts[1])
    return spec


# -- serialization -------------------------------------------------------------

def to_jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, VarId):
        return str(x)
    if isinstance(x, (Polynomial, RationalFunction)):
        return str(x)
    if isinstance(x, Mapping):
        return {str(to_jsonable(k)) if not isinstance(k, str) else k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(to_jsonable(v) for v in x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def emit_report(report: Mapping[str, Any], out=None) -> str:
    """Canonical JSON (sorted keys); written to ``out`` (path) or stdout."""
    text = json.dumps(to_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
    return text


# -- commands ------------------------------------------------------------------

def _need_data(spec: SpecFile) -> TrinomialData:
    if spec.data is None:
        raise SchemaError("/type", "this command needs trinomial data")
    return spec.data


def _rational(x) -> str:
    return str(Fraction(x))


def _cmd_validate(spec: SpecFile, opts) -> Tuple[dict, int]:
    rep = validate(_need_data(spec))
    out = {"ok": rep.ok, "violations": [{"code": v.code, "path": v.path, "message": v.message}
                                        for v in rep.violations]}
    return out, 0 if rep.ok else 2


def _cmd_rigidity(spec, opts):
    data = _need_data(spec)
    out = {}
    for target in ("X", "Y"):
        verdict = rigidity_verdict(data, target)
        out[target] = dict(verdict.as_dict(), witness_verified=check_witness(data, verdict, target))
    return out, 0


def _cmd_grading(spec, opts):
    data = _need_data(spec)
    group = grading_group(data)
    w = weights_of(group)
    alg = relations(data)
    rels = []
    for g in alg.relations:
        degs = {w.monomial_degree(m) for m in g.terms}
        rels.append({"relation": g, "homogeneous": len(degs) <= 1,
                     "degree": list(next(iter(degs))) if len(degs) == 1 else None})
    out = {
        "dimension": dimension(data),
        "free_rank": group.free_rank,
        "expected_free_rank": data.n + data.m - data.r,
        "torsion": list(group.torsion),
        "weights": {v: {"free": list(w.free[v]), "torsion": list(w.torsion[v])} for v in group.variables},
        "relations": rels,
        "block_monomial_degrees": {str(i): list(w.monomial_degree(next(iter(data.block_monomial(i).terms))))
                                   for i in data.blocks},
    }
    return out, 0


def _strata_payload(data):
    from .orbits import torus_orbit_count

    return [{"pattern": p.names(), "dimension": d, "nonempty": True,
             "torus_orbits": torus_orbit_count(data, p)}
            for p, d in admissible_supports(data) if p.J]


def _cmd_strata(spec, opts):
    data = _need_data(spec)
    return {"open_dimension": dimension(data), "strata": _strata_payload(data)}, 0


def _spot_payload(data, opts):
    checks = transport_spot_checks(data, opts["pairs"], default_rng(), opts["epsilon"])
    return [{"pattern": c.pattern.names(), "pairs": c.pairs, "max_residual": c.max_residual,
             "flagged": c.flagged} for c in checks]


def _cmd_census(spec, opts):
    data = _need_data(spec)
    c = census(data)
    out = {
        "strata": [{"pattern": s.pattern.names(), "dimension": s.dimension, "nonempty": s.nonempty,
                    "torus_orbits": s.torus_orbits, "stabilizer_orbits": s.stabilizer_orbits}
                   for s in c.strata],
        "open_dimension": c.open_dimension,
        "open_part_verdict": c.open_part_verdict,
        "rigidity": c.rigidity.as_dict(),
        "note": c.rigidity_note,
        "transport_spot_checks": _spot_payload(data, opts),
    }
    return out, 0


def _derivations(spec: SpecFile) -> Dict[str, Derivation]:
    if not spec.derivations:
        raise SchemaError("/derivations", "this command needs at least one derivation")
    alg = spec.algebra()
    return {name: Derivation(images, alg) for name, images in spec.derivations.items()}


def _weights(alg: PresentedAlgebra):
    if alg.origin is not None:
        return weights_of(grading_group(alg.origin))
    return weights_of(algebra_grading(alg))


def _invariant(spec: SpecFile, alg: PresentedAlgebra) -> Optional[RationalFunction]:
    if spec.invariant is not None:
        return spec.invariant
    return torus_invariant(alg.origin) if alg.origin is not None else None


def _check_one(delta: Derivation, spec: SpecFile, opts) -> Tuple[dict, int]:
    ideal = check_preserves_ideal(delta)
    out: Dict[str, Any] = {"preserves_ideal": ideal.preserved, "residues": list(ideal.residues)}
    if not ideal.preserved:
        out["error"] = "IdealNotPreserved"
        return out, 2
    nil = check_locally_nilpotent(delta, opts["cap"])
    out["nilpotency"] = {"verdict": nil.verdict, "cap": nil.cap,
                         "nil_degrees": {v: d for v, d in nil.nil_degrees.items()}}
    try:
        out["degree"] = list(homogeneity_degree(delta, _weights(delta.base)))
    except (NotHomogeneousDerivation, ZeroDerivation) as exc:
        out["degree"] = None
        out["degree_note"] = str(exc)
    inv = _invariant(spec, delta.base)
    if inv is not None or delta.base.is_trinomial:
        t = classify_type(delta, inv)
        out["type"] = {"kind": t.kind, "method": t.method, "value": t.value}
    if not nil.locally_nilpotent:
        out["error"] = "NotLND"
        return out, 2
    return out, 0


def _cmd_lnd_check(spec, opts):
    out, code = {}, 0
    for name, delta in sorted(_derivations(spec).items()):
        out[name], c = _check_one(delta, spec, opts)
        code = max(code, c)
    return {"derivations": out}, code


def _exp_payload(delta: Derivation, opts) -> dict:
    aut = exponential(delta, opts["cap"])
    at_zero = aut.specialize(0)
    return {
        "images": dict(aut.images),
        "relations_map_to_zero": all(g.is_zero() for g in aut.relation_images()),
        "identity_at_zero": all(normal_form(at_zero[v] - Polynomial.var(v), delta.base.relations).is_zero()
                                for v in delta.base.variables),
        "composition_law": all(p.is_zero() for p in composition_defect(aut).values()),
    }


def _cmd_exp(spec, opts):
    out, code = {}, 0
    for name, delta in sorted(_derivations(spec).items()):
        try:
            out[name] = _exp_payload(delta, opts)
        except (IdealNotPreserved, NotLND) as exc:
            out[name] = {"error": type(exc).__name__, "message": str(exc)}
            code = 2
    return {"derivations": out}, code


def _cmd_lnd_search(spec, opts):
    alg = spec.algebra()
    w = _weights(alg)
    g0 = opts["degree"]
    if g0 is None:
        raise SchemaError("/options/degree", "lnd-search needs a degree (--degree)")
    found = search_homogeneous_lnds(alg, w, g0, opts["max_image_degree"], opts["cap"])
    results = []
    for delta in found:
        entry, _ = _check_one(delta, spec, opts)
        entry["images"] = dict(delta.images)
        results.append(entry)
    return {"degree": list(g0), "max_image_degree": opts["max_image_degree"], "count": len(results),
            "derivations": results}, 0


def _certificate_payload(cert) -> dict:
    return {
        "pattern": cert.pattern.names(),
        "residual": cert.residual,
        "root_of_unity_flagged": cert.root_of_unity_flagged,
        "steps": [{"kind": s.kind, "label": s.label, "connected": s.connected,
                   "factors": dict(sorted(s.factors.items())), "shifts": dict(sorted(s.shifts.items()))}
                  for s in cert.steps],
    }


def _cmd_transport(spec, opts):
    data = _need_data(spec)
    if spec.points is None:
        return {"spot_checks": _spot_payload(data, opts)}, 0
    try:
        cert = transport(spec.points[0], spec.points[1], data, opts["epsilon"])
    except DifferentStrata as exc:
        return {"error": "DifferentStrata", "message": str(exc)}, 2
    return {"certificate": _certificate_payload(cert)}, 0


def _cmd_example_hypersurface(spec, opts):
    h = spec.hypersurface
    if h is None:
        raise SchemaError("/hypersurface", "this command needs hypersurface parameters")
    ex = example_hypersurface(h["k"], h["b"], h["c"], h["p"], h["r"])
    check, code = _check_one(ex.derivation, SpecFile(spec.path, spec.digest, {}, None,
                                                     invariant=ex.invariant), opts)
    out = {"relation": ex.algebra.relations.relations[0], "images": dict(ex.derivation.images),
           "invariant": {"num": ex.invariant.num, "den": ex.invariant.den}, "check": check,
           "names": {v: n for v, n in sorted(ex.algebra.names.items())}}
    if code == 0:
        out["exp"] = _exp_payload(ex.derivation, opts)
    return out, code


_DISPATCH: Dict[str, Callable] = {
    "validate": _cmd_validate, "rigidity": _cmd_rigidity, "grading": _cmd_grading,
    "strata": _cmd_strata, "census": _cmd_census, "lnd-check": _cmd_lnd_check,
    "lnd-search": _cmd_lnd_search, "exp": _cmd_exp, "transport": _cmd_transport,
    "example-hypersurface": _cmd_example_hypersurface,
}

DEFAULTS = {"epsilon": 1e-9, "cap": None, "degree": None, "max_image_degree": 2, "pairs": 10}


def run_command(cmd: str, spec: SpecFile, overrides: Optional[Mapping[str, Any]] = None) -> Tuple[dict, int]:
    """Run ``cmd`` on ``spec``; returns ``(report, exit_code)``.

    Option precedence: ``overrides`` (command line), then the spec file's options, then defaults.
    """
    if cmd not in _DISPATCH:
        raise UnknownCommand(f"unknown command {cmd!r}; expected one of {', '.join(COMMANDS)}")
    opts = dict(DEFAULTS)
    opts.update(spec.options)
    opts.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if opts["degree"] is not None:
        opts["degree"] = tuple(opts["degree"])
    result, code = _DISPATCH[cmd](spec, opts)
    report = {"command": cmd, "version": __version__, "input_digest": spec.digest,
              "exit_code": code, "result": result}
    return report, code


def _degree(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("degree must be comma-separated integers") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="workbench", description=__doc__.splitlines()[0])
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("--spec", required=True, help="JSON spec file")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--epsilon", type=float, help="relative zero threshold (default 1e-9)")
    p.add_argument("--cap", type=int, help="nilpotency iteration cap")
    p.add_argument("--degree", type=_degree, help="search degree g0, comma-separated")
    p.add_argument("--max-image-degree", type=int, dest="max_image_degree",
                   help="search bound on the total degree of images (default 2)")
    p.add_argument("--pairs", type=int, help="transport spot-check pairs per stratum (default 10)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {"epsilon": args.epsilon, "cap": args.cap, "degree": args.degree,
                 "max_image_degree": args.max_image_degree, "pairs": args.pairs}
    try:
        spec = parse_spec_file(args.spec)
        report, code = run_command(args.command, spec, overrides)
    except (OSError, SchemaError, UnknownCommand, PolynomialSyntaxError, ValueError, ArithmeticError) as exc:
        print(f"workbench: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    try:
        emit_report(report, args.out)
    except OSError as exc:
        print(f"workbench: IoError: {exc}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
