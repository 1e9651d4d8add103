"""Scenario files: schema, validation, construction and execution."""

from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import jsonschema

from . import budget as budget_mod
from .category import Category, CategoryError, FreeAlgebra, Hom, identity
from .functors import (AutomorphismPair, Composite, FunctorError, FunctorSpec, Identity, Inner,
                       ModTwist, SemReversal, check_automorphism_pair, check_functor_laws)
from .mainfn import (MainFunction, ReconstructionError, c_bijection_check, check_naturality_all,
                     image_check, main_central, reconstruct_phi_mu, surjectivity_dichotomy,
                     twofunctions_decompose, uniq_check)
from .reports import FAIL, PASS, Report
from .rings import RingError, make_ring_map
from .universe import Universe
from .varieties import MOD, SEM, VarietyError, VarietySpec, element_from_json, make_variety

RING_PATTERN = r"^(Z|Z/[0-9]+|GF4)$"

CHECKS = [
    "automorphism_pair", "functor_laws", "naturality", "c_bijection", "main_central", "image",
    "uniq", "surjectivity", "reconstruct", "twofunctions", "restriction", "derived_equals_star",
    "decompose", "quasi_inner", "sem_classify", "mod_conditions", "mod_semi_inner",
]

_BOUNDS = {
    "type": "object",
    "properties": {
        "max_len": {"type": "integer", "minimum": 1, "maximum": 8},
        "hom_len": {"type": "integer", "minimum": 1, "maximum": 4},
        "int_window": {"type": "integer", "minimum": 1, "maximum": 6},
        "hom_cap": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "freecat scenario",
    "type": "object",
    "required": ["variety", "ranks", "functor", "checks"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "variety": {
            "oneOf": [
                {"type": "string", "pattern": r"^(SEM|MON|MOD\((Z|Z/[0-9]+|GF4)\))$"},
                {
                    "type": "object",
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": ["SEM", "MON", "MOD"]},
                        "ring": {"type": "string", "pattern": RING_PATTERN},
                    },
                    "additionalProperties": False,
                },
            ]
        },
        "ranks": {
            "type": "array",
            "items": {"type": "integer", "minimum": 1, "maximum": 6},
            "minItems": 1,
            "uniqueItems": True,
            "contains": {"const": 1},
        },
        "functor": {"$ref": "#/definitions/functor"},
        "inverse": {"$ref": "#/definitions/functor"},
        "universe": _BOUNDS,
        "checks": {
            "type": "array",
            "minItems": 1,
            "items": {
                "oneOf": [
                    {"enum": CHECKS},
                    {
                        "type": "object",
                        "required": ["name"],
                        "properties": {
                            "name": {"enum": CHECKS},
                            "universe": _BOUNDS,
                            "family": {"enum": ["identity", "main_central", "scale"]},
                            "scale": {"type": ["integer", "string"]},
                        },
                        "additionalProperties": False,
                    },
                ]
            },
        },
        "output": {"type": "string"},
    },
    "definitions": {
        "functor": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["identity", "sem_reversal", "mod_twist", "inner", "table", "composite"]},
                "alpha": {
                    "oneOf": [
                        {"enum": ["id", "frobenius"]},
                        {"type": "object", "additionalProperties": {"type": "string"}},
                    ]
                },
                "sigma": {
                    "type": "object",
                    "patternProperties": {"^[0-9]+$": {"type": "array"}},
                    "additionalProperties": False,
                },
                "file": {"type": "string"},
                "parts": {"type": "array", "items": {"$ref": "#/definitions/functor"}, "minItems": 1},
            },
            "additionalProperties": False,
            "allOf": [
                {"if": {"properties": {"kind": {"const": "mod_twist"}}}, "then": {"required": ["alpha"]}},
                {"if": {"properties": {"kind": {"const": "inner"}}}, "then": {"required": ["sigma"]}},
                {"if": {"properties": {"kind": {"const": "table"}}}, "then": {"required": ["file"]}},
                {"if": {"properties": {"kind": {"const": "composite"}}}, "then": {"required": ["parts"]}},
            ],
        }
    },
}


class ScenarioError(ValueError):
    """Input that does not describe a runnable scenario (exit code 2)."""


@dataclass
class CheckSpec:
    name: str
    bounds: Dict[str, int] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Scenario:
    name: str
    variety: VarietySpec
    category: Category
    pair: AutomorphismPair
    universe: Universe
    checks: List[CheckSpec]
    output: Optional[str] = None
    functor_json: Dict = field(default_factory=dict)

    def universe_for(self, c: CheckSpec) -> Universe:
        return self.universe.with_bounds(**c.bounds) if c.bounds else self.universe


def validate(data) -> None:
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(x) for x in e.absolute_path) or "<root>"
        raise ScenarioError(f"schema violation at {where}: {e.message}") from None


def build_functor(spec: Dict, v: VarietySpec, cat: Category, base_dir: str = ".") -> FunctorSpec:
    kind = spec["kind"]
    if kind == "identity":
        return Identity()
    if kind == "sem_reversal":
        if v.kind != SEM:
            raise ScenarioError(f"sem_reversal is only valid on SEM, not {v.describe()}")
        return SemReversal()
    if kind == "mod_twist":
        if v.kind != MOD:
            raise ScenarioError(f"mod_twist is only valid on MOD, not {v.describe()}")
        try:
            alpha = make_ring_map(v.ring, spec["alpha"])
        except RingError as e:
            raise ScenarioError(str(e)) from None
        if v.ring.is_finite and not alpha.is_bijective():
            raise ScenarioError("mod_twist needs a bijective ring map")
        return ModTwist(alpha)
    if kind == "inner":
        fam = {}
        for A in cat.objects():
            data = spec["sigma"].get(str(A.rank))
            if data is None:
                fam[A] = identity(A)
                continue
            if len(data) != A.rank:
                raise ScenarioError(f"sigma for rank {A.rank} needs {A.rank} images")
            fam[A] = Hom(A, A, tuple(element_from_json(v, a, A.rank) for a in data))
        unknown = set(spec["sigma"]) - {str(r) for r in cat.ranks}
        if unknown:
            raise ScenarioError(f"sigma given for ranks outside the category: {sorted(unknown)}")
        f = Inner(fam)
        for A in cat.objects():
            f.sigma_inv(A)       # raises unless every sigma is an isomorphism
        return f
    if kind == "table":
        from .oracle import load_table

        path = spec["file"]
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        t, tcat = load_table(path)
        if tcat.variety != v or tcat.ranks != cat.ranks:
            raise ScenarioError("table functor was built for a different category")
        return t
    if kind == "composite":
        return Composite([build_functor(s, v, cat, base_dir) for s in spec["parts"]])
    raise ScenarioError(f"unknown functor kind {kind!r}")


def build(data, base_dir: str = ".") -> Scenario:
    validate(data)
    try:
        v = make_variety(data["variety"])
        cat = Category(v, tuple(data["ranks"]))
        phi = build_functor(data["functor"], v, cat, base_dir)
        phi_inv = (build_functor(data["inverse"], v, cat, base_dir) if "inverse" in data
                   else phi.inverse())
    except (VarietyError, CategoryError, FunctorError, RingError, KeyError, OSError) as e:
        raise ScenarioError(f"{type(e).__name__}: {e}") from None
    checks = []
    for c in data["checks"]:
        if isinstance(c, str):
            checks.append(CheckSpec(c))
        else:
            c = dict(c)
            name = c.pop("name")
            checks.append(CheckSpec(name, c.pop("universe", {}), c))
    for c in checks:
        if c.name in ("sem_classify",) and v.kind != SEM:
            raise ScenarioError(f"{c.name} needs a SEM category")
        if c.name in ("mod_conditions", "mod_semi_inner") and v.kind != MOD:
            raise ScenarioError(f"{c.name} needs a MOD category")
    u = Universe(cat, **data.get("universe", {}))
    return Scenario(data.get("name", "scenario"), v, cat, AutomorphismPair(phi, phi_inv), u, checks,
                    data.get("output"), copy.deepcopy(data["functor"]))


def load(path: str) -> Scenario:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ScenarioError(f"cannot read scenario {path}: {e}") from None
    return build(data, os.path.dirname(os.path.abspath(path)))


# -- running ----------------------------------------------------------------

def _per_object(name: str, u: Universe, fn: Callable[[FreeAlgebra], Report]) -> Report:
    rep = Report(name, u.describe())
    for A in u.objects():
        rep.absorb(fn(A))
    return rep


def _quasi_family(sc: Scenario, c: CheckSpec, u: Universe):
    kind = c.options.get("family", "identity")
    if kind == "identity":
        return lambda A: (lambda a: a)
    if kind == "main_central":
        return lambda A: main_central(sc.pair, A, u).c
    ring = sc.variety.ring
    if ring is None:
        raise ScenarioError("scale families need a MOD category")
    k = ring.parse(c.options.get("scale", 1))
    from .varieties import lc_scale

    return lambda A: (lambda a: lc_scale(ring, k, a))


def run_check(sc: Scenario, c: CheckSpec) -> Report:
    from .cases import mod_conditions, mod_semi_inner, sem_classify
    from .star import decompose, derived_equals_star, quasi_inner_witness_check, restriction_check_all

    p, u = sc.pair, sc.universe_for(c)
    s = MainFunction(p)
    n = c.name
    if n == "automorphism_pair":
        return check_automorphism_pair(p, u)
    if n == "functor_laws":
        return check_functor_laws(p.phi, u)
    if n == "naturality":
        return check_naturality_all(p, s, u)
    if n == "c_bijection":
        return _per_object(n, u, lambda A: c_bijection_check(s(A), u))
    if n == "main_central":
        rep = Report(n, u.describe())
        for A in u.objects():
            res = main_central(p, A, u)
            rep.absorb(res.report)
            rep.note(w=str(res.w_term), potentially_inner=res.potentially_inner)
        return rep
    if n == "image":
        return _per_object(n, u, lambda A: image_check(p, A, u))
    if n == "uniq":
        return _per_object(n, u, lambda A: uniq_check(p, A, u))
    if n == "surjectivity":
        return _per_object(n, u, lambda A: surjectivity_dichotomy(s(A), u))
    if n == "reconstruct":
        rep = Report(n, u.describe())
        homs = u.all_homs()
        for mu in homs:
            try:
                nu = reconstruct_phi_mu(p, s, mu, u)
            except ReconstructionError as e:
                rep.fail({"hom": str(mu), "error": str(e)})
                continue
            if nu != p.phi.apply_hom(mu):
                rep.fail({"hom": str(mu), "reconstructed": str(nu), "phi(mu)": str(p.phi.apply_hom(mu))})
        return rep.note(homs=len(homs))
    if n == "twofunctions":
        return twofunctions_decompose(s, p, u)[1]
    if n == "restriction":
        return restriction_check_all(p, u)
    if n == "derived_equals_star":
        return _per_object(n, u, lambda A: derived_equals_star(p, A, u))
    if n == "decompose":
        return decompose(p, u).report
    if n == "quasi_inner":
        return quasi_inner_witness_check(p, _quasi_family(sc, c, u), u)
    if n == "sem_classify":
        return sem_classify(p, u, s)
    if n == "mod_conditions":
        return mod_conditions(p, u, s)
    if n == "mod_semi_inner":
        return mod_semi_inner(p, u, s)
    raise ScenarioError(f"unknown check {n!r}")


EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def run(sc: Scenario, budget: Optional[budget_mod.Budget] = None):
    """Run all checks in order; returns (report document, exit code)."""
    budget = budget or budget_mod.Budget.from_env()
    doc = header(sc)
    results = []
    code = EXIT_OK
    with budget_mod.limited(budget):
        for i, c in enumerate(sc.checks):
            try:
                budget.check()
                rep = run_check(sc, c)
            except budget_mod.BudgetExceeded as e:
                results.append({"check": c.name, "status": "budget_exceeded", "error": str(e)})
                for rest in sc.checks[i + 1:]:
                    results.append({"check": rest.name, "status": "not_run"})
                code = EXIT_BUDGET
                break
            results.append(rep.to_dict())
            if rep.status == FAIL:
                code = EXIT_FAIL
    doc["checks"] = results
    doc["status"] = {EXIT_OK: PASS, EXIT_FAIL: FAIL, EXIT_BUDGET: "partial"}[code]
    doc["exit_code"] = code
    return doc, code


def header(sc: Scenario) -> Dict[str, Any]:
    return {
        "scenario": sc.name,
        "variety": sc.variety.to_json(),
        "ranks": list(sc.category.ranks),
        "functor": sc.functor_json,
        "universe": sc.universe.describe(),
        "main_epimorphisms": "canonical ordered basis, every generator -> x0",
    }


def dry_run(sc: Scenario) -> Dict[str, Any]:
    doc = header(sc)
    doc["checks"] = [{"check": c.name, "universe": sc.universe_for(c).describe(),
                      "sizes": sc.universe_for(c).sizes()} for c in sc.checks]
    doc["dry_run"] = True
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
