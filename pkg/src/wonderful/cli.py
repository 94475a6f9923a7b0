"""Command-line interface: JSON envelopes around the library operations.

Exit codes: 0 success, 2 bad configuration, 3 unsupported request or cap
exceeded, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import jsonschema
import tomli

from . import __version__
from .affine import (AffineRootDatum, affine_dynkin, alcove, alcove_vertices, levi_center,
                     levi_center_quotient, parahoric_levi_type)
from .embedding import (affine_stacky_fan, c_delta, orbit_poset, orbit_stabilizer_descriptor,
                        picard_presentation, weyl_chamber_stacky_fan)
from .errors import InputError, InvariantViolation, UnsupportedError, WonderfulError
from .lattice import matrix_to_json, vector_to_json
from .roots import (QuadraticForm, RootDatum, basic_form, build_root_datum, chamber_rays,
                    freudenthal_multiplicities, highest_root, one_param_limit_J, positive_roots,
                    torus_closure_fan, weyl_group_order_of_type)
from .svg import alcove_svg, fan_svg, lt_fan_svg, svg_elements, voronoi_svg
from .voronoi import lt_fan, lt_fan_vs_minimizers_check, voronoi_cell, z_q

SCHEMA_VERSION = "1.0"
COMMANDS = ("rootdata", "alcove", "parahoric", "stackyfan", "cdelta", "orbits", "voronoi",
            "ltfan", "limit", "freudenthal", "plot")

_rational = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_int_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_rat_vector = {"type": "array", "items": _rational}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "group": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "type": {"type": "string"},
                "rank": {"type": "integer", "minimum": 1},
                "flavor": {"enum": ["sc", "ad", "explicit"]},
                "cartan": _int_matrix,
                "x_basis": _int_matrix,
            },
        },
        "quadratic_form": {"type": "object", "additionalProperties": False,
                           "properties": {"gram": {"type": "array", "items": _rat_vector}}},
        "j": {"type": "integer", "minimum": 0},
        "t": {"type": "integer", "minimum": 1},
        "beta": _rat_vector,
        "eta": _rat_vector,
        "weight": {"type": "array", "items": {"type": "integer"}},
        "center": {"type": "array", "items": {"type": "integer"}},
        "window": {"type": "integer", "minimum": 0},
        "affine": {"type": "boolean"},
        "target": {"enum": ["fan", "alcove", "voronoi"]},
    },
}

ENVELOPE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command", "input", "result", "notes", "version"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": list(COMMANDS)},
        "input": {"type": "object"},
        "result": {"type": "object"},
        "notes": {"type": "array", "items": {"type": "string"}},
        "version": {"type": "string"},
    },
}


# ---------------------------------------------------------------------------
# config

def load_config(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    try:
        if p.suffix.lower() == ".toml":
            return tomli.loads(text)
        return json.loads(text)
    except (ValueError, tomli.TOMLDecodeError) as exc:
        raise InputError(f"cannot parse config {path}: {exc}") from exc


def merge_flags(config: dict, args: argparse.Namespace) -> dict:
    """Flags win over the config file."""
    cfg = json.loads(json.dumps(config))
    group = dict(cfg.get("group", {}))
    if args.type is not None:
        group["type"] = args.type
        if args.rank is None and any(ch.isdigit() for ch in args.type):
            group.pop("rank", None)
    if args.rank is not None:
        group["rank"] = args.rank
    if args.flavor is not None:
        group["flavor"] = args.flavor
    if args.cartan is not None:
        group["cartan"] = _json_arg(args.cartan, "--cartan")
    if group:
        cfg["group"] = group
    if args.gram is not None:
        cfg["quadratic_form"] = {"gram": _json_arg(args.gram, "--gram")}
    for key in ("j", "t", "window", "target"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    for key in ("beta", "eta", "weight", "center"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = _json_arg(val, f"--{key}")
    if getattr(args, "affine", False):
        cfg["affine"] = True
    return cfg


def _json_arg(text: str, flag: str):
    try:
        return json.loads(text)
    except ValueError as exc:
        raise InputError(f"{flag} expects JSON, got {text!r}") from exc


def validate_config(cfg: dict) -> None:
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(f"invalid config: {exc.message}") from exc


def _rat(x):
    return Fraction(x) if isinstance(x, str) else x


def root_datum_from(cfg: dict) -> RootDatum:
    g = cfg.get("group")
    if not g:
        raise InputError("config needs a group: {type, rank, flavor} or {cartan, flavor}")
    flavor = g.get("flavor", "sc")
    if "cartan" in g:
        return RootDatum.from_cartan(g["cartan"], flavor, g.get("x_basis"))
    if "type" not in g:
        raise InputError("group needs a type or a cartan matrix")
    return build_root_datum(g["type"], g.get("rank"), flavor, g.get("x_basis"))


def form_from(cfg: dict, rd: RootDatum | None) -> QuadraticForm:
    q = cfg.get("quadratic_form")
    if q and "gram" in q:
        return QuadraticForm([[_rat(x) for x in row] for row in q["gram"]])
    if rd is None:
        raise InputError("need either a quadratic_form or a group")
    return basic_form(rd)


def _need(cfg: dict, key: str):
    if key not in cfg:
        raise InputError(f"missing parameter {key!r}")
    return cfg[key]


# ---------------------------------------------------------------------------
# commands (each returns (result payload, notes))

def cmd_rootdata(cfg: dict):
    rd = root_datum_from(cfg)
    out = rd.to_json()
    out["positive_roots"] = [list(c) for c in positive_roots(rd)]
    out["weyl_group_order"] = weyl_group_order_of_type(rd.cartan_type)
    out["center"] = rd.center.to_json()
    out["fundamental_group"] = rd.fundamental_group.to_json()
    out["chamber_rays"] = matrix_to_json(chamber_rays(rd))
    notes = ["roots in simple-root coefficients; simple_roots in X-coordinates; coroots in V_T-coordinates"]
    if rd.is_irreducible:
        out["highest_root"] = list(highest_root(rd))
        out["basic_form"] = basic_form(rd).to_json()["gram"]
    return out, notes


def _affine(cfg: dict) -> AffineRootDatum:
    return AffineRootDatum(root_datum_from(cfg))


def cmd_alcove(cfg: dict):
    ard = _affine(cfg)
    out = alcove(ard).to_json()
    out["dynkin"] = affine_dynkin(ard).to_json()
    return out, ["points in V_T-coordinates (simple-coroot basis for flavor sc); facet i reads offset + normal.x >= 0"]


def _parahoric_entry(ard: AffineRootDatum, j: int) -> dict:
    return {"j": j, "levi": parahoric_levi_type(ard, j), "z_j": levi_center_quotient(ard, j).to_json(),
            "z_levi": levi_center(ard, j).to_json(),
            "vertex": vector_to_json(dict(alcove_vertices(ard))[j])}


def cmd_parahoric(cfg: dict):
    ard = _affine(cfg)
    if "j" in cfg:
        j = cfg["j"]
        if j > ard.rank:
            raise InputError(f"node {j} not in 0..{ard.rank}")
        return _parahoric_entry(ard, j), []
    return {"nodes": [_parahoric_entry(ard, j) for j in ard.nodes]}, []


def cmd_stackyfan(cfg: dict):
    rd = root_datum_from(cfg)
    if cfg.get("affine"):
        sf = affine_stacky_fan(AffineRootDatum(rd))
        notes = ["affine: beta columns are the primitive generators over -Al_0 at height 1 (height last)"]
    else:
        sf = weyl_chamber_stacky_fan(rd)
        notes = ["beta columns are the primitive chamber rays u_i in V_T-coordinates"]
    out = sf.to_json()
    out["picard"] = picard_presentation(rd, "stacky", bool(cfg.get("affine"))).to_json()
    return out, notes


def cmd_cdelta(cfg: dict):
    rd = root_datum_from(cfg)
    _, cert = c_delta(rd)
    return cert.to_json(), ["C_Delta is the preimage of the antidiagonal {(-c, c)} under (id, beta)",
                            "the lineality of the dual cone is the unit-group rank of the semigroup"]


def cmd_orbits(cfg: dict):
    rd = root_datum_from(cfg)
    affine = bool(cfg.get("affine"))
    datum = AffineRootDatum(rd) if affine else rd
    return orbit_poset(datum, affine).to_json(), ["closure order: J <= J' iff J is a subset of J'"]


def cmd_voronoi(cfg: dict):
    rd = root_datum_from(cfg) if cfg.get("group") else None
    q = form_from(cfg, rd)
    center = tuple(cfg.get("center", [0] * q.rank))
    cell = voronoi_cell(q, center)
    out = cell.to_json()
    out["gram"] = matrix_to_json(q.gram)
    if q.rank == 1:
        out["interval"] = vector_to_json(cell.interval())
    if q.is_integral:
        out["z_q"] = z_q(q).to_json()
    return out, []


def cmd_ltfan(cfg: dict):
    rd = root_datum_from(cfg) if cfg.get("group") else None
    q = form_from(cfg, rd)
    window = cfg.get("window", 2)
    out = lt_fan(q, window).to_json()
    if "t" in cfg:
        out["minimizer_check"] = lt_fan_vs_minimizers_check(q, cfg["t"], window).to_json()
    return out, [f"window {window}: only cones over cells with |center|_inf <= {window}"]


def cmd_limit(cfg: dict):
    rd = root_datum_from(cfg)
    eta = tuple(_rat(x) for x in _need(cfg, "eta"))
    J = sorted(one_param_limit_J(rd, eta))
    desc = orbit_stabilizer_descriptor(rd, J, affine=False)
    return {"J": J, "idempotent_support": [i for i in range(1, rd.rank + 1) if i not in J],
            "stabilizer": desc.to_json()}, ["e_J = sum of e_j over j not in J"]


def cmd_freudenthal(cfg: dict):
    rd = root_datum_from(cfg)
    lam = tuple(_need(cfg, "weight"))
    return freudenthal_multiplicities(rd, lam).to_json(), ["weights in fundamental-weight coordinates"]


def render_plot(cfg: dict) -> tuple[str, dict]:
    target = cfg.get("target", "fan")
    rd = root_datum_from(cfg) if cfg.get("group") else None
    if target == "alcove":
        if rd is None:
            raise InputError("alcove plot needs a group")
        doc = alcove_svg(alcove(AffineRootDatum(rd)))
    elif target == "voronoi":
        q = form_from(cfg, rd)
        if q.rank > 2:
            raise UnsupportedError("Voronoi plots need rank <= 2")
        w = cfg.get("window", 1)
        cells = [voronoi_cell(q, c) for c in itertools.product(range(-w, w + 1), repeat=q.rank)]
        doc = voronoi_svg(cells)
    else:
        q = form_from(cfg, rd)
        if q.rank == 1:
            doc = lt_fan_svg(lt_fan(q, cfg.get("window", 2)))
        elif q.rank == 2 and rd is not None:
            fan = torus_closure_fan(rd, tuple(1 for _ in range(rd.rank)))
            doc = fan_svg([c.canonical_generators() for c in fan.maximal_cones])
        else:
            raise UnsupportedError("fan plots need total ambient dimension <= 2 (rank-one LT fan or rank-two Weyl fan)")
    return doc, {"target": target}


COMMAND_FUNCS: dict[str, Callable[[dict], Any]] = {
    "rootdata": cmd_rootdata, "alcove": cmd_alcove, "parahoric": cmd_parahoric,
    "stackyfan": cmd_stackyfan, "cdelta": cmd_cdelta, "orbits": cmd_orbits, "voronoi": cmd_voronoi,
    "ltfan": cmd_ltfan, "limit": cmd_limit, "freudenthal": cmd_freudenthal,
}


def run(command: str, cfg: dict, output: str | None = None) -> dict:
    """Validate, compute, and build the envelope (no printing)."""
    validate_config(cfg)
    if command == "plot":
        if not output:
            raise InputError("plot writes SVG to a file; pass --output")
        doc, result = render_plot(cfg)
        Path(output).write_text(doc)
        result.update({"path": output, "elements": len(svg_elements(doc))})
        notes = ["SVG written to file"]
    else:
        result, notes = COMMAND_FUNCS[command](cfg)
    env = {"schema_version": SCHEMA_VERSION, "command": command, "input": cfg, "result": result,
           "notes": notes, "version": __version__}
    jsonschema.validate(env, ENVELOPE_SCHEMA)
    return env


def dumps(env: dict) -> str:
    return json.dumps(env, indent=2, sort_keys=True) + "\n"


def pretty(env: dict) -> str:
    lines = [f"{env['command']}  (schema {env['schema_version']}, version {env['version']})"]
    width = max((len(k) for k in env["result"]), default=0)
    for key in sorted(env["result"]):
        lines.append(f"  {key.ljust(width)}  {json.dumps(env['result'][key], sort_keys=True)}")
    for note in env["notes"]:
        lines.append(f"  note: {note}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON or TOML job file")
    common.add_argument("--type", help="Cartan type letter, or a full name such as B2")
    common.add_argument("--rank", type=int)
    common.add_argument("--flavor", choices=["sc", "ad", "explicit"])
    common.add_argument("--cartan", help="explicit Cartan matrix as JSON")
    common.add_argument("--gram", help="Gram matrix of a quadratic form as JSON")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")
    common.add_argument("--window", type=int, help="bound on lattice centers / betas")
    parser = argparse.ArgumentParser(prog="wonderful", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "parahoric":
            p.add_argument("--j", type=int)
        if name in ("stackyfan", "orbits"):
            p.add_argument("--affine", action="store_true")
        if name == "voronoi":
            p.add_argument("--center")
        if name == "ltfan":
            p.add_argument("--t", type=int)
        if name == "limit":
            p.add_argument("--eta")
        if name == "freudenthal":
            p.add_argument("--weight")
        if name == "plot":
            p.add_argument("--target", choices=["fan", "alcove", "voronoi"])
    return parser


def _fail(command: str, code: int, kind: str, message: str) -> int:
    payload = {"schema_version": SCHEMA_VERSION, "command": command,
               "error": {"kind": kind, "message": message}, "exit_code": code, "version": __version__}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = merge_flags(load_config(args.config), args)
        env = run(args.command, cfg, args.output if args.command == "plot" else None)
    except InputError as exc:
        return _fail(args.command, 2, "bad_config", str(exc))
    except UnsupportedError as exc:
        return _fail(args.command, 3, "unsupported", str(exc))
    except InvariantViolation as exc:
        return _fail(args.command, 4, "invariant_violation", str(exc))
    except WonderfulError as exc:
        return _fail(args.command, 4, "internal", str(exc))
    text = pretty(env) if args.pretty else dumps(env)
    if args.output and args.command != "plot":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
