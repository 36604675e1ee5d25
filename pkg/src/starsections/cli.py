"""Command-line front end.

Subcommands: ``functional`` (evaluate one body), ``verify`` (run a named
theorem suite), ``experiment`` (perturbation signs, sharpness schedule,
shape search).  Emits JSON report bundles and CSV tables; all JSON carries a
``format_version`` field and validates against the shipped schema.

Exit codes: 0 all-pass, 1 inequality violation, 2 usage error, 3 numeric
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import verify as verify_mod
from .bodies import (
    ArcsBase,
    StarBody,
    body_from_json_dict,
    cap_base,
    equality_cone_base,
    full_sphere_base,
    make_ball,
    make_cone,
    make_ellipsoid,
    make_lune,
    make_perturbed_ball,
)
from .errors import GeometryError
from .functionals import (
    QuadratureConfig,
    busemann_functional_with_error,
    gaussian_measure,
    section_volume,
    volume,
)
from .quadrature import build_sphere_rule
from .spaces import SpaceSpec

THEOREM_CHOICES = (
    "min2d", "cone-max", "lune-max", "hyperbolic", "min-nd",
    "gaussian", "prop4.1", "prop4.2", "busemann-euclidean",
)

ENV_THREADS = "STARSECTIONS_THREADS"


class UsageError(ValueError):
    pass


def parse_space(text: str) -> SpaceSpec:
    try:
        tag, dim = text.split(":")
        delta = {"s+": 1, "h": -1, "e": 0}[tag]
        return SpaceSpec(delta, int(dim))
    except (ValueError, KeyError) as exc:
        raise UsageError(
            f"--space: expected s+:<n>, h:<n> or e:<n>, got {text!r}"
        ) from exc


def _parse_kv(text: str) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"--body: expected key=val, got {item!r}")
        key, val = item.split("=", 1)
        out[key] = val
    return out


def parse_body(text: str, space: SpaceSpec | None) -> StarBody:
    """Constructor mini-language ``kind:key=val,...`` mirroring the JSON fields."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return body_from_json_dict(json.load(fh))
    kind, _, rest = text.partition(":")
    params = _parse_kv(rest)
    try:
        if kind == "ball":
            if space is None:
                raise UsageError("--body ball requires --space")
            return make_ball(space, float(params["r"]))
        if kind == "ellipsoid":
            axes = [float(v) for v in params["semiaxes"].split(";")]
            return make_ellipsoid(axes)
        if kind == "lune":
            return make_lune(float(params["w"]))
        if kind == "perturbed":
            if space is None:
                raise UsageError("--body perturbed requires --space")
            return make_perturbed_ball(space, float(params["r"]), float(params["beta"]),
                                       int(params["k"]))
        if kind == "cone":
            if space is None:
                raise UsageError("--body cone requires --space")
            if "arcs" in params:
                arcs = []
                for pair in params["arcs"].split(";"):
                    a, b = pair.split(":")
                    arcs.append((float(a), float(b)))
                return make_cone(space, ArcsBase(tuple(arcs)))
            if "cap" in params:
                axis = np.zeros(space.dim)
                axis[0] = 1.0
                return make_cone(space, cap_base(axis, float(params["cap"])))
            if "equality" in params:
                return make_cone(space, equality_cone_base(space.dim, float(params["equality"])))
            if "full" in params:
                return make_cone(space, full_sphere_base(space.dim))
            raise UsageError("--body cone needs arcs=, cap=, equality= or full=1")
    except UsageError:
        raise
    except KeyError as exc:
        raise UsageError(f"--body {kind}: missing parameter {exc.args[0]!r}") from exc
    except (ValueError, GeometryError) as exc:
        raise UsageError(f"--body {kind}: {exc}") from exc
    raise UsageError(f"--body: unknown body kind {kind!r}")


def parse_measure(name: str | None):
    if name in (None, "uniform"):
        return None
    if name == "gaussian":
        return gaussian_measure()
    raise UsageError(f"--measure: unknown measure {name!r} (uniform or gaussian)")


def make_config(args) -> QuadratureConfig:
    return QuadratureConfig(
        outer_degree=args.outer_degree,
        inner_degree=args.inner_degree,
        radial_tol=args.radial_tol,
    )


def _write_json(path: str, doc: dict):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _write_csv(path: str, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write("# format_version=1\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _emit(path: str | None, json_doc=None, csv_data=None):
    if path is None:
        return
    if path.endswith(".json"):
        if json_doc is None:
            raise UsageError("--out: no JSON form for this command")
        _write_json(path, json_doc)
    elif path.endswith(".csv"):
        if csv_data is None:
            raise UsageError("--out: no CSV form for this command")
        _write_csv(path, *csv_data)
    else:
        raise UsageError("--out: path must end in .json or .csv")


def cmd_functional(args) -> int:
    space = parse_space(args.space) if args.space else None
    body = parse_body(args.body, space)
    space = body.space
    mu = parse_measure(args.measure)
    config = make_config(args)
    vol = volume(body, mu, config)
    functional, err = busemann_functional_with_error(
        body, mu, normalized=args.normalized, exponent=args.exponent, config=config
    )
    print(f"space: delta={space.delta} dim={space.dim}")
    print(f"volume: {vol:.12g}")
    sections = []
    if args.sections:
        rule = build_sphere_rule(space.dim - 1, 11)
        take = np.linspace(0, len(rule.nodes) - 1, min(args.sections, len(rule.nodes))).astype(int)
        print("sections (direction -> section volume):")
        for idx in take:
            xi = rule.nodes[idx]
            sv = section_volume(body, xi, mu, config)
            sections.append({"direction": xi.tolist(), "section_volume": sv})
            pretty = ", ".join(f"{c:+.4f}" for c in xi)
            print(f"  [{pretty}] -> {sv:.10g}")
    print(f"functional: {functional:.12g}  (error estimate {err:.3g})")
    doc = {
        "format_version": "1",
        "command": "functional",
        "space": {"delta": space.delta, "dim": space.dim},
        "body": body.to_json_dict(),
        "measure": args.measure or "uniform",
        "volume": vol,
        "functional": functional,
        "error_estimate": err,
        "exponent": args.exponent if args.exponent is not None else space.dim,
        "normalized": bool(args.normalized),
        "sections": sections,
        "quadrature": config.describe(space.dim),
    }
    _emit(args.out, json_doc=doc)
    if args.dump_body:
        _write_json(args.dump_body, body.to_json_dict())
    return 0


def cmd_verify(args) -> int:
    theorem = args.theorem
    if args.body:
        space = parse_space(args.space) if args.space else None
        bodies = [parse_body(spec, space) for spec in args.body]
    elif theorem == "lune-max" and args.w is not None:
        bodies = [make_lune(args.w)]
    else:
        bodies = verify_mod.suite_bodies(theorem, dim=args.dim, random_count=args.random,
                                         seed=args.seed)
        if args.w is not None and theorem == "lune-max":
            bodies.insert(0, make_lune(args.w))
    config = None
    if args.outer_degree or args.inner_degree:
        config = make_config(args)
    reports = verify_mod.run_theorem_suite(theorem, bodies, config=config,
                                           workers=args.threads)
    all_pass = all(r.verdict for r in reports)
    for r in reports:
        tag = f" [{r.variant}]" if r.variant else ""
        status = "pass" if r.verdict else "FAIL"
        print(f"{status}  {r.theorem_id}{tag}  body={r.body_kind:<10} "
              f"lhs={r.lhs:.10g} rhs={r.rhs:.10g} rel_gap={r.rel_gap:+.3e}")
    print(f"suite: {'pass' if all_pass else 'FAIL'} ({len(reports)} checks)")
    doc = {
        "format_version": "1",
        "theorem_id": theorem,
        "reports": [r.to_json_dict() for r in reports],
        "suite_verdict": "pass" if all_pass else "fail",
    }
    _emit(args.out, json_doc=doc, csv_data=(
        ["theorem_id", "variant", "body_kind", "lhs", "rhs", "gap", "rel_gap", "verdict"],
        [[r.theorem_id, r.variant, r.body_kind, r.lhs, r.rhs, r.gap, r.rel_gap,
          "pass" if r.verdict else "fail"] for r in reports],
    ))
    return 0 if all_pass else 1


def cmd_experiment(args) -> int:
    if args.mode == "perturbation":
        ks = [int(v) for v in args.k.split(",")]
        betas = [float(v) for v in args.beta.split(",")] if args.beta else None
        rows = []
        ok = True
        for k in ks:
            res = verify_mod.perturbation_sign_experiment(args.dim, args.r, k, betas=betas)
            rows.append([args.dim, args.r, k, res.beta, res.delta_norm, res.eps_norm,
                         res.difference, res.error_estimate, res.predicted_sign,
                         res.observed_sign, res.conclusive, res.ratio, res.predicted_ratio])
            status = "conclusive" if res.conclusive else "INCONCLUSIVE"
            match = "match" if res.sign_matches else "MISMATCH"
            print(f"k={k}: difference={res.difference:+.6e} predicted={res.predicted_sign:+d} "
                  f"observed={res.observed_sign:+d} ({status}, {match})")
            ok = ok and res.sign_matches
        header = ["n", "r", "k", "beta", "delta_norm", "eps_norm", "difference",
                  "error_estimate", "predicted_sign", "observed_sign", "conclusive",
                  "ratio", "predicted_ratio"]
        _emit(args.out, csv_data=(header, rows))
        return 0 if ok else 1
    if args.mode == "sharpness":
        alphas = [float(v) for v in args.alphas.split(",")] if args.alphas else None
        epsilons = [float(v) for v in args.epsilons.split(",")] if args.epsilons else None
        rows = verify_mod.sharpness_schedule(args.dim, args.t, alphas, epsilons)
        print(f"target constant: {rows[0]['target']:.10g}")
        for row in rows:
            print(f"alpha={row['alpha']:<6g} eps={row['eps']:<6g} "
                  f"normalized={row['normalized']:.8g} excess={row['excess']:+.3%}")
        header = ["alpha", "eps", "volume", "functional", "normalized", "target", "excess"]
        _emit(args.out, csv_data=(header, [[r[h] for h in header] for r in rows]))
        final_ok = abs(rows[-1]["excess"]) <= 0.05 and all(r["excess"] >= -1e-9 for r in rows)
        return 0 if final_ok else 1
    if args.mode == "search":
        space = parse_space(args.space)
        vol = args.volume if args.volume is not None else (
            2.0 if space.delta == 1 else 2.0 * math.pi * 0.3
        )
        trace = verify_mod.extremizer_search(
            space, args.body_class, vol, sense=args.sense,
            budget=args.budget, seed=args.seed,
        )
        print(f"search: {trace.accepted} accepted / {trace.evaluations} evaluated, "
              f"best objective {trace.best_objective:.10g}")
        header = ["iteration", "objective", "volume_drift"]
        _emit(args.out, csv_data=(header, [list(s) for s in trace.steps]))
        return 0
    raise UsageError(f"unknown experiment mode {args.mode!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starsections",
        description="Star bodies in curved spaces: section functionals and inequality checks.",
    )
    default_threads = int(os.environ.get(ENV_THREADS, os.cpu_count() or 1))
    sub = parser.add_subparsers(dest="command", required=True)

    def add_quad_args(p):
        p.add_argument("--outer-degree", type=int, default=None)
        p.add_argument("--inner-degree", type=int, default=None)
        p.add_argument("--radial-tol", type=float, default=1e-12)
        p.add_argument("--threads", type=int, default=default_threads)
        p.add_argument("--out", default=None, help="write report to .json or .csv")

    p_fun = sub.add_parser("functional", help="evaluate volume, sections, functional")
    p_fun.add_argument("--space", default=None, help="s+:<n>, h:<n> or e:<n>")
    p_fun.add_argument("--body", required=True, help="kind:key=val,... or @file.json")
    p_fun.add_argument("--measure", default=None, choices=["uniform", "gaussian"])
    p_fun.add_argument("--normalized", action="store_true")
    p_fun.add_argument("--exponent", type=int, default=None)
    p_fun.add_argument("--sections", type=int, default=0, metavar="N",
                       help="print a table of N section volumes")
    p_fun.add_argument("--dump-body", default=None, help="write the body JSON here")
    add_quad_args(p_fun)
    p_fun.set_defaults(fn=cmd_functional)

    p_ver = sub.add_parser("verify", help="run a named theorem suite")
    p_ver.add_argument("--theorem", required=True, choices=THEOREM_CHOICES)
    p_ver.add_argument("--space", default=None)
    p_ver.add_argument("--body", action="append", default=None,
                       help="explicit body spec (repeatable)")
    p_ver.add_argument("--dim", type=int, default=None)
    p_ver.add_argument("--random", type=int, default=0, help="number of random bodies")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--w", type=float, default=None, help="lune half-width")
    add_quad_args(p_ver)
    p_ver.set_defaults(fn=cmd_verify)

    p_exp = sub.add_parser("experiment", help="perturbation | sharpness | search")
    p_exp.add_argument("mode", choices=["perturbation", "sharpness", "search"])
    p_exp.add_argument("--dim", type=int, default=3)
    p_exp.add_argument("--r", type=float, default=math.pi / 4)
    p_exp.add_argument("--k", default="2,4")
    p_exp.add_argument("--beta", default=None, help="comma-separated beta schedule")
    p_exp.add_argument("--t", type=float, default=0.5)
    p_exp.add_argument("--alphas", default=None)
    p_exp.add_argument("--epsilons", default=None)
    p_exp.add_argument("--space", default="s+:2")
    p_exp.add_argument("--class", dest="body_class", default="sym-star",
                       choices=["star", "sym-star", "convex", "sym-convex"])
    p_exp.add_argument("--sense", default="max", choices=["max", "min"])
    p_exp.add_argument("--volume", type=float, default=None)
    p_exp.add_argument("--budget", type=int, default=4000)
    p_exp.add_argument("--seed", type=int, default=0)
    add_quad_args(p_exp)
    p_exp.set_defaults(fn=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already; normalize others
        return int(exc.code) if exc.code else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
