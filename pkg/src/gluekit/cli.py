"""Command-line front end.

Subcommands: ``verify <file>`` runs the construction and verification
pipeline for a gluing document, ``build <file> --out DIR`` additionally
writes the constructed artifacts, ``index --n K`` prints a census of the
gluing index category (optionally as DOT), and ``report`` re-emits a saved
artifact file as JSON or DOT.

Exit codes: 0 verified, 1 verification failed, 2 invalid input or
unsupported variant, 3 internal falsification (an executed theorem
conclusion failed; must never happen on valid input).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import fintop as ft
from . import generators as gen
from . import indexcat as ic
from . import jsonio
from . import presheaves as ps
from . import ringedglue as rgl
from . import sheafglue as sg
from . import topglue as tg
from .errors import FalsificationError, UnsupportedFeature, ValidationError

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_FALSIFIED = 3

DEFAULT_SEED = 20240
DEFAULT_SAMPLES = 25


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("GLUE_SEED")
    if env is not None:
        return int(env)
    return DEFAULT_SEED


def run_pipeline(payload: dict, seed: int, samples: int = DEFAULT_SAMPLES) -> tuple[dict, dict]:
    """Construct the standard representative for the document's kind, run
    the matching verifier, and return (report, artifacts)."""
    kind = payload["kind"]
    t0 = time.perf_counter()
    if kind == "top":
        report, artifacts = _run_top(payload, seed, samples)
    elif kind == "sheaf":
        report, artifacts = _run_sheaf(payload)
    else:
        report, artifacts = _run_ringed(payload)
    report["kind"] = kind
    report["variant"] = payload.get("variant")
    report["seed"] = seed
    timings = {"total_seconds": time.perf_counter() - t0}
    artifacts["timings"] = timings
    return report, artifacts


def _run_top(payload, seed, samples):
    data = payload["data"]
    conditions = {}
    try:
        functor = tg.functor_from_data(data, validate=True)
        conditions["data_valid"] = True
    except ValidationError:
        conditions["data_valid"] = False
        return {"conditions": conditions, "verdict": False}, {}
    rep = tg.standard_representative(functor)
    glued_report = tg.verify_glued(rep.space, rep.iota, functor)
    verdict = glued_report.pop("verdict")
    conditions.update(glued_report)
    rng = random.Random(seed)
    sampled = True
    for _ in range(samples):
        cone = gen.random_cone(rng, functor, rep)
        tg.is_cone(cone.apex, cone.legs, functor)
        tg.mediating_morphism(cone, rep, functor)
        if tg.count_mediating_functions(cone, rep, functor) != 1:
            raise FalsificationError("sampled mediating morphism is not unique")
    conditions["universal_sampled"] = sampled
    verdict = verdict and conditions["data_valid"] and sampled
    artifacts = {
        "glued_space": ft.space_to_json(rep.space),
        "chart_images": {
            str(i): sorted(rep.iota[ic.single(i)].image_of(range(functor.objects[ic.single(i)].n)))
            for i in range(functor.n)
        },
    }
    return {"conditions": conditions, "verdict": verdict}, artifacts


def _run_sheaf(payload):
    data = payload["data"]
    conditions = {}
    try:
        functor = sg.sheaf_functor_from_data(data, require_sheaves=True)
        conditions["data_valid"] = True
    except ValidationError:
        conditions["data_valid"] = False
        return {"conditions": conditions, "verdict": False}, {}
    lim = sg.build_limit_sheaf(functor)
    sheaf_ok, cert = ps.is_sheaf(lim.carrier)
    if not sheaf_ok:
        raise FalsificationError(f"limit of sheaves is not a sheaf: {cert}")
    conditions["limit_is_sheaf"] = True
    self_report = sg.verify_sheaf_glued(lim.carrier, lim.legs, functor, lim)
    if not self_report["verdict"]:
        raise FalsificationError(f"limit sheaf failed its own verification: {self_report}")
    conditions.update({k: v for k, v in self_report.items() if k != "verdict"})
    from . import abgroups as ab

    artifacts = {
        "section_invariants": {
            jsonio.open_key(v): list(ab.invariants(lim.carrier.group(v))[1]) + ["Z"] * ab.invariants(lim.carrier.group(v))[0]
            for v in lim.carrier.opens()
        }
    }
    return {"conditions": conditions, "verdict": True}, artifacts


def _run_ringed(payload):
    functor = payload["data"]
    conditions = {}
    validation = rgl.validate_ringed_functor(functor)
    conditions["data_valid"] = validation["ok"]
    if not validation["ok"]:
        return {"conditions": conditions, "verdict": False}, {}
    glued = rgl.glue_ringed(functor)
    self_report = rgl.verify_ringed_glued(
        glued.space, glued.top_legs, glued.projections, functor, glued
    )
    if not self_report["verdict"]:
        raise FalsificationError(f"glued ringed space failed its own verification: {self_report}")
    conditions.update({k: v for k, v in self_report.items() if k != "verdict"})
    artifacts = {
        "glued_space": ft.space_to_json(glued.space.top),
        "section_orders": {
            jsonio.open_key(v): glued.space.ring(v).order
            for v in glued.space.top.sorted_opens()
        },
    }
    return {"conditions": conditions, "verdict": True}, artifacts


def emit_report(report: dict, path: str | None) -> str:
    """Deterministic, sorted-key JSON; timings are emitted separately."""
    text = json.dumps(report, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _load(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def _apply_variant_override(payload: dict, variant: str | None) -> dict:
    if variant is None:
        return payload
    payload["variant"] = variant
    if payload["kind"] == "top":
        payload["data"].open_variant = variant == "otop"
    elif payload["kind"] == "ringed":
        payload["data"].variant = variant
    return payload


def _verify_one(path: str, args) -> int:
    payload = jsonio.parse_document(_load(path))
    payload = _apply_variant_override(payload, args.variant)
    if payload["variant"] == "sch":
        raise UnsupportedFeature("scheme verification unsupported")
    report, artifacts = run_pipeline(payload, _seed(args), args.samples)
    text = emit_report(report, args.out)
    sys.stdout.write(text)
    timing = artifacts.get("timings", {})
    sys.stderr.write(f"timings: {json.dumps(timing, sort_keys=True)}\n")
    return EXIT_OK if report["verdict"] else EXIT_VERIFY_FAILED


def _cmd_verify(args) -> int:
    if os.path.isdir(args.file):
        # batch mode: one document per file, worst exit code wins
        worst = EXIT_OK
        for name in sorted(os.listdir(args.file)):
            if not name.endswith(".json"):
                continue
            path = os.path.join(args.file, name)
            try:
                code = _verify_one(path, args)
            except UnsupportedFeature as exc:
                sys.stderr.write(f"error: {path}: {exc}\n")
                code = EXIT_INVALID_INPUT
            except ValidationError as exc:
                sys.stderr.write(f"error: {path}: {exc}\n")
                code = EXIT_INVALID_INPUT
            sys.stdout.write(f"{name}: exit {code}\n")
            worst = max(worst, code)
        return worst
    return _verify_one(args.file, args)


def _cmd_build(args) -> int:
    payload = jsonio.parse_document(_load(args.file))
    payload = _apply_variant_override(payload, args.variant)
    if payload["variant"] == "sch":
        raise UnsupportedFeature("scheme verification unsupported")
    report, artifacts = run_pipeline(payload, _seed(args), args.samples)
    os.makedirs(args.out, exist_ok=True)
    emit_report(report, os.path.join(args.out, "report.json"))
    timings = artifacts.pop("timings", {})
    with open(os.path.join(args.out, "artifacts.json"), "w", encoding="utf-8") as fh:
        json.dump(artifacts, fh, sort_keys=True, indent=2)
        fh.write("\n")
    with open(os.path.join(args.out, "timings.json"), "w", encoding="utf-8") as fh:
        json.dump(timings, fh, sort_keys=True)
        fh.write("\n")
    if "glued_space" in artifacts:
        space = ft.space_from_json(artifacts["glued_space"])
        with open(os.path.join(args.out, "glued_space.dot"), "w", encoding="utf-8") as fh:
            fh.write(ft.specialization_dot(space, "glued") + "\n")
    sys.stdout.write(f"wrote {args.out}\n")
    return EXIT_OK if report["verdict"] else EXIT_VERIFY_FAILED


def _cmd_index(args) -> int:
    cat = ic.enumerate_category(args.n)
    sys.stdout.write(
        f"n={args.n}: {len(cat.objects)} objects, {cat.morphism_count()} morphisms\n"
    )
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(ic.category_dot(cat) + "\n")
        sys.stdout.write(f"wrote {args.dot}\n")
    return EXIT_OK


def _cmd_report(args) -> int:
    doc = _load(getattr(args, "in"))
    if args.format == "json":
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        if "glued_space" not in doc:
            raise ValidationError("artifact file has no glued_space to draw")
        space = ft.space_from_json(doc["glued_space"])
        text = ft.specialization_dot(space, "glued") + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glue", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    variant_choices = ("top", "otop", "rts", "lrts", "sch")

    p_verify = sub.add_parser("verify", help="verify a gluing document")
    p_verify.add_argument("file")
    p_verify.add_argument("--out", default=None, help="write the report JSON here")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p_verify.add_argument("--variant", choices=variant_choices, default=None,
                          help="override the document's variant")
    p_verify.set_defaults(func=_cmd_verify)

    p_build = sub.add_parser("build", help="verify and write artifacts")
    p_build.add_argument("file")
    p_build.add_argument("--out", required=True)
    p_build.add_argument("--seed", type=int, default=None)
    p_build.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p_build.add_argument("--variant", choices=variant_choices, default=None,
                         help="override the document's variant")
    p_build.set_defaults(func=_cmd_build)

    p_index = sub.add_parser("index", help="census of the gluing index category")
    p_index.add_argument("--n", type=int, required=True)
    p_index.add_argument("--dot", default=None)
    p_index.set_defaults(func=_cmd_index)

    p_report = sub.add_parser("report", help="re-emit a saved artifact file")
    p_report.add_argument("--in", required=True)
    p_report.add_argument("--format", choices=("json", "dot"), default="json")
    p_report.add_argument("--out", default=None)
    p_report.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedFeature as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID_INPUT
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID_INPUT
    except FalsificationError as exc:
        sys.stderr.write(f"FALSIFICATION: {exc}\n")
        return EXIT_FALSIFIED


if __name__ == "__main__":
    sys.exit(main())
