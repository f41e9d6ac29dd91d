"""Command-line entry point.

Commands::

    liecheck parse FILE                        syntax check + canonical dump
    liecheck check FILE --pair P --operator I  admissibility verdict
    liecheck torsion FILE --pair P --operator I [--mode all|complement|ad]
    liecheck integrability FILE --pair P --operator J
    liecheck harness FILE --pair P --operator I [--samples N --step H --seed S --theta T]

Exit codes: 0 the checked property holds, 1 it fails (a mathematical
verdict, with an exact witness in the report), 2 usage or input error.
The two are never conflated: a malformed file, an unknown name or a violated
precondition is always 2.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

import numpy as np

from . import harness as hz
from .complexstruct import check_integrable
from .errors import LieCheckError
from .exact import format_scalar
from .operators import check_admissible, check_split_admissible
from .specfile import SpecfileError, build, parse, serialize
from .torsion import check_nijenhuis, check_nijenhuis_ad


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _vector_json(alg, v) -> dict:
    return {
        "coords": [format_scalar(x) for x in v],
        "pretty": alg.format_element(v),
    }


def _witness_json(alg, witness: Optional[dict]) -> list:
    if witness is None:
        return []
    out = {}
    for key, val in witness.items():
        if isinstance(val, tuple):
            out[key] = _vector_json(alg, val)
        else:
            out[key] = val
    return [out]


def _emit(args, payload: dict, text_lines: list):
    if args.report == "json":
        body = json.dumps(payload, indent=2)
    else:
        body = "\n".join(text_lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")
    else:
        print(body)


def _load(args):
    with open(args.file, "r", encoding="utf-8") as fh:
        text = fh.read()
    doc = parse(text)
    return doc, build(doc)


def _pick(table: dict, requested: Optional[str], what: str):
    if requested is not None:
        if requested not in table:
            raise LieCheckError(f"no {what} named {requested!r} in the input")
        return table[requested]
    if len(table) == 1:
        return next(iter(table.values()))
    raise LieCheckError(
        f"--{what} is required (the input declares {len(table)} of them)"
    )


def _base_payload(command: str, args) -> dict:
    return {
        "command": command,
        "input": args.file,
        "verdict": None,
        "witnesses": [],
        "dims": {},
        "tolerances": {},
        "seed": None,
        "elapsed_ms": None,
    }


def _finish(payload: dict, started: float):
    payload["elapsed_ms"] = float((time.perf_counter() - started) * 1000.0)


def cmd_parse(args) -> int:
    with open(args.file, "r", encoding="utf-8") as fh:
        text = fh.read()
    doc = parse(text)
    canonical = serialize(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(canonical)
    else:
        sys.stdout.write(canonical)
    return 0


def cmd_check(args) -> int:
    started = time.perf_counter()
    doc, built = _load(args)
    pair = _pick(built.pairs, args.pair, "pair")
    op = _pick(built.operators, args.operator, "operator")
    report = check_admissible(pair, op)
    split_report = None
    if pair.m is not None:
        split_report = check_split_admissible(pair, op)

    payload = _base_payload("check", args)
    payload["verdict"] = report.holds
    payload["scope"] = report.scope
    payload["clauses"] = list(report.clauses)
    payload["failed_clause"] = report.failed_clause
    payload["witnesses"] = _witness_json(pair.alg, report.witness)
    payload["dims"] = {"g": pair.alg.dim, "k": pair.k.dim}
    if split_report is not None:
        payload["split_admissible"] = split_report.holds
        payload["split_failed_clause"] = split_report.failed_clause
    _finish(payload, started)

    lines = [
        f"admissible: {'yes' if report.holds else 'no'} (scope: {report.scope})",
        f"clauses evaluated: {', '.join(report.clauses)}",
    ]
    if not report.holds:
        lines.append(f"failed clause: {report.failed_clause}")
        lines.extend(_witness_lines(pair.alg, report.witness))
    if split_report is not None:
        lines.append(f"split admissible: {'yes' if split_report.holds else 'no'}")
        if not split_report.holds:
            lines.append(f"split failed clause: {split_report.failed_clause}")
    _emit(args, payload, lines)
    return 0 if report.holds else 1


def _witness_lines(alg, witness: Optional[dict]) -> list:
    if witness is None:
        return []
    lines = ["witness:"]
    for key, val in witness.items():
        if isinstance(val, tuple):
            coords = "(" + ", ".join(format_scalar(x) for x in val) + ")"
            lines.append(f"  {key} = {alg.format_element(val)}   coords {coords}")
        else:
            lines.append(f"  {key} = {val}")
    return lines


def cmd_torsion(args) -> int:
    started = time.perf_counter()
    doc, built = _load(args)
    pair = _pick(built.pairs, args.pair, "pair")
    op = _pick(built.operators, args.operator, "operator")
    if args.mode == "ad":
        if op.ad_generator is None:
            raise LieCheckError("--mode ad needs an operator declared as ad(...)")
        report = check_nijenhuis_ad(pair, op.ad_generator)
    elif args.mode == "all":
        report = check_nijenhuis(pair, op, pairs="all")
    elif args.mode == "complement":
        report = check_nijenhuis(pair, op, pairs="complement")
    else:
        report = check_nijenhuis(pair, op)

    payload = _base_payload("torsion", args)
    payload["verdict"] = report.verdict
    payload["mode"] = report.mode
    payload["checked_pairs"] = report.checked_pairs
    payload["dims"] = {"g": pair.alg.dim, "k": pair.k.dim}
    if report.witness is not None:
        v, w, beta = report.witness
        payload["witnesses"] = [{
            "v": _vector_json(pair.alg, v),
            "w": _vector_json(pair.alg, w),
            "torsion_value": _vector_json(pair.alg, beta),
        }]
    _finish(payload, started)

    lines = [
        f"nijenhuis: {'yes' if report.verdict else 'no'} "
        f"({report.mode}, {report.checked_pairs} pairs checked)",
    ]
    if report.witness is not None:
        v, w, beta = report.witness
        lines.append(f"witness v = {pair.alg.format_element(v)}")
        lines.append(f"witness w = {pair.alg.format_element(w)}")
        lines.append(f"torsion value = {pair.alg.format_element(beta)}")
        lines.append(
            "coords: v=(" + ", ".join(format_scalar(x) for x in v) + ")  w=("
            + ", ".join(format_scalar(x) for x in w) + ")  value=("
            + ", ".join(format_scalar(x) for x in beta) + ")"
        )
    _emit(args, payload, lines)
    return 0 if report.verdict else 1


def cmd_integrability(args) -> int:
    started = time.perf_counter()
    doc, built = _load(args)
    pair = _pick(built.pairs, args.pair, "pair")
    op = _pick(built.operators, args.operator, "operator")
    report = check_integrable(pair, op)

    calg = pair.alg
    payload = _base_payload("integrability", args)
    payload["verdict"] = report.integrable
    payload["ac_admissible"] = report.ac_admissible
    payload["z_plus_closed"] = report.z_plus_closed
    payload["nijenhuis_verdict"] = report.nijenhuis_verdict
    payload["dims"] = {
        "g": calg.dim,
        "k": pair.k.dim,
        "z_plus": report.z_plus.dim,
        "z_minus": report.z_minus.dim,
    }
    payload["z_plus_basis"] = [_vector_json(calg, v) for v in report.z_plus.vectors()]
    payload["z_plus_mod_k"] = [_vector_json(calg, v) for v in report.z_plus_mod_k]
    if report.split is not None:
        payload["split_diagnostics"] = {
            "sum_is_all": report.split.sum_is_all,
            "intersection_is_kc": report.split.intersection_is_kc,
            "eigenspace_decomposition_holds": report.split.eigenspace_decomposition_holds,
        }
    if report.witness is not None:
        x, y, br = report.witness
        payload["witnesses"] = [{
            "x": _vector_json(calg, x),
            "y": _vector_json(calg, y),
            "bracket": _vector_json(calg, br),
        }]
    _finish(payload, started)

    lines = [
        f"integrable: {'yes' if report.integrable else 'no'}",
        f"dim Z+: {report.z_plus.dim}   (Z+ closed under bracket: "
        f"{'yes' if report.z_plus_closed else 'no'}; torsion verdict agrees)",
        "Z+ basis:",
    ]
    lines.extend(f"  {calg.format_element(v)}" for v in report.z_plus.vectors())
    lines.append("Z+ modulo k_C:")
    lines.extend(f"  {calg.format_element(v)}" for v in report.z_plus_mod_k)
    if report.split is not None:
        d = report.split
        lines.append(
            "split diagnostics: sum_is_all="
            f"{d.sum_is_all} intersection_is_kc={d.intersection_is_kc} "
            f"eigenspace_decomposition={d.eigenspace_decomposition_holds}"
        )
    if report.witness is not None:
        x, y, br = report.witness
        lines.append(f"witness [x,y] outside Z+: x = {calg.format_element(x)}, "
                     f"y = {calg.format_element(y)}")
    _emit(args, payload, lines)
    return 0 if report.integrable else 1


def cmd_harness(args) -> int:
    started = time.perf_counter()
    if not (hz.MIN_STEP <= args.step <= hz.MAX_STEP):
        raise LieCheckError(
            f"--step must lie in [{hz.MIN_STEP}, {hz.MAX_STEP}]"
        )
    if not (1 <= args.samples <= 10 ** 6):
        raise LieCheckError("--samples must lie in [1, 1000000]")
    doc, built = _load(args)
    pair = _pick(built.pairs, args.pair, "pair")
    op = _pick(built.operators, args.operator, "operator")
    report = hz.run_harness(pair, op, samples=args.samples, h=args.step,
                            seed=args.seed, theta=args.theta)

    payload = _base_payload("harness", args)
    payload["verdict"] = report.passed
    payload["model"] = report.model_kind
    payload["seed"] = report.seed
    payload["tolerances"] = {k: _fmt_float(v) for k, v in report.tolerances.items()}
    payload["h"] = _fmt_float(report.h)
    payload["nijenhuis_exact"] = report.nijenhuis_exact
    payload["max_deviation"] = _fmt_float(report.max_deviation)
    payload["max_numerical_torsion"] = _fmt_float(report.max_numerical)
    payload["relation_residuals"] = {
        "alpha_related": _fmt_float(report.relation.alpha_related_max),
        "base_consistency": _fmt_float(report.relation.base_consistency_max),
    }
    if report.relation.stabilizer_max is not None:
        payload["relation_residuals"]["stabilizer"] = _fmt_float(
            report.relation.stabilizer_max)
    if report.relation.rep_independence_max is not None:
        payload["relation_residuals"]["representative_independence"] = _fmt_float(
            report.relation.rep_independence_max)
    if report.relation.flip_pushforward is not None:
        payload["sphere_demos"] = {
            "pushforward_of_field": [_fmt_float(x) for x in report.relation.flip_pushforward],
            "field_at_moved_point": [_fmt_float(x) for x in report.relation.flip_field_at_image],
            "bundle_map_of_field": [_fmt_float(x) for x in report.relation.rotation_bundle_value],
            "field_of_mapped_element": [_fmt_float(x) for x in report.relation.rotation_field_value],
            "theta": _fmt_float(report.relation.theta),
        }
    payload["samples"] = [
        {
            "deviation": _fmt_float(s.deviation),
            "numerical_max": _fmt_float(float(np.max(np.abs(s.numerical)))),
            "predicted_max": _fmt_float(float(np.max(np.abs(s.predicted)))),
        }
        for s in report.samples
    ]
    _finish(payload, started)

    lines = [
        f"harness: {'pass' if report.passed else 'FAIL'} on {report.model_kind} model",
        f"samples: {len(report.samples)}  step: {_fmt_float(report.h)}  "
        f"seed: {report.seed}",
        f"max |numerical - predicted|: {_fmt_float(report.max_deviation)}",
        f"exact torsion verdict: {'holds' if report.nijenhuis_exact else 'fails'}"
        + (f"  (max |numerical|: {_fmt_float(report.max_numerical)})"
           if report.nijenhuis_exact else ""),
        f"relation residual (worst): {_fmt_float(report.relation.max_residual)}",
    ]
    if args.out and args.out.endswith(".csv"):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("index,deviation,numerical_max,predicted_max\n")
            for idx, s in enumerate(report.samples):
                fh.write(
                    f"{idx},{_fmt_float(s.deviation)},"
                    f"{_fmt_float(float(np.max(np.abs(s.numerical))))},"
                    f"{_fmt_float(float(np.max(np.abs(s.predicted))))}\n"
                )
        print("\n".join(lines))
        return 0 if report.passed else 1
    _emit(args, payload, lines)
    return 0 if report.passed else 1


def _build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="liecheck",
        description="Exact checks for operators on homogeneous pairs of Lie algebras",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_names=True):
        p.add_argument("file", help="input .lie file")
        if with_names:
            p.add_argument("--pair", help="pair name (optional when unique)")
            p.add_argument("--operator", help="operator name (optional when unique)")
        p.add_argument("--report", choices=("text", "json"), default="text")
        p.add_argument("--out", help="write the report to this path")

    p = sub.add_parser("parse", help="syntax check and canonical dump")
    common(p, with_names=False)
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("check", help="admissibility verdict")
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("torsion", help="Nijenhuis torsion verdict")
    common(p)
    p.add_argument("--mode", choices=("all", "complement", "ad"),
                   help="pair iteration mode (default: complement when declared)")
    p.set_defaults(fn=cmd_torsion)

    p = sub.add_parser("integrability", help="almost complex integrability verdict")
    common(p)
    p.set_defaults(fn=cmd_integrability)

    p = sub.add_parser("harness", help="numerical cross-validation")
    common(p)
    p.add_argument("--samples", type=int, default=hz.DEFAULT_SAMPLES)
    p.add_argument("--step", type=float, default=hz.DEFAULT_STEP)
    p.add_argument("--seed", type=int, default=hz.DEFAULT_SEED)
    p.add_argument("--theta", type=float, default=1.0)
    p.set_defaults(fn=cmd_harness)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = _build_arg_parser()
    args = ap.parse_args(argv)
    if not hasattr(args, "mode"):
        args.mode = None
    try:
        return args.fn(args)
    except SpecfileError as exc:
        print(f"error: {args.file}:{exc}", file=sys.stderr)
        return 2
    except LieCheckError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main():
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
