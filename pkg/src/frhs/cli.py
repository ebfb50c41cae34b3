"""Command-line front end.

Exit codes: 0 pass, 1 geometric failure, 2 input error, 3 inconclusive,
4 precondition gate (curvature on a model that is not naturally reductive).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from .catalog import catalog_entry, catalog_export, catalog_list
from .config import RunConfig, Tolerances
from .curvature import curvature_scan, is_certified
from .errors import FrhsError, UnknownId
from .metric import check_admissibility
from .modelfile import load_model
from .reductivity import Verdict, reductivity_verdict
from .tensors import verify_tensors

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_GATE = 0, 1, 2, 3, 4

CSV_HEADER = ["y", "u", "r", "K_general", "K_closed", "delta", "theta"]


class InputError(Exception):
    pass


def _split_tol_flags(argv):
    """Pull ``--tol.<name> VALUE`` / ``--tol.<name>=VALUE`` out of argv."""
    rest, tols = [], {}
    it = iter(argv)
    for tok in it:
        if tok.startswith("--tol."):
            name, eq, value = tok[len("--tol."):].partition("=")
            if not eq:
                value = next(it, None)
                if value is None:
                    raise InputError(f"--tol.{name} needs a value")
            if name not in Tolerances.names():
                raise InputError(f"unknown tolerance {name!r}; known: {', '.join(Tolerances.names())}")
            try:
                tols[name] = float(value)
            except ValueError:
                raise InputError(f"--tol.{name}: {value!r} is not a number") from None
        else:
            rest.append(tok)
    return rest, tols


def _build_parser():
    p = argparse.ArgumentParser(prog="frhs", description="Workbench for invariant (alpha, beta)-metrics on homogeneous spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("model", help="path to a JSON model file")
        sp.add_argument("--seed", type=int, default=None, help="random seed (env FRHS_SEED is the fallback)")
        sp.add_argument("--samples", type=int, default=None, help="number of sampled flagpoles")
        sp.add_argument("--format", choices=["json", "table", "csv"], default="table")

    sp = sub.add_parser("check", help="admissibility and natural reductivity report")
    common(sp)

    sp = sub.add_parser("curvature", help="flag curvature scan by both routes")
    common(sp)
    sp.add_argument("--ny", type=int, default=16, help="number of flagpoles")
    sp.add_argument("--nplanes", type=int, default=16, help="planes per flagpole")
    sp.add_argument("-o", "--out", default=None, help="CSV output path; summary goes next to it as .json")
    sp.add_argument("--force", action="store_true", help="scan even if the model is not naturally reductive")

    sp = sub.add_parser("verify-tensors", help="closed-form tensors against finite differences")
    common(sp)

    sp = sub.add_parser("catalog", help="built-in models")
    csub = sp.add_subparsers(dest="catalog_command", required=True)
    csub.add_parser("list")
    ep = csub.add_parser("export")
    ep.add_argument("id")
    ep.add_argument("path")
    return p


def _resolve(args, tol_overrides):
    try:
        model, file_config = load_model(args.model)
    except OSError as exc:
        raise InputError(f"cannot read model file: {exc}") from None
    config = RunConfig()
    env_seed = os.environ.get("FRHS_SEED")
    if env_seed is not None:
        try:
            config = config.updated({"seed": int(env_seed)})
        except ValueError:
            raise InputError(f"FRHS_SEED={env_seed!r} is not an integer") from None
    overrides = dict(file_config)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.samples is not None:
        overrides["n_samples"] = args.samples
    overrides.update(tol_overrides)
    overrides["output_format"] = args.format
    try:
        config = config.updated(overrides)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    return model.with_tol(config.tolerances), config


def _fmt(x):
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.3e}"
    return str(x)


def cmd_check(args, tol_overrides) -> int:
    model, config = _resolve(args, tol_overrides)
    adm = check_admissibility(model, config.admissibility_grid)
    rep = reductivity_verdict(model, config)
    if config.output_format == "json":
        doc = {"model": model.name, "seed": config.seed, "admissibility": adm.to_dict(), "reductivity": rep.to_dict()}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"model: {model.name}   seed: {config.seed}   samples: {config.n_samples}")
        print()
        print("admissibility")
        for k, v in adm.to_dict().items():
            print(f"  {k:<22} {_fmt(v)}")
        print()
        print(f"  {'check':<22} {'pass':<6} {'residual':<11} {'tol':<10} witness")
        for c in rep.checks:
            print(f"  {c.name:<22} {str(c.passed):<6} {c.residual:<11.3e} {c.tol:<10.1e} {c.to_dict()['witness']}")
        print()
        print(f"verdict: {rep.verdict.value}")
        for r in rep.reasons:
            print(f"  - {r}")
        if not adm.passed:
            print("  - warning: model is not admissible; Finsler quantities may be meaningless")
    return {
        Verdict.NATURALLY_REDUCTIVE: EXIT_OK,
        Verdict.NOT_NATURALLY_REDUCTIVE: EXIT_FAIL,
        Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[rep.verdict]


def _num(x):
    return repr(float(x))


def scan_csv(scan) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in scan.rows:
        w.writerow([
            " ".join(_num(t) for t in row.y),
            " ".join(_num(t) for t in row.u),
            _num(row.r),
            _num(row.K_general),
            _num(row.K_closed),
            _num(row.delta),
            _num(row.theta),
        ])
    return buf.getvalue()


def cmd_curvature(args, tol_overrides) -> int:
    model, config = _resolve(args, tol_overrides)
    if args.ny < 0 or args.nplanes < 0:
        raise InputError("--ny and --nplanes must be non-negative")
    if not args.force and not is_certified(model, config):
        print(f"model {model.name} is not naturally reductive; use --force to scan anyway", file=sys.stderr)
        return EXIT_GATE
    scan = curvature_scan(model, args.ny, args.nplanes, seed=config.seed, force=args.force)
    summary = {"model": model.name, "seed": config.seed, "ny": args.ny, "nplanes": args.nplanes, **scan.summary()}
    text = json.dumps(summary, indent=2, sort_keys=True)
    table = scan_csv(scan)
    if args.out:
        out = Path(args.out)
        out.write_text(table)
        out.with_suffix(".json").write_text(text + "\n")
        print(text)
    else:
        sys.stdout.write(table)
        print(text, file=sys.stderr)
    return EXIT_OK if scan.passed else EXIT_FAIL


def cmd_verify_tensors(args, tol_overrides) -> int:
    model, config = _resolve(args, tol_overrides)
    res = verify_tensors(model, config.n_samples, config.seed)
    if config.output_format == "json":
        print(json.dumps({"model": model.name, "seed": config.seed, **res.to_dict(include_rows=True)}, indent=2, sort_keys=True))
    else:
        print(f"model: {model.name}   seed: {config.seed}")
        print(f"  {'sample':>6} {'r':>10} {'g rel err':>11} {'C rel err':>11}")
        for row in res.rows:
            print(f"  {row['index']:>6} {row['r']:>10.4f} {row['g_rel_err']:>11.3e} {row['cartan_rel_err']:>11.3e}")
        print(f"evaluated {res.samples}, skipped (outside phi domain) {res.skipped}")
        print(f"max g rel err      {res.g_max_rel_err:.3e}  (tol {res.g_tol:.0e})")
        print(f"max Cartan rel err {res.cartan_max_rel_err:.3e}  (tol {res.cartan_tol:.0e})")
        print("PASS" if res.passed else "FAIL")
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_catalog(args) -> int:
    if args.catalog_command == "list":
        for e in catalog_list():
            print(f"{e.id:<20} {e.expected_verdict:<22} {e.notes}")
        return EXIT_OK
    try:
        catalog_entry(args.id)
    except UnknownId as exc:
        raise InputError(str(exc)) from None
    catalog_export(args.id, args.path)
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv, tol_overrides = _split_tol_flags(argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "catalog":
            return cmd_catalog(args)
        handler = {"check": cmd_check, "curvature": cmd_curvature, "verify-tensors": cmd_verify_tensors}[args.command]
        return handler(args, tol_overrides)
    except (InputError, FrhsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
