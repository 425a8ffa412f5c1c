"""Command-line driver: ``solvnil {degree,verify,normalize,classify,charp}``.

Exit codes: 0 success, 1 mismatch between computation and prediction,
2 input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .blockstruct import (
    AdmissibilityError,
    BlockSeq,
    ConstraintError,
    NormalizationError,
    Shape,
    canonical_seq,
    normalize_seq,
    random_seq,
)
from .exactla import DimensionError, FieldError, parse_field
from .nilradical import generate_nilradical
from .reps import enumerate_shapes, records_to_csv
from .sweep import SweepConfig, charp_sweep, verify_sweep

log = logging.getLogger("solvnil")

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_rows(rows: list[dict]) -> str:
    buf = io.StringIO()
    cols = list(rows[0]) if rows else []
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _load_seq(args) -> BlockSeq:
    field = parse_field(args.field)
    if args.seq:
        try:
            obj = json.loads(Path(args.seq).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read sequence file: {exc}")
        if "field" not in obj:
            obj["field"] = field.name
        return BlockSeq.from_json(obj)
    if not args.d:
        raise InputError("give --d (with --canonical or --seed) or --seq")
    shape = Shape(tuple(args.d))
    if args.canonical:
        return canonical_seq(shape, field)
    if args.seed is None:
        raise InputError("without --seq, pass --canonical or --seed to choose a sequence")
    return random_seq(shape, args.seed, args.entry_bound, args.constraint, field)


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_degree(args) -> int:
    seq = _load_seq(args)
    report = generate_nilradical(seq)
    doc = report.to_json(include_basis=args.basis)
    if args.format == "csv":
        _emit(_csv_rows([{k: v for k, v in doc.items() if k != "basis"}]), args.out)
    else:
        _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_normalize(args) -> int:
    seq = _load_seq(args)
    if seq.field.characteristic == 2:
        raise InputError("normalization is singular in characteristic 2")
    gauge, t = normalize_seq(seq)
    doc = {"input": seq.to_json(), "gauge": gauge.to_json(), "normalized": t.to_json()}
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    if not parse_field(args.field).parse(args.lam):
        raise InputError("classification needs lambda != 0")
    records = enumerate_shapes(args.n, args.dim, args.ell)
    if args.format == "csv":
        _emit(records_to_csv(records), args.out)
    else:
        _emit(_dump([r.to_json() for r in records]), args.out)
    return EXIT_OK


def _sweep_config(args) -> SweepConfig:
    base: dict = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config: {exc}")
    overrides = {
        "k_min": args.k_min, "k_max": args.k_max, "d_max": args.d_max, "dim_cap": args.dim_cap,
        "seed": args.seed, "samples": args.samples, "workers": args.workers, "out": args.out,
        "field": args.field if args.field != "Q" else None,
        "checks": tuple(args.checks.split(",")) if args.checks else None,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    return SweepConfig.from_json(base)


def _finish_manifest(manifest, args, fmt: str) -> None:
    if fmt == "csv":
        text = _csv_rows(manifest.results)
    else:
        text = manifest.dumps(with_timing=not args.no_timing) + "\n"
    _emit(text, args.out)
    print(f"{manifest.command}: {len(manifest.results)} instances, "
          f"{len(manifest.mismatches)} mismatches, {len(manifest.findings)} findings, "
          f"config {manifest.config_hash}", file=sys.stderr)


def cmd_verify(args) -> int:
    cfg = _sweep_config(args)
    manifest = verify_sweep(cfg)
    _finish_manifest(manifest, args, args.format)
    return EXIT_OK if manifest.ok else EXIT_MISMATCH


def cmd_charp(args) -> int:
    manifest = charp_sweep(args.p, args.k_min or 2, args.k_max or 5, args.d_max or 4,
                           args.pattern, args.dim_cap or 14, args.workers or 1)
    _finish_manifest(manifest, args, args.format)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="solvnil", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def seq_opts(p):
        p.add_argument("--d", type=_int_list, help="block sizes, e.g. 1,2,1")
        p.add_argument("--canonical", action="store_true", help="use the canonical sequence C")
        p.add_argument("--seq", help="JSON file with {d, blocks, field}")
        p.add_argument("--seed", type=int, help="draw a random sequence with this seed")
        p.add_argument("--constraint", default="none",
                       help="random sequence constraint (none, weakly_normalized, normalized, ...)")
        p.add_argument("--entry-bound", type=int, default=3)

    def common(p, formats=("json", "csv")):
        p.add_argument("--field", default="Q", help="Q or F<p>")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=formats, default="json")

    p = sub.add_parser("degree", help="nilradical dimension, lower central series and degree")
    seq_opts(p)
    common(p)
    p.add_argument("--basis", action="store_true", help="include the echelon basis")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("normalize", help="normal form T and gauge P of a sequence")
    seq_opts(p)
    common(p, ("json",))
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("classify", help="shapes of uniserial representations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--lambda", dest="lam", default="1")
    common(p)
    p.set_defaults(func=cmd_classify)

    def sweep_opts(p):
        p.add_argument("--k-min", type=int)
        p.add_argument("--k-max", type=int)
        p.add_argument("--d-max", type=int)
        p.add_argument("--dim-cap", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--no-timing", action="store_true", help="omit wall-time stats from the manifest")

    p = sub.add_parser("verify", help="theorem-verification sweep")
    sweep_opts(p)
    common(p)
    p.add_argument("--config", help="JSON file mirroring SweepConfig")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--checks", help="comma list from degree,r1k,free,general")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("charp", help="degree of n(C) over prime fields")
    sweep_opts(p)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--p", type=_int_list, required=True, help="primes, e.g. 2,3,5")
    p.add_argument("--pattern", choices=("constant_p", "grid"), default="constant_p")
    p.set_defaults(func=cmd_charp)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, AdmissibilityError, ConstraintError, NormalizationError,
            DimensionError, FieldError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
