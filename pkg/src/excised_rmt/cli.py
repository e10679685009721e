"""Command-line driver.

Subcommands mirror the experiment kinds: sample, onelevel, paircorr,
excise, discriminants, neff, compare.  Every run is a pure function of
its flags and seed; outputs are byte-identical across reruns and worker
counts (17-significant-digit decimals, LF line endings).

Exit codes: 0 success, 1 data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from excised_rmt import arith, config as cfgmod, stats, theory, zeros
from excised_rmt.groups import GroupSpec, group_from_name
from excised_rmt.spectral import ExcisionRule

SAMPLE_HEADER = "sample_index,first_angle,charpoly_re,charpoly_im,charpoly_abs"


class DataError(RuntimeError):
    pass


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return max(1, args.workers)
    env = os.environ.get("EXCISED_RMT_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DataError(f"EXCISED_RMT_WORKERS must be an integer, got {env!r}")
    return 1


def _group_spec(args) -> GroupSpec:
    return GroupSpec(group_from_name(args.group), args.n)


def _write_text(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _sample_table_text(table) -> str:
    lines = [SAMPLE_HEADER]
    for row in table:
        lines.append(
            f"{int(row['sample_index'])},{row['first_angle']:.17g},"
            f"{row['charpoly_re']:.17g},{row['charpoly_im']:.17g},{row['charpoly_abs']:.17g}"
        )
    return "\n".join(lines) + "\n"


def _read_sample_table(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != SAMPLE_HEADER:
            raise DataError(f"{path}: expected header {SAMPLE_HEADER!r}")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 5:
                raise DataError(f"{path}: line {lineno}: expected 5 fields")
            try:
                rows.append(
                    (int(parts[0]), float(parts[1]), float(parts[2]), float(parts[3]), float(parts[4]))
                )
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    dtype = np.dtype(
        [
            ("sample_index", np.int64),
            ("first_angle", float),
            ("charpoly_re", float),
            ("charpoly_im", float),
            ("charpoly_abs", float),
        ]
    )
    return np.array(rows, dtype=dtype)


def cmd_sample(args) -> int:
    spec = _group_spec(args)
    table = stats.sample_summaries(spec, args.count, args.seed, workers=_workers(args))
    _write_text(args.out, _sample_table_text(table))
    return 0


def cmd_onelevel(args) -> int:
    spec = _group_spec(args)
    hist = stats.one_level_density_mc(
        spec, args.count, args.seed, bins=args.bins, workers=_workers(args)
    )
    _write_text(args.out, hist.to_csv_text())
    return 0


def cmd_paircorr(args) -> int:
    spec = _group_spec(args)
    hist = stats.pair_correlation_mc(
        spec, args.count, args.seed, window=args.window, bins=args.bins, workers=_workers(args)
    )
    _write_text(args.out, hist.to_csv_text())
    return 0


def cmd_excise(args) -> int:
    rule = ExcisionRule(c=args.c, k=args.k, n_std=args.nstd)
    table = _read_sample_table(args.input)
    keep = table["charpoly_abs"] >= rule.threshold
    kept = table[keep]
    _write_text(args.out, _sample_table_text(kept))
    sys.stderr.write(
        f"kept {int(keep.sum())} of {table.size} (threshold {rule.threshold:.17g})\n"
    )
    return 0


def _symmetry_case(name: str) -> theory.SymmetryCase:
    try:
        return theory.SymmetryCase(name.strip().lower())
    except ValueError:
        raise DataError(f"unknown symmetry case {name!r}") from None


def cmd_discriminants(args) -> int:
    case = _symmetry_case(args.case)
    spec = arith.FamilySpec(
        M=args.M,
        case=case,
        X=args.X,
        epsilon_f=args.epsilon,
        Delta=args.delta,
        residue_u=args.residue,
    )
    family = arith.enumerate_family(spec)
    text = "\n".join(str(int(d)) for d in family) + ("\n" if family.size else "")
    _write_text(args.out, text)
    estimate = arith.cardinality_estimate(spec)
    sys.stderr.write(f"count {family.size} estimate {estimate:.17g}\n")
    return 0


def cmd_neff(args) -> int:
    case = _symmetry_case(args.case)
    if case is theory.SymmetryCase.Generic:
        if args.e1 is None or args.e2 is None or args.R is None:
            raise DataError("generic case requires --e1, --e2, and --R")
        value = theory.n_eff(case, 0.0, 0.0, e1=args.e1, e2=args.e2, R=args.R)
        payload = {"case": case.value, "n_eff": value, "e1": args.e1, "e2": args.e2, "R": args.R}
    else:
        if args.M is None or args.X is None:
            raise DataError("this case requires --M and --X")
        raw = theory.CoefficientInputs()
        if args.coeffs:
            with open(args.coeffs) as fh:
                data = json.load(fh)
            known = {f.name for f in theory.CoefficientInputs.__dataclass_fields__.values()}
            unknown = set(data) - known
            if unknown:
                raise DataError(f"unknown coefficient keys: {sorted(unknown)}")
            raw = theory.CoefficientInputs(**data)
        coeffs = theory.coefficient_assembly(case, raw)
        value = theory.n_eff(case, args.M, args.X, coeffs=coeffs)
        payload = {
            "case": case.value,
            "n_eff": value,
            "M": args.M,
            "X": args.X,
            "coefficients": {
                name: getattr(coeffs, name)
                for name in ("a1", "a2", "a3", "a4", "b1", "b2", "c1", "c2", "d1")
                if getattr(coeffs, name) is not None
            },
        }
    _write_text(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_compare(args) -> int:
    records = zeros.ingest_zero_list(args.zeros)
    zero_samples = zeros.lowest_zero_statistic(
        records, which=args.which, vanish_tol=args.vanish_tol
    )
    table = _read_sample_table(args.samples)
    ensemble = table["first_angle"]
    ensemble = ensemble[np.isfinite(ensemble)]
    report = zeros.compare_report(zero_samples, ensemble, bins=args.bins)
    _write_text(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0


def _add_common(p, *, seed=True, count=True, bins=False, out=True):
    p.add_argument("--config", help="JSON config supplying defaults for flags")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="master seed")
    if count:
        p.add_argument("--count", type=int, default=1000, help="number of samples")
    if bins:
        p.add_argument("--bins", type=int, default=100, help="histogram bin count")
    if out:
        p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--workers", type=int, help="worker shard count (result-invariant)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="excised-rmt",
        description="Excised random-matrix model simulator for quadratic twist families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample matrices; write per-sample summaries")
    p.add_argument("--group", required=True, help="so_even | so_odd | usp | unitary")
    p.add_argument("--n", type=int, required=True, help="half-size N")
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("onelevel", help="Monte Carlo one-level eigenangle density")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p, bins=True)
    p.set_defaults(func=cmd_onelevel)

    p = sub.add_parser("paircorr", help="Monte Carlo pair correlation of eigenangles")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=float, default=5.0, help="window in mean spacings")
    _add_common(p, bins=True)
    p.set_defaults(func=cmd_paircorr)

    p = sub.add_parser("excise", help="filter a sample file by the excision threshold")
    p.add_argument("--c", type=float, required=True, help="cutoff constant")
    p.add_argument("--k", type=int, required=True, help="weight")
    p.add_argument("--nstd", type=float, required=True, help="standard matrix size")
    p.add_argument("--input", required=True, help="sample CSV produced by `sample`")
    _add_common(p, seed=False, count=False)
    p.set_defaults(func=cmd_excise)

    p = sub.add_parser("discriminants", help="enumerate a fundamental-discriminant family")
    p.add_argument("--M", type=int, required=True, help="odd prime level")
    p.add_argument("--case", required=True, help="principal_even | principal_odd | self_cm | generic")
    p.add_argument("--X", type=int, required=True, help="upper bound")
    p.add_argument("--epsilon", type=int, default=1, choices=(1, -1))
    p.add_argument("--delta", type=int, default=1, choices=(1, -1))
    p.add_argument("--residue", type=int, default=1, help="residue class U mod M (generic case)")
    _add_common(p, seed=False, count=False)
    p.set_defaults(func=cmd_discriminants)

    p = sub.add_parser("neff", help="effective matrix size for a symmetry case")
    p.add_argument("--case", required=True)
    p.add_argument("--M", type=int)
    p.add_argument("--X", type=int)
    p.add_argument("--coeffs", help="JSON file of raw coefficient inputs")
    p.add_argument("--e1", type=float)
    p.add_argument("--e2", type=float)
    p.add_argument("--R", type=float)
    _add_common(p, seed=False, count=False)
    p.set_defaults(func=cmd_neff)

    p = sub.add_parser("compare", help="compare zero data against an ensemble sample file")
    p.add_argument("--zeros", required=True, help="zero list CSV: d,gamma1,gamma2,...")
    p.add_argument("--samples", required=True, help="sample CSV produced by `sample`")
    p.add_argument(
        "--which",
        default="lowest",
        choices=("lowest", "lowest_nonvanishing", "second_lowest"),
        help="zero selector per record",
    )
    p.add_argument("--vanish-tol", type=float, default=1e-8, dest="vanish_tol")
    _add_common(p, seed=False, count=False, bins=True)
    p.set_defaults(func=cmd_compare)

    parser.subcommand_parsers = {name: sp for name, sp in sub.choices.items()}
    return parser


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Config values fill flags the user left at their defaults."""
    if not getattr(args, "config", None):
        return
    cfg = cfgmod.load_config(args.config)
    if cfg.kind != args.command:
        raise DataError(f"config kind {cfg.kind!r} does not match subcommand {args.command!r}")
    subparser = parser.subcommand_parsers[args.command]
    for key, value in cfg.__dict__.items():
        if key == "kind" or value is None:
            continue
        if hasattr(args, key) and getattr(args, key) in (None, subparser.get_default(key)):
            setattr(args, key, value)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
        return args.func(args)
    except (DataError, cfgmod.ConfigError, zeros.ZeroDataError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
