"""External zero-data ingestion and comparison reports.

Zero ordinates are always ingested from files, never computed: the
L-function side of the model is an external input by design.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np

from excised_rmt.stats import Histogram, ks_distance, mean_normalize


class ZeroDataError(ValueError):
    """Malformed zero-list input."""


@dataclass(frozen=True)
class ZeroRecord:
    d: int
    ordinates: np.ndarray  # strictly increasing positive reals


def ingest_zero_list(path) -> List[ZeroRecord]:
    """Parse CSV rows `d,gamma1,gamma2,...` with variable width.

    Ordinates must be nonnegative and strictly increasing; errors carry
    the offending 1-based line number.
    """
    records: List[ZeroRecord] = []
    with open(path, newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            try:
                d = int(parts[0])
                ordinates = np.asarray([float(x) for x in parts[1:]], dtype=float)
            except ValueError as exc:
                raise ZeroDataError(f"line {lineno}: cannot parse: {exc}") from None
            if ordinates.size == 0:
                raise ZeroDataError(f"line {lineno}: record has no ordinates")
            if np.any(ordinates < 0):
                raise ZeroDataError(f"line {lineno}: negative ordinate")
            if np.any(np.diff(ordinates) <= 0):
                raise ZeroDataError(f"line {lineno}: ordinates not strictly increasing")
            records.append(ZeroRecord(d=d, ordinates=ordinates))
    return records


def write_zero_list(path, records: Iterable[ZeroRecord]) -> None:
    with open(path, "w", newline="\n") as fh:
        for rec in records:
            ords = ",".join(f"{g:.17g}" for g in rec.ordinates)
            fh.write(f"{rec.d},{ords}\n")


def lowest_zero_statistic(
    records: Sequence[ZeroRecord], which: str = "lowest", vanish_tol: float = 1e-8
) -> np.ndarray:
    """Per-record selected ordinate.

    which: "lowest" takes the first ordinate; "lowest_nonvanishing" drops
    ordinates below vanish_tol first; "second_lowest" takes index 1.
    """
    if not records:
        raise ValueError("no zero records")
    out = []
    for rec in records:
        if which == "lowest":
            out.append(rec.ordinates[0])
        elif which == "lowest_nonvanishing":
            nonzero = rec.ordinates[rec.ordinates >= vanish_tol]
            if nonzero.size == 0:
                raise ValueError(f"record d={rec.d} has no nonvanishing ordinate")
            out.append(nonzero[0])
        elif which == "second_lowest":
            if rec.ordinates.size < 2:
                raise ValueError(f"record d={rec.d} too short for second_lowest")
            out.append(rec.ordinates[1])
        else:
            raise ValueError(f"unknown selector {which!r}")
    return np.asarray(out, dtype=float)


def compare_report(zero_samples, ensemble_samples, bins: int = 100) -> dict:
    """Mean-1 normalize both sample sets and compare their distributions.

    Both sides are normalized identically (divided by their own sample
    mean).  Returns the KS distance, sample counts, Monte Carlo standard
    errors per bin, and bin-wise density residuals on shared edges.
    """
    left = mean_normalize(zero_samples)
    right = mean_normalize(ensemble_samples)
    hi = float(max(left.max(), right.max())) * (1.0 + 1e-12)
    hleft = Histogram.uniform(0.0, hi, bins, normalization="mean_one_density")
    hright = Histogram.uniform(0.0, hi, bins, normalization="mean_one_density")
    hleft.add(left)
    hright.add(right)
    vleft = hleft.values()
    vright = hright.values()
    width = hleft.widths
    se_left = np.sqrt(np.maximum(hleft.counts, 1)) / (max(hleft.total_in_range, 1) * width)
    se_right = np.sqrt(np.maximum(hright.counts, 1)) / (max(hright.total_in_range, 1) * width)
    rows = []
    for i in range(bins):
        rows.append(
            {
                "bin_left": float(hleft.edges[i]),
                "bin_right": float(hleft.edges[i + 1]),
                "density_left": float(vleft[i]),
                "density_right": float(vright[i]),
                "residual": float(vleft[i] - vright[i]),
                "se_left": float(se_left[i]),
                "se_right": float(se_right[i]),
            }
        )
    return {
        "ks": ks_distance(left, right),
        "n_left": int(left.size),
        "n_right": int(right.size),
        "normalization": "both sample sets divided by their own sample mean",
        "bins": rows,
    }


def write_report(path, report: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
