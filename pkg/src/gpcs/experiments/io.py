"""CSV and JSON persistence for experiment outputs."""
import csv
import json
from pathlib import Path

from gpcs.errors import GpcsError
from gpcs.experiments.coverage import COVERAGE_COLUMNS, CoverageRecord, miscoverage


class IoError(GpcsError, OSError):
    def __init__(self, path, cause):
        self.path = str(path)
        super().__init__(f"cannot write {path}: {cause}")


def fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def bo_columns(dim):
    xs = ["x"] if dim == 1 else [f"x{i + 1}" for i in range(dim)]
    return ["seed", "method", "t", *xs, "y", "best_so_far"]


def bo_rows(runs):
    for run in runs:
        for s in run.steps:
            yield [
                run.seed,
                run.acquisition_kind.name,
                s.t,
                *(float(v) for v in s.x_chosen),
                s.y_observed,
                s.best_so_far,
            ]


def write_csv(path, header, rows):
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
    except OSError as err:
        raise IoError(path, err) from err
    return path


def write_summary(path, summary):
    path = Path(path)
    try:
        path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    except OSError as err:
        raise IoError(path, err) from err
    return path


def emit_results(records, summary, output_dir, dim=1):
    """Write one CSV for the records and ``summary.json`` next to it.

    ``records`` is either a list of :class:`CoverageRecord` (written to
    ``coverage.csv``) or a list of BO runs (written to ``bo_runs.csv``).
    An empty list yields a header-only ``coverage.csv``.
    """
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise IoError(out, err) from err
    records = list(records)
    if records and not isinstance(records[0], CoverageRecord):
        if records[0].steps:
            dim = records[0].steps[0].x_chosen.shape[0]
        csv_path = write_csv(out / "bo_runs.csv", bo_columns(dim), bo_rows(records))
    else:
        rows = ([getattr(r, c) for c in COVERAGE_COLUMNS] for r in records)
        csv_path = write_csv(out / "coverage.csv", COVERAGE_COLUMNS, rows)
    json_path = write_summary(out / "summary.json", summary)
    return csv_path, json_path


def read_coverage_csv(path):
    types = (int, int, float, float, float, float, float, float, float)
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != COVERAGE_COLUMNS:
            raise ValueError(f"unexpected header {header}")
        return [CoverageRecord(*(c(v) for c, v in zip(types, row))) for row in reader]


def summary_from_csv(path):
    """Miscoverage recomputed from a coverage CSV alone."""
    cs, gp, n = miscoverage(read_coverage_csv(path))
    return {"miscoverage_cs": cs, "miscoverage_gp": gp, "n_replications": n}
