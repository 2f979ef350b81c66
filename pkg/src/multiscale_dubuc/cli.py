"""Command line: ``mdd run``, ``mdd dist`` and ``mdd plot``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .baselines import DEFAULT_WINDOW_GRID, DtwConfig, LcssConfig, learn_dtw_window
from .core import EpsilonSchedule, generic_epsilon_schedule, ratio_curve
from .data import (
    DEFAULT_MAX_LEN,
    discover_datasets,
    load_ucr_dataset,
    read_ucr_file,
    validate_for_length_policy,
    znormalize,
)
from .errors import InvalidInputError, VariableLengthError
from .evaluation import MEASURE_KINDS, EvalReport, MeasureSpec, attach_gains, evaluate
from .plotting import ResultsFormatError, read_results_csv, render_plots, write_results_csv

log = logging.getLogger("multiscale_dubuc")


@dataclass
class RunConfig:
    data_dir: Path
    dataset_filter: list[str] | None = None
    measures: list[str] = field(default_factory=lambda: list(MEASURE_KINDS))
    alpha: float = 0.4
    explicit_epsilons: tuple[int, ...] | None = None
    max_len: int = DEFAULT_MAX_LEN
    normalize: bool = False
    output_csv: Path = Path("results.csv")
    output_plot_dir: Path | None = None
    parallelism: int = field(default_factory=lambda: os.cpu_count() or 1)
    lcss: LcssConfig = field(default_factory=LcssConfig)
    dtw_window_grid: tuple[float, ...] = DEFAULT_WINDOW_GRID

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise InvalidInputError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if self.explicit_epsilons is not None:
            EpsilonSchedule(tuple(self.explicit_epsilons))
        unknown = [m for m in self.measures if m not in MEASURE_KINDS]
        if unknown or not self.measures:
            raise InvalidInputError(f"unknown measures {unknown}; choose from {','.join(MEASURE_KINDS)}")
        if self.parallelism < 1:
            raise InvalidInputError("--jobs must be >= 1")


def build_measure(kind: str, ds, cfg: RunConfig) -> MeasureSpec:
    if kind == "mdd":
        if cfg.explicit_epsilons is not None:
            sched = EpsilonSchedule(tuple(cfg.explicit_epsilons))
        else:
            sched = generic_epsilon_schedule(ds.d, cfg.alpha)
        sched.check_length(ds.d)
        return MeasureSpec("mdd", sched)
    if kind == "dtw":
        return MeasureSpec("dtw", learn_dtw_window(ds.train, cfg.dtw_window_grid))
    if kind == "lcss":
        return MeasureSpec("lcss", cfg.lcss)
    return MeasureSpec("eud")


def _report_rows(reports: Sequence[EvalReport]) -> list[tuple]:
    rows = []
    for rep in reports:
        head = (rep.dataset, rep.measure.name, rep.measure.describe(), rep.expected_acc, rep.actual_acc)
        if not rep.gains:
            rows.append(head + ("", None, None, "", "ok"))
        for ref, pair in rep.gains.items():
            if pair is None:
                rows.append(head + (ref, None, None, "", "undefined-gain"))
            else:
                rows.append(head + (ref, pair[0], pair[1], rep.quadrants[ref], "ok"))
    return rows


def evaluate_dataset(name: str, cfg: RunConfig) -> tuple[str, list[tuple]]:
    """Returns (admission status, rows). Status is 'ok', 'excluded' or 'error'."""
    try:
        ds = load_ucr_dataset(cfg.data_dir, name)
    except VariableLengthError as exc:
        log.info("excluding %s: %s", name, exc)
        return "excluded", []
    except (OSError, InvalidInputError) as exc:
        log.warning("%s: %s", name, exc)
        return "error", [(name, "", "", None, None, "", None, None, "", f"error: {exc}")]
    if not validate_for_length_policy(ds, cfg.max_len):
        log.info("excluding %s: length %d > %d", name, ds.d, cfg.max_len)
        return "excluded", []
    if cfg.normalize:
        ds = znormalize(ds)
    log.info("%s: d=%d train=%d test=%d classes=%d delimiter=%s",
             name, ds.d, len(ds.train), len(ds.test), len(ds.classes), ds.delimiter)
    reports, rows = [], []
    for kind in cfg.measures:
        start = time.perf_counter()
        try:
            spec = build_measure(kind, ds, cfg)
            reports.append(evaluate(ds, spec))
        except InvalidInputError as exc:
            log.warning("%s/%s: %s", name, kind, exc)
            rows.append((name, kind, "", None, None, "", None, None, "", f"error: {exc}"))
            continue
        log.info("%s/%s [%s]: expected=%.4f actual=%.4f (%.1fs)", name, kind, spec.describe(),
                 reports[-1].expected_acc, reports[-1].actual_acc, time.perf_counter() - start)
    attach_gains(reports)
    return "ok", _report_rows(reports) + rows


def cmd_run(cfg: RunConfig) -> int:
    names = discover_datasets(cfg.data_dir)
    if cfg.dataset_filter:
        wanted = set(cfg.dataset_filter)
        missing = sorted(wanted - set(names))
        for m in missing:
            log.warning("dataset %s not found under %s", m, cfg.data_dir)
        names = [n for n in names if n in wanted]
    if cfg.parallelism > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.parallelism, len(names))) as pool:
            outcomes = dict(zip(names, pool.map(evaluate_dataset, names, [cfg] * len(names))))
    else:
        outcomes = {n: evaluate_dataset(n, cfg) for n in names}

    admitted = sorted(n for n, (status, _) in outcomes.items() if status != "excluded")
    if not admitted:
        print(f"error: 0 datasets admitted from {cfg.data_dir} "
              f"(found {len(names)}: {', '.join(names) or 'none'})", file=sys.stderr)
        return 1
    rows = [row for n in admitted for row in outcomes[n][1]]
    cfg.output_csv.parent.mkdir(parents=True, exist_ok=True)
    write_results_csv(rows, cfg.output_csv)
    log.info("admitted %d dataset(s): %s; wrote %s", len(admitted), ", ".join(admitted), cfg.output_csv)
    if cfg.output_plot_dir is not None:
        for path in render_plots(read_results_csv(cfg.output_csv), cfg.output_plot_dir):
            log.info("wrote %s", path)
    return 0


def cmd_dist(measure: MeasureSpec, file: Path, i: int, j: int, out=None) -> int:
    out = out or sys.stdout
    series, _ = read_ucr_file(file)
    n = len(series)
    if not (0 <= i < n and 0 <= j < n):
        print(f"error: indices must lie in [0, {n - 1}], got {i} and {j}", file=sys.stderr)
        return 1
    x, y = series[i], series[j]
    print(repr(measure.distance(x, y)), file=out)
    if measure.kind == "mdd":
        for eps, r in zip(measure.params, ratio_curve(x, y, measure.params)):
            print(f"{eps},{float(r)!r}", file=out)
    return 0


def cmd_plot(results_csv: Path, out_dir: Path) -> int:
    try:
        rows = read_results_csv(results_csv)
    except ResultsFormatError as exc:
        print(f"error: {results_csv}: {exc}", file=sys.stderr)
        return 1
    for path in render_plots(rows, out_dir):
        log.info("wrote %s", path)
    return 0


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_measure_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lcss-eps", type=float, default=1.0, help="LCSS matching threshold (default 1.0)")
    p.add_argument("--lcss-delta", type=int, default=None, help="LCSS temporal window (default: none)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdd", description="Multiscale Dubuc distance benchmark")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="1-NN benchmark over a UCR-format directory")
    run.add_argument("--data-dir", type=Path, required=True)
    run.add_argument("--datasets", type=lambda s: [t for t in s.split(",") if t], default=None)
    run.add_argument("--measures", default=",".join(MEASURE_KINDS))
    run.add_argument("--alpha", type=float, default=0.4)
    run.add_argument("--epsilons", type=_int_list, default=None, help="explicit MDD scales, e.g. 16,32,64")
    run.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    run.add_argument("--normalize", action="store_true", help="z-normalize every series")
    run.add_argument("--out", type=Path, default=Path("results.csv"))
    run.add_argument("--plot-dir", type=Path, default=None)
    run.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    run.add_argument("--dtw-window-grid", type=_float_list, default=DEFAULT_WINDOW_GRID,
                     help="candidate DTW windows in percent of the length (default 0..20)")
    _add_measure_params(run)

    dist = sub.add_parser("dist", help="distance between two series of one file")
    dist.add_argument("file", type=Path)
    dist.add_argument("i", type=int)
    dist.add_argument("j", type=int)
    dist.add_argument("--measure", choices=MEASURE_KINDS, default="mdd")
    dist.add_argument("--epsilons", type=_int_list, default=None)
    dist.add_argument("--alpha", type=float, default=0.4)
    dist.add_argument("--dtw-window", type=int, default=None)
    _add_measure_params(dist)

    plot = sub.add_parser("plot", help="SVG figures from a results CSV")
    plot.add_argument("results_csv", type=Path)
    plot.add_argument("out_dir", type=Path)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        if args.command == "run":
            cfg = RunConfig(
                data_dir=args.data_dir,
                dataset_filter=args.datasets,
                measures=[m.strip().lower() for m in args.measures.split(",") if m.strip()],
                alpha=args.alpha,
                explicit_epsilons=args.epsilons,
                max_len=args.max_len,
                normalize=args.normalize,
                output_csv=args.out,
                output_plot_dir=args.plot_dir,
                parallelism=args.jobs,
                lcss=LcssConfig(args.lcss_eps, args.lcss_delta),
                dtw_window_grid=args.dtw_window_grid,
            )
            return cmd_run(cfg)
        if args.command == "dist":
            if args.measure == "mdd":
                if args.epsilons:
                    params = EpsilonSchedule(args.epsilons)
                else:
                    series, _ = read_ucr_file(args.file)
                    params = generic_epsilon_schedule(len(series[0]), args.alpha)
            elif args.measure == "dtw":
                params = DtwConfig(args.dtw_window)
            elif args.measure == "lcss":
                params = LcssConfig(args.lcss_eps, args.lcss_delta)
            else:
                params = None
            return cmd_dist(MeasureSpec(args.measure, params), args.file, args.i, args.j)
        return cmd_plot(args.results_csv, args.out_dir)
    except (InvalidInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
