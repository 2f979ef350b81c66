"""Results CSV schema and static SVG figures.

The SVGs are written by hand rather than through matplotlib so that output
bytes are reproducible and every scatter point carries its dataset name and
quadrant as attributes that tests can read back.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence
from xml.sax.saxutils import escape, quoteattr

from .errors import InvalidInputError
from .evaluation import mean_sem, sharpshooter_quadrant

CSV_HEADER = (
    "dataset",
    "measure",
    "params",
    "expected_acc",
    "actual_acc",
    "ref_measure",
    "expected_gain",
    "actual_gain",
    "quadrant",
    "status",
)

EXPECTED_COLOR = "#1f77b4"
ACTUAL_COLOR = "#ff7f0e"
QUADRANT_COLORS = {"TP": "#2ca02c", "FP": "#d62728", "TN": "#7f7f7f", "FN": "#9467bd"}


class ResultsFormatError(InvalidInputError):
    pass


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    measure: str
    params: str
    expected_acc: float | None
    actual_acc: float | None
    ref_measure: str
    expected_gain: float | None
    actual_gain: float | None
    quadrant: str
    status: str


def format_float(v: float | None) -> str:
    return "" if v is None else repr(float(v))


def write_results_csv(rows: Iterable[Sequence], path_or_buf) -> None:
    """Write rows (tuples in :data:`CSV_HEADER` order) with ``\\n`` line endings."""
    own = isinstance(path_or_buf, (str, Path))
    fh = open(path_or_buf, "w", newline="") if own else path_or_buf
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(["" if v is None else (format_float(v) if isinstance(v, float) else v) for v in row])
    finally:
        if own:
            fh.close()


def _opt_float(text: str, lineno: int, column: str) -> float | None:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise ResultsFormatError(f"line {lineno}: column {column!r} is not a number: {text!r}") from None


def read_results_csv(path: str | Path) -> list[ResultRow]:
    text = Path(path).read_text()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ResultsFormatError("line 1: file is empty") from None
    if tuple(header) != CSV_HEADER:
        raise ResultsFormatError(f"line 1: header must be {','.join(CSV_HEADER)}")
    rows = []
    for fields in reader:
        lineno = reader.line_num
        if not fields:
            continue
        if len(fields) != len(CSV_HEADER):
            raise ResultsFormatError(f"line {lineno}: expected {len(CSV_HEADER)} fields, got {len(fields)}")
        rec = dict(zip(CSV_HEADER, fields))
        for col in ("expected_acc", "actual_acc", "expected_gain", "actual_gain"):
            rec[col] = _opt_float(rec[col], lineno, col)
        if rec["quadrant"] not in ("",) + tuple(QUADRANT_COLORS):
            raise ResultsFormatError(f"line {lineno}: unknown quadrant {rec['quadrant']!r}")
        rows.append(ResultRow(**rec))
    return rows


def _svg_open(width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]


def _text(x: float, y: float, s: str, size: int = 12, anchor: str = "middle", extra: str = "") -> str:
    return f'<text x="{x:.3f}" y="{y:.3f}" font-size="{size}" text-anchor="{anchor}"{extra}>{escape(s)}</text>'


def _gain_ticks(half_range: float) -> list[float]:
    candidates = [0.1, 0.2, 0.25, 0.5, 0.67, 0.8, 1.0, 1.25, 1.5, 2.0, 4.0, 5.0, 10.0]
    return [g for g in candidates if abs(math.log10(g)) <= half_range + 1e-12]


def sharpshooter_svg(points: Sequence[tuple[str, float, float]], subject: str, ref: str, excluded: int = 0) -> str:
    """Scatter of (dataset, expected gain, actual gain) on log axes centred at gain 1."""
    size, margin = 480, 60
    half = (size - 2 * margin) / 2
    cx0 = cy0 = margin + half
    logs = [abs(math.log10(v)) for _, ge, ga in points for v in (ge, ga)]
    R = max([math.log10(1.5)] + [v * 1.15 for v in logs])

    def px(g: float) -> float:
        return cx0 + math.log10(g) / R * half

    def py(g: float) -> float:
        return cy0 - math.log10(g) / R * half

    out = _svg_open(size, size)
    out.append(f"<!-- excluded points: {excluded} (undefined or non-positive gain) -->")
    out.append(_text(size / 2, 28, f"Texas Sharpshooter: {subject} vs {ref}", 15))
    lo, hi = margin, size - margin
    out.append(f'<rect x="{lo}" y="{lo}" width="{hi - lo}" height="{hi - lo}" fill="none" stroke="black"/>')
    for g in _gain_ticks(R):
        x, y = px(g), py(g)
        out.append(f'<line x1="{x:.3f}" y1="{hi}" x2="{x:.3f}" y2="{hi + 5}" stroke="black"/>')
        out.append(_text(x, hi + 18, f"{g:g}", 10))
        out.append(f'<line x1="{lo - 5}" y1="{y:.3f}" x2="{lo}" y2="{y:.3f}" stroke="black"/>')
        out.append(_text(lo - 8, y + 3, f"{g:g}", 10, "end"))
    out.append(
        f'<line class="quadrant-line" x1="{cx0:.3f}" y1="{lo}" x2="{cx0:.3f}" y2="{hi}" '
        'stroke="gray" stroke-dasharray="4,3"/>'
    )
    out.append(
        f'<line class="quadrant-line" x1="{lo}" y1="{cy0:.3f}" x2="{hi}" y2="{cy0:.3f}" '
        'stroke="gray" stroke-dasharray="4,3"/>'
    )
    for label, x, y, anchor in (
        ("TP", hi - 8, lo + 18, "end"),
        ("FN", lo + 8, lo + 18, "start"),
        ("TN", lo + 8, hi - 8, "start"),
        ("FP", hi - 8, hi - 8, "end"),
    ):
        out.append(_text(x, y, label, 14, anchor, f' fill="{QUADRANT_COLORS[label]}"'))
    out.append(_text(size / 2, size - 18, "expected accuracy gain (log scale)", 12))
    out.append(
        f'<text x="18" y="{size / 2:.3f}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 18 {size / 2:.3f})">actual accuracy gain (log scale)</text>'
    )
    out.append(f'<g class="points" data-center-x="{cx0:.3f}" data-center-y="{cy0:.3f}">')
    for name, ge, ga in sorted(points):
        q = sharpshooter_quadrant(ge, ga)
        out.append(
            f'<circle class="point" data-dataset={quoteattr(name)} data-quadrant="{q}" '
            f'data-expected-gain="{ge!r}" data-actual-gain="{ga!r}" '
            f'cx="{px(ge):.3f}" cy="{py(ga):.3f}" r="4" fill="{QUADRANT_COLORS[q]}" fill-opacity="0.8">'
            f"<title>{escape(name)}</title></circle>"
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def accuracy_bars_svg(stats: Sequence[tuple[str, float, float, float, float]]) -> str:
    """Grouped bars of (measure, mean expected, sem expected, mean actual, sem actual)."""
    width = max(320, 90 + 110 * len(stats))
    height, top, bottom, left = 360, 50, 300, 60
    scale = bottom - top
    out = _svg_open(width, height)
    out.append(_text(width / 2, 28, "1-NN accuracy: expected (LOOCV) vs actual (test)", 15))
    out.append(f'<line x1="{left}" y1="{bottom}" x2="{width - 20}" y2="{bottom}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>')
    for k in range(6):
        v = k / 5
        y = bottom - v * scale
        out.append(f'<line x1="{left - 5}" y1="{y:.3f}" x2="{left}" y2="{y:.3f}" stroke="black"/>')
        out.append(_text(left - 8, y + 3, f"{v:.1f}", 10, "end"))
    bar = 36
    for i, (name, me, se, ma, sa) in enumerate(stats):
        x0 = left + 20 + i * 110
        for j, (m, s, color, kind) in enumerate(((me, se, EXPECTED_COLOR, "expected"), (ma, sa, ACTUAL_COLOR, "actual"))):
            if math.isnan(m):
                continue
            x = x0 + j * bar
            y = bottom - m * scale
            out.append(
                f'<rect class="bar" data-measure={quoteattr(name)} data-kind="{kind}" data-mean="{m!r}" '
                f'data-sem="{s!r}" x="{x}" y="{y:.3f}" width="{bar - 4}" height="{m * scale:.3f}" fill="{color}"/>'
            )
            xc = x + (bar - 4) / 2
            y1, y2 = bottom - max(m - s, 0) * scale, bottom - min(m + s, 1) * scale
            out.append(f'<line x1="{xc:.3f}" y1="{y1:.3f}" x2="{xc:.3f}" y2="{y2:.3f}" stroke="black"/>')
        out.append(_text(x0 + bar, bottom + 18, name, 12))
    lx = width - 150
    out.append(f'<rect x="{lx}" y="{top}" width="12" height="12" fill="{EXPECTED_COLOR}"/>')
    out.append(_text(lx + 18, top + 10, "expected", 11, "start"))
    out.append(f'<rect x="{lx}" y="{top + 18}" width="12" height="12" fill="{ACTUAL_COLOR}"/>')
    out.append(_text(lx + 18, top + 28, "actual", 11, "start"))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _valid_gain(v: float | None) -> bool:
    return v is not None and math.isfinite(v) and v > 0


def render_plots(rows: Sequence[ResultRow], out_dir: str | Path, subject: str | None = None) -> list[Path]:
    """Write ``sharpshooter_<ref>.svg`` per reference and ``accuracy_bars.svg``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    measures = list(dict.fromkeys(r.measure for r in rows if r.measure))
    if subject is None:
        subject = "mdd" if "mdd" in measures else (measures[0] if measures else "")
    written = []

    refs = list(dict.fromkeys(r.ref_measure for r in rows if r.measure == subject and r.ref_measure))
    for ref in refs:
        points, excluded = [], 0
        for r in rows:
            if r.measure != subject or r.ref_measure != ref:
                continue
            if _valid_gain(r.expected_gain) and _valid_gain(r.actual_gain):
                points.append((r.dataset, r.expected_gain, r.actual_gain))
            else:
                excluded += 1
        path = out_dir / f"sharpshooter_{ref}.svg"
        path.write_text(sharpshooter_svg(points, subject, ref, excluded))
        written.append(path)

    stats = []
    for m in measures:
        per_ds = {}
        for r in rows:
            if r.measure == m and r.expected_acc is not None and r.actual_acc is not None:
                per_ds.setdefault(r.dataset, (r.expected_acc, r.actual_acc))
        exp_m, exp_s = mean_sem([v[0] for v in per_ds.values()])
        act_m, act_s = mean_sem([v[1] for v in per_ds.values()])
        stats.append((m, exp_m, exp_s, act_m, act_s))
    path = out_dir / "accuracy_bars.svg"
    path.write_text(accuracy_bars_svg(stats))
    written.append(path)
    return written
