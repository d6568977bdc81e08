"""Report emission: CSV tables, a JSON document and line-plot SVGs.

All writes go through a temporary file in the target directory followed by
an atomic rename, and every output is a pure function of the report, so
repeated runs produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

FORMATS = ("csv", "json", "svg")


def format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):  # numpy scalars
        return _jsonable(v.item())
    return v


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def table_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table["columns"])
    for row in table["rows"]:
        w.writerow([format_value(_jsonable(v)) for v in row])
    return buf.getvalue()


def report_json(report):
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _scale(vals, log):
    vals = [math.log10(v) if log else v for v in vals]
    lo, hi = min(vals), max(vals)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    return vals, lo, hi


def table_svg(table, width=480, height=320, pad=48):
    """Line plot of ``plot["y"]`` against ``plot["x"]``, one polyline per group."""
    plot = table.get("plot")
    if not plot:
        return None
    cols = table["columns"]
    xi = cols.index(plot["x"])
    yis = [cols.index(y) for y in plot["y"]]
    gi = cols.index(plot["group"]) if plot.get("group") else None
    series = {}
    for row in table["rows"]:
        key = row[gi] if gi is not None else None
        for yi in yis:
            x, y = row[xi], row[yi]
            if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in (x, y)):
                continue
            if (plot.get("logx") and x <= 0) or (plot.get("logy") and y <= 0):
                continue
            series.setdefault((key, cols[yi]), []).append((float(x), float(y)))
    pts = [p for s in series.values() for p in s]
    if not pts:
        return None
    _, x0, x1 = _scale([p[0] for p in pts], plot.get("logx"))
    _, y0, y1 = _scale([p[1] for p in pts], plot.get("logy"))

    def px(x):
        x = math.log10(x) if plot.get("logx") else x
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        y = math.log10(y) if plot.get("logy") else y
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">'
        f'{plot["x"]}{" (log)" if plot.get("logx") else ""}</text>',
        f'<text x="14" y="{height / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {height / 2:.1f})">{", ".join(plot["y"])}'
        f'{" (log)" if plot.get("logy") else ""}</text>',
    ]
    for i, ((key, name), s) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in s)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        out.extend(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.5" fill="{color}"/>' for x, y in s)
        label = name if key is None else f"{plot['group']}={format_value(key)}"
        out.append(f'<text x="{width - pad + 4}" y="{pad + 14 * i}" font-size="10" fill="{color}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_report(report, out_dir, formats=("csv", "json")):
    """Write the requested formats under ``out_dir``; return the paths written."""
    bad = set(formats) - set(FORMATS)
    if bad:
        raise ValueError(f"unknown format(s): {', '.join(sorted(bad))}")
    out_dir = Path(out_dir)
    stem = report["experiment"]
    written = []
    if "json" in formats:
        written.append(write_atomic(out_dir / f"{stem}.json", report_json(report)))
    for table in report["tables"]:
        base = out_dir / f"{stem}__{table['name']}"
        if "csv" in formats:
            written.append(write_atomic(base.with_suffix(".csv"), table_csv(table)))
        if "svg" in formats:
            svg = table_svg(table)
            if svg is not None:
                written.append(write_atomic(base.with_suffix(".svg"), svg))
    return written


def verdict_lines(report):
    return [
        f"{'PASS' if v['passed'] else 'FAIL'} {report['experiment']}: {v['name']}: {v['detail']}"
        for v in report["verdicts"]
    ]
