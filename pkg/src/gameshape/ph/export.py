"""Barcode CSV and SVG.

CSV columns: dimension, birth_squared, death_squared, birth, death,
essential_flag.  Squared values are exact (integers or ``p/q``); essential
bars have ``inf`` as death.  Leading ``#`` lines carry metadata.
"""
from __future__ import annotations

import csv
import io
import math
from fractions import Fraction

from .reduction import Bar, Barcode, render

COLUMNS = ["dimension", "birth_squared", "death_squared", "birth", "death", "essential_flag"]
DIM_COLOURS = {0: "#1f77b4", 1: "#2ca02c", 2: "#d62728"}


class BarcodeParseError(ValueError):
    pass


def _exact(text: str):
    f = Fraction(text)
    return int(f) if f.denominator == 1 else f


def barcode_to_csv(b: Barcode) -> str:
    buf = io.StringIO()
    buf.write(f"# points={b.n_points} threshold={'none' if b.threshold is None else b.threshold}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for bar in b.sorted():
        w.writerow([bar.dim, bar.birth, "inf" if bar.death is None else bar.death,
                     render(bar.birth), render(bar.death), int(bar.essential)])
    return buf.getvalue()


def barcode_from_csv(text: str) -> Barcode:
    meta, body = {}, []
    for ln in text.splitlines():
        if ln.startswith("#"):
            for tok in ln[1:].split():
                key, _, value = tok.partition("=")
                meta[key] = value
        elif ln.strip():
            body.append(ln)
    if not body:
        raise BarcodeParseError("no header row")
    rows = list(csv.reader(body))
    if rows[0] != COLUMNS:
        raise BarcodeParseError(f"expected columns {COLUMNS}, got {rows[0]}")
    bars = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(COLUMNS):
            raise BarcodeParseError(f"row {lineno}: expected {len(COLUMNS)} fields, got {len(row)}")
        try:
            dim = int(row[0])
            birth = _exact(row[1])
            death = None if row[2] == "inf" else _exact(row[2])
        except (ValueError, ZeroDivisionError) as exc:
            raise BarcodeParseError(f"row {lineno}: {exc}") from None
        if dim not in (0, 1, 2):
            raise BarcodeParseError(f"row {lineno}: dimension {dim} not in 0..2")
        if death is not None and death < birth:
            raise BarcodeParseError(f"row {lineno}: death before birth")
        bars.append(Bar(dim, birth, death))
    try:
        n_points = int(meta.get("points", 0))
        thr = meta.get("threshold", "none")
        threshold = None if thr == "none" else _exact(thr)
    except ValueError as exc:
        raise BarcodeParseError(f"bad metadata: {exc}") from None
    if not meta and bars:
        n_points = sum(1 for bar in bars if bar.dim == 0)
    return Barcode(bars, n_points, threshold)


def barcode_svg(b: Barcode, title: str = "", max_eps=None, min_length: float = 0.0,
                width: int = 640, bar_height: int = 6) -> str:
    """Horizontal bars grouped by dimension over an epsilon axis.

    Bars shorter than ``min_length`` (epsilon units) are left out to keep
    large barcodes readable; essential bars run to the right edge with an
    arrow head.
    """
    bars = [bar for bar in b.sorted()
            if bar.essential or bar.death_eps - bar.birth_eps >= min_length]
    finite = [bar.death_eps for bar in bars if not bar.essential]
    if max_eps is None:
        top = max(finite + [bar.birth_eps for bar in bars] + [1.0])
        if b.threshold is not None:
            top = max(top, math.sqrt(b.threshold))
        max_eps = math.ceil(top * 1.1 * 2) / 2
    left, right, head = 40, 20, 30
    span = width - left - right
    x = lambda eps: left + span * min(eps, max_eps) / max_eps
    gap = 2
    height = head + len(bars) * (bar_height + gap) + 10 * len(DIM_COLOURS) + 40
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{left}" y="16">{_escape(title)}</text>')
    y = head
    for d in sorted(DIM_COLOURS):
        group = [bar for bar in bars if bar.dim == d]
        if not group:
            continue
        out.append(f'<text x="4" y="{y + bar_height}" fill="{DIM_COLOURS[d]}">H{d}</text>')
        for bar in group:
            x0, x1 = x(bar.birth_eps), x(bar.death_eps)
            out.append(f'<rect x="{x0:.2f}" y="{y}" width="{max(x1 - x0, 1):.2f}" '
                       f'height="{bar_height}" fill="{DIM_COLOURS[d]}"/>')
            if bar.essential:
                out.append(f'<path d="M{x1:.2f},{y - 2} L{x1 + 6:.2f},{y + bar_height / 2:.2f} '
                           f'L{x1:.2f},{y + bar_height + 2}" fill="{DIM_COLOURS[d]}"/>')
            y += bar_height + gap
        y += 10
    axis_y = y + 4
    out.append(f'<line x1="{left}" y1="{axis_y}" x2="{left + span}" y2="{axis_y}" stroke="black"/>')
    step = 0.5 if max_eps <= 5 else 1.0
    tick = 0.0
    while tick <= max_eps + 1e-9:
        tx = x(tick)
        out.append(f'<line x1="{tx:.2f}" y1="{axis_y}" x2="{tx:.2f}" y2="{axis_y + 4}" stroke="black"/>')
        out.append(f'<text x="{tx:.2f}" y="{axis_y + 16}" text-anchor="middle">{tick:g}</text>')
        tick += step
    out.append(f'<text x="{left + span}" y="{axis_y + 30}" text-anchor="end">epsilon</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
