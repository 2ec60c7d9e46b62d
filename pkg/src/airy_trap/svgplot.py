"""Minimal deterministic SVG rendering: line panels and heatmaps.

No plotting dependency: line plots are emitted as SVG polylines, heatmaps
as a zlib-compressed PNG embedded in the SVG.  Identical input produces
byte-identical output.
"""

from __future__ import annotations

import base64
import math
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyDataError

__all__ = ["Series", "Panel", "render_line_svg", "render_heatmap_svg"]

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
_VIRIDIS = [
    (68, 1, 84), (71, 45, 123), (59, 82, 139), (44, 114, 142), (33, 145, 140),
    (40, 174, 128), (94, 201, 98), (173, 220, 48), (253, 231, 37),
]


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    label: str | None = None
    color: str | None = None
    dotted: bool = False


@dataclass
class Panel:
    series: list[Series]
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    xlog: bool = False
    ylog: bool = False


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _nice_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 5.0, 10.0):
        if raw <= m * mag:
            step = m * mag
            break
    t0 = math.ceil(lo / step) * step
    ticks = []
    t = t0
    while t <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _log_ticks(lo: float, hi: float) -> list[float]:
    lo_d = math.floor(math.log10(lo))
    hi_d = math.ceil(math.log10(hi))
    return [10.0**d for d in range(int(lo_d), int(hi_d) + 1)
            if lo / 1.001 <= 10.0**d <= hi * 1.001]


def _tick_label(v: float, log: bool) -> str:
    if log:
        return f"1e{int(round(math.log10(v)))}"
    return _fmt(v)


def _data_range(vals, log: bool):
    arr = np.concatenate([np.asarray(v, dtype=float).ravel() for v in vals])
    arr = arr[np.isfinite(arr)]
    if log:
        arr = arr[arr > 0]
    if len(arr) == 0:
        raise EmptyDataError("no finite data to plot")
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        pad = 0.5 if not log else 0.0
        lo, hi = lo - pad, hi + pad
        if log:
            lo, hi = lo / 2, hi * 2
    return lo, hi


def render_line_svg(panels, width: int = 660, panel_height: int = 330) -> bytes:
    """Stacked line-plot panels as SVG bytes; log axes and dotted overlays OK."""
    panels = list(panels)
    if not panels or all(not p.series for p in panels):
        raise EmptyDataError("render_line_svg: no panels or series")
    for p in panels:
        if any(len(s.x) == 0 or len(s.x) != len(s.y) for s in p.series):
            raise EmptyDataError("render_line_svg: empty or mismatched series")

    ml, mr, mt, mb = 72, 16, 34, 48
    total_h = panel_height * len(panels)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{total_h}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{total_h}" fill="white"/>',
    ]
    for ip, p in enumerate(panels):
        oy = ip * panel_height
        pw, ph = width - ml - mr, panel_height - mt - mb
        xs = [s.x for s in p.series]
        ys = [s.y for s in p.series]
        xlo, xhi = _data_range(xs, p.xlog)
        ylo, yhi = _data_range(ys, p.ylog)
        if not p.ylog:
            pad = 0.05 * (yhi - ylo)
            ylo, yhi = ylo - pad, yhi + pad

        def px(v):
            t = ((math.log10(v) - math.log10(xlo)) / (math.log10(xhi) - math.log10(xlo))
                 if p.xlog else (v - xlo) / (xhi - xlo))
            return ml + t * pw

        def py(v):
            t = ((math.log10(v) - math.log10(ylo)) / (math.log10(yhi) - math.log10(ylo))
                 if p.ylog else (v - ylo) / (yhi - ylo))
            return oy + mt + (1.0 - t) * ph

        out.append(f'<rect x="{ml}" y="{oy + mt}" width="{pw}" height="{ph}" '
                   'fill="none" stroke="black"/>')
        if p.title:
            out.append(f'<text x="{ml + pw / 2:.1f}" y="{oy + mt - 12}" '
                       f'text-anchor="middle">{p.title}</text>')
        xticks = _log_ticks(xlo, xhi) if p.xlog else _nice_ticks(xlo, xhi)
        for t in xticks:
            x = px(t)
            out.append(f'<line x1="{x:.2f}" y1="{oy + mt + ph}" x2="{x:.2f}" '
                       f'y2="{oy + mt + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{x:.2f}" y="{oy + mt + ph + 18}" '
                       f'text-anchor="middle">{_tick_label(t, p.xlog)}</text>')
        yticks = _log_ticks(ylo, yhi) if p.ylog else _nice_ticks(ylo, yhi)
        for t in yticks:
            y = py(t)
            out.append(f'<line x1="{ml - 5}" y1="{y:.2f}" x2="{ml}" y2="{y:.2f}" '
                       'stroke="black"/>')
            out.append(f'<text x="{ml - 8}" y="{y + 4:.2f}" text-anchor="end">'
                       f'{_tick_label(t, p.ylog)}</text>')
        if p.xlabel:
            out.append(f'<text x="{ml + pw / 2:.1f}" y="{oy + panel_height - 10}" '
                       f'text-anchor="middle">{p.xlabel}</text>')
        if p.ylabel:
            yc = oy + mt + ph / 2
            out.append(f'<text x="16" y="{yc:.1f}" text-anchor="middle" '
                       f'transform="rotate(-90 16 {yc:.1f})">{p.ylabel}</text>')

        legend_y = oy + mt + 16
        for i, s in enumerate(p.series):
            color = s.color or _COLORS[i % len(_COLORS)]
            pts = []
            for xv, yv in zip(np.asarray(s.x, float), np.asarray(s.y, float)):
                if not (np.isfinite(xv) and np.isfinite(yv)):
                    continue
                if p.xlog and xv <= 0 or p.ylog and yv <= 0:
                    continue
                pts.append(f"{px(xv):.2f},{py(yv):.2f}")
            dash = ' stroke-dasharray="2,4"' if s.dotted else ""
            if len(pts) == 1:
                x0, y0 = pts[0].split(",")
                out.append(f'<circle cx="{x0}" cy="{y0}" r="3" fill="{color}"/>')
            elif pts:
                out.append(f'<polyline points="{" ".join(pts)}" fill="none" '
                           f'stroke="{color}" stroke-width="1.5"{dash}/>')
            if s.label:
                out.append(f'<line x1="{ml + pw - 150}" y1="{legend_y - 4}" '
                           f'x2="{ml + pw - 126}" y2="{legend_y - 4}" '
                           f'stroke="{color}" stroke-width="1.5"{dash}/>')
                out.append(f'<text x="{ml + pw - 120}" y="{legend_y}">{s.label}</text>')
                legend_y += 16
    out.append("</svg>")
    return "\n".join(out).encode()


def _png_rgb(rows: np.ndarray) -> bytes:
    """Encode an (h, w, 3) uint8 array as a PNG byte string."""
    h, w, _ = rows.shape

    def chunk(tag: bytes, payload: bytes) -> bytes:
        body = tag + payload
        return struct.pack(">I", len(payload)) + body + struct.pack(
            ">I", zlib.crc32(body) & 0xFFFFFFFF)

    raw = b"".join(b"\x00" + rows[i].tobytes() for i in range(h))
    return b"".join([
        b"\x89PNG\r\n\x1a\n",
        chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)),
        chunk(b"IDAT", zlib.compress(raw, 6)),
        chunk(b"IEND", b""),
    ])


def _colormap(vals: np.ndarray) -> np.ndarray:
    """Map [0, 1] floats to RGB via the fixed anchor table."""
    anchors = np.array(_VIRIDIS, dtype=float)
    pos = np.clip(vals, 0.0, 1.0) * (len(anchors) - 1)
    i0 = np.clip(pos.astype(int), 0, len(anchors) - 2)
    frac = (pos - i0)[..., None]
    rgb = anchors[i0] * (1 - frac) + anchors[i0 + 1] * frac
    return np.round(rgb).astype(np.uint8)


def render_heatmap_svg(data: np.ndarray, x: np.ndarray, y: np.ndarray,
                       xlabel: str = "", ylabel: str = "", title: str = "",
                       overlay_xy: tuple[np.ndarray, np.ndarray] | None = None,
                       width: int = 660, height: int = 480) -> bytes:
    """Heatmap of data[i, j] at (y[i], x[j]) with colorbar; optional overlay curve."""
    data = np.asarray(data, dtype=float)
    if data.size == 0:
        raise EmptyDataError("render_heatmap_svg: empty data")
    if data.shape != (len(y), len(x)):
        raise EmptyDataError("render_heatmap_svg: data shape does not match axes")
    ml, mr, mt, mb = 72, 86, 34, 48
    pw, ph = width - ml - mr, height - mt - mb

    finite = data[np.isfinite(data)]
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if hi <= lo:
        hi = lo + 1.0
    norm = (np.nan_to_num(data, nan=lo) - lo) / (hi - lo)
    rgb = _colormap(norm[::-1, :])  # row 0 at the bottom
    png = base64.b64encode(_png_rgb(rgb)).decode()

    xlo, xhi = float(x[0]), float(x[-1])
    ylo, yhi = float(y[0]), float(y[-1])
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        'font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<image x="{ml}" y="{mt}" width="{pw}" height="{ph}" '
        f'preserveAspectRatio="none" image-rendering="pixelated" '
        f'href="data:image/png;base64,{png}"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{ml + pw / 2:.1f}" y="{mt - 12}" text-anchor="middle">'
                   f'{title}</text>')
    for t in _nice_ticks(xlo, xhi):
        px = ml + (t - xlo) / (xhi - xlo) * pw
        out.append(f'<line x1="{px:.2f}" y1="{mt + ph}" x2="{px:.2f}" '
                   f'y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{mt + ph + 18}" text-anchor="middle">'
                   f'{_fmt(t)}</text>')
    for t in _nice_ticks(ylo, yhi):
        py = mt + (1 - (t - ylo) / (yhi - ylo)) * ph
        out.append(f'<line x1="{ml - 5}" y1="{py:.2f}" x2="{ml}" y2="{py:.2f}" '
                   'stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{py + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
    if xlabel:
        out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" '
                   f'text-anchor="middle">{xlabel}</text>')
    if ylabel:
        yc = mt + ph / 2
        out.append(f'<text x="16" y="{yc:.1f}" text-anchor="middle" '
                   f'transform="rotate(-90 16 {yc:.1f})">{ylabel}</text>')
    if overlay_xy is not None:
        ox, oy_ = overlay_xy
        pts = []
        for xv, yv in zip(np.asarray(ox, float), np.asarray(oy_, float)):
            if xlo <= xv <= xhi and ylo <= yv <= yhi:
                pts.append(f"{ml + (xv - xlo) / (xhi - xlo) * pw:.2f},"
                           f"{mt + (1 - (yv - ylo) / (yhi - ylo)) * ph:.2f}")
        if pts:
            out.append(f'<polyline points="{" ".join(pts)}" fill="none" '
                       'stroke="white" stroke-width="1.5" stroke-dasharray="4,4"/>')

    # colorbar strip
    strip = _colormap(np.linspace(1, 0, 128)[:, None])
    strip_png = base64.b64encode(_png_rgb(np.repeat(strip, 8, axis=1))).decode()
    cbx = width - mr + 18
    out.append(f'<image x="{cbx}" y="{mt}" width="14" height="{ph}" '
               f'preserveAspectRatio="none" href="data:image/png;base64,{strip_png}"/>')
    out.append(f'<rect x="{cbx}" y="{mt}" width="14" height="{ph}" fill="none" stroke="black"/>')
    out.append(f'<text x="{cbx + 18}" y="{mt + 10}" font-size="11">{_fmt(hi)}</text>')
    out.append(f'<text x="{cbx + 18}" y="{mt + ph}" font-size="11">{_fmt(lo)}</text>')
    out.append("</svg>")
    return "\n".join(out).encode()
