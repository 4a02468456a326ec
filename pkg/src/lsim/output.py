"""CSV and SVG emission.

Both writers are deterministic: identical inputs produce byte-identical
files.  Time-series CSVs carry the fixed header

    t_us,re_rho12,im_rho12,re_rho13,im_rho13,pop1,pop2,pop3,e_d_arb

with full double precision and LF line endings; spectral maps are
written long-format as ``delta2_khz,t_us,value``.  The SVG renderer is
self-contained (no plotting dependency) so its bytes depend only on the
data and style.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import CHANNEL_NAMES, SpectralMap, TimeSeries
from .errors import RenderError

TIMESERIES_HEADER = "t_us," + ",".join(CHANNEL_NAMES)

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd",
            "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")

#: blue -> white -> red diverging stops for map rendering
_DIVERGING = ((0.0, (33, 102, 172)), (0.5, (247, 247, 247)), (1.0, (178, 24, 43)))


def _fmt(x: float) -> str:
    """Shortest round-trip decimal representation of a float."""
    return repr(float(x))


def write_csv(data: TimeSeries | SpectralMap, path: str | Path) -> Path:
    """Write a time series or spectral map as CSV; returns the path."""
    path = Path(path)
    if isinstance(data, TimeSeries):
        lines = [TIMESERIES_HEADER]
        columns = [data.t_us] + [data.channel(name) for name in CHANNEL_NAMES]
        for row in zip(*columns):
            lines.append(",".join(_fmt(v) for v in row))
    elif isinstance(data, SpectralMap):
        lines = ["delta2_khz,t_us,value"]
        for i, d in enumerate(data.delta2_khz):
            for j, t in enumerate(data.t_us):
                lines.append(f"{_fmt(d)},{_fmt(t)},{_fmt(data.values[i, j])}")
    else:
        raise TypeError(f"write_csv expects TimeSeries or SpectralMap, got {type(data)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def write_table_csv(path: str | Path, header: list[str], rows: list[list]) -> Path:
    """Generic small-table CSV used by sweep and fit reports."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------

_W, _H = 860, 520
_ML, _MR, _MT, _MB = 70, 160, 40, 55  # margins: left, right, top, bottom


def _ticks(lo: float, hi: float, n: int = 5) -> np.ndarray:
    if hi == lo:
        return np.array([lo])
    return np.linspace(lo, hi, n)


def _num(x: float) -> str:
    return f"{x:.6g}"


def render_svg(data: TimeSeries | SpectralMap, path: str | Path,
               style: dict | None = None) -> Path:
    """Render a line plot (series) or heatmap (map) as standalone SVG."""
    style = dict(style or {})
    if isinstance(data, TimeSeries):
        svg = _render_series(data, style)
    elif isinstance(data, SpectralMap):
        svg = _render_map(data, style)
    else:
        raise TypeError(f"render_svg expects TimeSeries or SpectralMap, got {type(data)}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg, encoding="utf-8", newline="\n")
    return path


def _svg_head(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="monospace" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_ML}" y="{_MT - 14}" font-size="14">{title}</text>',
    ]


def _axes(parts: list[str], x_lo, x_hi, y_lo, y_hi, x_label: str, y_label: str):
    pw, ph = _W - _ML - _MR, _H - _MT - _MB
    parts.append(f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" '
                 f'fill="none" stroke="black"/>')
    for xt in _ticks(x_lo, x_hi):
        px = _ML + (xt - x_lo) / (x_hi - x_lo or 1.0) * pw
        parts.append(f'<line x1="{px:.2f}" y1="{_MT + ph}" x2="{px:.2f}" '
                     f'y2="{_MT + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{px:.2f}" y="{_MT + ph + 18}" '
                     f'text-anchor="middle">{_num(xt)}</text>')
    for yt in _ticks(y_lo, y_hi):
        py = _MT + ph - (yt - y_lo) / (y_hi - y_lo or 1.0) * ph
        parts.append(f'<line x1="{_ML - 5}" y1="{py:.2f}" x2="{_ML}" '
                     f'y2="{py:.2f}" stroke="black"/>')
        parts.append(f'<text x="{_ML - 8}" y="{py + 4:.2f}" '
                     f'text-anchor="end">{_num(yt)}</text>')
    parts.append(f'<text x="{_ML + pw / 2}" y="{_H - 12}" '
                 f'text-anchor="middle">{x_label}</text>')
    parts.append(f'<text x="16" y="{_MT + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {_MT + ph / 2})">{y_label}</text>')


def _render_series(ts: TimeSeries, style: dict) -> str:
    channels = style.get("channels")
    if channels is None:
        channels = list(ts.channels)
    if not channels or len(ts.t_us) == 0:
        raise RenderError("nothing to draw: empty series or channel list")
    t = ts.t_us
    ys = [ts.channel(name) for name in channels]
    y_lo = min(float(np.min(y)) for y in ys)
    y_hi = max(float(np.max(y)) for y in ys)
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    x_lo, x_hi = float(t[0]), float(t[-1])
    if x_lo == x_hi:
        x_hi = x_lo + 1.0

    pw, ph = _W - _ML - _MR, _H - _MT - _MB
    parts = _svg_head(style.get("title", "time series"))
    _axes(parts, x_lo, x_hi, y_lo, y_hi,
          style.get("x_label", "t (us)"), style.get("y_label", "value"))
    for idx, (name, y) in enumerate(zip(channels, ys)):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = []
        for xv, yv in zip(t, y):
            px = _ML + (xv - x_lo) / (x_hi - x_lo) * pw
            py = _MT + ph - (yv - y_lo) / (y_hi - y_lo) * ph
            pts.append(f"{px:.2f},{py:.2f}")
        parts.append(f'<polyline points="{" ".join(pts)}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        ly = _MT + 16 + 16 * idx
        parts.append(f'<line x1="{_W - _MR + 10}" y1="{ly - 4}" '
                     f'x2="{_W - _MR + 34}" y2="{ly - 4}" stroke="{color}" '
                     f'stroke-width="2"/>')
        parts.append(f'<text x="{_W - _MR + 40}" y="{ly}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _colormap(u: float) -> str:
    stops = _DIVERGING
    u = min(max(u, 0.0), 1.0)
    for (u0, c0), (u1, c1) in zip(stops, stops[1:]):
        if u <= u1:
            f = 0.0 if u1 == u0 else (u - u0) / (u1 - u0)
            rgb = tuple(round(a + f * (b - a)) for a, b in zip(c0, c1))
            return f"rgb({rgb[0]},{rgb[1]},{rgb[2]})"
    r, g, b = stops[-1][1]
    return f"rgb({r},{g},{b})"


def _render_map(sm: SpectralMap, style: dict) -> str:
    if sm.values.size == 0:
        raise RenderError("nothing to draw: empty map")
    # downsample to keep the file size bounded
    max_cells = int(style.get("max_cells", 200))
    d_step = max(1, len(sm.delta2_khz) // max_cells)
    t_step = max(1, len(sm.t_us) // max_cells)
    d = sm.delta2_khz[::d_step]
    t = sm.t_us[::t_step]
    v = sm.values[::d_step, ::t_step]

    vmax = float(np.max(np.abs(v))) or 1.0
    pw, ph = _W - _ML - _MR, _H - _MT - _MB
    parts = _svg_head(style.get("title", "spectral map"))
    cw, ch = pw / len(t), ph / len(d)
    for i in range(len(d)):
        for j in range(len(t)):
            u = 0.5 + 0.5 * v[i, j] / vmax
            px = _ML + j * cw
            py = _MT + ph - (i + 1) * ch
            parts.append(f'<rect x="{px:.2f}" y="{py:.2f}" width="{cw + 0.5:.2f}" '
                         f'height="{ch + 0.5:.2f}" fill="{_colormap(u)}"/>')
    _axes(parts, float(t[0]), float(t[-1]), float(d[0]), float(d[-1]),
          style.get("x_label", "t (us)"), style.get("y_label", "two-photon detuning (kHz)"))
    parts.append(f'<text x="{_W - _MR + 10}" y="{_MT + 16}">|max| = {_num(vmax)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
