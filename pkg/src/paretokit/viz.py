"""Plot geometry for objective-space visualizations and a small SVG writer.

Layout functions return a :class:`PlotGeometry` in their own data frame;
:func:`render_svg` maps it onto a fixed canvas. No plotting library is used so
the output is deterministic and diffable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .core import ContractError

DEFAULT_COLORS = ("#440154", "#3b528b", "#21918c", "#5ec962", "#fde725")
PLOT_KINDS = ("scatter2d", "scatter3d", "pairwise", "pcp", "radviz", "star", "heatmap", "petal", "radar")


@dataclass(frozen=True)
class Style:
    stroke: str = "#1f77b4"
    fill: str = "none"
    opacity: float = 1.0
    stroke_width: float = 1.0


POINT = Style(stroke="#1f77b4", fill="#1f77b4", opacity=0.8)
HIGHLIGHT = Style(stroke="#d62728", fill="#d62728", opacity=1.0, stroke_width=2.0)
AXIS = Style(stroke="#555555")
REFERENCE = Style(stroke="#999999")


@dataclass
class Polyline:
    points: np.ndarray
    style: Style = AXIS


@dataclass
class Polygon:
    points: np.ndarray
    style: Style = REFERENCE


@dataclass
class Circle:
    center: tuple[float, float]
    r: float
    style: Style = POINT


@dataclass
class Wedge:
    center: tuple[float, float]
    r: float
    start: float  # radians
    end: float
    style: Style = POINT


@dataclass
class Text:
    pos: tuple[float, float]
    text: str
    style: Style = AXIS


@dataclass
class PlotGeometry:
    primitives: list = field(default_factory=list)
    bounds: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 1.0)  # xmin, xmax, ymin, ymax

    def add(self, *prims) -> None:
        self.primitives.extend(prims)


@dataclass
class PlotSpec:
    kind: str
    data: np.ndarray
    normalize: bool = False
    ideal: np.ndarray | None = None
    nadir: np.ndarray | None = None
    highlight: Sequence[int] = ()
    row: int = 0  # petal and radar draw a single solution
    sort_lexicographic: bool = False
    colors: Sequence[str] = DEFAULT_COLORS
    azim: float = 45.0
    elev: float = 30.0


# --- transforms -----------------------------------------------------------------


def normalize(F, ideal=None, nadir=None) -> np.ndarray:
    """Min-max scale per objective; an objective with zero range maps to 0."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    lo = F.min(axis=0) if ideal is None else np.asarray(ideal, dtype=float)
    hi = F.max(axis=0) if nadir is None else np.asarray(nadir, dtype=float)
    span = hi - lo
    out = np.zeros_like(F)
    ok = span > 0
    out[:, ok] = (F[:, ok] - lo[ok]) / span[ok]
    return out


def anchors(m: int) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(m) / m
    return np.column_stack([np.cos(angles), np.sin(angles)])


def _anchor_sum(S: np.ndarray) -> np.ndarray:
    # elementwise sum rather than a matmul so each row's result is independent of the batch
    return (S[:, :, None] * anchors(S.shape[1])[None]).sum(axis=1)


def project_radviz(S) -> np.ndarray:
    """Weighted mean of evenly spaced unit anchors; all-zero rows map to the origin."""
    S = np.atleast_2d(np.asarray(S, dtype=float))
    total = S.sum(axis=1)
    safe = np.where(total > 0, total, 1.0)
    P = _anchor_sum(S) / safe[:, None]
    P[total <= 0] = 0.0
    return P


def project_star(S) -> np.ndarray:
    return _anchor_sum(np.atleast_2d(np.asarray(S, dtype=float)))


def project_ortho(P, azim: float = 45.0, elev: float = 30.0) -> np.ndarray:
    """Fixed-angle orthographic view of 3-D points (angles in degrees)."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    a, e = math.radians(azim), math.radians(elev)
    x = P[:, 0] * math.cos(a) - P[:, 1] * math.sin(a)
    depth = P[:, 0] * math.sin(a) + P[:, 1] * math.cos(a)
    y = P[:, 2] * math.cos(e) - depth * math.sin(e)
    return np.column_stack([x, y])


def colormap(values, colors: Sequence[str] = DEFAULT_COLORS) -> list[str]:
    """Piecewise-linear interpolation of hex colors for values in [0, 1]."""
    rgb = np.array([[int(c[i : i + 2], 16) for i in (1, 3, 5)] for c in colors], dtype=float)
    out = []
    for v in np.clip(np.asarray(values, dtype=float).ravel(), 0.0, 1.0):
        pos = v * (len(rgb) - 1)
        k = min(int(pos), len(rgb) - 2) if len(rgb) > 1 else 0
        t = pos - k
        c = rgb[k] if len(rgb) == 1 else (1 - t) * rgb[k] + t * rgb[k + 1]
        out.append("#" + "".join(f"{int(round(x)):02x}" for x in c))
    return out


def _padded(lo, hi, pad=0.05):
    span = hi - lo
    if span <= 0:
        span = 1.0
    return lo - pad * span, hi + pad * span


def _point_style(i, highlight):
    return HIGHLIGHT if i in highlight else POINT


# --- layouts --------------------------------------------------------------------


def layout_scatter(F, highlight: Sequence[int] = (), azim=45.0, elev=30.0) -> PlotGeometry:
    F = np.atleast_2d(np.asarray(F, dtype=float))
    if F.shape[1] == 3:
        P = project_ortho(F, azim, elev)
    elif F.shape[1] == 2:
        P = F
    else:
        raise ContractError("scatter needs 2 or 3 objectives; use the pairwise layout otherwise")
    x0, x1 = _padded(P[:, 0].min(), P[:, 0].max())
    y0, y1 = _padded(P[:, 1].min(), P[:, 1].max())
    r = 0.01 * max(x1 - x0, y1 - y0)
    geo = PlotGeometry(bounds=(x0, x1, y0, y1))
    geo.add(*(Circle((p[0], p[1]), r, _point_style(i, highlight)) for i, p in enumerate(P)))
    return geo


def layout_pairwise(F, highlight: Sequence[int] = ()) -> PlotGeometry:
    """M x M grid of panels with objective labels on the diagonal."""
    S = normalize(F)
    m = S.shape[1]
    geo = PlotGeometry(bounds=(0.0, float(m), 0.0, float(m)))
    pad = 0.08
    for i in range(m):
        for j in range(m):
            x0, y0 = float(j), float(m - 1 - i)
            geo.add(Polygon(np.array([[x0, y0], [x0 + 1, y0], [x0 + 1, y0 + 1], [x0, y0 + 1]]), REFERENCE))
            if i == j:
                geo.add(Text((x0 + 0.5, y0 + 0.5), f"f{i + 1}"))
                continue
            for k, s in enumerate(S):
                cx = x0 + pad + (1 - 2 * pad) * s[j]
                cy = y0 + pad + (1 - 2 * pad) * s[i]
                geo.add(Circle((cx, cy), 0.015, _point_style(k, highlight)))
    return geo


def layout_pcp(F, normalize_values: bool = True, highlight: Sequence[int] = ()) -> PlotGeometry:
    F = np.atleast_2d(np.asarray(F, dtype=float))
    m = F.shape[1]
    if m < 2:
        raise ContractError("parallel coordinates need at least two objectives")
    V = normalize(F) if normalize_values else F
    xs = np.arange(m) / (m - 1)
    lo, hi = (0.0, 1.0) if normalize_values else (float(V.min()), float(V.max()))
    geo = PlotGeometry(bounds=(-0.05, 1.05, *_padded(lo, hi)))
    for j, x in enumerate(xs):
        geo.add(Polyline(np.array([[x, lo], [x, hi]]), AXIS), Text((x, hi), f"f{j + 1}"))
    order = [i for i in range(len(V)) if i not in highlight] + [i for i in highlight]
    for i in order:
        style = HIGHLIGHT if i in highlight else Style(stroke="#1f77b4", opacity=0.6)
        geo.add(Polyline(np.column_stack([xs, V[i]]), style))
    return geo


def _circle_frame(geo: PlotGeometry, m: int) -> None:
    geo.add(Circle((0.0, 0.0), 1.0, REFERENCE))
    for j, a in enumerate(anchors(m)):
        geo.add(Polyline(np.array([[0.0, 0.0], a]), REFERENCE), Text((1.08 * a[0], 1.08 * a[1]), f"f{j + 1}"))


def layout_radviz(S, highlight: Sequence[int] = ()) -> PlotGeometry:
    S = np.atleast_2d(np.asarray(S, dtype=float))
    geo = PlotGeometry(bounds=(-1.2, 1.2, -1.2, 1.2))
    _circle_frame(geo, S.shape[1])
    geo.add(*(Circle((p[0], p[1]), 0.02, _point_style(i, highlight)) for i, p in enumerate(project_radviz(S))))
    return geo


def layout_star(S, highlight: Sequence[int] = ()) -> PlotGeometry:
    S = np.atleast_2d(np.asarray(S, dtype=float))
    P = project_star(S)
    reach = max(1.2, float(np.abs(P).max()) * 1.1 if len(P) else 1.2)
    geo = PlotGeometry(bounds=(-reach, reach, -reach, reach))
    _circle_frame(geo, S.shape[1])
    geo.add(*(Circle((p[0], p[1]), 0.02, _point_style(i, highlight)) for i, p in enumerate(P)))
    return geo


def layout_heatmap(F, sort_lexicographic: bool = False, colors: Sequence[str] = DEFAULT_COLORS):
    """Colored grid with one row per solution; returns the geometry and the normalized cells."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    order = np.lexsort(F.T[::-1]) if sort_lexicographic else np.arange(len(F))
    cells = normalize(F)[order]
    n, m = cells.shape
    geo = PlotGeometry(bounds=(0.0, float(m), 0.0, float(n)))
    fills = colormap(cells, colors)
    for i in range(n):
        y0 = float(n - 1 - i)
        for j in range(m):
            rect = np.array([[j, y0], [j + 1, y0], [j + 1, y0 + 1], [j, y0 + 1]], dtype=float)
            c = fills[i * m + j]
            geo.add(Polygon(rect, Style(stroke=c, fill=c)))
    return geo, cells


def layout_petal(s, colors: Sequence[str] = DEFAULT_COLORS) -> PlotGeometry:
    s = np.asarray(s, dtype=float).ravel()
    m = len(s)
    geo = PlotGeometry(bounds=(-1.1, 1.1, -1.1, 1.1))
    geo.add(Circle((0.0, 0.0), 1.0, REFERENCE))
    fills = colormap(np.linspace(0, 1, m), colors)
    step = 2.0 * np.pi / m
    for j, v in enumerate(s):
        geo.add(Wedge((0.0, 0.0), float(v), j * step, (j + 1) * step, Style(stroke="#333333", fill=fills[j])))
    return geo


def radar_vertices(values, inner: float = 0.2) -> np.ndarray:
    """Polygon vertices for normalized values; 0 lands on the inner ring, 1 on the unit ring."""
    values = np.asarray(values, dtype=float)
    radius = inner + (1.0 - inner) * values
    return anchors(len(values)) * radius[:, None]


def layout_radar(f, ideal, nadir, inner: float = 0.2) -> PlotGeometry:
    f, ideal, nadir = (np.asarray(v, dtype=float).ravel() for v in (f, ideal, nadir))
    if np.any(nadir == ideal):
        raise ContractError("radar needs nadir != ideal in every objective")
    m = len(f)
    geo = PlotGeometry(bounds=(-1.2, 1.2, -1.2, 1.2))
    geo.add(
        Polygon(radar_vertices(np.zeros(m), inner), REFERENCE),
        Polygon(radar_vertices(np.ones(m), inner), REFERENCE),
        Polygon(radar_vertices((f - ideal) / (nadir - ideal), inner), Style(stroke="#d62728", fill="#d62728", opacity=0.4)),
    )
    return geo


def layout(spec: PlotSpec) -> PlotGeometry:
    F = np.atleast_2d(np.asarray(spec.data, dtype=float))
    hl = tuple(spec.highlight)
    kind = spec.kind
    if kind in ("scatter2d", "scatter3d"):
        return layout_scatter(normalize(F) if spec.normalize else F, hl, spec.azim, spec.elev)
    if kind == "pairwise":
        return layout_pairwise(F, hl)
    if kind == "pcp":
        return layout_pcp(F, spec.normalize, hl)
    if kind in ("radviz", "star"):
        S = normalize(F, spec.ideal, spec.nadir)
        return layout_radviz(S, hl) if kind == "radviz" else layout_star(S, hl)
    if kind == "heatmap":
        return layout_heatmap(F, spec.sort_lexicographic, spec.colors)[0]
    if kind == "petal":
        S = normalize(F, spec.ideal, spec.nadir) if spec.normalize else F
        return layout_petal(S[spec.row], spec.colors)
    if kind == "radar":
        if spec.ideal is None or spec.nadir is None:
            if not spec.normalize:
                raise ContractError("radar requires ideal and nadir points (or normalize)")
            ideal, nadir = F.min(axis=0), F.max(axis=0)
        else:
            ideal, nadir = np.asarray(spec.ideal, float), np.asarray(spec.nadir, float)
        if np.any(F < ideal - 1e-12) or np.any(F > nadir + 1e-12):
            raise ContractError("radar data must lie between ideal and nadir")
        return layout_radar(F[spec.row], ideal, nadir)
    raise ContractError(f"unknown plot kind {kind!r}")


# --- SVG --------------------------------------------------------------------------


def _n(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _style_attrs(style: Style) -> str:
    return (
        f'stroke="{style.stroke}" fill="{style.fill}" '
        f'stroke-width="{_n(style.stroke_width)}" opacity="{_n(style.opacity)}"'
    )


def svg_document(geometry: PlotGeometry, width: int = 400, height: int = 400, margin: int = 20) -> str:
    """Standalone SVG 1.1 text; identical geometry yields identical bytes."""
    xmin, xmax, ymin, ymax = geometry.bounds
    sx = (width - 2 * margin) / ((xmax - xmin) or 1.0)
    sy = (height - 2 * margin) / ((ymax - ymin) or 1.0)

    def px(x, y):
        return margin + (x - xmin) * sx, height - margin - (y - ymin) * sy

    def pts(P):
        return " ".join(f"{_n(a)},{_n(b)}" for a, b in (px(x, y) for x, y in P))

    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" stroke="#000000" fill="#ffffff" stroke-width="1"/>',
    ]
    for p in geometry.primitives:
        if isinstance(p, Polyline):
            lines.append(f'<polyline points="{pts(p.points)}" {_style_attrs(p.style)}/>')
        elif isinstance(p, Polygon):
            lines.append(f'<polygon points="{pts(p.points)}" {_style_attrs(p.style)}/>')
        elif isinstance(p, Circle):
            cx, cy = px(*p.center)
            # radius in data units along x
            lines.append(f'<circle cx="{_n(cx)}" cy="{_n(cy)}" r="{_n(p.r * sx)}" {_style_attrs(p.style)}/>')
        elif isinstance(p, Wedge):
            lines.append(_wedge_path(p, px, sx))
        elif isinstance(p, Text):
            x, y = px(*p.pos)
            lines.append(
                f'<text x="{_n(x)}" y="{_n(y)}" text-anchor="middle" font-size="10" '
                f'fill="{p.style.stroke}">{escape(p.text)}</text>'
            )
        else:
            raise ContractError(f"unsupported primitive {type(p).__name__}")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _wedge_path(w: Wedge, px, sx) -> str:
    cx, cy = px(*w.center)
    r = w.r * sx
    # SVG y grows downward, so angles are mirrored
    x0, y0 = cx + r * math.cos(w.start), cy - r * math.sin(w.start)
    x1, y1 = cx + r * math.cos(w.end), cy - r * math.sin(w.end)
    large = 1 if (w.end - w.start) > math.pi else 0
    d = f"M {_n(cx)} {_n(cy)} L {_n(x0)} {_n(y0)} A {_n(r)} {_n(r)} 0 {large} 0 {_n(x1)} {_n(y1)} Z"
    return f'<path d="{d}" {_style_attrs(w.style)}/>'


def render_svg(geometry: PlotGeometry, path: str | Path, width: int = 400, height: int = 400) -> Path:
    path = Path(path)
    try:
        path.write_text(svg_document(geometry, width, height))
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc.strerror or exc}") from exc
    return path
