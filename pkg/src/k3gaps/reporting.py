"""Deterministic report emission: JSON, RFC-4180 CSV, hand-rolled SVG,
and a minimal TOML writer for resolved configs.

Byte-identical output across runs with the same inputs is a contract;
floats are serialized with repr (shortest round-trip), dictionaries
with sorted keys, and timestamps only on request.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Sequence

SCHEMA_VERSION = 1


def json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json_dumps(obj))


def _csv_field(v) -> str:
    s = repr(v) if isinstance(v, float) else str(v)
    if any(ch in s for ch in ',"\r\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def write_csv(path: Path, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(_csv_field(c) for c in columns)]
    for row in rows:
        lines.append(",".join(_csv_field(v) for v in row))
    path.write_text("\r\n".join(lines) + "\r\n")


def toml_dumps(data: dict, prefix: str = "") -> str:
    """Write a nested dict of scalars/lists/dicts as TOML."""
    scalar_lines = []
    table_lines = []
    for key, value in data.items():
        if isinstance(value, dict):
            name = f"{prefix}.{key}" if prefix else key
            table_lines.append(f"[{name}]")
            table_lines.append(toml_dumps(value, name))
        else:
            scalar_lines.append(f"{key} = {_toml_value(value)}")
    return "\n".join(scalar_lines + table_lines) + ("\n" if not prefix else "")


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError("TOML config values must be finite")
        return repr(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__} to TOML")


def write_toml(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(toml_dumps(data))


# ---------------------------------------------------------------------------
# SVG


def _svg_header(width: int, height: int) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
    )


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def svg_decay_plot(
    levels: Sequence[int],
    deviations: Sequence[float],
    bounds: Sequence[float],
    title: str = "",
    timestamp: str | None = None,
) -> str:
    """Log-scale plot of measured level deviations with the geometric
    reference bound line.  Zero deviations are clipped to the plot floor."""
    width, height, pad = 480, 320, 48
    finite = [d for d in deviations if d > 0] + [b for b in bounds if b > 0]
    lo = min(finite) / 10
    hi = max(finite) * 10
    loglo, loghi = math.log10(lo), math.log10(hi)

    def sx(n):
        span = max(levels) - min(levels) or 1
        return pad + (n - min(levels)) / span * (width - 2 * pad)

    def sy(v):
        v = max(v, lo)
        return height - pad - (math.log10(v) - loglo) / (loghi - loglo) * (height - 2 * pad)

    parts = [_svg_header(width, height)]
    parts.append(
        f'<text x="{width // 2}" y="20" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{title}</text>\n'
    )
    if timestamp:
        parts.append(
            f'<text x="{width - pad}" y="{height - 8}" text-anchor="end" '
            f'font-family="monospace" font-size="8">{timestamp}</text>\n'
        )
    # axes
    parts.append(
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" '
        f'y2="{height - pad}" stroke="black"/>\n'
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>\n'
    )
    for n in levels:
        parts.append(
            f'<text x="{_fmt(sx(n))}" y="{height - pad + 14}" text-anchor="middle" '
            f'font-family="monospace" font-size="10">{n}</text>\n'
        )
    bound_pts = " ".join(f"{_fmt(sx(n))},{_fmt(sy(b))}" for n, b in zip(levels, bounds))
    parts.append(
        f'<polyline points="{bound_pts}" fill="none" stroke="#888" '
        f'stroke-dasharray="4 3"/>\n'
    )
    dev_pts = " ".join(
        f"{_fmt(sx(n))},{_fmt(sy(d))}" for n, d in zip(levels, deviations)
    )
    parts.append(f'<polyline points="{dev_pts}" fill="none" stroke="#c00"/>\n')
    for n, d in zip(levels, deviations):
        parts.append(
            f'<circle cx="{_fmt(sx(n))}" cy="{_fmt(sy(d))}" r="3" fill="#c00"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)


def svg_lambda_plot(
    ns: Sequence[int], log10_lambdas: Sequence[float], timestamp: str | None = None
) -> str:
    """log10(lambda_n) against n."""
    width, height, pad = 480, 320, 48
    hi = max(log10_lambdas) * 1.05 or 1.0

    def sx(n):
        span = max(ns) - min(ns) or 1
        return pad + (n - min(ns)) / span * (width - 2 * pad)

    def sy(v):
        return height - pad - v / hi * (height - 2 * pad)

    parts = [_svg_header(width, height)]
    parts.append(
        f'<text x="{width // 2}" y="20" text-anchor="middle" '
        f'font-family="monospace" font-size="12">log10 lambda_n</text>\n'
    )
    if timestamp:
        parts.append(
            f'<text x="{width - pad}" y="{height - 8}" text-anchor="end" '
            f'font-family="monospace" font-size="8">{timestamp}</text>\n'
        )
    parts.append(
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" '
        f'y2="{height - pad}" stroke="black"/>\n'
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>\n'
    )
    pts = " ".join(f"{_fmt(sx(n))},{_fmt(sy(v))}" for n, v in zip(ns, log10_lambdas))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#06c"/>\n')
    for n, v in zip(ns, log10_lambdas):
        parts.append(f'<circle cx="{_fmt(sx(n))}" cy="{_fmt(sy(v))}" r="3" fill="#06c"/>\n')
    parts.append("</svg>\n")
    return "".join(parts)


def svg_circle_limit(
    limit_points: Sequence[tuple[float, float]],
    parabolic_points: Sequence[tuple[float, float]] = (),
    timestamp: str | None = None,
) -> str:
    """The projectivized null cone as the unit circle, with limit rays as
    dots and parabolic rays of short words as crosses."""
    size, pad = 360, 20
    c = size / 2
    r = c - pad

    def to_px(p):
        return c + r * p[0], c - r * p[1]

    parts = [_svg_header(size, size)]
    parts.append(
        f'<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="black"/>\n'
    )
    if timestamp:
        parts.append(
            f'<text x="{size - pad}" y="{size - 6}" text-anchor="end" '
            f'font-family="monospace" font-size="8">{timestamp}</text>\n'
        )
    for p in parabolic_points:
        x, y = to_px(p)
        parts.append(
            f'<path d="M {_fmt(x - 4)} {_fmt(y)} L {_fmt(x + 4)} {_fmt(y)} '
            f'M {_fmt(x)} {_fmt(y - 4)} L {_fmt(x)} {_fmt(y + 4)}" '
            f'stroke="#888" stroke-width="1"/>\n'
        )
    for p in limit_points:
        x, y = to_px(p)
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="#c00"/>\n')
    parts.append("</svg>\n")
    return "".join(parts)
