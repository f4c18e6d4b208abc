"""Render sweep CSVs as standalone SVG line charts (log-x, one polyline
per curve group, legend when there is more than one group)."""

from __future__ import annotations

import csv
import math
from pathlib import Path

from .errors import ParseError, ValidationError

CSV_HEADER = (
    "sweep_channel,sigma_br_m,sigma_brr_mps,sigma_doa_deg,"
    "rmse_pos_m,rmse_vel_mps,trials,failed,pairs"
)

_CHANNEL_UNITS = {"br": "m", "brr": "m/s", "doa": "deg"}
_PALETTE = ("#1f6fb4", "#d95f0e", "#2a9d4e", "#8e44ad", "#c0392b", "#566573")

_WIDTH, _HEIGHT = 640, 440
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 20, 20, 50


def read_sweep_csv(path: str | Path) -> list[dict]:
    """Parse a sweep CSV back into row dicts, validating the frozen schema."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    reader = csv.reader(text.splitlines())
    table = list(reader)
    if not table or ",".join(table[0]) != CSV_HEADER:
        raise ParseError(f"{path}: missing or unexpected CSV header")
    if len(table) < 2:
        raise ParseError(f"{path}: no data rows")
    rows = []
    for lineno, rec in enumerate(table[1:], start=2):
        if len(rec) != 9:
            raise ParseError(f"{path}:{lineno}: expected 9 fields, got {len(rec)}")
        try:
            rows.append(
                {
                    "sweep_channel": rec[0],
                    "sigma_br_m": float(rec[1]),
                    "sigma_brr_mps": float(rec[2]),
                    "sigma_doa_deg": float(rec[3]),
                    "rmse_pos_m": float(rec[4]),
                    "rmse_vel_mps": float(rec[5]) if rec[5] != "" else None,
                    "trials": int(rec[6]),
                    "failed": int(rec[7]),
                    "pairs": int(rec[8]),
                }
            )
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        if rows[-1]["sweep_channel"] not in _CHANNEL_UNITS:
            raise ParseError(f"{path}:{lineno}: unknown sweep channel {rec[0]!r}")
    return rows


def _group_key(row: dict) -> tuple:
    # One curve per (channel, fixed-sigma configuration); the swept
    # channel's own sigma is the x coordinate.
    fixed = {
        "br": ("sigma_brr_mps", "sigma_doa_deg"),
        "brr": ("sigma_br_m", "sigma_doa_deg"),
        "doa": ("sigma_br_m", "sigma_brr_mps"),
    }[row["sweep_channel"]]
    return (row["sweep_channel"],) + tuple(row[name] for name in fixed)


def _group_label(key: tuple) -> str:
    channel = key[0]
    fixed = {
        "br": ("brr", "doa"),
        "brr": ("br", "doa"),
        "doa": ("br", "brr"),
    }[channel]
    parts = [f"sigma_{name}={value:g}" for name, value in zip(fixed, key[1:])]
    return f"{channel} sweep, " + ", ".join(parts)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def render_sweep_svg(rows: list[dict], metric: str = "pos") -> str:
    """Build the SVG document for one metric ("pos" or "vel")."""
    if metric not in ("pos", "vel"):
        raise ValidationError(f"metric: must be 'pos' or 'vel', got {metric!r}")
    column = "rmse_pos_m" if metric == "pos" else "rmse_vel_mps"
    sigma_col = {"br": "sigma_br_m", "brr": "sigma_brr_mps", "doa": "sigma_doa_deg"}

    groups: dict[tuple, list[tuple[float, float]]] = {}
    for row in rows:
        y = row[column]
        if y is None:
            continue
        x = row[sigma_col[row["sweep_channel"]]]
        if x <= 0.0:
            raise ValidationError(
                f"sigma value {x} cannot be drawn on a log axis (must be > 0)"
            )
        groups.setdefault(_group_key(row), []).append((x, y))
    if not groups:
        raise ValidationError(f"no plottable values for metric {metric!r}")

    xs = [x for pts in groups.values() for x, _ in pts]
    ys = [y for pts in groups.values() for _, y in pts]
    log_lo, log_hi = math.log10(min(xs)), math.log10(max(xs))
    if log_hi == log_lo:
        log_lo, log_hi = log_lo - 0.5, log_hi + 0.5
    y_lo, y_hi = 0.0, max(ys) * 1.08
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (math.log10(x) - log_lo) / (log_hi - log_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_T + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333" stroke-width="1"/>',
    ]

    # Decade ticks on the log x axis.
    for exponent in range(math.floor(log_lo), math.ceil(log_hi) + 1):
        x = 10.0**exponent
        if not (log_lo - 1e-9 <= exponent <= log_hi + 1e-9):
            continue
        parts.append(
            f'<line x1="{_fmt(px(x))}" y1="{_MARGIN_T + plot_h}" '
            f'x2="{_fmt(px(x))}" y2="{_MARGIN_T + plot_h + 5}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_fmt(px(x))}" y="{_MARGIN_T + plot_h + 20}" '
            f'font-size="12" text-anchor="middle">{x:g}</text>'
        )
    # Five linear ticks on y.
    for k in range(5):
        y = y_lo + (y_hi - y_lo) * k / 4
        parts.append(
            f'<line x1="{_MARGIN_L - 5}" y1="{_fmt(py(y))}" '
            f'x2="{_MARGIN_L}" y2="{_fmt(py(y))}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 9}" y="{_fmt(py(y) + 4)}" '
            f'font-size="12" text-anchor="end">{y:.3g}</text>'
        )

    channels = sorted({key[0] for key in groups})
    unit = _CHANNEL_UNITS[channels[0]] if len(channels) == 1 else "channel units"
    x_label = f"sigma ({unit})"
    y_label = "RMSE position (m)" if metric == "pos" else "RMSE velocity (m/s)"
    parts.append(
        f'<text x="{_MARGIN_L + plot_w / 2}" y="{_HEIGHT - 12}" '
        f'font-size="13" text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="16" y="{_MARGIN_T + plot_h / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {_MARGIN_T + plot_h / 2})">{y_label}</text>'
    )

    ordered = sorted(groups.items(), key=lambda kv: kv[0])
    for idx, (key, pts) in enumerate(ordered):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = sorted(pts)
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
    if len(ordered) > 1:
        lx, ly = _MARGIN_L + 12, _MARGIN_T + 14
        for idx, (key, _) in enumerate(ordered):
            color = _PALETTE[idx % len(_PALETTE)]
            y = ly + idx * 18
            parts.append(
                f'<line x1="{lx}" y1="{y - 4}" x2="{lx + 24}" y2="{y - 4}" '
                f'stroke="{color}" stroke-width="2"/>'
            )
            parts.append(
                f'<text x="{lx + 30}" y="{y}" font-size="12">{_group_label(key)}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plot_csv(csv_path: str | Path, out_path: str | Path, metric: str = "pos") -> None:
    rows = read_sweep_csv(csv_path)
    svg = render_sweep_svg(rows, metric)
    Path(out_path).write_text(svg, encoding="utf-8")
