"""Deterministic table and report serialization.

CSV files carry the fully resolved configuration as leading '#' comment
lines, then a mandatory header row, then data rows with '.'-decimal numbers
at 15 significant digits.  Identical configuration must produce identical
bytes, so nothing here consults the clock, the locale, or dict iteration
order of unsorted inputs.
"""
from __future__ import annotations

import json
import sys
from typing import Iterable, Sequence

__all__ = [
    "fmt",
    "config_comment_lines",
    "render_csv",
    "write_text",
    "render_json",
    "SWEEP_COLUMNS",
    "BOUNDS_COLUMNS",
    "PROTOCOL_COLUMNS",
    "sweep_csv",
    "bounds_csv",
    "protocol_csv",
]

SWEEP_COLUMNS = (
    "T_C",
    "eta_c",
    "eta_s",
    "emp",
    "eta_gca",
    "eta_min",
    "eta_max",
    "t_hot_star",
    "t_cold_star",
    "k_hot",
    "k_cold",
    "q_hot",
    "q_cold",
    "power_star",
)
BOUNDS_COLUMNS = ("eta_c", "ratio", "eta_s", "eta_min", "eta_max")
PROTOCOL_COLUMNS = ("t", "p", "gap")


def fmt(value) -> str:
    """Render a number with 15 significant digits; strings pass through."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return format(float(value), ".15g")


def config_comment_lines(config: dict) -> list[str]:
    return [f"# {key} = {fmt(value)}" for key, value in config.items()]


def render_csv(
    header: Sequence[str],
    rows: Iterable[Sequence],
    config: dict | None = None,
    extra_comments: Sequence[str] = (),
) -> str:
    lines = []
    if config:
        lines.extend(config_comment_lines(config))
    lines.extend(extra_comments)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_text(text: str, output: str = "") -> None:
    """Write to the configured output path, or stdout when none is set."""
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def sweep_csv(rows, config: dict) -> str:
    """Sweep table; failed points are skipped (reported separately)."""
    data = []
    for row in rows:
        rep = row.report
        if rep is None:
            continue
        data.append(
            (
                row.t_cold,
                rep.eta_c,
                rep.eta_s,
                rep.emp,
                rep.bounds.eta_gca,
                rep.bounds.eta_min,
                rep.bounds.eta_max,
                rep.t_hot_star,
                rep.t_cold_star,
                rep.k_hot,
                rep.k_cold,
                rep.q_hot,
                rep.q_cold,
                rep.power_star,
            )
        )
    return render_csv(SWEEP_COLUMNS, data, config)


def bounds_csv(rows, config: dict) -> str:
    return render_csv(BOUNDS_COLUMNS, rows, config)


def protocol_csv(trace, config: dict) -> str:
    comments = [
        f"# jump_start: gap_nominal = {fmt(trace.jump_start[0])} "
        f"gap_plus = {fmt(trace.jump_start[1])}",
        f"# jump_end: gap_minus = {fmt(trace.jump_end[0])} "
        f"gap_nominal = {fmt(trace.jump_end[1])}",
    ]
    return render_csv(PROTOCOL_COLUMNS, trace.samples, config, comments)
