"""Result tables: deflection versus delta, and versus branch index m.

Tables render to plain text laid out like a printed table, or to CSV/JSON
with full binary64 precision.  Every renderer is deterministic.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .deflection import DeflectionResult, branch_sweep, deflection_closed_form
from .errors import DomainError
from .model import ModelParams, derive

__all__ = [
    "Observation",
    "OBSERVATION",
    "TableKind",
    "Row",
    "SweepTable",
    "PUBLISHED_TABLE1",
    "PUBLISHED_TABLE2",
    "CSV_HEADER",
    "compare_observation",
    "delta_label",
    "table1",
    "table2",
    "sweep_m",
    "render",
    "parse_json",
]


@dataclass(frozen=True)
class Observation:
    value: float  # arcsec
    uncertainty: float  # arcsec

    def __post_init__(self) -> None:
        if not self.uncertainty > 0.0:
            raise DomainError(f"uncertainty must be > 0, got {self.uncertainty!r}")


# Solar-limb light deflection as quoted from K. R. Lang, Astrophysical
# Formulae (Springer, 1974); no epoch or method given there.
OBSERVATION = Observation(1.775, 0.019)

# Published deflections at m = 1, keyed by delta / R_sun (arcsec).
PUBLISHED_TABLE1 = {1.0: 1.563, 1.3: 1.769, 2.0: 2.250}

# Published deflections at delta = 1.3 R_sun, keyed by m (arcsec).
_A = 1e6
PUBLISHED_TABLE2 = {
    -7: -10.0 * _A, -6: -9.0 * _A, -5: -7.8 * _A, -4: -6.5 * _A, -3: -5.2 * _A,
    -2: -3.9 * _A, -1: -2.6 * _A, 0: -1.3 * _A, 1: 1.769,
    2: 1.3 * _A, 3: 2.6 * _A, 4: 3.9 * _A, 5: 5.2 * _A, 6: 6.5 * _A,
    7: 7.8 * _A, 8: 9.0 * _A, 9: 10.0 * _A,
}
PUBLISHED_TABLE2_DELTA = 1.3

CSV_HEADER = (
    "label",
    "delta_theta_arcsec",
    "within_observation",
    "paper_value_arcsec",
    "abs_difference_arcsec",
)


class TableKind(str, enum.Enum):
    DELTA_SWEEP = "delta_sweep"
    M_SWEEP = "m_sweep"


@dataclass(frozen=True)
class Row:
    label: str
    delta_theta_arcsec: float
    within_observation: Optional[bool] = None
    paper_value: Optional[float] = None
    abs_difference: Optional[float] = None


@dataclass(frozen=True)
class SweepTable:
    kind: TableKind
    rows: tuple[Row, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", TableKind(self.kind))
        object.__setattr__(self, "rows", tuple(self.rows))
        if not self.rows:
            raise DomainError("a table needs at least one row")
        labels = [row.label for row in self.rows]
        if len(set(labels)) != len(labels):
            raise DomainError(f"row labels must be unique: {labels}")


def compare_observation(result: DeflectionResult, obs: Observation = OBSERVATION):
    """Return ``(within, offset_sigma)`` for a result against an observation."""
    offset = result.delta_theta_arcsec - obs.value
    return abs(offset) <= obs.uncertainty, offset / obs.uncertainty


def _lookup(table: dict, key: float) -> Optional[float]:
    for k, v in table.items():
        if math.isclose(k, key, rel_tol=1e-12, abs_tol=1e-12):
            return v
    return None


def _annotated(label, value, within, published):
    diff = None if published is None else abs(value - published)
    return Row(label, value, within, published, diff)


def delta_label(multiple: float) -> str:
    return f"{multiple:g}R"


def table1(
    params_base: ModelParams,
    delta_multiples: Sequence[float] = (1.0, 1.3, 2.0),
    observation: Observation = OBSERVATION,
) -> SweepTable:
    """Deflection at ``m = 1`` for several ``delta`` given in solar radii."""
    rows = []
    r_sun = params_base.constants.r_sun
    for mult in delta_multiples:
        if not mult >= 0.0:
            raise DomainError(f"delta multiple must be >= 0, got {mult!r}")
        params = dataclasses.replace(params_base, delta=mult * r_sun)
        result = deflection_closed_form(derive(params), 1)
        within, _ = compare_observation(result, observation)
        rows.append(
            _annotated(delta_label(mult), result.delta_theta_arcsec, within,
                        _lookup(PUBLISHED_TABLE1, mult))
        )
    return SweepTable(TableKind.DELTA_SWEEP, tuple(rows))


def sweep_m(params: ModelParams, m_range: tuple[int, int] = (-7, 9)) -> SweepTable:
    """Closed-form deflection for each branch in the inclusive ``m_range``."""
    results = branch_sweep(derive(params), *m_range)
    rows = [Row(f"m={r.branch_m}", r.delta_theta_arcsec) for r in results]
    return SweepTable(TableKind.M_SWEEP, tuple(rows))


def table2(params: ModelParams, m_range: tuple[int, int] = (-7, 9)) -> SweepTable:
    """Branch sweep, annotated with the published values when delta = 1.3 R."""
    results = branch_sweep(derive(params), *m_range)
    annotate = math.isclose(params.delta_multiple, PUBLISHED_TABLE2_DELTA, rel_tol=1e-12)
    rows = []
    for r in results:
        published = PUBLISHED_TABLE2.get(r.branch_m) if annotate else None
        rows.append(_annotated(f"m={r.branch_m}", r.delta_theta_arcsec, None, published))
    return SweepTable(TableKind.M_SWEEP, tuple(rows))


# --- rendering ---------------------------------------------------------------


def _num(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def _flag(x: Optional[bool]) -> str:
    return "" if x is None else ("true" if x else "false")


def _short(x: Optional[float]) -> str:
    """Four significant digits; ``a = 1e6`` arcsec shorthand for large values."""
    if x is None:
        return ""
    if abs(x) >= 1e5:
        return f"{x / _A:#.4g}a"
    return f"{x:#.4g}"


def _render_csv(table: SweepTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in table.rows:
        writer.writerow([
            row.label,
            _num(row.delta_theta_arcsec),
            _flag(row.within_observation),
            _num(row.paper_value),
            _num(row.abs_difference),
        ])
    return buf.getvalue()


def _table_dict(table: SweepTable) -> dict:
    return {
        "kind": table.kind.value,
        "rows": [
            {
                "label": row.label,
                "delta_theta_arcsec": row.delta_theta_arcsec,
                "within_observation": row.within_observation,
                "paper_value_arcsec": row.paper_value,
                "abs_difference_arcsec": row.abs_difference,
            }
            for row in table.rows
        ],
    }


def _grid(lines: Iterable[Sequence[str]]) -> str:
    lines = [list(line) for line in lines]
    widths = [max(len(line[i]) for line in lines) for i in range(len(lines[0]))]
    out = []
    for line in lines:
        out.append(" | ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
    return "\n".join(out)


def _render_text(table: SweepTable, band: int = 9) -> str:
    if table.kind is TableKind.DELTA_SWEEP:
        title = "Grazing-ray deflection versus delta (unit: arcsec, m = 1)"
        head = "delta"
    else:
        title = "Deflection by branch m (unit: arcsec, a = 1e6 arcsec)"
        head = "m"
    blocks = [title]
    rows = table.rows
    for start in range(0, len(rows), band):
        chunk = rows[start:start + band]
        labels = [r.label[2:] if head == "m" else r.label for r in chunk]
        lines = [[head, *labels], ["delta_theta", *(_short(r.delta_theta_arcsec) for r in chunk)]]
        if any(r.paper_value is not None for r in chunk):
            lines.append(["published", *(_short(r.paper_value) for r in chunk)])
            lines.append(["|difference|", *(
                "" if r.abs_difference is None else f"{r.abs_difference:.2g}" for r in chunk
            )])
        if any(r.within_observation is not None for r in chunk):
            lines.append(["within obs.", *(
                {True: "yes", False: "no", None: ""}[r.within_observation] for r in chunk
            )])
        blocks.append(_grid(lines))
    return "\n\n".join(blocks) + "\n"


def render(table: SweepTable, format: str = "text") -> bytes:
    """Serialise a table as UTF-8 ``text``, ``csv`` or ``json``."""
    if format == "text":
        out = _render_text(table)
    elif format == "csv":
        out = _render_csv(table)
    elif format == "json":
        out = json.dumps(_table_dict(table), indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {format!r}")
    return out.encode("utf-8")


def parse_json(data: bytes | str) -> SweepTable:
    """Inverse of ``render(table, "json")``."""
    obj = json.loads(data)
    rows = tuple(
        Row(
            label=r["label"],
            delta_theta_arcsec=float(r["delta_theta_arcsec"]),
            within_observation=r["within_observation"],
            paper_value=r["paper_value_arcsec"],
            abs_difference=r["abs_difference_arcsec"],
        )
        for r in obj["rows"]
    )
    return SweepTable(TableKind(obj["kind"]), rows)
