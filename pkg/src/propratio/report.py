"""Plain-text report tables in Markdown and CSV.

Rows are sequences of Python values; Markdown rendering applies
per-column printf formats (PRE columns use 3 decimals to match the
reference figures), CSV rendering writes raw values at full precision
for machine consumption.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

__all__ = ["ReportTable", "PRE_FORMAT", "VALUE_FORMAT"]

PRE_FORMAT = "{:.3f}"
VALUE_FORMAT = "{:.6g}"


def _format_cell(value, fmt: str) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return fmt.format(value)
    return str(value)


@dataclass
class ReportTable:
    """A header row plus value rows, with optional per-column formats."""

    headers: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    formats: dict[str, str] = field(default_factory=dict)

    def add_row(self, *values) -> None:
        if len(values) != len(self.headers):
            raise ValueError(
                f"row has {len(values)} cells, table has {len(self.headers)} columns"
            )
        self.rows.append(tuple(values))

    def to_markdown(self) -> str:
        rendered = [
            [
                _format_cell(value, self.formats.get(header, VALUE_FORMAT))
                for header, value in zip(self.headers, row)
            ]
            for row in self.rows
        ]
        widths = [
            max(len(header), *(len(r[i]) for r in rendered)) if rendered else len(header)
            for i, header in enumerate(self.headers)
        ]
        def line(cells):
            return "| " + " | ".join(cell.ljust(w) for cell, w in zip(cells, widths)) + " |"

        out = [line(self.headers), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
        out.extend(line(cells) for cells in rendered)
        return "\n".join(out)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.headers)
        for row in self.rows:
            writer.writerow(["" if v is None else v for v in row])
        return buffer.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "md":
            return self.to_markdown()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown report format {fmt!r}")
