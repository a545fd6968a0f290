"""File formats: population CSV and summary-statistics JSON.

Population CSV: header ``phi,x``, one unit per row, phi in {0, 1}, x a
finite decimal.  Chosen for hand-editability and fixture diffing; floats
are written with repr so a round trip is bit-exact.

Summary JSON: a flat object with exactly the seven keys
``n, N, P, x_bar_pop, rho_pb, c_p, c_x``.  Unknown keys are rejected --
this catches typos in study configuration files.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .moments import DesignMoments
from .population import Population, PopulationSummary, PopulationUnit, fpc

__all__ = [
    "SummaryInput",
    "load_population_csv",
    "write_population_csv",
    "load_summary_json",
]

_SUMMARY_KEYS = ("n", "N", "P", "x_bar_pop", "rho_pb", "c_p", "c_x")


@dataclass(frozen=True)
class SummaryInput:
    """The seven study-level statistics driving the closed-form theory."""

    n: int
    N: int
    P: float
    x_bar_pop: float
    rho_pb: float
    c_p: float
    c_x: float

    def __post_init__(self):
        if self.n < 1 or self.n > self.N:
            raise ValidationError(f"need 1 <= n <= N, got n={self.n}, N={self.N}")
        if not 0.0 < self.P < 1.0:
            raise ValidationError(f"P must lie in (0, 1), got {self.P}")
        if self.x_bar_pop <= 0.0:
            raise ValidationError(f"x_bar_pop must be positive, got {self.x_bar_pop}")
        if abs(self.rho_pb) > 1.0:
            raise ValidationError(f"|rho_pb| must be <= 1, got {self.rho_pb}")
        if self.c_p <= 0.0:
            raise ValidationError(f"c_p must be positive, got {self.c_p}")
        if self.c_x <= 0.0:
            raise ValidationError(f"c_x must be positive, got {self.c_x}")

    def to_summary(self) -> PopulationSummary:
        return PopulationSummary.from_stats(
            p=self.P,
            x_bar_pop=self.x_bar_pop,
            rho_pb=self.rho_pb,
            c_p=self.c_p,
            c_x=self.c_x,
        )

    def to_design_moments(self) -> DesignMoments:
        return DesignMoments(f=fpc(self.n, self.N), summary=self.to_summary())


def load_population_csv(path) -> Population:
    """Read a ``phi,x`` CSV into a validated Population."""
    units = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            raise ParseError("empty file, expected 'phi,x' header", line=1)
        if [col.strip() for col in header] != ["phi", "x"]:
            raise ParseError(f"expected header 'phi,x', got {','.join(header)!r}", line=1)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", line=line_no)
            phi_text, x_text = row[0].strip(), row[1].strip()
            if phi_text not in ("0", "1"):
                raise ParseError(f"phi must be 0 or 1, got {phi_text!r}", line=line_no)
            try:
                x_val = float(x_text)
            except ValueError:
                raise ParseError(f"x must be a decimal, got {x_text!r}", line=line_no) from None
            if not math.isfinite(x_val):
                raise ParseError(f"x must be finite, got {x_text!r}", line=line_no)
            units.append(PopulationUnit(int(phi_text), x_val))
    return Population(tuple(units))


def write_population_csv(path, pop: Population) -> None:
    """Write a population as ``phi,x`` rows; floats via repr (round-trip exact)."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["phi", "x"])
        for unit in pop.units:
            writer.writerow([unit.phi, repr(unit.x)])


def load_summary_json(path) -> SummaryInput:
    """Read and validate a seven-field summary JSON file."""
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("summary file must contain a JSON object")
    unknown = sorted(set(data) - set(_SUMMARY_KEYS))
    if unknown:
        raise ValidationError(f"unknown summary keys: {', '.join(unknown)}")
    missing = [key for key in _SUMMARY_KEYS if key not in data]
    if missing:
        raise ValidationError(f"missing summary keys: {', '.join(missing)}")
    for key in _SUMMARY_KEYS:
        if not isinstance(data[key], (int, float)) or isinstance(data[key], bool):
            raise ValidationError(f"summary key {key!r} must be a number")
    for key in ("n", "N"):
        if data[key] != int(data[key]):
            raise ValidationError(f"summary key {key!r} must be an integer")
    return SummaryInput(
        n=int(data["n"]),
        N=int(data["N"]),
        P=float(data["P"]),
        x_bar_pop=float(data["x_bar_pop"]),
        rho_pb=float(data["rho_pb"]),
        c_p=float(data["c_p"]),
        c_x=float(data["c_x"]),
    )
