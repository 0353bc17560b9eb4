"""CSV ingestion, the built-in coal-seam dataset, and report/surface serialization."""

from __future__ import annotations

import io as _io
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Any, Dict, Optional, Tuple, Union

import numpy as np

from .core import EmptyInput, EstimateReport, InputError, SampleSet, validate_samples

SAMPLE_HEADER = ("east", "north", "thick")
SURFACE_HEADER = "east,north,objective,mean"


class MissingHeader(InputError):
    def __init__(self, found: str):
        super().__init__(f"expected header 'east,north,thick', found {found!r}")


class BadFieldCount(InputError):
    def __init__(self, line: int, count: int):
        self.line = line
        super().__init__(f"line {line}: expected 3 fields, found {count}")


class UnparsableNumber(InputError):
    def __init__(self, line: int, column: int, text: str):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: cannot parse {text!r} as a number")


# Coal seam thickness survey: 25 rows of three (east, north, thick) triples,
# flattened row by row, left triple first.
_TABLE1 = (
    (0.7, 59.6, 34.1), (2.1, 82.7, 42.2), (4.7, 75.1, 39.5),
    (4.8, 52.8, 34.3), (5.9, 67.1, 37.0), (6.0, 35.7, 35.9),
    (6.4, 33.7, 36.4), (7.0, 46.7, 34.6), (8.2, 40.1, 35.4),
    (13.3, 0.6, 44.7), (13.3, 68.2, 37.8), (13.4, 31.3, 37.8),
    (17.8, 6.9, 43.9), (20.1, 66.3, 37.7), (22.7, 87.6, 42.8),
    (23.0, 93.9, 43.6), (24.3, 73.0, 39.3), (24.8, 15.1, 42.3),
    (24.8, 26.3, 39.7), (26.4, 58.0, 36.9), (26.9, 65.0, 37.8),
    (27.7, 83.3, 41.8), (27.9, 90.8, 43.3), (29.1, 47.9, 36.7),
    (29.5, 89.4, 43.0), (30.1, 6.1, 43.6), (30.8, 12.1, 42.8),
    (32.7, 40.2, 37.5), (34.8, 8.1, 43.3), (35.3, 32.0, 38.8),
    (37.0, 70.3, 39.2), (38.2, 77.9, 40.7), (38.9, 23.3, 40.5),
    (39.4, 82.5, 41.4), (43.0, 4.7, 43.3), (43.7, 7.6, 43.1),
    (46.4, 84.1, 41.5), (46.7, 10.6, 42.6), (49.9, 22.1, 40.7),
    (51.0, 88.8, 42.0), (52.8, 68.9, 39.3), (52.9, 32.7, 39.2),
    (55.5, 92.9, 42.2), (56.0, 1.6, 42.7), (60.6, 75.2, 40.1),
    (62.1, 26.6, 40.1), (63.0, 12.7, 41.8), (69.0, 75.6, 40.1),
    (70.5, 83.7, 40.9), (70.9, 11.0, 41.7), (71.5, 29.5, 39.8),
    (78.1, 45.5, 38.7), (78.2, 9.1, 41.7), (78.4, 20.0, 40.8),
    (80.5, 55.9, 38.7), (81.1, 51.0, 38.6), (83.8, 7.9, 41.6),
    (84.5, 11.0, 41.5), (85.2, 67.3, 39.4), (85.5, 73.0, 39.8),
    (86.7, 70.4, 39.6), (87.2, 55.7, 38.8), (88.1, 0.0, 41.6),
    (88.4, 12.1, 41.3), (88.4, 99.6, 41.2), (88.8, 82.9, 40.5),
    (88.9, 6.2, 41.5), (90.6, 7.0, 41.5), (90.7, 49.6, 38.9),
    (91.5, 55.4, 39.0), (92.9, 46.8, 39.1), (93.4, 70.9, 39.7),
    (94.8, 71.5, 39.7), (96.2, 84.3, 40.3), (98.2, 58.2, 39.5),
)


def builtin_table1() -> SampleSet:
    """The 75-point coal seam thickness dataset in canonical order."""
    return validate_samples(_TABLE1)


def table1_csv_path():
    """Traversable for the shipped CSV copy of the built-in dataset."""
    return resources.files(__package__).joinpath("data", "table1.csv")


def _as_text(source: Union[bytes, str, IO]) -> str:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, str):
        return source
    else:
        data = source.read()
        if isinstance(data, str):
            return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise InputError(f"input is not valid UTF-8: {exc}") from None


def read_samples_csv(source: Union[bytes, str, IO]) -> SampleSet:
    """Parse ``east,north,thick`` CSV text into a validated :class:`SampleSet`.

    ``source`` is a binary or text stream, or the raw bytes/str. Both
    ``\\n`` and ``\\r\\n`` line endings are accepted; blank lines are skipped.
    """
    lines = _as_text(source).splitlines()
    if not lines:
        raise MissingHeader("")
    header = tuple(f.strip().lower() for f in lines[0].split(","))
    if header != SAMPLE_HEADER:
        raise MissingHeader(lines[0])
    points = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 3:
            raise BadFieldCount(lineno, len(fields))
        row = []
        for col, text in enumerate(fields, start=1):
            try:
                row.append(float(text))
            except ValueError:
                raise UnparsableNumber(lineno, col, text.strip()) from None
        points.append(row)
    if not points:
        raise EmptyInput("dataset (header only)")
    return validate_samples(points)


def read_samples_path(path) -> SampleSet:
    with open(path, "rb") as fh:
        return read_samples_csv(fh)


def _display(x: Optional[float]) -> Optional[str]:
    return None if x is None else f"{x:.1f}"


def _num(x: Any) -> Optional[float]:
    return None if x is None else float(x)


@dataclass
class ReportDocument:
    """Serializable mirror of an :class:`EstimateReport` plus run metadata."""

    kind: str
    node: Optional[Tuple[float, float]]
    mean: float
    variance: float
    mse: Optional[float]
    mu: Optional[float]
    objective: Optional[float]
    negative_variance: bool
    weights: Optional[Tuple[float, ...]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_report(cls, report: EstimateReport, metadata=None, include_weights: bool = False) -> "ReportDocument":
        return cls(
            kind=report.kind,
            node=None if report.node is None else (float(report.node[0]), float(report.node[1])),
            mean=float(report.mean),
            variance=float(report.variance),
            mse=_num(report.mse),
            mu=_num(report.mu),
            objective=_num(report.objective),
            negative_variance=bool(report.negative_variance),
            weights=tuple(float(x) for x in report.weights) if include_weights else None,
            metadata=dict(metadata or {}),
        )

    def to_dict(self) -> Dict[str, Any]:
        d = {
            "kind": self.kind,
            "node": None if self.node is None else {"east": self.node[0], "north": self.node[1]},
            "mean": self.mean,
            "variance": self.variance,
            "mse": self.mse,
            "mu": self.mu,
            "objective": self.objective,
            "negative_variance": self.negative_variance,
        }
        if self.weights is not None:
            d["weights"] = list(self.weights)
        d["display"] = {
            "node": None if self.node is None else {"east": _display(self.node[0]), "north": _display(self.node[1])},
            "mean": _display(self.mean),
            "variance": _display(self.variance),
            "mse": _display(self.mse),
        }
        d["metadata"] = self.metadata
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "ReportDocument":
        node = d.get("node")
        weights = d.get("weights")
        return cls(
            kind=d["kind"],
            node=None if node is None else (float(node["east"]), float(node["north"])),
            mean=float(d["mean"]),
            variance=float(d["variance"]),
            mse=_num(d.get("mse")),
            mu=_num(d.get("mu")),
            objective=_num(d.get("objective")),
            negative_variance=bool(d["negative_variance"]),
            weights=None if weights is None else tuple(float(x) for x in weights),
            metadata=dict(d.get("metadata") or {}),
        )


def write_report(report: EstimateReport, metadata=None, include_weights: bool = False) -> bytes:
    """Serialize a report as an indented JSON document (UTF-8 bytes).

    Numbers are written at full ``repr`` precision; the ``display`` block
    repeats mean, variance, MSE and the node rounded to one decimal.
    """
    doc = ReportDocument.from_report(report, metadata, include_weights)
    return (json.dumps(doc.to_dict(), indent=2, allow_nan=True) + "\n").encode("utf-8")


def parse_report(data: Union[bytes, str, IO]) -> ReportDocument:
    try:
        return ReportDocument.from_dict(json.loads(_as_text(data)))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed report document: {exc}") from None


def write_surface_csv(surface, out: Optional[IO[bytes]] = None) -> Optional[bytes]:
    """Write ``east,north,objective,mean`` records in the surface's order.

    Returns the bytes when ``out`` is None, otherwise streams into ``out``.
    """
    sink = _io.BytesIO() if out is None else out
    sink.write((SURFACE_HEADER + "\n").encode("ascii"))
    if len(surface):
        table = np.column_stack([surface.east, surface.north, surface.objective, surface.mean])
        np.savetxt(sink, table, fmt="%.17g", delimiter=",")
    if out is None:
        return sink.getvalue()
    return None


def read_surface_csv(source: Union[bytes, str, IO]):
    """Inverse of :func:`write_surface_csv`; returns a :class:`~minekrige.search.Surface`."""
    from .search import Surface

    lines = _as_text(source).splitlines()
    if not lines or lines[0].strip() != SURFACE_HEADER:
        raise InputError(f"expected header {SURFACE_HEADER!r}")
    rows = [ln for ln in lines[1:] if ln.strip()]
    if not rows:
        empty = np.empty(0)
        return Surface(empty, empty.copy(), empty.copy(), empty.copy())
    table = np.loadtxt(rows, delimiter=",", ndmin=2)
    if table.shape[1] != 4:
        raise InputError("surface records must have 4 fields")
    return Surface(*(np.ascontiguousarray(table[:, k]) for k in range(4)))


def surface_from_points(points):
    """Pack a sequence of :class:`~minekrige.search.SurfacePoint` into a ``Surface``."""
    from .search import Surface

    cols = np.array([(p.east, p.north, p.objective, p.mean) for p in points], dtype=float).reshape(-1, 4)
    return Surface(*(np.ascontiguousarray(cols[:, k]) for k in range(4)))
