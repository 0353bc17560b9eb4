"""Domain types and input validation shared across the package."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np


class KrigeError(Exception):
    """Base class for all package errors."""


class InputError(KrigeError, ValueError):
    """Invalid user input (bad file, bad samples, bad parameters)."""


class EmptyInput(InputError):
    def __init__(self, what: str = "sample set"):
        super().__init__(f"empty {what}")


class DuplicateLocation(InputError):
    def __init__(self, first: int, second: int):
        self.first = first
        self.second = second
        super().__init__(f"samples {first} and {second} share the same location")


class NonFiniteField(InputError):
    def __init__(self, row: int, name: str):
        self.row = row
        self.name = name
        super().__init__(f"sample {row}: field {name!r} is not finite")


class LengthMismatch(InputError):
    def __init__(self, a: int, b: int):
        super().__init__(f"length mismatch: {a} != {b}")


class NegativeDistance(InputError):
    pass


class EmptyGrid(InputError):
    pass


class SingularMatrix(KrigeError, np.linalg.LinAlgError):
    """Factorization hit a zero or sub-tolerance pivot."""

    def __init__(self, index: int, pivot: float = 0.0):
        self.index = index
        self.pivot = pivot
        super().__init__(f"matrix is singular to working precision at pivot {index} (|u|={pivot:.3g})")


@dataclass(frozen=True)
class SamplePoint:
    east: float
    north: float
    value: float


@dataclass(frozen=True)
class SampleSet:
    """Ordered, validated collection of sample points.

    Build through :func:`validate_samples`; the numpy views below are
    read-only and cached.
    """

    points: Tuple[SamplePoint, ...]

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def _column(self, name: str) -> np.ndarray:
        arr = np.array([getattr(p, name) for p in self.points], dtype=float)
        arr.flags.writeable = False
        return arr

    @cached_property
    def east(self) -> np.ndarray:
        return self._column("east")

    @cached_property
    def north(self) -> np.ndarray:
        return self._column("north")

    @cached_property
    def values(self) -> np.ndarray:
        return self._column("value")

    def permuted(self, order: Sequence[int]) -> "SampleSet":
        return validate_samples([self.points[i] for i in order])


def validate_samples(points: Iterable) -> SampleSet:
    """Check a sequence of observations and freeze it into a :class:`SampleSet`.

    Accepts :class:`SamplePoint` instances or ``(east, north, value)``
    triples. Order is preserved. Duplicate locations are detected by exact
    coordinate equality only.
    """
    if isinstance(points, SampleSet):
        points = points.points
    out = []
    seen = {}
    for i, p in enumerate(points):
        if not isinstance(p, SamplePoint):
            east, north, value = p
            p = SamplePoint(float(east), float(north), float(value))
        for name in ("east", "north", "value"):
            if not math.isfinite(getattr(p, name)):
                raise NonFiniteField(i, name)
        key = (p.east, p.north)
        if key in seen:
            raise DuplicateLocation(seen[key], i)
        seen[key] = i
        out.append(p)
    if not out:
        raise EmptyInput()
    return SampleSet(tuple(out))


@dataclass(frozen=True)
class CorrelogramModel:
    """Stationary isotropic correlogram ``sill * exp(-3 (h / range) ** shape)``."""

    family: str = "gaussian"
    sill: float = 1.0
    practical_range: float = 30.0
    shape_exponent: float = 2.0

    def __post_init__(self):
        if self.family != "gaussian":
            raise InputError(f"unsupported correlogram family {self.family!r}")
        for name in ("sill", "practical_range", "shape_exponent"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise InputError(f"correlogram {name} must be finite and > 0, got {val!r}")


def _parse_axis(text: str, axis: str) -> Tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"grid {axis} must be 'min:max:step', got {text!r}")
    try:
        lo, hi, step = (float(x) for x in parts)
    except ValueError:
        raise InputError(f"grid {axis} must be 'min:max:step', got {text!r}") from None
    return lo, hi, step


@dataclass(frozen=True)
class GridSpec:
    """Rectangular search grid. Nodes are ``min + k * step``, never accumulated."""

    east_min: float
    east_max: float
    east_step: float
    north_min: float
    north_max: float
    north_step: float

    def __post_init__(self):
        for name in ("east_min", "east_max", "east_step", "north_min", "north_max", "north_step"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for axis in ("east", "north"):
            lo = getattr(self, f"{axis}_min")
            hi = getattr(self, f"{axis}_max")
            step = getattr(self, f"{axis}_step")
            if not all(math.isfinite(v) for v in (lo, hi, step)):
                raise InputError(f"grid {axis} bounds must be finite")
            if step <= 0:
                raise InputError(f"grid {axis} step must be > 0")
            if lo > hi:
                raise EmptyGrid(f"grid {axis}: min {lo} > max {hi}")

    @classmethod
    def from_strings(cls, east: str, north: str) -> "GridSpec":
        return cls(*_parse_axis(east, "east"), *_parse_axis(north, "north"))

    @staticmethod
    def _count(lo: float, hi: float, step: float) -> int:
        # relative slack absorbs (max - min) / step landing just under an integer
        q = (hi - lo) / step
        return int(math.floor(q + 1e-9 * max(1.0, q))) + 1

    @property
    def n_east(self) -> int:
        return self._count(self.east_min, self.east_max, self.east_step)

    @property
    def n_north(self) -> int:
        return self._count(self.north_min, self.north_max, self.north_step)

    @property
    def size(self) -> int:
        return self.n_east * self.n_north

    def east_nodes(self) -> np.ndarray:
        return self.east_min + np.arange(self.n_east) * self.east_step

    def north_nodes(self) -> np.ndarray:
        return self.north_min + np.arange(self.n_north) * self.north_step

    def node(self, i_east: int, i_north: int) -> Tuple[float, float]:
        return (self.east_min + i_east * self.east_step, self.north_min + i_north * self.north_step)

    def as_strings(self) -> Tuple[str, str]:
        return (
            f"{self.east_min!r}:{self.east_max!r}:{self.east_step!r}",
            f"{self.north_min!r}:{self.north_max!r}:{self.north_step!r}",
        )


DEFAULT_GRID = GridSpec(-50.0, 50.0, 0.1, -50.0, 50.0, 0.1)


@dataclass(frozen=True, eq=False)
class KrigingSolution:
    weights: np.ndarray
    mu: float
    objective: float
    target: Optional[Tuple[float, float]] = None


@dataclass(frozen=True, eq=False)
class EstimateReport:
    """Estimates for one target node, or for the GLS weights when ``node`` is None.

    ``mse`` and ``objective`` are None for the GLS variant; there is no
    target correlation vector to evaluate them with.
    """

    node: Optional[Tuple[float, float]]
    mean: float
    variance: float
    mse: Optional[float]
    mu: Optional[float]
    objective: Optional[float]
    weights: np.ndarray = field(repr=False)
    negative_variance: bool = field(init=False)

    def __post_init__(self):
        # never clamped; the sign itself is part of the result
        object.__setattr__(self, "negative_variance", bool(self.variance < 0))

    @property
    def kind(self) -> str:
        return "gls" if self.node is None else "kriging"
