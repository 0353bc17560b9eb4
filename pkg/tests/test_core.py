import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minekrige import (
    DEFAULT_GRID,
    CorrelogramModel,
    DuplicateLocation,
    EmptyGrid,
    EmptyInput,
    GridSpec,
    InputError,
    NonFiniteField,
    SamplePoint,
    validate_samples,
)

coord = st.floats(-1e4, 1e4, allow_nan=False)


class TestValidateSamples:
    def test_table1(self, table1):
        assert table1.n == 75
        assert table1.points[0] == SamplePoint(0.7, 59.6, 34.1)
        assert table1.points[1] == SamplePoint(2.1, 82.7, 42.2)
        assert table1.points[2] == SamplePoint(4.7, 75.1, 39.5)

    def test_table1_value_range(self, table1):
        # 33.7 appears in the table as a north coordinate, not a thickness
        assert table1.values.min() == 34.1
        assert table1.values.max() == 44.7

    def test_empty(self):
        with pytest.raises(EmptyInput):
            validate_samples([])

    def test_duplicate_reports_indices(self):
        with pytest.raises(DuplicateLocation) as exc:
            validate_samples([(1.0, 2.0, 3.0), (1.0, 2.0, 4.0)])
        assert (exc.value.first, exc.value.second) == (0, 1)

    def test_near_duplicate_allowed(self):
        s = validate_samples([(1.0, 2.0, 3.0), (1.0 + 1e-12, 2.0, 4.0)])
        assert s.n == 2

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite(self, bad):
        with pytest.raises(NonFiniteField) as exc:
            validate_samples([(0.0, 0.0, 1.0), (1.0, bad, 1.0)])
        assert exc.value.row == 1

    def test_arrays_read_only(self, table1):
        with pytest.raises(ValueError):
            table1.values[0] = 0.0

    @given(st.lists(st.tuples(coord, coord, coord), min_size=1, max_size=20, unique_by=lambda p: (p[0], p[1])))
    def test_idempotent(self, pts):
        once = validate_samples(pts)
        assert validate_samples(once) == once
        assert validate_samples(once.points) == once


class TestCorrelogramModel:
    def test_defaults(self):
        m = CorrelogramModel()
        assert (m.family, m.sill, m.practical_range, m.shape_exponent) == ("gaussian", 1.0, 30.0, 2.0)

    @pytest.mark.parametrize("kw", [{"sill": 0}, {"practical_range": -1}, {"shape_exponent": 0}, {"family": "cubic"}])
    def test_rejects(self, kw):
        with pytest.raises(InputError):
            CorrelogramModel(**kw)


class TestGridSpec:
    def test_reference_grid(self):
        assert (DEFAULT_GRID.n_east, DEFAULT_GRID.n_north) == (1001, 1001)
        assert DEFAULT_GRID.size == 1_002_001
        e, n = DEFAULT_GRID.node(282, 926)
        assert f"{e:.1f}" == "-21.8" and f"{n:.1f}" == "42.6"
        assert abs(e + 21.8) < 1e-12 and abs(n - 42.6) < 1e-12

    def test_nodes_use_index_arithmetic(self):
        nodes = DEFAULT_GRID.east_nodes()
        assert nodes[0] == -50.0 and nodes[-1] == 50.0
        assert nodes[282] == -50.0 + 282 * 0.1

    def test_from_strings(self):
        g = GridSpec.from_strings("-50:50:10", "0:0:1")
        assert (g.n_east, g.n_north) == (11, 1)

    def test_partial_last_step(self):
        assert GridSpec(0, 1, 0.3, 0, 0, 1).n_east == 4

    @pytest.mark.parametrize("text", ["1:2", "a:b:c", "0:1:0", "0:1:-1"])
    def test_bad_strings(self, text):
        with pytest.raises(InputError):
            GridSpec.from_strings(text, "0:1:1")

    def test_min_above_max(self):
        with pytest.raises(EmptyGrid):
            GridSpec(1, 0, 1, 0, 0, 1)
