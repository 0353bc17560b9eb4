import io
import json

import numpy as np
import pytest

from minekrige import EmptyInput, builtin_table1, estimate_at, estimate_gls, read_samples_csv, write_report
from minekrige.io import (
    BadFieldCount,
    MissingHeader,
    UnparsableNumber,
    parse_report,
    read_surface_csv,
    surface_from_points,
    table1_csv_path,
    write_surface_csv,
)
from minekrige.search import Surface, SurfacePoint


class TestReadSamples:
    def test_shipped_fixture_matches_builtin(self):
        from_file = read_samples_csv(table1_csv_path().read_bytes())
        assert from_file == builtin_table1()

    def test_builtin_layout(self):
        t = builtin_table1()
        assert t.n == 75
        assert (t.points[3].east, t.points[3].north, t.points[3].value) == (4.8, 52.8, 34.3)
        assert (t.points[-1].east, t.points[-1].north, t.points[-1].value) == (98.2, 58.2, 39.5)

    def test_binary_stream(self):
        s = read_samples_csv(io.BytesIO(b"east,north,thick\n0.7,59.6,34.1\n2.1,82.7,42.2\n"))
        assert s.n == 2
        assert s.points[0].value == 34.1

    def test_crlf_and_trailing_newline(self):
        a = read_samples_csv(b"east,north,thick\r\n1,2,3\r\n4,5,6\r\n")
        b = read_samples_csv(b"east,north,thick\n1,2,3\n4,5,6")
        assert a == b

    def test_header_only(self):
        with pytest.raises(EmptyInput):
            read_samples_csv(b"east,north,thick\n")

    def test_missing_header(self):
        with pytest.raises(MissingHeader):
            read_samples_csv(b"1.0,2.0,3.0\n")

    def test_empty_file(self):
        with pytest.raises(MissingHeader):
            read_samples_csv(b"")

    def test_unparsable(self):
        with pytest.raises(UnparsableNumber) as exc:
            read_samples_csv(b"east,north,thick\n1.0,2.0,abc\n")
        assert (exc.value.line, exc.value.column) == (2, 3)

    def test_field_count(self):
        with pytest.raises(BadFieldCount) as exc:
            read_samples_csv(b"east,north,thick\n1,2,3\n1,2\n")
        assert exc.value.line == 3


class TestReport:
    def test_reference_display_block(self, table1, model):
        rep = estimate_at(table1, model, (-21.8, 42.6))
        doc = parse_report(write_report(rep, {"source": "test"}))
        display = json.loads(write_report(rep))["display"]
        assert (display["mean"], display["variance"], display["mse"]) == ("38.9", "16.1", "1.8")
        assert display["node"] == {"east": "-21.8", "north": "42.6"}
        assert doc.mean == rep.mean and doc.mse == rep.mse and doc.node == rep.node

    def test_negative_variance_flag(self):
        from minekrige import EstimateReport

        rep = EstimateReport(None, 1.0, -0.5, None, None, None, np.array([2.0, -1.0]))
        text = write_report(rep).decode()
        assert '"negative_variance": true' in text

    def test_round_trip(self, table1, model):
        for rep in (estimate_at(table1, model, (3.3, -7.1)), estimate_gls(table1, model)):
            data = write_report(rep, {"grid": {"east": "-50:50:0.1"}, "wall_time_s": 0.25}, include_weights=True)
            doc = parse_report(data)
            again = parse_report(write_report_doc(doc))
            assert again == doc
            assert doc.weights == tuple(rep.weights.tolist())
            assert doc.variance == rep.variance

    def test_weights_optional(self, table1, model):
        rep = estimate_gls(table1, model)
        assert parse_report(write_report(rep)).weights is None


def write_report_doc(doc):
    return json.dumps(doc.to_dict()).encode()


class TestSurfaceCsv:
    def _surface(self):
        pts = [SurfacePoint(e, n, abs(e * n) / 7.0, 40.0 + e / 3.0) for n in (-1.0, 0.0, 1.0) for e in (-0.1, 0.0, 0.1)]
        return surface_from_points(pts)

    def test_three_by_three(self):
        data = write_surface_csv(self._surface())
        lines = data.decode().splitlines()
        assert lines[0] == "east,north,objective,mean"
        assert len(lines) == 10

    def test_empty(self):
        empty = Surface(np.empty(0), np.empty(0), np.empty(0), np.empty(0))
        assert write_surface_csv(empty) == b"east,north,objective,mean\n"
        assert len(read_surface_csv(write_surface_csv(empty))) == 0

    def test_round_trip(self):
        s = self._surface()
        back = read_surface_csv(write_surface_csv(s))
        for name in ("east", "north", "objective", "mean"):
            assert np.abs(getattr(back, name) - getattr(s, name)).max() <= 1e-12

    def test_stream_sink(self):
        buf = io.BytesIO()
        assert write_surface_csv(self._surface(), buf) is None
        assert buf.getvalue() == write_surface_csv(self._surface())
