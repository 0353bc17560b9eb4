import json
import math

import pytest

from minekrige import CorrelogramModel, builtin_table1, estimate_gls
from minekrige.cli import main


def run(capsysbinary, *argv):
    code = main(list(argv))
    out, err = capsysbinary.readouterr()
    return code, out, err.decode()


def report(out):
    return json.loads(out)


def strip_wall_time(doc):
    doc["metadata"].pop("wall_time_s", None)
    return doc


@pytest.fixture
def csv_file(tmp_path):
    def make(rows):
        p = tmp_path / "samples.csv"
        p.write_text("east,north,thick\n" + "".join(f"{e},{n},{v}\n" for e, n, v in rows))
        return str(p)

    return make


class TestEstimate:
    def test_reference_defaults(self, capsysbinary):
        code, out, _ = run(capsysbinary, "estimate", "--builtin-table1")
        assert code == 0
        doc = report(out)
        assert doc["display"]["node"] == {"east": "-21.8", "north": "42.6"}
        assert abs(doc["mean"] - 38.9) <= 0.05
        assert doc["metadata"]["grid"]["nodes"] == 1_002_001

    def test_two_inputs_is_usage_error(self, capsysbinary, csv_file):
        path = csv_file([(0, 0, 1)])
        code, _, err = run(capsysbinary, "estimate", path, "--builtin-table1")
        assert code == 2
        assert "exactly one" in err

    def test_no_input_is_usage_error(self, capsysbinary):
        assert run(capsysbinary, "estimate")[0] == 2

    def test_single_node_grid(self, capsysbinary):
        code, out, _ = run(capsysbinary, "estimate", "--grid-east", "0:0:1", "--grid-north", "0:0:1", "--builtin-table1")
        assert code == 0
        assert report(out)["node"] == {"east": 0.0, "north": 0.0}

    def test_workers_byte_identical(self, capsysbinary):
        args = ("estimate", "--builtin-table1", "--grid-east", "-50:50:1", "--grid-north", "-50:50:0.5")
        docs = []
        for w in ("1", "3", "8"):
            code, out, _ = run(capsysbinary, *args, "--workers", w)
            assert code == 0
            docs.append(json.dumps(strip_wall_time(report(out)), sort_keys=True))
        assert docs[0] == docs[1] == docs[2]

    def test_output_file(self, capsysbinary, tmp_path):
        dest = tmp_path / "rep.json"
        code, out, _ = run(capsysbinary, "estimate", "--builtin-table1", "--grid-east", "-25:-20:0.1",
                           "--grid-north", "40:45:0.1", "--weights", "-o", str(dest))
        assert code == 0 and out == b""
        doc = json.loads(dest.read_text())
        assert len(doc["weights"]) == 75
        assert doc["display"]["node"] == {"east": "-21.8", "north": "42.6"}

    def test_bad_grid(self, capsysbinary):
        assert run(capsysbinary, "estimate", "--builtin-table1", "--grid-east", "0:1")[0] == 2

    def test_singular_exit_code(self, capsysbinary, csv_file):
        path = csv_file([(0.0, 0.0, 1.0), (1e-12, 0.0, 2.0), (40.0, 0.0, 3.0)])
        code, _, err = run(capsysbinary, "estimate", path, "--grid-east", "0:1:1", "--grid-north", "0:1:1")
        assert code == 3
        assert "singular" in err

    def test_missing_file(self, capsysbinary, tmp_path):
        assert run(capsysbinary, "estimate", str(tmp_path / "nope.csv"))[0] == 2

    def test_duplicate_location_exit_code(self, capsysbinary, csv_file):
        path = csv_file([(1.0, 2.0, 3.0), (1.0, 2.0, 4.0)])
        code, _, err = run(capsysbinary, "gls", path)
        assert code == 2
        assert "0 and 1" in err


class TestKrige:
    def test_reference_node(self, capsysbinary):
        code, out, _ = run(capsysbinary, "krige", "--builtin-table1", "--target", "-21.8,42.6")
        assert code == 0
        doc = report(out)
        assert abs(doc["mean"] - 38.9) <= 0.05
        assert abs(doc["variance"] - 16.1) <= 0.05
        assert abs(doc["mse"] - 1.8) <= 0.05

    def test_at_sample(self, capsysbinary):
        code, out, _ = run(capsysbinary, "krige", "--builtin-table1", "--target", "13.3,68.2")
        assert code == 0
        assert report(out)["mean"] == pytest.approx(37.8, abs=1e-9)

    @pytest.mark.parametrize("target", ["abc", "1,2,3", "1;2"])
    def test_bad_target(self, capsysbinary, target):
        assert run(capsysbinary, "krige", "--builtin-table1", "--target", target)[0] == 2


class TestGls:
    def test_matches_library(self, capsysbinary):
        code, out, _ = run(capsysbinary, "gls", "--builtin-table1")
        assert code == 0
        doc = report(out)
        lib = estimate_gls(builtin_table1(), CorrelogramModel())
        assert doc["mean"] == lib.mean
        assert doc["negative_variance"] == lib.negative_variance
        assert doc["node"] is None and doc["mse"] is None

    def test_single_point(self, capsysbinary, csv_file):
        code, out, _ = run(capsysbinary, "gls", csv_file([(5.0, 5.0, 41.25)]))
        assert code == 0
        assert report(out)["mean"] == 41.25

    def test_tiny_range_is_arithmetic_mean(self, capsysbinary):
        code, out, _ = run(capsysbinary, "gls", "--builtin-table1", "--range", "1e-3")
        assert code == 0
        expected = math.fsum(p.value for p in builtin_table1().points) / 75
        assert report(out)["mean"] == pytest.approx(expected, abs=1e-12)

    def test_bad_range(self, capsysbinary):
        assert run(capsysbinary, "gls", "--builtin-table1", "--range", "-1")[0] == 2


class TestSurface:
    def test_coarse_grid(self, capsysbinary):
        code, out, _ = run(capsysbinary, "surface", "--builtin-table1", "--grid-east", "-50:50:10", "--grid-north", "-50:50:10")
        assert code == 0
        lines = out.decode().splitlines()
        assert lines[0] == "east,north,objective,mean"
        assert len(lines) == 1 + 121

    def test_minimum_matches_estimate(self, capsysbinary):
        grid = ("--grid-east", "-50:50:2.5", "--grid-north", "-50:50:2.5")
        _, out, _ = run(capsysbinary, "surface", "--builtin-table1", *grid)
        rows = [tuple(map(float, ln.split(","))) for ln in out.decode().splitlines()[1:]]
        best = min(rows, key=lambda r: r[2])
        _, out, _ = run(capsysbinary, "estimate", "--builtin-table1", *grid)
        doc = report(out)
        assert (best[0], best[1]) == (doc["node"]["east"], doc["node"]["north"])
        assert best[3] == pytest.approx(doc["mean"], abs=1e-9)

    def test_reference_grid_record_count(self, capsysbinary, tmp_path):
        dest = tmp_path / "surface.csv"
        code, _, _ = run(capsysbinary, "surface", "--builtin-table1", "-o", str(dest))
        assert code == 0
        with open(dest, "rb") as fh:
            assert sum(1 for _ in fh) == 1 + 1_002_001

    def test_refuses_huge_grid(self, capsysbinary):
        code, _, err = run(capsysbinary, "surface", "--builtin-table1", "--grid-east", "0:100000:0.001")
        assert code == 2
        assert "limited" in err
