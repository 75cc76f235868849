from fractions import Fraction
from pathlib import Path

import pytest

from metricblocks import (
    Asymmetry,
    ParseError,
    compute_cut_points,
    cut_system_to_json,
    decompose,
    decomposition_to_json,
    metric_from_json,
    metric_to_json,
    parse_matrix,
    realization_to_dot,
    realization_to_json,
    report_to_json,
    verify_cut_system,
)

DATA = Path(__file__).parent / "data"


class TestParsing:
    def test_fig1_csv(self, fig1):
        parsed = parse_matrix((DATA / "fig1.csv").read_text())
        assert parsed == fig1

    def test_fig1_phylip(self, fig1):
        parsed = parse_matrix((DATA / "fig1.phy").read_text(), fmt="phylip")
        assert parsed == fig1

    def test_phylip_decimals(self):
        m = parse_matrix("2\nx 0 1.5\ny 1.5 0", fmt="phylip")
        assert m.d("x", "y") == Fraction(3, 2)

    def test_csv_exact_decimals(self):
        m = parse_matrix("x,y\nx,0,0.1\ny,0.1,0")
        assert m.d("x", "y") == Fraction(1, 10)

    def test_csv_leading_empty_header_cell(self, fig1):
        text = (DATA / "fig1.csv").read_text()
        first, rest = text.split("\n", 1)
        assert parse_matrix("," + first + "\n" + rest) == fig1

    def test_ragged_row(self):
        with pytest.raises(ParseError) as exc:
            parse_matrix("x,y\nx,0,1\ny,1")
        assert exc.value.line == 3

    def test_bad_number_reports_position(self):
        with pytest.raises(ParseError) as exc:
            parse_matrix("x,y\nx,0,zap\ny,1,0")
        assert exc.value.line == 2

    def test_label_mismatch(self):
        with pytest.raises(ParseError):
            parse_matrix("x,y\ny,0,1\nx,1,0")

    def test_metric_errors_pass_through(self):
        with pytest.raises(Asymmetry):
            parse_matrix("x,y\nx,0,1\ny,2,0")

    def test_unknown_format(self):
        with pytest.raises(ParseError):
            parse_matrix("x", fmt="nexus")

    def test_bytes_accepted(self, fig1):
        assert parse_matrix((DATA / "fig1.csv").read_bytes()) == fig1


class TestJson:
    def test_metric_round_trip(self, fig1):
        assert metric_from_json(metric_to_json(fig1)) == fig1

    def test_rationals_are_strings(self, two_point):
        doc = metric_to_json(two_point)
        assert doc["matrix"][0][1] == "3/2"
        assert doc["matrix_approx"][0][1] == "1.5"

    def test_cut_system_document(self, fig1):
        doc = cut_system_to_json(compute_cut_points(fig1))
        assert len(doc["cutpoints"]) == 8
        assert len(doc["block_splits"]) == 4
        kinds = {c["kind"] for c in doc["cutpoints"]}
        assert kinds == {"kuratowski", "interior_cutpoint"}
        split = next(s for s in doc["block_splits"] if s["side_a"] == ["a", "b"])
        assert split["alpha"] == "1"

    def test_realization_document(self, fig1):
        from metricblocks import build_block_realization

        cs = compute_cut_points(fig1)
        doc = realization_to_json(build_block_realization(fig1, cs))
        assert len(doc["edges"]) == 10
        assert len(doc["vertices"]) == 8
        assert doc["cut_vertices"] == ["v1", "v2", "v3"]

    def test_decomposition_document(self, fig1):
        doc = decomposition_to_json(decompose(fig1))
        assert len(doc["blocks"]) == 5
        assert sum(1 for b in doc["blocks"] if b["is_bridge"]) == 4

    def test_report_document(self, fig1):
        doc = report_to_json(verify_cut_system(fig1, compute_cut_points(fig1)))
        assert doc["overall"] is True
        assert all({"name", "passed", "witness"} <= set(c) for c in doc["checks"])


class TestDot:
    def test_fig1_dot(self, fig1):
        from metricblocks import build_block_realization

        g = build_block_realization(fig1, compute_cut_points(fig1))
        dot = realization_to_dot(g)
        assert dot.startswith("graph ")
        assert dot.rstrip().endswith("}")
        assert dot.count(" -- ") == 10
        assert '"v1" -- "v2" [label="1"];' in dot
