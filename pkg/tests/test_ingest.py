import io
import warnings
from pathlib import Path

import pytest

from mstinfer.graph import components
from mstinfer.ingest import (
    EdgelistError,
    fixed_ordering,
    graph_to_records,
    load_edgelist,
    load_ordering,
    parse_edgelist,
    preprocess,
    preprocess_with_report,
    region_counts,
    region_overlap,
    save_ordering,
    subset_by_region,
    write_edgelist,
)
from mstinfer.mst import msf

FIXTURE = Path(__file__).parent / "data" / "fixture_edges.csv"

# Hand enumeration of the fixture: rows D-F (0.020), J-A (0.030) and J-E (0.016)
# exceed 0.015, which strands J. A-B has distance 0 and is imputed as half the
# smallest retained positive distance, 0.002 / 2.
FIXTURE_NODES = {"A", "B", "C", "D", "E", "F", "G", "H", "I"}
FIXTURE_COMPONENTS = [{"A", "B", "C", "D", "E"}, {"F", "G", "H", "I"}]
# Kruskal by hand: A-B .001, D-E .002, H-I .003, then one of the tied A-C/B-C
# .004, F-G .006, G-H .008, C-D .010; G-I .009 closes F-G-H-I and is skipped.
FIXTURE_MSF_FIXED = {("A", "B"), ("D", "E"), ("H", "I"), ("F", "G"), ("G", "H"), ("C", "D")}
TIE = [("A", "C"), ("B", "C")]


def parse(text):
    return parse_edgelist(io.StringIO(text))


def named_edges(g, forest):
    return {tuple(sorted((g.names[g.edges[i].u], g.names[g.edges[i].v]))) for i in forest.edges}


class TestParse:
    def test_single_row(self):
        (r,) = parse("A,B,0.010\n")
        assert (r.id_a, r.id_b, r.distance) == ("A", "B", 0.01)

    def test_empty(self):
        assert parse("") == []

    def test_header_and_blank_lines(self):
        assert len(parse("id_a,id_b,distance\n\nA,B,0.01\n")) == 1

    def test_duplicate_pair(self):
        with pytest.raises(EdgelistError, match="duplicate") as exc:
            parse("A,B,0.01\nB,A,0.02\n")
        assert exc.value.line == 2

    @pytest.mark.parametrize("text", ["A,A,0.1\n", "A,B,-0.1\n", "A,B\n", "A,B,0.1\nC,D,x\n", "A,B,nan\n", ",B,0.1\n"])
    def test_malformed(self, text):
        with pytest.raises(EdgelistError):
            parse(text)

    def test_regions(self):
        (r,) = parse("A,B,0.01,921,920\n")
        assert (r.region_a, r.region_b) == ("921", "920")


class TestPreprocess:
    def test_threshold(self):
        g = preprocess(parse("A,B,0.01\nC,D,0.02\n"), threshold=0.015)
        assert g.n_edges == 1 and g.names == ("A", "B")

    def test_zero_imputation(self):
        g = preprocess(parse("A,B,0\nB,C,0.004\n"))
        assert sorted(e.w for e in g.edges) == [0.002, 0.004]

    def test_zero_policy_before_filter(self):
        records = parse("A,B,0\nC,D,0.02\n")
        with pytest.raises(EdgelistError):
            preprocess(records, 0.015, "after_filter")
        g, report = preprocess_with_report(records, 0.015, "before_filter")
        assert [e.w for e in g.edges] == [0.01] and report.imputed_value == 0.01

    def test_everything_dropped_warns(self):
        with pytest.warns(UserWarning):
            g = preprocess(parse("A,B,0.5\n"))
        assert g.n_nodes == 0

    def test_conflicting_regions(self):
        with pytest.raises(EdgelistError):
            preprocess(parse("A,B,0.01,1,1\nA,C,0.01,2,1\n"))

    def test_bad_threshold(self):
        with pytest.raises(ValueError):
            preprocess([], threshold=0)


class TestFixture:
    def setup_method(self):
        self.g, self.report = preprocess_with_report(load_edgelist(FIXTURE), 0.015)

    def test_counts(self):
        r = self.report
        assert (r.input_nodes, r.input_edges) == (10, 12)
        assert (r.dropped_edges, r.removed_isolates, r.imputed_zeros) == (3, 1, 1)
        assert r.imputed_value == 0.001
        assert (r.nodes, r.edges, r.components) == (9, 9, 2)
        assert set(self.g.names) == FIXTURE_NODES

    def test_components(self):
        blocks = [{self.g.names[v] for v in b} for b in components(self.g)]
        assert blocks == FIXTURE_COMPONENTS

    @pytest.mark.parametrize("seed", range(8))
    def test_msf(self, seed):
        f = msf(self.g, fixed_ordering(self.g, seed))
        edges = named_edges(self.g, f)
        assert len(edges) == 7
        assert FIXTURE_MSF_FIXED <= edges
        assert len(edges - FIXTURE_MSF_FIXED) == 1 and (edges - FIXTURE_MSF_FIXED).pop() in TIE

    def test_both_tie_choices_occur(self):
        picks = {(named_edges(self.g, msf(self.g, fixed_ordering(self.g, s))) - FIXTURE_MSF_FIXED).pop()
                 for s in range(20)}
        assert picks == set(TIE)

    def test_region_subsets(self):
        assert {self.g.names[v] for v in subset_by_region(self.g, "921").members} == {"A", "B", "C", "F", "G", "I"}
        assert len(subset_by_region(self.g, "919")) == 0
        assert region_counts(self.g) == {"921": 6, "920": 3}

    @pytest.mark.parametrize("seed", range(4))
    def test_region_overlap(self, seed):
        # region 921 forest: A-B, the tie edge, F-G, G-I; only G-I is outside the population MSF
        o = fixed_ordering(self.g, seed)
        assert region_overlap(self.g, o, "921") == (6, 0.75)
        assert region_overlap(self.g, o, "920") == (3, 1.0)
        assert region_overlap(self.g, o, "919") == (0, None)

    def test_roundtrip(self, tmp_path):
        path = tmp_path / "out.csv"
        write_edgelist(path, graph_to_records(self.g))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            g2 = preprocess(load_edgelist(path), threshold=1.0)
        assert g2.names == self.g.names and g2.edges == self.g.edges and g2.region == self.g.region

    def test_ordering_roundtrip(self, tmp_path):
        o = fixed_ordering(self.g, 3)
        save_ordering(tmp_path / "o.json", self.g, o)
        assert load_ordering(tmp_path / "o.json", self.g) == o
