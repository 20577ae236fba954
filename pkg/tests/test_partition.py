import pytest

from oracles import fiedler_partition

from contrarec.errors import DataFormatError
from contrarec.graph import (
    EndorsementGraph,
    largest_connected_component,
    synth_polarized_graph,
)
from contrarec.partition import load_assignment, partition, save_assignment

TRIANGLES_BRIDGE = {
    ("a", "b"): 1, ("b", "c"): 1, ("c", "a"): 1,
    ("d", "e"): 1, ("e", "f"): 1, ("f", "d"): 1,
    ("c", "d"): 1,
}


def as_sets(sides):
    x = frozenset(u for u, s in sides.items() if s == "X")
    return {x, frozenset(sides) - x}


class TestPartition:
    def test_two_triangles_split_at_bridge(self):
        g = EndorsementGraph(TRIANGLES_BRIDGE)
        sides = partition(g)
        assert as_sets(sides) == {frozenset("abc"), frozenset("def")}
        # dense eigensolve oracle agrees up to side swap
        oracle_pos, oracle_rest = fiedler_partition(g)
        assert as_sets(sides) == {oracle_pos, oracle_rest}
        # canonical orientation: X holds the lexicographically smallest vertex
        assert sides["a"] == "X"

    def test_bridge_cut_size_one(self):
        g = EndorsementGraph(TRIANGLES_BRIDGE)
        sides = partition(g)
        cut = sum(1 for (s, t) in g.edges if sides[s] != sides[t])
        assert cut == 1

    def test_single_edge(self):
        g = EndorsementGraph({("a", "b"): 1})
        assert partition(g) == {"a": "X", "b": "Y"}

    def test_too_small(self):
        with pytest.raises(ValueError, match="too small"):
            partition(EndorsementGraph({}, vertices=["a"]))

    def test_deterministic_per_seed(self):
        g, _ = synth_polarized_graph(60, 0.3, 0.03, seed=4)
        g, _ = largest_connected_component(g)
        assert partition(g, seed=1) == partition(g, seed=1)

    def test_planted_agreement(self):
        g, planted = synth_polarized_graph(200, 0.3, 0.01, seed=7)
        component, _ = largest_connected_component(g)
        sides = partition(component, seed=0)
        agree = sum(1 for u in component.vertices if sides[u] == planted[u])
        agreement = max(agree, component.n - agree) / component.n
        assert agreement >= 0.95

    def test_orientation_is_canonical(self):
        # relabeling has no effect: X is always the smallest vertex's side
        g = EndorsementGraph(TRIANGLES_BRIDGE)
        sides = partition(g, seed=0)
        for seed in (1, 2, 3):
            assert partition(g, seed=seed) == sides


class TestAssignmentIO:
    def test_round_trip(self, tmp_path):
        g = EndorsementGraph({("a", "b"): 1, ("b", "c"): 1})
        sides = {"a": "X", "b": "Y", "c": "Y"}
        path = tmp_path / "sides.csv"
        save_assignment(path, sides)
        assert load_assignment(path, g) == sides

    def test_missing_vertex_named(self, tmp_path):
        g = EndorsementGraph({("a", "b"): 1, ("b", "c"): 1})
        path = tmp_path / "sides.csv"
        path.write_text("user,side\na,X\nb,Y\n", encoding="utf-8")
        with pytest.raises(DataFormatError, match="'c'"):
            load_assignment(path, g)

    def test_unknown_side_label(self, tmp_path):
        g = EndorsementGraph({("a", "b"): 1})
        path = tmp_path / "sides.csv"
        path.write_text("user,side\na,X\nb,Z\n", encoding="utf-8")
        with pytest.raises(DataFormatError, match="'Z'"):
            load_assignment(path, g)
