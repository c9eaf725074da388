import itertools

import pytest

from ncbench.graphs import (
    Cpdag,
    Dag,
    GraphError,
    all_dags,
    dag_to_cpdag,
    enumerate_extensions,
    skeleton,
)
from ncbench.metrics import (
    SidBounds,
    adjacency_confusion,
    compute_metric,
    full_report,
    orientation_confusion,
    shd,
    sid,
    valid_adjustment,
    vstructure_recovery,
)
from ncbench.random_graphs import RngSeed, sample_er_dag


class TestAdjacencyConfusion:
    def test_five_node_example(self, five_node_truth, five_node_estimate):
        c = adjacency_confusion(five_node_truth, five_node_estimate)
        assert (c.tp, c.fp, c.fn, c.tn) == (6, 1, 2, 1)

    def test_identity(self, five_node_truth):
        c = adjacency_confusion(five_node_truth, five_node_truth)
        assert (c.tp, c.fp, c.fn, c.tn) == (8, 0, 0, 2)

    def test_empty_estimate(self, five_node_truth):
        c = adjacency_confusion(five_node_truth, Dag(5))
        assert (c.tp, c.fp, c.fn, c.tn) == (0, 0, 8, 2)

    def test_margins(self, five_node_truth, five_node_estimate):
        c = adjacency_confusion(five_node_truth, five_node_estimate)
        assert c.total == 10
        assert c.tp + c.fp == len(skeleton(five_node_estimate))
        assert c.tp + c.fn == len(skeleton(five_node_truth))

    def test_node_mismatch(self, five_node_truth):
        with pytest.raises(GraphError):
            adjacency_confusion(five_node_truth, Dag(4))


class TestOrientationConfusion:
    def test_five_node_example(self, five_node_truth, five_node_estimate):
        # endpoint enumeration over the 6 shared edges
        c = orientation_confusion(five_node_truth, five_node_estimate)
        assert (c.tp, c.fp, c.fn, c.tn) == (4, 2, 2, 4)

    def test_identity(self, five_node_truth):
        c = orientation_confusion(five_node_truth, five_node_truth)
        m = five_node_truth.m
        assert (c.tp, c.fp, c.fn, c.tn) == (m, 0, 0, m)

    def test_no_shared_adjacencies(self):
        a = Dag(3, frozenset({(0, 1)}))
        b = Dag(3, frozenset({(1, 2)}))
        c = orientation_confusion(a, b)
        assert (c.tp, c.fp, c.fn, c.tn) == (0, 0, 0, 0)

    def test_undirected_counts_as_two_tails(self):
        truth = Dag(2, frozenset({(0, 1)}))
        est = Cpdag(2, frozenset(), frozenset({(0, 1)}))
        c = orientation_confusion(truth, est)
        assert (c.tp, c.fp, c.fn, c.tn) == (0, 0, 1, 1)

    def test_total_is_twice_shared(self, five_node_truth, five_node_estimate):
        c = orientation_confusion(five_node_truth, five_node_estimate)
        shared = len(skeleton(five_node_truth) & skeleton(five_node_estimate))
        assert c.total == 2 * shared


class TestShd:
    def test_identity(self, five_node_truth):
        assert shd(five_node_truth, five_node_truth) == 0

    def test_five_node_example(self, five_node_truth, five_node_estimate):
        # pairwise enumeration: 1 addition + 2 deletions + 2 reversals
        assert shd(five_node_truth, five_node_estimate) == 5

    def test_empty_vs_truth_counts_edges(self, five_node_truth):
        assert shd(five_node_truth, Dag(5)) == 8

    def test_symmetry(self, five_node_truth, five_node_estimate):
        assert shd(five_node_truth, five_node_estimate) == shd(
            five_node_estimate, five_node_truth
        )

    def test_directed_vs_undirected_costs_one(self):
        a = Dag(2, frozenset({(0, 1)}))
        b = Cpdag(2, frozenset(), frozenset({(0, 1)}))
        assert shd(a, b) == 1

    def test_axioms_on_random_triples(self):
        gen = RngSeed(40).generator()
        for _ in range(40):
            gs = [sample_er_dag(5, int(gen.integers(0, 11)), gen) for _ in range(3)]
            a, b, c = gs
            assert shd(a, b) == shd(b, a)
            assert shd(a, b) <= shd(a, c) + shd(c, b)
            assert (shd(a, b) == 0) == (a.edges == b.edges)
            assert shd(a, b) <= a.m + b.m


class TestVStructureRecovery:
    def test_no_truth_vstructures_gives_one(self, five_node_truth, five_node_estimate):
        assert vstructure_recovery(five_node_truth, five_node_estimate).value == 1.0

    def test_exact_recovery(self):
        g = Dag(3, frozenset({(0, 1), (2, 1)}))
        assert vstructure_recovery(g, g).value == 1.0

    def test_empty_estimate(self):
        g = Dag(3, frozenset({(0, 1), (2, 1)}))
        assert vstructure_recovery(g, Dag(3)).value == 0.0

    def test_partial(self):
        truth = Dag(
            5, frozenset({(0, 1), (2, 1), (2, 3), (4, 3)})
        )  # two v-structures
        est = Dag(5, frozenset({(0, 1), (2, 1)}))  # recovers one
        assert vstructure_recovery(truth, est).value == 0.5


class TestValidAdjustment:
    def test_chain_no_backdoor(self):
        g = Dag(3, frozenset({(0, 1), (1, 2)}))
        assert valid_adjustment(g, 0, 2, set())

    def test_confounder_open_backdoor(self):
        g = Dag(3, frozenset({(0, 1), (0, 2), (1, 2)}))
        assert not valid_adjustment(g, 1, 2, set())
        assert valid_adjustment(g, 1, 2, {0})

    def test_descendant_invalidates(self):
        g = Dag(3, frozenset({(0, 1), (1, 2)}))
        assert not valid_adjustment(g, 0, 2, {1})

    def test_bad_nodes(self):
        g = Dag(3, frozenset({(0, 1)}))
        with pytest.raises(GraphError):
            valid_adjustment(g, 0, 0, set())


class TestSid:
    def test_self_comparison_is_zero(self, five_node_truth):
        assert sid(five_node_truth, five_node_truth) == SidBounds(0, 0, True)

    def test_empty_estimate_brute_force(self):
        truth = Dag(3, frozenset({(0, 1), (1, 2), (0, 2)}))
        empty = Dag(3)
        expected = sum(
            not valid_adjustment(truth, i, j, set())
            for i, j in itertools.permutations(range(3), 2)
        )
        bounds = sid(truth, empty)
        assert bounds == SidBounds(expected, expected, True)

    def test_bounded_by_ordered_pairs(self):
        gen = RngSeed(50).generator()
        for _ in range(20):
            truth = sample_er_dag(4, int(gen.integers(0, 7)), gen)
            est = sample_er_dag(4, int(gen.integers(0, 7)), gen)
            bounds = sid(truth, est)
            assert 0 <= bounds.lower <= bounds.upper <= 4 * 3

    @pytest.mark.parametrize("d", [3, 4])
    def test_cpdag_bounds_bracket_extensions(self, d):
        population = all_dags(d)
        gen = RngSeed(60).generator()
        sample = [population[int(gen.integers(0, len(population)))] for _ in range(25)]
        for truth in sample[:5]:
            for est in sample[5:10]:
                cp = dag_to_cpdag(est)
                bounds = sid(truth, cp)
                values = [sid(truth, ext).lower for ext in enumerate_extensions(cp)]
                assert bounds.lower == min(values)
                assert bounds.upper == max(values)
                for v in values:
                    assert bounds.lower <= v <= bounds.upper


class TestFullReport:
    def test_five_node_example(self, five_node_truth, five_node_estimate):
        rep = full_report(five_node_truth, five_node_estimate)
        assert rep["adjacency_precision"].value == pytest.approx(6 / 7)
        assert rep["adjacency_recall"].value == pytest.approx(6 / 8)
        assert rep.m_true == 8 and rep.m_est == 7

    def test_identical_graphs(self, five_node_truth):
        rep = full_report(five_node_truth, five_node_truth, include_sid=True)
        assert rep["shd"].value == 0.0
        assert rep["adjacency_precision"].value == 1.0
        assert rep["orientation_recall"].value == 1.0
        assert rep["sid_upper"].value == 0.0

    def test_empty_estimate_missing_precision(self, five_node_truth):
        rep = full_report(five_node_truth, Dag(5))
        assert rep["adjacency_precision"].missing
        assert rep["adjacency_recall"].value == 0.0


def test_compute_metric_unknown_name(five_node_truth):
    with pytest.raises(ValueError):
        compute_metric("nope", five_node_truth, five_node_truth)
