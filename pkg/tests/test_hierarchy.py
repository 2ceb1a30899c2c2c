"""Tests for command trees, rank tables and cohesion scoring."""

import math
from fractions import Fraction

import pytest

from swarmstate import (
    CohesionClass,
    CommandTree,
    DomainError,
    ParseError,
    RankTable,
    build_tree,
    cohesion,
    from_edge_list,
    level_distribution,
    rank_from_rejection,
)
from swarmstate.hierarchy import DEFAULT_RANKS, MAX_LEVELS

CHAIN_H = 0.3177514295404957  # 5-level chain under the default ranks
TWO_LEVEL_H = 0.3809465857053901  # root plus one child


def oracle_cohesion(level_counts, ranks=DEFAULT_RANKS):
    """Direct evaluation: occupancy shares, action shares, normalized entropy."""
    total = sum(level_counts.values())
    actions = {
        level: ranks[level] * Fraction(count, total) for level, count in level_counts.items()
    }
    mean = sum(actions.values())
    shares = [a / mean for a in actions.values()]
    if len(shares) <= 1:
        return 0.0
    raw = -sum(float(v) * math.log(float(v)) for v in shares)
    return raw / math.log(len(shares))


class TestCommandTree:
    def test_single_node(self):
        tree = CommandTree([("boss", 1, None)])
        assert len(tree) == 1 and tree.depth == 1

    def test_needs_exactly_one_root(self):
        with pytest.raises(DomainError, match="exactly one root"):
            CommandTree([("a", 1, None), ("b", 1, None)])
        with pytest.raises(DomainError, match="exactly one root"):
            CommandTree([("a", 2, "b")])

    def test_root_must_sit_at_level_one(self):
        with pytest.raises(DomainError, match="level 1"):
            CommandTree([("a", 2, None)])

    def test_parent_one_level_up(self):
        with pytest.raises(DomainError, match="one\\s+level up"):
            CommandTree([("a", 1, None), ("b", 3, "a")])

    def test_unknown_parent(self):
        with pytest.raises(DomainError, match="unknown agent"):
            CommandTree([("a", 1, None), ("b", 2, "ghost")])

    def test_duplicate_agent(self):
        with pytest.raises(DomainError, match="twice"):
            CommandTree([("a", 1, None), ("a", 2, "a")])

    def test_level_cap(self):
        nodes = [(i, i + 1, i - 1 if i else None) for i in range(6)]
        with pytest.raises(DomainError, match="capped at 5"):
            CommandTree(nodes)


class TestBuildTree:
    def test_linear_chain(self):
        tree = build_tree(5, 1)
        assert len(tree) == 5
        assert tree.level_counts() == {1: 1, 2: 1, 3: 1, 4: 1, 5: 1}

    def test_triple_unit_size(self):
        assert len(build_tree(5, 3)) == 1 + 3 + 9 + 27 + 81 == 121

    def test_geometric_node_count(self):
        for levels in range(1, MAX_LEVELS + 1):
            for branching in range(1, 5):
                tree = build_tree(levels, branching)
                assert len(tree) == sum(branching**k for k in range(levels))

    def test_invalid_arguments(self):
        with pytest.raises(DomainError):
            build_tree(0, 2)
        with pytest.raises(DomainError, match="capped"):
            build_tree(6, 2)
        with pytest.raises(DomainError):
            build_tree(3, 0)


class TestRankTable:
    def test_default_matches_field_ladder(self):
        table = RankTable()
        assert [table.rank_for(level) for level in range(1, 6)] == [250, 20, 10, 5, 1]

    def test_must_decrease(self):
        with pytest.raises(DomainError, match="decrease"):
            RankTable({1: 10, 2: 10})

    def test_must_be_positive(self):
        with pytest.raises(DomainError, match="positive"):
            RankTable({1: 5, 2: 0})

    def test_missing_level(self):
        with pytest.raises(DomainError, match="level 4"):
            RankTable({1: 5, 2: 3}).rank_for(4)


class TestLevelDistribution:
    def test_chain(self):
        events = level_distribution(build_tree(5, 1))
        assert events.probabilities == (Fraction(1, 5),) * 5
        assert events.intensities == (250, 20, 10, 5, 1)

    def test_single_root(self):
        events = level_distribution(build_tree(1, 3))
        assert events.probabilities == (1,)
        assert events.intensities == (250,)

    def test_root_plus_three_children(self):
        events = level_distribution(build_tree(2, 3))
        assert events.probabilities == (Fraction(1, 4), Fraction(3, 4))
        assert events.intensities == (250, 20)

    def test_missing_rank_for_occupied_level(self):
        with pytest.raises(DomainError, match="level 3"):
            level_distribution(build_tree(3, 2), RankTable({1: 9, 2: 5}))


class TestCohesion:
    def test_five_level_chain_is_linear(self):
        h, label = cohesion(build_tree(5, 1))
        assert h == pytest.approx(CHAIN_H, abs=1e-12)
        assert h == pytest.approx(0.318, abs=1e-3)
        assert label is CohesionClass.LINEAR

    def test_single_node_tree(self):
        h, label = cohesion(CommandTree([("solo", 1, None)]))
        assert h == 0.0
        assert label is CohesionClass.LINEAR

    def test_two_level_pair(self):
        h, label = cohesion(build_tree(2, 1))
        assert h == pytest.approx(TWO_LEVEL_H, abs=1e-12)
        assert label is CohesionClass.LINEAR  # just below the corridor

    def test_sweep_matches_oracle(self):
        for levels in range(1, 6):
            for branching in range(1, 5):
                tree = build_tree(levels, branching)
                want = oracle_cohesion(tree.level_counts())
                h, _ = cohesion(tree)
                assert h == pytest.approx(want, abs=1e-9), (levels, branching)

    def test_branching_pushes_mass_deeper(self):
        for levels in range(2, 6):
            deep_mass = []
            for branching in range(1, 5):
                events = level_distribution(build_tree(levels, branching))
                deep_mass.append(sum(events.probabilities[1:]))
            assert all(a < b for a, b in zip(deep_mass, deep_mass[1:])), levels

    def test_classes_follow_shared_thresholds(self):
        from swarmstate import Zone, classify_zone

        zone_map = {
            Zone.ORDER: CohesionClass.LINEAR,
            Zone.QUASI_EQUILIBRIUM: CohesionClass.COHESIVE,
            Zone.CHAOS: CohesionClass.OVERCROWDED,
        }
        for levels in range(1, 6):
            for branching in range(1, 5):
                h, label = cohesion(build_tree(levels, branching))
                assert label is zone_map[classify_zone(h).zone]


class TestRankFromRejection:
    def test_top_dominance(self):
        assert rank_from_rejection(1.0) == 1

    def test_never_rejects(self):
        assert rank_from_rejection(0.0) == 5

    def test_middle(self):
        assert rank_from_rejection(0.5) == 3

    def test_custom_ladder(self):
        ladder = ((0.9, 1), (0.5, 2), (0.0, 3))
        assert rank_from_rejection(0.6, ladder) == 2
        assert rank_from_rejection(0.95, ladder) == 1
        assert rank_from_rejection(0.1, ladder) == 3

    def test_threshold_boundary_is_inclusive(self):
        assert rank_from_rejection(0.8) == 1
        assert rank_from_rejection(0.8 - 1e-12) == 2

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            rank_from_rejection(1.5)
        with pytest.raises(DomainError, match="decrease"):
            rank_from_rejection(0.5, ((0.2, 1), (0.4, 2), (0.0, 3)))
        with pytest.raises(DomainError, match="0.0"):
            rank_from_rejection(0.5, ((0.6, 1), (0.3, 2)))


class TestEdgeList:
    def test_chain_parse(self):
        text = "queen\nmajor queen\nworker major\n"
        tree = from_edge_list(text)
        assert tree.depth == 3
        assert tree.level_counts() == {1: 1, 2: 1, 3: 1}

    def test_branching_and_comments(self):
        text = """
        # unit roster
        queen
        a queen
        b queen
        c queen
        d a  # nested
        """
        tree = from_edge_list(text)
        assert tree.level_counts() == {1: 1, 2: 3, 3: 1}

    def test_order_independent(self):
        tree = from_edge_list("worker major\nmajor queen\nqueen\n")
        assert tree.depth == 3

    def test_root_only(self):
        assert len(from_edge_list("queen\n")) == 1

    def test_malformed_line_reports_number(self):
        with pytest.raises(ParseError, match="line 2"):
            from_edge_list("queen\na b c\n")

    def test_duplicate_child_reports_number(self):
        with pytest.raises(ParseError, match="line 3"):
            from_edge_list("queen\na queen\na queen\n")

    def test_two_roots(self):
        with pytest.raises(ParseError, match="second root"):
            from_edge_list("queen\nking\n")

    def test_unknown_parent(self):
        with pytest.raises(DomainError, match="unknown"):
            from_edge_list("queen\na ghost\n")

    def test_no_root(self):
        with pytest.raises(DomainError, match="root"):
            from_edge_list("a b\nb a\n")

    def test_six_levels_blocked(self):
        lines = ["n1"] + [f"n{i} n{i-1}" for i in range(2, 7)]
        with pytest.raises(DomainError, match="capped at 5"):
            from_edge_list("\n".join(lines))
