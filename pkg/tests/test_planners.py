"""Planner behaviour: determinism, plan validity, enumeration bounds."""

import itertools
import random

import pytest

from mvfsim.actions import ActionKind
from mvfsim.planners import (
    MAX_ENUMERATION_LEN,
    MAX_VOCABULARY,
    STRATEGY_NAMES,
    action_vocabulary,
    check_enumeration_bounds,
    enumerate_plans,
    plan,
)
from mvfsim.scenario import redact_truth
from mvfsim.sim import run_plan, validate_plan

from generators import random_scenario
from oracles import count_sequences


class TestStrategyNames:
    def test_six_strategies(self):
        assert len(STRATEGY_NAMES) == 6
        assert len(set(STRATEGY_NAMES)) == 6

    def test_unknown_strategy_raises(self, table9):
        with pytest.raises(KeyError, match="unknown strategy"):
            plan(redact_truth(table9), table9.missions[0].id, "yolo")


class TestPlanShape:
    @pytest.mark.parametrize("strategy", STRATEGY_NAMES)
    def test_opens_with_assessment_closes_with_declaration(self, table9, strategy):
        p = plan(redact_truth(table9), table9.missions[0].id, strategy)
        assert p.actions[0].kind is ActionKind.ASSESS_MISSION_IMPACT
        assert p.actions[-1].kind is ActionKind.DECLARE_MVF
        assert p.planner_name == strategy

    @pytest.mark.parametrize("strategy", STRATEGY_NAMES)
    def test_plans_validate_against_scenario(self, table9, strategy):
        p = plan(redact_truth(table9), table9.missions[0].id, strategy)
        validate_plan(table9, p)

    @pytest.mark.parametrize("strategy", STRATEGY_NAMES)
    def test_plans_validate_on_random_scenarios(self, strategy):
        for seed in range(40):
            rng = random.Random(seed)
            spec = random_scenario(rng, max_nodes=8)
            p = plan(redact_truth(spec), spec.missions[0].id, strategy)
            validate_plan(spec, p)
            run_plan(spec, p)  # must execute without raising

    @pytest.mark.parametrize("strategy", STRATEGY_NAMES)
    def test_deterministic(self, table9, strategy):
        view = redact_truth(table9)
        mission = table9.missions[0].id
        assert plan(view, mission, strategy) == plan(view, mission, strategy)

    @pytest.mark.parametrize("strategy", STRATEGY_NAMES)
    def test_presatisfied_needs_no_field_work(self, presat, strategy):
        p = plan(redact_truth(presat), presat.missions[0].id, strategy)
        assert [a.kind for a in p.actions] == [
            ActionKind.ASSESS_MISSION_IMPACT,
            ActionKind.DECLARE_MVF,
        ]


class TestVocabulary:
    def test_sizes_on_builtins(self, table9, micro3, presat):
        # frozen sizes; a vocabulary change invalidates recorded search minima
        assert len(action_vocabulary(redact_truth(table9), table9.missions[0].id)) == 19
        assert len(action_vocabulary(redact_truth(micro3), micro3.missions[0].id)) == 11
        assert len(action_vocabulary(redact_truth(presat), presat.missions[0].id)) == 2

    def test_vocabulary_actions_validate(self, table9):
        view = redact_truth(table9)
        for action in action_vocabulary(view, table9.missions[0].id):
            from mvfsim.sim import validate_action

            validate_action(table9, action)

    def test_vocabulary_is_deterministic(self, micro3):
        view = redact_truth(micro3)
        mission = micro3.missions[0].id
        assert action_vocabulary(view, mission) == action_vocabulary(view, mission)

    def test_no_teardown_kinds(self, table9):
        view = redact_truth(table9)
        kinds = {a.kind for a in action_vocabulary(view, table9.missions[0].id)}
        assert ActionKind.EXIT_DEGRADED_MODE not in kinds
        assert ActionKind.ROLLBACK not in kinds


class TestEnumeration:
    def test_bounds_guard(self):
        check_enumeration_bounds(MAX_ENUMERATION_LEN, MAX_VOCABULARY)
        with pytest.raises(ValueError, match="enumeration bound"):
            check_enumeration_bounds(MAX_ENUMERATION_LEN + 1, 5)
        with pytest.raises(ValueError, match="enumeration bound"):
            check_enumeration_bounds(3, MAX_VOCABULARY + 1)

    def test_length_one_equals_vocabulary(self, micro3):
        view = redact_truth(micro3)
        mission = micro3.missions[0].id
        vocabulary = action_vocabulary(view, mission)
        plans = list(enumerate_plans(view, mission, 1))
        assert [p.actions for p in plans] == [(a,) for a in vocabulary]

    def test_count_matches_reference(self, presat):
        view = redact_truth(presat)
        mission = presat.missions[0].id
        vocabulary = action_vocabulary(view, mission)
        got = sum(1 for _ in enumerate_plans(view, mission, 6))
        assert got == count_sequences(len(vocabulary), 6)

    def test_count_micro_at_len_four(self, micro3):
        view = redact_truth(micro3)
        mission = micro3.missions[0].id
        assert len(action_vocabulary(view, mission)) == 11
        got = sum(1 for _ in enumerate_plans(view, mission, 4))
        assert got == count_sequences(11, 4) == 16104

    def test_shortest_first_and_prefix_order(self, presat):
        view = redact_truth(presat)
        mission = presat.missions[0].id
        plans = list(enumerate_plans(view, mission, 3))
        lengths = [len(p) for p in plans]
        assert lengths == sorted(lengths)
        # within one length, order is lexicographic by vocabulary position
        vocabulary = action_vocabulary(view, mission)
        index = {a: i for i, a in enumerate(vocabulary)}
        for length in (1, 2, 3):
            group = [tuple(index[a] for a in p.actions) for p in plans if len(p) == length]
            assert group == sorted(group)
            assert group == list(
                itertools.product(range(len(vocabulary)), repeat=length)
            )


def test_planners_read_only_redacted_facts():
    """Strategies must work from responder-visible facts alone."""
    import inspect

    import mvfsim.planners as planners_module

    source = inspect.getsource(planners_module)
    assert "truth_" not in source
    assert "contaminated" not in source
    assert "lateral_movement" not in source
