"""Cross-checking the class graph against discrete-time exploration"""

from fractions import Fraction

import pytest

from conftest import CHOICE, SMALL_CYCLE, choice_program
from tempock.errors import GranularityMismatch, HorizonExceeded
from tempock.explorer.classes import build_graph
from tempock.explorer.oracle import compare, effective_granularity, oracle_explore
from tempock.fiacre.parser import parse_program
from tempock.library.synthetic import random_tts, seeded
from tempock.props.atoms import DeadAtom, EventAtom, StateAtom
from tempock.props.checker import check
from tempock.props.formula import Always, Atom, Not
from tempock.tts.compiler import compile_program

HALF_UNIT = SMALL_CYCLE.replace("wait [1,2]", "wait [1/2,1]")
WIDE_PRIORITY = CHOICE.format(priority="priority a > b").replace(
    "port a, b : none in [0,0]", "port a : none in [1,2], b : none in [0,2]")
POINT_PRIORITY = CHOICE.format(priority="priority a > b").replace(
    "port a, b : none in [0,0]", "port a : none in [1,1], b : none in [0,2]")


def tts_of(text):
    return compile_program(parse_program(text))


class TestGranularity:

    def test_integer_bounds_keep_the_grid(self):
        assert effective_granularity(tts_of(SMALL_CYCLE), 1) == 1

    def test_point_priority_halves_the_grid(self):
        tts = compile_program(choice_program(priority=True))
        assert effective_granularity(tts, 1) == Fraction(1, 2)
        assert effective_granularity(tts, 1, refine=False) == 1

    def test_mismatch_carries_a_hint(self):
        with pytest.raises(GranularityMismatch) as info:
            effective_granularity(tts_of(HALF_UNIT), 1)
        assert info.value.hint == Fraction(1, 2)
        assert effective_granularity(tts_of(HALF_UNIT), info.value.hint) == Fraction(1, 2)


class TestCompare:

    def test_small_cycle_matches(self):
        tts = tts_of(SMALL_CYCLE)
        result = oracle_explore(tts)
        assert result.states == {("s0",), ("s1",)}
        assert result.firable == {("s0",): {0}, ("s1",): {1}}
        comparison = compare(build_graph(tts), result, depth=6)
        assert comparison.match
        assert comparison.describe() == "MATCH"

    def test_priorities_match(self):
        tts = compile_program(choice_program(priority=True))
        result = oracle_explore(tts)
        assert result.firable[tts.initial] == {0}
        assert compare(build_graph(tts), result).match

    def test_dropped_priority_is_caught(self):
        graph = build_graph(compile_program(choice_program(priority=True)))
        result = oracle_explore(compile_program(choice_program(priority=False)))
        comparison = compare(graph, result, depth=4)
        assert not comparison.match
        assert comparison.firable_mismatches
        assert comparison.describe().startswith("MISMATCH")

    def test_horizon(self, periodic):
        with pytest.raises(HorizonExceeded):
            oracle_explore(compile_program(periodic), horizon=5)

    def test_non_point_dominator_prunes_the_whole_node(self):
        tts = tts_of(WIDE_PRIORITY)
        result = oracle_explore(tts)
        assert result.granularity == 1
        assert result.firable[tts.initial] == {0}
        comparison = compare(build_graph(tts), result)
        assert comparison.match, comparison.describe()

    def test_point_dominator_blocks_only_at_its_instant(self):
        tts = tts_of(POINT_PRIORITY)
        result = oracle_explore(tts)
        assert result.granularity == Fraction(1, 2)
        assert result.firable[tts.initial] == {0, 1}
        assert compare(build_graph(tts), result).match

    @pytest.mark.slow
    def test_random_models_agree(self):
        rng = seeded(7)
        for n in range(150):
            tts = random_tts(rng, processes=2, locations=3, transitions=4, max_bound=4,
                             priority_ratio=0.2)
            graph = build_graph(tts)
            result = oracle_explore(tts, Fraction(1, 2), refine=False)
            comparison = compare(graph, result, depth=8)
            assert comparison.match, "model {}: {}".format(n, comparison.describe())
            assert_safety_verdicts_agree(tts, graph, result)

    @pytest.mark.slow
    def test_random_models_with_open_bounds_agree(self):
        # chains of strict delays inside one time unit need a grid finer than 1/2
        rng = seeded(8)
        for n in range(60):
            tts = random_tts(rng, processes=2, locations=3, transitions=2, max_bound=3,
                             strict_ratio=0.5, priority_ratio=0.2)
            graph = build_graph(tts)
            result = oracle_explore(tts, Fraction(1, 12), refine=False)
            comparison = compare(graph, result, depth=6)
            assert comparison.match, "model {}: {}".format(n, comparison.describe())
            assert_safety_verdicts_agree(tts, graph, result)


def assert_safety_verdicts_agree(tts, graph, result):
    fired = set().union(*result.firable.values())
    for instance in tts.instances:
        for location in tts.variables[tts.index[instance + "#loc"]].domain:
            reached = any(tts.location(s, instance) == location for s in result.states)
            verdict = check(graph, Always(Not(Atom(StateAtom(instance, location)))))
            assert verdict.holds == (not reached), (instance, location)
    for t in tts.transitions:
        if t.event is not None:
            verdict = check(graph, Always(Not(Atom(EventAtom(t.event, "main")))))
            assert verdict.holds == (t.id not in fired), t.name
    assert check(graph, Always(Not(Atom(DeadAtom())))).holds == (not result.dead)
