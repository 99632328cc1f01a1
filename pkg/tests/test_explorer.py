"""State class graphs, firing domains and the delay matrices under them"""

from fractions import Fraction

import numpy as np
import pytest

from conftest import CHOICE as CHOICE_TEXT, SMALL_CYCLE, TWO_WAITS, choice_program
from tempock.errors import LimitExceeded, NotFirable
from tempock.explorer import dbm
from tempock.explorer.classes import build_graph, firable, initial_class, successor
from tempock.fiacre.ast import TimeInterval
from tempock.fiacre.parser import parse_program
from tempock.library.synthetic import random_tts, seeded, synthetic_tasks
from tempock.library.tasks import INTERVAL, build_tasksystem
from tempock.tts.compiler import compile_program
from tempock.tts.system import TimedTransitionSystem


def tts_of(text):
    return compile_program(parse_program(text))


class TestDBM:

    def test_bound_encoding(self):
        assert dbm.bound(2) == 5
        assert dbm.bound(2, strict=True) == 4
        assert dbm.decode(5) == (2, False)
        assert dbm.decode(-1) == (-1, False)
        assert dbm.decode(dbm.INF) == (None, True)
        assert dbm.add(dbm.INF, dbm.bound(1)) == dbm.INF
        assert dbm.add(dbm.bound(1), dbm.bound(2, strict=True)) == dbm.bound(3, strict=True)

    def test_plus_matches_add(self):
        values = [dbm.bound(-2), dbm.bound(0, strict=True), dbm.LE_ZERO, dbm.bound(3), dbm.INF]
        total = dbm.plus(np.array(values)[:, None], np.array(values)[None, :])
        for i, a in enumerate(values):
            for j, b in enumerate(values):
                assert total[i, j] == dbm.add(a, b)

    def test_box_is_canonical(self):
        m = dbm.box([TimeInterval.closed(1, 2)], 1)
        assert np.array_equal(m, dbm.matrix([[dbm.LE_ZERO, dbm.bound(-1)],
                                             [dbm.bound(2), dbm.LE_ZERO]]))
        assert np.array_equal(dbm.canonical(m), m)
        assert dbm.delay_range(m, 1, 1) == (1, False, 2, False)

    def test_unsatisfiable(self):
        # x1 >= 2 and x1 <= 1
        m = dbm.matrix([[dbm.LE_ZERO, dbm.bound(-2)], [dbm.bound(1), dbm.LE_ZERO]])
        assert dbm.canonical(m) is None

    def test_infinite_upper_bound(self):
        m = dbm.box([TimeInterval.unbounded(2)], 1)
        assert dbm.delay_range(m, 1, 1) == (2, False, None, True)

    def test_open_bounds(self):
        m = dbm.box([TimeInterval(1, True, 3, True)], 2)
        assert dbm.delay_range(m, 1, 2) == (1, True, 3, True)
        assert dbm.bound_text(m[1, 0], 2) == "<3"

    def test_canonical_is_idempotent(self):
        rng = seeded(11)
        closed = 0
        for _ in range(200):
            n = rng.randint(2, 5)
            m = dbm.unconstrained(n)
            for i in range(n):
                for j in range(n):
                    if i != j and rng.random() < 0.6:
                        m[i, j] = dbm.bound(rng.randint(-3, 5), strict=rng.random() < 0.3)
            once = dbm.canonical(m)
            if once is None:
                continue
            closed += 1
            assert (once <= m).all()
            assert np.array_equal(dbm.canonical(once), once)
        assert closed > 20

    def test_constrain_first_matches_full_closure(self):
        m = dbm.box([TimeInterval.closed(0, 4), TimeInterval.closed(1, 2),
                     TimeInterval.closed(2, 6)], 1)
        constrained = dbm.constrain_first(m, 1, strict={3})
        reference = m.copy()
        reference[1, 2] = min(reference[1, 2], dbm.LE_ZERO)
        reference[1, 3] = min(reference[1, 3], dbm.LT_ZERO)
        assert np.array_equal(constrained, dbm.canonical(reference))
        assert dbm.delay_range(constrained, 1, 1) == (0, False, 2, False)

    def test_constrain_first_detects_infeasibility(self):
        m = dbm.box([TimeInterval.closed(3, 4), TimeInterval.closed(0, 1)], 1)
        assert not dbm.firable_first(m)[0]
        assert dbm.constrain_first(m, 1) is None


class TestClasses:

    def test_initial_class(self):
        tts = tts_of(SMALL_CYCLE)
        c = initial_class(tts)
        assert c.discrete == ("s0",)
        assert c.domain.enabled == (0,)
        assert c.domain.delay(0) == (1, False, 2, False)

    def test_persistent_transition_keeps_its_clock(self):
        tts = tts_of(TWO_WAITS)
        c = initial_class(tts)
        assert firable(tts, c) == frozenset({1})
        with pytest.raises(NotFirable):
            successor(tts, c, 0)
        (after,) = successor(tts, c, 1)
        assert after.domain.enabled == (0,)
        assert after.domain.delay(0) == (Fraction(2), False, Fraction(2), False)

    def test_point_priority_prunes(self):
        tts = compile_program(choice_program(priority=True))
        assert firable(tts, initial_class(tts)) == frozenset({0})

    def test_point_dominator_leaves_an_earlier_window(self):
        # b in [0,2] may still fire strictly before a, due at 1
        text = CHOICE_TEXT.format(priority="priority a > b").replace(
            "port a, b : none in [0,0]", "port a : none in [1,1], b : none in [0,2]")
        tts = tts_of(text)
        assert firable(tts, initial_class(tts)) == frozenset({0, 1})
        (after,) = successor(tts, initial_class(tts), 1)
        assert after.discrete == ("s1",)

    def test_removing_a_priority_never_shrinks_firable_sets(self):
        for seed in range(12):
            tts = random_tts(seeded(seed), priority_ratio=0.6)
            try:
                classes = build_graph(tts, max_classes=500).classes
            except LimitExceeded as e:
                classes = e.graph.classes
            for pair in tts.priorities:
                rest = [p for p in tts.priorities if p != pair]
                relaxed = TimedTransitionSystem(tts.variables, tts.transitions, rest,
                                                tts.instances)
                for c in classes:
                    assert firable(tts, c) <= firable(relaxed, c), (seed, pair)


class TestGraph:

    def test_small_cycle(self):
        graph = build_graph(tts_of(SMALL_CYCLE))
        assert graph.complete
        assert (graph.stats.classes, graph.stats.edges, graph.stats.dead) == (2, 2, 0)
        assert graph.reachable_states() == {("s0",), ("s1",)}

    def test_dead_class(self):
        text = SMALL_CYCLE.replace("  from s1 a; to s0\n", "")
        graph = build_graph(tts_of(text))
        assert (len(graph), len(graph.edges)) == (2, 1)
        assert graph.dead == {1}
        assert "class 1 dead" in graph.dump()

    def test_two_waits(self):
        graph = build_graph(tts_of(TWO_WAITS))
        assert (len(graph), len(graph.edges)) == (3, 2)
        assert graph.dead == {2}
        assert [tid for _, tid, _ in graph.edges] == [1, 0]

    def test_priority_against_free_choice(self):
        pruned = build_graph(compile_program(choice_program(priority=True)))
        free = build_graph(compile_program(choice_program(priority=False)))
        assert (len(pruned), len(pruned.edges)) == (2, 1)
        assert pruned.edges[0][1] == 0
        assert (len(free), len(free.edges)) == (2, 2)

    def test_periodic_has_no_deadlock(self, periodic):
        graph = build_graph(compile_program(periodic))
        assert graph.complete
        assert graph.stats.dead == 0
        assert graph.stats.classes > 2

    def test_threads_reproduce_the_sequential_numbering(self, periodic):
        tts = compile_program(periodic)
        sequential = build_graph(tts, threads=1)
        parallel = build_graph(tts, threads=4)
        assert parallel.edges == sequential.edges
        assert parallel.dump() == sequential.dump()

    def test_class_limit(self):
        with pytest.raises(LimitExceeded) as info:
            build_graph(tts_of(SMALL_CYCLE), max_classes=1)
        assert info.value.limit == "max_classes"
        assert info.value.graph.stats.classes == 2
        assert not info.value.graph.complete


class TestScale:

    @pytest.mark.slow
    def test_hundred_thousand_classes_within_two_minutes(self):
        for count in range(1, 17):
            program = build_tasksystem(synthetic_tasks(count, seed=1), INTERVAL)
            graph = build_graph(compile_program(program), max_classes=10 ** 7, time_budget=120)
            if graph.stats.classes > 100_000:
                break
        assert graph.complete
        assert graph.stats.classes > 100_000
        assert graph.stats.wall_time < 120
        assert graph.stats.peak_rss_kb < 1_048_576
