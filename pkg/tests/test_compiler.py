"""Compilation of programs into timed transition systems"""

import pytest

from conftest import SMALL_CYCLE
from tempock.errors import DomainOverflow, NotEnabled
from tempock.fiacre.ast import TimeInterval
from tempock.fiacre.parser import parse_program
from tempock.tts.compiler import compile_program


class TestSmallCycle:

    def test_transitions(self):
        tts = compile_program(parse_program(SMALL_CYCLE))
        assert [t.event for t in tts.transitions] == [None, "main:a"]
        assert tts.transitions[0].interval == TimeInterval.closed(1, 2)
        assert tts.transitions[1].interval == TimeInterval.point(0)
        assert tts.variables[0].domain == ("s0", "s1")
        assert tts.initial == ("s0",)

    def test_fire(self):
        tts = compile_program(parse_program(SMALL_CYCLE))
        assert tts.enabled(tts.initial) == frozenset({0})
        assert tts.fire(tts.initial, 0) == frozenset({("s1",)})
        with pytest.raises(NotEnabled):
            tts.fire(tts.initial, 1)


class TestPeriodic:

    def test_segments_and_locations(self, periodic):
        tts = compile_program(periodic)
        events = [t.event for t in tts.transitions]
        assert len(events) == 7
        assert events.count("main:d") == 2
        assert events.count("main:dl") == 2
        assert events.count("main:c") == 1
        assert events.count("main:w") == 1
        assert events.count(None) == 1
        domain = tts.variables[tts.index["main/1#loc"]].domain
        assert set(domain) == {"#init", "s0", "sched_error", "s0~1", "s0~2"}
        assert tts.initial[tts.index["main/1#loc"]] == "#init"

    def test_priorities(self, periodic):
        tts = compile_program(periodic)
        by_event = {}
        for t in tts.transitions:
            by_event.setdefault(t.event, []).append(t.id)
        # c > dl > d on ports plus the unless branch over both plain branches of s0
        assert len(tts.priorities) == 8
        (error,) = by_event[None]
        for plain in by_event["main:c"] + by_event["main:w"]:
            assert tts.dominates(error, plain)
        for d in by_event["main:d"]:
            assert tts.dominates(by_event["main:c"][0], d)

    def test_deadline_splits_on_the_tested_value(self, periodic):
        tts = compile_program(periodic)
        deadlines = [t for t in tts.transitions if t.event == "main:dl"]
        assert deadlines[0].guard != deadlines[1].guard

    def test_dump_is_stable(self, periodic):
        first = compile_program(periodic).dump()
        assert first == compile_program(periodic).dump()
        assert first.count("\nprio ") == 8

    def test_unrolling_bound(self, periodic):
        with pytest.raises(DomainOverflow):
            compile_program(periodic, max_transitions=3)


class TestVariables:

    def test_updates_and_choices(self):
        program = parse_program("""
process p is
  states s0, s1
  var x : 0..3 := 1
  from s0 x := any in 2..3; to s1

component main is
  par p end

main
""")
        tts = compile_program(program)
        slot = tts.index["main/1.x"]
        assert tts.initial[slot] == 1
        targets = {state[slot] for state in tts.fire(tts.initial, 0)}
        assert targets == {2, 3}
