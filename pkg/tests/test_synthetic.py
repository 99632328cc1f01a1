"""Seeded model generators"""

from tempock.library.synthetic import PERIODS, random_tts, seeded, synthetic_tasks
from tempock.library.tasks import INTERVAL, build_tasksystem


class TestRandomModels:

    def test_same_seed_same_model(self):
        first = random_tts(seeded(3))
        second = random_tts(seeded(3))
        assert first.dump() == second.dump()

    def test_shape(self):
        tts = random_tts(seeded(3), processes=3, locations=2, transitions=2)
        assert len(tts.transitions) == 6
        assert tts.instances == ("p0", "p1", "p2")
        assert tts.priorities == ()
        for t in tts.transitions:
            assert not t.interval.has_strict_bound
            assert t.interval.lower.denominator == 1

    def test_bounds_stay_within_max_bound(self):
        tts = random_tts(seeded(4), transitions=6, max_bound=4, unbounded_ratio=0)
        for t in tts.transitions:
            assert 0 <= t.interval.lower <= t.interval.upper <= 4

    def test_open_bounds_and_priorities(self):
        tts = random_tts(seeded(4), transitions=6, strict_ratio=1.0, priority_ratio=1.0,
                         unbounded_ratio=0)
        assert tts.priorities
        assert any(t.interval.has_strict_bound for t in tts.transitions)
        for t in tts.transitions:
            assert not t.interval.is_empty
            assert t.interval.has_strict_bound != (t.interval.lower == t.interval.upper)
        for hi, lo in tts.priorities:
            assert not tts.dominates(lo, hi)


class TestSyntheticTasks:

    def test_table(self):
        tasks = synthetic_tasks(6, seed=1)
        assert [t.period for t in tasks] == list(PERIODS) * 2
        assert [t.priority for t in tasks] == [1, 2, 3, 4, 5, 6]
        for task in tasks:
            assert task.validate() is task
            assert task.bcet == 0 < task.wcet
            assert 0 <= task.offset < task.period

    def test_seed_is_reproducible(self):
        assert synthetic_tasks(4, seed=9) == synthetic_tasks(4, seed=9)

    def test_builds_a_task_system(self):
        program = build_tasksystem(synthetic_tasks(2, seed=1), INTERVAL)
        assert program.root_name == "main"
        assert program.process("scheduler") is not None
