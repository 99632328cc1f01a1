"""Library components: the periodic controller and fixed-priority task systems"""

import pytest

from conftest import data_file
from tempock.errors import InvalidTaskSpec, NotALibraryComponent, PreconditionViolation
from tempock.fiacre.instances import InstanceTree
from tempock.fiacre.wellformed import ensure_wellformed
from tempock.library.periodic import (OBLIGATIONS, check_obligations, instantiate_periodic,
                                      obligations_for, periodic_source)
from tempock.library.tasks import (DETERMINISTIC, INTERVAL, TaskSpec, build_tasksystem,
                                   check_tasks, controllers, parse_task_table)


def read_table(name):
    with open(data_file("tasks", name), encoding="UTF-8") as f:
        return parse_task_table(f.read())


class TestPeriodic:

    def test_preconditions(self):
        with pytest.raises(PreconditionViolation):
            periodic_source(period=0)
        with pytest.raises(PreconditionViolation):
            periodic_source(instances=0)

    def test_fractional_period(self):
        assert "w : none in [5/2,5/2]" in periodic_source(period="5/2")

    def test_instances_share_the_root(self):
        program = instantiate_periodic("sys", period=10, instances=2)
        ensure_wellformed(program)
        tree = InstanceTree(program)
        assert [p.path for p in tree.processes] == ["sys/1", "sys/2"]
        assert tree.ports["sys:w2"].interval.upper == 10
        assert ("sys:c1", "sys:dl1") in tree.priorities

    def test_obligation_ids(self):
        program = instantiate_periodic(instances=2)
        owed = obligations_for(program, "main/2")
        assert [ident for ident, _ in owed] == [ident for ident, _ in OBLIGATIONS]
        assert [ident for ident, _ in owed] == ["P0a", "P0b", "P1", "P2", "P3", "P4"]

    def test_task_controller_is_not_a_library_instance(self):
        program = build_tasksystem(read_table("single_task.txt"))
        with pytest.raises(NotALibraryComponent):
            obligations_for(program, "main/1")

    @pytest.mark.slow
    def test_obligations_hold(self):
        report = check_obligations(instantiate_periodic())
        assert report.holds
        (entry,) = report.instances
        assert entry.path == "main/1"
        assert len(entry.verdicts) == 6
        assert len(report.to_text().splitlines()) == 6


class TestTaskTable:

    def test_three_tasks(self):
        tasks = read_table("three_tasks.txt")
        assert [t.name for t in tasks] == ["Task1", "Task2", "Task3"]
        assert tasks[1] == TaskSpec("Task2", 20, 3, 10, 2, 2, 2)

    def test_wcet_over_deadline(self):
        with pytest.raises(InvalidTaskSpec, match="exceeds the deadline"):
            read_table("wcet_over_deadline.txt")

    @pytest.mark.parametrize("text, message", [
        ("", "empty"),
        ("a 10 0 10 1 2", "expected 7 fields"),
        ("a 10 0 10 1 x 3", "integers"),
        ("main 10 0 10 1 2 3", "usable task name"),
        ("a 10 10 10 1 2 3", "offset"),
        ("a 10 0 10 1 2 3\na 10 0 10 2 2 3", "names must be distinct"),
        ("a 10 0 10 1 2 3\nb 10 0 10 1 2 3", "priorities must be distinct"),
    ])
    def test_rejected_tables(self, text, message):
        with pytest.raises(InvalidTaskSpec, match=message):
            parse_task_table(text)

    def test_execution_time_modes(self):
        task = TaskSpec("a", 10, 0, 10, 1, 2, 3)
        assert task.execution_time(DETERMINISTIC) == "[3,3]"
        assert task.execution_time(INTERVAL) == "[2,3]"


class TestSchedulability:

    def test_single_task(self):
        results = check_tasks(read_table("single_task.txt"))
        assert all(r.schedulable for r in results.values())
        assert results[DETERMINISTIC].label() == "SCHEDULABLE"

    def test_early_completion_delays_a_later_release(self):
        results = check_tasks(read_table("three_tasks.txt"))
        assert results[DETERMINISTIC].schedulable
        interval = results[INTERVAL]
        assert interval.label() == "NOT SCHEDULABLE"
        assert interval.missed == "Task2"
        assert interval.to_dict()["check"]["counterexample"] is not None

    def test_controllers_are_named_by_label(self):
        program = build_tasksystem(read_table("three_tasks.txt"))
        assert sorted(controllers(InstanceTree(program)).values()) == ["Task1", "Task2", "Task3"]

    def test_scheduler_obligations(self):
        program = build_tasksystem(read_table("three_tasks.txt"), DETERMINISTIC)
        report = check_obligations(program)
        (entry,) = report.instances
        assert entry.component == "scheduler"
        assert list(entry.verdicts) == ["S0", "S1", "S2"]
        assert report.holds
