"""Command line behaviour: outputs, exit codes and archiving"""

import json

import pytest

from conftest import SMALL_CYCLE, data_file, with_property
from tempock.cli import main
from tempock.models.check_run import CheckRun

EARLY = "property early is (main/1/event d) leadsto (main/1/event c) within [1; 2]"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def write(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="UTF-8")
        return str(path)
    return write


class TestCheck:

    def test_all_properties_hold(self, capsys, periodic_path):
        code, out, _ = run(capsys, "check", periodic_path)
        assert code == 0
        rows = [line for line in out.splitlines() if line.startswith("req")]
        assert [line.split()[:2] for line in rows] == [
            ["req1", "HOLDS"], ["req2", "HOLDS"], ["req3", "HOLDS"], ["req4", "HOLDS"]]
        assert "totals: 4 holds, 0 violated, 0 exhausted, 0 errors" in out

    def test_single_property_as_json(self, capsys, periodic_path):
        code, out, _ = run(capsys, "check", "--prop", "req3", "--format", "json", periodic_path)
        report = json.loads(out)
        assert code == 0
        assert report["status"] == "holds"
        assert [p["name"] for p in report["properties"]] == ["req3"]

    def test_unknown_property(self, capsys, periodic_path):
        code, _, err = run(capsys, "check", "--prop", "nope", periodic_path)
        assert code == 64
        assert "UsageError" in err

    def test_class_limit(self, capsys, periodic_path):
        code, out, _ = run(capsys, "check", "--max-classes", "1", "--format", "json",
                           periodic_path)
        report = json.loads(out)
        assert code == 2
        assert report["totals"]["exhausted"] == 4
        assert len(report["limits_hit"]) == 4
        assert {p["status"] for p in report["properties"]} == {"exhausted"}

    def test_violation_with_replay(self, capsys, periodic_text, write):
        path = write("early.fcr", with_property(periodic_text, EARLY))
        code, out, _ = run(capsys, "check", "--prop", "early", "--replay", path)
        assert code == 1
        assert out.startswith("early")
        assert "VIOLATED" in out
        assert "replay: realised at granularity" in out

    def test_text_and_json_agree(self, capsys, periodic_text, write):
        path = write("early.fcr", with_property(periodic_text, EARLY))
        _, text, _ = run(capsys, "check", path)
        _, payload, _ = run(capsys, "check", "--format", "json", path)
        statuses = [(p["name"], p["status"].upper()) for p in json.loads(payload)["properties"]]
        rows = [tuple(line.split()[:2]) for line in text.splitlines()
                if line.split() and line.split()[0] in dict(statuses)]
        assert rows == statuses

    def test_reports_without_times_are_reproducible(self, capsys, periodic_path):
        argv = ("check", "--no-times", "--format", "json", periodic_path)
        first = run(capsys, *argv)[1]
        assert first == run(capsys, *argv)[1]
        assert "wall_time" not in first

    def test_ill_formed_input(self, capsys, write):
        code, _, err = run(capsys, "check", write("empty.fcr", ""))
        assert code == 65
        assert "IllFormedProgram" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "check", str(tmp_path / "absent.fcr"))
        assert code == 65
        assert "UnreadableInput" in err

    def test_missing_input_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["check"])
        assert info.value.code == 64

    def test_archive(self, capsys, storage, periodic_path):
        code, _, _ = run(capsys, "check", "--prop", "req4", "--archive", periodic_path)
        assert code == 0
        (stored,) = storage.all(CheckRun).values()
        assert stored.status == "holds"
        assert stored.payload["properties"][0]["name"] == "req4"


class TestOtherCommands:

    def test_sched(self, capsys):
        code, out, _ = run(capsys, "sched", data_file("tasks", "three_tasks.txt"))
        assert code == 1
        lines = out.splitlines()
        assert lines[0] == "WCET-exact: SCHEDULABLE / Interval: NOT SCHEDULABLE"
        assert "Interval: Task2 misses its deadline" in lines

    def test_sched_rejects_a_bad_table(self, capsys):
        code, _, err = run(capsys, "sched", data_file("tasks", "wcet_over_deadline.txt"))
        assert code == 65
        assert "InvalidTaskSpec" in err

    def test_explore(self, capsys, write):
        code, out, _ = run(capsys, "explore", "--no-times", write("cycle.fcr", SMALL_CYCLE))
        assert code == 0
        assert out.endswith("cycle.fcr: 2 classes, 2 edges, 0 dead\n")

    def test_explore_synthetic_tasks(self, capsys):
        code, out, _ = run(capsys, "explore", "--tasks", "2", "--seed", "1")
        assert code == 0
        assert out.startswith("synthetic:2: ")

    def test_explore_needs_something(self, capsys):
        code, _, _ = run(capsys, "explore")
        assert code == 64

    def test_oracle_match(self, capsys, write):
        code, out, _ = run(capsys, "oracle", write("cycle.fcr", SMALL_CYCLE))
        assert code == 0
        assert out.strip().endswith("MATCH")

    def test_oracle_suggests_a_granularity(self, capsys, write):
        path = write("half.fcr", SMALL_CYCLE.replace("wait [1,2]", "wait [1/2,1]"))
        code, out, _ = run(capsys, "oracle", path)
        assert code == 2
        assert "INCONCLUSIVE" in out
        assert "retry with --granularity 1/2" in out
        assert run(capsys, "oracle", "--granularity", "1/2", path)[0] == 0

    def test_fmt(self, capsys, periodic_path):
        code, out, _ = run(capsys, "fmt", periodic_path)
        assert code == 0
        assert "component main is" in out
        assert "property req4 is absent (" in out
