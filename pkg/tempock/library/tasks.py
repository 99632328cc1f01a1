#!/usr/bin/python3
"""Periodic task systems on one processor with non-preemptive fixed priorities.

Each task gets a controller (dispatch with offset, deadline, period) and an
executor; a single scheduler grants the processor to the highest-priority
ready task whenever it is idle. Every controller port outranks every grant,
so releases due at an instant are seen before the grant of that instant.
"""

import logging
import re
from dataclasses import dataclass
from typing import Optional

from tempock.errors import InvalidTaskSpec
from tempock.fiacre import ast
from tempock.fiacre.instances import InstanceTree
from tempock.fiacre.parser import parse_program, parse_property
from tempock.props.checker import Verdict, check_property
from tempock.tts.compiler import compile_program

logger = logging.getLogger(__name__)

CONTROLLER = "task"
DETERMINISTIC = "wcet"
INTERVAL = "interval"
ET_MODES = (DETERMINISTIC, INTERVAL)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_RESERVED = {"sched", "main", "task", "executor", "scheduler"}

CONTROLLER_PROCESS = """\
process task [o, d, c, dl, w : none] is
  states boot, s0, s1, sched_error
  var st : union p_idle | p_rdy end := p_idle
  from boot o; d; to s0
  from s0
    select
      on st = p_idle; c; st := p_rdy; loop
    [] dl; to s1
    end
  from s1
    select
      on st = p_rdy; w; st := p_idle; d; to s0
    [] on st = p_idle; wait [0,0]; to sched_error
    end
"""

EXECUTOR_PROCESS = """\
process executor [g, x, c : none] is
  states idle, run, fin
  from idle g; to run
  from run x; to fin
  from fin c; to idle
"""


@dataclass(frozen=True)
class TaskSpec:
    """One row of a task table, in milliseconds; priority 1 is the highest"""

    name: str
    period: int
    offset: int
    deadline: int
    priority: int
    bcet: int
    wcet: int

    def validate(self):
        problems = []
        if not _NAME.match(self.name) or self.name in _RESERVED:
            problems.append("'{}' is not a usable task name".format(self.name))
        if self.period <= 0:
            problems.append("period must be positive")
        if not 0 <= self.offset < self.period:
            problems.append("offset must lie in [0, period)")
        if not 0 < self.deadline <= self.period:
            problems.append("deadline must lie in (0, period]")
        if not 0 <= self.bcet <= self.wcet:
            problems.append("bcet..wcet must satisfy 0 <= bcet <= wcet")
        if self.wcet > self.deadline:
            problems.append("wcet {} exceeds the deadline {}".format(self.wcet, self.deadline))
        if problems:
            raise InvalidTaskSpec("task {}: {}".format(self.name, "; ".join(problems)))
        return self

    def execution_time(self, mode) -> str:
        lower = self.wcet if mode == DETERMINISTIC else self.bcet
        return "[{},{}]".format(lower, self.wcet)


def parse_task_table(text: str) -> list[TaskSpec]:
    """Rows ``name period offset deadline priority bcet wcet``; '#' starts a comment"""
    tasks = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 7:
            raise InvalidTaskSpec("line {}: expected 7 fields, found {}".format(
                number, len(fields)))
        try:
            values = [int(f) for f in fields[1:]]
        except ValueError:
            raise InvalidTaskSpec("line {}: task parameters must be integers".format(number))
        tasks.append(TaskSpec(fields[0], *values).validate())
    _check_table(tasks)
    return tasks


def _check_table(tasks):
    if not tasks:
        raise InvalidTaskSpec("the task table is empty")
    names = [t.name for t in tasks]
    if len(set(names)) != len(names):
        raise InvalidTaskSpec("task names must be distinct")
    priorities = [t.priority for t in tasks]
    if len(set(priorities)) != len(priorities):
        raise InvalidTaskSpec("task priorities must be distinct")


def _scheduler_process(count) -> str:
    ports = ", ".join("d{0}, g{0}, c{0}".format(k) for k in range(1, count + 1))
    flags = ", ".join("rdy{}".format(k) for k in range(1, count + 1))
    branches = []
    # grant guards follow priority order; k indexes tasks by decreasing priority
    for k in range(1, count + 1):
        above = "".join(" and not rdy{}".format(j) for j in range(1, k))
        branches.append("d{0}; rdy{0} := true; loop".format(k))
        branches.append("on not busy and rdy{0}{1}; g{0}; rdy{0} := false; busy := true; loop"
                        .format(k, above))
        branches.append("c{0}; busy := false; loop".format(k))
    return ("process scheduler [{} : none] is\n"
            "  states s\n"
            "  var busy, {} : bool := false\n"
            "  from s\n"
            "    select\n"
            "      {}\n"
            "    end\n").format(ports, flags, "\n    [] ".join(branches))


def tasksystem_source(tasks: list[TaskSpec], mode: str = DETERMINISTIC) -> str:
    if mode not in ET_MODES:
        raise InvalidTaskSpec("unknown execution-time mode '{}'".format(mode))
    for task in tasks:
        task.validate()
    _check_table(tasks)
    ranked = sorted(tasks, key=lambda t: t.priority)
    ports, priorities, members = [], [], []
    grants = ["g{}".format(k) for k in range(1, len(ranked) + 1)]
    for k, task in enumerate(ranked, start=1):
        o, d, c, dl, w, x = ("{}{}".format(p, k) for p in ("o", "d", "c", "dl", "w", "x"))
        ports.extend(["{} : none in [{},{}]".format(o, task.offset, task.offset),
                      "{}, {}, g{} : none in [0,0]".format(d, c, k),
                      "{} : none in [{},{}]".format(dl, task.deadline, task.deadline),
                      "{0} : none in [{1},{1}]".format(w, task.period - task.deadline),
                      "{} : none in {}".format(x, task.execution_time(mode))])
        priorities.append("{} > {}".format(c, dl))
        for port in (o, d, c, dl, w):
            priorities.extend("{} > {}".format(port, g) for g in grants)
        members.append("{}: task [{}, {}, {}, {}, {}]".format(task.name, o, d, c, dl, w))
        members.append("{}_exec: executor [g{}, {}, {}]".format(task.name, k, x, c))
    members.append("sched: scheduler [{}]".format(
        ", ".join("d{0}, g{0}, c{0}".format(k) for k in range(1, len(ranked) + 1))))
    lines = [CONTROLLER_PROCESS, EXECUTOR_PROCESS, _scheduler_process(len(ranked)),
             "component main is",
             "  port {}".format(",\n       ".join(ports)),
             "  priority {}".format(", ".join(priorities)),
             "  par {} end".format("\n   || ".join(members)),
             "",
             "main"]
    return "\n".join(lines) + "\n"


def build_tasksystem(tasks: list[TaskSpec], mode: str = DETERMINISTIC) -> ast.Program:
    """Program of the task system with exact (wcet) or interval execution times"""
    return parse_program(tasksystem_source(tasks, mode), "<tasks:{}>".format(mode))


@dataclass
class Schedulability:
    mode: Optional[str]
    verdict: Verdict
    missed: Optional[str] = None  # first task whose controller reaches sched_error

    @property
    def schedulable(self) -> bool:
        return self.verdict.holds

    def label(self) -> str:
        if self.verdict.holds:
            return "SCHEDULABLE"
        if self.verdict.violated:
            return "NOT SCHEDULABLE"
        return "INCONCLUSIVE"

    def to_dict(self):
        return {"mode": self.mode, "schedulable": self.schedulable, "verdict": self.label(),
                "missed": self.missed, "check": self.verdict.to_dict()}


def controllers(tree: InstanceTree) -> dict:
    """Task name of every controller instance, keyed by instance path"""
    named = {}
    for inst in tree.processes:
        if inst.process.name == CONTROLLER:
            named[inst.path] = inst.labels[0].rpartition("/")[2] if inst.labels else inst.path
    return named


def check_schedulable(program: ast.Program, mode: Optional[str] = None, max_classes=None,
                      time_budget=None, threads=None) -> Schedulability:
    """Unreachability of every controller's error state"""
    tree = InstanceTree(program)
    named = controllers(tree)
    if not named:
        raise InvalidTaskSpec("the program holds no task controller")
    tts = compile_program(program)
    target = " or ".join("{}/state sched_error".format(path) for path in named)
    decl = parse_property("property schedulable is Unreachable ({})".format(target))
    verdict = check_property(program, decl.body, tts=tts, tree=tree, max_classes=max_classes,
                             time_budget=time_budget, threads=threads)
    result = Schedulability(mode, verdict)
    if verdict.violated and verdict.counterexample is not None:
        result.missed = _first_miss(tts, named, verdict.counterexample)
        logger.info("%s misses its deadline", result.missed)
    return result


def _first_miss(tts, named, counterexample) -> Optional[str]:
    for step in counterexample.steps:
        for path, name in named.items():
            if step.target_state[tts.index[path + "#loc"]] == "sched_error":
                return name
    return None


def check_tasks(tasks: list[TaskSpec], **limits) -> dict:
    """Both execution-time readings of a task table"""
    return {mode: check_schedulable(build_tasksystem(tasks, mode), mode, **limits)
            for mode in ET_MODES}
