#!/usr/bin/python3
"""The periodic thread controller and its proof obligations.

A controller instance is checked in isolation, closed by an environment
that dispatches and completes jobs at arbitrary times. P2 and P3 do not
depend on the period, so they are checked on a T=1 copy only.
"""

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from tempock import settings
from tempock.errors import NotALibraryComponent, PreconditionViolation
from tempock.fiacre import ast
from tempock.fiacre.instances import InstanceTree
from tempock.fiacre.parser import parse_program, parse_property
from tempock.props.checker import check_property
from tempock.tts.compiler import compile_program

logger = logging.getLogger(__name__)

PERIODIC = "periodic"
SCHEDULER = "scheduler"
EXECUTOR = "executor"

PERIODIC_PROCESS = """\
process periodic [d, c, dl, w : none] is
  states s0, sched_error
  var st : union p_idle | p_rdy | p_err end := p_idle
  init d; to s0
  from s0
    select
      on st = p_idle; c; st := p_rdy; loop
    [] w; dl;
       if st = p_rdy then st := p_idle else st := p_err end;
       d; loop
    unless
      on st = p_err; wait [0,0]; to sched_error
    end
"""

ENVIRONMENT_PROCESS = """\
process env [d, c : none] is
  states idle, busy, done
  from idle d; to busy
  from busy select wait [0,...[; to done [] d; to busy end
  from done select c; to idle [] d; to busy end
"""

OBLIGATIONS = (
    ("P0a", "ltl [] ((t/event d and ((not t/event c) until t/event dl))"
            " => <> t/state sched_error)"),
    ("P0b", "ltl (([] ((t/event d => ((not t/event dl) until t/event c))))"
            " => [] (not (t/state sched_error)))"),
    ("P1", "t/event c leadsto ((t/value (st=p_rdy)) or t/state sched_error) within [0,0]"),
    ("P2", "(t/event dl leadsto (t/event dl or t/state sched_error) within [1,1])"),
    ("P3", "(t/event dl or t/start) leadsto (t/event dl or t/state sched_error) within [1,1]"),
    ("P4", "t/event dl leadsto t/event d within [0,0]"),
)
UNIT_PERIOD = ("P2", "P3")


def _bound(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


def periodic_source(name="main", period=20, instances=1, environment=False) -> str:
    """Source text of the controller composed ``instances`` times in a root component"""
    period = Fraction(period)
    if period <= 0:
        raise PreconditionViolation("the period must be positive, got {}".format(period))
    if instances < 1:
        raise PreconditionViolation("at least one instance is needed")
    suffixes = [""] if instances == 1 else [str(k) for k in range(1, instances + 1)]
    ports, fast, priorities, members = [], [], [], []
    for s in suffixes:
        d, c, dl, w = ("{}{}".format(p, s) for p in ("d", "c", "dl", "w"))
        fast.extend((d, c, dl))
        ports.append("{} : none in [{},{}]".format(w, _bound(period), _bound(period)))
        priorities.append("{} > {} > {}".format(c, dl, d))
        members.append("periodic [{}, {}, {}, {}]".format(d, c, dl, w))
        if environment:
            members.append("env [{}, {}]".format(d, c))
    lines = [PERIODIC_PROCESS]
    if environment:
        lines.append(ENVIRONMENT_PROCESS)
    lines.append("component {} is".format(name))
    lines.append("  port {} : none in [0,0], {}".format(", ".join(fast), ", ".join(ports)))
    lines.append("  priority {}".format(", ".join(priorities)))
    lines.append("  par {} end".format("\n   || ".join(members)))
    lines.append("")
    lines.append(name)
    return "\n".join(lines) + "\n"


def instantiate_periodic(name="main", period=20, instances=1) -> ast.Program:
    """Program composing the controller ``instances`` times under the root ``name``"""
    return parse_program(periodic_source(name, period, instances), "<periodic>")


def _library_instance(tree: InstanceTree, path: str):
    inst = tree.process_at(tree.lookup(path.split("/")))
    if inst is None or inst.process.name not in (PERIODIC, SCHEDULER):
        raise NotALibraryComponent("'{}' is not an instance of a library component".format(path))
    return inst


def _declare(ident, text, path, constants=None) -> ast.PropertyDecl:
    body = re.sub(r"\bt/", path + "/", text)
    return parse_property("property {} is {}".format(ident, body), constants)


def obligations_for(program: ast.Program, path: str) -> list:
    """(id, property) pairs owed by the library instance at ``path``"""
    tree = InstanceTree(program)
    inst = _library_instance(tree, path)
    if inst.process.name == SCHEDULER:
        return scheduler_obligations(tree, inst)
    return [(ident, _declare(ident, text, inst.path)) for ident, text in OBLIGATIONS]


def scheduler_obligations(tree: InstanceTree, inst) -> list:
    """Deadlock freedom, mutual exclusion of executors and work conservation"""
    executors = [p.path for p in tree.processes if p.process.name == EXECUTOR]
    pairs = ["({}/state run and {}/state run)".format(a, b)
             for i, a in enumerate(executors) for b in executors[i + 1:]]
    exclusion = "ltl [] not ({})".format(" or ".join(pairs)) if pairs else "ltl [] true"
    ready = [v.name for v in inst.process.locals if v.name.startswith("rdy")]
    pending = " or ".join(ready) if ready else "false"
    conserving = ("({0}/value (not busy and ({1}))) leadsto ({0}/value (busy))"
                  " within [0,0]".format(inst.path, pending))
    texts = (("S0", "NoGlobalDeadlock"), ("S1", exclusion), ("S2", conserving))
    return [(ident, parse_property("property {} is {}".format(ident, text)))
            for ident, text in texts]


@dataclass
class InstanceObligations:
    path: str
    component: str
    verdicts: dict = field(default_factory=dict)  # obligation id -> Verdict

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts.values())

    def to_dict(self):
        return {"instance": self.path, "component": self.component,
                "obligations": {k: v.to_dict() for k, v in self.verdicts.items()}}


@dataclass
class ObligationReport:
    instances: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(i.holds for i in self.instances)

    @property
    def violated(self) -> bool:
        return any(v.violated for i in self.instances for v in i.verdicts.values())

    def to_dict(self):
        return {"holds": self.holds, "instances": [i.to_dict() for i in self.instances]}

    def to_text(self) -> str:
        lines = []
        for entry in self.instances:
            for ident, verdict in entry.verdicts.items():
                lines.append("{:<12} {:<4} {:<10} {:>8} classes  {:.3f}s".format(
                    entry.path, ident, verdict.status.upper(), verdict.classes,
                    verdict.wall_time))
        return "\n".join(lines)


def _period_of(tree: InstanceTree, inst) -> Fraction:
    return tree.ports[inst.ports["w"]].interval.lower


def _check_controller(path, period, limits) -> InstanceObligations:
    entry = InstanceObligations(path, PERIODIC)
    models = {}
    for ident, text in OBLIGATIONS:
        local = 1 if ident in UNIT_PERIOD else period
        if local not in models:
            program = parse_program(periodic_source("main", local, environment=True),
                                    "<obligations>")
            models[local] = (program, compile_program(program))
        program, tts = models[local]
        decl = _declare(ident, text, "main/1")
        entry.verdicts[ident] = check_property(program, decl.body, tts=tts, **limits)
        logger.info("%s %s: %s", path, ident, entry.verdicts[ident].status)
    return entry


def _check_scheduler(program, tree, inst, limits) -> InstanceObligations:
    entry = InstanceObligations(inst.path, SCHEDULER)
    tts = compile_program(program)
    for ident, decl in scheduler_obligations(tree, inst):
        entry.verdicts[ident] = check_property(program, decl.body, tts=tts, tree=tree, **limits)
    return entry


def check_obligations(program: ast.Program, max_classes=None, time_budget=None,
                      threads=None) -> ObligationReport:
    """Checks the obligations of every library instance of the root component"""
    tree = InstanceTree(program)
    limits = {"max_classes": max_classes, "time_budget": time_budget}
    jobs = []
    for inst in tree.processes:
        if inst.process.name == PERIODIC:
            jobs.append(lambda inst=inst: _check_controller(
                inst.path, _period_of(tree, inst), limits))
        elif inst.process.name == SCHEDULER:
            jobs.append(lambda inst=inst: _check_scheduler(program, tree, inst, limits))
    threads = threads or settings.THREADS
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            entries = list(pool.map(lambda job: job(), jobs))
    else:
        entries = [job() for job in jobs]
    return ObligationReport(entries)
