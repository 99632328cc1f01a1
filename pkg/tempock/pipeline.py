#!/usr/bin/python3
"""Commands of the toolchain: parse, compile, explore, check and report.

Each command takes a resolved ``RunConfig`` and returns a report whose
``exit_code`` is the process status. Reports render as text or as JSON
(schema 1) with the same verdicts; ``times=False`` drops wall times and
memory figures so that single-threaded runs give identical bytes.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from tempock import settings
from tempock.errors import (EXIT_RUNTIME, GranularityMismatch, HorizonExceeded,
                            LimitExceeded, TempockError, UnreadableInput, UsageError)
from tempock.explorer.classes import GraphStats, build_graph
from tempock.explorer.oracle import compare, oracle_explore, replay
from tempock.fiacre import ast
from tempock.fiacre.instances import InstanceTree
from tempock.fiacre.parser import parse_file
from tempock.fiacre.printer import pretty_print
from tempock.fiacre.wellformed import ensure_wellformed
from tempock.library.periodic import ObligationReport, check_obligations
from tempock.library.synthetic import random_tts, seeded, synthetic_tasks
from tempock.library.tasks import (DETERMINISTIC, INTERVAL, build_tasksystem, check_tasks,
                                   parse_task_table)
from tempock.props.checker import EXHAUSTED, HOLDS, VIOLATED, Verdict, verify
from tempock.props.observers import compile_pattern
from tempock.tts.compiler import compile_program

logger = logging.getLogger(__name__)

COMMANDS = ("check", "explore", "sched", "oracle", "fmt", "obligations")
TEXT = "text"
JSON = "json"
FORMATS = (TEXT, JSON)
ERROR = "error"
INCONCLUSIVE = "inconclusive"
TIMING_KEYS = {"wall_time", "peak_rss_kb"}
MODE_LABELS = {DETERMINISTIC: "WCET-exact", INTERVAL: "Interval"}


@dataclass
class RunConfig:
    """Resolved options of one command run"""

    command: str
    inputs: tuple = ()
    prop: Optional[str] = None
    max_classes: Optional[int] = None
    time_budget: Optional[float] = None
    threads: Optional[int] = None
    output: str = TEXT
    granularity: Fraction = Fraction(1)
    replay: bool = False
    archive: bool = False
    tasks: Optional[int] = None
    seed: Optional[int] = None
    depth: int = 8
    times: bool = True

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise UsageError("unknown command '{}'".format(self.command))
        if self.output not in FORMATS:
            raise UsageError("unknown format '{}'".format(self.output))
        for name in ("max_classes", "time_budget", "threads", "tasks"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise UsageError("--{} must be positive".format(name.replace("_", "-")))
        if self.granularity <= 0:
            raise UsageError("--granularity must be positive")
        if self.depth < 0:
            raise UsageError("--depth must not be negative")
        needs_input = self.command in ("check", "sched", "fmt", "obligations")
        if needs_input and not self.inputs:
            raise UsageError("{} needs an input file".format(self.command))
        if self.command == "explore" and not self.inputs and self.tasks is None:
            raise UsageError("explore needs an input file or --tasks N")
        return self

    @property
    def limits(self) -> dict:
        return {"max_classes": self.max_classes, "time_budget": self.time_budget,
                "threads": self.threads}


def _strip_times(value):
    if isinstance(value, dict):
        return {k: _strip_times(v) for k, v in value.items() if k not in TIMING_KEYS}
    if isinstance(value, list):
        return [_strip_times(v) for v in value]
    return value


@dataclass
class Report:
    """What every command prints: a body, a status and an exit code"""

    command: str
    sources: list = field(default_factory=list)
    times: bool = True

    @property
    def status(self) -> str:
        raise NotImplementedError

    @property
    def exit_code(self) -> int:
        raise NotImplementedError

    def body(self) -> dict:
        return {}

    def lines(self) -> list:
        return []

    def to_dict(self) -> dict:
        payload = {"schema": settings.REPORT_SCHEMA, "command": self.command,
                   "sources": list(self.sources), "status": self.status,
                   "exit_code": self.exit_code}
        payload.update(self.body())
        return payload if self.times else _strip_times(payload)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def render(self, output=TEXT) -> str:
        return self.to_json() if output == JSON else self.to_text()

    def _seconds(self, value) -> str:
        return "  {:.3f}s".format(value) if self.times else ""


@dataclass
class PropertyRow:
    name: str
    verdict: Verdict
    replayed: Optional[str] = None

    @property
    def status(self) -> str:
        return self.verdict.status

    def to_dict(self):
        row = {"name": self.name, **self.verdict.to_dict()}
        if self.replayed is not None:
            row["replay"] = self.replayed
        return row


@dataclass
class CheckReport(Report):
    """One row per property in scope, in declaration order"""

    rows: list = field(default_factory=list)
    errors: list = field(default_factory=list)  # (property, message)

    @property
    def totals(self) -> dict:
        counts = {HOLDS: 0, VIOLATED: 0, EXHAUSTED: 0, ERROR: len(self.errors)}
        for row in self.rows:
            counts[row.status] += 1
        return counts

    @property
    def limits_hit(self) -> list:
        return [row.verdict.detail for row in self.rows if row.status == EXHAUSTED]

    @property
    def status(self) -> str:
        totals = self.totals
        if totals[VIOLATED]:
            return VIOLATED
        if totals[EXHAUSTED] or totals[ERROR]:
            return ERROR
        return HOLDS

    @property
    def exit_code(self) -> int:
        return {HOLDS: 0, VIOLATED: 1}.get(self.status, EXIT_RUNTIME)

    def body(self):
        return {"properties": [row.to_dict() for row in self.rows],
                "errors": [{"name": n, "message": m} for n, m in self.errors],
                "totals": self.totals, "limits_hit": self.limits_hit}

    def lines(self):
        out = []
        for row in self.rows:
            v = row.verdict
            out.append("{:<16} {:<10} {:>9} classes{}".format(
                row.name, v.status.upper(), v.classes, self._seconds(v.wall_time)))
            if v.detail:
                out.append("  " + v.detail)
            if v.counterexample is not None:
                out.extend("  " + line for line in v.counterexample.to_text().splitlines())
            if row.replayed is not None:
                out.append("  replay: {}".format(row.replayed))
        for name, message in self.errors:
            out.append("{:<16} {:<10} {}".format(name, ERROR.upper(), message))
        totals = self.totals
        out.append("totals: {} holds, {} violated, {} exhausted, {} errors".format(
            totals[HOLDS], totals[VIOLATED], totals[EXHAUSTED], totals[ERROR]))
        for limit in self.limits_hit:
            out.append("limit hit: {}".format(limit))
        return out


@dataclass
class ExploreReport(Report):
    entries: list = field(default_factory=list)  # (source, GraphStats, complete)

    @property
    def status(self) -> str:
        return "complete" if all(done for _, _, done in self.entries) else EXHAUSTED

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "complete" else EXIT_RUNTIME

    def body(self):
        return {"graphs": [{"source": s, "complete": done, **stats.to_dict()}
                           for s, stats, done in self.entries]}

    def lines(self):
        out = []
        for source, stats, done in self.entries:
            memory = "  peak {} kB".format(stats.peak_rss_kb) if self.times else ""
            out.append("{}: {} classes, {} edges, {} dead{}{}{}".format(
                source, stats.classes, stats.edges, stats.dead, memory,
                self._seconds(stats.wall_time), "" if done else "  (incomplete)"))
        return out


@dataclass
class SchedReport(Report):
    results: dict = field(default_factory=dict)  # mode -> Schedulability

    @property
    def status(self) -> str:
        if any(r.verdict.status == EXHAUSTED for r in self.results.values()):
            return ERROR
        return HOLDS if all(r.schedulable for r in self.results.values()) else VIOLATED

    @property
    def exit_code(self) -> int:
        return {HOLDS: 0, VIOLATED: 1}.get(self.status, EXIT_RUNTIME)

    def body(self):
        return {"modes": {mode: r.to_dict() for mode, r in self.results.items()}}

    def lines(self):
        out = [" / ".join("{}: {}".format(MODE_LABELS[mode], r.label())
                          for mode, r in self.results.items())]
        for mode, r in self.results.items():
            if r.missed is not None:
                out.append("{}: {} misses its deadline".format(MODE_LABELS[mode], r.missed))
            if r.verdict.counterexample is not None:
                out.extend("  " + line
                           for line in r.verdict.counterexample.to_text().splitlines())
            if r.verdict.detail:
                out.append("{}: {}".format(MODE_LABELS[mode], r.verdict.detail))
        return out


@dataclass
class OracleEntry:
    source: str
    outcome: str  # MATCH, MISMATCH or inconclusive
    detail: str = ""
    granularity: Optional[Fraction] = None
    hint: Optional[Fraction] = None

    def to_dict(self):
        return {"source": self.source, "outcome": self.outcome, "detail": self.detail,
                "granularity": None if self.granularity is None else str(self.granularity),
                "hint": None if self.hint is None else str(self.hint)}


@dataclass
class OracleReport(Report):
    entries: list = field(default_factory=list)

    @property
    def status(self) -> str:
        outcomes = {e.outcome for e in self.entries}
        if "MISMATCH" in outcomes:
            return "mismatch"
        return INCONCLUSIVE if INCONCLUSIVE in outcomes else "match"

    @property
    def exit_code(self) -> int:
        return {"match": 0, "mismatch": 1}.get(self.status, EXIT_RUNTIME)

    def body(self):
        return {"comparisons": [e.to_dict() for e in self.entries]}

    def lines(self):
        out = []
        for e in self.entries:
            text = "{}: {}".format(e.source, e.detail or e.outcome)
            if e.outcome == INCONCLUSIVE:
                text = "{}: INCONCLUSIVE ({})".format(e.source, e.detail)
                if e.hint is not None:
                    text += "; retry with --granularity {}".format(e.hint)
            out.append(text)
        return out


@dataclass
class FormatReport(Report):
    text: str = ""

    @property
    def status(self) -> str:
        return "ok"

    @property
    def exit_code(self) -> int:
        return 0

    def body(self):
        return {"text": self.text}

    def to_text(self) -> str:
        return self.text


@dataclass
class ObligationsReport(Report):
    result: ObligationReport = field(default_factory=ObligationReport)

    @property
    def status(self) -> str:
        if self.result.holds:
            return HOLDS
        return VIOLATED if self.result.violated else ERROR

    @property
    def exit_code(self) -> int:
        return {HOLDS: 0, VIOLATED: 1}.get(self.status, EXIT_RUNTIME)

    def body(self):
        return {"obligations": self.result.to_dict()["instances"]}

    def lines(self):
        out = []
        for entry in self.result.instances:
            for ident, v in entry.verdicts.items():
                out.append("{:<16} {:<4} {:<10} {:>9} classes{}".format(
                    entry.path, ident, v.status.upper(), v.classes,
                    self._seconds(v.wall_time)))
        if not out:
            out.append("no library component instances")
        return out


# ---------------------------------------------------------------- inputs

def load_program(path) -> ast.Program:
    """Parsed and well-formed program of a .fcr file"""
    try:
        program = parse_file(path)
    except OSError as e:
        raise UnreadableInput("cannot read {}: {}".format(path, e.strerror))
    return ensure_wellformed(program)


def _read(path) -> str:
    try:
        with open(path, "r", encoding="UTF-8") as f:
            return f.read()
    except OSError as e:
        raise UnreadableInput("cannot read {}: {}".format(path, e.strerror))


def _label(path, many, name) -> str:
    if not many:
        return name
    return "{}:{}".format(os.path.splitext(os.path.basename(path))[0], name)


# ---------------------------------------------------------------- commands

def check_program(program: ast.Program, config: RunConfig, report: CheckReport,
                  label=lambda name: name):
    """Checks the properties of one program in scope of the filter into ``report``"""
    selected = [p for p in program.properties if config.prop in (None, p.name)]
    if not selected:
        return
    tree = InstanceTree(program)
    tts = compile_program(program)
    for decl in selected:
        name = label(decl.name)
        try:
            product = compile_pattern(tree.resolve_body(decl.body), tts)
            verdict = verify(product, **config.limits)
        except TempockError as e:
            if e.is_input_error:
                raise
            logger.warning("%s: %s", name, e.description)
            report.errors.append((name, e.description))
            continue
        row = PropertyRow(name, verdict)
        if config.replay and verdict.violated and verdict.counterexample is not None:
            realised = replay(product.tts, verdict.counterexample)
            row.replayed = ("realised at granularity {}".format(realised)
                            if realised is not None else "not realised up to granularity 1/8")
        logger.info("%s: %s", name, verdict.status)
        report.rows.append(row)


def cmd_check(config: RunConfig) -> CheckReport:
    report = CheckReport("check", list(config.inputs), config.times)
    many = len(config.inputs) > 1
    for path in config.inputs:
        program = load_program(path)
        check_program(program, config, report, lambda name: _label(path, many, name))
    if config.prop is not None and not report.rows and not report.errors:
        raise UsageError("no property named '{}'".format(config.prop))
    return report


def _explore_one(tts, config) -> tuple:
    try:
        graph = build_graph(tts, **config.limits)
    except LimitExceeded as e:
        stats = e.graph.stats if e.graph is not None else GraphStats()
        return stats, False
    return graph.stats, True


def cmd_explore(config: RunConfig) -> ExploreReport:
    report = ExploreReport("explore", list(config.inputs), config.times)
    for path in config.inputs:
        tts = compile_program(load_program(path))
        report.entries.append((path, *_explore_one(tts, config)))
    if config.tasks is not None:
        tasks = synthetic_tasks(config.tasks, config.seed)
        tts = compile_program(build_tasksystem(tasks, INTERVAL))
        source = "synthetic:{}".format(config.tasks)
        report.sources.append(source)
        report.entries.append((source, *_explore_one(tts, config)))
    return report


def cmd_sched(config: RunConfig) -> SchedReport:
    path = config.inputs[0]
    tasks = parse_task_table(_read(path))
    report = SchedReport("sched", [path], config.times)
    report.results = check_tasks(tasks, **config.limits)
    return report


def _compare_one(source, tts, config) -> OracleEntry:
    try:
        graph = build_graph(tts, **config.limits)
        result = oracle_explore(tts, config.granularity)
    except GranularityMismatch as e:
        return OracleEntry(source, INCONCLUSIVE, e.description, hint=e.hint)
    except (HorizonExceeded, LimitExceeded) as e:
        return OracleEntry(source, INCONCLUSIVE, e.description)
    comparison = compare(graph, result, config.depth)
    outcome = "MATCH" if comparison.match else "MISMATCH"
    return OracleEntry(source, outcome, comparison.describe(), result.granularity)


def cmd_oracle(config: RunConfig) -> OracleReport:
    """Class graph against the discrete-time oracle, on files or a random model"""
    report = OracleReport("oracle", list(config.inputs), config.times)
    for path in config.inputs:
        report.entries.append(_compare_one(path, compile_program(load_program(path)), config))
    if not config.inputs:
        source = "random:{}".format(config.seed if config.seed is not None
                                    else settings.SEED or 42)
        report.sources.append(source)
        report.entries.append(_compare_one(source, random_tts(seeded(config.seed)), config))
    return report


def cmd_fmt(config: RunConfig) -> FormatReport:
    texts = []
    for path in config.inputs:
        try:
            program = parse_file(path)
        except OSError as e:
            raise UnreadableInput("cannot read {}: {}".format(path, e.strerror))
        texts.append(pretty_print(program))
    return FormatReport("fmt", list(config.inputs), config.times, "\n".join(texts))


def cmd_obligations(config: RunConfig) -> ObligationsReport:
    report = ObligationsReport("obligations", list(config.inputs), config.times)
    for path in config.inputs:
        result = check_obligations(load_program(path), **config.limits)
        report.result.instances.extend(result.instances)
    return report


HANDLERS = {"check": cmd_check, "explore": cmd_explore, "sched": cmd_sched,
            "oracle": cmd_oracle, "fmt": cmd_fmt, "obligations": cmd_obligations}
ARCHIVED = ("check", "sched", "obligations")


def archive(report: Report):
    """Stores the report as a CheckRun and returns it"""
    from tempock.models import CheckRun

    run = CheckRun.from_report(report.command, ", ".join(report.sources), report.status,
                               report.exit_code, report.to_dict())
    run.save()
    logger.info("archived run %s", run.id)
    return run


def run(config: RunConfig) -> Report:
    """Validates the configuration, runs its command and archives when asked"""
    config.validate()
    report = HANDLERS[config.command](config)
    if config.archive and config.command in ARCHIVED:
        archive(report)
    return report
