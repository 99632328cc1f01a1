#!/usr/bin/python3
"""State classes of a timed transition system and the class graph.

A class pairs a discrete state with the canonical firing domain of the
transitions enabled in it. Priorities are applied after time feasibility:
a dominator with a point interval ``[a,a]`` only forbids firing at or after
the instant it is due, any other dominator that can fire first prunes the
dominated transition outright.
"""

import logging
import resource
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from tempock import settings
from tempock.errors import LimitExceeded, NotFirable
from tempock.explorer import dbm
from tempock.tts.system import TimedTransitionSystem

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 10_000


@dataclass(frozen=True)
class FiringDomain:
    """Enabled transitions and the bytes of their delay matrix.

    Variable i + 1 of the matrix is the delay of ``enabled[i]``. The matrix
    is rebuilt on demand as a read-only view of ``data``.
    """

    enabled: tuple
    data: bytes
    scale: int = field(default=1, compare=False)

    @classmethod
    def of(cls, enabled, matrix, scale=1) -> "FiringDomain":
        return cls(tuple(enabled), np.ascontiguousarray(matrix, dtype=dbm.DTYPE).tobytes(),
                   scale)

    @property
    def size(self) -> int:
        return len(self.enabled) + 1

    @property
    def matrix(self) -> np.ndarray:
        return np.frombuffer(self.data, dtype=dbm.DTYPE).reshape(self.size, self.size)

    def position(self, tid: int) -> int:
        return self.enabled.index(tid) + 1

    def delay(self, tid: int):
        return dbm.delay_range(self.matrix, self.position(tid), self.scale)

    def __str__(self):
        parts = []
        for tid in self.enabled:
            lower, lo_strict, upper, up_strict = self.delay(tid)
            parts.append("{} {} t{} {} {}".format(
                lower, "<" if lo_strict else "<=", tid,
                "<" if up_strict else "<=", "inf" if upper is None else upper))
        m, n = self.matrix, self.size
        for i in range(1, n):
            for j in range(1, n):
                if i != j and m[i, j] < dbm.INF:
                    parts.append("t{} - t{} {}".format(
                        self.enabled[i - 1], self.enabled[j - 1],
                        dbm.bound_text(m[i, j], self.scale)))
        return ", ".join(parts) if parts else "true"


@dataclass(frozen=True)
class StateClass:
    discrete: tuple
    domain: FiringDomain

    @property
    def key(self):
        return (self.discrete, self.domain.enabled, self.domain.data)


@dataclass
class GraphStats:
    classes: int = 0
    edges: int = 0
    dead: int = 0
    peak_rss_kb: int = 0
    wall_time: float = 0.0

    def to_dict(self):
        return {"classes": self.classes, "edges": self.edges, "dead": self.dead,
                "peak_rss_kb": self.peak_rss_kb, "wall_time": round(self.wall_time, 3)}


def initial_class(tts: TimedTransitionSystem) -> StateClass:
    enabled = sorted(tts.enabled(tts.initial))
    matrix = dbm.box([tts.transitions[t].interval for t in enabled], tts.scale)
    return StateClass(tts.initial, FiringDomain.of(enabled, matrix, tts.scale))


def firing_constraints(tts: TimedTransitionSystem, c: StateClass) -> dict:
    """Firable transitions mapped to the positions they must strictly precede"""
    dom = c.domain
    m = dom.matrix
    pos = {tid: i + 1 for i, tid in enumerate(dom.enabled)}
    first = dbm.firable_first(m)
    feasible = [t for i, t in enumerate(dom.enabled) if first[i]]
    feasible_set = set(feasible)
    result = {}
    for t in feasible:
        strict = set()
        blocked = False
        for hi in tts.dominators[t]:
            if hi not in pos:
                continue
            # A point dominator is due at a known instant, so t stays firable
            # strictly before it instead of being pruned for the whole class.
            # This refines the plain rule and keeps priorities monotone.
            if tts.transitions[hi].interval.is_point:
                strict.add(pos[hi])
            elif hi in feasible_set:
                blocked = True
                break
        if blocked or (strict and not dbm.can_fire_first(m, pos[t], strict)):
            continue
        result[t] = frozenset(strict)
    return result


def firable(tts: TimedTransitionSystem, c: StateClass) -> frozenset:
    return frozenset(firing_constraints(tts, c))


def successor(tts: TimedTransitionSystem, c: StateClass, tid: int,
              constraints: Optional[dict] = None) -> list:
    """Successor classes of firing tid, one per discrete successor"""
    constraints = constraints if constraints is not None else firing_constraints(tts, c)
    if tid not in constraints:
        raise NotFirable("t{} ({}) is not firable".format(tid, tts.transitions[tid].name))
    dom = c.domain
    pos = dom.position(tid)
    constrained = dbm.constrain_first(dom.matrix, pos, constraints[tid])
    old = {t: i + 1 for i, t in enumerate(dom.enabled)}
    result = []
    for state in sorted(tts.fire(c.discrete, tid)):
        enabled = sorted(tts.enabled(state))
        sources = [old[u] if u in old and u != tid else dbm.scaled_bounds(tts.scaled[u])
                   for u in enabled]
        matrix = dbm.advance(constrained, pos, sources)
        result.append(StateClass(state, FiringDomain.of(enabled, matrix, tts.scale)))
    return result


class ClassGraph:
    """Classes indexed in discovery order; class 0 is initial"""

    def __init__(self, tts: TimedTransitionSystem):
        self.tts = tts
        self.classes: list[StateClass] = []
        self.index: dict = {}
        self.edges: list[tuple[int, int, int]] = []
        self.out: list[list[tuple[int, int]]] = []
        self.dead: set[int] = set()
        self.complete = False
        self.stats = GraphStats()

    initial = 0

    def add(self, c: StateClass):
        """Index of c, inserting it when new; returns (index, is_new)"""
        idx = self.index.get(c.key)
        if idx is not None:
            return idx, False
        idx = len(self.classes)
        self.index[c.key] = idx
        self.classes.append(c)
        self.out.append([])
        return idx, True

    def add_edge(self, src, tid, dst):
        self.edges.append((src, tid, dst))
        self.out[src].append((tid, dst))

    def __len__(self):
        return len(self.classes)

    def is_dead(self, idx) -> bool:
        return idx in self.dead

    def reachable_states(self) -> set:
        return {c.discrete for c in self.classes}

    def summary(self, idx) -> str:
        return self.tts.describe_state(self.classes[idx].discrete)

    def dump(self) -> str:
        lines = []
        for idx, c in enumerate(self.classes):
            mark = " dead" if idx in self.dead else ""
            lines.append("class {}{}: {}".format(idx, mark, self.tts.describe_state(c.discrete)))
            lines.append("  domain {}".format(c.domain))
        for src, tid, dst in self.edges:
            lines.append("edge {} -{}-> {}".format(src, self.tts.transitions[tid].label, dst))
        return "\n".join(lines) + "\n"


def _expand(tts, c):
    constraints = firing_constraints(tts, c)
    return [(tid, successor(tts, c, tid, constraints)) for tid in sorted(constraints)]


def build_graph(tts: TimedTransitionSystem, max_classes: Optional[int] = None,
                time_budget: Optional[float] = None, threads: Optional[int] = None) -> ClassGraph:
    """Exhaustive breadth-first class graph.

    With several threads, each breadth-first level is expanded concurrently
    and merged in frontier order, which reproduces the sequential numbering.
    """
    max_classes = max_classes or settings.MAX_CLASSES
    time_budget = time_budget if time_budget is not None else settings.TIME_BUDGET
    threads = threads or settings.THREADS
    started = time.monotonic()
    graph = ClassGraph(tts)
    graph.add(initial_class(tts))
    frontier = [0]
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while frontier:
            classes = [graph.classes[i] for i in frontier]
            if pool is not None:
                expansions = list(pool.map(lambda c: _expand(tts, c), classes))
            else:
                expansions = (_expand(tts, c) for c in classes)
            next_frontier = []
            for src, expansion in zip(frontier, expansions):
                if not expansion:
                    graph.dead.add(src)
                for tid, succs in expansion:
                    for succ in succs:
                        dst, new = graph.add(succ)
                        graph.add_edge(src, tid, dst)
                        if new:
                            next_frontier.append(dst)
                            if len(graph) % PROGRESS_EVERY == 0:
                                logger.debug("%d classes, %d edges", len(graph), len(graph.edges))
                if len(graph) > max_classes:
                    _finish(graph, started)
                    logger.warning("class limit %d reached", max_classes)
                    raise LimitExceeded("max_classes", graph,
                                        "more than {} classes".format(max_classes))
                if time_budget is not None and time.monotonic() - started > time_budget:
                    _finish(graph, started)
                    logger.warning("time budget of %ss exhausted", time_budget)
                    raise LimitExceeded("time_budget", graph,
                                        "time budget of {}s exhausted".format(time_budget))
            frontier = next_frontier
    finally:
        if pool is not None:
            pool.shutdown()
    graph.complete = True
    _finish(graph, started)
    logger.info("class graph: %d classes, %d edges, %d dead in %.3fs",
                graph.stats.classes, graph.stats.edges, graph.stats.dead, graph.stats.wall_time)
    return graph


def _finish(graph, started):
    graph.stats = GraphStats(len(graph.classes), len(graph.edges), len(graph.dead),
                             resource.getrusage(resource.RUSAGE_SELF).ru_maxrss,
                             time.monotonic() - started)
