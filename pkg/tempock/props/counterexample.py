#!/usr/bin/python3
"""Counterexamples over the class graph and their absolute firing times"""

from dataclasses import dataclass, field
from typing import Optional

from tempock.errors import InfeasiblePath
from tempock.explorer import dbm
from tempock.fiacre.ast import TimeInterval

STUTTER = "(stutter)"


@dataclass
class Step:
    index: int
    transition: Optional[int]  # None for the stutter step of a dead class
    event: str
    name: str
    source: int  # class indices
    target: int
    target_state: Optional[tuple] = None
    time: Optional[TimeInterval] = None
    summary: str = ""

    def to_dict(self):
        time = None
        if self.time is not None:
            time = {"lower": str(self.time.lower), "lower_strict": self.time.lower_strict,
                    "upper": None if self.time.upper is None else str(self.time.upper),
                    "upper_strict": self.time.upper_strict}
        return {"k": self.index, "event": self.event, "transition": self.name,
                "source": self.source, "target": self.target, "time": time,
                "state": self.summary}

    def to_text(self):
        time = "t={}".format(self.time) if self.time is not None else "t=-"
        return "#{}  {}  {}  ->  {}".format(self.index, time, self.event, self.summary)


@dataclass
class Counterexample:
    prefix: list = field(default_factory=list)
    cycle: list = field(default_factory=list)

    @property
    def steps(self) -> list:
        return self.prefix + self.cycle

    @property
    def is_lasso(self) -> bool:
        return bool(self.cycle)

    def __len__(self):
        return len(self.prefix) + len(self.cycle)

    def to_dict(self):
        return {"prefix": [s.to_dict() for s in self.prefix],
                "cycle": [s.to_dict() for s in self.cycle]}

    def to_text(self) -> str:
        lines = [s.to_text() for s in self.prefix]
        if self.cycle:
            lines.append("-- cycle --")
            lines.extend(s.to_text() for s in self.cycle)
        return "\n".join(lines)


def timestamp(tts, graph, path) -> list:
    """Earliest and latest absolute firing time of every step of a path.

    ``path`` lists (source, transition, target) edges starting at the
    initial class; stutter edges (transition None) get the time of the last
    firing. Bounds are per step: no single schedule is claimed to reach
    all the earliest ones at once.
    """
    if not path:
        return []
    n = sum(1 for _, tid, _ in path if tid is not None) + 1
    m = dbm.unconstrained(n)
    scale = tts.scale

    def tighten(i, j, value, strict=False):
        # x_i - x_j <= value (or <)
        m[i, j] = min(m[i, j], dbm.bound(int(value * scale), strict))

    state = graph.classes[path[0][0]].discrete
    anchors = {u: 0 for u in tts.enabled(state)}
    k = 0
    for src, tid, dst in path:
        if tid is None:
            continue
        k += 1
        state = graph.classes[src].discrete
        enabled = tts.enabled(state)
        t = tts.transitions[tid]
        iv = t.interval
        tighten(anchors[tid], k, -iv.lower, iv.lower_strict)
        if iv.upper is not None:
            tighten(k, anchors[tid], iv.upper, iv.upper_strict)
        for u in enabled:
            up = tts.transitions[u].interval
            if up.upper is not None:
                tighten(k, anchors[u], up.upper, up.upper_strict)
            if u in tts.dominators[tid] and up.is_point:
                tighten(k, anchors[u], up.lower, True)
        tighten(k - 1, k, 0)
        after = tts.enabled(graph.classes[dst].discrete)
        anchors = {u: (anchors[u] if u in enabled and u != tid else k) for u in after}
    closed = dbm.canonical(m)
    if closed is None:
        raise InfeasiblePath("no timing satisfies the path of {} steps".format(len(path)))
    times, k = [], 0
    for _, tid, _ in path:
        if tid is not None:
            k += 1
        if k == 0:
            times.append(TimeInterval.point(0))
            continue
        lower, lo_strict, upper, up_strict = dbm.delay_range(closed, k, scale)
        times.append(TimeInterval(lower, lo_strict, upper, up_strict))
    return times


def build_counterexample(tts, graph, prefix, cycle=()) -> Counterexample:
    """Counterexample of edge lists, time-stamped over prefix then one cycle pass"""
    edges = list(prefix) + list(cycle)
    times = timestamp(tts, graph, edges)
    steps = []
    for k, ((src, tid, dst), time) in enumerate(zip(edges, times), start=1):
        if tid is None:
            event, name = STUTTER, STUTTER
        else:
            t = tts.transitions[tid]
            event, name = t.label, t.name
        steps.append(Step(k, tid, event, name, src, dst, graph.classes[dst].discrete,
                          time, graph.summary(dst)))
    return Counterexample(steps[:len(prefix)], steps[len(prefix):])
