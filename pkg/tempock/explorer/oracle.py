#!/usr/bin/python3
"""Discrete-time reference semantics used to validate the class graph.

Clocks advance by one grid unit at a time. Time may reach but never pass a
closed upper bound, and never reaches an open one. The concrete states one
firing sequence reaches in the same discrete state, closed under delays,
form a node. Priorities are judged over a node the way the class graph
judges them over a class: a transition is pruned when a dominator without
a point interval can fire somewhere in the node, and it may fire only at
instants where no point dominator is due.
"""


import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from tempock import settings
from tempock.errors import GranularityMismatch, HorizonExceeded

logger = logging.getLogger(__name__)

REPLAY_GRANULARITIES = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))


def needs_refinement(tts) -> bool:
    """Strict bounds or point-dominated priorities call for a half grid"""
    if any(t.interval.has_strict_bound for t in tts.transitions):
        return True
    return any(tts.transitions[hi].interval.is_point for hi, _ in tts.priorities)


def effective_granularity(tts, granularity, refine=True) -> Fraction:
    g = Fraction(granularity)
    if g <= 0:
        raise GranularityMismatch("granularity must be positive", hint=Fraction(1))
    if refine and needs_refinement(tts):
        g /= 2
    for t in tts.transitions:
        iv = t.interval
        for b in (iv.lower, iv.upper):
            if b is not None and (b / g).denominator != 1:
                hint = g / (b / g).denominator
                raise GranularityMismatch(
                    "bound {} of {} is not a multiple of granularity {}".format(b, t.name, g),
                    hint=hint)
        if iv.has_strict_bound and not _has_grid_point(iv, g):
            raise GranularityMismatch(
                "no grid point of {} lies in {} at granularity {}".format(t.name, iv, g),
                hint=g / 2)
    return g


def _has_grid_point(interval, g) -> bool:
    lo = interval.lower / g
    first = lo + 1 if interval.lower_strict else lo
    return interval.upper is None or interval.contains(first * g)


class DiscreteSemantics:
    """Concrete states are (discrete state, enabled ids, clock units per enabled id)"""

    def __init__(self, tts, granularity: Fraction):
        self.tts = tts
        self.g = granularity
        self.units = []
        for t in tts.transitions:
            iv = t.interval
            lo = int(iv.lower / granularity)
            up = None if iv.upper is None else int(iv.upper / granularity)
            self.units.append((lo, iv.lower_strict, up, iv.upper_strict))
        self.points = tuple(t.interval.is_point for t in tts.transitions)

    def initial(self):
        enabled = tuple(sorted(self.tts.enabled(self.tts.initial)))
        return (self.tts.initial, enabled, tuple(0 for _ in enabled))

    def initial_node(self) -> frozenset:
        return self.close([self.initial()])

    def _ready(self, tid, clock) -> bool:
        lo, lo_strict, up, up_strict = self.units[tid]
        if clock < lo or (lo_strict and clock == lo):
            return False
        return up is None or clock < up or (clock == up and not up_strict)

    def ready(self, cs) -> frozenset:
        _, enabled, clocks = cs
        return frozenset(t for t, c in zip(enabled, clocks) if self._ready(t, c))

    def moves(self, node) -> dict:
        """Transitions firable from a node, each mapped to its concrete successors"""
        members = [(cs, self.ready(cs)) for cs in node]
        somewhere = frozenset().union(*(now for _, now in members))
        dominators = self.tts.dominators
        allowed = {t for t in somewhere
                   if not any(hi in somewhere and not self.points[hi] for hi in dominators[t])}
        moves = {}
        for cs, now in members:
            for tid in allowed & now:
                if any(hi in now for hi in dominators[tid]):
                    continue
                moves.setdefault(tid, set()).update(self.fire(cs, tid))
        return moves

    def fire(self, cs, tid) -> list:
        state, enabled, clocks = cs
        clock_of = dict(zip(enabled, clocks))
        result = []
        for succ in sorted(self.tts.fire(state, tid)):
            new_enabled = tuple(sorted(self.tts.enabled(succ)))
            new_clocks = tuple(clock_of[u] if u in clock_of and u != tid else 0
                               for u in new_enabled)
            result.append((succ, new_enabled, new_clocks))
        return result

    def delay(self, cs):
        """One grid unit later, or None when urgency forbids it"""
        state, enabled, clocks = cs
        advanced = []
        for t, c in zip(enabled, clocks):
            lo, _, up, up_strict = self.units[t]
            nxt = c + 1
            if up is not None and (nxt > up or (up_strict and nxt == up)):
                return None
            if up is None:
                nxt = min(nxt, lo + 1)
            advanced.append(nxt)
        if not enabled:
            return None
        return (state, enabled, tuple(advanced))

    def close(self, states) -> frozenset:
        """Delay closure"""
        closed = set(states)
        stack = list(closed)
        while stack:
            later = self.delay(stack.pop())
            if later is not None and later not in closed:
                closed.add(later)
                stack.append(later)
        return frozenset(closed)

    def split(self, states) -> dict:
        """Successor nodes keyed by discrete state"""
        groups = {}
        for cs in states:
            groups.setdefault(cs[0], []).append(cs)
        return {state: self.close(groups[state]) for state in sorted(groups)}


@dataclass
class OracleResult:
    granularity: Fraction
    states: set = field(default_factory=set)
    firable: dict = field(default_factory=dict)  # discrete state -> fired transition ids
    dead: set = field(default_factory=set)
    concrete: int = 0
    nodes: list = field(default_factory=list, repr=False)
    out: list = field(default_factory=list, repr=False)  # node -> [(tid, node)]
    semantics: Optional[DiscreteSemantics] = field(default=None, repr=False)


def oracle_explore(tts, granularity=Fraction(1), horizon: Optional[int] = None,
                   refine: bool = True) -> OracleResult:
    """Reachable discrete states and per-state firable sets on a time grid"""
    g = effective_granularity(tts, granularity, refine)
    horizon = horizon or settings.ORACLE_HORIZON
    sem = DiscreteSemantics(tts, g)
    result = OracleResult(g, semantics=sem)
    index = {}
    concrete = set()
    queue = deque()

    def intern(node) -> int:
        idx = index.get(node)
        if idx is None:
            idx = index[node] = len(result.nodes)
            result.nodes.append(node)
            result.out.append([])
            queue.append(idx)
            concrete.update(node)
            if len(concrete) > horizon:
                raise HorizonExceeded("more than {} concrete states at granularity {}"
                                      .format(horizon, g))
        return idx

    intern(sem.initial_node())
    while queue:
        idx = queue.popleft()
        node = result.nodes[idx]
        state = next(iter(node))[0]
        result.states.add(state)
        fired = result.firable.setdefault(state, set())
        moves = sem.moves(node)
        if not moves:
            result.dead.add(state)
        for tid in sorted(moves):
            fired.add(tid)
            for succ in sem.split(moves[tid]).values():
                result.out[idx].append((tid, intern(succ)))
    result.concrete = len(concrete)
    logger.info("oracle: %d discrete states, %d nodes, %d concrete states at granularity %s",
                len(result.states), len(result.nodes), result.concrete, g)
    return result


def _sequences(out, initial: int, depth: int) -> set:
    words = set()

    def extend(word, frontier):
        words.add(word)
        if len(word) == depth:
            return
        steps = {}
        for idx in frontier:
            for tid, dst in out[idx]:
                steps.setdefault(tid, set()).add(dst)
        for tid in sorted(steps):
            extend(word + (tid,), frozenset(steps[tid]))

    extend((), frozenset([initial]))
    return words


def oracle_sequences(result: OracleResult, depth: int) -> set:
    """Fired transition sequences of length <= depth"""
    return _sequences(result.out, 0, depth)


def graph_sequences(graph, depth: int) -> set:
    return _sequences(graph.out, graph.initial, depth)


def graph_firable(graph) -> dict:
    fired = {}
    for idx, c in enumerate(graph.classes):
        bucket = fired.setdefault(c.discrete, set())
        bucket.update(tid for tid, _ in graph.out[idx])
    return fired


@dataclass
class Comparison:
    match: bool
    missing_states: set = field(default_factory=set)  # in the graph only
    extra_states: set = field(default_factory=set)  # in the oracle only
    firable_mismatches: dict = field(default_factory=dict)
    sequence_mismatches: set = field(default_factory=set)

    def describe(self) -> str:
        if self.match:
            return "MATCH"
        parts = []
        if self.missing_states:
            parts.append("{} states only in the class graph".format(len(self.missing_states)))
        if self.extra_states:
            parts.append("{} states only in the oracle".format(len(self.extra_states)))
        if self.firable_mismatches:
            parts.append("{} firable-set mismatches".format(len(self.firable_mismatches)))
        if self.sequence_mismatches:
            parts.append("{} sequence mismatches".format(len(self.sequence_mismatches)))
        return "MISMATCH: " + ", ".join(parts)


def compare(graph, result: OracleResult, depth: int = 8) -> Comparison:
    """Reachable states, firable sets and firing sequences up to depth"""
    states = graph.reachable_states()
    missing = states - result.states
    extra = result.states - states
    fired = graph_firable(graph)
    mismatches = {s: (fired.get(s, set()), result.firable.get(s, set()))
                  for s in states & result.states
                  if fired.get(s, set()) != result.firable.get(s, set())}
    sequences = set()
    if depth:
        sequences = graph_sequences(graph, depth) ^ oracle_sequences(result, depth)
    match = not (missing or extra or mismatches or sequences)
    return Comparison(match, missing, extra, mismatches, sequences)


def replay(tts, counterexample, granularities=REPLAY_GRANULARITIES) -> Optional[Fraction]:
    """Coarsest grid on which the counterexample's firing sequence is realisable"""
    steps = [s for s in counterexample.steps if s.transition is not None]
    for g in granularities:
        try:
            effective_granularity(tts, g, refine=False)
        except GranularityMismatch:
            continue
        sem = DiscreteSemantics(tts, Fraction(g))
        node = sem.initial_node()
        for step in steps:
            successors = sem.moves(node).get(step.transition)
            if not successors:
                break
            if step.target_state is None:
                node = sem.close(successors)
            else:
                node = sem.split(successors).get(step.target_state)
            if not node:
                break
        else:
            logger.info("counterexample replayed at granularity %s", g)
            return Fraction(g)
    return None
