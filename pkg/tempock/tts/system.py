#!/usr/bin/python3
"""Timed transition systems: discrete states, transitions, priorities.

A discrete state is a tuple holding one value per variable. Control
locations are ordinary variables (``<instance>#loc``) whose domain is the
instance's states plus the intermediate locations the compiler introduces.
Transition identifiers are positions in ``transitions``.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

from tempock.errors import IllFormedProgram, NotEnabled, ValueOutOfDomain
from tempock.fiacre.ast import TimeInterval
from tempock.tts.expr import TRUE, compile_expr, format_ir

logger = logging.getLogger(__name__)

TAU = "tau"


@dataclass(frozen=True)
class Variable:
    id: str
    domain: tuple
    initial: object


@dataclass(frozen=True)
class Require:
    """Blocking test evaluated after earlier updates of the same step"""

    expr: object


@dataclass(frozen=True)
class Update:
    index: int
    name: str
    expr: object


@dataclass(frozen=True)
class Choose:
    index: int
    name: str
    values: tuple


@dataclass(frozen=True)
class Move:
    index: int
    instance: str
    source: str
    target: str


@dataclass(frozen=True)
class Transition:
    id: int
    name: str
    event: Optional[str]
    moves: tuple
    guard: object
    actions: tuple
    interval: TimeInterval
    origin: str = "system"
    _fns: tuple = field(default=None, init=False, compare=False, repr=False)
    # Require and Choose actions can leave a step without successors
    _may_block: bool = field(default=False, init=False, compare=False, repr=False)

    def __post_init__(self):
        fns = [compile_expr(self.guard)]
        for action in self.actions:
            if isinstance(action, (Require, Update)):
                fns.append(compile_expr(action.expr))
            else:
                fns.append(None)
        object.__setattr__(self, "_fns", tuple(fns))
        object.__setattr__(self, "_may_block",
                           any(isinstance(a, (Require, Choose)) for a in self.actions))

    @property
    def instances(self) -> tuple:
        return tuple(m.instance for m in self.moves)

    @property
    def label(self) -> str:
        return self.event if self.event is not None else TAU

    @property
    def is_observer(self) -> bool:
        return self.origin != "system"

    def guard_holds(self, state) -> bool:
        return bool(self._fns[0](state, state))

    def move_of(self, instance):
        return next((m for m in self.moves if m.instance == instance), None)

    def renumbered(self, new_id: int) -> "Transition":
        return replace(self, id=new_id)


class TimedTransitionSystem:
    """Flattened product of all process instances of a program"""

    def __init__(self, variables, transitions, priorities=(), instances=(),
                 constants=None, literals=None):
        self.variables: tuple[Variable, ...] = tuple(variables)
        # names a value predicate may use besides variables
        self.constants = dict(constants or {})
        self.literals = dict(literals or {})
        self.transitions: tuple[Transition, ...] = tuple(
            t if t.id == n else t.renumbered(n) for n, t in enumerate(transitions))
        self.index = {v.id: n for n, v in enumerate(self.variables)}
        self.initial = tuple(v.initial for v in self.variables)
        self.instances = tuple(instances)
        self._domains = tuple(frozenset(v.domain) for v in self.variables)
        self.priorities = tuple(sorted(set(priorities)))
        self.dominators = self._close_priorities()
        self._by_location = {}
        for t in self.transitions:
            key = (t.moves[0].index, t.moves[0].source) if t.moves else None
            self._by_location.setdefault(key, []).append(t.id)
        self.scale = math.lcm(*[b.denominator for t in self.transitions
                                for b in (t.interval.lower, t.interval.upper)
                                if b is not None] or [1])
        # intervals in units of 1/scale
        self.scaled = tuple(
            (int(t.interval.lower * self.scale), t.interval.lower_strict,
             None if t.interval.upper is None else int(t.interval.upper * self.scale),
             t.interval.upper_strict)
            for t in self.transitions)

    def _close_priorities(self):
        above = [set() for _ in self.transitions]
        for hi, lo in self.priorities:
            above[lo].add(hi)
        closure = []
        for tid in range(len(self.transitions)):
            seen, stack = set(), list(above[tid])
            while stack:
                node = stack.pop()
                if node not in seen:
                    seen.add(node)
                    stack.extend(above[node])
            if tid in seen:
                from tempock.fiacre.wellformed import Diagnostic
                raise IllFormedProgram([Diagnostic(
                    None, "transition priority cycle through '{}'".format(
                        self.transitions[tid].name))])
            closure.append(frozenset(seen))
        return tuple(closure)

    # ------------------------------------------------------------ queries

    def location(self, state, instance) -> str:
        return state[self.index[instance + "#loc"]]

    def value(self, state, var_id):
        return state[self.index[var_id]]

    def dominates(self, hi: int, lo: int) -> bool:
        return hi in self.dominators[lo]

    def is_enabled(self, state, t: Transition) -> bool:
        for move in t.moves:
            if state[move.index] != move.source:
                return False
        if not t.guard_holds(state):
            return False
        if t._may_block:
            return bool(self._successors(state, t, check=False))
        return True

    def enabled(self, state) -> frozenset:
        """Transitions whose participants sit at their sources and whose
        guard holds; priorities are left to the explorer"""
        result = set()
        for tid in self._by_location.get(None, ()):
            if self.is_enabled(state, self.transitions[tid]):
                result.add(tid)
        for inst in self.instances:
            idx = self.index[inst + "#loc"]
            for tid in self._by_location.get((idx, state[idx]), ()):
                if self.is_enabled(state, self.transitions[tid]):
                    result.add(tid)
        return frozenset(result)

    def fire(self, state, tid: int) -> frozenset:
        """Every successor of firing tid in state"""
        t = self.transitions[tid]
        if not self.is_enabled(state, t):
            raise NotEnabled("{} is not enabled".format(t.name))
        return frozenset(self._successors(state, t))

    def _successors(self, state, t: Transition, check=True) -> list:
        cur = list(state)
        for move in t.moves:
            cur[move.index] = move.target
        branches = [cur]
        for action, fn in zip(t.actions, t._fns[1:]):
            match action:
                case Require():
                    branches = [b for b in branches if fn(b, state)]
                case Update(index, name, _):
                    for b in branches:
                        value = fn(b, state)
                        if value not in self._domains[index]:
                            if not check:
                                continue
                            raise ValueOutOfDomain("{} := {} leaves the domain of {} ({})".format(
                                name, value, name, t.name))
                        b[index] = value
                case Choose(index, _, values):
                    branches = [b[:index] + [v] + b[index + 1:] for b in branches for v in values]
            if not branches:
                return []
        return [tuple(b) for b in branches]

    # ------------------------------------------------------------ output

    def describe_state(self, state) -> str:
        parts = []
        for var, value in zip(self.variables, state):
            if var.id.endswith("#loc"):
                parts.append("{}@{}".format(var.id[:-4], value))
            else:
                parts.append("{}={}".format(var.id, _value_text(value)))
        return " ".join(parts)

    def dump(self) -> str:
        """Deterministic text listing for golden-file comparisons"""
        lines = []
        for var in self.variables:
            lines.append("var {} : {{{}}} = {}".format(
                var.id, ", ".join(_value_text(v) for v in var.domain), _value_text(var.initial)))
        for t in self.transitions:
            moves = ", ".join("{}:{}->{}".format(m.instance, m.source, m.target)
                              for m in t.moves)
            actions = "; ".join(_format_action(a) for a in t.actions) or "-"
            guard = format_ir(t.guard) if t.guard != TRUE else "true"
            lines.append("t{} {} {} [{}] guard {} do {}".format(
                t.id, t.label, t.interval, moves, guard, actions))
        for hi, lo in self.priorities:
            lines.append("prio t{} > t{}".format(hi, lo))
        return "\n".join(lines) + "\n"


def _value_text(value) -> str:
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def _format_action(action) -> str:
    match action:
        case Require(expr):
            return "on {}".format(format_ir(expr))
        case Update(_, name, expr):
            return "{} := {}".format(name, format_ir(expr))
        case Choose(_, name, values):
            return "{} := any {{{}}}".format(name, ", ".join(_value_text(v) for v in values))
    raise TypeError("not an action: {!r}".format(action))
