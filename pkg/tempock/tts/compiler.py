#!/usr/bin/python3
"""Compilation of a well-formed program into a timed transition system.

Each ``from`` block is unrolled into segments: maximal runs of statements
carrying at most one timing statement (a ``wait`` or a synchronisation).
A second timing statement cuts the segment and continues from an
intermediate location named ``<state>~<n>``. Leading ``on`` tests form the
guard; later tests, assignments and choices form the update. Segments that
synchronise on a port are fused with the segments of every other instance
holding that port.
"""

import itertools
import logging
from dataclasses import dataclass, replace
from typing import Optional

from tempock import settings
from tempock.errors import DomainOverflow, ValueOutOfDomain
from tempock.fiacre import ast
from tempock.fiacre.instances import DEFAULT_INTERVAL, InstanceTree
from tempock.tts.expr import compile_expr, conj, lower, negate
from tempock.tts.system import (Choose, Move, Require, TimedTransitionSystem,
                                Transition, Update, Variable)

logger = logging.getLogger(__name__)

INIT_LOCATION = "#init"


@dataclass(frozen=True)
class Segment:
    source: str
    target: Optional[str] = None
    guard: tuple = ()
    actions: tuple = ()
    port: Optional[str] = None
    wait: Optional[ast.TimeInterval] = None
    choices: tuple = ()  # (select number, "plain" | "unless")

    @property
    def timed(self) -> bool:
        return self.port is not None or self.wait is not None

    def test(self, cond):
        if self.actions:
            return replace(self, actions=self.actions + (Require(cond),))
        return replace(self, guard=self.guard + (cond,))

    def act(self, action):
        return replace(self, actions=self.actions + (action,))

    def dominates(self, other: "Segment") -> bool:
        """An unless branch over a plain branch of the same select"""
        if self.source != other.source:
            return False
        mine = dict(self.choices)
        return any(kind == "plain" and mine.get(n) == "unless" for n, kind in other.choices)


class _Unroller:
    """Segments and locations of one process instance"""

    def __init__(self, compiler, inst, limit):
        self.compiler = compiler
        self.inst = inst
        self.limit = limit
        proc = inst.process
        self.names = {name: compiler.var_index[inst.var_id(name)] for name in inst.var_types()}
        self.var_types = inst.var_types()
        self.locations = ([INIT_LOCATION] if proc.init is not None else []) + list(proc.states)
        self.intermediate = {}
        self.selects = {}
        self.pending = []
        self.segments: list[Segment] = []

    def lower(self, expr):
        types = self.compiler.tree.types
        return lower(expr, self.names, types.constants, types.literals)

    def run(self) -> list[Segment]:
        proc = self.inst.process
        if proc.init is not None:
            self.pending.append((INIT_LOCATION, (proc.init,), None))
        for block in proc.from_blocks:
            self.pending.append((block.state, (block.body,), block.state))
        while self.pending:
            location, items, state = self.pending.pop(0)
            self.walk(items, Segment(location), state)
        return self.segments

    def finish(self, seg, target):
        self.segments.append(replace(seg, target=target))
        if len(self.segments) > self.limit:
            raise DomainOverflow("unrolling '{}' exceeds {} transitions".format(
                self.inst.path, self.limit))

    def cut(self, items, seg, state):
        key = (state, tuple(id(item) for item in items))
        if key not in self.intermediate:
            prefix = state if state is not None else INIT_LOCATION
            count = sum(1 for k in self.intermediate if k[0] == state) + 1
            name = "{}~{}".format(prefix, count)
            self.intermediate[key] = name
            self.locations.append(name)
            self.pending.append((name, items, state))
        self.finish(seg, self.intermediate[key])

    def walk(self, items, seg, state):
        head, rest = items[0], items[1:]
        match head:
            case ast.Seq(first, second):
                self.walk((first, second) + rest, seg, state)
            case ast.To(target):
                self.finish(seg, target)
            case ast.Loop():
                self.finish(seg, state)
            case ast.Skip():
                self.walk(rest, seg, state)
            case ast.On(cond):
                self.walk(rest, seg.test(self.lower(cond)), state)
            case ast.Assign(var, expr):
                action = Update(self.names[var], self.inst.var_id(var), self.lower(expr))
                self.walk(rest, seg.act(action), state)
            case ast.NondetAssign(var, domain):
                types = self.compiler.tree.types
                values = types.values(self.var_types[var])
                if domain is not None:
                    allowed = set(values)
                    values = tuple(v for v in types.values(domain) if v in allowed)
                action = Choose(self.names[var], self.inst.var_id(var), values)
                self.walk(rest, seg.act(action), state)
            case ast.Wait(interval):
                if seg.timed:
                    self.cut(items, seg, state)
                else:
                    self.walk(rest, replace(seg, wait=interval), state)
            case ast.Sync(port):
                if seg.timed:
                    self.cut(items, seg, state)
                else:
                    self.walk(rest, replace(seg, port=port), state)
            case ast.If(cond, then, orelse):
                test = self.lower(cond)
                self.walk((then,) + rest, seg.test(test), state)
                self.walk((orelse,) + rest, seg.test(negate(test)), state)
            case ast.Select(branches, unless):
                if seg.timed:
                    self.cut(items, seg, state)
                    return
                number = self.selects.setdefault(id(head), len(self.selects) + 1)
                for branch in branches:
                    chosen = replace(seg, choices=seg.choices + ((number, "plain"),))
                    self.walk((branch,) + rest, chosen, state)
                for branch in unless:
                    chosen = replace(seg, choices=seg.choices + ((number, "unless"),))
                    self.walk((branch,) + rest, chosen, state)
            case _:
                raise TypeError("not a statement: {!r}".format(head))


class Compiler:

    def __init__(self, program: ast.Program, max_transitions: Optional[int] = None):
        self.program = program
        self.tree = InstanceTree(program)
        self.limit = max_transitions or settings.MAX_TRANSITIONS
        self.variables: list[Variable] = []
        self.var_index: dict[str, int] = {}

    def add_variable(self, var_id, domain, initial):
        if initial not in domain:
            raise ValueOutOfDomain("initial value {} of {} is outside its domain".format(
                initial, var_id))
        self.var_index[var_id] = len(self.variables)
        self.variables.append(Variable(var_id, tuple(domain), initial))

    def initial_value(self, decl: ast.VarDecl):
        types = self.tree.types
        if decl.init is None:
            return types.default_value(decl.type)
        fn = compile_expr(lower(decl.init, {}, types.constants, types.literals))
        return fn((), ())

    def compile(self) -> TimedTransitionSystem:
        types = self.tree.types
        for var_id, shared in self.tree.shared_vars.items():
            self.add_variable(var_id, types.values(shared.decl.type),
                              self.initial_value(shared.decl))
        loc_slots = {}
        for inst in self.tree.processes:
            loc_slots[inst.path] = len(self.variables)
            self.add_variable(inst.loc_var, (inst.initial_location,), inst.initial_location)
            for decl in inst.process.locals:
                self.add_variable(inst.var_id(decl.name), types.values(decl.type),
                                  self.initial_value(decl))

        unrolled = {}
        for inst in self.tree.processes:
            unroller = _Unroller(self, inst, self.limit)
            unrolled[inst.path] = unroller.run()
            slot = loc_slots[inst.path]
            self.variables[slot] = Variable(inst.loc_var, tuple(unroller.locations),
                                            inst.initial_location)

        transitions, parts = [], []
        for inst in self.tree.processes:
            for seg in unrolled[inst.path]:
                if seg.port is None:
                    transitions.append(self.make_transition(None, [(inst, seg)],
                                                            seg.wait or DEFAULT_INTERVAL))
                    parts.append({inst.path: seg})
        for port_id, info in self.tree.ports.items():
            holders = self.tree.holders(port_id)
            offers = []
            for inst in holders:
                formals = {f for f, p in inst.ports.items() if p == port_id}
                offers.append([(inst, seg) for seg in unrolled[inst.path] if seg.port in formals])
            if not holders or not all(offers):
                logger.debug("port %s has no complete rendezvous", port_id)
                continue
            for combo in itertools.product(*offers):
                transitions.append(self.make_transition(port_id, list(combo), info.interval))
                parts.append({inst.path: seg for inst, seg in combo})
                if len(transitions) > self.limit:
                    raise DomainOverflow("rendezvous on {} exceeds {} transitions".format(
                        port_id, self.limit))

        priorities = self.lift_priorities(transitions, parts)
        tts = TimedTransitionSystem(self.variables, transitions, priorities,
                                    [inst.path for inst in self.tree.processes],
                                    types.constants, types.literals)
        logger.info("compiled %d variables, %d transitions, %d priority pairs",
                    len(tts.variables), len(tts.transitions), len(tts.priorities))
        return tts

    def make_transition(self, port_id, pieces, interval) -> Transition:
        moves, guards, actions = [], [], []
        for inst, seg in pieces:
            moves.append(Move(self.var_index[inst.loc_var], inst.path, seg.source, seg.target))
            guards.extend(seg.guard)
            actions.extend(seg.actions)
        name = ",".join("{}:{}->{}".format(m.instance, m.source, m.target) for m in moves)
        if port_id is not None:
            name = "{}@{}".format(port_id, name)
        return Transition(-1, name, port_id, tuple(moves),
                          conj(*guards), tuple(actions), interval)

    def lift_priorities(self, transitions, parts) -> list:
        by_event = {}
        for n, t in enumerate(transitions):
            if t.event is not None:
                by_event.setdefault(t.event, []).append(n)
        pairs = set()
        for hi, lo in self.tree.priorities:
            for a in by_event.get(hi, ()):
                for b in by_event.get(lo, ()):
                    pairs.add((a, b))
        by_instance = {}
        for n, part in enumerate(parts):
            for path in part:
                by_instance.setdefault(path, []).append(n)
        for path, members in by_instance.items():
            for a in members:
                for b in members:
                    if a != b and parts[a][path].dominates(parts[b][path]):
                        pairs.add((a, b))
        return sorted(pairs)


def compile_program(program: ast.Program, max_transitions: Optional[int] = None):
    """Timed transition system of a well-formed program"""
    return Compiler(program, max_transitions).compile()
