#!/usr/bin/python3
"""Compilation of realtime patterns into observers composed with the system.

An observer is a pair of fresh variables (its phase and a generation bit)
plus a few internal timer transitions. Every system transition gets extra
updates that move the phase when the step is an occurrence of an observed
formula; those updates never block, so the observer cannot restrict the
system. Timers are guarded by the phase and the generation bit: flipping
the bit disables the running copy of a timer and enables the other one,
which restarts its clock.

Timers that must fire before system events due at the same instant are
eager: a point interval placed above every system transition. The others
are plain or lazy, which is enough for reachability of the error phase.
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional

from tempock.errors import UnsupportedInterval
from tempock.explorer.classes import firing_constraints, initial_class, successor
from tempock.fiacre.ast import TimeInterval
from tempock.props.atoms import DeadAtom
from tempock.props.evaluation import AtomEvaluator, has_step_atoms
from tempock.props.formula import Always, Atom, Eventually, Formula, Not
from tempock.props.patterns import (Absent, AbsentAfter, LeadsTo, NoGlobalDeadlock,
                                    RawLtl, Resettable, Unreachable)
from tempock.tts.expr import (FALSE, TRUE, BinOp, Const, Ite, Old, VarRef, conj,
                              disj, negate)
from tempock.tts.system import Choose, TimedTransitionSystem, Transition, Update, Variable

logger = logging.getLogger(__name__)

LEADSTO_PHASES = ("idle", "early", "win", "err")
ABSENT_PHASES = ("idle", "armed", "open", "err")
ERROR = "err"


@dataclass
class ObserverProduct:
    """A system with (or without) an observer and the rule deciding the verdict"""

    system: TimedTransitionSystem
    tts: TimedTransitionSystem
    pattern: object
    formula: Optional[Formula] = None
    error_var: Optional[str] = None

    @property
    def has_observer(self) -> bool:
        return self.error_var is not None

    @property
    def verdict_kind(self) -> str:
        return "safety" if self.has_observer else "ltl"

    def is_error(self, state) -> bool:
        return state[self.tts.index[self.error_var]] == ERROR


def _ite(cond, then, orelse):
    if cond == TRUE or then == orelse:
        return then
    if cond == FALSE:
        return orelse
    return Ite(cond, then, orelse)


class _ObserverBuilder:
    """Shared plumbing of the two timed observers"""

    phases: tuple = ()

    def __init__(self, name, tts: TimedTransitionSystem):
        self.name = name
        self.tts = tts
        self.ev = AtomEvaluator(tts)
        self.phase_id = "{}#obs".format(name)
        self.gen_id = "{}#gen".format(name)
        self.phase_index = len(tts.variables)
        self.gen_index = self.phase_index + 1
        self.timers = []
        self.eager = []

    @property
    def old(self):
        return Old(self.phase_index, self.phase_id)

    def was(self, *phases):
        return disj(*[BinOp("=", self.old, Const(p)) for p in phases])

    def now(self, *phases):
        ref = VarRef(self.phase_index, self.phase_id)
        return disj(*[BinOp("=", ref, Const(p)) for p in phases])

    def timer(self, label, phases, target, interval, eager=False):
        """One copy of the timer per generation bit value"""
        for bit in (False, True):
            guard = conj(self.now(*phases),
                         BinOp("=", VarRef(self.gen_index, self.gen_id), Const(bit)))
            action = Update(self.phase_index, self.phase_id, target)
            self.timers.append(Transition(-1, "{}.{}#{}".format(self.name, label, int(bit)),
                                          None, (), guard, (action,), interval,
                                          origin="observer"))
            self.eager.append(eager)

    def step_updates(self, transition) -> tuple:
        raise NotImplementedError

    def initial_phase(self) -> str:
        raise NotImplementedError

    def build(self) -> TimedTransitionSystem:
        tts = self.tts
        transitions = []
        for t in tts.transitions:
            extra = self.step_updates(t)
            transitions.append(replace(t, actions=t.actions + extra) if extra else t)
        n = len(transitions)
        transitions.extend(self.timers)
        priorities = list(tts.priorities)
        for k, eager in enumerate(self.eager):
            if eager:
                priorities.extend((n + k, tid) for tid in range(n))
        variables = list(tts.variables) + [
            Variable(self.phase_id, self.phases, self.initial_phase()),
            Variable(self.gen_id, (False, True), False)]
        composed = TimedTransitionSystem(variables, transitions, priorities, tts.instances,
                                         tts.constants, tts.literals)
        logger.debug("observer %s adds %d timers", self.name, len(self.timers))
        return composed

    def updates(self, phase, restart) -> tuple:
        """Phase update plus a generation flip when ``restart`` holds"""
        out = ()
        if phase != self.old:
            out += (Update(self.phase_index, self.phase_id, phase),)
        if restart != FALSE:
            bit = Old(self.gen_index, self.gen_id)
            out += (Update(self.gen_index, self.gen_id, _ite(restart, negate(bit), bit)),)
        return out


class _LeadsToObserver(_ObserverBuilder):
    """Phases: idle, early (before the window), win (window open), err.

    Event responses count on the step that fires them; state responses
    count whenever they hold inside the window, including at its opening.
    """

    phases = LEADSTO_PHASES

    def __init__(self, name, tts, pattern: LeadsTo):
        super().__init__(name, tts)
        self.pattern = pattern
        iv = pattern.interval
        if iv.upper is None:
            raise UnsupportedInterval("leadsto needs a finite upper bound, got {}".format(iv))
        self.early_phase = iv.lower > 0 or iv.lower_strict
        if self.early_phase:
            holding = self.ev.formula_ir(pattern.response)
            # a closed lower bound accepts a response due with the opening
            self.timer("open", ("early",), _ite(holding, Const("idle"), Const("win")),
                       TimeInterval.point(iv.lower), eager=not iv.lower_strict)
        expiry = TimeInterval.unbounded(iv.upper, strict=not iv.upper_strict)
        self.timer("expire", ("early", "win"), Const(ERROR), expiry)

    def armed(self, response):
        if self.early_phase:
            return Const("early")
        return _ite(response, Const("idle"), Const("win"))

    def initial_phase(self) -> str:
        if not self.ev.holds_initially(self.pattern.trigger):
            return "idle"
        if not self.early_phase and self.ev.holds_initially(self.pattern.response):
            return "idle"
        return "early" if self.early_phase else "win"

    def step_updates(self, t) -> tuple:
        response = self.pattern.response
        trig = self.ev.occurrence_ir(self.pattern.trigger, t)
        resp = self.ev.formula_ir(response, t)
        if trig == FALSE and resp == FALSE:
            return ()
        early_error = FALSE
        if has_step_atoms(response):
            early_error = conj(resp, negate(self.ev.formula_ir(response)))
        latest = TRUE if self.pattern.latest else FALSE
        armed = self.armed(resp)
        # an answered window re-arms on a trigger of the same step
        win = _ite(resp, _ite(trig, armed, Const("idle")),
                   _ite(conj(trig, latest), armed, Const("win")))
        phase = _ite(self.was("idle"), _ite(trig, armed, self.old),
                     _ite(self.was("early"), _ite(early_error, Const(ERROR), Const("early")),
                          _ite(self.was("win"), win, self.old)))
        restart = disj(conj(self.was("early"), trig, latest, negate(early_error)),
                       conj(self.was("win"), trig, disj(resp, latest)))
        return self.updates(phase, restart)


class _AbsentAfterObserver(_ObserverBuilder):
    """Phases: idle, armed (window not yet open), open, err.

    The step that arms a window is judged against the window it replaces,
    so a trigger that is also forbidden never faults its own window.
    """

    phases = ABSENT_PHASES

    def __init__(self, name, tts, pattern: AbsentAfter):
        super().__init__(name, tts)
        self.pattern = pattern
        iv = pattern.interval
        self.early_phase = iv.lower > 0 or iv.lower_strict
        if self.early_phase:
            opening = (TimeInterval.unbounded(iv.lower, strict=True) if iv.lower_strict
                       else TimeInterval.point(iv.lower))
            holding = self.ev.formula_ir(pattern.forbidden)
            self.timer("open", ("armed",), _ite(holding, Const(ERROR), Const("open")), opening)
        if iv.upper is not None:
            self.timer("close", ("armed", "open"), Const("idle"),
                       TimeInterval.point(iv.upper), eager=iv.upper_strict)

    def initial_phase(self) -> str:
        if self.ev.holds_initially(self.pattern.trigger):
            return "armed" if self.early_phase else "open"
        return "idle"

    def step_updates(self, t) -> tuple:
        trig = self.ev.occurrence_ir(self.pattern.trigger, t)
        forbidden = self.ev.formula_ir(self.pattern.forbidden, t)
        if trig == FALSE and forbidden == FALSE:
            return ()
        arm = Const("armed" if self.early_phase else "open")
        restart = conj(trig, disj(self.was("armed"), conj(self.was("open"), negate(forbidden))))
        if restart == FALSE:
            phase = _ite(self.was("open"), _ite(forbidden, Const(ERROR), self.old),
                         _ite(self.was("idle"), _ite(trig, arm, self.old), self.old))
            return self.updates(phase, FALSE)
        # a trigger inside a running window either keeps that window or
        # restarts it, so the window of every trigger gets watched
        bit = VarRef(self.gen_index, self.gen_id)
        old_bit = Old(self.gen_index, self.gen_id)
        flipped = BinOp("<>", bit, old_bit)
        phase = _ite(self.was("open"), _ite(forbidden, Const(ERROR), _ite(flipped, arm, self.old)),
                     _ite(self.was("idle"), _ite(trig, arm, self.old), self.old))
        return (Choose(self.gen_index, self.gen_id, (False, True)),
                Update(self.gen_index, self.gen_id, _ite(restart, bit, old_bit)),
                Update(self.phase_index, self.phase_id, phase))


def pattern_formula(pattern) -> Optional[Formula]:
    """LTL encoding of an untimed pattern; None for timed ones"""
    match pattern:
        case Absent(f) | Unreachable(f):
            return Always(Not(f))
        case NoGlobalDeadlock():
            return Always(Not(Atom(DeadAtom())))
        case Resettable(f):
            return Always(Eventually(f))
        case RawLtl(f):
            return f
        case Formula():
            return pattern
    return None


def compile_pattern(pattern, tts: TimedTransitionSystem, name: str = "obs") -> ObserverProduct:
    """Observer product of a resolved pattern over a compiled system"""
    match pattern:
        case LeadsTo():
            composed = _LeadsToObserver(name, tts, pattern).build()
        case AbsentAfter():
            composed = _AbsentAfterObserver(name, tts, pattern).build()
        case _:
            formula = pattern_formula(pattern)
            if formula is None:
                raise ValueError("unsupported pattern: {!r}".format(pattern))
            return ObserverProduct(tts, tts, pattern, formula=formula)
    return ObserverProduct(tts, composed, pattern, error_var="{}#obs".format(name))


# ---------------------------------------------------------------- non-interference

def firing_sequences(tts: TimedTransitionSystem, depth: int, hidden=lambda t: False) -> set:
    """System firing sequences up to depth, with ``hidden`` transitions projected away"""
    words = set()

    def close(classes):
        seen = {c.key: c for c in classes}
        stack = list(classes)
        while stack:
            c = stack.pop()
            constraints = firing_constraints(tts, c)
            for tid in constraints:
                if hidden(tts.transitions[tid]):
                    for succ in successor(tts, c, tid, constraints):
                        if succ.key not in seen:
                            seen[succ.key] = succ
                            stack.append(succ)
        return list(seen.values())

    def extend(word, frontier):
        words.add(word)
        if len(word) == depth:
            return
        steps = {}
        for c in frontier:
            constraints = firing_constraints(tts, c)
            for tid in constraints:
                if not hidden(tts.transitions[tid]):
                    steps.setdefault(tid, []).extend(successor(tts, c, tid, constraints))
        for tid in sorted(steps):
            extend(word + (tid,), close(steps[tid]))

    extend((), close([initial_class(tts)]))
    return words


def check_noninterference(system: TimedTransitionSystem, product: ObserverProduct,
                          depth: int = 10) -> bool:
    """Whether composing the observer leaves the system's firing sequences intact"""
    if product.tts is system:
        return True
    bare = firing_sequences(system, depth)
    composed = firing_sequences(product.tts, depth, hidden=lambda t: t.is_observer)
    if bare != composed:
        logger.warning("observer changes %d firing sequences", len(bare ^ composed))
    return bare == composed
