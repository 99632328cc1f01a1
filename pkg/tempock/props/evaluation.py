#!/usr/bin/python3
"""Resolved atoms lowered to expression IR over a timed transition system.

State atoms read a configuration. Step atoms read a firing: the transition
itself (events, entered and left states) or the valuations on both sides of
it (``change``). Lowered expressions follow the ``fn(cur, pre)`` convention,
``cur`` being the configuration after the step.
"""

from tempock.props import atoms as A
from tempock.props.formula import (And, Atom, FalseF, Implies, Not, Or, TrueF,
                                   atoms_of)
from tempock.tts.expr import (FALSE, TRUE, BinOp, Const, Ite, Old, UnOp, VarRef,
                              compile_expr, conj, disj, lower, negate)


def to_old(node):
    """Same expression reading the configuration before the step"""
    match node:
        case VarRef(index, name):
            return Old(index, name)
        case UnOp(op, operand):
            return UnOp(op, to_old(operand))
        case BinOp(op, left, right):
            return BinOp(op, to_old(left), to_old(right))
        case Ite(cond, then, orelse):
            return Ite(to_old(cond), to_old(then), to_old(orelse))
    return node


def has_step_atoms(formula) -> bool:
    return any(A.is_step_atom(a) for a in atoms_of(formula))


class AtomEvaluator:
    """Lowers and evaluates resolved atoms against one system"""

    def __init__(self, tts):
        self.tts = tts
        self._cache = {}

    def state_ir(self, atom, old=False):
        tts = self.tts
        match atom:
            case A.StateAtom(instance, state):
                loc = instance + "#loc"
                node = BinOp("=", VarRef(tts.index[loc], loc), Const(state))
            case A.ValueAtom(_, predicate):
                node = lower(predicate, tts.index, tts.constants, tts.literals)
            case A.StartAtom() | A.DeadAtom():
                return FALSE
            case _:
                raise TypeError("not a state atom: {}".format(atom))
        return to_old(node) if old else node

    def step_ir(self, atom, transition):
        match atom:
            case A.EventAtom(port, _):
                return TRUE if transition.event == port else FALSE
            case A.EnterAtom(instance, state):
                move = transition.move_of(instance)
                entered = move is not None and move.target == state and move.source != state
                return TRUE if entered else FALSE
            case A.LeaveAtom(instance, state):
                move = transition.move_of(instance)
                left = move is not None and move.source == state and move.target != state
                return TRUE if left else FALSE
            case A.ChangeAtom(_, var):
                index = self.tts.index[var]
                if not _writes(transition, index):
                    return FALSE
                return BinOp("<>", VarRef(index, var), Old(index, var))
        raise TypeError("not a step atom: {}".format(atom))

    def formula_ir(self, formula, transition=None, old=False):
        """Propositional formula as IR; step atoms read ``transition`` (None is a stutter)"""
        match formula:
            case Atom(atom):
                if A.is_step_atom(atom):
                    return FALSE if transition is None else self.step_ir(atom, transition)
                return self.state_ir(atom, old)
            case TrueF():
                return TRUE
            case FalseF():
                return FALSE
            case Not(f):
                return negate(self.formula_ir(f, transition, old))
            case And(l, r):
                return conj(self.formula_ir(l, transition, old), self.formula_ir(r, transition, old))
            case Or(l, r):
                return disj(self.formula_ir(l, transition, old), self.formula_ir(r, transition, old))
            case Implies(l, r):
                return disj(negate(self.formula_ir(l, transition, old)),
                            self.formula_ir(r, transition, old))
        raise ValueError("not a propositional formula: {!r}".format(formula))

    def occurrence_ir(self, formula, transition):
        """Whether firing ``transition`` is an occurrence of ``formula``.

        Formulas over step atoms occur on the step itself, reading state
        atoms after it. Pure state formulas occur when they become true.
        """
        post = self.formula_ir(formula, transition)
        if has_step_atoms(formula):
            return post
        return conj(post, negate(self.formula_ir(formula, transition, old=True)))

    def holds_initially(self, formula) -> bool:
        """Occurrence at the initial configuration, where only ``start`` fires"""
        match formula:
            case Atom(A.StartAtom()):
                return True
            case Atom(atom):
                return not A.is_step_atom(atom) and self.holds_in(atom, self.tts.initial)
            case TrueF():
                return True
            case FalseF():
                return False
            case Not(f):
                return not self.holds_initially(f)
            case And(l, r):
                return self.holds_initially(l) and self.holds_initially(r)
            case Or(l, r):
                return self.holds_initially(l) or self.holds_initially(r)
            case Implies(l, r):
                return not self.holds_initially(l) or self.holds_initially(r)
        raise ValueError("not a propositional formula: {!r}".format(formula))

    # ------------------------------------------------------------ direct evaluation

    def holds_in(self, atom, state) -> bool:
        key = ("state", atom)
        fn = self._cache.get(key)
        if fn is None:
            fn = self._cache[key] = compile_expr(self.state_ir(atom))
        return bool(fn(state, state))

    def holds_on(self, atom, source, tid, target) -> bool:
        if tid is None:
            return False
        key = ("step", atom, tid)
        fn = self._cache.get(key)
        if fn is None:
            fn = self._cache[key] = compile_expr(self.step_ir(atom, self.tts.transitions[tid]))
        return bool(fn(target, source))


def _writes(transition, index) -> bool:
    return any(getattr(a, "index", None) == index for a in transition.actions)
