#!/usr/bin/python3
"""Generated models: random timed transition systems and synthetic task tables"""

import random
from typing import Optional

from tempock import settings
from tempock.fiacre.ast import TimeInterval
from tempock.library.tasks import TaskSpec
from tempock.tts.expr import TRUE, BinOp, Const, Old, VarRef, negate
from tempock.tts.system import Move, TimedTransitionSystem, Transition, Update, Variable

PERIODS = (5, 10, 20)
FLAG = "x"


def seeded(seed: Optional[int] = None) -> random.Random:
    """Generator seeded from the argument, else TEMPOCK_SEED, else 42"""
    if seed is None:
        seed = int(settings.SEED) if settings.SEED else 42
    return random.Random(seed)


def _interval(rng, max_bound, unbounded_ratio, strict_ratio) -> TimeInterval:
    lower = rng.randint(0, max_bound)
    strict = rng.random() < strict_ratio
    if rng.random() < unbounded_ratio:
        return TimeInterval.unbounded(lower, strict)
    upper = rng.randint(lower, max_bound)
    if strict and upper > lower:
        lower_strict, upper_strict = rng.choice(((True, False), (False, True), (True, True)))
        return TimeInterval(lower, lower_strict, upper, upper_strict)
    return TimeInterval.closed(lower, upper)


def _priorities(rng, count, priority_ratio) -> list:
    rank = list(range(count))
    rng.shuffle(rank)
    pairs = set()
    for tid in range(count):
        if count > 1 and rng.random() < priority_ratio:
            other = rng.choice([u for u in range(count) if u != tid])
            pairs.add((tid, other) if rank[tid] < rank[other] else (other, tid))
    return sorted(pairs)


def random_tts(rng: random.Random, processes: int = 2, locations: int = 3,
               transitions: int = 4, max_bound: int = 3, sync_ratio: float = 0.25,
               unbounded_ratio: float = 0.15, strict_ratio: float = 0.0,
               priority_ratio: float = 0.0) -> TimedTransitionSystem:
    """A random system of small automata over integer intervals.

    A shared boolean flag guards and is toggled by some transitions; a
    fraction of the transitions move two automata at once. Finite bounds
    stay within ``max_bound``. ``strict_ratio`` opens some bounds of
    non-point intervals and ``priority_ratio`` adds priority pairs drawn
    from one random order, so the relation is acyclic.
    """
    names = ["p{}".format(i) for i in range(processes)]
    domain = tuple("l{}".format(k) for k in range(locations))
    variables = [Variable(FLAG, (False, True), False)]
    variables += [Variable(n + "#loc", domain, domain[0]) for n in names]
    flag = VarRef(0, FLAG)
    result = []
    for n in range(transitions * processes):
        owners = [rng.randrange(processes)]
        if processes > 1 and rng.random() < sync_ratio:
            owners.append(rng.choice([p for p in range(processes) if p != owners[0]]))
        moves = tuple(Move(p + 1, names[p], rng.choice(domain), rng.choice(domain))
                      for p in sorted(owners))
        guard = TRUE
        roll = rng.random()
        if roll < 0.2:
            guard = BinOp("=", flag, Const(True))
        elif roll < 0.4:
            guard = BinOp("=", flag, Const(False))
        actions = ()
        if rng.random() < 0.3:
            actions = (Update(0, FLAG, negate(Old(0, FLAG))),)
        event = "e{}".format(n) if len(moves) > 1 else None
        label = ",".join("{}:{}->{}".format(m.instance, m.source, m.target) for m in moves)
        result.append(Transition(-1, "t{}@{}".format(n, label), event, moves, guard, actions,
                                 _interval(rng, max_bound, unbounded_ratio, strict_ratio)))
    priorities = _priorities(rng, len(result), priority_ratio)
    return TimedTransitionSystem(variables, result, priorities, names)


def synthetic_tasks(count: int, seed: Optional[int] = None) -> list[TaskSpec]:
    """A task table of ``count`` tasks with periods from {5, 10, 20}.

    Each job may finish anywhere in [0, period/5]. Priorities follow the
    task index and offsets are any integer below the period.
    """
    rng = seeded(seed)
    tasks = []
    for k in range(count):
        period = PERIODS[k % len(PERIODS)]
        wcet = max(1, period // 5)
        tasks.append(TaskSpec("t{}".format(k + 1), period, rng.randrange(period), period,
                              k + 1, 0, wcet))
    return tasks
