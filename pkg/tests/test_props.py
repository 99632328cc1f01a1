"""Patterns, observers and the verdicts of the periodic controller"""

import pytest

from conftest import SMALL_CYCLE, TWO_WAITS, choice_program, data_file
from tempock.explorer.oracle import replay
from tempock.fiacre.ast import TimeInterval
from tempock.fiacre.instances import InstanceTree
from tempock.fiacre.parser import parse_program, parse_property
from tempock.library.periodic import instantiate_periodic
from tempock.library.tasks import INTERVAL, build_tasksystem, parse_task_table
from tempock.props.buchi import to_buchi
from tempock.props.checker import EXHAUSTED, check_property, verify
from tempock.props.formula import Always, Atom, Eventually, FalseF, Implies, Not, TrueF
from tempock.props.observers import ObserverProduct, check_noninterference, compile_pattern
from tempock.props.patterns import LeadsTo
from tempock.tts.compiler import compile_program
from tempock.tts.expr import TRUE
from tempock.tts.system import TimedTransitionSystem, Transition


def body(text):
    return parse_property("property p is " + text).body


class TestPeriodicRequirements:

    @pytest.mark.parametrize("name", ["req1", "req2", "req3", "req4"])
    def test_declared_requirements_hold(self, periodic, name):
        verdict = check_property(periodic, periodic.property_decl(name).body)
        assert verdict.holds, verdict.detail
        assert verdict.counterexample is None
        assert verdict.classes > 0

    def test_dispatch_leads_to_completion(self, periodic):
        verdict = check_property(
            periodic, body("(main/1/event d) leadsto (main/1/event c) within [0; 20]"))
        assert verdict.holds

    def test_early_response_is_a_violation(self, periodic):
        verdict = check_property(
            periodic, body("(main/1/event d) leadsto (main/1/event c) within [1; 2]"))
        assert verdict.violated
        assert len(verdict.counterexample) > 0
        assert not verdict.counterexample.is_lasso
        assert verdict.to_dict()["counterexample"]["prefix"]

    def test_liveness_counterexample_is_a_lasso(self, periodic):
        verdict = check_property(periodic, body("ltl <> main/1/state sched_error"))
        assert verdict.violated
        assert verdict.counterexample.is_lasso
        assert "-- cycle --" in verdict.counterexample.to_text()

    def test_resettable(self, periodic):
        assert check_property(periodic, body("Resettable (main/1/event w)")).holds

    def test_no_global_deadlock(self, periodic):
        assert check_property(periodic, body("NoGlobalDeadlock")).holds

    def test_exhaustion(self, periodic):
        verdict = check_property(periodic, periodic.property_decl("req1").body, max_classes=2)
        assert verdict.status == EXHAUSTED
        assert verdict.counterexample is None


class TestObservers:

    def test_timed_pattern_gets_an_observer(self, periodic):
        tts = compile_program(periodic)
        resolved = InstanceTree(periodic).resolve_body(periodic.property_decl("req2").body)
        assert isinstance(resolved, LeadsTo)
        product = compile_pattern(resolved, tts)
        assert product.has_observer
        assert product.verdict_kind == "safety"
        assert product.system is tts
        assert len(product.tts.transitions) > len(tts.transitions)
        assert not product.is_error(product.tts.initial)

    def test_untimed_pattern_is_a_formula(self, periodic):
        tts = compile_program(periodic)
        resolved = InstanceTree(periodic).resolve_body(periodic.property_decl("req4").body)
        product = compile_pattern(resolved, tts)
        assert not product.has_observer
        assert product.tts is tts
        assert check_noninterference(tts, product)

    def test_observer_leaves_the_system_alone(self, periodic):
        tts = compile_program(periodic)
        resolved = InstanceTree(periodic).resolve_body(periodic.property_decl("req2").body)
        assert check_noninterference(tts, compile_pattern(resolved, tts), depth=6)


class TestBuchi:

    def test_false_is_empty(self):
        assert to_buchi(FalseF()).is_empty

    def test_true_accepts(self):
        automaton = to_buchi(TrueF())
        assert not automaton.is_empty
        assert automaton.initial


def _corpus(periodic):
    """Models paired with a target to avoid and a condition to revisit"""
    with open(data_file("tasks", "single_task.txt"), encoding="UTF-8") as f:
        solo = parse_task_table(f.read())
    stuck = SMALL_CYCLE.replace("  from s1 a; to s0\n", "")
    half = SMALL_CYCLE.replace("wait [1,2]", "wait [1/2,1]")
    return [
        (periodic, "main/1/state sched_error", "main/1/event w"),
        (parse_program(SMALL_CYCLE), "main/1/state s1", "main/1/event a"),
        (parse_program(stuck), "main/1/state s1", "main/1/event a"),
        (parse_program(half), "main/1/state s1", "main/1/state s0"),
        (choice_program(priority=True), "main/1/event b", "main/1/state s0"),
        (choice_program(priority=False), "main/1/event b", "main/1/state s1"),
        (parse_program(TWO_WAITS), "main/2/state s1", "main/1/state s0"),
        (instantiate_periodic(period=5), "main/1/state sched_error", "main/1/state s0"),
        (instantiate_periodic(period=4, instances=2), "main/2/state sched_error",
         "main/2/state s0"),
        (build_tasksystem(solo), "main/1/state sched_error", "main/2/state run"),
        (build_tasksystem(solo, INTERVAL), "main/1/state sched_error", "main/2/state fin"),
    ]


class TestUntimedPatterns:

    def test_patterns_agree_with_their_ltl_encoding(self, periodic):
        for n, (program, target, recurring) in enumerate(_corpus(periodic)):
            pairs = [
                ("NoGlobalDeadlock", "ltl [] not dead"),
                ("Unreachable ({})".format(target), "ltl [] not ({})".format(target)),
                ("Resettable ({})".format(recurring), "ltl [] <> ({})".format(recurring)),
            ]
            for pattern, encoding in pairs:
                expected = check_property(program, body(encoding)).status
                assert check_property(program, body(pattern)).status == expected, (n, pattern)

    def test_stuck_model_deadlocks(self):
        stuck = parse_program(SMALL_CYCLE.replace("  from s1 a; to s0\n", ""))
        verdict = check_property(stuck, body("NoGlobalDeadlock"))
        assert verdict.violated
        assert verdict.counterexample.steps[-1].event == "(stutter)"


TWO_TRIGGERS = """
process p [a, b : none] is
  states s0, s1, s2, s3, s4, s5
  from s0 a; to s1
  from s1 wait [2,2]; to s2
  from s2 a; to s3
  from s3 wait [2,2]; to s4
  from s4 b; to s5

component main is
  port a, b : none in [0,0]
  par p [a, b] end

main
"""

ALTERNATING = """
process p [dl, d : none] is
  states s0, s1
  from s0 dl; to s1
  from s1 d; to s0

component main is
  port dl, d : none in [1,1]
  par p [dl, d] end

main
"""

# d once, then dl, then nothing
STOPPING = """
process p [dl, d : none] is
  states s0, s1, s2
  from s0 d; to s1
  from s1 dl; to s2

component main is
  port dl, d : none in [1,1]
  par p [dl, d] end

main
"""

TIMED_PATTERNS = ("({r}) leadsto ({t}) within [0; 3]", "absent ({t}) after ({r}) within [1; 4]")


class TestAbsentAfter:

    @pytest.mark.parametrize("window", ["[4; 4]", "[3; 5]", "[2; 2]"])
    def test_every_trigger_keeps_its_window(self, window):
        program = parse_program(TWO_TRIGGERS)
        verdict = check_property(
            program, body("absent (main/1/event b) after (main/1/event a) within " + window))
        assert verdict.violated
        assert verdict.counterexample.steps[-1].event.endswith("b")

    @pytest.mark.parametrize("window", ["[1; 1]", "]4; 6]"])
    def test_windows_missing_the_forbidden_event(self, window):
        program = parse_program(TWO_TRIGGERS)
        verdict = check_property(
            program, body("absent (main/1/event b) after (main/1/event a) within " + window))
        assert verdict.holds


class TestNonInterference:

    @pytest.mark.slow
    def test_timed_patterns_leave_every_corpus_model_alone(self, periodic):
        for n, (program, target, recurring) in enumerate(_corpus(periodic)):
            tts = compile_program(program)
            tree = InstanceTree(program)
            for text in TIMED_PATTERNS:
                resolved = tree.resolve_body(body(text.format(r=recurring, t=target)))
                product = compile_pattern(resolved, tts)
                assert product.has_observer
                assert check_noninterference(tts, product, depth=10), (n, text)

    def test_blocking_observer_is_detected(self):
        tts = compile_program(parse_program(SMALL_CYCLE))
        n = len(tts.transitions)
        blocker = Transition(-1, "block", None, (), TRUE, (), TimeInterval.point(0),
                             origin="observer")
        composed = TimedTransitionSystem(
            tts.variables, tts.transitions + (blocker,),
            list(tts.priorities) + [(n, tid) for tid in range(n)], tts.instances,
            tts.constants, tts.literals)
        product = ObserverProduct(tts, composed, None, error_var="block")
        assert not check_noninterference(tts, product, depth=4)


class TestCounterexampleReplay:

    @pytest.mark.slow
    def test_every_violation_replays_on_a_grid(self, periodic):
        texts = ("Unreachable ({t})", "Resettable ({r})", "NoGlobalDeadlock",
                 "ltl <> ({t})") + TIMED_PATTERNS
        replayed = 0
        for n, (program, target, recurring) in enumerate(_corpus(periodic)):
            tts = compile_program(program)
            tree = InstanceTree(program)
            for text in texts:
                resolved = tree.resolve_body(body(text.format(r=recurring, t=target)))
                product = compile_pattern(resolved, tts)
                verdict = verify(product)
                if not verdict.violated:
                    continue
                cex = verdict.counterexample
                assert all(step.time is not None for step in cex.steps), (n, text)
                assert replay(product.tts, cex) is not None, (n, text)
                replayed += 1
        assert replayed >= 5


def accepts(automaton, prefix, cycle) -> bool:
    """Whether the automaton has an accepting run on the lasso word prefix.cycle^w"""
    word = list(prefix) + list(cycle)

    def reads(q, letter):
        return all(letter[lit.atom] == lit.positive for lit in automaton.labels[q])

    def successors(node):
        pos, q = node
        nxt = pos + 1 if pos + 1 < len(word) else len(prefix)
        return [(nxt, r) for r in automaton.successors[q] if reads(r, word[nxt])]

    start = [(0, q) for q in automaton.initial if reads(q, word[0])]
    reachable, stack = set(start), list(start)
    while stack:
        for succ in successors(stack.pop()):
            if succ not in reachable:
                reachable.add(succ)
                stack.append(succ)
    for node in reachable:
        if node[1] not in automaton.accepting:
            continue
        seen, stack = set(), successors(node)
        while stack:
            succ = stack.pop()
            if succ == node:
                return True
            if succ not in seen:
                seen.add(succ)
                stack.extend(successors(succ))
    return False


P, A, B = Atom("p"), Atom("a"), Atom("b")


class TestBuchiWords:

    @pytest.mark.parametrize("prefix, cycle, never", [
        ([], [{"p": False}], True),
        ([{"p": False}], [{"p": True}], False),
        ([{"p": True}], [{"p": False}], False),
        ([{"p": False}, {"p": False}], [{"p": False}, {"p": True}], False),
    ])
    def test_never_p(self, prefix, cycle, never):
        formula = Always(Not(P))
        assert accepts(to_buchi(formula), prefix, cycle) == never
        assert accepts(to_buchi(Not(formula)), prefix, cycle) != never

    @pytest.mark.parametrize("prefix, cycle, answered", [
        ([], [{"a": True, "b": False}, {"a": False, "b": True}], True),
        ([{"a": True, "b": False}], [{"a": False, "b": False}], False),
        ([], [{"a": True, "b": True}], True),
        ([{"a": False, "b": False}], [{"a": False, "b": False}], True),
        ([{"a": False, "b": True}], [{"a": True, "b": False}], False),
    ])
    def test_every_request_is_answered(self, prefix, cycle, answered):
        formula = Always(Implies(A, Eventually(B)))
        assert accepts(to_buchi(formula), prefix, cycle) == answered
        assert accepts(to_buchi(Not(formula)), prefix, cycle) != answered


class TestEventualResponse:

    RESPONSE = "ltl [] (main/1/event dl => <> main/1/event d)"

    def test_alternating_model_answers_every_deadline(self):
        assert check_property(parse_program(ALTERNATING), body(self.RESPONSE)).holds

    def test_stopping_model_is_a_violation(self):
        verdict = check_property(parse_program(STOPPING), body(self.RESPONSE))
        assert verdict.violated
        assert verdict.counterexample.is_lasso

    def test_formula_and_negation_never_both_hold(self, periodic):
        texts = ("[] not ({t})", "[] <> ({r})", "<> ({t})", "[] (({r}) => <> ({t}))")
        for n, (program, target, recurring) in enumerate(_corpus(periodic)):
            for text in texts:
                formula = text.format(r=recurring, t=target)
                positive = check_property(program, body("ltl " + formula))
                negative = check_property(program, body("ltl not ({})".format(formula)))
                assert not (positive.holds and negative.holds), (n, formula)
                assert EXHAUSTED not in (positive.status, negative.status), (n, formula)
