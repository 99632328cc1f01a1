"""Parser, printer and well-formedness"""

import random

import pytest

from conftest import SMALL_CYCLE
from tempock.errors import IllFormedProgram, ParseError, UnboundIntervalSymbol
from tempock.fiacre import ast
from tempock.fiacre.parser import parse_file, parse_program, parse_property
from tempock.fiacre.printer import pretty_print
from tempock.fiacre.wellformed import check_wellformed, ensure_wellformed
from tempock.props.patterns import AbsentAfter, LeadsTo, RawLtl


def body_of(text, state="s0"):
    program = parse_program("process p [a : none] is\n  states s0, s1\n"
                            "  var x : 0..3 := 0\n  from {} {}\n".format(state, text))
    return program.process("p").blocks[state]


class TestParsePeriodic:

    def test_declarations(self, periodic_path):
        program = parse_file(periodic_path)
        assert program.root_name == "main"
        assert program.constants == {"T": 20}
        assert [p.name for p in program.properties] == ["req1", "req2", "req3", "req4"]
        assert program.process("periodic").states == ("s0", "sched_error")

    def test_symbolic_bounds_resolve(self, periodic_path):
        comp = parse_file(periodic_path).component("main")
        ports = {p.name: p.interval for p in comp.ports}
        assert ports["w"] == ast.TimeInterval.point(20)
        assert ports["d"] == ast.TimeInterval.point(0)
        assert comp.priorities == (("c", "dl"), ("dl", "d"))

    def test_patterns(self, periodic_path):
        program = parse_file(periodic_path)
        assert isinstance(program.property_decl("req1").body, RawLtl)
        req2 = program.property_decl("req2").body
        assert isinstance(req2, LeadsTo)
        assert req2.interval == ast.TimeInterval.closed(0, 20)
        req3 = program.property_decl("req3").body
        assert isinstance(req3, AbsentAfter)
        assert req3.interval == ast.TimeInterval(0, True, 20, True)

    def test_printed_program_parses_back_equal(self, periodic_path):
        program = parse_file(periodic_path)
        assert parse_program(pretty_print(program)) == program


class TestStatements:

    def test_open_and_unbounded_intervals(self):
        first = ast.flatten(body_of("wait ]1,3[; to s1"))[0]
        assert first.interval == ast.TimeInterval(1, True, 3, True)
        first = ast.flatten(body_of("wait [2,...[; to s1"))[0]
        assert first.interval == ast.TimeInterval.unbounded(2)
        assert first.interval.is_infinite

    @pytest.mark.parametrize("text, lower_strict, upper_strict", [
        ("[1,3]", False, False), ("]1,3]", True, False),
        ("[1,3[", False, True), ("]1,3[", True, True)])
    def test_bracket_forms(self, text, lower_strict, upper_strict):
        first = ast.flatten(body_of("wait {}; to s1".format(text)))[0]
        assert first.interval == ast.TimeInterval(1, lower_strict, 3, upper_strict)
        assert str(first.interval) == text

    def test_if_without_else_is_null(self):
        stmt = ast.flatten(body_of("if x = 0 then x := 1 end; to s1"))[0]
        assert isinstance(stmt, ast.If)
        assert isinstance(stmt.orelse, ast.Skip)

    def test_elsif_nests_in_else(self):
        stmt = ast.flatten(body_of(
            "if x = 0 then x := 1 elsif x = 1 then x := 2 else x := 0 end; to s1"))[0]
        assert isinstance(stmt.orelse, ast.If)
        assert isinstance(stmt.orelse.orelse, ast.Assign)

    def test_nondeterministic_assignment(self):
        stmt = ast.flatten(body_of("x := any in 1..2; to s1"))[0]
        assert stmt == ast.NondetAssign("x", ast.RangeType(1, 2))

    def test_select_with_unless(self):
        stmt = body_of("select a; to s1 [] wait [1,1]; loop unless on x = 3; to s1 end")
        assert isinstance(stmt, ast.Select)
        assert len(stmt.branches) == 2
        assert len(stmt.unless) == 1

    def test_priority_chain_and_labels(self):
        program = parse_program(
            "component main is\n  port a, b, c : none in [0,0]\n"
            "  priority a > b > c\n  par t1 : p [a] || p [b] end\nmain\n")
        comp = program.component("main")
        assert comp.priorities == (("a", "b"), ("b", "c"))
        assert comp.instances[0].label == "t1"
        assert comp.instances[1].label is None


class TestParseErrors:

    def test_unbound_interval_symbol(self):
        with pytest.raises(UnboundIntervalSymbol) as info:
            body_of("wait [0,D]; to s1")
        assert info.value.symbol == "D"
        assert info.value.code == 65

    def test_missing_instance(self):
        with pytest.raises(ParseError) as info:
            parse_program("component main is par end\nmain\n")
        assert info.value.span.start_line == 1

    def test_unterminated_comment(self):
        with pytest.raises(ParseError):
            parse_program("/* never closed")

    def test_temporal_operator_in_pattern(self):
        with pytest.raises(ParseError):
            parse_property("property p is absent <> main/1/state s0")


class TestWellFormed:

    def test_shipped_models(self, periodic_path):
        assert check_wellformed(parse_file(periodic_path)) == []
        assert check_wellformed(parse_program(SMALL_CYCLE)) == []

    def test_empty_program_has_no_root(self):
        with pytest.raises(IllFormedProgram) as info:
            ensure_wellformed(parse_program(""))
        assert "missing root component" in info.value.description
        assert info.value.code == 65

    def test_undeclared_state(self):
        program = parse_program(SMALL_CYCLE.replace("to s0", "to s9"))
        messages = [d.message for d in check_wellformed(program)]
        assert any("s9" in m for m in messages)

    def test_unresolved_property(self):
        program = parse_program(SMALL_CYCLE.replace(
            "\nmain\n", "\nproperty bad is absent (main/1/state nowhere)\n\nmain\n"))
        diagnostics = check_wellformed(program)
        assert len(diagnostics) == 1
        assert "nowhere" in diagnostics[0].message

    def test_fallthrough_block(self):
        program = parse_program(SMALL_CYCLE.replace("from s1 a; to s0", "from s1 a"))
        with pytest.raises(IllFormedProgram):
            ensure_wellformed(program)


class TestProgramMembers:

    def test_constants_is_a_property(self):
        assert isinstance(vars(ast.Program)["constants"], property)
        assert ast.Program().constants == {}

    def test_unknown_property_declaration(self, periodic_path):
        program = parse_file(periodic_path)
        assert program.property_decl("req9") is None
        assert program.property_decl("req4").name == "req4"


def _interval_text(rng):
    lower = rng.randint(0, 3)
    if rng.random() < 0.2:
        return "[{},...[".format(lower)
    return "{}{},{}{}".format(rng.choice("[]"), lower, lower + rng.randint(1, 3),
                              rng.choice("[]"))


def _statement(rng, states, ports):
    match rng.choice(("wait", "port", "assign", "on", "select")):
        case "wait":
            return "wait {}".format(_interval_text(rng))
        case "port":
            return rng.choice(ports)
        case "assign":
            return "x := {}".format(rng.randint(0, 3))
        case "on":
            return "on x {} {}".format(rng.choice(("=", "<>", "<")), rng.randint(0, 3))
    return "select {}; to {} [] {}; to {} end".format(
        rng.choice(ports), rng.choice(states), rng.choice(ports), rng.choice(states))


def random_program_text(rng):
    """A small single-process program drawn from a fixed template"""
    states = ["s{}".format(k) for k in range(rng.randint(1, 4))]
    ports = ["a", "b", "c"][:rng.randint(1, 3)]
    lines = ["process p [{} : none] is".format(", ".join(ports)),
             "  states " + ", ".join(states),
             "  var x : 0..3 := {}".format(rng.randint(0, 3))]
    for state in states:
        steps = [_statement(rng, states, ports) for _ in range(rng.randint(1, 3))]
        if not steps[-1].startswith("select"):
            steps.append("to " + rng.choice(states))
        lines.append("  from {} {}".format(state, "; ".join(steps)))
    lines += ["", "component main is",
              "  port " + ", ".join("{} : none in {}".format(p, _interval_text(rng))
                                    for p in ports)]
    if len(ports) > 1:
        lines.append("  priority {} > {}".format(ports[0], ports[1]))
    lines += ["  par p [{}] end".format(", ".join(ports)), "", "main", ""]
    return "\n".join(lines)


class TestRoundTrip:

    def test_random_programs_print_and_parse_back(self):
        rng = random.Random(5)
        for n in range(60):
            text = random_program_text(rng)
            program = parse_program(text)
            assert parse_program(pretty_print(program)) == program, (n, text)
