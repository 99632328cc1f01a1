#!/usr/bin/python3
"""Recursive-descent parser for programs and property declarations"""

from fractions import Fraction
from typing import Mapping, Optional

from tempock.errors import ParseError, UnboundIntervalSymbol
from tempock.fiacre import ast
from tempock.fiacre.lexer import Token, tokenize
from tempock.props import formula as F
from tempock.props import patterns as P
from tempock.props.atoms import OBSERVABLE_KINDS, DeadAtom, Observable

# constructs of the full language that this front end does not accept
UNSUPPORTED = frozenset(("while", "case", "foreach", "queue", "array", "record",
                         "function", "channel", "out", "return"))

# tokens that close a statement sequence
STMT_FOLLOW = frozenset(("end", "unless", "else", "elsif", "from",
                         "process", "component", "type", "const", "property"))


class Parser:
    """Token-list parser; ``pos`` indexes the next token"""

    def __init__(self, text: str, filename: str = "<input>",
                 constants: Optional[Mapping[str, int]] = None):
        self.tokens = tokenize(text, filename)
        self.pos = 0
        self.constants = dict(constants or {})

    # ------------------------------------------------------------ primitives

    @property
    def nt(self) -> Token:
        return self.tokens[self.pos]

    def lookahead(self, n=1) -> Token:
        return self.tokens[min(self.pos + n, len(self.tokens) - 1)]

    @property
    def last(self) -> Token:
        return self.tokens[max(self.pos - 1, 0)]

    def advance(self) -> Token:
        tok = self.nt
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def peek(self, kind, value=None) -> bool:
        tok = self.nt
        return tok.kind == kind and (value is None or tok.value == value)

    def peek_kw(self, value) -> bool:
        return self.peek("KEYWORD", value)

    def peek_sym(self, value) -> bool:
        return self.peek("SYMBOL", value)

    def peek_word(self, value) -> bool:
        """Contextual keyword, lexed as an identifier"""
        return self.peek("IDENT", value)

    def error(self, *expected):
        tok = self.nt
        if tok.kind == "IDENT" and tok.value in UNSUPPORTED:
            raise ParseError(tok.span, list(expected), tok.describe(),
                             "{}: '{}' is not in the supported language subset"
                             .format(tok.span, tok.value))
        raise ParseError(tok.span, list(expected), tok.describe())

    def match(self, kind, description=None) -> Token:
        if not self.peek(kind):
            self.error(description or kind.lower())
        return self.advance()

    def match_ident(self) -> Token:
        return self.match("IDENT", "identifier")

    def match_kw(self, value) -> Token:
        if not self.peek_kw(value):
            self.error("'{}'".format(value))
        return self.advance()

    def match_sym(self, value) -> Token:
        if not self.peek_sym(value):
            self.error("'{}'".format(value))
        return self.advance()

    def match_word(self, value) -> Token:
        if not self.peek_word(value):
            self.error("'{}'".format(value))
        return self.advance()

    def accept_sym(self, value) -> bool:
        if self.peek_sym(value):
            self.advance()
            return True
        return False

    def accept_kw(self, value) -> bool:
        if self.peek_kw(value):
            self.advance()
            return True
        return False

    def peek_box(self) -> bool:
        """'[' immediately followed by ']': select separator or always"""
        return (self.peek_sym("[") and self.lookahead().kind == "SYMBOL"
                and self.lookahead().value == "]")

    def accept_box(self) -> bool:
        if self.peek_box():
            self.pos += 2
            return True
        return False

    def span_from(self, start: Token):
        return start.span.to(self.last.span)

    # ------------------------------------------------------------ program

    def parse_program(self) -> ast.Program:
        types, consts, processes, components, properties = [], [], [], [], []
        root = None
        while not self.peek("EOF"):
            if self.peek_kw("type"):
                types.append(self.parse_type_decl())
            elif self.peek_kw("const"):
                decl = self.parse_const_decl()
                self.constants[decl.name] = decl.value
                consts.append(decl)
            elif self.peek_kw("process"):
                processes.append(self.parse_process())
            elif self.peek_kw("component"):
                components.append(self.parse_component())
            elif self.peek_kw("property"):
                properties.append(self.parse_property())
            elif self.peek("IDENT") and self.lookahead().kind == "EOF":
                root = self.advance().value
            else:
                self.error("declaration", "root component name")
        return ast.Program(tuple(types), tuple(consts), tuple(processes),
                           tuple(components), tuple(properties), root)

    def parse_type_decl(self) -> ast.TypeDecl:
        start = self.match_kw("type")
        name = self.match_ident().value
        self.match_kw("is")
        typ = self.parse_type()
        return ast.TypeDecl(name, typ, span=self.span_from(start))

    def parse_const_decl(self) -> ast.ConstDecl:
        start = self.match_kw("const")
        name = self.match_ident().value
        if self.accept_sym(":"):
            self.match_kw("int")
        self.match_kw("is")
        value = self.parse_signed_int()
        return ast.ConstDecl(name, value, span=self.span_from(start))

    def parse_signed_int(self) -> int:
        negative = self.accept_sym("-")
        if self.peek("IDENT") and self.nt.value in self.constants:
            value = self.constants[self.advance().value]
        else:
            value = int(self.match("INT", "integer").value)
        return -value if negative else value

    def parse_type(self) -> ast.DataType:
        start = self.nt
        if self.accept_kw("none"):
            return ast.NoneType(span=start.span)
        if self.accept_kw("bool"):
            return ast.BoolType(span=start.span)
        if self.accept_kw("union"):
            names = [self.match_ident().value]
            while self.accept_sym("|"):
                names.append(self.match_ident().value)
            self.match_kw("end")
            return ast.EnumType(tuple(names), span=self.span_from(start))
        if self.peek("INT") or self.peek_sym("-") or (
                self.peek("IDENT") and self.lookahead().kind == "SYMBOL"
                and self.lookahead().value == ".." and self.nt.value in self.constants):
            lo = self.parse_signed_int()
            self.match_sym("..")
            hi = self.parse_signed_int()
            return ast.RangeType(lo, hi, span=self.span_from(start))
        if self.peek("IDENT"):
            if self.nt.value in UNSUPPORTED:
                self.error("type")
            return ast.NamedType(self.advance().value, span=start.span)
        self.error("type")

    # ------------------------------------------------------------ processes

    def parse_port_params(self) -> tuple:
        if self.accept_box():
            return ()
        if not self.accept_sym("["):
            return ()
        ports = []
        while True:
            ports.extend(self.parse_port_group())
            if not self.accept_sym(","):
                break
        self.match_sym("]")
        return tuple(ports)

    def parse_port_group(self) -> list:
        start = self.nt
        names = [self.match_ident().value]
        while self.peek_sym(","):
            self.advance()
            names.append(self.match_ident().value)
        if not self.peek_sym(":"):
            self.error("','", "':'")
        self.advance()
        typ = self.parse_type()
        interval = None
        if self.accept_kw("in"):
            interval = self.parse_interval()
        span = self.span_from(start)
        return [ast.PortDecl(name, typ, interval, span=span) for name in names]

    def parse_var_params(self) -> tuple:
        if not self.accept_sym("("):
            return ()
        params = []
        while True:
            start = self.nt
            names = [self.parse_var_param_name()]
            while self.accept_sym(","):
                names.append(self.parse_var_param_name())
            self.match_sym(":")
            mode = self.parse_access_mode()
            typ = self.parse_type()
            span = self.span_from(start)
            params.extend(ast.VarParam(name, typ, mode, span=span) for name in names)
            if not self.accept_sym(","):
                break
        self.match_sym(")")
        return tuple(params)

    def parse_var_param_name(self) -> str:
        self.accept_sym("&")
        return self.match_ident().value

    def parse_access_mode(self) -> str:
        modes = []
        while self.peek_kw("read") or self.peek_kw("write"):
            modes.append(self.advance().value)
        return " ".join(modes) if modes else "read write"

    def parse_var_decls(self) -> list:
        decls = []
        while True:
            start = self.nt
            names = [self.match_ident().value]
            while self.accept_sym(","):
                names.append(self.match_ident().value)
            self.match_sym(":")
            typ = self.parse_type()
            init = None
            if self.accept_sym(":="):
                init = self.parse_expr()
            span = self.span_from(start)
            decls.extend(ast.VarDecl(name, typ, init, span=span) for name in names)
            if not self.accept_sym(","):
                break
        return decls

    def parse_process(self) -> ast.ProcessDecl:
        start = self.match_kw("process")
        name = self.match_ident().value
        ports = self.parse_port_params()
        var_params = self.parse_var_params()
        self.match_kw("is")
        self.match_kw("states")
        states = [self.match_ident().value]
        while self.accept_sym(","):
            states.append(self.match_ident().value)
        locals_ = []
        while self.accept_kw("var"):
            locals_.extend(self.parse_var_decls())
        init = None
        if self.accept_kw("init"):
            init = self.parse_stmt()
        blocks = []
        while self.peek_kw("from"):
            block_start = self.advance()
            state = self.match_ident().value
            body = self.parse_stmt()
            blocks.append(ast.FromBlock(state, body, span=self.span_from(block_start)))
        return ast.ProcessDecl(name, ports, var_params, tuple(states), tuple(locals_),
                               init, tuple(blocks), span=self.span_from(start))

    # ------------------------------------------------------------ statements

    def parse_stmt(self) -> ast.Stmt:
        stmts = [self.parse_simple_stmt()]
        while self.accept_sym(";"):
            if self.at_stmt_end():
                break
            stmts.append(self.parse_simple_stmt())
        return ast.seq(*stmts)

    def at_stmt_end(self) -> bool:
        tok = self.nt
        return (tok.kind == "EOF" or self.peek_box()
                or (tok.kind == "KEYWORD" and tok.value in STMT_FOLLOW))

    def parse_simple_stmt(self) -> ast.Stmt:
        start = self.nt
        if self.accept_kw("null"):
            return ast.Skip(span=start.span)
        if self.accept_kw("loop"):
            return ast.Loop(span=start.span)
        if self.accept_kw("to"):
            return ast.To(self.match_ident().value, span=self.span_from(start))
        if self.accept_kw("wait"):
            return ast.Wait(self.parse_interval(), span=self.span_from(start))
        if self.accept_kw("on"):
            return ast.On(self.parse_expr(), span=self.span_from(start))
        if self.peek_kw("if"):
            return self.parse_if()
        if self.peek_kw("select"):
            return self.parse_select()
        if self.peek("IDENT") and self.nt.value not in UNSUPPORTED:
            name = self.advance().value
            if self.accept_sym(":="):
                if self.accept_kw("any"):
                    domain = self.parse_type() if self.accept_kw("in") else None
                    return ast.NondetAssign(name, domain, span=self.span_from(start))
                return ast.Assign(name, self.parse_expr(), span=self.span_from(start))
            if self.peek_sym("?") or self.peek_sym("!"):
                self.advance()
            return ast.Sync(name, span=self.span_from(start))
        self.error("statement")

    def parse_if(self, keyword="if") -> ast.Stmt:
        # an elsif chain nests in the else part and shares the closing 'end'
        start = self.match_kw(keyword)
        cond = self.parse_expr()
        self.match_kw("then")
        then = self.parse_stmt()
        if self.peek_kw("elsif"):
            orelse = self.parse_if("elsif")
        elif self.accept_kw("else"):
            orelse = self.parse_stmt()
            self.match_kw("end")
        else:
            orelse = ast.Skip()
            self.match_kw("end")
        return ast.If(cond, then, orelse, span=self.span_from(start))

    def parse_select(self) -> ast.Stmt:
        start = self.match_kw("select")
        branches = [self.parse_stmt()]
        while self.accept_box():
            branches.append(self.parse_stmt())
        unless = []
        if self.accept_kw("unless"):
            unless.append(self.parse_stmt())
            while self.accept_box():
                unless.append(self.parse_stmt())
        self.match_kw("end")
        return ast.Select(tuple(branches), tuple(unless), span=self.span_from(start))

    # ------------------------------------------------------------ intervals

    def parse_bound(self) -> Fraction:
        tok = self.nt
        if self.peek("IDENT"):
            self.advance()
            if tok.value not in self.constants:
                raise UnboundIntervalSymbol(tok.span, tok.value)
            return Fraction(self.constants[tok.value])
        value = Fraction(int(self.match("INT", "interval bound").value))
        if self.accept_sym("/"):
            value /= int(self.match("INT", "integer").value)
        return value

    def parse_interval(self) -> ast.TimeInterval:
        if self.accept_sym("["):
            lower_strict = False
        elif self.accept_sym("]"):
            lower_strict = True
        else:
            self.error("'['", "']'")
        lower = self.parse_bound()
        if not (self.accept_sym(",") or self.accept_sym(";")):
            self.error("','", "';'")
        if self.accept_sym("..."):
            self.match_sym("[")
            return ast.TimeInterval.unbounded(lower, lower_strict)
        upper = self.parse_bound()
        if self.accept_sym("]"):
            upper_strict = False
        elif self.accept_sym("["):
            upper_strict = True
        else:
            self.error("']'", "'['")
        return ast.TimeInterval(lower, lower_strict, upper, upper_strict)

    # ------------------------------------------------------------ components

    def parse_component(self) -> ast.ComponentDecl:
        start = self.match_kw("component")
        name = self.match_ident().value
        port_params = self.parse_port_params()
        var_params = self.parse_var_params()
        self.match_kw("is")
        ports, shared, priorities = [], [], []
        while True:
            if self.accept_kw("port"):
                while True:
                    ports.extend(self.parse_port_group())
                    if not self.accept_sym(","):
                        break
            elif self.accept_kw("var"):
                shared.extend(self.parse_var_decls())
            elif self.accept_kw("priority"):
                priorities.extend(self.parse_priorities())
            else:
                break
        self.match_kw("par")
        instances = [self.parse_instance()]
        while self.accept_sym("||"):
            instances.append(self.parse_instance())
        self.match_kw("end")
        return ast.ComponentDecl(name, port_params, var_params, tuple(ports),
                                 tuple(shared), tuple(priorities), tuple(instances),
                                 span=self.span_from(start))

    def parse_priorities(self) -> list:
        pairs = []
        while True:
            chain = [self.match_ident().value]
            self.match_sym(">")
            chain.append(self.match_ident().value)
            while self.accept_sym(">"):
                chain.append(self.match_ident().value)
            pairs.extend(zip(chain, chain[1:]))
            if not self.accept_sym(","):
                break
        return pairs

    def parse_instance(self) -> ast.Instance:
        start = self.nt
        label = None
        if self.peek("IDENT") and self.lookahead().kind == "SYMBOL" and self.lookahead().value == ":":
            label = self.advance().value
            self.advance()
        target = self.match_ident().value
        ports, vars_ = (), ()
        if self.accept_box():
            pass
        elif self.accept_sym("["):
            names = [self.match_ident().value]
            while self.accept_sym(","):
                names.append(self.match_ident().value)
            self.match_sym("]")
            ports = tuple(names)
        if self.accept_sym("("):
            names = [self.parse_var_param_name()]
            while self.accept_sym(","):
                names.append(self.parse_var_param_name())
            self.match_sym(")")
            vars_ = tuple(names)
        return ast.Instance(target, ports, vars_, label, span=self.span_from(start))

    # ------------------------------------------------------------ expressions

    def parse_expr(self) -> ast.Expr:
        start = self.nt
        left = self.parse_and()
        while self.peek_kw("or"):
            self.advance()
            left = ast.Binary("or", left, self.parse_and(), span=self.span_from(start))
        return left

    def parse_and(self) -> ast.Expr:
        start = self.nt
        left = self.parse_comparison()
        while self.peek_kw("and"):
            self.advance()
            left = ast.Binary("and", left, self.parse_comparison(), span=self.span_from(start))
        return left

    def parse_comparison(self) -> ast.Expr:
        start = self.nt
        left = self.parse_additive()
        if self.nt.kind == "SYMBOL" and self.nt.value in ast.COMPARE_OPS:
            op = self.advance().value
            right = self.parse_additive()
            return ast.Binary(op, left, right, span=self.span_from(start))
        return left

    def parse_additive(self) -> ast.Expr:
        start = self.nt
        left = self.parse_multiplicative()
        while self.peek_sym("+") or self.peek_sym("-"):
            op = self.advance().value
            left = ast.Binary(op, left, self.parse_multiplicative(), span=self.span_from(start))
        return left

    def parse_multiplicative(self) -> ast.Expr:
        start = self.nt
        left = self.parse_unary()
        while self.peek_sym("*"):
            self.advance()
            left = ast.Binary("*", left, self.parse_unary(), span=self.span_from(start))
        return left

    def parse_unary(self) -> ast.Expr:
        start = self.nt
        if self.accept_kw("not"):
            return ast.Unary("not", self.parse_unary(), span=self.span_from(start))
        if self.accept_sym("-"):
            return ast.Unary("-", self.parse_unary(), span=self.span_from(start))
        return self.parse_primary()

    def parse_primary(self) -> ast.Expr:
        tok = self.nt
        if self.peek("INT"):
            return ast.IntLit(int(self.advance().value), span=tok.span)
        if self.accept_kw("true"):
            return ast.BoolLit(True, span=tok.span)
        if self.accept_kw("false"):
            return ast.BoolLit(False, span=tok.span)
        if self.peek("IDENT"):
            return ast.Name(self.advance().value, span=tok.span)
        if self.accept_sym("("):
            expr = self.parse_expr()
            self.match_sym(")")
            return expr
        self.error("expression")

    # ------------------------------------------------------------ properties

    def parse_property(self) -> ast.PropertyDecl:
        start = self.match_kw("property")
        name = self.match_ident().value
        self.match_kw("is")
        body = self.parse_pattern()
        return ast.PropertyDecl(name, body, span=self.span_from(start))

    def parse_pattern(self):
        if self.peek_word("ltl"):
            self.advance()
            return P.RawLtl(self.parse_formula())
        if self.peek_word("absent"):
            self.advance()
            forbidden = self.parse_event_formula()
            if self.peek_word("after"):
                self.advance()
                trigger = self.parse_event_formula()
                self.match_word("within")
                return P.AbsentAfter(forbidden, trigger, self.parse_interval())
            return P.Absent(forbidden)
        if self.peek_word("NoGlobalDeadlock"):
            self.advance()
            return P.NoGlobalDeadlock()
        if self.peek_word("Unreachable"):
            self.advance()
            return P.Unreachable(self.parse_event_formula())
        if self.peek_word("Resettable"):
            self.advance()
            return P.Resettable(self.parse_event_formula())
        if self.peek_sym("("):
            # either a parenthesised pattern or a parenthesised trigger
            mark = self.pos
            try:
                trigger = self.parse_event_formula()
            except ParseError:
                self.pos = mark
                self.advance()
                pattern = self.parse_pattern()
                self.match_sym(")")
                return pattern
            return self.parse_leadsto(trigger)
        return self.parse_leadsto(self.parse_event_formula())

    def parse_leadsto(self, trigger):
        self.match_word("leadsto")
        response = self.parse_event_formula()
        self.match_word("within")
        interval = self.parse_interval()
        latest = False
        if self.peek_word("latest"):
            self.advance()
            latest = True
        return P.LeadsTo(trigger, response, interval, latest)

    def parse_event_formula(self):
        start = self.nt
        result = self.parse_or()
        if not F.is_propositional(result):
            raise ParseError(start.span, ["boolean combination of observables"],
                             "temporal operator")
        return result

    def parse_formula(self):
        left = self.parse_or()
        if self.accept_sym("=>"):
            return F.Implies(left, self.parse_formula())
        return left

    def parse_or(self):
        left = self.parse_and_f()
        while self.accept_kw("or"):
            left = F.Or(left, self.parse_and_f())
        return left

    def parse_and_f(self):
        left = self.parse_until()
        while self.accept_kw("and"):
            left = F.And(left, self.parse_until())
        return left

    def _infix_word(self, *words) -> bool:
        tok = self.nt
        if tok.kind != "IDENT" or tok.value not in words:
            return False
        after = self.lookahead()
        return not (after.kind == "SYMBOL" and after.value == "/")

    def parse_until(self):
        left = self.parse_unary_f()
        if self._infix_word("until", "U"):
            self.advance()
            return F.Until(left, self.parse_until())
        if self._infix_word("release", "R"):
            self.advance()
            return F.Release(left, self.parse_until())
        return left

    def parse_unary_f(self):
        if self.accept_kw("not") or self.accept_sym("-"):
            return F.Not(self.parse_unary_f())
        if self.accept_box():
            return F.Always(self.parse_unary_f())
        if self.accept_sym("<>"):
            return F.Eventually(self.parse_unary_f())
        if self._infix_word("X", "next"):
            self.advance()
            return F.Next(self.parse_unary_f())
        return self.parse_primary_f()

    def parse_primary_f(self):
        if self.accept_kw("true"):
            return F.TrueF()
        if self.accept_kw("false"):
            return F.FalseF()
        if self.peek_word("dead"):
            self.advance()
            return F.Atom(DeadAtom())
        if self.accept_sym("("):
            inner = self.parse_formula()
            self.match_sym(")")
            return inner
        if self.peek("IDENT") or self.peek("INT"):
            return F.Atom(self.parse_observable())
        self.error("observable", "'('")

    def parse_observable(self) -> Observable:
        start = self.nt
        path = [self.advance().value]
        while True:
            self.match_sym("/")
            tok = self.nt
            if tok.kind == "IDENT" and tok.value in OBSERVABLE_KINDS:
                kind = self.advance().value
                break
            if tok.kind in ("IDENT", "INT"):
                path.append(self.advance().value)
                continue
            self.error("instance", "observable kind")
        name, predicate = None, None
        if kind == "value":
            self.match_sym("(")
            predicate = self.parse_expr()
            self.match_sym(")")
        elif kind != "start":
            name = self.match_ident().value
        return Observable(tuple(path), kind, name, predicate, span=self.span_from(start))


def parse_program(text: str, filename: str = "<input>") -> ast.Program:
    """Parses a whole .fcr source"""
    return Parser(text, filename).parse_program()


def parse_property(text: str, constants: Optional[Mapping[str, int]] = None,
                   filename: str = "<input>") -> ast.PropertyDecl:
    """Parses a single ``property NAME is ...`` declaration"""
    parser = Parser(text, filename, constants)
    decl = parser.parse_property()
    parser.match("EOF", "end of input")
    return decl


def parse_file(path) -> ast.Program:
    with open(path, "r", encoding="UTF-8") as f:
        return parse_program(f.read(), str(path))
