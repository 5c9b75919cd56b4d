"""Recursive-descent parser for the model DSL.

Parsing is total: every failure surfaces as an error diagnostic with a
span, never as an uncaught exception, and no partial model is handed out
next to errors. Grammar reference: docs/grammar.ebnf.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, SourceSpan, error
from ..model import (
    ABSENT,
    BOOL,
    Automaton,
    Binop,
    Causality,
    Channel,
    Component,
    Composite,
    Direction,
    EnumRef,
    EnumType,
    Expr,
    FunctionBehavior,
    IntRange,
    IntV,
    Lit,
    LitPattern,
    Model,
    NO_MESSAGE,
    ParentPort,
    Pattern,
    Port,
    PortType,
    Ref,
    SubComponent,
    SubPort,
    Transition,
    Unop,
    Value,
    Variable,
    WILDCARD,
    BoolV,
    EnumV,
)
from .lexer import EOF, IDENT, INT, KW, LexError, PUNCT, Token, tokenize


class ParseError(Exception):
    def __init__(self, span: SourceSpan, message: str, code: str = "syntax"):
        super().__init__(message)
        self.span = span
        self.message = message
        self.code = code


def parse_dsl(text: str, file: str = "<input>") -> tuple[Model | None, list[Diagnostic]]:
    """Parse DSL source into a raw model, or into error diagnostics."""
    try:
        tokens = tokenize(text, file)
    except LexError as e:
        return None, [error(e.span, "syntax", e.message)]
    parser = _Parser(tokens)
    try:
        model = parser.model()
    except ParseError as e:
        return None, [error(e.span, e.code, e.message)]
    except RecursionError:
        return None, [error(SourceSpan(file, 1, 1), "syntax", "input is nested too deeply")]
    return model, []


def parse_expression_text(text: str, base: SourceSpan) -> Expr:
    """Parse a bare expression (used for interchange documents).

    Raises ParseError; spans fall back to ``base`` since the text is
    embedded in a structured document.
    """
    parser = _embedded_parser(text, base, "expression")
    expr = parser.expression()
    tok = parser.peek()
    if tok.kind != EOF:
        raise ParseError(base, f"in expression {text!r}: trailing {tok}")
    return expr


def parse_type_text(text: str, base: SourceSpan) -> PortType:
    """Parse a type written in surface syntax: Bool, Int[lo..hi], or a name."""
    parser = _embedded_parser(text, base, "type")
    dtype = parser.dtype()
    tok = parser.peek()
    if tok.kind != EOF:
        raise ParseError(base, f"in type {text!r}: trailing {tok}")
    return dtype


def parse_value_text(text: str, dtype: PortType, base: SourceSpan) -> Value:
    """Parse a literal in surface syntax against a declared type."""
    parser = _embedded_parser(text, base, "value")
    value = parser.value(dtype)
    tok = parser.peek()
    if tok.kind != EOF:
        raise ParseError(base, f"in value {text!r}: trailing {tok}")
    return value


def _embedded_parser(text: str, base: SourceSpan, what: str) -> "_Parser":
    try:
        tokens = tokenize(text, base.file)
    except LexError as e:
        raise ParseError(base, f"in {what} {text!r}: {e.message}") from e
    # Embedded snippets report the span of their carrier document node.
    tokens = [Token(t.kind, t.text, base) for t in tokens]
    return _Parser(tokens)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.peek()
        if not self.at(kind, text):
            want = text if text is not None else kind
            raise ParseError(tok.span, f"expected '{want}', found {tok}")
        return self.next()

    def ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != IDENT:
            raise ParseError(tok.span, f"expected {what}, found {tok}")
        return self.next()

    # -- model structure ---------------------------------------------------

    def model(self) -> Model:
        kw = self.expect(KW, "model")
        name = self.ident("model name")
        self.expect(PUNCT, "{")
        types: list[EnumType] = []
        components: list[Component] = []
        root: Token | None = None
        while not self.at(PUNCT, "}"):
            if self.at(KW, "type"):
                types.append(self.type_decl())
            elif self.at(KW, "component"):
                components.append(self.component())
            elif self.at(KW, "root"):
                tok = self.next()
                if root is not None:
                    raise ParseError(tok.span, "model already names a root component")
                root = self.ident("root component name")
            else:
                raise ParseError(self.peek().span, f"expected 'type', 'component' or 'root', found {self.peek()}")
        close = self.expect(PUNCT, "}")
        self.expect(EOF)
        if root is not None:
            root_name = root.text
        elif len(components) == 1:
            root_name = components[0].name  # the only component is the root
        else:
            raise ParseError(close.span, "model with several components needs a 'root' declaration")
        return Model(
            name=name.text,
            types=tuple(types),
            components=tuple(components),
            root=root_name,
            span=kw.span,
        )

    def type_decl(self) -> EnumType:
        kw = self.expect(KW, "type")
        name = self.ident("type name")
        self.expect(PUNCT, "{")
        literals = [self.ident("enumeration literal").text]
        while self.accept(PUNCT, ","):
            literals.append(self.ident("enumeration literal").text)
        self.expect(PUNCT, "}")
        return EnumType(name=name.text, literals=tuple(literals), span=kw.span)

    def component(self) -> Component:
        kw = self.expect(KW, "component")
        name = self.ident("component name")
        causality = Causality.STRONG
        if self.accept(PUNCT, "("):
            tok = self.ident("'weak' or 'strong'")
            try:
                causality = Causality(tok.text)
            except ValueError:
                raise ParseError(tok.span, f"expected 'weak' or 'strong', found {tok}") from None
            self.expect(PUNCT, ")")
        self.expect(PUNCT, "{")
        ports: list[Port] = []
        while self.at(KW, "in") or self.at(KW, "out"):
            ports.append(self.port())
        body = self.body(ports)
        self.expect(PUNCT, "}")
        return Component(name=name.text, causality=causality, ports=tuple(ports), body=body, span=kw.span)

    def port(self) -> Port:
        kw = self.next()  # 'in' or 'out'
        direction = Direction.IN if kw.text == "in" else Direction.OUT
        name = self.ident("port name")
        self.expect(PUNCT, ":")
        dtype = self.dtype()
        init: Value = ABSENT
        if self.accept(PUNCT, "="):
            init = self.value(dtype)
        return Port(name=name.text, direction=direction, dtype=dtype, init=init, span=kw.span)

    def dtype(self) -> PortType:
        tok = self.ident("type")
        if tok.text == "Bool":
            return BOOL
        if tok.text == "Int":
            self.expect(PUNCT, "[")
            lo = self.int_literal()
            self.expect(PUNCT, "..")
            hi = self.int_literal()
            self.expect(PUNCT, "]")
            return IntRange(lo, hi)
        return EnumRef(tok.text)

    def int_literal(self) -> int:
        neg = self.accept(PUNCT, "-") is not None
        tok = self.expect(INT)
        return -int(tok.text) if neg else int(tok.text)

    def value(self, dtype: PortType) -> Value:
        """A literal in a declared-type context (port/variable initializer)."""
        tok = self.peek()
        if tok.kind == IDENT and tok.text in ("true", "false"):
            self.next()
            return BoolV(tok.text == "true")
        if tok.kind == IDENT and tok.text == "eps":
            self.next()
            return ABSENT
        if tok.kind == INT or self.at(PUNCT, "-"):
            return IntV(self.int_literal())
        if tok.kind == IDENT:
            if isinstance(dtype, EnumRef):
                self.next()
                return EnumV(dtype.name, tok.text)
            raise ParseError(tok.span, f"'{tok.text}' is not a value of type {dtype}", code="bad-value")
        raise ParseError(tok.span, f"expected a value, found {tok}")

    # -- bodies --------------------------------------------------------

    def body(self, ports: list[Port]) -> Automaton | FunctionBehavior | Composite:
        if self.at(KW, "automaton"):
            return self.automaton(ports)
        if self.at(KW, "function"):
            return self.function()
        if self.at(KW, "sub") or self.at(KW, "channel"):
            return self.composite()
        raise ParseError(self.peek().span, f"expected 'automaton', 'function', 'sub' or 'channel', found {self.peek()}")

    def automaton(self, ports: list[Port]) -> Automaton:
        self.expect(KW, "automaton")
        self.expect(PUNCT, "{")
        variables: list[Variable] = []
        states: list[str] = []
        initial: Token | None = None
        transitions: list[Transition] = []
        port_types = {p.name: p.dtype for p in ports}
        while not self.at(PUNCT, "}"):
            if self.at(KW, "var"):
                variables.append(self.var_decl())
            elif self.at(KW, "initial") or self.at(KW, "state"):
                marked = self.accept(KW, "initial") is not None
                self.expect(KW, "state")
                name = self.ident("state name")
                states.append(name.text)
                if marked:
                    if initial is not None:
                        raise ParseError(name.span, "automaton already has an initial state")
                    initial = name
            elif self.at(KW, "when"):
                transitions.append(self.transition(port_types))
            else:
                raise ParseError(self.peek().span, f"expected 'var', 'state', 'initial' or 'when', found {self.peek()}")
        self.expect(PUNCT, "}")
        if initial is None:
            raise ParseError(self.peek().span, "automaton is missing an 'initial state' declaration")
        return Automaton(
            states=tuple(states),
            initial=initial.text,
            variables=tuple(variables),
            transitions=tuple(transitions),
        )

    def var_decl(self) -> Variable:
        kw = self.expect(KW, "var")
        name = self.ident("variable name")
        self.expect(PUNCT, ":")
        dtype = self.dtype()
        self.expect(PUNCT, "=")
        init = self.value(dtype)
        return Variable(name=name.text, dtype=dtype, init=init, span=kw.span)

    def transition(self, port_types: dict[str, PortType]) -> Transition:
        kw = self.expect(KW, "when")
        source = self.ident("source state")
        patterns: dict[str, Pattern] = {}
        if self.accept(PUNCT, "("):
            if not self.at(PUNCT, ")"):
                self.pattern_entry(patterns, port_types)
                while self.accept(PUNCT, ","):
                    self.pattern_entry(patterns, port_types)
            self.expect(PUNCT, ")")
        guard: Expr | None = None
        if self.accept(PUNCT, "["):
            guard = self.expression()
            self.expect(PUNCT, "]")
        emissions: dict[str, Expr] = {}
        if self.accept(KW, "emit"):
            self.binding_list(emissions, "output port")
        updates: dict[str, Expr] = {}
        if self.accept(KW, "set"):
            self.binding_list(updates, "variable")
        self.expect(PUNCT, "->")
        target = self.ident("target state")
        return Transition(
            source=source.text,
            target=target.text,
            patterns=patterns,
            guard=guard,
            emissions=emissions,
            updates=updates,
            span=kw.span,
        )

    def pattern_entry(self, patterns: dict[str, Pattern], port_types: dict[str, PortType]) -> None:
        name = self.ident("input port name")
        if name.text in patterns:
            raise ParseError(name.span, f"port '{name.text}' is matched twice", code="duplicate-key")
        self.expect(PUNCT, "=")
        if self.accept(PUNCT, "*"):
            patterns[name.text] = WILDCARD
            return
        if self.at(IDENT, "eps"):
            self.next()
            patterns[name.text] = NO_MESSAGE
            return
        dtype = port_types.get(name.text)
        if dtype is None:
            raise ParseError(name.span, f"unknown input port '{name.text}' in pattern", code="unknown-port")
        patterns[name.text] = LitPattern(self.value(dtype))

    def binding_list(self, target: dict[str, Expr], what: str) -> None:
        while True:
            name = self.ident(f"{what} name")
            if name.text in target:
                raise ParseError(name.span, f"{what} '{name.text}' is bound twice", code="duplicate-key")
            self.expect(PUNCT, "=")
            target[name.text] = self.expression()
            if not self.accept(PUNCT, ","):
                return

    def function(self) -> FunctionBehavior:
        self.expect(KW, "function")
        self.expect(PUNCT, "{")
        emissions: dict[str, Expr] = {}
        if not self.at(PUNCT, "}"):
            self.binding_list(emissions, "output port")
        self.expect(PUNCT, "}")
        return FunctionBehavior(emissions=emissions)

    def composite(self) -> Composite:
        subs: list[SubComponent] = []
        channels: list[Channel] = []
        while True:
            if self.at(KW, "sub"):
                kw = self.next()
                name = self.ident("instance name")
                self.expect(PUNCT, ":")
                comp = self.ident("component name")
                subs.append(SubComponent(name=name.text, component=comp.text, span=kw.span))
            elif self.at(KW, "channel"):
                kw = self.next()
                name = self.ident("channel name")
                self.expect(PUNCT, ":")
                dtype = self.dtype()
                source = self.endpoint()
                self.expect(PUNCT, "->")
                sink = self.endpoint()
                channels.append(Channel(name=name.text, dtype=dtype, source=source, sink=sink, span=kw.span))
            else:
                return Composite(subs=tuple(subs), channels=tuple(channels))

    def endpoint(self) -> ParentPort | SubPort:
        first = self.ident("port or instance name")
        if self.accept(PUNCT, "."):
            port = self.ident("port name")
            return SubPort(instance=first.text, port=port.text)
        return ParentPort(port=first.text)

    # -- expressions -------------------------------------------------------
    # Precedence, loosest first: ||  <  &&  <  comparisons  <  + -  <  !

    def expression(self) -> Expr:
        return self.or_expr()

    def or_expr(self) -> Expr:
        left = self.and_expr()
        while self.accept(PUNCT, "||"):
            left = Binop("||", left, self.and_expr())
        return left

    def and_expr(self) -> Expr:
        left = self.cmp_expr()
        while self.accept(PUNCT, "&&"):
            left = Binop("&&", left, self.cmp_expr())
        return left

    def cmp_expr(self) -> Expr:
        left = self.add_expr()
        for op in ("=", "!=", "<=", "<"):
            if self.at(PUNCT, op):
                self.next()
                return Binop(op, left, self.add_expr())
        return left

    def add_expr(self) -> Expr:
        left = self.unary()
        while True:
            if self.at(PUNCT, "+") or self.at(PUNCT, "-"):
                op = self.next().text
                left = Binop(op, left, self.unary())
            else:
                return left

    def unary(self) -> Expr:
        if self.accept(PUNCT, "!"):
            return Unop("!", self.unary())
        if self.at(PUNCT, "-"):
            span = self.peek().span
            self.next()
            tok = self.peek()
            if tok.kind != INT:
                raise ParseError(span, "'-' is only allowed in front of an integer literal")
            self.next()
            return Lit(IntV(-int(tok.text)))
        return self.primary()

    def primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == INT:
            self.next()
            return Lit(IntV(int(tok.text)))
        if tok.kind == IDENT:
            self.next()
            if tok.text == "true":
                return Lit(BoolV(True))
            if tok.text == "false":
                return Lit(BoolV(False))
            return Ref(tok.text)
        if self.accept(PUNCT, "("):
            expr = self.expression()
            self.expect(PUNCT, ")")
            return expr
        raise ParseError(tok.span, f"expected an expression, found {tok}")
