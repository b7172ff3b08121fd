"""Recursive-descent parser for the Solidity subset the operators need.

The grammar covers contract/library/interface definitions, functions,
modifiers, constructors (both `constructor` and the legacy function-named
form), statements, and full expression syntax including the legacy
`.call.value(x)(...)`, `throw`, `var` declarations, and the newer
`.call{value: x}(...)` options form. Constructs outside the subset become
``OTHER`` nodes with correct spans and are skipped token-wise with full
bracket balancing, never by delimiter scanning.

Non-Solidity content (e.g. a JSON blob saved as .sol) fails at the first
top-level token and is reported as ``Invalid`` with a diagnostic instead
of raising.
"""

from __future__ import annotations

import re

from .lexer import EOF, IDENT, NUMBER, PUNCT, STRING, LexError, Token, tokenize
from .nodes import AstNode, Diagnostic, NodeKind, ParseOutcome, ParseStatus
from .source import SourceFile, Span

_ELEMENTARY_RE = re.compile(
    r"address|bool|string|var|byte|bytes(3[0-2]|[12]?\d)?|u?int(\d+)?|u?fixed(\d+x\d+)?"
)

_NUMBER_UNITS = frozenset(
    "wei szabo finney ether gwei seconds minutes hours days weeks years".split()
)

_VISIBILITY = frozenset({"public", "private", "internal", "external"})
_MUTABILITY = frozenset({"pure", "view", "constant", "payable"})
_STORAGE_LOC = frozenset({"memory", "storage", "calldata"})

_ASSIGN_OPS = frozenset(
    {"=", "|=", "^=", "&=", "<<=", ">>=", "+=", "-=", "*=", "/=", "%="}
)

# Binary precedence levels, loosest first.
_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("<<", ">>"),
    ("+", "-"),
    ("*", "/", "%"),
]

_UNARY_PREFIX = frozenset({"!", "~", "-", "+", "++", "--"})


def is_elementary_type(name: str) -> bool:
    return bool(_ELEMENTARY_RE.fullmatch(name))


class _ParseError(Exception):
    def __init__(self, message: str, token: Token) -> None:
        super().__init__(message)
        self.message = message
        self.token = token


def parse(file: SourceFile) -> ParseOutcome:
    """Parse ``file`` into a tree of span-accurate nodes."""
    try:
        tokens = tokenize(file.text)
    except LexError as err:
        span = Span(err.offset, min(err.offset + 1, len(file.text)))
        return ParseOutcome(ParseStatus.INVALID, None, [Diagnostic(span, err.message)])
    parser = _Parser(file, tokens)
    try:
        root = parser.source_unit()
    except _ParseError as err:
        span = Span(err.token.start, err.token.end)
        return ParseOutcome(ParseStatus.INVALID, None, [Diagnostic(span, err.message)])
    _finalize(root)
    return ParseOutcome(ParseStatus.PARSED, root, [])


def parse_text(text: str, path: str = "<memory>") -> ParseOutcome:
    return parse(SourceFile(path=path, text=text))


def _finalize(root: AstNode) -> None:
    counter = 0
    stack = [(root, None)]
    while stack:
        node, parent = stack.pop()
        node.node_id = counter
        counter += 1
        node.parent = parent
        for child in reversed(node.children):
            stack.append((child, node))


class _Parser:
    def __init__(self, file: SourceFile, tokens: list[Token]) -> None:
        self.file = file
        self.tokens = tokens
        self.pos = 0

    # -- token helpers ---------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind != STRING

    def at_ident(self) -> bool:
        return self.peek().kind == IDENT

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise _ParseError(f"expected {text!r}, found {self.peek().text!r}", self.peek())
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != IDENT:
            raise _ParseError(f"expected {what}, found {tok.text!r}", tok)
        return self.advance()

    def fail(self, message: str) -> None:
        raise _ParseError(message, self.peek())

    # -- generic skipping (token-level, bracket balanced) ------------------

    def skip_until_semi(self) -> Token:
        """Consume through the next ';' at bracket depth zero."""
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == EOF:
                self.fail("unexpected end of file")
            if tok.text in "([{" and tok.kind == PUNCT:
                depth += 1
            elif tok.text in ")]}" and tok.kind == PUNCT:
                if depth == 0:
                    self.fail(f"unbalanced {tok.text!r}")
                depth -= 1
            elif tok.is_punct(";") and depth == 0:
                return self.advance()
            self.advance()

    def skip_balanced(self, open_text: str, close_text: str) -> Token:
        """Consume a balanced bracket group starting at the current token."""
        self.expect(open_text)
        depth = 1
        while depth:
            tok = self.advance()
            if tok.kind == EOF:
                self.fail("unexpected end of file in bracketed group")
            if tok.kind == PUNCT:
                if tok.text == open_text:
                    depth += 1
                elif tok.text == close_text:
                    depth -= 1
        return tok

    def _other(self, construct: str, start: int, end: int, **attrs) -> AstNode:
        node = AstNode(NodeKind.OTHER, Span(start, end))
        node.attrs["construct"] = construct
        node.attrs.update(attrs)
        return node

    # -- source unit -------------------------------------------------------

    def source_unit(self) -> AstNode:
        children: list[AstNode] = []
        while self.peek().kind != EOF:
            children.append(self.top_level_item())
        root = AstNode(NodeKind.OTHER, Span(0, len(self.file.text)), children)
        root.attrs["construct"] = "source"
        return root

    def top_level_item(self) -> AstNode:
        tok = self.peek()
        if tok.kind == IDENT:
            word = tok.text
            if word in ("pragma", "import", "using"):
                start = self.advance().start
                end = self.skip_until_semi().end
                return self._other(word, start, end)
            if word == "abstract" and self.peek(1).text == "contract":
                start = self.advance().start
                node = self.contract_definition()
                node.span = Span(start, node.span.end)
                return node
            if word in ("contract", "library", "interface"):
                return self.contract_definition()
            if word in ("struct", "enum"):
                return self.named_brace_group(word)
            if word == "function":
                return self.function_definition(contract_name=None)
        if tok.is_punct(";"):
            semi = self.advance()
            return self._other("empty", semi.start, semi.end)
        self.fail(f"unsupported top-level construct {tok.text!r}")
        raise AssertionError  # unreachable

    def named_brace_group(self, construct: str) -> AstNode:
        start = self.advance().start
        name = self.expect_ident(f"{construct} name").text
        end = self.skip_balanced("{", "}").end
        return self._other(construct, start, end, name=name)

    # -- contracts ----------------------------------------------------------

    def contract_definition(self) -> AstNode:
        kw = self.advance()
        name = self.expect_ident("contract name").text
        bases: list[str] = []
        if self.accept("is"):
            while True:
                base = self.dotted_name()
                bases.append(base)
                if self.at("("):
                    self.skip_balanced("(", ")")
                if not self.accept(","):
                    break
        open_brace = self.expect("{")
        children: list[AstNode] = []
        while not self.at("}"):
            if self.peek().kind == EOF:
                self.fail("unterminated contract body")
            children.append(self.contract_member(name))
        close = self.expect("}")
        node = AstNode(NodeKind.CONTRACT_DEF, Span(kw.start, close.end), children)
        node.attrs.update(
            name=name,
            contract_kind=kw.text,
            bases=bases,
            body_start=open_brace.end,
        )
        return node

    def dotted_name(self) -> str:
        parts = [self.expect_ident().text]
        while self.at(".") :
            self.advance()
            parts.append(self.expect_ident().text)
        return ".".join(parts)

    def contract_member(self, contract_name: str) -> AstNode:
        tok = self.peek()
        start = tok.start
        try:
            if tok.is_ident("function") or tok.is_ident("constructor"):
                return self.function_definition(contract_name)
            if tok.text in ("fallback", "receive") and self.peek(1).is_punct("("):
                return self.function_definition(contract_name)
            if tok.is_ident("modifier"):
                return self.modifier_definition()
            if tok.is_ident("event"):
                self.advance()
                name = self.expect_ident("event name").text
                self.skip_balanced("(", ")")
                self.accept("anonymous")
                end = self.expect(";").end
                return self._other("event", start, end, name=name)
            if tok.text in ("struct", "enum"):
                return self.named_brace_group(tok.text)
            if tok.is_ident("using"):
                self.advance()
                end = self.skip_until_semi().end
                return self._other("using", start, end)
            if tok.is_punct(";"):
                return self._other("empty", start, self.advance().end)
            return self.state_variable()
        except _ParseError:
            # Fail safe: an unrecognized member becomes an opaque node that
            # no operator will ever match.
            self.pos_recover(start)
            return self.skip_member(start)

    def pos_recover(self, start_offset: int) -> None:
        while self.pos > 0 and self.tokens[self.pos - 1].start >= start_offset:
            self.pos -= 1

    def skip_member(self, start: int) -> AstNode:
        return self._skip_region(start, "unparsed_member")

    def skip_statement_region(self, start: int) -> AstNode:
        return self._skip_region(start, "unparsed_stmt")

    def _skip_region(self, start: int, construct: str) -> AstNode:
        """Consume one statement/member-shaped region, brackets balanced.

        Ends after a depth-zero ';', after a depth-zero '{...}' group, or
        just before an enclosing '}' once something was consumed.
        """
        depth = 0
        consumed = False
        end = start
        while True:
            tok = self.peek()
            if tok.kind == EOF:
                self.fail("unexpected end of file")
            if tok.is_punct("}") and depth == 0:
                if consumed:
                    return self._other(construct, start, end)
                self.fail("unexpected '}'")
            tok = self.advance()
            consumed = True
            end = tok.end
            if tok.kind != PUNCT:
                continue
            if tok.text in "([{":
                depth += 1
            elif tok.text in ")]}":
                if depth == 0:
                    self.fail(f"unbalanced {tok.text!r}")
                depth -= 1
                if tok.text == "}" and depth == 0:
                    # A brace group can end the region unless a
                    # continuation keyword follows (else/while/catch).
                    if self.peek().text not in ("else", "while", "catch"):
                        return self._other(construct, start, end)
            elif tok.text == ";" and depth == 0:
                return self._other(construct, start, end)

    def state_variable(self) -> AstNode:
        start = self.peek().start
        type_text = self.type_name()
        while self.peek().text in ("public", "private", "internal", "constant", "immutable"):
            self.advance()
        if self.at("override"):
            self.advance()
            if self.at("("):
                self.skip_balanced("(", ")")
        name_tok = self.expect_ident("state variable name")
        init: AstNode | None = None
        eq_offset: int | None = None
        if self.at("="):
            eq_offset = self.advance().start
            init = self.expression()
        end = self.expect(";").end
        node = AstNode(
            NodeKind.VARIABLE_DECLARATION_STMT,
            Span(start, end),
            [init] if init is not None else [],
        )
        node.attrs.update(
            name=name_tok.text, type_text=type_text, state=True, eq_offset=eq_offset
        )
        return node

    # -- functions and modifiers ---------------------------------------------

    def function_definition(self, contract_name: str | None) -> AstNode:
        kw = self.advance()  # 'function' | 'constructor' | 'fallback' | 'receive'
        name = ""
        is_constructor = kw.text == "constructor"
        if kw.text in ("constructor", "fallback", "receive"):
            name = kw.text
        elif self.at_ident() and not self.at("("):
            name = self.expect_ident().text
        params = self.parameter_list()
        visibility = ""
        mutability: list[str] = []
        modifiers: list[str] = []
        returns: list[tuple[str, str | None]] = []
        while True:
            tok = self.peek()
            if tok.kind != IDENT:
                break
            if tok.text in _VISIBILITY:
                visibility = self.advance().text
            elif tok.text in _MUTABILITY:
                mutability.append(self.advance().text)
            elif tok.text in ("virtual",):
                self.advance()
            elif tok.text == "override":
                self.advance()
                if self.at("("):
                    self.skip_balanced("(", ")")
            elif tok.text == "returns":
                self.advance()
                returns = self.parameter_list()
            else:
                modifiers.append(self.dotted_name())
                if self.at("("):
                    self.skip_balanced("(", ")")
        children: list[AstNode] = []
        if self.at("{"):
            children.append(self.block())
            end = children[-1].span.end
        else:
            end = self.expect(";").end
        if contract_name is not None and name == contract_name:
            is_constructor = True
        kind = NodeKind.CONSTRUCTOR_DEF if is_constructor else NodeKind.FUNCTION_DEF
        node = AstNode(kind, Span(kw.start, end), children)
        node.attrs.update(
            name=name,
            visibility=visibility,
            mutability=mutability,
            modifiers=modifiers,
            params=params,
            returns=returns,
        )
        return node

    def modifier_definition(self) -> AstNode:
        kw = self.advance()
        name = self.expect_ident("modifier name").text
        params: list[tuple[str, str | None]] = []
        if self.at("("):
            params = self.parameter_list()
        while self.peek().kind == IDENT and self.peek().text in ("virtual", "override"):
            self.advance()
            if self.at("("):
                self.skip_balanced("(", ")")
        if self.at("{"):
            body = self.block()
            end = body.span.end
            children = [body]
        else:
            end = self.expect(";").end
            children = []
        node = AstNode(NodeKind.MODIFIER_DEF, Span(kw.start, end), children)
        node.attrs.update(name=name, params=params, modifiers=[], returns=[], visibility="")
        return node

    def parameter_list(self) -> list[tuple[str, str | None]]:
        self.expect("(")
        params: list[tuple[str, str | None]] = []
        if not self.at(")"):
            while True:
                type_text = self.type_name()
                while self.peek().kind == IDENT and self.peek().text in (
                    "memory",
                    "storage",
                    "calldata",
                    "indexed",
                ):
                    self.advance()
                name = None
                if self.at_ident():
                    name = self.advance().text
                params.append((type_text, name))
                if not self.accept(","):
                    break
        self.expect(")")
        return params

    # -- types -----------------------------------------------------------------

    def type_name(self) -> str:
        start = self.peek().start
        tok = self.peek()
        if tok.is_ident("mapping"):
            self.advance()
            self.skip_balanced("(", ")")
        elif tok.kind == IDENT and is_elementary_type(tok.text):
            self.advance()
            if tok.text == "address" and self.at("payable"):
                self.advance()
        elif tok.kind == IDENT and tok.text == "function":
            # Function types are rare; treat the full signature opaquely.
            self.advance()
            self.skip_balanced("(", ")")
            while self.peek().kind == IDENT and self.peek().text in (
                _VISIBILITY | _MUTABILITY | {"returns"}
            ):
                word = self.advance().text
                if word == "returns":
                    self.skip_balanced("(", ")")
        elif tok.kind == IDENT:
            self.dotted_name()
        else:
            self.fail(f"expected type name, found {tok.text!r}")
        while self.at("["):
            self.skip_balanced("[", "]")
        end = self.tokens[self.pos - 1].end
        return self.file.text[start:end]

    # -- statements --------------------------------------------------------------

    def block(self) -> AstNode:
        open_tok = self.expect("{")
        stmts: list[AstNode] = []
        while not self.at("}"):
            if self.peek().kind == EOF:
                self.fail("unterminated block")
            stmts.append(self.statement())
        close = self.expect("}")
        return AstNode(NodeKind.BLOCK, Span(open_tok.start, close.end), stmts)

    def statement(self) -> AstNode:
        tok = self.peek()
        start = tok.start
        if tok.is_punct("{"):
            return self.block()
        if tok.kind == IDENT:
            word = tok.text
            if word == "if":
                return self.if_statement()
            if word == "for":
                return self.for_statement()
            if word == "while":
                return self.while_statement()
            if word == "do":
                return self.do_statement()
            if word == "return":
                self.advance()
                expr = None if self.at(";") else self.expression()
                end = self.expect(";").end
                return AstNode(
                    NodeKind.RETURN_STMT, Span(start, end), [expr] if expr else []
                )
            if word == "emit":
                self.advance()
                call = self.expression()
                end = self.expect(";").end
                return AstNode(NodeKind.EMIT_STMT, Span(start, end), [call])
            if word == "throw":
                self.advance()
                end = self.expect(";").end
                return self._other("throw", start, end)
            if word in ("break", "continue"):
                self.advance()
                end = self.expect(";").end
                return self._other(word, start, end)
            if word == "assembly":
                self.advance()
                if self.peek().kind == STRING:
                    self.advance()
                if self.at("("):
                    self.skip_balanced("(", ")")
                end = self.skip_balanced("{", "}").end
                return AstNode(NodeKind.ASSEMBLY_BLOCK, Span(start, end))
            if word == "unchecked" and self.peek(1).is_punct("{"):
                self.advance()
                end = self.skip_balanced("{", "}").end
                return self._other("unchecked", start, end)
        try:
            return self.simple_statement()
        except _ParseError:
            # Fail safe: skip one statement-shaped region.
            self.pos_recover(start)
            return self.skip_statement_region(start)

    def if_statement(self) -> AstNode:
        start = self.advance().start
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        then = self.statement()
        children = [cond, then]
        has_else = False
        end = then.span.end
        if self.accept("else"):
            has_else = True
            otherwise = self.statement()
            children.append(otherwise)
            end = otherwise.span.end
        node = AstNode(NodeKind.IF_STMT, Span(start, end), children)
        node.attrs["has_else"] = has_else
        return node

    def for_statement(self) -> AstNode:
        start = self.advance().start
        self.expect("(")
        children: list[AstNode] = []
        slots: dict[str, int | None] = {"init": None, "cond": None, "post": None}
        if not self.at(";"):
            slots["init"] = len(children)
            children.append(self.simple_statement(consume_semi=False))
        self.expect(";")
        if not self.at(";"):
            slots["cond"] = len(children)
            children.append(self.expression())
        self.expect(";")
        if not self.at(")"):
            slots["post"] = len(children)
            children.append(self.expression())
        self.expect(")")
        body = self.statement()
        slots["body"] = len(children)
        children.append(body)
        node = AstNode(NodeKind.FOR_STMT, Span(start, body.span.end), children)
        node.attrs.update(slots)
        return node

    def while_statement(self) -> AstNode:
        start = self.advance().start
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        body = self.statement()
        node = AstNode(NodeKind.WHILE_STMT, Span(start, body.span.end), [cond, body])
        node.attrs["do_while"] = False
        return node

    def do_statement(self) -> AstNode:
        start = self.advance().start
        body = self.statement()
        self.expect("while")
        self.expect("(")
        cond = self.expression()
        self.expect(")")
        end = self.expect(";").end
        node = AstNode(NodeKind.WHILE_STMT, Span(start, end), [body, cond])
        node.attrs["do_while"] = True
        return node

    def simple_statement(self, consume_semi: bool = True) -> AstNode:
        decl = self.try_variable_declaration(consume_semi)
        if decl is not None:
            return decl
        start = self.peek().start
        expr = self.expression()
        end = expr.span.end
        if consume_semi:
            end = self.expect(";").end
        return AstNode(NodeKind.EXPRESSION_STMT, Span(start, end), [expr])

    def try_variable_declaration(self, consume_semi: bool) -> AstNode | None:
        tok = self.peek()
        if tok.kind != IDENT:
            return None
        if tok.text == "var" and self.peek(1).is_punct("("):
            # Legacy tuple declaration: var (a, b) = f();
            start = self.advance().start
            names: list[str] = []
            self.expect("(")
            while not self.at(")"):
                if self.at_ident():
                    names.append(self.advance().text)
                elif not self.accept(","):
                    self.fail("malformed tuple declaration")
            self.expect(")")
            self.expect("=")
            value = self.expression()
            end = value.span.end
            if consume_semi:
                end = self.expect(";").end
            node = self._other("tuple_decl", start, end, names=names)
            node.children = [value]
            return node
        saved = self.pos
        try:
            start = tok.start
            type_text = self.type_name()
            while self.peek().kind == IDENT and self.peek().text in _STORAGE_LOC:
                self.advance()
            if not self.at_ident():
                raise _ParseError("not a declaration", self.peek())
            name_tok = self.advance()
            if not (self.at("=") or self.at(";")):
                raise _ParseError("not a declaration", self.peek())
        except _ParseError:
            self.pos = saved
            return None
        init: AstNode | None = None
        eq_offset: int | None = None
        if self.at("="):
            eq_offset = self.advance().start
            init = self.expression()
        end = init.span.end if init is not None else name_tok.end
        if consume_semi:
            end = self.expect(";").end
        node = AstNode(
            NodeKind.VARIABLE_DECLARATION_STMT,
            Span(start, end),
            [init] if init is not None else [],
        )
        node.attrs.update(
            name=name_tok.text, type_text=type_text, state=False, eq_offset=eq_offset
        )
        return node

    # -- expressions ----------------------------------------------------------------

    def expression(self) -> AstNode:
        return self.assignment_expr()

    def assignment_expr(self) -> AstNode:
        lhs = self.ternary_expr()
        tok = self.peek()
        if tok.kind == PUNCT and tok.text in _ASSIGN_OPS:
            op = self.advance()
            rhs = self.assignment_expr()
            node = AstNode(
                NodeKind.ASSIGNMENT, Span(lhs.span.start, rhs.span.end), [lhs, rhs]
            )
            node.attrs.update(op=op.text, op_offset=op.start)
            return node
        return lhs

    def ternary_expr(self) -> AstNode:
        cond = self.binary_expr(0)
        if self.at("?"):
            self.advance()
            then = self.expression()
            self.expect(":")
            otherwise = self.expression()
            node = AstNode(
                NodeKind.OTHER,
                Span(cond.span.start, otherwise.span.end),
                [cond, then, otherwise],
            )
            node.attrs["construct"] = "ternary"
            return node
        return cond

    def binary_expr(self, level: int) -> AstNode:
        if level >= len(_BINARY_LEVELS):
            return self.power_expr()
        ops = _BINARY_LEVELS[level]
        node = self.binary_expr(level + 1)
        while self.peek().kind == PUNCT and self.peek().text in ops:
            op = self.advance()
            rhs = self.binary_expr(level + 1)
            parent = AstNode(
                NodeKind.BINARY_OP, Span(node.span.start, rhs.span.end), [node, rhs]
            )
            parent.attrs["op"] = op.text
            node = parent
        return node

    def power_expr(self) -> AstNode:
        base = self.unary_expr()
        if self.at("**"):
            self.advance()
            exponent = self.power_expr()
            node = AstNode(
                NodeKind.BINARY_OP,
                Span(base.span.start, exponent.span.end),
                [base, exponent],
            )
            node.attrs["op"] = "**"
            return node
        return base

    def unary_expr(self) -> AstNode:
        tok = self.peek()
        if tok.kind == PUNCT and tok.text in _UNARY_PREFIX:
            op = self.advance()
            operand = self.unary_expr()
            node = AstNode(
                NodeKind.OTHER, Span(op.start, operand.span.end), [operand]
            )
            node.attrs.update(construct="unary", op=op.text, prefix=True)
            return node
        if tok.is_ident("delete"):
            op = self.advance()
            operand = self.unary_expr()
            node = AstNode(NodeKind.OTHER, Span(op.start, operand.span.end), [operand])
            node.attrs.update(construct="unary", op="delete", prefix=True)
            return node
        if tok.is_ident("new"):
            op = self.advance()
            start = self.peek().start
            self.type_name()
            end = self.tokens[self.pos - 1].end
            type_node = self._other("new_type", start, end)
            node = AstNode(NodeKind.OTHER, Span(op.start, end), [type_node])
            node.attrs.update(construct="new")
            return self.trailer_loop(node)
        return self.postfix_expr()

    def postfix_expr(self) -> AstNode:
        node = self.trailer_loop(self.primary_expr())
        tok = self.peek()
        if tok.kind == PUNCT and tok.text in ("++", "--"):
            op = self.advance()
            parent = AstNode(NodeKind.OTHER, Span(node.span.start, op.end), [node])
            parent.attrs.update(construct="unary", op=op.text, prefix=False)
            return parent
        return node

    def trailer_loop(self, node: AstNode) -> AstNode:
        while True:
            tok = self.peek()
            if tok.is_punct("."):
                self.advance()
                member = self.expect_ident("member name")
                parent = AstNode(
                    NodeKind.MEMBER_ACCESS, Span(node.span.start, member.end), [node]
                )
                parent.attrs["member"] = member.text
                node = parent
            elif tok.is_punct("("):
                node = self.call_arguments(node)
            elif tok.is_punct("["):
                self.advance()
                index = None if self.at("]") else self.expression()
                end = self.expect("]").end
                children = [node] + ([index] if index is not None else [])
                parent = AstNode(NodeKind.OTHER, Span(node.span.start, end), children)
                parent.attrs["construct"] = "index"
                node = parent
            elif tok.is_punct("{") and self.looks_like_call_options():
                node = self.call_options(node)
            else:
                return node

    def looks_like_call_options(self) -> bool:
        return (
            self.peek(1).kind == IDENT
            and self.peek(2).is_punct(":")
        ) or self.peek(1).is_punct("}")

    def call_options(self, target: AstNode) -> AstNode:
        self.expect("{")
        names: list[str] = []
        values: list[AstNode] = []
        while not self.at("}"):
            names.append(self.expect_ident("call option name").text)
            self.expect(":")
            values.append(self.expression())
            if not self.accept(","):
                break
        end = self.expect("}").end
        node = AstNode(
            NodeKind.OTHER, Span(target.span.start, end), [target, *values]
        )
        node.attrs.update(construct="call_options", options=names)
        return node

    def call_arguments(self, callee: AstNode) -> AstNode:
        self.expect("(")
        args: list[AstNode] = []
        named = False
        if self.at("{"):
            named = True
            self.advance()
            while not self.at("}"):
                self.expect_ident("argument name")
                self.expect(":")
                args.append(self.expression())
                if not self.accept(","):
                    break
            self.expect("}")
        elif not self.at(")"):
            while True:
                args.append(self.expression())
                if not self.accept(","):
                    break
        end = self.expect(")").end
        kind = NodeKind.FUNCTION_CALL
        if callee.kind is NodeKind.IDENTIFIER:
            if callee.attrs.get("name") == "require":
                kind = NodeKind.REQUIRE_CALL
            elif callee.attrs.get("name") == "assert":
                kind = NodeKind.ASSERT_CALL
        node = AstNode(kind, Span(callee.span.start, end), [callee, *args])
        if named:
            node.attrs["named_args"] = True
        return node

    def primary_expr(self) -> AstNode:
        tok = self.peek()
        if tok.kind == NUMBER:
            self.advance()
            end = tok.end
            unit = None
            nxt = self.peek()
            if nxt.kind == IDENT and nxt.text in _NUMBER_UNITS:
                unit = self.advance().text
                end = self.tokens[self.pos - 1].end
            return self._other("number", tok.start, end, text=tok.text, unit=unit)
        if tok.kind == STRING:
            self.advance()
            end = tok.end
            while self.peek().kind == STRING:  # adjacent literal concatenation
                end = self.advance().end
            return self._other("string", tok.start, end)
        if tok.kind == IDENT:
            if tok.text in ("true", "false"):
                self.advance()
                return self._other("bool", tok.start, tok.end, value=tok.text)
            if is_elementary_type(tok.text) and tok.text != "var":
                self.advance()
                end = tok.end
                if tok.text == "address" and self.at("payable"):
                    end = self.advance().end
                return self._other("elementary_type", tok.start, end, name=tok.text)
            self.advance()
            node = AstNode(NodeKind.IDENTIFIER, Span(tok.start, tok.end))
            node.attrs["name"] = tok.text
            return node
        if tok.is_punct("("):
            open_tok = self.advance()
            components: list[AstNode | None] = []
            if self.at(")"):
                close = self.advance()
                return self._other("tuple", open_tok.start, close.end)
            while True:
                if self.at(",") or self.at(")"):
                    components.append(None)
                else:
                    components.append(self.expression())
                if not self.accept(","):
                    break
            close = self.expect(")")
            present = [c for c in components if c is not None]
            if len(components) == 1 and len(present) == 1:
                return present[0]
            node = AstNode(NodeKind.OTHER, Span(open_tok.start, close.end), present)
            node.attrs.update(
                construct="tuple",
                arity=len(components),
                holes=[i for i, c in enumerate(components) if c is None],
            )
            return node
        if tok.is_punct("["):
            open_tok = self.advance()
            items: list[AstNode] = []
            while not self.at("]"):
                items.append(self.expression())
                if not self.accept(","):
                    break
            close = self.expect("]")
            node = AstNode(NodeKind.OTHER, Span(open_tok.start, close.end), items)
            node.attrs["construct"] = "array"
            return node
        self.fail(f"expected expression, found {tok.text!r}")
        raise AssertionError  # unreachable


# -- scope queries ---------------------------------------------------------------


def scope_identifiers(node: AstNode) -> set[str]:
    """Every identifier name visible at ``node``'s position.

    Declarations anywhere in an enclosing block count (0.4-era hoisting,
    and the safe superset for collision checks), along with enclosing
    function/modifier parameters, contract members, base names, and the
    names of sibling contracts in the same file.
    """
    names: set[str] = set()
    chain = [node, *node.ancestors()]
    root = chain[-1]
    contracts_by_name = {
        child.attrs["name"]: child
        for child in root.children
        if child.kind is NodeKind.CONTRACT_DEF
    } if root.kind is NodeKind.OTHER and root.attrs.get("construct") == "source" else {}
    for anc in chain:
        kind = anc.kind
        if kind is NodeKind.BLOCK:
            for child in anc.children:
                _collect_declared(child, names)
        elif kind is NodeKind.FOR_STMT:
            init_slot = anc.attrs.get("init")
            if init_slot is not None:
                _collect_declared(anc.children[init_slot], names)
        elif kind in (
            NodeKind.FUNCTION_DEF,
            NodeKind.CONSTRUCTOR_DEF,
            NodeKind.MODIFIER_DEF,
        ):
            if anc.attrs.get("name"):
                names.add(anc.attrs["name"])
            for _, pname in anc.attrs.get("params", []):
                if pname:
                    names.add(pname)
            for _, rname in anc.attrs.get("returns", []):
                if rname:
                    names.add(rname)
        elif kind is NodeKind.CONTRACT_DEF:
            names.update(contract_member_names(anc))
            # members inherited from same-file bases are visible too
            seen = {anc.attrs["name"]}
            pending = list(anc.attrs.get("bases", []))
            while pending:
                base = pending.pop()
                if base in seen or base not in contracts_by_name:
                    continue
                seen.add(base)
                base_node = contracts_by_name[base]
                names.update(contract_member_names(base_node))
                pending.extend(base_node.attrs.get("bases", []))
        elif kind is NodeKind.OTHER and anc.attrs.get("construct") == "source":
            names.update(contracts_by_name)
    return names


def contract_member_names(contract: AstNode) -> set[str]:
    names = set(contract.attrs.get("bases", []))
    names.add(contract.attrs["name"])
    for child in contract.children:
        if child.kind is NodeKind.VARIABLE_DECLARATION_STMT:
            names.add(child.attrs["name"])
        elif child.kind in (
            NodeKind.FUNCTION_DEF,
            NodeKind.CONSTRUCTOR_DEF,
            NodeKind.MODIFIER_DEF,
        ):
            if child.attrs.get("name"):
                names.add(child.attrs["name"])
        elif child.kind is NodeKind.OTHER and "name" in child.attrs:
            names.add(child.attrs["name"])
    return names


def _collect_declared(stmt: AstNode, out: set[str]) -> None:
    if stmt.kind is NodeKind.VARIABLE_DECLARATION_STMT:
        out.add(stmt.attrs["name"])
    elif stmt.kind is NodeKind.OTHER and stmt.attrs.get("construct") == "tuple_decl":
        out.update(stmt.attrs.get("names", []))


def declared_names_within(node: AstNode) -> set[str]:
    """Names declared anywhere inside ``node``'s subtree."""
    names: set[str] = set()
    for sub in node.walk():
        _collect_declared(sub, names)
        if sub.kind in (
            NodeKind.FUNCTION_DEF,
            NodeKind.CONSTRUCTOR_DEF,
            NodeKind.MODIFIER_DEF,
        ):
            for _, pname in sub.attrs.get("params", []):
                if pname:
                    names.add(pname)
    return names
