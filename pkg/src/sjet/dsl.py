"""Surface syntax for charts, morphisms, curves and fields.

Grammar (ASCII source, "#" starts a line comment):

    document := decl* ;
    decl     := chart | params | morphism | curve | field ;
    chart    := "chart" IDENT "(" coord ("," coord)* ")" ";" ;
    coord    := IDENT ":" ("even" | "odd") ;
    params   := "params" IDENT "(" coord ("," coord)* ")" ";" ;
    morphism := "morphism" IDENT ":" IDENT "->" IDENT
                "{" (IDENT "=" expr ";")+ "}" ;
    curve    := "curve" IDENT "on" IDENT "params" IDENT "order" INT
                "{" (IDENT "=" expr ";")+ "}" ;
    field    := "field" IDENT "on" IDENT ("order" INT)? "parity"
                ("even" | "odd") "{" ("d/d" IDENT "=" expr ";")+ "}" ;

Expressions use "+", "-", "*", "^" with nonnegative integer powers,
rational literals "p/q", and parentheses; juxtaposition is not
multiplication. Curve components may use the reserved time variable "t".
Morphism bodies assign every target coordinate an expression over the
source coordinates. A field without "order" lives on its chart; with
"order k" it lives on the parity-reversed lift of the k-th jet chart, and
coordinates missing from its body get the value zero.

Expressions are normalised into canonical polynomials while parsing, and
every diagnostic carries a span into the source text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .errors import SjetError
from .geometry import Chart, Morphism, ParameterAlgebra, SCurve
from .fields import VectorField
from .grassmann import (
    EVEN,
    Generator,
    ODD,
    Parity,
    SuperPolynomial,
    TIME,
    TimeSeries,
    poly,
)
from .prolongation import antitangent_chart, prolong_chart


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int
    end_line: int
    end_column: int

    def merge(self, other: "SourceSpan") -> "SourceSpan":
        first, last = (self, other) if self.start <= other.start else (other, self)
        return SourceSpan(
            first.start, last.end, first.line, first.column,
            last.end_line, last.end_column,
        )


@dataclass(frozen=True)
class Diagnostic:
    message: str
    span: SourceSpan

    @property
    def line(self) -> int:
        return self.span.line

    @property
    def column(self) -> int:
        return self.span.column

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


class DslError(SjetError):
    """A parse or validation failure, carrying located diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


_TOKEN = re.compile(
    r"""
      (?P<COMMENT>\#[^\n]*)
    | (?P<WS>\s+)
    | (?P<DDT>d/d)
    | (?P<ARROW>->)
    | (?P<NUMBER>\d+(?:/\d+)?)
    | (?P<IDENT>(?:d\.)?[A-Za-z_][A-Za-z0-9_]*(?:@\d+)?)
    | (?P<PUNCT>[(){},;:=+\-*^|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def _lex(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    column = 1

    def advance(snippet: str):
        nonlocal line, column
        newlines = snippet.count("\n")
        if newlines:
            line += newlines
            column = len(snippet) - snippet.rfind("\n")
        else:
            column += len(snippet)

    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            span = SourceSpan(pos, pos + 1, line, column, line, column + 1)
            raise DslError([Diagnostic(f"unexpected character {text[pos]!r}", span)])
        kind = match.lastgroup
        snippet = match.group()
        start_line, start_column = line, column
        advance(snippet)
        if kind not in ("COMMENT", "WS"):
            span = SourceSpan(
                match.start(), match.end(), start_line, start_column, line, column
            )
            if kind == "PUNCT":
                kind = snippet
            tokens.append(Token(kind, snippet, span))
        pos = match.end()
    end_span = SourceSpan(len(text), len(text), line, column, line, column)
    tokens.append(Token("EOF", "", end_span))
    return tokens


@dataclass
class Document:
    """Parsed declarations, in source order, resolved to engine objects."""

    declarations: list[tuple[str, str]] = dataclass_field(default_factory=list)
    charts: dict[str, Chart] = dataclass_field(default_factory=dict)
    params: dict[str, ParameterAlgebra] = dataclass_field(default_factory=dict)
    morphisms: dict[str, Morphism] = dataclass_field(default_factory=dict)
    curves: dict[str, SCurve] = dataclass_field(default_factory=dict)
    fields: dict[str, VectorField] = dataclass_field(default_factory=dict)
    field_orders: dict[str, int | None] = dataclass_field(default_factory=dict)
    field_bases: dict[str, str] = dataclass_field(default_factory=dict)
    spans: dict[tuple[str, str], SourceSpan] = dataclass_field(default_factory=dict)


_RESERVED_TIME = "t"


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "EOF":
            self.pos += 1
        return token

    def fail(self, message: str, span: SourceSpan):
        raise DslError([Diagnostic(message, span)])

    def expect(self, kind: str, what: str | None = None) -> Token:
        token = self.peek()
        if token.kind != kind:
            expected = what or f"'{kind}'"
            found = token.text or "end of input"
            self.fail(f"expected {expected}, found {found!r}", token.span)
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        token = self.peek()
        if token.kind != "IDENT" or token.text != word:
            found = token.text or "end of input"
            self.fail(f"expected '{word}', found {found!r}", token.span)
        return self.advance()

    def accept_keyword(self, word: str) -> bool:
        token = self.peek()
        if token.kind == "IDENT" and token.text == word:
            self.advance()
            return True
        return False

    # -- document ---------------------------------------------------------

    def parse_document(self) -> Document:
        doc = Document()
        while True:
            token = self.peek()
            if token.kind == "EOF":
                break
            if token.kind != "IDENT":
                self.fail(
                    f"expected a declaration, found {token.text!r}", token.span
                )
            if token.text == "chart":
                self.parse_chart(doc)
            elif token.text == "params":
                self.parse_params(doc)
            elif token.text == "morphism":
                self.parse_morphism(doc)
            elif token.text == "curve":
                self.parse_curve(doc)
            elif token.text == "field":
                self.parse_field(doc)
            else:
                self.fail(
                    f"unknown declaration keyword {token.text!r}", token.span
                )
        return doc

    def declare_name(self, doc: Document, kind: str, token: Token) -> str:
        table = getattr(doc, kind + "s")
        if token.text in table:
            self.fail(f"duplicate {kind} name '{token.text}'", token.span)
        return token.text

    def parse_coord_list(self) -> list[tuple[Token, Parity]]:
        self.expect("(")
        coords = []
        while True:
            name = self.expect("IDENT", "a coordinate name")
            if name.text == _RESERVED_TIME:
                self.fail(
                    "'t' is reserved for the time variable", name.span
                )
            if "@" in name.text or name.text.startswith("d."):
                self.fail(
                    f"declared names may not contain '@' or a 'd.' prefix: "
                    f"{name.text!r}",
                    name.span,
                )
            self.expect(":")
            parity_token = self.expect("IDENT", "'even' or 'odd'")
            if parity_token.text == "even":
                parity = EVEN
            elif parity_token.text == "odd":
                parity = ODD
            else:
                self.fail(
                    f"expected 'even' or 'odd', found {parity_token.text!r}",
                    parity_token.span,
                )
            coords.append((name, parity))
            token = self.advance()
            if token.kind == ")":
                break
            if token.kind != ",":
                self.fail(
                    f"expected ',' or ')', found {token.text or 'end of input'!r}",
                    token.span,
                )
        return coords

    def parse_chart(self, doc: Document):
        keyword = self.advance()
        name = self.expect("IDENT", "a chart name")
        chart_name = self.declare_name(doc, "chart", name)
        coords = self.parse_coord_list()
        close = self.expect(";")
        seen = set()
        for token, _ in coords:
            if token.text in seen:
                self.fail(f"duplicate coordinate name '{token.text}'", token.span)
            seen.add(token.text)
        chart = Chart(
            chart_name,
            tuple(Generator(token.text, parity) for token, parity in coords),
        )
        doc.charts[chart_name] = chart
        doc.declarations.append(("chart", chart_name))
        doc.spans[("chart", chart_name)] = keyword.span.merge(close.span)

    def parse_params(self, doc: Document):
        keyword = self.advance()
        name = self.expect("IDENT", "a parameter algebra name")
        params_name = self.declare_name(doc, "param", name)
        coords = self.parse_coord_list()
        close = self.expect(";")
        seen = set()
        for token, _ in coords:
            if token.text in seen:
                self.fail(f"duplicate parameter name '{token.text}'", token.span)
            seen.add(token.text)
        algebra = ParameterAlgebra(
            params_name,
            tuple(Generator(token.text, parity) for token, parity in coords),
        )
        doc.params[params_name] = algebra
        doc.declarations.append(("params", params_name))
        doc.spans[("params", params_name)] = keyword.span.merge(close.span)

    def lookup_chart(self, doc: Document, token: Token) -> Chart:
        chart = doc.charts.get(token.text)
        if chart is None:
            self.fail(f"chart '{token.text}' is not declared", token.span)
        return chart

    def parse_assignments(self, resolver) -> list[tuple[Token, SuperPolynomial]]:
        """Parse '{' (lhs '=' expr ';')+ '}' with a resolver for expr names."""
        self.expect("{")
        rows = []
        while True:
            token = self.peek()
            if token.kind == "}":
                if not rows:
                    self.fail("a body needs at least one assignment", token.span)
                self.advance()
                return rows
            lhs = self.expect("IDENT", "a coordinate name")
            self.expect("=")
            value = self.parse_expr(resolver)
            self.expect(";")
            rows.append((lhs, value))

    def parse_morphism(self, doc: Document):
        keyword = self.advance()
        name = self.expect("IDENT", "a morphism name")
        morphism_name = self.declare_name(doc, "morphism", name)
        self.expect(":")
        source = self.lookup_chart(doc, self.expect("IDENT", "a source chart"))
        self.expect("ARROW", "'->'")
        target = self.lookup_chart(doc, self.expect("IDENT", "a target chart"))
        resolver = {g.name: g for g in source.coordinates}
        rows = self.parse_assignments(resolver)
        close = self.tokens[self.pos - 1]

        assignment: dict[Generator, SuperPolynomial] = {}
        for lhs, value in rows:
            try:
                coordinate = target.coordinate(lhs.text)
            except SjetError:
                self.fail(
                    f"'{lhs.text}' is not a coordinate of chart '{target.name}'",
                    lhs.span,
                )
            if coordinate in assignment:
                self.fail(f"coordinate '{lhs.text}' is assigned twice", lhs.span)
            if not value.is_homogeneous(coordinate.parity):
                self.fail(
                    f"parity violation: '{lhs.text}' is {coordinate.parity} but "
                    f"its expression is not",
                    lhs.span,
                )
            assignment[coordinate] = value
        for g in target.coordinates:
            if g not in assignment:
                self.fail(
                    f"morphism '{morphism_name}' assigns nothing to "
                    f"coordinate '{g.name}'",
                    keyword.span.merge(close.span),
                )
        doc.morphisms[morphism_name] = Morphism(source, target, assignment)
        doc.declarations.append(("morphism", morphism_name))
        doc.spans[("morphism", morphism_name)] = keyword.span.merge(close.span)

    def parse_curve(self, doc: Document):
        keyword = self.advance()
        name = self.expect("IDENT", "a curve name")
        curve_name = self.declare_name(doc, "curve", name)
        self.expect_keyword("on")
        chart = self.lookup_chart(doc, self.expect("IDENT", "a chart name"))
        self.expect_keyword("params")
        params_token = self.expect("IDENT", "a parameter algebra name")
        params = doc.params.get(params_token.text)
        if params is None:
            self.fail(
                f"parameter algebra '{params_token.text}' is not declared",
                params_token.span,
            )
        self.expect_keyword("order")
        order_token = self.expect("NUMBER", "a nonnegative order")
        if "/" in order_token.text:
            self.fail("the order must be an integer", order_token.span)
        order = int(order_token.text)
        resolver = {g.name: g for g in params.generators}
        resolver[_RESERVED_TIME] = TIME
        rows = self.parse_assignments(resolver)
        close = self.tokens[self.pos - 1]

        components: dict[Generator, TimeSeries] = {}
        for lhs, value in rows:
            try:
                coordinate = chart.coordinate(lhs.text)
            except SjetError:
                self.fail(
                    f"'{lhs.text}' is not a coordinate of chart '{chart.name}'",
                    lhs.span,
                )
            if coordinate in components:
                self.fail(f"coordinate '{lhs.text}' is assigned twice", lhs.span)
            series = TimeSeries.from_polynomial(value, order)
            for c in series.coefficients:
                if not c.is_homogeneous(coordinate.parity):
                    self.fail(
                        f"parity violation: '{lhs.text}' is {coordinate.parity} "
                        f"but a series coefficient is not",
                        lhs.span,
                    )
            components[coordinate] = series
        for g in chart.coordinates:
            if g not in components:
                self.fail(
                    f"curve '{curve_name}' assigns nothing to coordinate "
                    f"'{g.name}'",
                    keyword.span.merge(close.span),
                )
        doc.curves[curve_name] = SCurve(chart, params, order, components)
        doc.declarations.append(("curve", curve_name))
        doc.spans[("curve", curve_name)] = keyword.span.merge(close.span)

    def parse_field(self, doc: Document):
        keyword = self.advance()
        name = self.expect("IDENT", "a field name")
        field_name = self.declare_name(doc, "field", name)
        self.expect_keyword("on")
        base_token = self.expect("IDENT", "a chart name")
        base = self.lookup_chart(doc, base_token)
        order: int | None = None
        if self.accept_keyword("order"):
            order_token = self.expect("NUMBER", "a nonnegative order")
            if "/" in order_token.text:
                self.fail("the order must be an integer", order_token.span)
            order = int(order_token.text)
        self.expect_keyword("parity")
        parity_token = self.expect("IDENT", "'even' or 'odd'")
        if parity_token.text == "even":
            parity = EVEN
        elif parity_token.text == "odd":
            parity = ODD
        else:
            self.fail(
                f"expected 'even' or 'odd', found {parity_token.text!r}",
                parity_token.span,
            )
        if order is None:
            chart = base
        else:
            chart = antitangent_chart(prolong_chart(base, order))

        self.expect("{")
        resolver = {g.name: g for g in chart.coordinates}
        values: dict[Generator, SuperPolynomial] = {}
        while True:
            token = self.peek()
            if token.kind == "}":
                if not values:
                    self.fail("a body needs at least one assignment", token.span)
                close = self.advance()
                break
            self.expect("DDT", "'d/d'")
            lhs = self.expect("IDENT", "a coordinate name")
            coordinate = resolver.get(lhs.text)
            if coordinate is None:
                self.fail(
                    f"'{lhs.text}' is not a coordinate of chart '{chart.name}'",
                    lhs.span,
                )
            if coordinate in values:
                self.fail(f"coordinate '{lhs.text}' is assigned twice", lhs.span)
            self.expect("=")
            value = self.parse_expr(resolver)
            self.expect(";")
            if not value.is_homogeneous(parity + coordinate.parity):
                self.fail(
                    f"parity violation: the value on '{lhs.text}' must be "
                    f"homogeneous of parity {parity + coordinate.parity}",
                    lhs.span,
                )
            values[coordinate] = value
        doc.fields[field_name] = VectorField(chart, parity, values)
        doc.field_orders[field_name] = order
        doc.field_bases[field_name] = base.name
        doc.declarations.append(("field", field_name))
        doc.spans[("field", field_name)] = keyword.span.merge(close.span)

    # -- expressions --------------------------------------------------------

    def parse_expr(self, resolver) -> SuperPolynomial:
        value = self.parse_term(resolver)
        while True:
            token = self.peek()
            if token.kind == "+":
                self.advance()
                value = value + self.parse_term(resolver)
            elif token.kind == "-":
                self.advance()
                value = value - self.parse_term(resolver)
            else:
                return value

    def parse_term(self, resolver) -> SuperPolynomial:
        value = self.parse_factor(resolver)
        while self.peek().kind == "*":
            self.advance()
            value = value * self.parse_factor(resolver)
        return value

    def parse_factor(self, resolver) -> SuperPolynomial:
        token = self.peek()
        if token.kind == "-":
            self.advance()
            return -self.parse_factor(resolver)
        return self.parse_power(resolver)

    def parse_power(self, resolver) -> SuperPolynomial:
        value = self.parse_atom(resolver)
        while self.peek().kind == "^":
            self.advance()
            exponent = self.expect("NUMBER", "a nonnegative integer power")
            if "/" in exponent.text:
                self.fail("powers must be nonnegative integers", exponent.span)
            value = value ** int(exponent.text)
        return value

    def parse_atom(self, resolver) -> SuperPolynomial:
        token = self.peek()
        if token.kind == "NUMBER":
            self.advance()
            try:
                value = Fraction(token.text)
            except ZeroDivisionError:
                self.fail("rational literal has denominator zero", token.span)
            return SuperPolynomial.scalar(value)
        if token.kind == "IDENT":
            self.advance()
            generator = resolver.get(token.text)
            if generator is None:
                self.fail(f"undeclared identifier '{token.text}'", token.span)
            return poly(generator)
        if token.kind == "(":
            self.advance()
            value = self.parse_expr(resolver)
            self.expect(")")
            return value
        found = token.text or "end of input"
        self.fail(f"expected an expression, found {found!r}", token.span)


def parse(text: str) -> Document:
    """Parse a document, raising DslError with located diagnostics."""
    return _Parser(_lex(text)).parse_document()


def format_document(doc: Document) -> str:
    """Canonical re-rendering of a document; parsing it back is the identity."""
    from .printer import format_polynomial, format_series

    def coord_list(generators) -> str:
        return ", ".join(f"{g.name}: {g.parity}" for g in generators)

    blocks = []
    for kind, name in doc.declarations:
        if kind == "chart":
            chart = doc.charts[name]
            blocks.append(f"chart {name} ({coord_list(chart.coordinates)});")
        elif kind == "params":
            algebra = doc.params[name]
            blocks.append(f"params {name} ({coord_list(algebra.generators)});")
        elif kind == "morphism":
            phi = doc.morphisms[name]
            lines = [f"morphism {name} : {phi.source.name} -> {phi.target.name} {{"]
            for g in phi.target.coordinates:
                lines.append(f"  {g.name} = {format_polynomial(phi.assignment[g])};")
            lines.append("}")
            blocks.append("\n".join(lines))
        elif kind == "curve":
            curve = doc.curves[name]
            lines = [
                f"curve {name} on {curve.chart.name} params {curve.params.name} "
                f"order {curve.order} {{"
            ]
            for g in curve.chart.coordinates:
                lines.append(f"  {g.name} = {format_series(curve.components[g])};")
            lines.append("}")
            blocks.append("\n".join(lines))
        elif kind == "field":
            vf = doc.fields[name]
            order = doc.field_orders[name]
            base = doc.field_bases[name]
            head = f"field {name} on {base}"
            if order is not None:
                head += f" order {order}"
            head += f" parity {vf.parity} {{"
            lines = [head]
            nonzero = [g for g in vf.chart.coordinates if not vf.values[g].is_zero()]
            if not nonzero:
                nonzero = [vf.chart.coordinates[0]]
            for g in nonzero:
                lines.append(f"  d/d {g.name} = {format_polynomial(vf.values[g])};")
            lines.append("}")
            blocks.append("\n".join(lines))
    return "\n".join(blocks) + ("\n" if blocks else "")
