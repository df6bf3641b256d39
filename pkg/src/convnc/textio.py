"""Line-oriented text format for code instances, plus expression parsing.

Document grammar, one directive per line, ``#`` starts a comment:

    field GF(2)                  prime order or 2^m; optional: poly <int>
    omega 2
    node S
    chan e1 S A                  id, tail node, head node
    sink X
    lek e1 e3 = 1+z              kernel for the adjacent pair (e1, e3)
    lek e4 e3 = z/(1-z)
    inject 1 e1 = 1              injection override, message row 1 -> e1
    input t0 = 1 0               source vector for slot 0

Kernel expressions are sums of terms ``c``, ``z``, ``c z^k`` with ``+``
and ``-``, optionally divided by a parenthesized polynomial whose
constant term must be nonzero.  Coefficients are written in the decimal
canonical element form.  Channel indices follow declaration order; when
no inject line appears the injection matrix defaults to identity on the
first omega channels.

There is no source directive: the source is the unique node that has
outgoing channels but no incoming ones, matching the model where the
source's only inputs are its imaginary message channels.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .field import Field, Matrix
from .network import Channel, CncInstance, NetworkGraph, default_injection
from .series import RationalSeries, poly_trim


class ParseError(ValueError):
    """Input rejected, tagged with the 1-based source line when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


# ---------------------------------------------------------------------------
# rational expression grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|(\^)|(\+)|(-)|(/)|(\()|(\)))")


def _tokenize(text: str) -> List[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r} in expression {text!r}")
            break
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class _ExprParser:
    def __init__(self, field: Field, tokens: List[str], source: str):
        self.field = field
        self.tokens = tokens
        self.pos = 0
        self.source = source

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of expression {self.source!r}")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.take()
        if got != tok:
            raise ParseError(f"expected {tok!r} but found {got!r} in {self.source!r}")

    def parse_poly(self) -> tuple:
        """Signed sum of terms into a coefficient tuple."""
        field = self.field
        coeffs: Dict[int, int] = {}
        sign = 1
        tok = self.peek()
        if tok in ("+", "-"):
            self.take()
            sign = -1 if tok == "-" else 1
        while True:
            coeff, degree = self.parse_term()
            if sign < 0:
                coeff = field.neg(coeff)
            coeffs[degree] = field.add(coeffs.get(degree, 0), coeff)
            tok = self.peek()
            if tok in ("+", "-"):
                self.take()
                sign = -1 if tok == "-" else 1
                continue
            break
        width = max(coeffs) + 1 if coeffs else 0
        return poly_trim(tuple(coeffs.get(d, 0) for d in range(width)))

    def parse_term(self) -> Tuple[int, int]:
        tok = self.take()
        coeff = 1
        if tok.isdigit():
            value = int(tok)
            if value >= self.field.order:
                raise ParseError(
                    f"coefficient {value} is not an element of {self.field} in {self.source!r}"
                )
            coeff = value
            if self.peek() != "z":
                return coeff, 0
            self.take()
        elif tok != "z":
            raise ParseError(f"expected a term but found {tok!r} in {self.source!r}")
        degree = 1
        if self.peek() == "^":
            self.take()
            exp = self.take()
            if not exp.isdigit():
                raise ParseError(f"expected an exponent after '^' in {self.source!r}")
            degree = int(exp)
        return coeff, degree

    def parse_rational(self) -> RationalSeries:
        if self.peek() == "(":
            self.take()
            num = self.parse_poly()
            self.expect(")")
        else:
            num = self.parse_poly()
        den = (1,)
        if self.peek() == "/":
            self.take()
            self.expect("(")
            den = self.parse_poly()
            self.expect(")")
        if self.peek() is not None:
            raise ParseError(f"trailing tokens in expression {self.source!r}")
        if not den or den[0] == 0:
            raise ParseError(
                f"denominator constant term is zero in {self.source!r}: not a rational power series"
            )
        return RationalSeries(self.field, num, den)


def parse_rational(text: str, field: Field) -> RationalSeries:
    return _ExprParser(field, _tokenize(text), text).parse_rational()


def render_poly(field: Field, coeffs: Sequence[int]) -> str:
    coeffs = poly_trim(coeffs)
    if not coeffs:
        return "0"
    parts = []
    for degree, c in enumerate(coeffs):
        if c == 0:
            continue
        if degree == 0:
            parts.append(str(c))
        else:
            z = "z" if degree == 1 else f"z^{degree}"
            parts.append(z if c == 1 else f"{c}{z}")
    return "+".join(parts)


def render_rational(series: RationalSeries) -> str:
    num = render_poly(series.field, series.num)
    if series.is_polynomial:
        return num
    return f"{num}/({render_poly(series.field, series.den)})"


def render_field(field: Field) -> str:
    if field.kind == "binary" and field.degree > 1:
        return f"GF(2^{field.degree})"
    return f"GF({field.order})"


# ---------------------------------------------------------------------------
# document parsing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParsedDocument:
    instance: CncInstance
    source_stream: Optional[Tuple[Tuple[int, ...], ...]]


def _parse_field_directive(args: List[str], line: int) -> Field:
    if not args:
        raise ParseError("field directive needs an argument like GF(2)", line)
    m = re.fullmatch(r"GF\((\d+)(?:\^(\d+))?\)", args[0])
    if m is None:
        raise ParseError(f"malformed field {args[0]!r}", line)
    base = int(m.group(1))
    order = base ** int(m.group(2)) if m.group(2) else base
    poly = None
    rest = args[1:]
    if rest:
        if len(rest) != 2 or rest[0] != "poly" or not rest[1].isdigit():
            raise ParseError("field options must be 'poly <integer>'", line)
        poly = int(rest[1])
    try:
        return Field(order, poly)
    except ValueError as exc:
        raise ParseError(str(exc), line) from None


def parse_document(text: str) -> ParsedDocument:
    field: Optional[Field] = None
    omega: Optional[int] = None
    nodes: List[str] = []
    channels: List[Channel] = []
    sinks: List[str] = []
    lek_lines: List[Tuple[int, str, str, str]] = []
    inject_lines: List[Tuple[int, int, str, str]] = []
    input_lines: Dict[int, Tuple[int, List[str]]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" in stripped:
            head, expr = stripped.split("=", 1)
            words = head.split()
            words.append(expr.strip())
        else:
            words = stripped.split()
        keyword, args = words[0], words[1:]
        if keyword == "field":
            field = _parse_field_directive(args, lineno)
        elif keyword == "omega":
            if len(args) != 1 or not args[0].isdigit() or int(args[0]) < 1:
                raise ParseError("omega needs one positive integer", lineno)
            omega = int(args[0])
        elif keyword == "node":
            if len(args) != 1:
                raise ParseError("node needs exactly one identifier", lineno)
            nodes.append(args[0])
        elif keyword == "chan":
            if len(args) != 3:
                raise ParseError("chan needs: id, tail node, head node", lineno)
            channels.append(Channel(args[0], args[1], args[2]))
        elif keyword == "sink":
            if len(args) != 1:
                raise ParseError("sink needs exactly one node identifier", lineno)
            sinks.append(args[0])
        elif keyword == "lek":
            if len(args) != 3:
                raise ParseError("lek needs: channel d, channel e = expression", lineno)
            lek_lines.append((lineno, args[0], args[1], args[2]))
        elif keyword == "inject":
            if len(args) != 3 or not args[0].isdigit():
                raise ParseError("inject needs: message row, channel = coefficient", lineno)
            inject_lines.append((lineno, int(args[0]), args[1], args[2]))
        elif keyword == "input":
            m = re.fullmatch(r"t(\d+)", args[0]) if len(args) == 2 else None
            if m is None:
                raise ParseError("input needs: t<slot> = symbols", lineno)
            input_lines[int(m.group(1))] = (lineno, args[1].split())
        else:
            raise ParseError(f"unknown directive {keyword!r}", lineno)

    if field is None:
        raise ParseError("missing field declaration")
    if omega is None:
        raise ParseError("missing omega declaration")
    try:
        graph = NetworkGraph(nodes, channels, _find_source(nodes, channels), omega, sinks)
    except ValueError as exc:
        raise ParseError(str(exc)) from None

    known = {ch.id for ch in channels}
    leks: Dict[Tuple[str, str], RationalSeries] = {}
    for lineno, d, e, expr in lek_lines:
        for cid in (d, e):
            if cid not in known:
                raise ParseError(f"unknown channel {cid!r}", lineno)
        if not graph.is_adjacent_pair(d, e):
            raise ParseError(f"({d}, {e}) is not an adjacent pair: no node joins them", lineno)
        if (d, e) in leks:
            raise ParseError(f"duplicate kernel for ({d}, {e})", lineno)
        try:
            leks[(d, e)] = parse_rational(expr, field)
        except ParseError as exc:
            raise ParseError(str(exc).split(": ", 1)[-1], lineno) from None

    hs = None
    if inject_lines:
        grid = [[0] * graph.n for _ in range(omega)]
        for lineno, row, cid, literal in inject_lines:
            if not 1 <= row <= omega:
                raise ParseError(f"inject row {row} is outside 1..{omega}", lineno)
            if cid not in known:
                raise ParseError(f"unknown channel {cid!r}", lineno)
            if not literal.isdigit() or int(literal) >= field.order:
                raise ParseError(f"{literal!r} is not an element of {field}", lineno)
            grid[row - 1][graph.index(cid)] = int(literal)
        hs = Matrix(field, grid)

    try:
        instance = CncInstance(field, graph, leks, hs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None

    stream = None
    if input_lines:
        expected = set(range(len(input_lines)))
        if set(input_lines) != expected:
            raise ParseError("input slots must be consecutive from t0")
        vectors = []
        for slot in sorted(input_lines):
            lineno, symbols = input_lines[slot]
            if len(symbols) != omega:
                raise ParseError(f"input t{slot} needs {omega} symbols", lineno)
            row = []
            for s in symbols:
                if not s.isdigit() or int(s) >= field.order:
                    raise ParseError(f"{s!r} is not an element of {field}", lineno)
                row.append(int(s))
            vectors.append(tuple(row))
        stream = tuple(vectors)
    return ParsedDocument(instance=instance, source_stream=stream)


def _find_source(nodes: Sequence[str], channels: Sequence[Channel]) -> str:
    """The unique node with outgoing channels and no incoming ones."""
    heads = {ch.head for ch in channels}
    candidates = [n for n in nodes if n not in heads and any(c.tail == n for c in channels)]
    if len(candidates) != 1:
        raise ParseError(
            "the document must have exactly one node with outgoing channels "
            f"and no incoming ones; found {candidates or 'none'}"
        )
    return candidates[0]


def render_document(
    instance: CncInstance, stream: Optional[Sequence[Sequence[int]]] = None
) -> str:
    """Canonical text form; parsing it back reproduces the instance."""
    g = instance.graph
    lines = [f"field {render_field(instance.field)}"
             + (f" poly {instance.field.reduction_poly}" if instance.field.kind == "binary" and instance.field.degree > 1 else "")]
    lines.append(f"omega {g.omega}")
    lines.extend(f"node {n}" for n in g.nodes)
    lines.extend(f"chan {c.id} {c.tail} {c.head}" for c in g.channels)
    lines.extend(f"sink {s}" for s in g.sinks)
    ordered = sorted(instance.leks.items(), key=lambda kv: (g.index(kv[0][0]), g.index(kv[0][1])))
    lines.extend(
        f"lek {d} {e} = {render_rational(k)}" for (d, e), k in ordered if not k.is_zero
    )
    if instance.hs != default_injection(instance.field, g.omega, g.n):
        for i in range(g.omega):
            for j, c in enumerate(instance.hs.data[i]):
                if c:
                    lines.append(f"inject {i + 1} {g.channels[j].id} = {c}")
    if stream:
        for t, vec in enumerate(stream):
            lines.append(f"input t{t} = " + " ".join(str(v) for v in vec))
    return "\n".join(lines) + "\n"


def format_stream(stream) -> str:
    """One line per slot: ``t | e1:v e2:v ...`` in channel order."""
    lines = []
    for t in range(stream.slots):
        cells = " ".join(f"{cid}:{stream.values[cid][t]}" for cid in stream.channel_ids)
        lines.append(f"{t} | {cells}")
    return "\n".join(lines) + "\n"
