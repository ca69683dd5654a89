"""Divisor expressions: parsing and canonical rendering.

Grammar (whitespace ignored)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | primary
    primary := number | atom | "(" expr ")"
    atom    := x{1,2} | x_{12} | alpha | beta | alpha_{S} | beta_{S}
               | alpha_E | beta_E | S_{k} | S_k

Products are only allowed when at most one factor is a divisor.
"""
import re
from fractions import Fraction

from .chow import DivisorClass, fraction_str
from .errors import NotAFlatError, ParseError, RankError

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+)"
    r"|(?P<atom>(?:alpha|beta|x|S)(?:_?\{[^}]*\}|_(?:E|\d+))?)"
    r"|(?P<op>[-+*/()−])"
    r")"
)


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        while text[pos].isspace():
            pos += 1
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}", position=pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if value == "−":
            value = "-"
        out.append((kind, value, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def _parse_set(M, body, pos):
    body = body.strip()
    if body in ("E", ""):
        if body == "":
            raise ParseError(f"empty subset at position {pos}", position=pos)
        return M.full
    if "," in body:
        parts = [p.strip() for p in body.split(",")]
    elif body.isdigit():
        parts = list(body) if len(body) > 1 and M.n <= 9 else [body]
    else:
        parts = [body]
    labels = []
    for p in parts:
        if not p.isdigit():
            raise ParseError(f"bad element {p!r} at position {pos}", position=pos)
        labels.append(int(p))
    try:
        return M.to_mask(labels)
    except ParseError as exc:
        raise ParseError(f"{exc} (position {pos})", position=pos) from None


def _atom(M, text, pos):
    m = re.fullmatch(r"(alpha|beta|x|S)(?:_?\{([^}]*)\}|_(E|\d+))?", text)
    name, braced, bare = m.group(1), m.group(2), m.group(3)
    arg = braced if braced is not None else bare
    lat = M.lattice
    proper = lat.proper
    if name == "x":
        if arg is None:
            raise ParseError(f"x needs a subset at position {pos}", position=pos)
        F = _parse_set(M, arg, pos)
        if F not in lat or F in (0, M.full):
            raise NotAFlatError(
                f"{list(M.to_labels(F))} is not a proper nonempty flat (position {pos})",
                subset=list(M.to_labels(F)),
                position=pos,
            )
        return {F: Fraction(1)}
    if name == "S":
        if arg is None or not arg.strip().isdigit():
            raise ParseError(f"S needs an integer index at position {pos}", position=pos)
        k = int(arg)
        if not 0 < k < M.r:
            raise RankError(f"S_{k} needs 0 < k < {M.r} (position {pos})", position=pos)
        return {F: Fraction(1) for F in proper if lat.rank_of[F] == M.r - k}
    S = M.full if arg is None else _parse_set(M, arg, pos)
    if name == "alpha":
        return {F: Fraction((1 if F & 1 else 0) - (1 if not S & ~F else 0)) for F in proper}
    return {F: Fraction((0 if F & 1 else 1) - (1 if not F & S else 0)) for F in proper}


class _Parser:
    def __init__(self, M, text):
        self.M = M
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r} at position {pos}", position=pos)

    def parse(self):
        val = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {v!r} at position {pos}", position=pos)
        return val

    # values are Fraction (scalars) or dict flat -> Fraction (divisors)
    def expr(self):
        val = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, pos = self.take()
            rhs = self.term()
            val = _combine(val, rhs, 1 if op == "+" else -1, pos)
        return val

    def term(self):
        val = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                if isinstance(val, dict) and isinstance(rhs, dict):
                    raise ParseError(f"product of two divisors at position {pos}", position=pos)
                if isinstance(val, dict):
                    val, rhs = rhs, val
                val = _scale(rhs, val)
            else:
                if isinstance(rhs, dict):
                    raise ParseError(f"division by a divisor at position {pos}", position=pos)
                if rhs == 0:
                    raise ParseError(f"division by zero at position {pos}", position=pos)
                val = _scale(val, 1 / rhs)
        return val

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return _scale(self.unary(), -1)
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.primary()

    def primary(self):
        kind, v, pos = self.take()
        if kind == "num":
            return Fraction(int(v))
        if kind == "atom":
            return _atom(self.M, v, pos)
        if v == "(":
            val = self.expr()
            self.expect(")")
            return val
        what = "end of input" if kind == "end" else repr(v)
        raise ParseError(f"unexpected {what} at position {pos}", position=pos)


def _scale(val, c):
    if isinstance(val, dict):
        return {F: v * c for F, v in val.items()}
    return val * c


def _combine(a, b, sign, pos):
    if isinstance(a, dict) != isinstance(b, dict):
        raise ParseError(f"cannot add a number and a divisor at position {pos}", position=pos)
    if not isinstance(a, dict):
        return a + sign * b
    out = dict(a)
    for F, v in b.items():
        out[F] = out.get(F, 0) + sign * v
    return out


def parse_divisor(M, source):
    """DivisorClass from an expression string or a JSON mapping {expr: coefficient}."""
    if isinstance(source, dict):
        total = {}
        for key, coeff in source.items():
            part = _Parser(M, key).parse()
            if not isinstance(part, dict):
                raise ParseError(f"key {key!r} is not a divisor")
            try:
                c = Fraction(coeff)
            except (TypeError, ValueError):
                raise ParseError(f"bad coefficient {coeff!r} for {key!r}") from None
            for F, v in part.items():
                total[F] = total.get(F, 0) + c * v
        return DivisorClass(M, total)
    if not isinstance(source, str):
        raise ParseError("divisor must be a string or a JSON object")
    val = _Parser(M, source).parse()
    if not isinstance(val, dict):
        if val == 0:
            return DivisorClass(M, {})
        raise ParseError("expression is a number, not a divisor")
    return DivisorClass(M, val)


def flat_token(M, F):
    return "x{" + ",".join(str(e) for e in M.to_labels(F)) + "}"


def render_divisor(D):
    """Canonical text form that parse_divisor reads back."""
    M = D.matroid
    terms = []
    for F, c in sorted(D.coeffs.items(), key=lambda kv: (M.rank_mask(kv[0]), kv[0])):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coeff = "" if mag == 1 else fraction_str(mag) + "*"
        terms.append((sign, coeff + flat_token(M, F)))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
