"""Text syntax for words and integral combinations of words.

Words::

    word    := factor (('*')? factor)*
    factor  := atom ('^' (int | atom))*
    atom    := ('y'|'x'|'Y'|'X') digits | '1' | '(' word ')' | '[' word (',' word)+ ']'

An uppercase letter denotes the inverse generator and ``a^b`` with a word
exponent is the conjugate ``b^-1 a b``.  ``[a,b,c]`` is the
left-normed commutator ``[[a,b],c]``.  Ring elements are signed sums of
``coef*word`` terms, where either part may be omitted.
"""
from __future__ import annotations

from .errors import ParseError
from .words import IDENTITY, Word, conjugate, format_word, left_normed


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self, signed=True):
        self.skip()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.error("expected an integer", start)
        return int(self.text[start : self.pos])

    def at_atom(self):
        c = self.peek()
        return c in ("y", "x", "Y", "X", "(", "[") or c.isdigit()

    def word(self):
        if not self.at_atom():
            self.error("expected a word")
        w = self.factor()
        while True:
            c = self.peek()
            if c == "*":
                save = self.pos
                self.pos += 1
                if not self.at_atom():
                    self.pos = save
                    break
                w = w * self.factor()
            elif c in ("y", "x", "Y", "X", "(", "["):
                w = w * self.factor()
            else:
                break
        return w

    def factor(self):
        w = self.atom()
        while self.peek() == "^":
            self.pos += 1
            c = self.peek()
            if c.isdigit() or c in "+-":
                w = w ** self.integer()
            elif c == "{":
                self.pos += 1
                f = self.word()
                self.take("}")
                w = conjugate(w, f)
            elif self.at_atom():
                w = conjugate(w, self.atom())
            else:
                self.error("expected an exponent or a conjugating word")
        return w

    def atom(self):
        c = self.peek()
        start = self.pos
        if c in ("y", "x", "Y", "X"):
            self.pos += 1
            if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
                self.error("generator letter must be followed by an index")
            k = self.integer(signed=False)
            if k < 1:
                self.error("generator indices start at 1", start)
            return Word.gen(k, -1 if c.isupper() else 1)
        if c == "(":
            self.pos += 1
            w = self.word()
            self.take(")")
            return w
        if c == "[":
            self.pos += 1
            parts = [self.word()]
            while self.peek() == ",":
                self.pos += 1
                parts.append(self.word())
            if len(parts) < 2:
                self.error("commutator needs at least two entries")
            self.take("]")
            return left_normed(parts)
        if c.isdigit():
            n = self.integer(signed=False)
            if n != 1:
                self.error("only 1 denotes a group element", start)
            return IDENTITY
        self.error("unexpected character" if c else "unexpected end of input")

    def end(self):
        if self.peek():
            self.error("trailing input")


def parse_word(text: str) -> Word:
    p = _Parser(text)
    w = p.word()
    p.end()
    return w


def parse_words(text: str, sep: str = ";") -> list:
    return [parse_word(part) for part in text.split(sep) if part.strip()]


def parse_ring(text: str) -> dict:
    """Parse a signed sum of terms into a ``{Word: coef}`` mapping."""
    p = _Parser(text)
    terms: dict = {}
    first = True
    while True:
        c = p.peek()
        sign = 1
        if c and c in "+-":
            sign = -1 if c == "-" else 1
            p.pos += 1
        elif not first:
            break
        if not p.peek():
            p.error("expected a term")
        coef, w = _term(p)
        terms[w] = terms.get(w, 0) + sign * coef
        first = False
        if p.peek() not in ("+", "-"):
            break
    p.end()
    return {w: c for w, c in terms.items() if c}


def _term(p):
    c = p.peek()
    if c.isdigit():
        start = p.pos
        n = p.integer(signed=False)
        nxt = p.peek()
        if nxt == "*":
            p.pos += 1
            return n, p.word()
        if nxt in ("y", "x", "Y", "X", "(", "["):
            return n, p.word()
        if nxt == "^" and n == 1:
            p.pos = start
            return 1, p.word()
        return n, IDENTITY
    return 1, p.word()


def format_ring(terms, key=Word.sort_key) -> str:
    """Canonical text of a ``{Word: coef}`` mapping, terms in word order."""
    items = sorted(((w, c) for w, c in terms.items() if c), key=lambda wc: key(wc[0]))
    if not items:
        return "0"
    out = []
    for idx, (w, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if w.is_identity():
            body = str(a)
        elif a == 1:
            body = format_word(w)
        else:
            body = f"{a}*{format_word(w)}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)
