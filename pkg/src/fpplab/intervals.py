"""Finite unions of intervals and atoms on the half-line, with a literal parser.

Grammar of the literal syntax (whitespace is ignored)::

    set      := term ( union term )*
    union    := "∪" | "U" | "|"
    term     := interval | atoms
    interval := ( "[" | "(" ) number "," number ( "]" | ")" )
    atoms    := "{" number ( "," number )* "}"
    number   := decimal float | "inf"

Examples: ``[0,0.5) ∪ {2} ∪ [3,inf)``, ``(0.5,1]``, ``{0}``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

Piece = tuple  # (lo, hi, lo_closed, hi_closed)


class IntervalSyntaxError(ValueError):
    def __init__(self, message: str, column: int, token: str):
        super().__init__(f"column {column}: {message} (at {token!r})")
        self.message = message
        self.column = column
        self.token = token


def _nonempty(p: Piece) -> bool:
    a, b, lc, rc = p
    return a < b or (a == b and lc and rc)


def _normalize(pieces: Iterable[Piece]) -> tuple:
    ps = sorted((p for p in pieces if _nonempty(p)), key=lambda p: (p[0], not p[2]))
    out: list[list] = []
    for a, b, lc, rc in ps:
        if out:
            ca, cb, clc, crc = out[-1]
            if a < cb or (a == cb and (crc or lc)):
                if b > cb or (b == cb and rc):
                    out[-1][1], out[-1][3] = b, rc if b > cb else (crc or rc)
                continue
        out.append([a, b, lc, rc])
    return tuple(tuple(p) for p in out)


@dataclass(frozen=True)
class IntervalSet:
    """A finite union of intervals; each piece is (lo, hi, lo_closed, hi_closed).

    Atoms are degenerate closed pieces.  Pieces are disjoint and sorted after
    construction, so membership tests are exact.
    """

    pieces: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", _normalize(tuple(p) for p in self.pieces))

    @classmethod
    def half_open(cls, a: float, b: float = math.inf) -> "IntervalSet":
        return cls(((a, b, True, False),))

    @classmethod
    def closed(cls, a: float, b: float) -> "IntervalSet":
        return cls(((a, b, True, True),))

    @classmethod
    def left_open(cls, a: float, b: float) -> "IntervalSet":
        return cls(((a, b, False, True),))

    @classmethod
    def atoms_of(cls, *values: float) -> "IntervalSet":
        return cls(tuple((v, v, True, True) for v in values))

    @classmethod
    def everything(cls) -> "IntervalSet":
        return cls(((-math.inf, math.inf, False, False),))

    @property
    def intervals(self) -> tuple:
        return tuple(p for p in self.pieces if p[0] < p[1])

    @property
    def atoms(self) -> tuple:
        return tuple(p[0] for p in self.pieces if p[0] == p[1])

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.pieces + other.pieces)

    __or__ = union

    def isdisjoint(self, other: "IntervalSet") -> bool:
        for a, b, lc, rc in self.pieces:
            for c, e, lc2, rc2 in other.pieces:
                lo, lo_c = (a, lc) if a > c else (c, lc2) if c > a else (a, lc and lc2)
                hi, hi_c = (b, rc) if b < e else (e, rc2) if e < b else (b, rc and rc2)
                if _nonempty((lo, hi, lo_c, hi_c)):
                    return False
        return True

    def contains(self, values) -> np.ndarray:
        v = np.asarray(values, dtype=np.float64)
        hit = np.zeros(v.shape, dtype=bool)
        for a, b, lc, rc in self.pieces:
            lo_ok = v >= a if lc else v > a
            hi_ok = v <= b if rc else v < b
            hit |= lo_ok & hi_ok
        return hit

    def __contains__(self, value: float) -> bool:
        return bool(self.contains([value])[0])

    def __str__(self) -> str:
        parts = []
        for a, b, lc, rc in self.pieces:
            if a == b:
                parts.append("{" + _fmt(a) + "}")
            else:
                parts.append(("[" if lc else "(") + _fmt(a) + "," + _fmt(b) + ("]" if rc else ")"))
        return " ∪ ".join(parts) if parts else "{}"

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        return _Parser(text).parse()


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


_TOKEN = re.compile(r"\s*(?:(?P<num>-?inf|[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|(?P<sym>[\[\](){},∪U|])|(?P<bad>[A-Za-z_]\w*|\S))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:  # only trailing whitespace left
                break
            if m.group("num") is not None:
                self.toks.append(("num", m.group("num"), m.start("num") + 1))
            elif m.group("sym") is not None:
                self.toks.append(("sym", m.group("sym"), m.start("sym") + 1))
            else:
                raise IntervalSyntaxError("unexpected token", m.start("bad") + 1, m.group("bad"))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.text) + 1)

    def _next(self):
        t = self._peek()
        self.i += 1
        return t

    def _expect(self, *syms: str):
        kind, tok, col = self._next()
        if kind != "sym" or tok not in syms:
            raise IntervalSyntaxError(f"expected one of {' '.join(syms)}", col, tok)
        return tok

    def _number(self) -> float:
        kind, tok, col = self._next()
        if kind != "num":
            raise IntervalSyntaxError("expected a number", col, tok)
        v = float(tok)
        if math.isnan(v):
            raise IntervalSyntaxError("NaN is not allowed", col, tok)
        return v

    def parse(self) -> IntervalSet:
        pieces = []
        if self._peek()[0] == "eof":
            raise IntervalSyntaxError("empty set literal", 1, "")
        while True:
            kind, tok, col = self._peek()
            if tok in ("[", "("):
                self._next()
                a = self._number()
                self._expect(",")
                b = self._number()
                close = self._expect("]", ")")
                if a > b:
                    raise IntervalSyntaxError("interval endpoints out of order", col, tok)
                pieces.append((a, b, tok == "[", close == "]"))
            elif tok == "{":
                self._next()
                while True:
                    v = self._number()
                    pieces.append((v, v, True, True))
                    if self._expect(",", "}") == "}":
                        break
            else:
                raise IntervalSyntaxError("expected an interval or atom set", col, tok)
            kind, tok, col = self._peek()
            if kind == "eof":
                break
            if tok not in ("∪", "U", "|"):
                raise IntervalSyntaxError("expected a union symbol", col, tok)
            self._next()
        return IntervalSet(tuple(pieces))
