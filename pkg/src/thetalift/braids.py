"""Braid words and their closures.

Torus knots generated here serve as reference knots with independently known
invariants.  Closures are produced directly as signed Gauss codes by strand
tracing; no geometric coordinates are involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .codes import OVER, UNDER, CodeError, GaussEvent, KnotCode, validate_knot


class BraidError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    """strands n >= 2; letters i with 1 <= |i| <= n-1 (sign = generator vs inverse)."""

    strands: int
    word: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 2:
            raise BraidError(f"need at least 2 strands, got {self.strands}")
        for v in self.word:
            if v == 0 or abs(v) > self.strands - 1:
                raise BraidError(f"letter {v} out of range for {self.strands} strands")

    def permutation(self) -> list[int]:
        """Entry position -> exit position, 0-based."""
        pos = list(range(self.strands))  # strand index at each position
        for v in self.word:
            j = abs(v) - 1
            pos[j], pos[j + 1] = pos[j + 1], pos[j]
        exit_of = [0] * self.strands
        for p, s in enumerate(pos):
            exit_of[s] = p
        return exit_of


def torus_braid(p: int, q: int) -> BraidWord:
    """(sigma_1 ... sigma_{p-1})^q on p strands; closure is the (p,q) torus knot."""
    if p < 2 or q < 2:
        raise BraidError(f"torus parameters must be at least 2, got ({p}, {q})")
    if math.gcd(p, q) != 1:
        raise BraidError(f"({p}, {q}) not coprime; closure would be a link")
    return BraidWord(p, tuple(list(range(1, p)) * q))


def closure(b: BraidWord) -> KnotCode:
    """Signed Gauss code of the braid closure.

    Crossing count equals the word length and each crossing keeps the sign of
    its letter.  Raises when the closure has more than one component.
    """
    exit_of = b.permutation()
    seen = {0}
    s = exit_of[0]
    while s not in seen:
        seen.add(s)
        s = exit_of[s]
    if len(seen) != b.strands:
        n_comp = 0
        left = set(range(b.strands))
        while left:
            n_comp += 1
            s0 = min(left)
            s = s0
            while s in left:
                left.remove(s)
                s = exit_of[s]
        raise BraidError(f"closure has {n_comp} components")

    visits: list[list[GaussEvent]] = [[] for _ in range(b.strands)]
    pos = list(range(b.strands))  # strand at each position
    for i, v in enumerate(b.word):
        j = abs(v) - 1
        left, right = pos[j], pos[j + 1]
        label = str(i + 1)
        if v > 0:
            visits[left].append(GaussEvent(label, OVER, +1))
            visits[right].append(GaussEvent(label, UNDER, +1))
        else:
            visits[left].append(GaussEvent(label, UNDER, -1))
            visits[right].append(GaussEvent(label, OVER, -1))
        pos[j], pos[j + 1] = pos[j + 1], pos[j]

    events: list[GaussEvent] = []
    s = 0
    for _ in range(b.strands):
        events.extend(visits[s])
        s = exit_of[s]
    code = KnotCode(tuple(events)).canonical()
    validate_knot(code)
    return code


def parse_braid(text: str) -> BraidWord:
    """Parse a braid-file: header %braid, then n=<strands> and w=<signed ints>."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines or lines[0][1] != "%braid":
        raise CodeError("missing %braid header", lines[0][0] if lines else 1)
    n = None
    word = None
    for lineno, line in lines[1:]:
        key, _, rest = line.partition("=")
        key = key.strip()
        if key == "n":
            try:
                n = int(rest)
            except ValueError:
                raise CodeError(f"bad strand count {rest.strip()!r}", lineno) from None
        elif key == "w":
            try:
                word = tuple(int(tok) for tok in rest.split())
            except ValueError:
                raise CodeError(f"bad braid letters {rest.strip()!r}", lineno) from None
        else:
            raise CodeError(f"unknown directive {key!r}", lineno)
    if n is None or word is None:
        raise CodeError("braid-file needs both n= and w= lines")
    try:
        return BraidWord(n, word)
    except BraidError as exc:
        raise CodeError(str(exc)) from None


def serialize_braid(b: BraidWord) -> str:
    return f"%braid\nn={b.strands}\nw= {' '.join(str(v) for v in b.word)}\n"
