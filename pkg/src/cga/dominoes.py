"""Domino systems, bordered corridor tilings and their compilation into games.

A corridor tiling of a word ``w`` has ``w`` as its top row, the side
domino in the first and last column of every row except the last, and the
bottom domino across the last row.  Adjacent cells must be compatible
under the horizontal resp. vertical relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType

from .core import BOX, HASH, RESERVED_CHARS, EMPTY_WORD, alphabet_of
from .errors import InvalidDomino
from .games import DECISIONS, GameGraph, prune_game


@dataclass(frozen=True)
class DominoSystem:
    """Dominoes with horizontal and vertical compatibility and two border dominoes."""

    dominoes: tuple
    horizontal: frozenset
    vertical: frozenset
    side: str = HASH
    bottom: str = BOX

    def __post_init__(self):
        object.__setattr__(self, "dominoes", tuple(self.dominoes))
        object.__setattr__(self, "horizontal", frozenset(tuple(p) for p in self.horizontal))
        object.__setattr__(self, "vertical", frozenset(tuple(p) for p in self.vertical))

    @cached_property
    def right_of(self):
        out = {}
        for d, e in self.horizontal:
            out.setdefault(d, set()).add(e)
        return MappingProxyType({d: frozenset(s) for d, s in out.items()})

    @cached_property
    def below(self):
        out = {}
        for d, e in self.vertical:
            out.setdefault(d, set()).add(e)
        return MappingProxyType({d: frozenset(s) for d, s in out.items()})

    @property
    def sigma(self) -> tuple:
        """Input letters: all dominoes other than the two borders."""
        return tuple(d for d in self.dominoes if d not in (self.side, self.bottom))


def validate_domino(D: DominoSystem) -> list:
    """Violations of the domino-system invariants as ``code: detail`` strings."""
    out = []
    names = set()
    for d in D.dominoes:
        if not isinstance(d, str) or not d or RESERVED_CHARS.intersection(d) or d == EMPTY_WORD:
            out.append(f"invalid-name: domino {d!r} is not a valid symbol")
        if d in names:
            out.append(f"duplicate-domino: {d}")
        names.add(d)
    if D.side == D.bottom:
        out.append(f"border-clash: side and bottom border are both {D.side}")
    for role, b in (("side", D.side), ("bottom", D.bottom)):
        if b not in names:
            out.append(f"missing-border: {role} border {b} is not a domino")
    for rel, pairs in (("horizontal", D.horizontal), ("vertical", D.vertical)):
        for p in sorted(pairs):
            for d in p:
                if d not in names:
                    out.append(f"unknown-domino: {rel} pair ({p[0]}, {p[1]}) uses {d}")
    return out


def check_domino(D: DominoSystem) -> DominoSystem:
    problems = validate_domino(D)
    if problems:
        raise InvalidDomino("; ".join(problems))
    return D


@dataclass(frozen=True)
class Tiling:
    """Rows of a corridor tiling from top to bottom, border columns included."""

    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))

    @property
    def width(self) -> int:
        return len(self.rows[0]) - 2 if self.rows else 0

    @property
    def height(self) -> int:
        """Number of rows, top row and bottom row included."""
        return len(self.rows)

    @property
    def cells(self) -> dict:
        return {(x, y): d for y, row in enumerate(self.rows) for x, d in enumerate(row)}

    def grid(self) -> str:
        cols = max((len(d) for r in self.rows for d in r), default=1)
        return "\n".join(" ".join(d.ljust(cols) for d in r).rstrip() for r in self.rows)


def check_tiling(D: DominoSystem, tiling: Tiling, w=None) -> list:
    """All violated tiling constraints; empty means the tiling is correct."""
    out = []
    rows = tiling.rows
    if not rows:
        return ["empty tiling"]
    width = len(rows[0])
    if any(len(r) != width for r in rows) or width < 3:
        return ["rows have inconsistent or too small width"]
    if w is not None and tuple(rows[0][1:-1]) != tuple(w):
        out.append("top row differs from the word")
    for y, row in enumerate(rows[:-1]):
        if row[0] != D.side or row[-1] != D.side:
            out.append(f"row {y} is not bordered by {D.side}")
    if any(d != D.bottom for d in rows[-1][1:-1]):
        out.append(f"last row is not all {D.bottom}")
    for y, row in enumerate(rows):
        for x in range(width - 1):
            if (row[x], row[x + 1]) not in D.horizontal:
                out.append(f"horizontal mismatch at ({x},{y}): {row[x]} {row[x + 1]}")
    for y in range(len(rows) - 1):
        for x in range(width):
            if (rows[y][x], rows[y + 1][x]) not in D.vertical:
                out.append(f"vertical mismatch at ({x},{y}): {rows[y][x]} over {rows[y + 1][x]}")
    return out


def _next_rows(D: DominoSystem, row: tuple) -> list:
    """Interior rows that may sit below ``row`` inside the side borders, in domino order."""
    order = {d: i for i, d in enumerate(D.dominoes)}
    out = []

    def extend(prefix):
        i = len(prefix)
        if i == len(row):
            if (prefix[-1], D.side) in D.horizontal:
                out.append(tuple(prefix))
            return
        left = prefix[-1] if prefix else D.side
        options = D.below.get(row[i], frozenset()) & D.right_of.get(left, frozenset())
        for d in sorted(options, key=order.get):
            prefix.append(d)
            extend(prefix)
            prefix.pop()

    extend([])
    return out


def _bottom_row(D: DominoSystem, above: tuple, bordered_above: bool):
    """The all-bottom last row under ``above`` with suitable corners, if one exists."""
    width = len(above)
    if any((d, D.bottom) not in D.vertical for d in above):
        return None
    if width > 1 and (D.bottom, D.bottom) not in D.horizontal:
        return None
    top_corner = D.side if bordered_above else None
    lefts = [c for c in D.dominoes if (c, D.bottom) in D.horizontal and
             (top_corner is None or (top_corner, c) in D.vertical)]
    rights = [c for c in D.dominoes if (D.bottom, c) in D.horizontal and
              (top_corner is None or (top_corner, c) in D.vertical)]
    if not lefts or not rights:
        return None
    return (lefts[0],) + (D.bottom,) * width + (rights[0],)


def corridor_tiling(D: DominoSystem, w, max_height: int | None = None):
    """A minimal-height corridor tiling with top row ``w``, or ``None``.

    Rows are explored breadth-first so the first tiling found has the
    fewest rows; ``max_height`` (default ``|w| + 2``) bounds the number of
    rows, the top and bottom row included.
    """
    check_domino(D)
    w = tuple(w)
    if not w:
        raise ValueError("the empty word is excluded from frontier languages")
    for d in w:
        if d not in D.dominoes:
            raise InvalidDomino(f"{d!r} is not a domino")
    if max_height is None:
        max_height = len(w) + 2
    if max_height < 1:
        return None
    if all(d == D.bottom for d in w):
        # a single row is both top and bottom; its corners are unconstrained by the side border
        lefts = [c for c in D.dominoes if (c, D.bottom) in D.horizontal]
        rights = [c for c in D.dominoes if (D.bottom, c) in D.horizontal]
        inner_ok = len(w) == 1 or (D.bottom, D.bottom) in D.horizontal
        if lefts and rights and inner_ok:
            return Tiling([(lefts[0],) + w + (rights[0],)])
    top = (D.side,) + w + (D.side,)
    if any(p not in D.horizontal for p in zip(top, top[1:])):
        return None
    parent = {w: None}
    level = [w]
    for height in range(1, max_height):
        # the current level holds rows at depth ``height``; try finishing below them
        for row in level:
            bottom = _bottom_row(D, row, bordered_above=True)
            if bottom is not None:
                rows = [bottom]
                cur = row
                while cur is not None:
                    rows.append((D.side,) + cur + (D.side,))
                    cur = parent[cur]
                return Tiling(reversed(rows))
        if height + 1 >= max_height or (D.side, D.side) not in D.vertical:
            break
        nxt = []
        for row in level:
            for r in _next_rows(D, row):
                if r not in parent:
                    parent[r] = row
                    nxt.append(r)
        if not nxt:
            break
        level = nxt
    return None


def frontier_membership(D: DominoSystem, w, max_height: int | None = None) -> bool:
    """Whether ``w`` has a corridor tiling of at most ``max_height`` rows."""
    return corridor_tiling(D, w, max_height) is not None


def compile_domino_game(D: DominoSystem, prune: bool = True) -> GameGraph:
    """The uniform game whose covered language is the frontier language of ``D``.

    Singleton states ``s:d`` show ``d`` to both players and follow the
    horizontal relation; pair states ``p:d:b`` show ``d`` to player 1 and
    ``b`` to player 2 for each vertically compatible pair.  Plays start at
    ``v0`` next to the side border and end in ``z`` (both decisions
    admissible) or, from the bottom domino only, in ``zhat`` (decision 1).
    """
    check_domino(D)
    side, bottom = D.side, D.bottom
    singles = {d: f"s:{d}" for d in D.dominoes if d != side}
    pairs = {(d, b): f"p:{d}:{b}" for d, b in sorted(D.vertical)}
    obs1 = {"v0": side, "z": side, "zhat": side}
    obs2 = dict(obs1)
    for d, s in singles.items():
        obs1[s] = obs2[s] = d
    for (d, b), s in pairs.items():
        obs1[s], obs2[s] = d, b
    h = D.horizontal
    edges = set()
    for d, s in singles.items():
        if (side, d) in h:
            edges.add(("v0", s))
        if (d, side) in h:
            edges.add((s, "z"))
        for e, t in singles.items():
            if (d, e) in h:
                edges.add((s, t))
    for (d, b), s in pairs.items():
        if (side, d) in h and (side, b) in h:
            edges.add(("v0", s))
        if (d, side) in h and (b, side) in h:
            edges.add((s, "z"))
        for (e, c), t in pairs.items():
            if (d, e) in h and (b, c) in h:
                edges.add((s, t))
    if bottom in singles:
        edges.add((singles[bottom], "zhat"))
    alphabet = alphabet_of([side] + [d for d in D.dominoes if d != side])
    G = GameGraph(frozenset(obs1), frozenset(edges), obs1, obs2, "v0",
                  {"z": DECISIONS, "zhat": frozenset({1})}, alphabet)
    return prune_game(G) if prune else G
