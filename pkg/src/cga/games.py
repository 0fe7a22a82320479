"""Consensus game graphs: validation, plays, observations and connectedness.

A game is a finite directed graph with a distinguished initial state that
has no incoming edge.  States without outgoing edges are final and carry
a non-empty set of admissible decisions.  Both players label each state
with an observation symbol; initial and final states are labelled ``#``.
"""

from __future__ import annotations

import random
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping

from .core import HASH, Alphabet, alphabet_of, check_cap, format_word
from .errors import AlphabetOverlap, InvalidGame, InvalidPlay, PartialStrategy

DECISIONS = frozenset({0, 1})


def _freeze_map(m) -> Mapping:
    return MappingProxyType(dict(m))


@dataclass(frozen=True, eq=False)
class GameGraph:
    """Game arena ``(V, E, β¹, β², v₀, Ω)`` over the observation alphabet ``alphabet``.

    The constructor is lenient so that broken games can be built and then
    diagnosed with :func:`validate_game`.
    """

    states: frozenset
    edges: frozenset
    obs1: Mapping
    obs2: Mapping
    initial: Hashable
    omega: Mapping
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states) | {self.initial})
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        object.__setattr__(self, "obs1", _freeze_map(self.obs1))
        object.__setattr__(self, "obs2", _freeze_map(self.obs2))
        object.__setattr__(self, "omega", _freeze_map({v: frozenset(o) for v, o in self.omega.items()}))
        if not isinstance(self.alphabet, Alphabet):
            object.__setattr__(self, "alphabet", alphabet_of(self.alphabet))

    def _key(self):
        return (self.states, self.edges, tuple(sorted(self.obs1.items(), key=repr)),
                tuple(sorted(self.obs2.items(), key=repr)), self.initial,
                tuple(sorted(self.omega.items(), key=repr)), self.alphabet.as_set())

    def __eq__(self, other):
        return isinstance(other, GameGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @cached_property
    def successors(self) -> Mapping:
        succ = defaultdict(list)
        for u, v in sorted(self.edges, key=repr):
            succ[u].append(v)
        return MappingProxyType({k: tuple(v) for k, v in succ.items()})

    @cached_property
    def predecessors(self) -> Mapping:
        pred = defaultdict(set)
        for u, v in self.edges:
            pred[v].add(u)
        return MappingProxyType({k: frozenset(v) for k, v in pred.items()})

    @cached_property
    def finals(self) -> frozenset:
        return frozenset(v for v in self.states if not self.successors.get(v))

    def obs(self, v, i: int):
        if i == 1:
            return self.obs1.get(v)
        if i == 2:
            return self.obs2.get(v)
        raise ValueError(f"player must be 1 or 2, got {i!r}")


def game(states, edges, obs1, obs2, initial, omega, alphabet=None) -> GameGraph:
    """Convenience constructor; the alphabet defaults to all used symbols plus ``#``."""
    if alphabet is None:
        symbols = [HASH] + sorted(set(obs1.values()) | set(obs2.values()) - {HASH})
        alphabet = alphabet_of(symbols)
    return GameGraph(frozenset(states), frozenset(edges), obs1, obs2, initial, omega, alphabet)


@dataclass(frozen=True)
class Play:
    """A play ``v₀ v₁ … v_{n+1}`` given by its full state sequence."""

    states: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))

    def __len__(self) -> int:
        """Observation length: the number of interior states."""
        return max(len(self.states) - 2, 0)

    @property
    def interior(self) -> tuple:
        return self.states[1:-1]

    @property
    def final(self):
        return self.states[-1]

    def __str__(self) -> str:
        return " ".join(str(s) for s in self.states)


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


def validate_game(G: GameGraph) -> list:
    """List every broken structural constraint of ``G``; empty means valid."""
    out = []
    add = lambda code, detail: out.append(Violation(code, detail))
    if HASH not in G.alphabet:
        add("missing-hash-symbol", f"alphabet {G.alphabet} lacks {HASH}")
    for u, v in sorted(G.edges, key=repr):
        for s in (u, v):
            if s not in G.states:
                add("unknown-state", f"edge ({u}, {v}) uses unknown state {s}")
        if v == G.initial:
            add("initial-has-incoming", f"edge ({u}, {v}) enters the initial state")
    for i, beta in ((1, G.obs1), (2, G.obs2)):
        for v in sorted(G.states, key=repr):
            if v not in beta:
                add("missing-observation", f"state {v} has no observation for player {i}")
            elif beta[v] not in G.alphabet:
                add("unknown-symbol", f"state {v} observes {beta[v]!r} for player {i}, not in alphabet")
        for v in sorted(set(beta) - G.states, key=repr):
            add("unknown-state", f"observation given for unknown state {v}")
    if G.obs1.get(G.initial) != HASH or G.obs2.get(G.initial) != HASH:
        add("initial-observation", f"initial state {G.initial} must be observed as {HASH}")
    plays_possible = bool(G.successors.get(G.initial))
    for v in sorted(G.finals, key=repr):
        if v == G.initial and not plays_possible:
            continue
        if G.obs1.get(v) != HASH or G.obs2.get(v) != HASH:
            add("final-observation", f"final state {v} must be observed as {HASH}")
        if v not in G.omega:
            add("missing-admissible-set", f"final state {v} has no admissible decisions")
        elif not G.omega[v]:
            add("empty-admissible-set", f"final state {v} has an empty admissible set")
        elif not G.omega[v] <= DECISIONS:
            add("invalid-decision", f"final state {v} admits {sorted(G.omega[v])}, decisions are 0 and 1")
    for v in sorted(G.omega, key=repr):
        if v not in G.finals and v in G.states:
            add("admissible-on-nonfinal", f"state {v} has outgoing edges but an admissible set")
        elif v not in G.states:
            add("unknown-state", f"admissible set given for unknown state {v}")
    reach = _reachable(G)
    coreach = _coreachable(G)
    for v in sorted(G.states, key=repr):
        if v == G.initial:
            continue
        if v not in reach:
            add("unreachable-state", f"state {v} is not reachable from {G.initial}")
        elif v not in coreach:
            add("dead-state", f"state {v} cannot reach a final state")
    return out


def check_game(G: GameGraph) -> GameGraph:
    problems = validate_game(G)
    if problems:
        raise InvalidGame("; ".join(str(p) for p in problems))
    return G


def _reachable(G: GameGraph) -> frozenset:
    seen, stack = {G.initial}, [G.initial]
    while stack:
        for w in G.successors.get(stack.pop(), ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def _coreachable(G: GameGraph) -> frozenset:
    seen = set(G.finals)
    stack = list(seen)
    while stack:
        for u in G.predecessors.get(stack.pop(), ()):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return frozenset(seen)


def prune_game(G: GameGraph) -> GameGraph:
    """Drop states that are unreachable from v₀ or cannot reach a final."""
    keep = (_reachable(G) & _coreachable(G)) | {G.initial}
    # removing dead states can create new finals; only original finals may stay edge-less
    return GameGraph(keep, frozenset(e for e in G.edges if e[0] in keep and e[1] in keep),
                     {v: G.obs1[v] for v in keep if v in G.obs1}, {v: G.obs2[v] for v in keep if v in G.obs2},
                     G.initial, {v: o for v, o in G.omega.items() if v in keep}, G.alphabet)


# ---------------------------------------------------------------------------
# Plays


def _finishing(G: GameGraph, n: int) -> list:
    """``fin[k]`` = states from which some path of exactly ``k`` more interior states ends in a final."""
    fin = [frozenset(v for v in G.finals if v != G.initial)]
    for _ in range(n):
        prev = fin[-1]
        fin.append(frozenset(u for v in prev for u in G.predecessors.get(v, ())
                             if u != G.initial and u not in G.finals))
    return fin


def enumerate_plays(G: GameGraph, n: int, cap: int | None = None) -> list:
    """All plays with observation length exactly ``n``, in a deterministic order."""
    if n < 0:
        raise ValueError("length must be non-negative")
    fin = _finishing(G, n)
    plays = []
    stack = [(G.initial,)]
    while stack:
        path = stack.pop()
        k = len(path) - 1
        if k == n:
            for v in reversed(G.successors.get(path[-1], ())):
                if v in fin[0]:
                    plays.append(Play(path + (v,)))
            continue
        for v in reversed(G.successors.get(path[-1], ())):
            if v in fin[n - k]:
                stack.append(path + (v,))
        check_cap(len(plays) + len(stack), cap, f"plays of length {n}")
    plays.sort(key=lambda p: [repr(s) for s in p.states])
    return plays


def plays_upto(G: GameGraph, n: int, cap: int | None = None) -> list:
    return [p for k in range(n + 1) for p in enumerate_plays(G, k, cap)]


def check_play(G: GameGraph, play: Play) -> None:
    s = play.states
    if len(s) < 2 or s[0] != G.initial:
        raise InvalidPlay(f"play {play} must start at {G.initial} and contain a move")
    for u, v in zip(s, s[1:]):
        if (u, v) not in G.edges:
            raise InvalidPlay(f"play {play} uses missing edge ({u}, {v})")
    if s[-1] not in G.finals:
        raise InvalidPlay(f"play {play} does not end in a final state")


def observation(G: GameGraph, play: Play, i: int) -> tuple:
    """The observation word of player ``i``: labels of the interior states."""
    check_play(G, play)
    return tuple(G.obs(v, i) for v in play.interior)


def outcome(G: GameGraph, play: Play) -> frozenset:
    return G.omega[play.final]


def indistinguishable(G: GameGraph, p: Play, q: Play, i: int) -> bool:
    return observation(G, p, i) == observation(G, q, i)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def join(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def connected_classes(G: GameGraph, n: int, cap: int | None = None) -> list:
    """Partition the plays of observation length ``n`` into ∼*-classes.

    Connectedness never leaves a length class because observations are
    letter-per-state, so the computation is exact.
    """
    plays = enumerate_plays(G, n, cap)
    uf = _UnionFind(range(len(plays)))
    for i in (1, 2):
        first = {}
        for idx, p in enumerate(plays):
            key = observation(G, p, i)
            if key in first:
                uf.join(first[key], idx)
            else:
                first[key] = idx
    groups = defaultdict(list)
    for idx, p in enumerate(plays):
        groups[uf.find(idx)].append(p)
    return [groups[r] for r in sorted(groups)]


def connecting_chain(G: GameGraph, start: Play, goal: Play, cap: int | None = None):
    """Shortest alternating chain ``start = π₀, …, π_k = goal`` with each link ∼¹ or ∼².

    Returns a list of ``(play, player)`` pairs where ``player`` names the
    relation linking the play to its predecessor (``None`` for the first).
    """
    plays = enumerate_plays(G, len(start), cap)
    index = defaultdict(list)
    for p in plays:
        for i in (1, 2):
            index[(i, observation(G, p, i))].append(p)
    parent = {start: None}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        if p == goal:
            break
        for i in (1, 2):
            for q in index[(i, observation(G, p, i))]:
                if q not in parent:
                    parent[q] = (p, i)
                    queue.append(q)
    if goal not in parent:
        return None
    chain, cur = [], goal
    while parent[cur] is not None:
        prev, i = parent[cur]
        chain.append((cur, i))
        cur = prev
    chain.append((start, None))
    return list(reversed(chain))


@dataclass(frozen=True)
class SafetyReport:
    """Safe decisions at a play plus, for each excluded decision, a chain to a play refuting it."""

    play: Play
    safe: frozenset
    witnesses: Mapping = field(default_factory=dict)


def safe_decisions(G: GameGraph, play: Play, cap: int | None = None) -> SafetyReport:
    check_play(G, play)
    cls = next(c for c in connected_classes(G, len(play), cap) if play in c)
    safe = set(DECISIONS)
    refuting = {}
    for p in cls:
        for a in DECISIONS - G.omega[p.final]:
            safe.discard(a)
            refuting.setdefault(a, p)
    witnesses = {a: connecting_chain(G, play, p, cap) for a, p in refuting.items()}
    return SafetyReport(play, frozenset(safe), MappingProxyType(witnesses))


# ---------------------------------------------------------------------------
# Game compositions


def _tag(prefix: str, state):
    return f"{prefix}.{state}" if isinstance(state, str) else (prefix, state)


def union_games(G: GameGraph, H: GameGraph, initial="v0") -> GameGraph:
    """Disjoint union of ``G`` and ``H`` with their initial states identified.

    States are renamed ``1.s`` and ``2.s``; observation symbols are shared.
    """
    states, edges, obs1, obs2, omega = {initial}, set(), {initial: HASH}, {initial: HASH}, {}
    for prefix, X in (("1", G), ("2", H)):
        rename = lambda s: initial if s == X.initial else _tag(prefix, s)
        for v in X.states - {X.initial}:
            states.add(rename(v))
            obs1[rename(v)] = X.obs1.get(v)
            obs2[rename(v)] = X.obs2.get(v)
        for u, v in X.edges:
            edges.add((rename(u), rename(v)))
        for v, o in X.omega.items():
            if v != X.initial:
                omega[rename(v)] = o
    if not any(u == initial for u, _ in edges):
        omega[initial] = DECISIONS
    return GameGraph(frozenset(states), frozenset(edges), obs1, obs2, initial, omega,
                     G.alphabet.union(H.alphabet))


_FLIP = {frozenset({0}): frozenset({1}), frozenset({1}): frozenset({0})}


def invert_game(G: GameGraph) -> GameGraph:
    """Swap the admissible decisions 0 and 1 at every final; {0,1} is unchanged."""
    omega = {v: _FLIP.get(o, o) for v, o in G.omega.items()}
    return GameGraph(G.states, G.edges, G.obs1, G.obs2, G.initial, omega, G.alphabet)


def characterizer(G_L: GameGraph, G_co: GameGraph, sigma) -> GameGraph:
    """Union of a cover of ``L`` with the inverted cover of its complement.

    The two observation alphabets may only share the input letters and ``#``.
    """
    shared = G_L.alphabet.as_set() & G_co.alphabet.as_set()
    extra = shared - set(sigma) - {HASH}
    if extra:
        raise AlphabetOverlap(f"games share observation symbols beyond the input alphabet: {sorted(extra)}")
    return union_games(G_L, invert_game(G_co))


def empty_language_game(sigma) -> GameGraph:
    """A clique over the letters of ``sigma``, seen alike by both players, where 0 is the only admissible decision."""
    sigma = list(sigma)
    if not sigma:
        raise InvalidGame("the input alphabet must be non-empty")
    letters = [f"l:{a}" for a in sigma]
    edges = {("v0", s) for s in letters} | {(s, t) for s in letters for t in letters} | {(s, "f0") for s in letters}
    obs = {"v0": HASH, "f0": HASH} | {s: a for s, a in zip(letters, sigma)}
    return GameGraph(frozenset(["v0", "f0", *letters]), frozenset(edges), obs, obs, "v0",
                     {"f0": frozenset({0})}, alphabet_of([HASH, *sigma]))


# ---------------------------------------------------------------------------
# Strategies


@dataclass(frozen=True)
class StrategyTable:
    """A strategy truncated at ``maxlen``: decisions for observation words.

    ``entries`` is used by player 1 and, unless ``player2`` is given, by
    player 2 as well.
    """

    maxlen: int
    entries: Mapping
    player2: Mapping | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", _freeze_map({tuple(w): d for w, d in self.entries.items()}))
        if self.player2 is not None:
            object.__setattr__(self, "player2", _freeze_map({tuple(w): d for w, d in self.player2.items()}))
        for m in (self.entries, self.player2 or {}):
            for w, d in m.items():
                if d not in DECISIONS:
                    raise ValueError(f"decision for {format_word(w)} must be 0 or 1, got {d!r}")

    def decide(self, w, player: int = 1) -> int:
        table = self.player2 if (player == 2 and self.player2 is not None) else self.entries
        w = tuple(w)
        if w not in table:
            raise PartialStrategy(f"strategy has no decision for player {player} on {format_word(w)}")
        return table[w]

    def with_entry(self, w, d: int, player: int = 1) -> StrategyTable:
        if player == 2 and self.player2 is not None:
            return StrategyTable(self.maxlen, self.entries, {**self.player2, tuple(w): d})
        return StrategyTable(self.maxlen, {**self.entries, tuple(w): d}, self.player2)


def constant_strategy(G: GameGraph, n: int, c: int, cap: int | None = None) -> StrategyTable:
    words = {observation(G, p, i) for p in plays_upto(G, n, cap) for i in (1, 2)}
    return StrategyTable(n, {w: c for w in words})


def function_strategy(G: GameGraph, n: int, f, cap: int | None = None) -> StrategyTable:
    """Tabulate the decision function ``f`` on all observation words of plays up to ``n``."""
    words = {observation(G, p, i) for p in plays_upto(G, n, cap) for i in (1, 2)}
    return StrategyTable(n, {w: f(w) for w in words})


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    counterexample: Play | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_strategy(G: GameGraph, s: StrategyTable, n: int, cap: int | None = None) -> VerificationResult:
    """Check that both players agree on an admissible decision in every play up to length ``n``."""
    for p in plays_upto(G, n, cap):
        d1 = s.decide(observation(G, p, 1), 1)
        d2 = s.decide(observation(G, p, 2), 2)
        if d1 != d2:
            return VerificationResult(False, p, f"players disagree: {d1} vs {d2}")
        if d1 not in G.omega[p.final]:
            return VerificationResult(False, p, f"decision {d1} not admissible at {p.final}")
    return VerificationResult(True)


def lint_observation_coverage(G: GameGraph, sigma, n: int, cap: int | None = None) -> list:
    """Warnings for input words up to length ``n`` that no play lets player 1 observe."""
    sigma = alphabet_of(sigma)
    warnings = []
    for k in range(1, n + 1):
        seen = {observation(G, p, 1) for p in enumerate_plays(G, k, cap)}
        for w in sigma.words(k, cap):
            if w not in seen:
                warnings.append(f"input word {format_word(w)} is never observed by player 1")
    return warnings


def random_game(rng: random.Random, max_states: int = 8, symbols: Iterable[str] = ("a", "b"),
                edge_prob: float = 0.35) -> GameGraph:
    """A random valid game with at most ``max_states`` states over the given symbols.

    Interior states get independent random observations for each player; two
    finals carry random admissible sets.  Unreachable and dead states are
    pruned, and the draw repeats until at least one play exists.
    """
    symbols = list(symbols)
    if max_states < 4:
        raise ValueError("need room for v0, one interior state and two finals")
    while True:
        k = rng.randint(1, max_states - 3)
        interior = [f"s{i}" for i in range(k)]
        finals = ["f0", "f1"]
        options = [frozenset({0}), frozenset({1}), DECISIONS]
        omega = {f: rng.choice(options) for f in finals}
        edges = set()
        for s in interior:
            if rng.random() < 0.5:
                edges.add(("v0", s))
            for t in interior:
                if rng.random() < edge_prob:
                    edges.add((s, t))
            for f in finals:
                if rng.random() < edge_prob:
                    edges.add((s, f))
        if rng.random() < 0.15:
            edges.add(("v0", rng.choice(finals)))
        obs1 = {"v0": HASH, "f0": HASH, "f1": HASH} | {s: rng.choice(symbols) for s in interior}
        obs2 = {"v0": HASH, "f0": HASH, "f1": HASH} | {s: rng.choice(symbols) for s in interior}
        G = GameGraph(frozenset(["v0", *interior, *finals]), frozenset(edges), obs1, obs2, "v0", omega,
                      alphabet_of([HASH, *symbols]))
        G = _prune_to_valid(G)
        if G is not None:
            return G


def _prune_to_valid(G: GameGraph):
    """Restrict ``G`` to live states; ``None`` when nothing playable remains."""
    original_finals = G.finals
    keep = (_reachable(G) & _coreachable(G)) | {G.initial}
    # a non-final state whose successors all die is itself dead; _coreachable already covers it
    H = GameGraph(keep, frozenset(e for e in G.edges if e[0] in keep and e[1] in keep),
                  {v: G.obs1[v] for v in keep}, {v: G.obs2[v] for v in keep}, G.initial,
                  {v: o for v, o in G.omega.items() if v in keep}, G.alphabet)
    if not H.successors.get(H.initial) or not H.finals <= original_finals:
        return None
    return H if not validate_game(H) else None
