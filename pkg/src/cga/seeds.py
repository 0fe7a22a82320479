"""Translations between games and seeds.

The seed of a game is its relation of observation pairs on plays plus the
languages of player-1 observations on plays that force decision 1 resp. 0.
Extraction moves each state's observation onto its incoming edges;
synthesis builds a game whose states pair a transducer transition with
states of deterministic acceptors for both languages.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass

from .core import (HASH, Alphabet, SynchronousTransducer, WordAutomaton, determinize, empty_automaton,
                   identity, intersect, is_empty)
from .errors import AlphabetMismatch, NondisjointSeed
from .games import DECISIONS, GameGraph, check_game

ACC = frozenset({1})
REJ = frozenset({0})

_UNREACHABLE_FINAL = "unreachable-final"


@dataclass(frozen=True)
class Seed:
    """A relation with its accepting and rejecting languages over one alphabet."""

    relation: SynchronousTransducer
    acc: WordAutomaton
    rej: WordAutomaton

    def __post_init__(self):
        symbols = self.relation.alphabet.as_set()
        for name, A in (("acc", self.acc), ("rej", self.rej)):
            if A.alphabet.as_set() != symbols:
                raise AlphabetMismatch(f"{name} language alphabet {A.alphabet} differs from relation alphabet "
                                       f"{self.relation.alphabet}")

    @property
    def alphabet(self) -> Alphabet:
        return self.relation.alphabet

    def target(self, which: str) -> WordAutomaton:
        if which == "acc":
            return self.acc
        if which == "rej":
            return self.rej
        raise ValueError(f"target must be 'acc' or 'rej', got {which!r}")


def make_seed(relation: SynchronousTransducer, acc: WordAutomaton, rej: WordAutomaton | None = None) -> Seed:
    """Build a seed, aligning the automata to the relation's alphabet."""
    alphabet = relation.alphabet
    acc = acc.with_alphabet(alphabet) if acc.alphabet != alphabet else acc
    rej = empty_automaton(alphabet) if rej is None else rej
    rej = rej.with_alphabet(alphabet) if rej.alphabet != alphabet else rej
    return Seed(relation, acc, rej)


def identity_seed(acc: WordAutomaton, rej: WordAutomaton | None = None, check_disjoint: bool = True) -> Seed:
    """Seed whose relation is the identity on the automata's alphabet."""
    seed = make_seed(identity(acc.alphabet), acc, rej)
    if check_disjoint:
        check_disjoint_languages(seed)
    return seed


def check_disjoint_languages(seed: Seed) -> None:
    both = intersect(seed.acc, seed.rej)
    if not is_empty(both):
        raise NondisjointSeed("accepting and rejecting languages share a word")


def extract_seed(G: GameGraph) -> Seed:
    """Read the seed off a valid game."""
    check_game(G)
    finals = G.finals
    inner = frozenset(v for v in G.states if v not in finals or v == G.initial)
    rel, lang = set(), set()
    r_fin, acc_fin, rej_fin = set(), set(), set()
    for u, v in G.edges:
        if v in finals:
            r_fin.add(u)
            if G.omega[v] == ACC:
                acc_fin.add(u)
            elif G.omega[v] == REJ:
                rej_fin.add(u)
        else:
            rel.add((u, G.obs1[v], G.obs2[v], v))
            lang.add((u, G.obs1[v], v))
    states = inner
    if not r_fin:
        warnings.warn("game has no plays; the extracted relation is empty", stacklevel=2)
        r_fin = {_UNREACHABLE_FINAL}
        states = states | r_fin
    R = SynchronousTransducer(G.alphabet, frozenset(rel), G.initial, frozenset(r_fin), states)
    A = WordAutomaton(G.alphabet, frozenset(lang), G.initial, frozenset(acc_fin), inner)
    B = WordAutomaton(G.alphabet, frozenset(lang), G.initial, frozenset(rej_fin), inner)
    return Seed(R, A, B)


V0, V_ACC, V_REJ, V_EQ = "v0", "v_acc", "v_rej", "v_eq"


def synthesize_game(seed: Seed) -> GameGraph:
    """Build a game whose seed is ``seed``.

    A game state ``(p --a|b--> q, qA, qB)`` records the transducer
    transition just taken and the states of deterministic acceptors for
    both languages before reading ``a``.  When ``q`` is final the play may
    stop, choosing its exit by where the acceptors land after ``a``.
    """
    check_disjoint_languages(seed)
    R = seed.relation
    A = determinize(seed.acc, complete=True)
    B = determinize(seed.rej, complete=True)
    dA = {(p, a): q for p, a, q in A.transitions}
    dB = {(p, a): q for p, a, q in B.transitions}
    by_source = {}
    for t in sorted(R.transitions, key=repr):
        by_source.setdefault(t[0], []).append(t)

    def exits(qa, qb):
        out = []
        if qa in A.finals:
            out.append(V_ACC)
        if qb in B.finals:
            out.append(V_REJ)
        return out or [V_EQ]

    names, order = {}, []
    edges = set()

    def name_of(node):
        if node not in names:
            names[node] = f"x{len(names)}"
            order.append(node)
            queue.append(node)
        return names[node]

    queue = deque()
    if R.initial in R.finals:
        for f in exits(A.initial, B.initial):
            edges.add((V0, f))
    for t in by_source.get(R.initial, ()):
        edges.add((V0, name_of((t, A.initial, B.initial))))
    while queue:
        node = queue.popleft()
        (p, a, b, q), qa, qb = node
        na, nb = dA[(qa, a)], dB[(qb, a)]
        if q in R.finals:
            for f in exits(na, nb):
                edges.add((names[node], f))
        for t in by_source.get(q, ()):
            edges.add((names[node], name_of((t, na, nb))))
    obs1 = {V0: HASH, V_ACC: HASH, V_REJ: HASH, V_EQ: HASH}
    obs2 = dict(obs1)
    for node in order:
        (_, a, b, _), _, _ = node
        obs1[names[node]] = a
        obs2[names[node]] = b
    omega = {V_ACC: ACC, V_REJ: REJ, V_EQ: DECISIONS}
    alphabet = R.alphabet if HASH in R.alphabet else Alphabet((HASH,) + R.alphabet.symbols)
    G = GameGraph(frozenset(obs1), frozenset(edges), obs1, obs2, V0, omega, alphabet)
    return _prune_synthesized(G)


def _prune_synthesized(G: GameGraph) -> GameGraph:
    finals = {V_ACC, V_REJ, V_EQ}
    live = set(finals)
    pred = {}
    for u, v in G.edges:
        pred.setdefault(v, set()).add(u)
    stack = list(live)
    while stack:
        for u in pred.get(stack.pop(), ()):
            if u not in live:
                live.add(u)
                stack.append(u)
    reach, stack = {V0}, [V0]
    succ = {}
    for u, v in G.edges:
        if u in live and v in live:
            succ.setdefault(u, []).append(v)
    while stack:
        for v in succ.get(stack.pop(), ()):
            if v not in reach:
                reach.add(v)
                stack.append(v)
    keep = reach
    edges = frozenset(e for e in G.edges if e[0] in keep and e[1] in keep)
    omega = {v: o for v, o in G.omega.items() if v in keep}
    if not edges:
        omega = {V0: DECISIONS}
    return GameGraph(frozenset(keep), edges, {v: G.obs1[v] for v in keep}, {v: G.obs2[v] for v in keep},
                     V0, omega, G.alphabet)
