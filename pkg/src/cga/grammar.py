"""Context-free grammars in Chomsky normal form and the CYK membership test.

This is the independent recogniser used to cross-check flower seeds: a
grammar for well-nested bracket words is intersected with a regular
language (Bar-Hillel product) and relabelled letter by letter.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType

from .core import WordAutomaton, determinize
from .errors import NotCNF


@dataclass(frozen=True)
class Grammar:
    """A context-free grammar; productions are ``(lhs, rhs)`` with ``rhs`` a tuple."""

    nonterminals: frozenset
    terminals: frozenset
    productions: frozenset
    start: str

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", frozenset(self.nonterminals) | {self.start})
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "productions", frozenset((lhs, tuple(rhs)) for lhs, rhs in self.productions))
        clash = self.nonterminals & self.terminals
        if clash:
            raise ValueError(f"symbols used both as terminal and nonterminal: {sorted(clash)}")

    @cached_property
    def is_cnf(self) -> bool:
        for lhs, rhs in self.productions:
            if len(rhs) == 1 and rhs[0] in self.terminals:
                continue
            if len(rhs) == 2 and all(x in self.nonterminals for x in rhs):
                continue
            return False
        return True

    @cached_property
    def by_rhs(self):
        index = defaultdict(set)
        for lhs, rhs in self.productions:
            index[rhs].add(lhs)
        return MappingProxyType({k: frozenset(v) for k, v in index.items()})


def dyck_grammar(brackets, neutrals=(), start: str = "S") -> Grammar:
    """CNF grammar for the non-empty well-nested words over the brackets and neutrals.

    ``S → S S | O_k X_k | O_k C_k | c``, ``X_k → S C_k``, ``O_k → [_k``,
    ``C_k → ]_k``.
    """
    prods = {(start, (start, start))}
    nts = {start}
    terminals = set(neutrals)
    for k, (o, c) in enumerate(brackets, 1):
        O, C, X = f"O{k}", f"C{k}", f"X{k}"
        nts |= {O, C, X}
        terminals |= {o, c}
        prods |= {(O, (o,)), (C, (c,)), (X, (start, C)), (start, (O, X)), (start, (O, C))}
    for c in neutrals:
        prods.add((start, (c,)))
    return Grammar(frozenset(nts), frozenset(terminals), frozenset(prods), start)


def trim_grammar(G: Grammar) -> Grammar:
    """Keep only productive nonterminals reachable from the start symbol."""
    productive = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in G.productions:
            if lhs not in productive and all(x in G.terminals or x in productive for x in rhs):
                productive.add(lhs)
                changed = True
    prods = {(l, r) for l, r in G.productions
             if l in productive and all(x in G.terminals or x in productive for x in r)}
    reach, stack = {G.start}, [G.start]
    by_lhs = defaultdict(list)
    for l, r in prods:
        by_lhs[l].append(r)
    while stack:
        for r in by_lhs[stack.pop()]:
            for x in r:
                if x in G.nonterminals and x not in reach:
                    reach.add(x)
                    stack.append(x)
    prods = {(l, r) for l, r in prods if l in reach}
    terminals = {x for _, r in prods for x in r if x in G.terminals}
    return Grammar(frozenset(reach & (productive | {G.start})), frozenset(terminals), frozenset(prods), G.start)


def bar_hillel(G: Grammar, M: WordAutomaton, reads=None, start: str = "S'") -> Grammar:
    """CNF grammar for ``{w ∈ L(G) | reads(w) ∈ L(M)}``.

    ``reads`` maps each terminal of ``G`` to the letter ``M`` consumes for it
    (the identity by default).  Nonterminals are triples ``p|A|q`` of
    automaton states around a grammar nonterminal; a fresh start symbol
    copies the productions of every ``q0|S|f`` with ``f`` final.
    """
    if not G.is_cnf:
        raise NotCNF("the product construction needs a grammar in Chomsky normal form")
    reads = reads or {}
    D = determinize(M, complete=True)
    ids = {q: i for i, q in enumerate(sorted(D.states, key=lambda s: sorted(map(repr, s))))}
    delta = {(p, a): q for p, a, q in D.transitions}
    Q = list(ids)

    def nt(p, A, q):
        return f"{ids[p]}|{A}|{ids[q]}"

    prods = set()
    for lhs, rhs in G.productions:
        if len(rhs) == 1:
            a = rhs[0]
            letter = reads.get(a, a)
            if letter not in D.alphabet:
                continue
            for p in Q:
                prods.add((nt(p, lhs, delta[(p, letter)]), (a,)))
        else:
            B, C = rhs
            for p in Q:
                for r in Q:
                    for q in Q:
                        prods.add((nt(p, lhs, q), (nt(p, B, r), nt(r, C, q))))
    for lhs, rhs in list(prods):
        for f in D.finals:
            if lhs == nt(D.initial, G.start, f):
                prods.add((start, rhs))
    nts = {l for l, _ in prods} | {x for _, r in prods for x in r if x not in G.terminals} | {start}
    return trim_grammar(Grammar(frozenset(nts), G.terminals, frozenset(prods), start))


def relabel(G: Grammar, h) -> Grammar:
    """Apply the letter-to-letter map ``h`` to every terminal."""
    prods = {(l, tuple(h[x] if x in G.terminals else x for x in r)) for l, r in G.productions}
    return Grammar(G.nonterminals, frozenset(h[t] for t in G.terminals), frozenset(prods), G.start)


def cyk_membership(G: Grammar, w) -> bool:
    """Whether ``w`` is derivable; the empty word never is."""
    if not G.is_cnf:
        raise NotCNF("CYK needs a grammar in Chomsky normal form")
    w = tuple(w)
    n = len(w)
    if n == 0:
        return False
    table = {}
    for i, a in enumerate(w):
        table[(i, i + 1)] = set(G.by_rhs.get((a,), ()))
    binary = [(l, r) for l, r in G.productions if len(r) == 2]
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span
            cell = set()
            for k in range(i + 1, j):
                left, right = table[(i, k)], table[(k, j)]
                if not left or not right:
                    continue
                for l, (B, C) in binary:
                    if B in left and C in right:
                        cell.add(l)
            table[(i, j)] = cell
    return G.start in table[(0, n)]


def generate_upto(G: Grammar, n: int) -> dict:
    """All words of length ``1..n`` derivable in a CNF grammar, by length."""
    if not G.is_cnf:
        raise NotCNF("generation needs a grammar in Chomsky normal form")
    words = defaultdict(lambda: defaultdict(set))
    for l, r in G.productions:
        if len(r) == 1:
            words[1][l].add(r)
    binary = [(l, r) for l, r in G.productions if len(r) == 2]
    for k in range(2, n + 1):
        for l, (B, C) in binary:
            for i in range(1, k):
                for x in words[i].get(B, ()):
                    for y in words[k - i].get(C, ()):
                        words[k][l].add(x + y)
    return {k: frozenset(words[k].get(G.start, ())) for k in range(1, n + 1)}
