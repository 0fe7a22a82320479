"""Reflection of a seed relation and its exact per-length iteration.

The reflection ``τ = R R⁻¹`` relates two player-1 observations that share a
player-2 observation.  Its reflexive-transitive closure is computed one
word length at a time by explicit breadth-first search, which is exact
because ``τ`` preserves length and each length class is finite.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .core import (Alphabet, SynchronousTransducer, WordAutomaton, alphabet_of, check_cap, compose,
                   enumerate_words, format_word, invert, nfa_accepts, transduce)
from .errors import ConflictError, UnsolvableSeed
from .games import StrategyTable
from .seeds import Seed


@lru_cache(maxsize=64)
def reflection(R: SynchronousTransducer) -> SynchronousTransducer:
    """``R R⁻¹``: pairs of first-tape words with a common second-tape word."""
    return compose(R, invert(R))


def neighbours(seed: Seed, w, cap: int | None = None) -> list:
    """Words related to ``w`` by one application of the reflection, sorted."""
    tau = reflection(seed.relation)
    return sorted(transduce(tau, w, cap), key=seed.alphabet.sort_key)


@dataclass(frozen=True)
class ClosureResult:
    """Whether ``w`` reaches the target language, with a witnessing chain if so."""

    length: int
    member: bool
    chain: tuple | None = None
    component_size: int = 0


def closure_membership(seed: Seed, target: str, w, cap: int | None = None) -> ClosureResult:
    """Breadth-first search of the reflection component of ``w``.

    Stops at the first word accepted by the target automaton.  The chain
    runs from ``w`` to that word, each consecutive pair related by ``τ``.
    """
    w = seed.alphabet.check_word(w)
    goal = seed.target(target)
    parent = {w: None}
    queue = deque([w])
    found = None
    while queue:
        u = queue.popleft()
        if nfa_accepts(goal, u):
            found = u
            break
        for v in neighbours(seed, u, cap):
            if v not in parent:
                parent[v] = u
                queue.append(v)
        check_cap(len(parent), cap, f"reflection component of {format_word(w)}")
    if found is None:
        return ClosureResult(len(w), False, None, len(parent))
    chain = [found]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    return ClosureResult(len(w), True, tuple(reversed(chain)), len(parent))


def verify_chain(seed: Seed, target: str, chain) -> bool:
    """Independent check of a chain: each link accepted by ``τ``, last word in the target."""
    tau = reflection(seed.relation)
    chain = [tuple(c) for c in chain]
    if not chain or not nfa_accepts(seed.target(target), chain[-1]):
        return False
    return all(tau.accepts(x, y) for x, y in zip(chain, chain[1:]))


def closure_set(seed: Seed, target: str, n: int, cap: int | None = None) -> frozenset:
    """``τ* L(target)`` restricted to words of length ``n``.

    Least fixpoint of ``S ↦ S ∪ τ S`` from the target's words of length
    ``n``; ``τ`` is symmetric, so the image of ``S`` is the set of its
    neighbours.
    """
    return _closure_set(seed, target, n, cap)


@lru_cache(maxsize=256)
def _closure_set(seed: Seed, target: str, n: int, cap: int | None) -> frozenset:
    start = enumerate_words(seed.target(target), n, cap)
    seen = set(start)
    queue = deque(sorted(start, key=seed.alphabet.sort_key))
    tau = reflection(seed.relation)
    while queue:
        u = queue.popleft()
        for v in transduce(tau, u, cap):
            if v not in seen:
                seen.add(v)
                queue.append(v)
        check_cap(len(seen), cap, f"closure at length {n}")
    return frozenset(seen)


@dataclass(frozen=True)
class SolvabilityVerdict:
    checked_up_to: int
    solvable_up_to: bool
    conflict: tuple | None = None

    @property
    def conflict_word(self):
        return None if self.conflict is None else self.conflict[0]


def solvable_upto(seed: Seed, N: int, cap: int | None = None) -> SolvabilityVerdict:
    """Look for a word forced both ways at some length ``n ≤ N``."""
    for n in range(N + 1):
        both = closure_set(seed, "acc", n, cap) & closure_set(seed, "rej", n, cap)
        if both:
            w = min(both, key=seed.alphabet.sort_key)
            acc = closure_membership(seed, "acc", w, cap).chain
            rej = closure_membership(seed, "rej", w, cap).chain
            return SolvabilityVerdict(N, False, (w, acc, rej))
    return SolvabilityVerdict(N, True)


def _sigma(sigma) -> Alphabet:
    return sigma if isinstance(sigma, Alphabet) else alphabet_of(sigma)


def covered_language_upto(seed: Seed, sigma, N: int, cap: int | None = None) -> dict:
    """Per length ``1..N``, the input words forced to decision 1.

    The empty word is never part of a covered language.
    """
    sigma = _sigma(sigma)
    out = {}
    for n in range(1, N + 1):
        forced = closure_set(seed, "acc", n, cap)
        out[n] = frozenset(w for w in forced if all(a in sigma for a in w))
    return out


def characterises_check_upto(seed: Seed, sigma, N: int, cap: int | None = None) -> bool:
    """True iff every input word of length ``1..N`` is forced one way or the other."""
    sigma = _sigma(sigma)
    verdict = solvable_upto(seed, N, cap)
    if not verdict.solvable_up_to:
        raise UnsolvableSeed(verdict)
    for n in range(1, N + 1):
        forced = closure_set(seed, "acc", n, cap) | closure_set(seed, "rej", n, cap)
        for w in sigma.words(n, cap):
            if w not in forced:
                return False
    return True


def optimal_decision(seed: Seed, w, default: int = 0, cap: int | None = None) -> int:
    """1 if ``w`` is forced to accept, 0 if forced to reject, else ``default``."""
    acc = closure_membership(seed, "acc", w, cap)
    rej = closure_membership(seed, "rej", w, cap)
    if acc.member and rej.member:
        raise ConflictError(w, acc.chain, rej.chain)
    if acc.member:
        return 1
    if rej.member:
        return 0
    return default


def _projection(R: SynchronousTransducer, tape: int) -> WordAutomaton:
    transitions = frozenset((p, t[tape], q) for p, *t, q in R.transitions)
    return WordAutomaton(R.alphabet, transitions, R.initial, R.finals, R.states)


def strategy_table(seed: Seed, N: int, default: int = 0, cap: int | None = None) -> StrategyTable:
    """The optimal strategy tabulated on all observation words up to length ``N``.

    Player 1 accepts exactly the words of the accepting closure.  Player 2
    answers like player 1 does on any word related to its observation;
    when both players' words can share one table the result uses a single
    map.
    """
    verdict = solvable_upto(seed, N, cap)
    if not verdict.solvable_up_to:
        raise UnsolvableSeed(verdict)
    first, second = _projection(seed.relation, 0), _projection(seed.relation, 1)
    inverse = invert(seed.relation)
    p1, p2 = {}, {}
    for n in range(N + 1):
        acc = closure_set(seed, "acc", n, cap)
        rej = closure_set(seed, "rej", n, cap)
        decide = lambda x: 1 if x in acc else (0 if x in rej else default)
        for x in enumerate_words(first, n, cap):
            p1[x] = decide(x)
        for z in enumerate_words(second, n, cap):
            partners = transduce(inverse, z, cap)
            p2[z] = decide(min(partners, key=seed.alphabet.sort_key))
    if all(p1.get(z, d) == d for z, d in p2.items()):
        return StrategyTable(N, {**p2, **p1})
    return StrategyTable(N, p1, p2)


def closure_cache_clear() -> None:
    """Drop memoised reflections and closures (they are pure, so this only frees memory)."""
    reflection.cache_clear()
    _closure_set.cache_clear()

