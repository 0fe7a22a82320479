"""Alphabets, words, word automata and synchronous (letter-to-letter) transducers.

Symbols are interned strings so that composite letters (domino names, track
pairs, neutralised copies such as ``n:[``) stay readable.  Words are tuples
of symbols.  Every value here is immutable once built; all operations are
pure functions returning fresh objects.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping

from .errors import AlphabetMismatch, CapExceeded, LengthMismatch, SymbolError

Symbol = str
Word = tuple
State = Hashable

#: Default bound on the number of words an exhaustive enumeration may visit.
DEFAULT_CAP = 2_000_000

HASH = "#"
BOX = "□"
NEUTRAL_PREFIX = "n:"
EMPTY_WORD = "ε"

# Whitespace separates tokens in documents and ',' separates symbols in words.
RESERVED_CHARS = frozenset(" \t\r\n\f\v,")


def resolve_cap(cap: int | None) -> int:
    return DEFAULT_CAP if cap is None else cap


def check_cap(size: int, cap: int | None, what: str) -> None:
    limit = resolve_cap(cap)
    if size > limit:
        raise CapExceeded(f"{what}: {size} exceeds enumeration cap {limit}")


def word(text) -> Word:
    """Coerce ``text`` to a word; a plain string is split into characters."""
    return tuple(text)


def format_word(w: Iterable[str], sep: str | None = None) -> str:
    w = tuple(w)
    if not w:
        return EMPTY_WORD
    if sep is None:
        sep = "" if all(len(s) == 1 for s in w) else ","
    return sep.join(w)


def parse_word(text: str, alphabet: Alphabet | None = None) -> Word:
    """Parse a word written with ',' or blank separators, or as plain characters.

    Without separators the text is split into characters when each character
    is a symbol; otherwise the whole text must itself be a symbol.
    """
    text = text.strip()
    if text in ("", EMPTY_WORD):
        return ()
    if "," in text or any(c.isspace() for c in text):
        return tuple(tok for tok in text.replace(",", " ").split())
    if alphabet is None or all(c in alphabet for c in text):
        return tuple(text)
    if text in alphabet:
        return (text,)
    raise SymbolError(f"cannot read {text!r} as a word over {alphabet}")


def neutralised(symbol: str) -> str:
    return NEUTRAL_PREFIX + symbol


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of distinct symbols."""

    symbols: tuple

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        seen = set()
        for s in symbols:
            if not isinstance(s, str) or not s:
                raise SymbolError(f"symbol names must be non-empty strings, got {s!r}")
            if RESERVED_CHARS.intersection(s) or s == EMPTY_WORD:
                raise SymbolError(f"symbol {s!r} contains a reserved character")
            if s in seen:
                raise SymbolError(f"duplicate symbol {s!r}")
            seen.add(s)

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.symbols)

    @cached_property
    def order(self) -> Mapping[str, int]:
        return MappingProxyType({s: i for i, s in enumerate(self.symbols)})

    def __contains__(self, symbol) -> bool:
        return symbol in self._set

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return "{" + ", ".join(self.symbols) + "}"

    def as_set(self) -> frozenset:
        return self._set

    def union(self, other: Iterable[str]) -> Alphabet:
        extra = [s for s in other if s not in self]
        return Alphabet(self.symbols + tuple(dict.fromkeys(extra)))

    def check_word(self, w: Iterable[str]) -> Word:
        w = tuple(w)
        for s in w:
            if s not in self:
                raise SymbolError(f"symbol {s!r} not in alphabet {self}")
        return w

    def sort_key(self, w: Word):
        return (len(w), tuple(self.order.get(s, len(self)) for s in w))

    def words(self, n: int, cap: int | None = None):
        """All words of length ``n`` in the alphabet's order."""
        check_cap(len(self) ** n, cap, f"|Γ|^{n}")
        return (tuple(p) for p in itertools.product(self.symbols, repeat=n))


def alphabet_of(symbols: Iterable[str]) -> Alphabet:
    return Alphabet(tuple(dict.fromkeys(symbols)))


@dataclass(frozen=True)
class WordSet:
    """A finite set of words that all have the same length."""

    length: int
    words: frozenset = frozenset()

    def __post_init__(self):
        words = frozenset(tuple(w) for w in self.words)
        object.__setattr__(self, "words", words)
        for w in words:
            if len(w) != self.length:
                raise LengthMismatch(f"word {w} does not have length {self.length}")

    def __contains__(self, w) -> bool:
        return tuple(w) in self.words

    def __iter__(self):
        return iter(sorted(self.words))

    def __len__(self) -> int:
        return len(self.words)


# ---------------------------------------------------------------------------
# Word automata


@dataclass(frozen=True)
class WordAutomaton:
    """A finite automaton over ``alphabet`` with transitions ``(p, a, q)``."""

    alphabet: Alphabet
    transitions: frozenset
    initial: State
    finals: frozenset
    states: frozenset = frozenset()
    deterministic: bool = False

    def __post_init__(self):
        transitions = frozenset(tuple(t) for t in self.transitions)
        finals = frozenset(self.finals)
        states = set(self.states) | {self.initial} | finals
        for p, a, q in transitions:
            if a not in self.alphabet:
                raise SymbolError(f"transition symbol {a!r} not in alphabet {self.alphabet}")
            states.update((p, q))
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "finals", finals)
        object.__setattr__(self, "states", frozenset(states))
        if self.deterministic:
            seen = set()
            for p, a, _ in transitions:
                if (p, a) in seen:
                    raise ValueError(f"automaton flagged deterministic has two {a!r}-transitions at {p!r}")
                seen.add((p, a))

    @cached_property
    def delta(self) -> Mapping:
        index = defaultdict(list)
        for p, a, q in sorted(self.transitions, key=repr):
            index[(p, a)].append(q)
        return MappingProxyType({k: tuple(v) for k, v in index.items()})

    def step(self, states: Iterable[State], a: str) -> frozenset:
        out = set()
        for p in states:
            out.update(self.delta.get((p, a), ()))
        return frozenset(out)

    def accepts(self, w) -> bool:
        return nfa_accepts(self, w)

    def with_alphabet(self, alphabet: Alphabet) -> WordAutomaton:
        return WordAutomaton(alphabet, self.transitions, self.initial, self.finals, self.states, self.deterministic)


def automaton(alphabet, transitions, initial, finals, states=(), deterministic=False) -> WordAutomaton:
    if not isinstance(alphabet, Alphabet):
        alphabet = alphabet_of(alphabet)
    return WordAutomaton(alphabet, frozenset(transitions), initial, frozenset(finals), frozenset(states), deterministic)


def empty_automaton(alphabet: Alphabet) -> WordAutomaton:
    return WordAutomaton(alphabet, frozenset(), 0, frozenset(), deterministic=True)


def star_automaton(alphabet: Alphabet, symbols: Iterable[str]) -> WordAutomaton:
    """Automaton for ``S*`` where ``S`` is a set of symbols of ``alphabet``."""
    return WordAutomaton(alphabet, frozenset((0, a, 0) for a in symbols), 0, frozenset({0}), deterministic=True)


def finite_automaton(alphabet: Alphabet, words: Iterable) -> WordAutomaton:
    """Trie automaton accepting exactly the given finite set of words."""
    transitions, finals = set(), set()
    for w in words:
        w = alphabet.check_word(w)
        for i in range(len(w)):
            transitions.add((w[:i], w[i], w[: i + 1]))
        finals.add(w)
    return WordAutomaton(alphabet, frozenset(transitions), (), frozenset(finals), deterministic=True)


def nfa_accepts(A: WordAutomaton, w) -> bool:
    """True iff some run of ``A`` on ``w`` ends in a final state."""
    current = frozenset({A.initial})
    for a in A.alphabet.check_word(w):
        current = A.step(current, a)
        if not current:
            return False
    return not current.isdisjoint(A.finals)


def _require_same_alphabet(x, y) -> None:
    if x.alphabet.as_set() != y.alphabet.as_set():
        raise AlphabetMismatch(f"alphabets differ: {x.alphabet} vs {y.alphabet}")


def intersect(A: WordAutomaton, B: WordAutomaton) -> WordAutomaton:
    """Product automaton restricted to pairs reachable from the initial pair."""
    _require_same_alphabet(A, B)
    start = (A.initial, B.initial)
    seen, queue, transitions = {start}, deque([start]), set()
    by_symbol_b = defaultdict(list)
    for p, a, q in B.transitions:
        by_symbol_b[(p, a)].append(q)
    while queue:
        pa, pb = queue.popleft()
        for a in A.alphabet:
            for qa in A.delta.get((pa, a), ()):
                for qb in by_symbol_b.get((pb, a), ()):
                    nxt = (qa, qb)
                    transitions.add(((pa, pb), a, nxt))
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    finals = {s for s in seen if s[0] in A.finals and s[1] in B.finals}
    return WordAutomaton(A.alphabet, frozenset(transitions), start, frozenset(finals), frozenset(seen),
                         A.deterministic and B.deterministic)


def union(A: WordAutomaton, B: WordAutomaton) -> WordAutomaton:
    """Disjoint union with a fresh initial state copying both initial fan-outs."""
    _require_same_alphabet(A, B)
    start = ("u", None)
    transitions = set()
    for tag, X in (("l", A), ("r", B)):
        for p, a, q in X.transitions:
            transitions.add(((tag, p), a, (tag, q)))
            if p == X.initial:
                transitions.add((start, a, (tag, q)))
    finals = {("l", q) for q in A.finals} | {("r", q) for q in B.finals}
    if A.initial in A.finals or B.initial in B.finals:
        finals.add(start)
    states = {("l", s) for s in A.states} | {("r", s) for s in B.states} | {start}
    return WordAutomaton(A.alphabet, frozenset(transitions), start, frozenset(finals), frozenset(states))


def determinize(A: WordAutomaton, complete: bool = False) -> WordAutomaton:
    """Subset construction; states are frozensets of ``A``'s states.

    With ``complete`` the empty subset is kept as a sink so that the
    transition function is total.
    """
    start = frozenset({A.initial})
    seen, queue, transitions = {start}, deque([start]), set()
    while queue:
        S = queue.popleft()
        for a in A.alphabet:
            T = A.step(S, a)
            if not T and not complete:
                continue
            transitions.add((S, a, T))
            if T not in seen:
                seen.add(T)
                queue.append(T)
    finals = {S for S in seen if not S.isdisjoint(A.finals)}
    return WordAutomaton(A.alphabet, frozenset(transitions), start, frozenset(finals), frozenset(seen), True)


def complement(A: WordAutomaton) -> WordAutomaton:
    D = determinize(A, complete=True)
    return WordAutomaton(D.alphabet, D.transitions, D.initial, D.states - D.finals, D.states, True)


def reachable_states(A: WordAutomaton) -> frozenset:
    succ = defaultdict(set)
    for p, _, q in A.transitions:
        succ[p].add(q)
    seen, stack = {A.initial}, [A.initial]
    while stack:
        for q in succ[stack.pop()]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return frozenset(seen)


def is_empty(A: WordAutomaton) -> bool:
    return reachable_states(A).isdisjoint(A.finals)


def trim(A: WordAutomaton) -> WordAutomaton:
    """Drop states that are unreachable or cannot reach a final state."""
    reach = reachable_states(A)
    pred = defaultdict(set)
    for p, _, q in A.transitions:
        pred[q].add(p)
    co = set(A.finals & reach)
    stack = list(co)
    while stack:
        for p in pred[stack.pop()]:
            if p not in co and p in reach:
                co.add(p)
                stack.append(p)
    keep = co | {A.initial}
    transitions = frozenset(t for t in A.transitions if t[0] in keep and t[2] in keep)
    return WordAutomaton(A.alphabet, transitions, A.initial, A.finals & keep, frozenset(keep), A.deterministic)


def _alive_by_length(finals, pred, n: int) -> list:
    """``alive[k]`` = states from which some path of exactly ``k`` steps reaches a final."""
    alive = [frozenset(finals)]
    for _ in range(n):
        prev = alive[-1]
        alive.append(frozenset(p for q in prev for p in pred.get(q, ())))
    return alive


def enumerate_words(A: WordAutomaton, n: int, cap: int | None = None) -> frozenset:
    """All words of length ``n`` accepted by ``A``."""
    pred = defaultdict(set)
    for p, _, q in A.transitions:
        pred[q].add(p)
    alive = _alive_by_length(A.finals, pred, n)
    if A.initial not in alive[n]:
        return frozenset()
    layer = {A.initial: {()}}
    for i in range(n):
        remaining = alive[n - i - 1]
        nxt = defaultdict(set)
        for p, prefixes in layer.items():
            for a in A.alphabet:
                for q in A.delta.get((p, a), ()):
                    if q in remaining:
                        nxt[q].update(pre + (a,) for pre in prefixes)
        layer = nxt
        check_cap(sum(len(v) for v in layer.values()), cap, f"words of length {n}")
    return frozenset(w for q, ws in layer.items() if q in A.finals for w in ws)


def language_upto(A: WordAutomaton, n: int, cap: int | None = None) -> dict:
    return {k: enumerate_words(A, k, cap) for k in range(n + 1)}


# ---------------------------------------------------------------------------
# Synchronous transducers


@dataclass(frozen=True)
class SynchronousTransducer:
    """A two-tape letter-to-letter automaton with transitions ``(p, a, b, q)``."""

    alphabet: Alphabet
    transitions: frozenset
    initial: State
    finals: frozenset
    states: frozenset = frozenset()

    def __post_init__(self):
        transitions = frozenset(tuple(t) for t in self.transitions)
        finals = frozenset(self.finals)
        if not finals:
            raise ValueError("a transducer needs at least one final state")
        states = set(self.states) | {self.initial} | finals
        for p, a, b, q in transitions:
            for s in (a, b):
                if s not in self.alphabet:
                    raise SymbolError(f"transition label {s!r} not in alphabet {self.alphabet}")
            states.update((p, q))
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "finals", finals)
        object.__setattr__(self, "states", frozenset(states))

    @cached_property
    def out(self) -> Mapping:
        """``(p, a) -> ((b, q), ...)`` indexed on the first tape."""
        index = defaultdict(list)
        for p, a, b, q in sorted(self.transitions, key=repr):
            index[(p, a)].append((b, q))
        return MappingProxyType({k: tuple(v) for k, v in index.items()})

    @cached_property
    def pair_delta(self) -> Mapping:
        index = defaultdict(list)
        for p, a, b, q in self.transitions:
            index[(p, a, b)].append(q)
        return MappingProxyType({k: tuple(v) for k, v in index.items()})

    @cached_property
    def predecessors(self) -> Mapping:
        pred = defaultdict(set)
        for p, _, _, q in self.transitions:
            pred[q].add(p)
        return MappingProxyType({k: frozenset(v) for k, v in pred.items()})

    def accepts(self, u, w) -> bool:
        return transducer_accepts(self, u, w)


def transducer(alphabet, transitions, initial, finals, states=()) -> SynchronousTransducer:
    if not isinstance(alphabet, Alphabet):
        alphabet = alphabet_of(alphabet)
    return SynchronousTransducer(alphabet, frozenset(transitions), initial, frozenset(finals), frozenset(states))


def transducer_accepts(R: SynchronousTransducer, u, w) -> bool:
    """True iff ``(u, w)`` labels an accepting run of ``R``."""
    u, w = R.alphabet.check_word(u), R.alphabet.check_word(w)
    if len(u) != len(w):
        raise LengthMismatch(f"tapes have lengths {len(u)} and {len(w)}")
    current = {R.initial}
    for a, b in zip(u, w):
        current = {q for p in current for q in R.pair_delta.get((p, a, b), ())}
        if not current:
            return False
    return not current.isdisjoint(R.finals)


def invert(R: SynchronousTransducer) -> SynchronousTransducer:
    """Swap the two tapes on every transition."""
    return SynchronousTransducer(R.alphabet, frozenset((p, b, a, q) for p, a, b, q in R.transitions),
                                 R.initial, R.finals, R.states)


def compose(R: SynchronousTransducer, S: SynchronousTransducer) -> SynchronousTransducer:
    """Lazy product recognising ``{(x, y) | (x, z) in R and (z, y) in S for some z}``."""
    _require_same_alphabet(R, S)
    s_by_input = defaultdict(list)
    for p, a, b, q in S.transitions:
        s_by_input[(p, a)].append((b, q))
    start = (R.initial, S.initial)
    seen, queue, transitions = {start}, deque([start]), set()
    r_by_state = defaultdict(list)
    for p, a, b, q in R.transitions:
        r_by_state[p].append((a, b, q))
    while queue:
        pr, ps = queue.popleft()
        for a, z, qr in r_by_state[pr]:
            for c, qs in s_by_input.get((ps, z), ()):
                nxt = (qr, qs)
                transitions.add(((pr, ps), a, c, nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    finals = {s for s in seen if s[0] in R.finals and s[1] in S.finals}
    if not finals:
        # keep the invariant F != ∅ with an unreachable final
        finals = {(None, None)}
    return SynchronousTransducer(R.alphabet, frozenset(transitions), start, frozenset(finals), frozenset(seen))


def identity(sigma: Alphabet | Iterable[str]) -> SynchronousTransducer:
    """Single-state transducer for ``{(w, w) | w in Σ*}``."""
    if not isinstance(sigma, Alphabet):
        sigma = alphabet_of(sigma)
    return SynchronousTransducer(sigma, frozenset((0, a, a, 0) for a in sigma), 0, frozenset({0}))


def transduce(R: SynchronousTransducer, u, cap: int | None = None) -> frozenset:
    """All words ``y`` such that ``(u, y)`` is accepted by ``R``.

    A forward pass computes the states reachable on the fixed input tape and
    a backward pass keeps only those that can still accept the rest of it;
    outputs are generated along the surviving layered graph only.
    """
    u = R.alphabet.check_word(u)
    n = len(u)
    forward = [{R.initial}]
    for a in u:
        forward.append({q for p in forward[-1] for _, q in R.out.get((p, a), ())})
    alive = [set() for _ in range(n + 1)]
    alive[n] = forward[n] & R.finals
    for i in range(n - 1, -1, -1):
        alive[i] = {p for p in forward[i] if any(q in alive[i + 1] for _, q in R.out.get((p, u[i]), ()))}
    if R.initial not in alive[0]:
        return frozenset()
    layer = {R.initial: {()}}
    for i, a in enumerate(u):
        nxt = defaultdict(set)
        for p, prefixes in layer.items():
            for b, q in R.out.get((p, a), ()):
                if q in alive[i + 1]:
                    nxt[q].update(pre + (b,) for pre in prefixes)
        layer = nxt
        check_cap(sum(len(v) for v in layer.values()), cap, f"images of a word of length {n}")
    return frozenset().union(*layer.values())


def relation_image(R: SynchronousTransducer, L: WordSet, cap: int | None = None) -> WordSet:
    """``R L = {x | (x, y) in R for some y in L}`` at the length of ``L``."""
    inverse = invert(R)
    out = set()
    for y in L.words:
        out.update(transduce(inverse, y, cap))
    return WordSet(L.length, frozenset(out))


def enumerate_pairs(R: SynchronousTransducer, n: int, cap: int | None = None) -> frozenset:
    """All accepted pairs of length exactly ``n``, by exhaustive run search."""
    if n < 0:
        raise ValueError("length must be non-negative")
    check_cap(len(R.alphabet) ** n, cap, f"|Γ|^{n}")
    alive = _alive_by_length(R.finals, R.predecessors, n)
    if R.initial not in alive[n]:
        return frozenset()
    by_state = defaultdict(list)
    for p, a, b, q in R.transitions:
        by_state[p].append((a, b, q))
    layer = {R.initial: {((), ())}}
    for i in range(n):
        remaining = alive[n - i - 1]
        nxt = defaultdict(set)
        for p, prefixes in layer.items():
            for a, b, q in by_state[p]:
                if q in remaining:
                    nxt[q].update((x + (a,), y + (b,)) for x, y in prefixes)
        layer = nxt
        check_cap(sum(len(v) for v in layer.values()), cap, f"pairs of length {n}")
    return frozenset(pair for q, pairs in layer.items() if q in R.finals for pair in pairs)


def trim_transducer(R: SynchronousTransducer) -> SynchronousTransducer:
    """Restrict to states that are reachable and co-reachable."""
    succ = defaultdict(set)
    for p, _, _, q in R.transitions:
        succ[p].add(q)
    reach, stack = {R.initial}, [R.initial]
    while stack:
        for q in succ[stack.pop()]:
            if q not in reach:
                reach.add(q)
                stack.append(q)
    co = set(R.finals & reach)
    stack = list(co)
    while stack:
        for p in R.predecessors.get(stack.pop(), ()):
            if p in reach and p not in co:
                co.add(p)
                stack.append(p)
    keep = co | {R.initial}
    finals = R.finals & keep or R.finals
    return SynchronousTransducer(R.alphabet, frozenset(t for t in R.transitions if t[0] in keep and t[3] in keep),
                                 R.initial, finals, frozenset(keep) | finals)


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True)
class Homomorphism:
    """A letter-to-letter homomorphism given by its action on single symbols."""

    source: Alphabet
    target: Alphabet
    mapping: Mapping = field(default_factory=dict)

    def __post_init__(self):
        mapping = MappingProxyType(dict(self.mapping))
        object.__setattr__(self, "mapping", mapping)
        for a in self.source:
            if a not in mapping:
                raise SymbolError(f"homomorphism undefined on {a!r}")
            if mapping[a] not in self.target:
                raise SymbolError(f"image {mapping[a]!r} of {a!r} not in target alphabet")
        for a in mapping:
            if a not in self.source:
                raise SymbolError(f"homomorphism defined on unknown symbol {a!r}")

    def __call__(self, w) -> Word:
        return tuple(self.mapping[a] for a in self.source.check_word(w))

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.mapping.items()))))

    def preimage_letters(self, s: str) -> tuple:
        return tuple(a for a in self.source if self.mapping[a] == s)
