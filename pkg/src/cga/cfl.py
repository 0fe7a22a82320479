"""Seeds for Dyck languages and for homomorphic images of their regular restrictions.

The Dyck transducer copies letters and erases neutral symbols or an
innermost matching bracket pair into the blank ``□``.  Adding a coding
cycle for a letter-to-letter homomorphism ``h`` lets an input word over
``Σ`` reach its bracket-word preimages; restricting that construction to
the letters it actually uses gives a flower transducer over ``Σ ∪ Λ ∪ Λ'``
where ``Λ'`` holds neutralised copies ``n:x`` of the bracket letters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (BOX, NEUTRAL_PREFIX, Alphabet, Homomorphism, SynchronousTransducer, WordAutomaton,
                   alphabet_of, neutralised, star_automaton, trim)
from .errors import InvalidSpec, NotCodedDyck, SymbolError
from .grammar import Grammar, bar_hillel, dyck_grammar, relabel
from .seeds import Seed, make_seed

STANDARD_BRACKETS = (("[", "]"), ("(", ")"), ("{", "}"), ("<", ">"))


@dataclass(frozen=True)
class DyckSpec:
    """Bracket pairs ``(open, close)`` and neutral symbols."""

    brackets: tuple
    neutrals: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "brackets", tuple(tuple(p) for p in self.brackets))
        object.__setattr__(self, "neutrals", tuple(self.neutrals))
        if not self.brackets:
            raise InvalidSpec("a Dyck alphabet needs at least one bracket pair")
        symbols = [s for p in self.brackets for s in p] + list(self.neutrals)
        if len(set(symbols)) != len(symbols):
            raise InvalidSpec("bracket and neutral symbols must be pairwise distinct")
        if BOX in symbols:
            raise InvalidSpec(f"{BOX} is reserved for erased positions")
        if any(len(p) != 2 for p in self.brackets):
            raise InvalidSpec("each bracket kind is an (open, close) pair")
        alphabet_of(symbols)

    @property
    def n(self) -> int:
        return len(self.brackets)

    @property
    def letters(self) -> tuple:
        """``Λ``: opening brackets, closing brackets, then neutrals."""
        return tuple(o for o, _ in self.brackets) + tuple(c for _, c in self.brackets) + self.neutrals

    @property
    def kind(self) -> dict:
        out = {}
        for k, (o, c) in enumerate(self.brackets, 1):
            out[o] = (k, 1)
            out[c] = (k, -1)
        return out


def dyck_spec(n: int, neutrals=()) -> DyckSpec:
    """``n`` bracket kinds with the conventional names ``[ ] ( ) { } < >``."""
    if n < 1:
        raise InvalidSpec("need at least one bracket kind")
    pairs = [STANDARD_BRACKETS[k] if k < len(STANDARD_BRACKETS) else (f"[{k + 1}", f"]{k + 1}")
             for k in range(n)]
    return DyckSpec(tuple(pairs), tuple(neutrals))


def dyck_transducer(spec: DyckSpec) -> SynchronousTransducer:
    """States ``q0..qn``; ``q0`` is initial and the only final state.

    Copying: ``q0 --a|a--> q0`` for every letter and ``qk --□|□--> qk``.
    Erasing: ``q0 --[k|□--> qk``, ``qk --]k|□--> q0`` and ``q0 --c|□--> q0``.
    """
    gamma = alphabet_of(spec.letters + (BOX,))
    t = {("q0", a, a, "q0") for a in gamma}
    for k, (o, c) in enumerate(spec.brackets, 1):
        q = f"q{k}"
        t |= {(q, BOX, BOX, q), ("q0", o, BOX, q), (q, c, BOX, "q0")}
    t |= {("q0", c, BOX, "q0") for c in spec.neutrals}
    states = {f"q{k}" for k in range(spec.n + 1)}
    return SynchronousTransducer(gamma, frozenset(t), "q0", frozenset({"q0"}), frozenset(states))


def dyck_membership(spec: DyckSpec, w, extra_neutrals=()) -> bool:
    """Per-kind excess test: every kind ends balanced and no prefix dips below zero.

    Kinds are counted independently, so crossing words such as ``[(])``
    pass; see :func:`is_well_nested` for the nesting-aware test.
    """
    kind = spec.kind
    allowed = set(spec.letters) | set(extra_neutrals)
    excess = [0] * (spec.n + 1)
    for a in w:
        if a not in allowed:
            raise SymbolError(f"{a!r} is not a bracket or neutral symbol")
        if a in kind:
            k, d = kind[a]
            excess[k] += d
            if excess[k] < 0:
                return False
    return not any(excess)


def is_well_nested(spec: DyckSpec, w, extra_neutrals=()) -> bool:
    """Stack test: brackets of all kinds close in the reverse order they open."""
    kind = spec.kind
    allowed = set(spec.letters) | set(extra_neutrals)
    stack = []
    for a in w:
        if a not in allowed:
            raise SymbolError(f"{a!r} is not a bracket or neutral symbol")
        if a in kind:
            k, d = kind[a]
            if d > 0:
                stack.append(k)
            elif not stack or stack.pop() != k:
                return False
    return not stack


def dyck_seed(spec: DyckSpec) -> Seed:
    """The Dyck transducer with accepting language ``□*`` and no rejecting words."""
    R = dyck_transducer(spec)
    return make_seed(R, star_automaton(R.alphabet, [BOX]))


def pair_symbol(a: str, x: str) -> str:
    """Name of the two-track letter carrying ``a`` above ``x``."""
    return f"({a};{x})"


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


def add_coding_cycle(R: SynchronousTransducer, h: Homomorphism) -> SynchronousTransducer:
    """Duplicate ``R`` onto two tracks and add a coding cycle through a fresh final state.

    Every transition ``p --a|b--> q`` becomes ``p --(a;x)|(b;x)--> q`` for
    each letter ``x`` of ``h``'s source; the new state ``qh`` has
    ``q0 --h(a)|(a;a)--> qh`` and ``qh --h(a)|(a;a)--> qh``.  If the target
    alphabet of ``h`` meets ``R``'s alphabet, ``R``'s letters are first
    renamed with a ``t:`` prefix.
    """
    lam = h.source
    gamma = R.alphabet
    for a in lam:
        if a not in gamma:
            raise SymbolError(f"homomorphism letter {a!r} not in the transducer alphabet")
    rename = {a: a for a in gamma}
    if gamma.as_set() & h.target.as_set():
        rename = {a: _fresh("t:" + a, h.target.as_set()) for a in gamma}
    qh = _fresh("qh", R.states)
    symbols = list(h.target) + [pair_symbol(rename[a], x) for a in gamma for x in lam]
    t = set()
    for p, a, b, q in R.transitions:
        for x in lam:
            t.add((p, pair_symbol(rename[a], x), pair_symbol(rename[b], x), q))
    for a in lam:
        code = pair_symbol(rename[a], a)
        t.add((R.initial, h.mapping[a], code, qh))
        t.add((qh, h.mapping[a], code, qh))
    return SynchronousTransducer(alphabet_of(symbols), frozenset(t), R.initial, R.finals | {qh},
                                 R.states | {qh})


def coded_dyck_seed(spec: DyckSpec, h: Homomorphism, M: WordAutomaton) -> Seed:
    """The two-track seed with accepting language ``□* × M`` (``M`` over the bracket letters)."""
    R = add_coding_cycle(dyck_transducer(spec), h)
    blank = {x: pair_symbol(BOX, x) for x in spec.letters}
    t = frozenset((p, blank[x], q) for p, x, q in M.transitions)
    acc = WordAutomaton(R.alphabet, t, M.initial, M.finals, M.states)
    return make_seed(R, acc)


def reduce_flower(R_h: SynchronousTransducer, spec: DyckSpec, h: Homomorphism) -> SynchronousTransducer:
    """Restrict a coded Dyck transducer to the letters reachable from input words.

    Keeps transitions whose labels lie in ``Σ ∪ {(x;x)} ∪ {(□;x)}`` and
    renames ``(x;x)`` to ``x`` and ``(□;x)`` to ``n:x``.
    """
    rename = {s: s for s in h.target}
    for x in spec.letters:
        rename[pair_symbol(x, x)] = x
        rename[pair_symbol(BOX, x)] = neutralised(x)
    missing = [s for s in rename if s not in R_h.alphabet]
    if missing:
        raise NotCodedDyck(f"transducer lacks the expected letters {missing[:3]}")
    t = frozenset((p, rename[a], rename[b], q) for p, a, b, q in R_h.transitions if a in rename and b in rename)
    symbols = list(h.target) + list(spec.letters) + [neutralised(x) for x in spec.letters]
    return SynchronousTransducer(alphabet_of(symbols), t, R_h.initial, R_h.finals, R_h.states)


@dataclass(frozen=True)
class FlowerSpec:
    """Dyck alphabet, input alphabet, homomorphism ``h: Λ → Σ`` and ``M`` over ``Λ'``."""

    dyck: DyckSpec
    sigma: Alphabet
    h: Homomorphism
    M: WordAutomaton

    def __post_init__(self):
        if not isinstance(self.sigma, Alphabet):
            object.__setattr__(self, "sigma", alphabet_of(self.sigma))
        lam = set(self.dyck.letters)
        if set(self.h.source) != lam:
            raise InvalidSpec("homomorphism must be defined exactly on the bracket and neutral letters")
        if not set(self.h.target) <= self.sigma.as_set():
            raise InvalidSpec("homomorphism images must lie in the input alphabet")
        neutral_copies = {neutralised(x) for x in lam}
        if not self.M.alphabet.as_set() <= neutral_copies:
            raise InvalidSpec("M must range over neutralised letters only")
        clash = self.sigma.as_set() & (lam | neutral_copies | {BOX})
        if clash:
            raise InvalidSpec(f"input letters clash with bracket letters: {sorted(clash)}")

    @property
    def neutralised_letters(self) -> tuple:
        return tuple(neutralised(x) for x in self.dyck.letters)

    def m_over_letters(self) -> WordAutomaton:
        """``ν⁻¹ M`` restricted to bracket letters: ``M`` read through ``x ↦ n:x``."""
        lam = alphabet_of(self.dyck.letters)
        back = {neutralised(x): x for x in self.dyck.letters}
        return WordAutomaton(lam, frozenset((p, back[a], q) for p, a, q in self.M.transitions),
                             self.M.initial, self.M.finals, self.M.states)


def make_flower_spec(brackets, neutrals, sigma, h: dict, M: WordAutomaton) -> FlowerSpec:
    dyck = DyckSpec(tuple(brackets), tuple(neutrals))
    sigma = sigma if isinstance(sigma, Alphabet) else alphabet_of(sigma)
    hom = Homomorphism(alphabet_of(dyck.letters), alphabet_of(sorted(set(h.values()), key=list(sigma).index)), h)
    allowed = {neutralised(x) for x in dyck.letters}
    stray = sorted({a for _, a, _ in M.transitions} - allowed)
    if stray:
        raise InvalidSpec(f"M reads letters outside the neutralised bracket alphabet: {stray}")
    if M.alphabet.symbols != tuple(neutralised(x) for x in dyck.letters):
        M = M.with_alphabet(alphabet_of([neutralised(x) for x in dyck.letters]))
    return FlowerSpec(dyck, sigma, hom, M)


def flower_alphabet(fs: FlowerSpec) -> Alphabet:
    return alphabet_of(list(fs.sigma) + list(fs.dyck.letters) + list(fs.neutralised_letters))


def build_flower(fs: FlowerSpec) -> Seed:
    """The flower seed: reduced coded Dyck transducer with accepting language ``M``."""
    R = reduce_flower(add_coding_cycle(dyck_transducer(fs.dyck), fs.h), fs.dyck, fs.h)
    gamma = flower_alphabet(fs)
    R = SynchronousTransducer(gamma, R.transitions, R.initial, R.finals, R.states)
    return make_seed(R, fs.M.with_alphabet(gamma))


def flower_transitions(dyck: DyckSpec, h: dict, q0="q0", qh="qh", petals=None) -> frozenset:
    """The transition set an n-flower transducer must have, given its parts."""
    petals = petals or [f"q{k}" for k in range(1, dyck.n + 1)]
    lam = dyck.letters
    neutral = [neutralised(x) for x in lam]
    t = {(q0, a, a, q0) for a in list(lam) + neutral}
    for (o, c), q in zip(dyck.brackets, petals):
        t |= {(q, a, a, q) for a in neutral}
        t |= {(q0, o, neutralised(o), q), (q, c, neutralised(c), q0)}
    t |= {(q0, c, neutralised(c), q0) for c in dyck.neutrals}
    t |= {(q0, h[a], a, qh) for a in lam} | {(qh, h[a], a, qh) for a in lam}
    return frozenset(t)


def flower_structure(R: SynchronousTransducer):
    """Recover ``(dyck, sigma, h)`` if ``R`` has the n-flower shape, else ``None``."""
    q0 = R.initial
    if len(R.finals) != 2 or q0 not in R.finals:
        return None
    (qh,) = R.finals - {q0}
    symbols = R.alphabet.as_set()
    neutral = {s for s in symbols if s.startswith(NEUTRAL_PREFIX) and s[len(NEUTRAL_PREFIX):] in symbols}
    lam = {s[len(NEUTRAL_PREFIX):] for s in neutral}
    h = {}
    for p, a, b, q in R.transitions:
        if p == q0 and q == qh:
            if b in h and h[b] != a:
                return None
            h[b] = a
    if set(h) != lam or not lam:
        return None
    sigma = [s for s in R.alphabet if s not in lam and s not in neutral]
    if not set(h.values()) <= set(sigma):
        return None
    neutrals, pairs = [], []
    for p, a, b, q in R.transitions:
        if p == q0 and q == q0 and a in lam and b == neutralised(a):
            neutrals.append(a)
    petals = sorted(R.states - {q0, qh}, key=repr)
    for k in petals:
        opens = [a for p, a, b, q in R.transitions if p == q0 and q == k and a in lam and b == neutralised(a)]
        closes = [a for p, a, b, q in R.transitions if p == k and q == q0 and a in lam and b == neutralised(a)]
        if len(opens) != 1 or len(closes) != 1:
            return None
        pairs.append((opens[0], closes[0]))
    if not pairs:
        return None
    order = list(R.alphabet)
    pairs.sort(key=lambda p: order.index(p[0]))
    try:
        dyck = DyckSpec(tuple(pairs), tuple(sorted(neutrals, key=order.index)))
    except InvalidSpec:
        return None
    if set(dyck.letters) != lam:
        return None
    petal_of = {}
    for k in petals:
        opens = [a for p, a, b, q in R.transitions if p == q0 and q == k and a in lam and b == neutralised(a)]
        petal_of[opens[0]] = k
    expected = flower_transitions(dyck, h, q0, qh, [petal_of[o] for o, _ in dyck.brackets])
    if R.transitions != expected:
        return None
    return dyck, alphabet_of(sigma), h


def is_flower(seed: Seed):
    """The flower description of ``seed``, or ``None`` if it is not an n-flower seed.

    Besides the transducer shape, the accepting language must only use
    neutralised letters on its useful transitions.
    """
    parts = flower_structure(seed.relation)
    if parts is None:
        return None
    dyck, sigma, h = parts
    acc = trim(seed.acc)
    neutral = {neutralised(x) for x in dyck.letters}
    if any(a not in neutral for _, a, _ in acc.transitions):
        return None
    M = WordAutomaton(alphabet_of([neutralised(x) for x in dyck.letters]), acc.transitions, acc.initial,
                      acc.finals, acc.states)
    hom = Homomorphism(alphabet_of(dyck.letters), alphabet_of(sorted(set(h.values()), key=list(sigma).index)), h)
    return FlowerSpec(dyck, sigma, hom, M)


def flower_cfg(fs: FlowerSpec) -> Grammar:
    """CNF grammar for ``h(D ∩ ν⁻¹M)`` with ``D`` the well-nested bracket words."""
    G = dyck_grammar(fs.dyck.brackets, fs.dyck.neutrals)
    reads = {x: neutralised(x) for x in fs.dyck.letters}
    product = bar_hillel(G, fs.M, reads)
    return relabel(product, dict(fs.h.mapping))
