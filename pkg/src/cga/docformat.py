"""Line-oriented text documents for games, automata, transducers and friends.

A document starts with ``key: value`` header lines and continues with
``[section]`` blocks holding one record per line, tokens separated by
blanks.  Words inside records are written with ``,`` between symbols and
``ε`` for the empty word.  Rendering is canonical: fixed header order,
every section present, records sorted, no blank lines.

Example::

    kind: automaton
    version: 1
    alphabet: a b
    initial: 0
    finals: 0
    deterministic: yes
    [states]
    0
    [transitions]
    0 a 0
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (EMPTY_WORD, RESERVED_CHARS, Alphabet, Homomorphism, SynchronousTransducer, WordAutomaton,
                   alphabet_of)
from .cfl import DyckSpec, FlowerSpec, neutralised
from .dominoes import DominoSystem
from .errors import CGAError, DocumentError
from .games import GameGraph, StrategyTable
from .grammar import Grammar

VERSION = 1

#: header keys and sections of every document kind, in canonical order
LAYOUT = {
    "game": (("alphabet", "initial"), ("states", "edges")),
    "transducer": (("alphabet", "initial", "finals"), ("states", "transitions")),
    "automaton": (("alphabet", "initial", "finals", "deterministic"), ("states", "transitions")),
    "domino": (("side", "bottom"), ("dominoes", "horizontal", "vertical")),
    "flower": (("sigma", "neutrals", "m-initial", "m-finals"), ("brackets", "hom", "m-states", "m-transitions")),
    "strategy-table": (("maxlen",), ("entries", "player2")),
    "grammar": (("start", "terminals"), ("nonterminals", "productions")),
}


@dataclass
class Document:
    """A parsed document before it is turned into a domain object."""

    kind: str
    headers: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)


def parse_text(text: str) -> Document:
    doc = None
    section = None
    headers, sections, where = {}, {}, {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]") and " " not in line and len(line) > 2:
            section = line[1:-1]
            if section in sections:
                raise DocumentError(f"section [{section}] appears twice", number)
            sections[section] = []
            where[section] = []
            continue
        if section is None:
            key, sep, value = line.partition(":")
            if not sep or " " in key:
                raise DocumentError(f"expected 'key: value' header, got {line!r}", number)
            key = key.strip()
            if key in headers:
                raise DocumentError(f"header {key!r} given twice", number)
            headers[key] = value.strip()
            where[key] = number
        else:
            sections[section].append(line.split())
            where[section].append(number)
    kind = headers.pop("kind", None)
    if kind is None:
        raise DocumentError("missing 'kind' header", 1)
    if kind not in LAYOUT:
        raise DocumentError(f"unknown document kind {kind!r}", where.get("kind", 1))
    version = headers.pop("version", None)
    if version != str(VERSION):
        raise DocumentError(f"unsupported version {version!r}, expected {VERSION}", where.get("version", 1))
    keys, names = LAYOUT[kind]
    for key in headers:
        if key not in keys:
            raise DocumentError(f"unknown header {key!r} for a {kind} document", where[key])
    for name in sections:
        if name not in names:
            raise DocumentError(f"unknown section [{name}] for a {kind} document", where[name][0] - 1
                                if where[name] else None)
    doc = Document(kind, headers, {n: sections.get(n, []) for n in names}, where)
    return doc


def _line(doc: Document, section: str, index: int):
    lines = doc.lines.get(section) or []
    return lines[index] if index < len(lines) else None


def _require(doc: Document, key: str) -> str:
    if key not in doc.headers:
        raise DocumentError(f"missing header {key!r}")
    return doc.headers[key]


def _tokens(value: str) -> list:
    return value.split()


def _alphabet(doc: Document, key: str = "alphabet") -> Alphabet:
    try:
        return Alphabet(tuple(_tokens(_require(doc, key))))
    except CGAError as e:
        raise DocumentError(f"bad alphabet: {e}", doc.lines.get(key)) from e


def _records(doc: Document, section: str, arity, what: str):
    arities = arity if isinstance(arity, tuple) else (arity,)
    for i, rec in enumerate(doc.sections[section]):
        if len(rec) not in arities:
            raise DocumentError(f"{what} record needs {' or '.join(map(str, arities))} fields, got {len(rec)}",
                                _line(doc, section, i))
        yield i, rec


def parse_word(token: str) -> tuple:
    return () if token == EMPTY_WORD else tuple(token.split(","))


def render_word(w) -> str:
    return ",".join(w) if w else EMPTY_WORD


# ---------------------------------------------------------------------------
# parsing into domain objects


def _game(doc: Document) -> GameGraph:
    alphabet = _alphabet(doc)
    initial = _require(doc, "initial")
    states, obs1, obs2, omega = set(), {}, {}, {}
    for i, rec in _records(doc, "states", (3, 4), "state"):
        v = rec[0]
        if v in states:
            raise DocumentError(f"state {v} declared twice", _line(doc, "states", i))
        states.add(v)
        obs1[v], obs2[v] = rec[1], rec[2]
        if len(rec) == 4:
            try:
                omega[v] = frozenset(int(x) for x in rec[3].split(","))
            except ValueError:
                raise DocumentError(f"admissible set {rec[3]!r} must list 0 and/or 1", _line(doc, "states", i))
    edges = set()
    for i, (u, v) in _records(doc, "edges", 2, "edge"):
        for s in (u, v):
            if s not in states:
                raise DocumentError(f"edge uses undeclared state {s}", _line(doc, "edges", i))
        edges.add((u, v))
    if initial not in states:
        raise DocumentError(f"initial state {initial} is not declared", doc.lines.get("initial"))
    G = GameGraph(frozenset(states), frozenset(edges), obs1, obs2, initial, omega, alphabet)
    for v in sorted(G.finals):
        if v not in omega and (v != initial or edges):
            raise DocumentError(f"final state {v} has no admissible set", _state_line(doc, v))
    return G


def _state_line(doc: Document, v):
    for i, rec in enumerate(doc.sections.get("states", [])):
        if rec and rec[0] == v:
            return _line(doc, "states", i)
    return None


def _transducer(doc: Document) -> SynchronousTransducer:
    alphabet = _alphabet(doc)
    states = {rec[0] for _, rec in _records(doc, "states", 1, "state")}
    t = set()
    for i, rec in _records(doc, "transitions", 4, "transition"):
        t.add(tuple(rec))
    finals = frozenset(_tokens(_require(doc, "finals")))
    try:
        return SynchronousTransducer(alphabet, frozenset(t), _require(doc, "initial"), finals, frozenset(states))
    except (CGAError, ValueError) as e:
        raise DocumentError(str(e)) from e


def _automaton(doc: Document) -> WordAutomaton:
    alphabet = _alphabet(doc)
    states = {rec[0] for _, rec in _records(doc, "states", 1, "state")}
    t = {tuple(rec) for _, rec in _records(doc, "transitions", 3, "transition")}
    det = doc.headers.get("deterministic", "no")
    if det not in ("yes", "no"):
        raise DocumentError("deterministic must be 'yes' or 'no'", doc.lines.get("deterministic"))
    try:
        return WordAutomaton(alphabet, frozenset(t), _require(doc, "initial"),
                             frozenset(_tokens(doc.headers.get("finals", ""))), frozenset(states), det == "yes")
    except (CGAError, ValueError) as e:
        raise DocumentError(str(e)) from e


def _domino(doc: Document) -> DominoSystem:
    dominoes = [rec[0] for _, rec in _records(doc, "dominoes", 1, "domino")]
    if len(set(dominoes)) != len(dominoes):
        raise DocumentError("duplicate domino in [dominoes]")
    h = {tuple(r) for _, r in _records(doc, "horizontal", 2, "horizontal pair")}
    v = {tuple(r) for _, r in _records(doc, "vertical", 2, "vertical pair")}
    return DominoSystem(tuple(dominoes), frozenset(h), frozenset(v), _require(doc, "side"), _require(doc, "bottom"))


def _flower(doc: Document) -> FlowerSpec:
    sigma = _alphabet(doc, "sigma")
    neutrals = _tokens(doc.headers.get("neutrals", ""))
    brackets = [tuple(r) for _, r in _records(doc, "brackets", 2, "bracket pair")]
    try:
        dyck = DyckSpec(tuple(brackets), tuple(neutrals))
        hmap = {}
        for i, (x, s) in _records(doc, "hom", 2, "homomorphism"):
            if x in hmap:
                raise DocumentError(f"homomorphism given twice on {x}", _line(doc, "hom", i))
            hmap[x] = s
        lam = alphabet_of(dyck.letters)
        h = Homomorphism(lam, sigma, hmap)
        m_alpha = alphabet_of([neutralised(x) for x in dyck.letters])
        states = {r[0] for _, r in _records(doc, "m-states", 1, "state")}
        t = {tuple(r) for _, r in _records(doc, "m-transitions", 3, "transition")}
        M = WordAutomaton(m_alpha, frozenset(t), _require(doc, "m-initial"),
                          frozenset(_tokens(doc.headers.get("m-finals", ""))), frozenset(states))
        return FlowerSpec(dyck, sigma, h, M)
    except DocumentError:
        raise
    except CGAError as e:
        raise DocumentError(str(e)) from e


def _strategy(doc: Document) -> StrategyTable:
    try:
        maxlen = int(_require(doc, "maxlen"))
    except ValueError:
        raise DocumentError("maxlen must be an integer", doc.lines.get("maxlen"))

    def table(section):
        out = {}
        for i, (w, d) in _records(doc, section, 2, "entry"):
            if d not in ("0", "1"):
                raise DocumentError(f"decision must be 0 or 1, got {d!r}", _line(doc, section, i))
            out[parse_word(w)] = int(d)
        return out

    p2 = table("player2")
    return StrategyTable(maxlen, table("entries"), p2 if doc.sections["player2"] else None)


def _grammar(doc: Document) -> Grammar:
    nts = {r[0] for _, r in _records(doc, "nonterminals", 1, "nonterminal")}
    terminals = set(_tokens(doc.headers.get("terminals", "")))
    prods = set()
    for i, rec in _records(doc, "productions", (2, 3), "production"):
        prods.add((rec[0], tuple(rec[1:])))
    try:
        return Grammar(frozenset(nts), frozenset(terminals), frozenset(prods), _require(doc, "start"))
    except ValueError as e:
        raise DocumentError(str(e)) from e


_BUILDERS = {"game": _game, "transducer": _transducer, "automaton": _automaton, "domino": _domino,
             "flower": _flower, "strategy-table": _strategy, "grammar": _grammar}


def parse_document(text: str):
    """Parse ``text`` and return ``(kind, object)``."""
    doc = parse_text(text)
    return doc.kind, _BUILDERS[doc.kind](doc)


def load(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


# ---------------------------------------------------------------------------
# rendering


def _token_ok(s) -> bool:
    return isinstance(s, str) and s and not RESERVED_CHARS.intersection(s) and not (s.startswith("[") and
                                                                                      s.endswith("]"))


def state_names(states, initial=None) -> dict:
    """Keep printable string names; otherwise number the states ``s0, s1, …``."""
    if all(_token_ok(s) for s in states):
        return {s: s for s in states}
    ordered = sorted(states, key=lambda s: (s != initial, repr(s)))
    return {s: f"s{i}" for i, s in enumerate(ordered)}


def _emit(kind: str, headers: dict, sections: dict) -> str:
    keys, names = LAYOUT[kind]
    out = [f"kind: {kind}", f"version: {VERSION}"]
    for k in keys:
        value = headers.get(k, "")
        out.append(f"{k}: {value}".rstrip())
    for n in names:
        out.append(f"[{n}]")
        out.extend(sorted(" ".join(r) for r in sections.get(n, [])))
    return "\n".join(out) + "\n"


def render_game(G: GameGraph) -> str:
    names = state_names(G.states, G.initial)
    rows = []
    for v in G.states:
        rec = [names[v], G.obs1.get(v, "?"), G.obs2.get(v, "?")]
        if v in G.omega:
            rec.append(",".join(str(d) for d in sorted(G.omega[v])))
        rows.append(rec)
    edges = [[names[u], names[v]] for u, v in G.edges]
    return _emit("game", {"alphabet": " ".join(G.alphabet), "initial": names[G.initial]},
                 {"states": rows, "edges": edges})


def render_transducer(R: SynchronousTransducer) -> str:
    names = state_names(R.states, R.initial)
    return _emit("transducer", {"alphabet": " ".join(R.alphabet), "initial": names[R.initial],
                                "finals": " ".join(sorted(names[q] for q in R.finals))},
                 {"states": [[names[q]] for q in R.states],
                  "transitions": [[names[p], a, b, names[q]] for p, a, b, q in R.transitions]})


def render_automaton(A: WordAutomaton) -> str:
    names = state_names(A.states, A.initial)
    return _emit("automaton", {"alphabet": " ".join(A.alphabet), "initial": names[A.initial],
                               "finals": " ".join(sorted(names[q] for q in A.finals)),
                               "deterministic": "yes" if A.deterministic else "no"},
                 {"states": [[names[q]] for q in A.states],
                  "transitions": [[names[p], a, names[q]] for p, a, q in A.transitions]})


def render_domino(D: DominoSystem) -> str:
    return _emit("domino", {"side": D.side, "bottom": D.bottom},
                 {"dominoes": [[d] for d in D.dominoes], "horizontal": [list(p) for p in D.horizontal],
                  "vertical": [list(p) for p in D.vertical]})


def render_flower(fs: FlowerSpec) -> str:
    M = fs.M
    names = state_names(M.states, M.initial)
    return _emit("flower", {"sigma": " ".join(fs.sigma), "neutrals": " ".join(fs.dyck.neutrals),
                            "m-initial": names[M.initial], "m-finals": " ".join(sorted(names[q] for q in M.finals))},
                 {"brackets": [list(p) for p in fs.dyck.brackets],
                  "hom": [[x, s] for x, s in fs.h.mapping.items()],
                  "m-states": [[names[q]] for q in M.states],
                  "m-transitions": [[names[p], a, names[q]] for p, a, q in M.transitions]})


def render_strategy(s: StrategyTable) -> str:
    return _emit("strategy-table", {"maxlen": str(s.maxlen)},
                 {"entries": [[render_word(w), str(d)] for w, d in s.entries.items()],
                  "player2": [[render_word(w), str(d)] for w, d in (s.player2 or {}).items()]})


def render_grammar(G: Grammar) -> str:
    return _emit("grammar", {"start": G.start, "terminals": " ".join(sorted(G.terminals))},
                 {"nonterminals": [[x] for x in G.nonterminals],
                  "productions": [[l, *r] for l, r in G.productions]})


def render_document(obj) -> str:
    """Canonical text of any supported object."""
    for cls, fn in ((GameGraph, render_game), (SynchronousTransducer, render_transducer),
                    (WordAutomaton, render_automaton), (DominoSystem, render_domino), (FlowerSpec, render_flower),
                    (StrategyTable, render_strategy), (Grammar, render_grammar)):
        if isinstance(obj, cls):
            return fn(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")


def canonical(text: str) -> str:
    """Parse and re-render: the canonical form of a document."""
    return render_document(parse_document(text)[1])
