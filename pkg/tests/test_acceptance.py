"""Acceptance gate: one test per criterion, each checked at its stated tolerance and time limit.

Run with ``pytest -v tests/test_acceptance.py``; the terminal summary lists
one PASS/FAIL line per criterion.
"""

import itertools
import random
import time

import pytest

from cga import corpus
from cga.cfl import build_flower, dyck_membership, dyck_seed, dyck_spec, flower_cfg
from cga.cli import main
from cga.closure import (characterises_check_upto, closure_membership, closure_set, covered_language_upto,
                         neighbours, solvable_upto, strategy_table, verify_chain)
from cga.core import (alphabet_of, automaton, complement, empty_automaton, enumerate_pairs, enumerate_words,
                      intersect, is_empty)
from cga.games import (connected_classes, empty_language_game, observation, plays_upto, random_game, union_games,
                       verify_strategy)
from cga.grammar import cyk_membership
from cga.seeds import extract_seed, identity_seed, synthesize_game

CAP = 2_000_000


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f} s, limit {self.limit} s"


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def corpus_path(name):
    return str(corpus.path(name))


def write_flip_seed(tmp_path):
    for ext in ("rel", "acc", "rej"):
        (tmp_path / f"flip.{ext}").write_text(corpus.text(f"flip.{ext}"), encoding="utf-8")
    return tmp_path / "flip"


@pytest.mark.criterion("1: covered language of the compiled a^n b^n dominoes")
def test_criterion_1_fig2a_covered_language(tmp_path, capsys):
    with Timer(30):
        game = tmp_path / "fig2a.game"
        code, _ = run_cli(capsys, "compile-domino", corpus_path("fig2a.domino"), "-o", game)
        assert code == 0
        code, out = run_cli(capsys, "--cap", CAP, "--format", "machine", "covered", game,
                            "--sigma", "a,b", "--max-len", 6)
    assert code == 0
    words = {w for line in out.splitlines() for w in line.split("=", 1)[1].split()}
    assert words == {"a,b", "a,a,b,b", "a,a,a,b,b,b"}


@pytest.mark.criterion("2: forced-decision chain for aabb, decision 0 on aaabb")
def test_criterion_2_forced_chain(tmp_path, capsys, fig2a_seed):
    with Timer(10):
        game = tmp_path / "fig2a.game"
        run_cli(capsys, "compile-domino", corpus_path("fig2a.domino"), "-o", game)
        code, out = run_cli(capsys, "--format", "machine", "closure", game, "--word", "aabb")
        assert code == 0
        lines = dict(line.split("=", 1) for line in out.splitlines())
        assert lines["member"] == "true"
        chain = [tuple(lines[k].split(",")) for k in sorted((k for k in lines if k.startswith("chain.")),
                                                            key=lambda k: int(k.split(".")[1]))]
        assert chain[0] == tuple("aabb")
        # every link re-checked against the relation, independently of the CLI
        assert verify_chain(fig2a_seed, "acc", chain)
        code, out = run_cli(capsys, "decide", game, "--word", "aaabb")
    assert code == 0 and out.strip() == "0"


@pytest.mark.criterion("3: corridor tiling of aaabbb")
def test_criterion_3_tiling(capsys, fig2a):
    with Timer(5):
        code, out = run_cli(capsys, "--format", "machine", "tile", corpus_path("fig2a.domino"), "aaabbb")
    assert code == 0
    kv = [line.split("=", 1) for line in out.splitlines()]
    assert dict(kv[:2]) == {"height": "5", "width": "6"}
    cells = {}
    for key, value in kv[2:]:
        assert key == "cell"
        x, y, d = value.split(",")
        cells[int(x), int(y)] = d
    rows = [[cells[x, y] for x in range(8)] for y in range(5)]
    assert rows[0] == list("#aaabbb#")
    assert all(r[0] == "#" and r[-1] == "#" for r in rows)
    assert rows[-1][1:-1] == ["□"] * 6
    for y in range(5):
        for x in range(7):
            assert (rows[y][x], rows[y][x + 1]) in fig2a.horizontal
    for y in range(4):
        for x in range(8):
            assert (rows[y][x], rows[y + 1][x]) in fig2a.vertical


def _seed_signature(seed, n):
    return (enumerate_pairs(seed.relation, n), enumerate_words(seed.acc, n), enumerate_words(seed.rej, n))


def _play_signature(G, n):
    """Pairs and target words read directly off the plays, as an independent route."""
    plays = plays_upto(G, n)
    pairs = {(observation(G, p, 1), observation(G, p, 2)) for p in plays if len(p) == n}
    acc = {observation(G, p, 1) for p in plays if len(p) == n and G.omega[p.final] == {1}}
    rej = {observation(G, p, 1) for p in plays if len(p) == n and G.omega[p.final] == {0}}
    return pairs, acc, rej


@pytest.mark.criterion("4: extract-synthesize-extract round trip on 25 random games")
def test_criterion_4_seed_round_trip():
    rng = random.Random(4)
    with Timer(60):
        done = 0
        while done < 25:
            G = random_game(rng, max_states=8, symbols=rng.sample("abc", rng.randint(1, 3)))
            assert len(G.alphabet) <= 4
            seed = extract_seed(G)
            if not is_empty(intersect(seed.acc, seed.rej)):
                # synthesis needs disjoint targets; such games are redrawn
                continue
            done += 1
            again = extract_seed(synthesize_game(seed))
            for n in range(5):
                first = _seed_signature(seed, n)
                assert first == _seed_signature(again, n)
                pairs, acc, rej = _play_signature(G, n)
                assert first[0] == pairs
                assert first[1] == acc and first[2] == rej


def _tau_components(seed, words):
    words, seen, comps = set(words), set(), set()
    for w in sorted(words):
        if w in seen:
            continue
        comp, stack = {w}, [w]
        while stack:
            for u in neighbours(seed, stack.pop()):
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.add(frozenset(comp))
    return comps


@pytest.mark.criterion("5: connectedness classes equal reflection components")
def test_criterion_5_connectedness_is_iterated_reflection(fig2a_game):
    rng = random.Random(5)
    games = [fig2a_game] + [random_game(rng, max_states=8, symbols=("a", "b", "c")) for _ in range(10)]
    with Timer(60):
        for G in games:
            seed = extract_seed(G)
            for n in range(5):
                classes = connected_classes(G, n)
                by_play = {frozenset(observation(G, p, 1) for p in c) for c in classes}
                words = {w for c in by_play for w in c}
                assert by_play == _tau_components(seed, words)


@pytest.mark.criterion("6: solvability probe")
def test_criterion_6_solvability(tmp_path, capsys, fig2a_game, fig2a_seed):
    flip = corpus.flip_seed()
    verdict = solvable_upto(flip, 3)
    word, acc_chain, rej_chain = verdict.conflict
    assert not verdict.solvable_up_to and len(word) == 1 and word == ("a",)
    assert verify_chain(flip, "acc", acc_chain) and verify_chain(flip, "rej", rej_chain)
    code, out = run_cli(capsys, "solvable", write_flip_seed(tmp_path), "--max-len", 3)
    assert code == 4 and out.splitlines()[0] == "unsolvable at length 1, word a"

    gadget = union_games(fig2a_game, empty_language_game(("a", "b")))
    verdict = solvable_upto(extract_seed(gadget), 6)
    assert not verdict.solvable_up_to and verdict.conflict_word == ("a", "b")

    assert solvable_upto(fig2a_seed, 6).solvable_up_to


def _check_dyck(n_pairs, neutrals, max_len):
    spec = dyck_spec(n_pairs, neutrals)
    seed = dyck_seed(spec)
    mismatches = []
    for n in range(1, max_len + 1):
        forced = closure_set(seed, "acc", n, CAP)
        for w in itertools.product(spec.letters, repeat=n):
            if (w in forced) != dyck_membership(spec, w):
                mismatches.append("".join(w))
    return mismatches


@pytest.mark.criterion("7: Dyck coverage, one bracket pair, length <= 8")
def test_criterion_7_dyck_one_pair():
    with Timer(120):
        assert _check_dyck(1, (), 8) == []


@pytest.mark.criterion("7: Dyck coverage, two bracket pairs and a neutral, length <= 6")
def test_criterion_7_dyck_two_pairs_one_neutral():
    # The per-kind excess checker accepts crossing words such as "[(])", which the
    # reflection closure never reaches; this comparison is expected to fail.
    with Timer(120):
        assert _check_dyck(2, ("c",), 6) == []


@pytest.mark.criterion("8: flower closure equals CYK on the flower grammar")
def test_criterion_8_flower_cfl():
    with Timer(300):
        for name, max_len in (("anbn.flower", 10), ("fig3a.flower", 8)):
            fs = corpus.load(name)
            seed, grammar = build_flower(fs), flower_cfg(fs)
            for n in range(1, max_len + 1):
                forced = closure_set(seed, "acc", n, CAP)
                for w in itertools.product(fs.sigma.symbols, repeat=n):
                    assert (w in forced) == cyk_membership(grammar, w), (name, w)


@pytest.mark.criterion("9: strategy table verifies and every single flip is caught")
def test_criterion_9_strategy_loop(fig2a_seed):
    G = synthesize_game(fig2a_seed)
    table = strategy_table(fig2a_seed, 6)
    assert verify_strategy(G, table, 6)
    assert table.entries
    for w, d in table.entries.items():
        res = verify_strategy(G, table.with_entry(w, 1 - d), 6)
        assert not res and res.counterexample is not None, w
    for w, d in (table.player2 or {}).items():
        assert not verify_strategy(G, table.with_entry(w, 1 - d, player=2), 6), w


@pytest.mark.criterion("10: identity seed for (ab)*ab characterises with complement, only covers without")
def test_criterion_10_identity_seed():
    sigma = alphabet_of("ab")
    acc = automaton(sigma, {(0, "a", 1), (1, "b", 2), (2, "a", 1)}, 0, {2}, deterministic=True)
    expected = {n: frozenset([tuple("ab" * (n // 2))] if n % 2 == 0 else []) for n in range(1, 7)}

    full = identity_seed(acc, complement(acc))
    assert characterises_check_upto(full, sigma, 6)
    assert covered_language_upto(full, sigma, 6) == expected

    bare = identity_seed(acc, empty_automaton(sigma))
    assert covered_language_upto(bare, sigma, 6) == expected
    assert characterises_check_upto(bare, sigma, 6) is False
    # nothing outside the language is forced to 0 without a rejecting target
    assert not closure_membership(bare, "rej", tuple("ba")).member


if __name__ == "__main__":
    raise SystemExit(pytest.main(["-v", __file__]))
