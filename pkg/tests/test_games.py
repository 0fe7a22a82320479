import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cga.closure import characterises_check_upto, covered_language_upto, optimal_decision, solvable_upto
from cga.core import alphabet_of, complement, finite_automaton, intersect, star_automaton
from cga.errors import AlphabetOverlap, InvalidGame, InvalidPlay, PartialStrategy
from cga.games import (GameGraph, Play, StrategyTable, characterizer, check_game, connected_classes,
                       connecting_chain, constant_strategy, empty_language_game, enumerate_plays,
                       function_strategy, game, indistinguishable, invert_game, lint_observation_coverage,
                       observation, plays_upto, random_game, safe_decisions, union_games, validate_game,
                       verify_strategy)
from cga.seeds import extract_seed, identity_seed, synthesize_game

AB = alphabet_of("ab")


def tiny_game(omega=frozenset({1})):
    """v0 -> x -> f and v0 -> f, with x observed as a/b."""
    return game({"v0", "x", "f"}, {("v0", "x"), ("x", "f"), ("v0", "f")},
                {"v0": "#", "x": "a", "f": "#"}, {"v0": "#", "x": "b", "f": "#"}, "v0", {"f": omega})


def codes(G):
    return [v.code for v in validate_game(G)]


def play_with(G, n, w1, w2=None):
    for p in enumerate_plays(G, n):
        if observation(G, p, 1) == tuple(w1) and (w2 is None or observation(G, p, 2) == tuple(w2)):
            return p
    raise AssertionError(f"no play observing {w1}/{w2}")


def is_anbn(w):
    k = len(w) // 2
    return len(w) > 0 and len(w) % 2 == 0 and tuple(w) == ("a",) * k + ("b",) * k


def cover_game(words, sigma=AB):
    """A game covering exactly ``words`` through an identity seed."""
    return synthesize_game(identity_seed(words if not isinstance(words, (set, list)) else
                                         finite_automaton(sigma, words)))


# --- validation


def test_fig1_is_valid(fig1_game):
    assert validate_game(fig1_game) == []


def test_edge_into_initial_is_reported():
    G = tiny_game()
    bad = GameGraph(G.states, G.edges | {("x", "v0")}, G.obs1, G.obs2, G.initial, G.omega, G.alphabet)
    assert "initial-has-incoming" in codes(bad)


def test_empty_admissible_set_is_reported():
    assert "empty-admissible-set" in codes(tiny_game(frozenset()))


def test_other_violations_are_reported():
    G = tiny_game()
    no_hash = GameGraph(G.states, G.edges, G.obs1, G.obs2, G.initial, G.omega, AB)
    assert "missing-hash-symbol" in codes(no_hash)
    labelled_final = GameGraph(G.states, G.edges, {**G.obs1, "f": "a"}, G.obs2, G.initial, G.omega, G.alphabet)
    assert "final-observation" in codes(labelled_final)
    dead = GameGraph(G.states | {"d"}, G.edges | {("x", "d"), ("d", "d")}, {**G.obs1, "d": "a"},
                     {**G.obs2, "d": "a"}, G.initial, G.omega, G.alphabet)
    assert "dead-state" in codes(dead)
    with pytest.raises(InvalidGame):
        check_game(dead)


# --- plays and observations


def test_enumerate_plays_small_cases(fig1_game):
    G = tiny_game()
    assert enumerate_plays(G, 0) == [Play(("v0", "f"))]
    assert enumerate_plays(G, 1) == [Play(("v0", "x", "f"))]
    assert enumerate_plays(G, 2) == []
    assert any(observation(fig1_game, p, 1) == tuple("aabb") for p in enumerate_plays(fig1_game, 4))


def test_disconnected_final_never_appears():
    G = tiny_game()
    H = GameGraph(G.states | {"g"}, G.edges, G.obs1 | {"g": "#"}, G.obs2 | {"g": "#"}, "v0",
                  {**G.omega, "g": frozenset({0})}, G.alphabet)
    assert all("g" not in p.states for p in plays_upto(H, 3))


def test_observations_of_the_first_chain_play(fig1_game):
    p = Play(("v0", "A20", "A21", "B21", "B20", "BB"))
    assert observation(fig1_game, p, 1) == tuple("aabb")
    assert observation(fig1_game, p, 2) == ("a", "◁", "▷", "b")
    assert observation(tiny_game(), Play(("v0", "f")), 1) == ()
    with pytest.raises(InvalidPlay):
        observation(fig1_game, Play(("v0", "A20", "BB")), 1)


def test_indistinguishability(fig1_game):
    p1 = Play(("v0", "A20", "A21", "B21", "B20", "BB"))
    p2 = play_with(fig1_game, 4, ("a", "◁", "▷", "b"))
    assert indistinguishable(fig1_game, p1, p1, 1)
    assert not indistinguishable(fig1_game, p1, p2, 1)
    assert any(indistinguishable(fig1_game, p1, q, 2) for q in enumerate_plays(fig1_game, 4) if q != p1)
    short = play_with(fig1_game, 2, "ab")
    assert not indistinguishable(fig1_game, p1, short, 1)


def test_fig1_class_of_aabb_reaches_the_box_play(fig1_game):
    p = play_with(fig1_game, 4, "aabb")
    cls = next(c for c in connected_classes(fig1_game, 4) if p in c)
    assert any(observation(fig1_game, q, 1) == ("◁", "▷", "◁", "▷") and observation(fig1_game, q, 2) == ("□",) * 4
               for q in cls)
    chain = connecting_chain(fig1_game, p, play_with(fig1_game, 4, ("□",) * 4))
    assert chain[0] == (p, None)
    for (prev, _), (cur, player) in zip(chain, chain[1:]):
        assert indistinguishable(fig1_game, prev, cur, player)


def test_classes_are_fibers_when_players_see_alike():
    rng = random.Random(1)
    for _ in range(10):
        G = random_game(rng)
        same = GameGraph(G.states, G.edges, G.obs1, G.obs1, G.initial, G.omega, G.alphabet)
        for n in range(4):
            for cls in connected_classes(same, n):
                assert len({observation(same, p, 1) for p in cls}) == 1


# --- safety


def test_fig1_safe_decisions(fig1_game):
    report = safe_decisions(fig1_game, play_with(fig1_game, 4, "aabb"))
    assert report.safe == {1}
    chain = report.witnesses[0]
    assert fig1_game.omega[chain[-1][0].final] == {1}
    assert 0 in safe_decisions(fig1_game, play_with(fig1_game, 5, "aaabb")).safe
    G = tiny_game(frozenset({0, 1}))
    assert safe_decisions(G, Play(("v0", "x", "f"))).safe == {0, 1}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_connectedness_is_the_join_and_safety_is_classwise(seed):
    G = random_game(random.Random(seed), symbols=("a", "b"))
    for n in range(4):
        classes = connected_classes(G, n)
        plays = [p for c in classes for p in c]
        assert sorted(plays, key=str) == sorted(enumerate_plays(G, n), key=str)
        where = {p: i for i, c in enumerate(classes) for p in c}
        for p in plays:
            for q in plays:
                if indistinguishable(G, p, q, 1) or indistinguishable(G, p, q, 2):
                    assert where[p] == where[q]
        for c in classes:
            assert len({safe_decisions(G, p).safe for p in c}) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2 ** 16))
def test_verification_matches_class_view(seed, bits):
    G = random_game(random.Random(seed), symbols=("a", "b"))
    n = 3
    words = sorted({observation(G, p, i) for p in plays_upto(G, n) for i in (1, 2)})
    table = StrategyTable(n, {w: (bits >> (k % 16)) & 1 for k, w in enumerate(words)})
    expected = True
    for k in range(n + 1):
        for cls in connected_classes(G, k):
            values = {table.decide(observation(G, p, i)) for p in cls for i in (1, 2)}
            safe = safe_decisions(G, cls[0]).safe
            expected &= len(values) == 1 and values <= safe
    assert bool(verify_strategy(G, table, n)) == expected


# --- strategies


def test_fig1_anbn_strategy_wins(fig1_game):
    seed = extract_seed(fig1_game)
    table = function_strategy(fig1_game, 8, lambda w: optimal_decision(seed, w))
    for w, d in table.entries.items():
        if all(a in "ab" for a in w):
            assert d == int(is_anbn(w))
    assert verify_strategy(fig1_game, table, 8)


def test_fig1_constant_zero_loses(fig1_game):
    res = verify_strategy(fig1_game, constant_strategy(fig1_game, 4, 0), 4)
    assert not res
    assert fig1_game.omega[res.counterexample.final] == {1}


def test_constant_strategy_wins_when_always_admissible():
    G = tiny_game(frozenset({0, 1}))
    assert verify_strategy(G, constant_strategy(G, 3, 1), 3)
    assert verify_strategy(G, constant_strategy(G, 3, 0), 3)


def test_partial_strategy_is_an_error():
    with pytest.raises(PartialStrategy):
        verify_strategy(tiny_game(), StrategyTable(1, {(): 1}), 1)


# --- compositions


def test_union_plays_are_the_disjoint_union():
    rng = random.Random(7)
    for _ in range(8):
        G, H = random_game(rng), random_game(rng, symbols=("c", "d"))
        U = union_games(G, H)
        assert validate_game(U) == []
        for n in range(5):
            def sig(X, plays):
                return sorted((observation(X, p, 1), observation(X, p, 2), tuple(sorted(X.omega[p.final])))
                              for p in plays)
            assert sig(U, enumerate_plays(U, n)) == sorted(sig(G, enumerate_plays(G, n)) +
                                                           sig(H, enumerate_plays(H, n)))


def test_union_with_a_playless_game_adds_nothing():
    G = tiny_game()
    empty = game({"v0"}, set(), {"v0": "#"}, {"v0": "#"}, "v0", {"v0": frozenset({0, 1})})
    U = union_games(G, empty)
    for n in range(3):
        assert len(enumerate_plays(U, n)) == len(enumerate_plays(G, n))


def test_union_of_solvable_games_on_disjoint_alphabets_is_solvable(fig1_game):
    other = cover_game([("c", "d")], alphabet_of("cd"))
    U = union_games(fig1_game, other)
    assert solvable_upto(extract_seed(U), 4).solvable_up_to
    # a winning table of the union restricts to winning tables of both parts
    seed = extract_seed(U)
    table = function_strategy(U, 4, lambda w: optimal_decision(seed, w))
    assert verify_strategy(U, table, 4)
    for part in (fig1_game, other):
        assert verify_strategy(part, function_strategy(part, 4, lambda w: table.decide(w)), 4)


def test_invert_game():
    G = tiny_game()
    assert invert_game(G).omega["f"] == {0}
    assert invert_game(invert_game(G)) == G
    rng = random.Random(3)
    for _ in range(5):
        H = random_game(rng)
        assert invert_game(invert_game(H)) == H


def test_characterizer_of_ab():
    L = finite_automaton(AB, [("a", "b")])
    plus = intersect(star_automaton(AB, "ab"), complement(finite_automaton(AB, [()])))
    co = intersect(plus, complement(L))
    C = characterizer(cover_game(L), cover_game(co), AB)
    seed = extract_seed(C)
    assert characterises_check_upto(seed, AB, 4)
    assert covered_language_upto(seed, AB, 4)[2] == {("a", "b")}


def test_characterizer_of_a_game_with_itself_is_unsolvable():
    every = cover_game(star_automaton(AB, "ab"))
    assert not solvable_upto(extract_seed(characterizer(every, every, AB)), 2).solvable_up_to


def test_characterizer_of_the_empty_language_forces_zero():
    plus = intersect(star_automaton(AB, "ab"), complement(finite_automaton(AB, [()])))
    none = cover_game(finite_automaton(AB, []))
    seed = extract_seed(characterizer(none, cover_game(plus), AB))
    for n in range(1, 4):
        for w in AB.words(n):
            assert optimal_decision(seed, w, default=1) == 0


def test_characterizer_rejects_extra_shared_symbols():
    G = game({"v0", "x", "f"}, {("v0", "x"), ("x", "f")}, {"v0": "#", "x": "z", "f": "#"},
             {"v0": "#", "x": "z", "f": "#"}, "v0", {"f": frozenset({1})})
    with pytest.raises(AlphabetOverlap):
        characterizer(G, G, AB)


def test_empty_language_game(fig1_game):
    E = empty_language_game("ab")
    assert validate_game(E) == []
    for p in plays_upto(E, 3):
        assert safe_decisions(E, p).safe == {0}
    seed = extract_seed(E)
    assert all(not ws for ws in covered_language_upto(seed, AB, 4).values())
    verdict = solvable_upto(extract_seed(union_games(fig1_game, E)), 4)
    assert not verdict.solvable_up_to and verdict.conflict_word == ("a", "b")


def test_lint_observation_coverage(fig1_game):
    assert lint_observation_coverage(fig1_game, "ab", 3) == []
    warnings = lint_observation_coverage(tiny_game(), "ab", 1)
    assert warnings == ["input word b is never observed by player 1"]


def test_random_games_are_valid():
    rng = random.Random(11)
    for _ in range(30):
        G = random_game(rng, max_states=8, symbols=("a", "b", "c"))
        assert validate_game(G) == []
        assert len(G.states) <= 8
        assert plays_upto(G, 6)
