import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cga import corpus
from cga.cfl import dyck_seed, dyck_spec
from cga.closure import (characterises_check_upto, closure_membership, closure_set, covered_language_upto,
                         neighbours, optimal_decision, reflection, solvable_upto, strategy_table, verify_chain)
from cga.core import (alphabet_of, empty_automaton, enumerate_pairs, enumerate_words, finite_automaton, identity,
                      star_automaton, transducer_accepts)
from cga.errors import CapExceeded, ConflictError, UnsolvableSeed
from cga.games import Play, connected_classes, observation, plays_upto, random_game, safe_decisions, verify_strategy
from cga.seeds import extract_seed, identity_seed, make_seed, synthesize_game

from strategies import transducers

AB = alphabet_of("ab")


def is_anbn(w):
    k = len(w) // 2
    return len(w) > 0 and len(w) % 2 == 0 and tuple(w) == ("a",) * k + ("b",) * k


def test_reflection_of_identity_is_identity():
    I = identity(AB)
    for n in range(5):
        assert enumerate_pairs(reflection(I), n) == enumerate_pairs(I, n)


@settings(max_examples=40, deadline=None)
@given(transducers())
def test_reflection_is_symmetric(R):
    tau = reflection(R)
    for n in range(4):
        pairs = enumerate_pairs(tau, n)
        assert pairs == {(y, x) for x, y in pairs}
        for x, _ in enumerate_pairs(R, n):
            assert (x, x) in pairs


def test_fig1_reflection_links_player2_indistinguishable_plays(fig1_game):
    seed = extract_seed(fig1_game)
    tau = reflection(seed.relation)
    for cls in connected_classes(fig1_game, 4):
        for p in cls:
            for q in cls:
                if observation(fig1_game, p, 2) == observation(fig1_game, q, 2):
                    assert transducer_accepts(tau, observation(fig1_game, p, 1), observation(fig1_game, q, 1))


def test_fig2a_membership_examples(fig2a_seed):
    res = closure_membership(fig2a_seed, "acc", tuple("aabb"))
    assert res.member and res.chain[0] == tuple("aabb")
    assert verify_chain(fig2a_seed, "acc", res.chain)
    assert not closure_membership(fig2a_seed, "acc", tuple("aaabb")).member
    box = ("□",) * 3
    assert closure_membership(fig2a_seed, "acc", box).chain == (box,)


def test_verify_chain_rejects_broken_chains(fig2a_seed):
    chain = closure_membership(fig2a_seed, "acc", tuple("aabb")).chain
    assert not verify_chain(fig2a_seed, "acc", chain[:-1])
    assert not verify_chain(fig2a_seed, "acc", [chain[0], chain[-1]])
    assert not verify_chain(fig2a_seed, "acc", [])


def test_closure_set_examples(fig2a_seed):
    sigma = alphabet_of("a")
    seed = identity_seed(finite_automaton(sigma, [()]))
    assert closure_set(seed, "acc", 0) == {()}
    assert closure_set(identity_seed(finite_automaton(sigma, [("a",)])), "acc", 0) == frozenset()
    assert {w for w in closure_set(fig2a_seed, "acc", 4) if set(w) <= {"a", "b"}} == {tuple("aabb")}
    L = finite_automaton(AB, [tuple("ab"), tuple("ba"), tuple("b")])
    ident = identity_seed(L)
    for n in range(4):
        assert closure_set(ident, "acc", n) == enumerate_words(L, n)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_closure_set_is_the_least_fixpoint(k):
    G = random_game(random.Random(k), symbols=("a", "b"))
    seed = extract_seed(G)
    for n in range(4):
        S = closure_set(seed, "acc", n)
        assert enumerate_words(seed.acc, n) <= S
        for w in S:
            assert set(neighbours(seed, w)) <= S
            res = closure_membership(seed, "acc", w)
            assert res.member and verify_chain(seed, "acc", res.chain)
            for u in neighbours(seed, w):
                assert w in neighbours(seed, u)


def test_flip_seed_is_unsolvable_at_length_one():
    flip = corpus.flip_seed()
    verdict = solvable_upto(flip, 2)
    word, acc_chain, rej_chain = verdict.conflict
    assert not verdict.solvable_up_to
    assert word == ("a",) and acc_chain == (("a",),) and rej_chain == (("a",), ("b",))
    with pytest.raises(ConflictError) as info:
        optimal_decision(flip, ("a",))
    assert info.value.word == ("a",)
    with pytest.raises(UnsolvableSeed):
        characterises_check_upto(flip, AB, 2)
    with pytest.raises(UnsolvableSeed):
        strategy_table(flip, 2)


def test_flip_relation_without_rejecting_words_is_solvable():
    flip = corpus.flip_seed()
    seed = make_seed(flip.relation, flip.acc, empty_automaton(AB))
    assert solvable_upto(seed, 6).solvable_up_to


def test_fig2a_covered_language(fig2a_seed):
    covered = covered_language_upto(fig2a_seed, AB, 6)
    assert {w for ws in covered.values() for w in ws} == {tuple("ab"), tuple("aabb"), tuple("aaabbb")}


def test_dyck_covered_language():
    spec = dyck_spec(1)
    covered = covered_language_upto(dyck_seed(spec), spec.letters, 4)
    assert {w for ws in covered.values() for w in ws} == {tuple("[]"), tuple("[[]]"), tuple("[][]")}


def test_identity_seed_covers_its_language():
    L = star_automaton(AB, "a")
    covered = covered_language_upto(identity_seed(L), AB, 5)
    assert covered == {n: frozenset({("a",) * n}) for n in range(1, 6)}
    nothing = covered_language_upto(identity_seed(empty_automaton(AB)), AB, 3)
    assert all(not ws for ws in nothing.values())


def test_characterises_examples(fig1_game):
    assert characterises_check_upto(extract_seed(fig1_game), AB, 4) is False
    assert characterises_check_upto(identity_seed(empty_automaton(AB)), alphabet_of([]), 3) is True


def test_optimal_decisions(fig2a_seed):
    assert optimal_decision(fig2a_seed, tuple("aabb")) == 1
    assert optimal_decision(fig2a_seed, tuple("aaabb")) == 0
    assert optimal_decision(fig2a_seed, tuple("aaabb"), default=1) == 1


def test_strategy_tables(fig2a_seed):
    table = strategy_table(fig2a_seed, 6)
    for w, d in table.entries.items():
        if set(w) <= {"a", "b"}:
            assert d == int(is_anbn(w))
    assert verify_strategy(synthesize_game(fig2a_seed), table, 6)
    L = finite_automaton(AB, [tuple("ab"), ("a",)])
    ident = identity_seed(L)
    t = strategy_table(ident, 3)
    assert t.entries and all(d == int(L.accepts(w)) for w, d in t.entries.items())


@pytest.mark.parametrize("k", range(8))
def test_strategy_table_round_trip_on_random_games(k):
    G = random_game(random.Random(100 + k), symbols=("a", "b"))
    seed = extract_seed(G)
    if not solvable_upto(seed, 4).solvable_up_to:
        with pytest.raises(UnsolvableSeed):
            strategy_table(seed, 4)
        return
    assert verify_strategy(G, strategy_table(seed, 4), 4)


def test_safe_decisions_agree_with_closures(fig1_game):
    rng = random.Random(21)
    games = [fig1_game] + [random_game(rng, symbols=("a", "b")) for _ in range(6)]
    for G in games:
        seed = extract_seed(G)
        for p in plays_upto(G, 4):
            u = observation(G, p, 1)
            safe = safe_decisions(G, p).safe
            assert (0 not in safe) == closure_membership(seed, "acc", u).member
            assert (1 not in safe) == closure_membership(seed, "rej", u).member


def test_closure_respects_the_cap(fig2a_seed):
    with pytest.raises(CapExceeded):
        closure_set(fig2a_seed, "acc", 6, cap=5)
    with pytest.raises(CapExceeded):
        closure_membership(fig2a_seed, "acc", tuple("aabb"), cap=2)


def test_non_observation_words_form_singleton_components(fig2a_seed):
    w = ("b", "a")
    assert neighbours(fig2a_seed, w) == []
    assert closure_membership(fig2a_seed, "acc", w).component_size == 1


def test_play_type_is_hashable_for_class_lookups():
    assert len({Play(("v0", "f")), Play(("v0", "f"))}) == 1
