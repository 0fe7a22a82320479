"""Consensus game acceptors: games, seeds, reflection closures, dominoes and flowers."""

from .core import (Alphabet, Homomorphism, SynchronousTransducer, WordAutomaton, alphabet_of, automaton, compose,
                   determinize, empty_automaton, enumerate_pairs, enumerate_words, identity, intersect, invert,
                   is_empty, star_automaton, transduce, transducer, transducer_accepts, union)
from .errors import CGAError
from .games import (GameGraph, Play, StrategyTable, connected_classes, characterizer, empty_language_game,
                    enumerate_plays, game, indistinguishable, invert_game, observation, safe_decisions,
                    union_games, validate_game, verify_strategy)
from .seeds import Seed, extract_seed, identity_seed, make_seed, synthesize_game
from .closure import (characterises_check_upto, closure_membership, closure_set, covered_language_upto, neighbours,
                      optimal_decision, reflection, solvable_upto, strategy_table, verify_chain)
from .dominoes import DominoSystem, Tiling, check_tiling, compile_domino_game, corridor_tiling, validate_domino
from .grammar import Grammar, cyk_membership, dyck_grammar
from .cfl import (DyckSpec, FlowerSpec, build_flower, dyck_membership, dyck_seed, dyck_spec, flower_cfg,
                  is_flower, is_well_nested, make_flower_spec)
from .docformat import canonical, parse_document, render_document

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
