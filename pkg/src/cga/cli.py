"""Command-line front end: ``cga <command> ...``.

Exit codes: 0 success or true, 1 false or absent, 2 usage or input error,
3 enumeration cap exceeded, 4 conflict or unsolvable seed.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import closure as cl
from .cfl import build_flower, dyck_seed, dyck_spec, flower_cfg
from .core import DEFAULT_CAP, alphabet_of, empty_automaton, format_word, parse_word
from .docformat import parse_document, render_document, render_word
from .dominoes import check_tiling, compile_domino_game, corridor_tiling, validate_domino
from .errors import CapExceeded, CGAError, ConflictError, DocumentError, UnsolvableSeed
from .games import validate_game, verify_strategy
from .grammar import cyk_membership
from .seeds import Seed, extract_seed, make_seed, synthesize_game

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAP, EXIT_CONFLICT = 0, 1, 2, 3, 4


class Output:
    """Collects result lines in either human or ``key=value`` form."""

    def __init__(self, fmt: str, stream=None):
        self.machine = fmt == "machine"
        self.stream = stream or sys.stdout

    def text(self, line: str) -> None:
        if not self.machine:
            print(line, file=self.stream)

    def kv(self, key: str, value) -> None:
        if self.machine:
            print(f"{key}={value}", file=self.stream)

    def both(self, line: str, key: str, value) -> None:
        self.text(line)
        self.kv(key, value)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, *kinds):
    kind, obj = parse_document(_read(path))
    if kinds and kind not in kinds:
        raise DocumentError(f"{path}: expected a {' or '.join(kinds)} document, got {kind}")
    return kind, obj


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_seed(arg: str) -> Seed:
    """Read a seed from a game document (file or stdin) or a ``.rel/.acc/.rej`` prefix."""
    prefix = arg[:-4] if arg.endswith(".rel") else arg
    as_prefix = arg.endswith(".rel") or not os.path.isfile(arg)
    if arg != "-" and as_prefix and os.path.isfile(prefix + ".rel"):
        _, R = _load(prefix + ".rel", "transducer")
        _, A = _load(prefix + ".acc", "automaton")
        B = _load(prefix + ".rej", "automaton")[1] if os.path.isfile(prefix + ".rej") else None
        return make_seed(R, A, B if B is not None else empty_automaton(R.alphabet))
    kind, obj = _load(arg)
    if kind == "game":
        return extract_seed(obj)
    raise DocumentError(f"{arg}: a seed is read from a game document or a .rel/.acc/.rej prefix")


def write_seed(prefix: str, seed: Seed) -> None:
    _write(prefix + ".rel", render_document(seed.relation))
    _write(prefix + ".acc", render_document(seed.acc))
    _write(prefix + ".rej", render_document(seed.rej))


def _word(text: str, seed: Seed):
    return parse_word(text, seed.alphabet)


def _chain_lines(out: Output, name: str, chain) -> None:
    for i, w in enumerate(chain or ()):
        out.kv(f"{name}.{i}", render_word(w))
    if chain:
        out.text(f"{name}: " + " -> ".join(format_word(w) for w in chain))


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args, out: Output) -> int:
    kind, obj = _load(args.file)
    if kind == "game":
        problems = [str(v) for v in validate_game(obj)]
    elif kind == "domino":
        problems = validate_domino(obj)
    else:
        problems = []
    for p in problems:
        out.both(p, "violation", p)
    out.both("valid" if not problems else f"{len(problems)} violation(s)", "valid", str(not problems).lower())
    return EXIT_OK if not problems else EXIT_FALSE


def cmd_extract_seed(args, out: Output) -> int:
    _, G = _load(args.game, "game")
    seed = extract_seed(G)
    write_seed(args.output, seed)
    out.both(f"wrote {args.output}.rel {args.output}.acc {args.output}.rej", "prefix", args.output)
    return EXIT_OK


def cmd_synthesize(args, out: Output) -> int:
    _, R = _load(args.relation, "transducer")
    _, A = _load(args.acc, "automaton")
    _, B = _load(args.rej, "automaton")
    _write(args.output, render_document(synthesize_game(make_seed(R, A, B))))
    return EXIT_OK


def cmd_compile_domino(args, out: Output) -> int:
    _, D = _load(args.domino, "domino")
    _write(args.output, render_document(compile_domino_game(D)))
    return EXIT_OK


def cmd_tile(args, out: Output) -> int:
    _, D = _load(args.domino, "domino")
    w = parse_word(args.word, alphabet_of(D.dominoes))
    tiling = corridor_tiling(D, w, args.max_height)
    if tiling is None:
        out.both("none", "tiling", "none")
        return EXIT_FALSE
    problems = check_tiling(D, tiling, w)
    if problems:
        raise CGAError("internal tiling check failed: " + "; ".join(problems))
    out.text(tiling.grid())
    out.kv("height", tiling.height)
    out.kv("width", tiling.width)
    for (x, y), d in sorted(tiling.cells.items(), key=lambda c: (c[0][1], c[0][0])):
        out.kv("cell", f"{x},{y},{d}")
    return EXIT_OK


def cmd_closure(args, out: Output) -> int:
    seed = load_seed(args.seed)
    w = _word(args.word, seed)
    res = cl.closure_membership(seed, args.target, w, args.cap)
    out.both(f"member: {str(res.member).lower()}", "member", str(res.member).lower())
    if res.member:
        ok = cl.verify_chain(seed, args.target, res.chain)
        out.both(f"chain verified: {str(ok).lower()}", "chain-verified", str(ok).lower())
        _chain_lines(out, "chain", res.chain)
    return EXIT_OK if res.member else EXIT_FALSE


def cmd_covered(args, out: Output) -> int:
    seed = load_seed(args.seed)
    sigma = alphabet_of(parse_word(args.sigma))
    covered = cl.covered_language_upto(seed, sigma, args.max_len, args.cap)
    for n, words in covered.items():
        ws = sorted(words, key=sigma.sort_key)
        out.text(f"{n}: " + " ".join(format_word(w) for w in ws))
        out.kv(f"covered.{n}", " ".join(render_word(w) for w in ws))
    return EXIT_OK


def _report_conflict(out: Output, word, acc_chain, rej_chain) -> None:
    out.kv("word", render_word(word))
    _chain_lines(out, "acc-chain", acc_chain)
    _chain_lines(out, "rej-chain", rej_chain)


def cmd_solvable(args, out: Output) -> int:
    seed = load_seed(args.seed)
    verdict = cl.solvable_upto(seed, args.max_len, args.cap)
    if verdict.solvable_up_to:
        out.both(f"solvable up to length {args.max_len}", "solvable", "true")
        return EXIT_OK
    word, acc, rej = verdict.conflict
    out.both(f"unsolvable at length {len(word)}, word {format_word(word)}", "solvable", "false")
    out.kv("length", len(word))
    _report_conflict(out, word, acc, rej)
    return EXIT_CONFLICT


def cmd_decide(args, out: Output) -> int:
    seed = load_seed(args.seed)
    w = _word(args.word, seed)
    try:
        d = cl.optimal_decision(seed, w, args.default_decision, args.cap)
    except ConflictError as e:
        out.both(f"conflict at {format_word(e.word)}", "decision", "conflict")
        _report_conflict(out, e.word, e.acc_chain, e.rej_chain)
        return EXIT_CONFLICT
    out.both(str(d), "decision", d)
    return EXIT_OK


def cmd_strategy(args, out: Output) -> int:
    seed = load_seed(args.seed)
    table = cl.strategy_table(seed, args.max_len, args.default_decision, args.cap)
    _write(args.output, render_document(table))
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    _, G = _load(args.game, "game")
    _, table = _load(args.table, "strategy-table")
    res = verify_strategy(G, table, args.max_len, args.cap)
    if res:
        out.both("ok", "ok", "true")
        return EXIT_OK
    out.both(f"counterexample: {res.counterexample} ({res.reason})", "ok", "false")
    out.kv("play", " ".join(str(s) for s in res.counterexample.states))
    out.kv("reason", res.reason)
    return EXIT_FALSE


def cmd_build_dyck(args, out: Output) -> int:
    neutrals = parse_word(args.neutrals) if args.neutrals else ()
    write_seed(args.output, dyck_seed(dyck_spec(args.pairs, neutrals)))
    out.both(f"wrote {args.output}.rel {args.output}.acc {args.output}.rej", "prefix", args.output)
    return EXIT_OK


def cmd_build_flower(args, out: Output) -> int:
    _, fs = _load(args.flower, "flower")
    write_seed(args.output, build_flower(fs))
    out.both(f"wrote {args.output}.rel {args.output}.acc {args.output}.rej", "prefix", args.output)
    return EXIT_OK


def cmd_flower_cfg(args, out: Output) -> int:
    _, fs = _load(args.flower, "flower")
    _write(args.output, render_document(flower_cfg(fs)))
    return EXIT_OK


def cmd_cfg_member(args, out: Output) -> int:
    _, G = _load(args.grammar, "grammar")
    w = parse_word(args.word, alphabet_of(sorted(G.terminals)) if G.terminals else None)
    member = cyk_membership(G, w)
    out.both(str(member).lower(), "member", str(member).lower())
    return EXIT_OK if member else EXIT_FALSE


# ---------------------------------------------------------------------------


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--cap", type=int, default=d(DEFAULT_CAP), help="enumeration cap")
    parser.add_argument("--default-decision", type=int, choices=(0, 1), default=d(0),
                        help="decision for words forced neither way")
    parser.add_argument("--format", choices=("text", "machine"), default=d("text"), help="output style")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cga", description="Consensus game acceptor toolkit")
    _globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    p = add("validate", cmd_validate, "check a document's invariants")
    p.add_argument("file")
    p = add("extract-seed", cmd_extract_seed, "write a game's seed as three documents")
    p.add_argument("game")
    p.add_argument("-o", "--output", required=True, help="seed prefix")
    p = add("synthesize", cmd_synthesize, "build a game from a seed")
    p.add_argument("relation")
    p.add_argument("acc")
    p.add_argument("rej")
    p.add_argument("-o", "--output")
    p = add("compile-domino", cmd_compile_domino, "compile a domino system into a game")
    p.add_argument("domino")
    p.add_argument("-o", "--output")
    p = add("tile", cmd_tile, "find a corridor tiling for a word")
    p.add_argument("domino")
    p.add_argument("word")
    p.add_argument("--max-height", type=int)

    def seed_arg(p):
        p.add_argument("seed", nargs="?", default="-", help="game document, seed prefix, or - for stdin")

    p = add("closure", cmd_closure, "closure membership with a witnessing chain")
    seed_arg(p)
    p.add_argument("--word", required=True)
    p.add_argument("--target", choices=("acc", "rej"), default="acc")
    p = add("covered", cmd_covered, "covered language by length")
    seed_arg(p)
    p.add_argument("--sigma", required=True)
    p.add_argument("--max-len", type=int, required=True)
    p = add("solvable", cmd_solvable, "bounded solvability check")
    seed_arg(p)
    p.add_argument("--max-len", type=int, required=True)
    p = add("decide", cmd_decide, "optimal decision on a word")
    seed_arg(p)
    p.add_argument("--word", required=True)
    p = add("strategy", cmd_strategy, "tabulate the optimal strategy")
    seed_arg(p)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("-o", "--output")
    p = add("verify", cmd_verify, "verify a strategy table on a game")
    p.add_argument("game")
    p.add_argument("table")
    p.add_argument("--max-len", type=int, required=True)
    p = add("build-dyck", cmd_build_dyck, "write the Dyck seed")
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--neutrals")
    p.add_argument("-o", "--output", required=True)
    p = add("build-flower", cmd_build_flower, "write the flower seed of a flower description")
    p.add_argument("flower")
    p.add_argument("-o", "--output", required=True)
    p = add("flower-cfg", cmd_flower_cfg, "grammar for the language a flower covers")
    p.add_argument("flower")
    p.add_argument("-o", "--output")
    p = add("cfg-member", cmd_cfg_member, "CYK membership")
    p.add_argument("grammar")
    p.add_argument("--word", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    try:
        return args.func(args, out)
    except CapExceeded as e:
        return _fail(out, e, EXIT_CAP)
    except UnsolvableSeed as e:
        return _fail(out, e, EXIT_CONFLICT)
    except ConflictError as e:
        return _fail(out, e, EXIT_CONFLICT)
    except CGAError as e:
        return _fail(out, e, EXIT_USAGE)
    except OSError as e:
        out.kv("error", "io-error")
        out.kv("message", str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def _fail(out: Output, e: CGAError, code: int) -> int:
    out.kv("error", e.code)
    out.kv("message", str(e))
    print(f"error: {e}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
