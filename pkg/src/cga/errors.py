"""Exception hierarchy shared by every module."""


class CGAError(Exception):
    """Base class for all library errors."""

    code = "error"


class SymbolError(CGAError):
    code = "symbol-not-in-alphabet"


class LengthMismatch(CGAError):
    code = "length-mismatch"


class AlphabetMismatch(CGAError):
    code = "alphabet-mismatch"


class AlphabetOverlap(CGAError):
    code = "alphabet-overlap"


class CapExceeded(CGAError):
    """An exhaustive enumeration would exceed the configured cap."""

    code = "cap-exceeded"


class InvalidPlay(CGAError):
    code = "invalid-play"


class InvalidGame(CGAError):
    code = "invalid-game"


class InvalidDomino(CGAError):
    code = "invalid-domino"


class InvalidSpec(CGAError):
    code = "invalid-spec"


class NondisjointSeed(CGAError):
    code = "nondisjoint-seed-languages"


class PartialStrategy(CGAError):
    code = "partial-strategy"


class NotCNF(CGAError):
    code = "not-cnf"


class NotCodedDyck(CGAError):
    code = "not-a-coded-dyck-transducer"


class ConflictError(CGAError):
    """A word is forced to both decisions; the seed is unsolvable at its length.

    ``acc_chain`` and ``rej_chain`` lead from ``word`` into the accepting and
    rejecting seed languages respectively.
    """

    code = "conflict"

    def __init__(self, word, acc_chain=None, rej_chain=None):
        self.word = tuple(word)
        self.acc_chain = acc_chain
        self.rej_chain = rej_chain
        super().__init__(f"word {' '.join(self.word) or 'ε'} is forced to both decisions")


class UnsolvableSeed(CGAError):
    code = "unsolvable-seed"

    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(f"seed is unsolvable at length {len(verdict.conflict[0])}")


class DocumentError(CGAError):
    code = "parse-error"

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
