"""Example documents shipped with the package.

``fig1.game`` is the hand-built game for a^n b^n, ``fig2a.domino`` the
domino system with the same frontier language, ``anbn.flower`` and
``fig3a.flower`` describe flower seeds, and ``flip.rel/.acc/.rej`` is a
seed whose two targets are swapped by its relation.
"""

from __future__ import annotations

from importlib import resources

NAMES = ("fig1.game", "fig2a.domino", "anbn.flower", "fig3a.flower", "flip.rel", "flip.acc", "flip.rej")


def path(name: str):
    """Filesystem path of a corpus file (usable while the package is installed from source)."""
    return resources.files(__name__) / name


def text(name: str) -> str:
    return (resources.files(__name__) / name).read_text(encoding="utf-8")


def load(name: str):
    """Parsed object of a corpus document."""
    from ..docformat import parse_document

    return parse_document(text(name))[1]


def flip_seed():
    """The seed whose relation swaps ``a`` and ``b``: unsolvable at length one."""
    from ..seeds import make_seed

    return make_seed(load("flip.rel"), load("flip.acc"), load("flip.rej"))
