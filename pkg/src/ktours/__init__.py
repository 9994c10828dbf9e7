"""Knight's tours on rectangles, cylinders, Mobius strips and Klein bottles."""

from ktours.boards import (
    BoardGraph,
    BoardSpec,
    DeckElement,
    QuotientEdge,
    Surface,
    build_graph,
    deck_apply,
    knight_moves,
    project,
)

__all__ = [
    "BoardGraph",
    "BoardSpec",
    "DeckElement",
    "QuotientEdge",
    "Surface",
    "build_graph",
    "deck_apply",
    "knight_moves",
    "project",
]
