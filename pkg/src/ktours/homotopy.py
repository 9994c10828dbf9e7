"""Lifts of closed knight walks and the homotopy classes they determine.

A tour is stored as its lift: the sequence of cover vertices it visits,
starting at ``(0, 0)``.  The endpoint of the lift is ``h(0, 0)`` for a unique
deck element ``h``, and ``h`` is the homotopy class of the tour.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

from ktours.boards import (
    IDENTITY,
    BoardGraph,
    BoardSpec,
    CoverVertex,
    DeckElement,
    QuotientEdge,
    QuotientVertex,
    Surface,
    deck_apply,
    is_cover_vertex,
    lift_step,
    orbit_key,
    project,
    translation_between,
)

ORIGIN: CoverVertex = (0, 0)


class Kind(str, Enum):
    NULLHOMOTOPIC = "nullhomotopic"
    GENERATING = "generating"
    CYLINDRICAL = "cylindrical"
    MOBIUS = "mobius"
    OTHER = "other"


@dataclass(frozen=True)
class TourClass:
    """Homotopy type of a tour; ``deck`` is carried only by ``OTHER``."""

    kind: Kind
    deck: DeckElement | None = None

    def __str__(self):
        if self.kind is Kind.OTHER:
            return f"other{tuple(self.deck)}"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "TourClass":
        text = text.strip().lower()
        aliases = {"null": "nullhomotopic", "gen": "generating", "cyl": "cylindrical", "mob": "mobius"}
        text = aliases.get(text, text)
        if text.startswith("other"):
            k, j = (int(x) for x in text[len("other"):].strip("() ").split(","))
            return other(DeckElement(k, j))
        return cls(Kind(text))


NULLHOMOTOPIC = TourClass(Kind.NULLHOMOTOPIC)
GENERATING = TourClass(Kind.GENERATING)
CYLINDRICAL = TourClass(Kind.CYLINDRICAL)
MOBIUS = TourClass(Kind.MOBIUS)


def other(deck: DeckElement) -> TourClass:
    return TourClass(Kind.OTHER, DeckElement(*deck))


def valid_classes(surface: Surface) -> tuple[TourClass, ...]:
    if surface is Surface.MOBIUS:
        return (NULLHOMOTOPIC, GENERATING)
    if surface is Surface.KLEIN:
        return (NULLHOMOTOPIC, CYLINDRICAL, MOBIUS)
    return (NULLHOMOTOPIC,)


def class_targets(spec: BoardSpec, cls: TourClass) -> frozenset[DeckElement]:
    """Deck elements whose lift endpoints realise ``cls`` on ``spec``."""
    s = spec.surface
    if cls.kind is Kind.NULLHOMOTOPIC:
        return frozenset({IDENTITY})
    if cls.kind is Kind.OTHER:
        return frozenset({cls.deck})
    if cls.kind is Kind.GENERATING and s is Surface.MOBIUS:
        return frozenset({DeckElement(0, 1), DeckElement(0, -1)})
    if cls.kind is Kind.MOBIUS and s is Surface.KLEIN:
        return frozenset({DeckElement(0, 1), DeckElement(0, -1)})
    if cls.kind is Kind.CYLINDRICAL and s is Surface.KLEIN:
        return frozenset({DeckElement(1, 0), DeckElement(-1, 0)})
    raise ValueError(f"class {cls} does not apply to {s.value} boards")


def endpoint_of(spec: BoardSpec, g: DeckElement) -> CoverVertex:
    return deck_apply(spec, g, ORIGIN)


def deck_of_endpoint(spec: BoardSpec, endpoint: CoverVertex) -> DeckElement:
    """Invert :func:`endpoint_of`; raises if ``endpoint`` is not over ``(0, 0)``."""
    a, b = endpoint
    m, n = spec.m, spec.n
    bad = ValueError(f"endpoint {endpoint} does not lie over (0, 0) on {spec}")
    if b % n:
        raise bad
    j = b // n
    offset = a - (m - 1 if j % 2 else 0)
    if offset % m:
        raise bad
    g = DeckElement(offset // m, j)
    s = spec.surface
    if (s is Surface.RECTANGLE and g != IDENTITY) or (s is Surface.CYLINDER and g.j) or (
        s in (Surface.MOBIUS, Surface.STRIP) and g.k
    ):
        raise bad
    return g


def class_of_deck(spec: BoardSpec, g: DeckElement) -> TourClass:
    g = DeckElement(*g)
    if g == IDENTITY:
        return NULLHOMOTOPIC
    s = spec.surface
    if s is Surface.MOBIUS and g in ((0, 1), (0, -1)):
        return GENERATING
    if s is Surface.KLEIN:
        if g in ((1, 0), (-1, 0)):
            return CYLINDRICAL
        if g in ((0, 1), (0, -1)):
            return MOBIUS
    return other(g)


def classify(spec: BoardSpec, endpoint: CoverVertex) -> TourClass:
    """Homotopy class of a tour whose lift from ``(0, 0)`` ends at ``endpoint``."""
    return class_of_deck(spec, deck_of_endpoint(spec, endpoint))


class DirectedEdge(NamedTuple):
    """A board edge with a traversal direction relative to its key."""

    edge: QuotientEdge
    forward: bool

    def reversed(self) -> "DirectedEdge":
        return DirectedEdge(self.edge, not self.forward)


@dataclass(frozen=True)
class LiftedPath:
    """A walk in the cover of ``board``, stored vertex by vertex."""

    board: BoardSpec
    steps: tuple[CoverVertex, ...]

    def __post_init__(self):
        steps = tuple((int(a), int(b)) for a, b in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise ValueError("a lifted path has at least one vertex")
        for v in steps:
            if not is_cover_vertex(self.board, v):
                raise ValueError(f"{v} is not in the cover of {self.board}")
        for (a1, b1), (a2, b2) in zip(steps, steps[1:]):
            if {abs(a2 - a1), abs(b2 - b1)} != {1, 2}:
                raise ValueError(f"({a1}, {b1}) -> ({a2}, {b2}) is not a knight move")

    @property
    def start(self) -> CoverVertex:
        return self.steps[0]

    @property
    def end(self) -> CoverVertex:
        return self.steps[-1]

    def __len__(self):
        """Number of edges."""
        return len(self.steps) - 1

    def squares(self) -> list[QuotientVertex]:
        return [project(self.board, v) for v in self.steps]

    def is_closed(self) -> bool:
        return project(self.board, self.start) == project(self.board, self.end)

    def holonomy(self) -> DeckElement:
        """Deck element carrying the start of a closed walk to its end."""
        return translation_between(self.board, self.start, self.end)

    def translated(self, da: int = 0, db: int = 0) -> "LiftedPath":
        return LiftedPath(self.board, tuple((a + da, b + db) for a, b in self.steps))

    def transformed(self, g: DeckElement) -> "LiftedPath":
        return LiftedPath(self.board, tuple(deck_apply(self.board, g, v) for v in self.steps))

    def on(self, board: BoardSpec) -> "LiftedPath":
        """The same vertex sequence read in the cover of another board."""
        return LiftedPath(board, self.steps)


def project_walk(lift: LiftedPath) -> list[DirectedEdge]:
    """The board walk (as directed edges) underlying a lift."""
    spec = lift.board
    out = []
    for v, w in zip(lift.steps, lift.steps[1:]):
        key, forward = orbit_key(spec, v, w)
        out.append(DirectedEdge(QuotientEdge(key, spec), forward))
    return out


def lift_tour(graph: BoardGraph, walk: Sequence[DirectedEdge], start: CoverVertex = ORIGIN) -> LiftedPath:
    """Lift a closed board walk based at the square under ``start``."""
    spec = graph.spec
    v = start
    steps = [v]
    for i, (edge, forward) in enumerate(walk):
        if edge not in graph.edges:
            raise ValueError(f"step {i}: {edge.key} is not an edge of {spec}")
        tail = project(spec, edge.key[0] if forward else edge.key[1])
        if tail != project(spec, v):
            raise ValueError(f"step {i}: edge {edge.key} does not leave square {project(spec, v)}")
        v = lift_step(spec, v, edge, forward)
        steps.append(v)
    lift = LiftedPath(spec, tuple(steps))
    if not lift.is_closed():
        raise ValueError("walk is not closed")
    return lift


def reverse(lift: LiftedPath) -> LiftedPath:
    """The reversed closed walk, re-lifted to start where ``lift`` starts."""
    h = lift.holonomy()
    return LiftedPath(lift.board, lift.steps[::-1]).transformed(h.inverse())


def red_blue(v: CoverVertex) -> str:
    return "red" if (v[0] + v[1]) % 2 == 0 else "blue"


def green_yellow(spec: BoardSpec, v: CoverVertex) -> str:
    a, b = project(spec, v)
    return "green" if (a + b) % 2 == 0 else "yellow"


def obstruction(spec: BoardSpec, cls: TourClass) -> bool:
    """True when the parity colourings rule out tours of ``cls`` on ``spec``."""
    m, n, s = spec.m, spec.n, spec.surface
    if cls.kind is Kind.NULLHOMOTOPIC and s in (Surface.MOBIUS, Surface.KLEIN):
        return m % 2 == 1 and n % 2 == 1 and max(m, n) > 1
    if n % 2:
        return False
    if m % 2 == 0:
        return (s is Surface.MOBIUS and cls.kind is Kind.GENERATING) or (
            s is Surface.KLEIN and cls.kind is Kind.MOBIUS
        )
    return s is Surface.KLEIN and cls.kind is Kind.CYLINDRICAL
