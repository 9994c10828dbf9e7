"""Knight-move graphs on the rectangle and its quotient surfaces.

Squares are integer pairs ``(a, b)`` (column, row).  Every compact board is
the quotient of a cover lattice by a deck group:

=========  =====================================  ==================
surface    cover                                  deck group
=========  =====================================  ==================
rectangle  the m x n rectangle itself             trivial
cylinder   horizontal strip ``0 <= b < n``        <t>
mobius     vertical strip ``0 <= a < m``          <g>
klein      the whole plane                        <t, g>
=========  =====================================  ==================

with ``t(a, b) = (a + m, b)`` and ``g(a, b) = (m - 1 - a, b + n)``.  The
column flip ``a -> m - 1 - a`` is the glide read off on square centres
``(a + .5, b + .5)``.

A board edge is the deck orbit of a cover edge.  It is identified by a
canonical key, so parallel edges and loops on small boards stay distinct.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, NamedTuple

CoverVertex = tuple[int, int]
QuotientVertex = tuple[int, int]
EdgeKey = tuple[CoverVertex, CoverVertex]


class Surface(str, Enum):
    RECTANGLE = "rectangle"
    CYLINDER = "cylinder"
    MOBIUS = "mobius"
    KLEIN = "klein"
    STRIP = "strip"
    PLANE = "plane"


COMPACT = (Surface.RECTANGLE, Surface.CYLINDER, Surface.MOBIUS, Surface.KLEIN)


@dataclass(frozen=True)
class BoardSpec:
    """A surface together with its dimensions ``m`` (width) and ``n`` (height).

    ``n`` is ignored by the plane; the strip only needs ``m`` for adjacency but
    keeps ``n`` so the glide can be applied to strip vertices.
    """

    surface: Surface
    m: int
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "surface", Surface(self.surface))
        if int(self.m) != self.m or int(self.n) != self.n:
            raise ValueError(f"board dimensions must be integers, got {self.m}x{self.n}")
        if self.m < 1 or self.n < 1:
            raise ValueError(f"board dimensions must be positive, got {self.m}x{self.n}")

    @property
    def compact(self) -> bool:
        return self.surface in COMPACT

    @property
    def size(self) -> int:
        if not self.compact:
            raise ValueError(f"{self.surface.value} is infinite")
        return self.m * self.n

    def __str__(self):
        return f"{self.surface.value} {self.m}x{self.n}"


class DeckElement(NamedTuple):
    """The deck transformation ``t**k * g**j`` in normal form.

    ``g t = t^-1 g``, so ``(k1, j1) * (k2, j2) = (k1 + (-1)**j1 * k2, j1 + j2)``.
    """

    k: int = 0
    j: int = 0

    def __mul__(self, other: "DeckElement") -> "DeckElement":  # type: ignore[override]
        sign = -1 if self.j % 2 else 1
        return DeckElement(self.k + sign * other.k, self.j + other.j)

    def inverse(self) -> "DeckElement":
        sign = -1 if self.j % 2 else 1
        return DeckElement(-sign * self.k, -self.j)


IDENTITY = DeckElement(0, 0)


def knight_moves() -> tuple[tuple[int, int], ...]:
    """The eight knight moves, sorted lexicographically."""
    return tuple(sorted((c, d) for c in (-2, -1, 1, 2) for d in (-2, -1, 1, 2) if abs(c) != abs(d)))


MOVES = knight_moves()


def is_cover_vertex(spec: BoardSpec, v: CoverVertex) -> bool:
    """Whether ``v`` is a vertex of the cover lattice of ``spec``."""
    a, b = v
    s = spec.surface
    if s is Surface.RECTANGLE:
        return 0 <= a < spec.m and 0 <= b < spec.n
    if s is Surface.CYLINDER:
        return 0 <= b < spec.n
    if s in (Surface.MOBIUS, Surface.STRIP):
        return 0 <= a < spec.m
    return True


def _check_cover(spec: BoardSpec, v: CoverVertex) -> None:
    if not is_cover_vertex(spec, v):
        raise ValueError(f"{v} is not a vertex of the cover of {spec}")


def cover_neighbors(spec: BoardSpec, v: CoverVertex) -> list[CoverVertex]:
    """Knight neighbours of ``v`` in the cover lattice (simple graph).

    Works for the strip and plane, and for the cover of any compact board.
    """
    _check_cover(spec, v)
    a, b = v
    return [(a + c, b + d) for c, d in MOVES if is_cover_vertex(spec, (a + c, b + d))]


def _check_deck(spec: BoardSpec, g: DeckElement) -> None:
    s = spec.surface
    if s is Surface.RECTANGLE and g != IDENTITY:
        raise ValueError("the rectangle has a trivial deck group")
    if s is Surface.CYLINDER and g.j != 0:
        raise ValueError("the cylinder deck group has no glide")
    if s in (Surface.MOBIUS, Surface.STRIP) and g.k != 0:
        raise ValueError("the Mobius deck group is generated by the glide alone")


def deck_apply(spec: BoardSpec, g: DeckElement, v: CoverVertex) -> CoverVertex:
    """Apply ``t**k g**j`` to ``v`` (glide power first, then translation)."""
    _check_deck(spec, g)
    k, j = g
    a, b = v
    if j % 2:
        a = spec.m - 1 - a
    return (a + k * spec.m, b + j * spec.n)


def to_fundamental(spec: BoardSpec, v: CoverVertex) -> tuple[DeckElement, QuotientVertex]:
    """Return ``(h, q)`` with ``h`` the deck element taking ``v`` to ``q``, the
    representative of ``v`` in the fundamental domain."""
    _check_cover(spec, v)
    m, n = spec.m, spec.n
    a, b = v
    s = spec.surface
    if s is Surface.RECTANGLE:
        return IDENTITY, (a, b)
    if s is Surface.CYLINDER:
        p = a // m
        return DeckElement(-p, 0), (a - p * m, b)
    r = b // n
    if r % 2:
        a = m - 1 - a
    b -= r * n
    if s in (Surface.MOBIUS, Surface.STRIP):
        return DeckElement(0, -r), (a, b)
    p = a // m
    return DeckElement(-p, -r), (a - p * m, b)


def project(spec: BoardSpec, v: CoverVertex) -> QuotientVertex:
    return to_fundamental(spec, v)[1]


def translation_between(spec: BoardSpec, u: CoverVertex, w: CoverVertex) -> DeckElement:
    """The deck element ``h`` with ``h(u) == w``; both must lie over one square."""
    hu, qu = to_fundamental(spec, u)
    hw, qw = to_fundamental(spec, w)
    if qu != qw:
        raise ValueError(f"{u} and {w} lie over different squares {qu} and {qw}")
    return hw.inverse() * hu


def orbit_key(spec: BoardSpec, u: CoverVertex, w: CoverVertex) -> tuple[EdgeKey, bool]:
    """Canonical key of the orbit of the cover edge ``{u, w}``.

    The second value is True when ``(u, w)`` lies in the orbit of the ordered
    pair ``key``; False when it lies in the orbit of the reversed pair.
    """
    best = None
    for h in (to_fundamental(spec, u)[0], to_fundamental(spec, w)[0]):
        x, y = deck_apply(spec, h, u), deck_apply(spec, h, w)
        pair = (x, y) if x < y else (y, x)
        if best is None or pair < best[0]:
            best = (pair, x == pair[0])
    return best


@dataclass(frozen=True)
class QuotientEdge:
    """A board edge; equality is equality of canonical keys."""

    key: EdgeKey
    board: BoardSpec | None = field(default=None, compare=False)

    @property
    def endpoints(self) -> tuple[QuotientVertex, QuotientVertex]:
        spec = self.board
        return project(spec, self.key[0]), project(spec, self.key[1])

    @property
    def is_loop(self) -> bool:
        u, w = self.endpoints
        return u == w


class Slot(NamedTuple):
    """One end of an edge as seen from a fundamental-domain square.

    Stepping from a cover vertex ``h(q)`` along this slot lands on
    ``(h * deck)(target)``.
    """

    move: tuple[int, int]
    target: QuotientVertex
    deck: DeckElement
    edge: QuotientEdge
    forward: bool


@dataclass(frozen=True)
class BoardGraph:
    spec: BoardSpec
    vertices: tuple[QuotientVertex, ...]
    edges: frozenset[QuotientEdge]
    incidence: dict[QuotientVertex, tuple[Slot, ...]] = field(compare=False)

    def degree(self, q: QuotientVertex) -> int:
        return len(self.incidence[q])

    def edge_multiplicity(self, q: QuotientVertex, r: QuotientVertex) -> int:
        """Number of edges between ``q`` and ``r`` (a loop counts once)."""
        slots = [s for s in self.incidence[q] if s.target == r]
        return len(slots) // 2 if q == r else len(slots)

    def __len__(self):
        return len(self.vertices)


def fundamental_domain(spec: BoardSpec) -> Iterator[QuotientVertex]:
    for b in range(spec.n):
        for a in range(spec.m):
            yield (a, b)


def build_graph(spec: BoardSpec) -> BoardGraph:
    """The knight multigraph (or pseudograph) of a compact board."""
    if not spec.compact:
        raise ValueError(f"cannot materialise the infinite graph of {spec.surface.value}")
    vertices = tuple(fundamental_domain(spec))
    incidence = {}
    edges = set()
    for q in vertices:
        slots = []
        for c, d in MOVES:
            w = (q[0] + c, q[1] + d)
            if not is_cover_vertex(spec, w):
                continue
            h, target = to_fundamental(spec, w)
            key, forward = orbit_key(spec, q, w)
            edge = QuotientEdge(key, spec)
            edges.add(edge)
            slots.append(Slot((c, d), target, h.inverse(), edge, forward))
        incidence[q] = tuple(slots)
    return BoardGraph(spec, vertices, frozenset(edges), incidence)


def edge_lifts_at(spec: BoardSpec, v: CoverVertex, e: QuotientEdge) -> list[CoverVertex]:
    """Every cover neighbour ``w`` of ``v`` such that ``{v, w}`` lies over ``e``."""
    q = project(spec, v)
    if q not in project_endpoints(spec, e):
        raise ValueError(f"square {q} is not an endpoint of edge {e.key}")
    return [w for w in cover_neighbors(spec, v) if orbit_key(spec, v, w)[0] == e.key]


def project_endpoints(spec: BoardSpec, e: QuotientEdge) -> tuple[QuotientVertex, QuotientVertex]:
    return project(spec, e.key[0]), project(spec, e.key[1])


def lift_step(spec: BoardSpec, v: CoverVertex, e: QuotientEdge, forward: bool) -> CoverVertex:
    """The unique lift at ``v`` of the directed edge ``e``.

    ``forward`` traverses ``e`` in the orientation of its key.
    """
    tail, head = e.key if forward else (e.key[1], e.key[0])
    return deck_apply(spec, translation_between(spec, tail, v), head)
