"""Widening Mobius-strip tours by four columns, plus explicit splices.

A tour on ``M(m-4, n)`` sits inside ``M(m, n)`` as the inner graph (columns
``2 .. m-3``) after shifting two columns to the right.  The two outermost
columns on each side form the outer graph; in the strip it is eight disjoint
zig-zag paths, on the board it is a union of cycles of length ``N``.  Replacing
suitable edges of the tour by detours through the outer cycles yields a tour
of the wide board with the same lift endpoints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from ktours.boards import BoardSpec, CoverVertex, Surface, build_graph, deck_apply, project, translation_between
from ktours.homotopy import LiftedPath

EMBED_SHIFT = 2


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


class Direction(str, Enum):
    UP = "up"
    DOWN = "down"


def _parity(x: int) -> Parity:
    return Parity.EVEN if x % 2 == 0 else Parity.ODD


def _check_strip(spec: BoardSpec, min_m: int = 7) -> None:
    if spec.surface is not Surface.MOBIUS:
        raise ValueError(f"widening works on Mobius boards, not {spec.surface.value}")
    if spec.m < min_m:
        raise ValueError(f"the outer graph needs m >= {min_m}, got m = {spec.m}")


def cycle_length(n: int) -> int:
    """Length of each cycle of the board's outer graph."""
    return 2 * n if n % 2 else n


@dataclass(frozen=True)
class OuterComponent:
    """One of the eight zig-zag paths of the outer graph in the strip.

    ``index`` is ``(b - 2a') mod 4`` where ``a'`` is the distance of the column
    from its own edge of the strip; its parity is the row parity.
    """

    side: Side
    index: int
    board: BoardSpec

    @property
    def parity(self) -> Parity:
        return _parity(self.index)

    @property
    def N(self) -> int:
        return cycle_length(self.board.n)

    def glide(self) -> "OuterComponent":
        other = Side.RIGHT if self.side is Side.LEFT else Side.LEFT
        return OuterComponent(other, (self.index + self.board.n) % 4, self.board)

    def board_cycle(self) -> tuple[Side, int]:
        """Label of the board cycle this path covers (least member of its orbit)."""
        orbit, c = [], self
        while (c.side, c.index) not in orbit:
            orbit.append((c.side, c.index))
            c = c.glide()
        return min(orbit)


def is_outer(spec: BoardSpec, v: CoverVertex) -> bool:
    return v[0] in (0, 1, spec.m - 2, spec.m - 1)


def outer_component(spec: BoardSpec, v: CoverVertex) -> OuterComponent:
    a, b = v
    if a in (0, 1):
        return OuterComponent(Side.LEFT, (b - 2 * a) % 4, spec)
    if a in (spec.m - 2, spec.m - 1):
        return OuterComponent(Side.RIGHT, (b - 2 * (spec.m - 1 - a)) % 4, spec)
    raise ValueError(f"{v} is not an outer vertex of {spec}")


def outer_neighbors(spec: BoardSpec, v: CoverVertex) -> list[CoverVertex]:
    """The two neighbours of ``v`` along its outer path."""
    a, b = v
    partner = {0: 1, 1: 0, spec.m - 2: spec.m - 1, spec.m - 1: spec.m - 2}[a]
    return [(partner, b - 2), (partner, b + 2)]


@dataclass(frozen=True)
class OuterDecomposition:
    board: BoardSpec
    inner_columns: range
    components: tuple[OuterComponent, ...]
    board_cycles: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def N(self) -> int:
        return cycle_length(self.board.n)


def outer_decompose(spec: BoardSpec) -> OuterDecomposition:
    """Inner columns, the eight strip components and the board's outer cycles.

    The board cycles are read off the board graph itself (vertices in the
    outer columns, edges whose lifts stay in the outer graph), so their count
    and lengths are an independent check of :func:`cycle_length`.
    """
    _check_strip(spec)
    comps = tuple(OuterComponent(s, c, spec) for s in Side for c in range(4))
    graph = build_graph(spec)
    outer = [q for q in graph.vertices if is_outer(spec, q)]
    adj: dict = {q: [] for q in outer}
    for q in outer:
        for s in graph.incidence[q]:
            w = (q[0] + s.move[0], q[1] + s.move[1])
            if is_outer(spec, w) and abs(s.move[0]) == 1:
                adj[q].append(s.target)
    seen, cycles = set(), []
    for q in outer:
        if q in seen:
            continue
        order, stack = [], [q]
        seen.add(q)
        while stack:
            x = stack.pop()
            order.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        cycles.append(tuple(sorted(order)))
    for q in outer:
        if len(adj[q]) != 2:
            raise AssertionError(f"outer vertex {q} has degree {len(adj[q])}")
    return OuterDecomposition(spec, range(2, spec.m - 2), comps, tuple(cycles))


@dataclass(frozen=True)
class BoundaryEdge:
    """A traversed tour edge between the two inner columns next to one side."""

    side: Side
    index: int  # position of the edge in the lift
    tail: CoverVertex
    head: CoverVertex

    @property
    def parity(self) -> Parity:
        return _parity(self.tail[1])

    @property
    def direction(self) -> Direction:
        return Direction.UP if self.head[1] > self.tail[1] else Direction.DOWN

    @property
    def group(self) -> int:
        """0 for left-even/right-odd, 1 for left-odd/right-even."""
        return (self.tail[1] + (self.side is Side.RIGHT)) % 2


def boundary_edge_at(spec: BoardSpec, lift: LiftedPath, i: int) -> BoundaryEdge | None:
    u, w = lift.steps[i], lift.steps[i + 1]
    cols = {u[0], w[0]}
    if cols == {2, 3}:
        return BoundaryEdge(Side.LEFT, i, u, w)
    if cols == {spec.m - 4, spec.m - 3}:
        return BoundaryEdge(Side.RIGHT, i, u, w)
    return None


@dataclass(frozen=True)
class ReplacementPath:
    edge: BoundaryEdge
    outer_tail: CoverVertex  # X: joined to the head of the edge
    outer_head: CoverVertex  # Y: joined to the tail of the edge
    steps: tuple[CoverVertex, ...]
    board: BoardSpec

    @property
    def shift(self) -> int:
        """Vertical offset applied to everything after the replaced edge."""
        return self.steps[-1][1] - self.edge.head[1]

    @property
    def cycle(self) -> tuple[Side, int]:
        return outer_component(self.board, self.outer_tail).board_cycle()


def _adjacent(u: CoverVertex, w: CoverVertex) -> bool:
    return {abs(u[0] - w[0]), abs(u[1] - w[1])} == {1, 2}


def replacement_paths(spec: BoardSpec, edge: BoundaryEdge) -> list[ReplacementPath]:
    """Both replacement paths for ``edge`` on the wide board ``spec``.

    Each comes from one of the two 4-cycles ``tail -> head -> X -> Y -> tail``
    with ``X - Y`` an outer edge.
    """
    _check_strip(spec)
    N = cycle_length(spec.n)
    vi, vt = edge.tail, edge.head
    out = []
    near = (0, 1) if edge.side is Side.LEFT else (spec.m - 2, spec.m - 1)
    cands = sorted(
        (a, b) for a in near for b in range(vt[1] - 2, vt[1] + 3) if _adjacent((a, b), vt)
    )
    for X in cands:
        for Y in outer_neighbors(spec, X):
            if not _adjacent(Y, vi):
                continue
            step = Y[1] - X[1]  # +-2 along the zig-zag
            walk = [Y]
            for _ in range(N - 1):
                a, b = walk[-1]
                walk.append((X[0] if a == Y[0] else Y[0], b + step))
            vi2 = walk[-1]
            if vi2 != (X[0], X[1] + step * N):
                raise AssertionError("outer walk did not return over its start")
            vt2 = (vt[0], vt[1] + step * N)
            if not _adjacent(vi2, vt2):
                raise AssertionError(f"{vi2} and {vt2} are not a knight move apart")
            if (step > 0) == (edge.direction is Direction.UP):
                raise AssertionError("replacement shift must oppose the edge direction")
            out.append(ReplacementPath(edge, X, Y, (vi, *walk, vt2), spec))
    if len(out) != 2:
        raise AssertionError(f"edge {vi}->{vt} lies on {len(out)} outer 4-cycles, expected 2")
    return out


@dataclass(frozen=True)
class ExtendingCollection:
    """Boundary edges of an embedded tour together with chosen replacements."""

    board: BoardSpec  # the wide board
    paths: tuple[ReplacementPath, ...]

    @property
    def edges(self) -> tuple[BoundaryEdge, ...]:
        return tuple(p.edge for p in self.paths)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.edges)


def widened_board(spec: BoardSpec) -> BoardSpec:
    if spec.surface is not Surface.MOBIUS:
        raise ValueError("only Mobius tours can be widened")
    return BoardSpec(Surface.MOBIUS, spec.m + 4, spec.n)


def embed(lift: LiftedPath) -> LiftedPath:
    """The lift as a path in the inner graph of the board four columns wider."""
    return LiftedPath(widened_board(lift.board), tuple((a + EMBED_SHIFT, b) for a, b in lift.steps))


def _composition_ok(n: int, edges: Sequence[BoundaryEdge]) -> bool:
    ups = sum(e.direction is Direction.UP for e in edges)
    if 2 * ups != len(edges):
        return False
    if n % 2 == 0:
        even = sum(e.parity is Parity.EVEN for e in edges)
        return len(edges) == 4 and even == 2
    return len(edges) == 2 and {e.group for e in edges} == {0, 1}


def _choose(spec: BoardSpec, edges: Sequence[BoundaryEdge]) -> ExtendingCollection | None:
    options = [replacement_paths(spec, e) for e in edges]
    cycles_needed = 4 if spec.n % 2 == 0 else 2
    for pick in itertools.product((0, 1), repeat=len(edges)):
        paths = tuple(opts[p] for opts, p in zip(options, pick))
        if len({p.cycle for p in paths}) == cycles_needed:
            return ExtendingCollection(spec, paths)
    return None


def collection_from_indices(embedded: LiftedPath, indices: Sequence[int]) -> ExtendingCollection | None:
    """Validate the edges at ``indices`` of an embedded lift as an extending
    collection and choose replacement paths for them."""
    spec = embedded.board
    edges = [boundary_edge_at(spec, embedded, i) for i in sorted(indices)]
    if any(e is None for e in edges) or not _composition_ok(spec.n, edges):
        return None
    return _choose(spec, edges)


def find_extending(lift: LiftedPath) -> ExtendingCollection | None:
    """First extending collection (in traversal order) of the lift embedded in
    the board four columns wider, or None if the tour is not extendable."""
    wide = embed(lift)
    spec = wide.board
    edges = [e for i in range(len(wide)) if (e := boundary_edge_at(spec, wide, i)) is not None]
    size = 4 if spec.n % 2 == 0 else 2
    for combo in itertools.combinations(edges, size):
        if _composition_ok(spec.n, combo):
            coll = _choose(spec, combo)
            if coll is not None:
                return coll
    return None


def widen_with_induced(lift: LiftedPath, coll: ExtendingCollection | None = None) -> tuple[LiftedPath, tuple[int, ...]]:
    """Widen ``lift`` and also return the edge indices (in the output) of the
    collection it induces: the second edge of every inserted detour."""
    if coll is None:
        coll = find_extending(lift)
        if coll is None:
            raise ValueError(f"tour on {lift.board} has no extending collection")
    wide = embed(lift)
    if coll.board != wide.board:
        raise ValueError("collection belongs to a different board")
    steps = wide.steps
    for p in coll.paths:
        if (steps[p.edge.index], steps[p.edge.index + 1]) != (p.edge.tail, p.edge.head):
            raise ValueError(f"collection edge {p.edge.index} is not traversed by the lift")
    if not _composition_ok(wide.board.n, coll.edges) or len({p.cycle for p in coll.paths}) != len(coll.paths):
        raise ValueError("not an extending collection")
    out: list[CoverVertex] = list(steps[: coll.paths[0].edge.index + 1]) if coll.paths else list(steps)
    induced = []
    shift = 0
    paths = sorted(coll.paths, key=lambda p: p.edge.index)
    for i, p in enumerate(paths):
        induced.append(len(out))  # out[-1] is the tail; the detour's second edge starts one later
        out.extend((a, b + shift) for a, b in p.steps[1:])
        shift += p.shift
        stop = paths[i + 1].edge.index + 1 if i + 1 < len(paths) else len(steps)
        out.extend((a, b + shift) for a, b in steps[p.edge.index + 2 : stop])
    if shift:
        raise AssertionError("unbalanced collection shifted the endpoint")
    result = LiftedPath(wide.board, tuple(out))
    if result.end != wide.end or result.start != wide.start:
        raise AssertionError("widening moved the lift endpoints")
    return result, tuple(induced)


def widen(lift: LiftedPath, coll: ExtendingCollection | None = None) -> LiftedPath:
    """A tour on the board four columns wider with the same (shifted) endpoints."""
    return widen_with_induced(lift, coll)[0]


def reroot(lift: LiftedPath) -> LiftedPath:
    """Re-base a closed tour lift so it starts at ``(0, 0)``.

    Cuts at the first later visit of square ``(0, 0)``.  On the Mobius strip
    the homotopy class is unchanged; on the Klein bottle the result is a
    conjugate, which may be a different class.
    """
    spec = lift.board
    steps = lift.steps
    h = lift.holonomy()
    for i, v in enumerate(steps):
        if project(spec, v) == (0, 0):
            break
    else:
        raise ValueError("lift never visits square (0, 0)")
    u_inv = translation_between(spec, v, (0, 0))
    head = [deck_apply(spec, u_inv, w) for w in steps[i:]]
    tail = [deck_apply(spec, u_inv * h, w) for w in steps[1 : i + 1]]
    return LiftedPath(spec, tuple(head + tail))


def widen_iterate(base: LiftedPath, k: int, *, keep_steps: bool = False):
    """Widen ``k`` times, reusing each detour's induced collection, then reroot.

    With ``keep_steps`` also returns the unrooted intermediate lifts.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    cur = base
    stages = []
    coll = find_extending(base) if k else None
    if k and coll is None:
        raise ValueError(f"base tour on {base.board} is not extendable")
    for step in range(k):
        cur, induced = widen_with_induced(cur, coll)
        stages.append(cur)
        if step + 1 < k:
            coll = collection_from_indices(embed(cur), induced) or find_extending(cur)
            if coll is None:
                raise AssertionError(f"widened tour on {cur.board} lost extendability")
    out = reroot(cur)
    return (out, stages) if keep_steps else out


# ---------------------------------------------------------------------------
# explicit splices


def replace_edge(lift: LiftedPath, u: CoverVertex, w: CoverVertex, detour: Sequence[CoverVertex],
                 board: BoardSpec | None = None) -> LiftedPath:
    """Replace the traversed edge ``u - w`` (either direction) by ``detour``
    (a path from ``u`` to ``w``), reading the result on ``board``."""
    board = board or lift.board
    steps = lift.steps
    detour = list(detour)
    if detour[0] != u or detour[-1] != w:
        raise ValueError("detour must run from u to w")
    for i in range(len(steps) - 1):
        pair = (steps[i], steps[i + 1])
        if pair == (u, w):
            new = steps[:i] + tuple(detour) + steps[i + 2 :]
            break
        if pair == (w, u):
            new = steps[:i] + tuple(reversed(detour)) + steps[i + 2 :]
            break
    else:
        raise ValueError(f"edge {u} - {w} is not traversed by the lift")
    return LiftedPath(board, new)


def splice_m_by_1(lift: LiftedPath) -> LiftedPath:
    """From a nullhomotopic tour on ``M(m, 1)`` (m even, m >= 6) to ``M(m+2, 1)``
    by swapping one edge for the other three sides of a 4-cycle."""
    spec = lift.board
    m = spec.m
    if spec.surface is not Surface.MOBIUS or spec.n != 1 or m % 2 or m < 6:
        raise ValueError(f"splice_m_by_1 needs M(m, 1) with m even >= 6, got {spec}")
    h = m // 2
    if m % 4 == 2:
        path = [(h - 2, -2), (h, -3), (h + 1, -1), (h - 1, 0)]
    else:
        path = [(h - 3, -3), (h - 1, -2), (h, 0), (h - 2, -1)]
    return replace_edge(lift, path[0], path[-1], path, BoardSpec(Surface.MOBIUS, m + 2, 1))


def splice_4_by_n(lift: LiftedPath) -> LiftedPath:
    """From a nullhomotopic tour on ``M(4, n)`` (n even >= 4) to ``M(4, n+2)``
    by replacing its lowest edge with a nine-edge detour."""
    spec = lift.board
    n = spec.n
    if spec.surface is not Surface.MOBIUS or spec.m != 4 or n % 2 or n < 4:
        raise ValueError(f"splice_4_by_n needs M(4, n) with n even >= 4, got {spec}")
    b = -2 * n
    path = [(1, b), (3, b - 1), (2, b - 3), (0, b - 2), (1, b - 4), (3, b - 3),
            (1, b - 2), (0, b), (2, b - 1), (3, b + 1)]
    return replace_edge(lift, path[0], path[-1], path, BoardSpec(Surface.MOBIUS, 4, n + 2))


def has_edge(lift: LiftedPath, u: CoverVertex, w: CoverVertex) -> bool:
    return any({p, q} == {u, w} for p, q in zip(lift.steps, lift.steps[1:]))


def repeat_horizontal(tile: LiftedPath | Sequence[CoverVertex], count: int, stride: tuple[int, int],
                      board: BoardSpec) -> LiftedPath:
    """Glue ``count`` translated copies of ``tile``; copy ``i`` is shifted by
    ``i * stride`` and must start where copy ``i - 1`` ends."""
    steps = tuple(tile.steps if isinstance(tile, LiftedPath) else tile)
    if count < 1:
        raise ValueError("count must be positive")
    if count > 1 and (steps[-1][0] != steps[0][0] + stride[0] or steps[-1][1] != steps[0][1] + stride[1]):
        raise ValueError("tile end is not its start shifted by the stride")
    out = list(steps)
    for i in range(1, count):
        da, db = i * stride[0], i * stride[1]
        out.extend((a + da, b + db) for a, b in steps[1:])
    return LiftedPath(board, tuple(out))


def splice_at(lift: LiftedPath, cut: CoverVertex, insert: Sequence[CoverVertex], shift: tuple[int, int],
              board: BoardSpec) -> LiftedPath:
    """Cut at the first visit of ``cut``, run ``insert`` (from ``cut`` to
    ``cut + shift``), then continue with the rest of the lift shifted."""
    steps = lift.steps
    try:
        i = steps.index(tuple(cut))
    except ValueError:
        raise ValueError(f"lift never visits {cut}") from None
    insert = [tuple(v) for v in insert]
    if insert[0] != tuple(cut) or insert[-1] != (cut[0] + shift[0], cut[1] + shift[1]):
        raise ValueError("insert must run from the cut to the shifted cut")
    tail = [(a + shift[0], b + shift[1]) for a, b in steps[i + 1 :]]
    return LiftedPath(board, tuple(steps[:i]) + tuple(insert) + tuple(tail))


def splice_chain(base: LiftedPath, splice, count: int) -> list[LiftedPath]:
    """``base`` followed by ``count`` applications of ``splice``.

    Every stage must be a nullhomotopic tour of its board rooted and ending at
    ``(0, 0)``; the first failure raises ``ValueError``.
    """
    from ktours.search import is_tour

    chain = [base]
    for _ in range(count):
        nxt = splice(chain[-1])
        if nxt.start != (0, 0) or nxt.end != (0, 0) or not is_tour(build_graph(nxt.board), nxt):
            raise ValueError(f"splice produced an invalid tour on {nxt.board}")
        chain.append(nxt)
    return chain


def find_splice_base(spec: BoardSpec, splice, count: int, cap: int | None = None) -> list[LiftedPath] | None:
    """Chain from the first nullhomotopic tour of ``spec`` (in exhaustive
    search order) that survives ``count`` splices, or None."""
    from ktours.homotopy import NULLHOMOTOPIC
    from ktours.search import enumerate_tours

    for base in enumerate_tours(build_graph(spec), NULLHOMOTOPIC, cap):
        try:
            return splice_chain(base, splice, count)
        except ValueError:
            continue
    return None
