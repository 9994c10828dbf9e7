"""Backtracking search for knight's tours of a prescribed homotopy class.

The search walks the board graph while carrying the deck element of the
current lift, so the class of a closed tour is known the moment it closes.
Pruning keeps the search sound, so a completed search certifies that no tour
of the requested class exists:

* every unvisited square keeps two usable edges (forced moves fall out of this);
* the unvisited squares stay connected to the current end;
* the lift must still be able to reach a target endpoint in the remaining
  number of moves (distance and the parity of ``a + b``).
"""

from __future__ import annotations

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from ktours.boards import (
    IDENTITY,
    BoardGraph,
    BoardSpec,
    DeckElement,
    QuotientVertex,
    Surface,
    build_graph,
    deck_apply,
    orbit_key,
    project,
)
from ktours.homotopy import (
    ORIGIN,
    LiftedPath,
    TourClass,
    class_of_deck,
    class_targets,
    classify,
    obstruction,
    reverse,
)

log = logging.getLogger(__name__)
PROGRESS_MASK = (1 << 20) - 1


@dataclass(frozen=True)
class SearchBudget:
    """Limits for one search.

    ``node_limit=None`` means unbounded; exhaustive certification needs it.
    ``restart_nodes`` caps each randomised restart of a heuristic search.
    """

    node_limit: int | None = 2_000_000
    time_limit: float | None = None
    parallel_width: int = 1
    exhaustive: bool = False
    restart_nodes: int | None = 50_000
    connectivity_every: int = 8
    class_pruning: bool = True

    @classmethod
    def unlimited(cls, **kw) -> "SearchBudget":
        kw.setdefault("exhaustive", True)
        return cls(node_limit=None, restart_nodes=None, **kw)


class Status(str, Enum):
    FOUND = "found"
    EXHAUSTED_NONE = "exhausted-none"
    BUDGET_EXCEEDED = "budget-exceeded"
    EXCLUDED = "excluded"  # ruled out by a theorem without searching


@dataclass
class SearchOutcome:
    status: Status
    lift: LiftedPath | None = None
    nodes: int = 0
    reason: str = ""

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


class _BudgetHit(Exception):
    pass


class _Engine:
    """Depth-first search state over an indexed copy of a board graph.

    ``targets`` restricts the holonomy of closed tours (None = any class).
    With ``end`` given the engine looks for a Hamiltonian path from ``start``
    to ``end`` instead of a cycle.
    """

    def __init__(
        self,
        graph: BoardGraph,
        targets: frozenset[DeckElement] | None,
        *,
        start: QuotientVertex = (0, 0),
        end: QuotientVertex | None = None,
        heuristic: bool = True,
        seed: int | None = None,
        permutation: Sequence[int] | None = None,
        class_pruning: bool = True,
        connectivity_every: int = 8,
        node_limit: int | None = None,
        deadline: float | None = None,
        collect: int | None = None,
    ):
        spec = graph.spec
        self.spec = spec
        self.m, self.n = spec.m, spec.n
        index = {q: i for i, q in enumerate(graph.vertices)}
        self.vertices = graph.vertices
        self.coords = list(graph.vertices)
        self.size = len(graph.vertices)
        self.start = index[start]
        self.cycle = end is None
        self.end = self.start if self.cycle else index[end]
        self.length = self.size if self.cycle else self.size - 1
        rng = random.Random(seed) if seed is not None else None
        # slot: (target, dk, dj, move rank, edge id, priority)
        edge_ids = {e: i for i, e in enumerate(sorted(graph.edges, key=lambda e: e.key))}
        self.slots = []
        for q in graph.vertices:
            row = []
            for rank, s in enumerate(graph.incidence[q]):
                if permutation is not None:
                    rank = permutation[rank % len(permutation)] * 16 + rank
                prio = rng.random() if rng is not None else rank
                row.append((index[s.target], s.deck.k, s.deck.j, rank, edge_ids[s.edge], prio))
            row.sort(key=lambda r: r[3])
            self.slots.append(row)
        # neighbour multiset without loops, used for the availability counts
        self.nbrs = [[r[0] for r in row if r[0] != i] for i, row in enumerate(self.slots)]
        self.heuristic = heuristic
        self.targets = None if targets is None else frozenset(DeckElement(*t) for t in targets)
        self.class_pruning = class_pruning and self.targets is not None and self.cycle
        self.target_points = []
        if self.targets is not None and self.cycle:
            self.target_points = [deck_apply(spec, t, self.coords[self.start]) for t in self.targets]
        self.connectivity_every = max(1, connectivity_every)
        self.node_limit = node_limit
        self.deadline = deadline
        self.collect = collect
        self.nodes = 0
        self.results: list[list[int]] = []
        self.budget_hit = False

    # -- helpers -----------------------------------------------------------
    def _position(self, q: int, k: int, j: int) -> tuple[int, int]:
        a, b = self.coords[q]
        if j % 2:
            a = self.m - 1 - a
        return a + k * self.m, b + j * self.n

    def _reachable(self, q: int, k: int, j: int, remaining: int) -> bool:
        a, b = self._position(q, k, j)
        for ta, tb in self.target_points:
            da, db = abs(ta - a), abs(tb - b)
            if da <= 2 * remaining and db <= 2 * remaining and da + db <= 3 * remaining:
                if (da + db - remaining) % 2 == 0:
                    return True
        return False

    def _connected(self, v: int, visited: bytearray, unvisited: int) -> bool:
        seen = bytearray(self.size)
        seen[v] = 1
        stack = [v]
        count = 0
        nbrs = self.nbrs
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if not seen[y] and not visited[y]:
                    seen[y] = 1
                    count += 1
                    stack.append(y)
        return count == unvisited

    # -- search ------------------------------------------------------------
    def run(self, prefix: Sequence[int] = ()) -> None:
        """Search everything below the root (or below a forced ``prefix`` of
        slot positions).  Results accumulate in ``self.results``."""
        if self.size == 1:
            self._run_single()
            return
        if self.class_pruning and not self._reachable(self.start, 0, 0, self.length):
            return
        self.visited = bytearray(self.size)
        self.visited[self.start] = 1
        self.avail = [len(x) for x in self.nbrs]
        self.path: list[int] = []
        self.prefix = list(prefix)
        try:
            self._dfs(self.start, 0, 0, 0, self.size - 1)
        except _BudgetHit:
            self.budget_hit = True

    def _run_single(self) -> None:
        # 1x1 board: the empty tour, plus every loop traversed once
        if self.targets is None or IDENTITY in self.targets:
            self.results.append([])
        for pos, (t, dk, dj, *_rest) in enumerate(self.slots[self.start]):
            if self.targets is None or (dk, dj) in self.targets:
                self.results.append([pos])
            if self.collect is None and self.results:
                return

    def _tick(self) -> None:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _BudgetHit
        if self.nodes & 1023 == 0:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _BudgetHit
            if self.nodes & PROGRESS_MASK == 0:
                log.info("%s: %d nodes, depth %d", self.spec, self.nodes, len(self.path))

    def _done(self) -> bool:
        return bool(self.results) and (self.collect is None or len(self.results) >= self.collect)

    def _dfs(self, v: int, k: int, j: int, depth: int, unvisited: int) -> bool:
        """Extend the path ending at ``v`` (lift deck ``(k, j)``) by one edge.

        Returns True to stop the whole search.
        """
        self._tick()
        slots = self.slots[v]
        path = self.path
        if depth == self.length - 1:
            end = self.end
            for pos, (t, dk, dj, _r, eid, _p) in enumerate(slots):
                if t != end or (not self.cycle and self.visited[t]):
                    continue
                if self.size == 2 and self.cycle and eid == self._first_edge:
                    continue
                nk = k + (-dk if j % 2 else dk)
                nj = j + dj
                if self.targets is not None and self.cycle and (nk, nj) not in self.targets:
                    continue
                path.append(pos)
                self.results.append(list(path))
                path.pop()
                if self._done():
                    return True
            return False

        visited, avail, nbrs = self.visited, self.avail, self.nbrs
        release = depth > 0 or not self.cycle
        forced = -1
        ok = True
        if release:
            for x in nbrs[v]:
                avail[x] -= 1
            for x in nbrs[v]:
                if visited[x] and x != self.end:
                    continue
                need = 1 if x == self.end else 2
                if avail[x] < need:
                    if x == self.end or avail[x] < need - 1 or (forced != -1 and forced != x):
                        ok = False
                        break
                    forced = x
        if ok:
            cands = []
            for pos, slot in enumerate(slots):
                t = slot[0]
                if visited[t] or t == self.end or (forced != -1 and t != forced):
                    continue
                cands.append(pos)
            if self.prefix:
                want = self.prefix.pop(0)
                cands = [c for c in cands if c == want]
            elif self.heuristic and len(cands) > 1:
                cands.sort(key=lambda p: (avail[slots[p][0]], slots[p][5]))
            remaining = self.length - depth - 1
            check_conn = (depth + 1) % self.connectivity_every == 0
            for pos in cands:
                t, dk, dj, _r, eid, _p = slots[pos]
                nk = k + (-dk if j % 2 else dk)
                nj = j + dj
                if self.class_pruning and not self._reachable(t, nk, nj, remaining):
                    continue
                visited[t] = 1
                if check_conn and not self._connected(t, visited, unvisited - 1):
                    visited[t] = 0
                    continue
                if depth == 0:
                    self._first_edge = eid
                path.append(pos)
                stop = self._dfs(t, nk, nj, depth + 1, unvisited - 1)
                path.pop()
                visited[t] = 0
                if stop:
                    if release:
                        for x in nbrs[v]:
                            avail[x] += 1
                    return True
        if release:
            for x in nbrs[v]:
                avail[x] += 1
        return False

    def lift_of(self, slot_path: Sequence[int]) -> LiftedPath:
        spec = self.spec
        q = self.start
        deck = IDENTITY
        steps = [self.coords[q]]
        for pos in slot_path:
            t, dk, dj, *_ = self.slots[q][pos]
            deck = deck * DeckElement(dk, dj)
            q = t
            steps.append(deck_apply(spec, deck, self.coords[q]))
        return LiftedPath(spec, tuple(steps))


# ---------------------------------------------------------------------------
# tour validation


def is_tour(graph: BoardGraph, lift: LiftedPath) -> bool:
    """Whether ``lift`` is the lift of a knight's tour (closed Hamiltonian walk)."""
    spec = graph.spec
    if lift.board != spec:
        return False
    size = spec.m * spec.n
    squares = lift.squares()
    if squares[-1] != squares[0]:
        return False
    length = len(lift)
    if size == 1:
        if length == 0:
            return True
        if length != 1:
            return False
    elif length != size:
        return False
    if sorted(squares[:-1]) != sorted(graph.vertices):
        return False
    keys = [orbit_key(spec, v, w)[0] for v, w in zip(lift.steps, lift.steps[1:])]
    if len(set(keys)) != len(keys):
        return False
    return all(k in _edge_keys(graph) for k in keys)


def _edge_keys(graph: BoardGraph) -> frozenset:
    cached = getattr(graph, "_keyset", None)
    if cached is None:
        cached = frozenset(e.key for e in graph.edges)
        object.__setattr__(graph, "_keyset", cached)
    return cached


def canonical(lift: LiftedPath) -> LiftedPath:
    """The lexicographically smaller of a tour and its reverse, when both have
    the same class."""
    back = reverse(lift)
    spec = lift.board
    if class_of_deck(spec, lift.holonomy()) != class_of_deck(spec, back.holonomy()):
        return lift
    return min(lift, back, key=lambda p: p.steps)


def _targets_for(graph: BoardGraph, cls: TourClass | Iterable[TourClass] | None):
    if cls is None:
        return None
    classes = [cls] if isinstance(cls, TourClass) else list(cls)
    out = set()
    for c in classes:
        out |= class_targets(graph.spec, c)
    return frozenset(out)


def _classes(cls) -> list[TourClass]:
    if cls is None:
        return []
    return [cls] if isinstance(cls, TourClass) else list(cls)


def excluded_by_theorem(spec: BoardSpec, cls: TourClass | None) -> str:
    """Name of a cited result that rules out ``cls`` on ``spec`` ('' if none)."""
    from ktours.theorems import TheoremId, predict

    if cls is not None and obstruction(spec, cls):
        return "parity obstruction"
    if spec.surface is Surface.MOBIUS and not predict(TheoremId.WATKINS_MOBIUS, spec.m, spec.n):
        return "Watkins (Mobius strips)"
    if spec.surface is Surface.RECTANGLE and spec.m * spec.n > 1:
        m, n = sorted((spec.m, spec.n))
        if not predict(TheoremId.SCHWENK_RECT, m, n):
            return "Schwenk (rectangles)"
    return ""


def _branch_prefixes(graph, targets, seed, heuristic, class_pruning, connectivity_every) -> list[list[int]]:
    """Slot positions of the first two moves, in serial search order."""
    probe = _Engine(graph, targets, heuristic=heuristic, seed=seed, class_pruning=class_pruning,
                    connectivity_every=connectivity_every, collect=10**9, node_limit=None)
    prefixes = []

    class _Stop(Exception):
        pass

    orig = probe._dfs

    def capture(v, k, j, depth, unvisited):
        if depth == 2:
            prefixes.append(list(probe.path))
            return False
        return orig(v, k, j, depth, unvisited)

    probe._dfs = capture
    probe.run()
    return prefixes


def _run_branch(args):
    spec, targets, seed, heuristic, class_pruning, conn, node_limit, prefix = args
    graph = build_graph(spec)
    eng = _Engine(graph, targets, heuristic=heuristic, seed=seed, class_pruning=class_pruning,
                  connectivity_every=conn, node_limit=node_limit)
    eng.run(prefix)
    lift = eng.lift_of(eng.results[0]) if eng.results else None
    return lift, eng.nodes, eng.budget_hit


def find_tour(
    graph: BoardGraph,
    cls: TourClass | Iterable[TourClass] | None,
    budget: SearchBudget = SearchBudget(),
    *,
    seed: int | None = None,
    fast_fail: bool = False,
) -> SearchOutcome:
    """Search for a tour of class ``cls`` (None: any tour).

    Exhaustive budgets use plain lexicographic move order; otherwise the search
    uses Warnsdorff ordering and, after the first attempt, seeded restarts.
    """
    spec = graph.spec
    for c in _classes(cls):
        class_targets(spec, c)  # validates class against surface
    if fast_fail:
        classes = _classes(cls) or [None]
        reasons = [excluded_by_theorem(spec, c) for c in classes]
        if all(reasons):
            return SearchOutcome(Status.EXCLUDED, reason="; ".join(sorted(set(reasons))))
    targets = _targets_for(graph, cls)
    deadline = time.monotonic() + budget.time_limit if budget.time_limit else None
    heuristic = not budget.exhaustive
    node_limit = budget.node_limit

    if budget.parallel_width > 1 and spec.m * spec.n > 2:
        return _find_parallel(graph, targets, budget, seed, heuristic)

    total = 0
    attempt = 0
    while True:
        if budget.exhaustive or attempt == 0:
            cap = node_limit
            if not budget.exhaustive and budget.restart_nodes is not None:
                cap = budget.restart_nodes if cap is None else min(cap, budget.restart_nodes)
            attempt_seed = seed
        else:
            left = None if node_limit is None else node_limit - total
            if left is not None and left <= 0:
                break
            cap = budget.restart_nodes if left is None else min(left, budget.restart_nodes or left)
            attempt_seed = (seed or 0) * 1_000_003 + attempt
        eng = _Engine(graph, targets, heuristic=heuristic, seed=attempt_seed,
                      class_pruning=budget.class_pruning, connectivity_every=budget.connectivity_every,
                      node_limit=cap, deadline=deadline)
        eng.run()
        total += eng.nodes
        log.debug("%s attempt %d: %d nodes (total %d)", spec, attempt, eng.nodes, total)
        if eng.results:
            return SearchOutcome(Status.FOUND, canonical(eng.lift_of(eng.results[0])), total, "search")
        if not eng.budget_hit:
            return SearchOutcome(Status.EXHAUSTED_NONE, nodes=total, reason="exhaustive search")
        if budget.exhaustive or budget.restart_nodes is None:
            break
        if deadline is not None and time.monotonic() > deadline:
            break
        if node_limit is not None and total >= node_limit:
            break
        attempt += 1
    return SearchOutcome(Status.BUDGET_EXCEEDED, nodes=total, reason="budget")


def _find_parallel(graph, targets, budget, seed, heuristic) -> SearchOutcome:
    prefixes = _branch_prefixes(graph, targets, seed, heuristic, budget.class_pruning, budget.connectivity_every)
    args = [(graph.spec, targets, seed, heuristic, budget.class_pruning, budget.connectivity_every,
             budget.node_limit, p) for p in prefixes]
    with ProcessPoolExecutor(max_workers=budget.parallel_width) as pool:
        results = list(pool.map(_run_branch, args))
    nodes = sum(r[1] for r in results)
    for lift, _n, _hit in results:
        if lift is not None:
            return SearchOutcome(Status.FOUND, canonical(lift), nodes, "search")
    if any(hit for _l, _n, hit in results):
        return SearchOutcome(Status.BUDGET_EXCEEDED, nodes=nodes, reason="budget")
    return SearchOutcome(Status.EXHAUSTED_NONE, nodes=nodes, reason="exhaustive search")


def find_tour_serial_branches(graph: BoardGraph, cls, budget: SearchBudget, seed: int | None = None) -> SearchOutcome:
    """Branch-by-branch serial search in the same order as the parallel search."""
    targets = _targets_for(graph, cls)
    heuristic = not budget.exhaustive
    prefixes = _branch_prefixes(graph, targets, seed, heuristic, budget.class_pruning, budget.connectivity_every)
    nodes = 0
    hit_any = False
    for p in prefixes:
        lift, n, hit = _run_branch((graph.spec, targets, seed, heuristic, budget.class_pruning,
                                    budget.connectivity_every, budget.node_limit, p))
        nodes += n
        hit_any |= hit
        if lift is not None:
            return SearchOutcome(Status.FOUND, canonical(lift), nodes, "search")
    if hit_any:
        return SearchOutcome(Status.BUDGET_EXCEEDED, nodes=nodes, reason="budget")
    return SearchOutcome(Status.EXHAUSTED_NONE, nodes=nodes, reason="exhaustive search")


def enumerate_tours(
    graph: BoardGraph,
    cls: TourClass | Iterable[TourClass] | None,
    cap: int | None = None,
    *,
    class_pruning: bool = True,
    node_limit: int | None = None,
    permutation: Sequence[int] | None = None,
) -> list[LiftedPath]:
    """Every directed tour rooted at ``(0, 0)`` of the given class, in
    lexicographic search order (at most ``cap``)."""
    targets = _targets_for(graph, cls)
    eng = _Engine(graph, targets, heuristic=False, class_pruning=class_pruning,
                  node_limit=node_limit, collect=cap if cap is not None else math.inf,
                  permutation=permutation)
    eng.run()
    if eng.budget_hit:
        raise RuntimeError(f"enumeration on {graph.spec} exceeded {node_limit} nodes")
    return [eng.lift_of(p) for p in eng.results]


def exhaustive_none(graph: BoardGraph, cls, *, class_pruning: bool = True,
                    permutation: Sequence[int] | None = None) -> tuple[bool, int]:
    """Run a complete search; return (no tour exists, nodes searched)."""
    eng = _Engine(graph, _targets_for(graph, cls), heuristic=False, class_pruning=class_pruning,
                  permutation=permutation)
    eng.run()
    return not eng.results, eng.nodes


def find_open_tour(
    graph: BoardGraph,
    start: QuotientVertex,
    end: QuotientVertex,
    budget: SearchBudget = SearchBudget(),
    *,
    seed: int | None = None,
) -> SearchOutcome:
    """Hamiltonian path from ``start`` to ``end`` on the rectangle subgraph."""
    if start == end:
        raise ValueError("an open tour needs distinct endpoints")
    spec = graph.spec
    rect = graph if spec.surface is Surface.RECTANGLE else build_graph(BoardSpec(Surface.RECTANGLE, spec.m, spec.n))
    for q in (start, end):
        if q not in rect.incidence:
            raise ValueError(f"{q} is not a square of {spec}")
    deadline = time.monotonic() + budget.time_limit if budget.time_limit else None
    total, attempt = 0, 0
    while True:
        cap = budget.node_limit
        if not budget.exhaustive and budget.restart_nodes is not None:
            cap = budget.restart_nodes if cap is None else min(cap, budget.restart_nodes, cap - total)
        eng = _Engine(rect, None, start=start, end=end, heuristic=not budget.exhaustive,
                      seed=None if attempt == 0 else (seed or 0) * 1_000_003 + attempt,
                      connectivity_every=budget.connectivity_every, node_limit=cap, deadline=deadline)
        eng.run()
        total += eng.nodes
        if eng.results:
            return SearchOutcome(Status.FOUND, eng.lift_of(eng.results[0]), total, "search")
        if not eng.budget_hit:
            return SearchOutcome(Status.EXHAUSTED_NONE, nodes=total, reason="exhaustive search")
        attempt += 1
        if budget.exhaustive or budget.restart_nodes is None:
            break
        if (budget.node_limit is not None and total >= budget.node_limit) or (
            deadline is not None and time.monotonic() > deadline
        ):
            break
    return SearchOutcome(Status.BUDGET_EXCEEDED, nodes=total, reason="budget")


def open_path_lift(spec: BoardSpec, lift: LiftedPath) -> LiftedPath:
    """Re-read an open rectangle path in the cover of a quotient board."""
    return lift.on(spec)


def square_order(lift: LiftedPath) -> list[QuotientVertex]:
    return [project(lift.board, v) for v in lift.steps]


def tour_class(lift: LiftedPath) -> TourClass:
    if lift.start != ORIGIN:
        raise ValueError("tour lifts are rooted at (0, 0)")
    return classify(lift.board, lift.end)
