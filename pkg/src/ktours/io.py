"""Tour text files, the on-disk tour atlas, and default budgets from JSON.

A tour file is a header of ``key=value`` lines followed by one ``a b`` line per
vertex of the lift::

    surface=mobius
    m=6
    n=1
    class=nullhomotopic
    provenance=searched
    0 0
    1 -2
    ...
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, dataclass, fields
from enum import Enum
from pathlib import Path

from ktours.boards import BoardSpec, Surface, build_graph
from ktours.homotopy import LiftedPath, TourClass, class_of_deck

ATLAS_ENV = "KTOURS_ATLAS"
CONFIG_ENV = "KTOURS_CONFIG"
_HEADER = ("surface", "m", "n", "class", "provenance")


class Provenance(str, Enum):
    SEARCHED = "searched"
    WIDENED = "widened"
    SPLICED = "spliced"
    USER_SUPPLIED = "user-supplied"


class TourFileError(ValueError):
    pass


@dataclass(frozen=True)
class TourRecord:
    lift: LiftedPath
    tour_class: TourClass
    provenance: Provenance = Provenance.SEARCHED
    seed: int | None = None

    @property
    def board(self) -> BoardSpec:
        return self.lift.board

    @classmethod
    def of(cls, lift: LiftedPath, provenance: Provenance = Provenance.SEARCHED, seed: int | None = None) -> "TourRecord":
        return cls(lift, class_of_deck(lift.board, lift.holonomy()), Provenance(provenance), seed)


def format_tour(record: TourRecord) -> str:
    spec = record.board
    lines = [
        f"surface={spec.surface.value}",
        f"m={spec.m}",
        f"n={spec.n}",
        f"class={record.tour_class}",
        f"provenance={record.provenance.value}",
    ]
    if record.seed is not None:
        lines.append(f"seed={record.seed}")
    lines.extend(f"{a} {b}" for a, b in record.lift.steps)
    return "\n".join(lines) + "\n"


def validate(record: TourRecord) -> None:
    """Raise :class:`TourFileError` unless the record is a tour of its class."""
    from ktours.search import is_tour

    lift = record.lift
    if lift.start != (0, 0):
        raise TourFileError("tour lift must start at 0 0")
    if not is_tour(build_graph(record.board), lift):
        raise TourFileError(f"not a knight's tour of {record.board}")
    actual = class_of_deck(record.board, lift.holonomy())
    if actual != record.tour_class:
        raise TourFileError(f"header says {record.tour_class} but the lift is {actual}")


def parse_tour(text: str, *, check: bool = True) -> TourRecord:
    header: dict[str, str] = {}
    coords = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            raise TourFileError(f"line {lineno}: blank line")
        if "=" in line:
            if coords:
                raise TourFileError(f"line {lineno}: header after coordinates")
            key, _, value = line.partition("=")
            if key in header:
                raise TourFileError(f"line {lineno}: duplicate key {key!r}")
            if key not in _HEADER and key != "seed":
                raise TourFileError(f"line {lineno}: unknown key {key!r}")
            header[key] = value
            continue
        parts = line.split(" ")
        try:
            a, b = (int(p) for p in parts)
        except ValueError:
            raise TourFileError(f"line {lineno}: expected 'a b', got {line!r}") from None
        coords.append((a, b))
    missing = [k for k in _HEADER if k not in header]
    if missing:
        raise TourFileError(f"missing header keys: {', '.join(missing)}")
    if not coords:
        raise TourFileError("no coordinates")
    try:
        spec = BoardSpec(Surface(header["surface"]), int(header["m"]), int(header["n"]))
        if not spec.compact:
            raise TourFileError(f"{spec.surface.value} is not a finite board")
        record = TourRecord(
            LiftedPath(spec, tuple(coords)),
            TourClass.parse(header["class"]),
            Provenance(header["provenance"]),
            int(header["seed"]) if "seed" in header else None,
        )
    except TourFileError:
        raise
    except ValueError as exc:
        raise TourFileError(str(exc)) from None
    if check:
        validate(record)
    if format_tour(record) != text:
        raise TourFileError("file is not in canonical form")
    return record


def read_tour(path: str | os.PathLike, *, check: bool = True) -> TourRecord:
    return parse_tour(Path(path).read_text(), check=check)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_tour(path: str | os.PathLike, record: TourRecord) -> None:
    _atomic_write(Path(path), format_tour(record))


class Atlas:
    """Directory of canonical witnesses keyed by (surface, m, n, class)."""

    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root if root is not None else os.environ.get(ATLAS_ENV, "atlas"))

    def path(self, spec: BoardSpec, cls: TourClass) -> Path:
        name = str(cls).replace("(", "").replace(")", "").replace(", ", "_")
        return self.root / f"{spec.surface.value}-{spec.m}x{spec.n}-{name}.tour"

    def get(self, spec: BoardSpec, cls: TourClass) -> TourRecord | None:
        p = self.path(spec, cls)
        return read_tour(p) if p.exists() else None

    def store(self, record: TourRecord) -> bool:
        """Keep the lexicographically least witness; True if the file changed."""
        from ktours.search import canonical

        validate(record)
        record = TourRecord(canonical(record.lift), record.tour_class, record.provenance, record.seed)
        old = self.get(record.board, record.tour_class)
        if old is not None and old.lift.steps <= record.lift.steps:
            return False
        write_tour(self.path(record.board, record.tour_class), record)
        return True

    def records(self) -> list[TourRecord]:
        if not self.root.exists():
            return []
        return [read_tour(p) for p in sorted(self.root.glob("*.tour"))]


@dataclass
class Defaults:
    """Default budgets; overridden by a JSON object with the same keys."""

    node_limit: int | None = 2_000_000
    restart_nodes: int | None = 50_000
    time_limit: float | None = None
    parallel_width: int = 1
    connectivity_every: int = 8
    exhaust_nodes: int | None = None

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "Defaults":
        path = path or os.environ.get(CONFIG_ENV)
        if not path:
            return cls()
        data = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    def dump(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"
