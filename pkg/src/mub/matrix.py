"""Binary matrices, column support sets and the containment digraph.

Support sets are stored as Python ints used as bit-vectors: bit ``i`` is set
when row ``i`` (0-based) has a 1 in the column.  Vertices of a
:class:`ContainmentDigraph` are the distinct nonempty support sets, sorted by
``(popcount, sorted row tuple)`` so every downstream result is reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

logger = logging.getLogger(__name__)

SEPARATORS = " ,\t"


class MatrixParseError(ValueError):
    """Malformed matrix text.  ``line``/``column`` are 1-based (0 if unknown)."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column else "") if line else "input"
        super().__init__(f"{where}: {message}")


class EmptyPosetError(ValueError):
    pass


@dataclass(frozen=True)
class BinaryMatrix:
    entries: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        if not entries or not entries[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(entries[0])
        for i, row in enumerate(entries):
            if len(row) != width:
                raise ValueError(f"row {i + 1} has {len(row)} entries, expected {width}")
            if any(x not in (0, 1) for x in row):
                raise ValueError(f"row {i + 1} has entries outside {{0,1}}")
        object.__setattr__(self, "entries", entries)
        if not self.row_labels:
            object.__setattr__(self, "row_labels", tuple(f"r{i + 1}" for i in range(len(entries))))
        if not self.col_labels:
            object.__setattr__(self, "col_labels", tuple(f"c{j + 1}" for j in range(width)))
        if len(self.row_labels) != len(entries) or len(self.col_labels) != width:
            raise ValueError("label count does not match matrix shape")

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    def column_support(self, j: int) -> int:
        bits = 0
        for i, row in enumerate(self.entries):
            if row[j]:
                bits |= 1 << i
        return bits

    def column_supports(self) -> list[int]:
        return [self.column_support(j) for j in range(self.n)]


def parse_matrix(text: str | Iterable[str]) -> BinaryMatrix:
    """Parse the text matrix format.

    One row per line, entries ``0``/``1`` optionally separated by spaces,
    commas or tabs.  Blank lines and lines starting with ``#`` are skipped.
    """
    lines = text.splitlines() if isinstance(text, str) else [ln.rstrip("\r\n") for ln in text]
    rows: list[tuple[int, ...]] = []
    first_line = 0
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        row = []
        for col, ch in enumerate(raw, start=1):
            if ch in "01":
                row.append(int(ch))
            elif ch in SEPARATORS or ch in "\r\n":
                continue
            else:
                raise MatrixParseError(f"unexpected character {ch!r}", lineno, col)
        if rows and len(row) != len(rows[0]):
            raise MatrixParseError(
                f"ragged row: {len(row)} entries, expected {len(rows[0])} (as on line {first_line})",
                lineno,
            )
        if not rows:
            first_line = lineno
        rows.append(tuple(row))
    if not rows:
        raise MatrixParseError("empty matrix")
    return BinaryMatrix(tuple(rows))


def serialize_matrix(matrix: BinaryMatrix) -> str:
    return "".join("".join(str(x) for x in row) + "\n" for row in matrix.entries)


def rows_of(bits: int) -> tuple[int, ...]:
    """0-based row indices present in a support bit-vector."""
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


def canonical_key(bits: int) -> tuple[int, tuple[int, ...]]:
    return bits.bit_count(), rows_of(bits)


def is_proper_subset(a: int, b: int) -> bool:
    return a != b and a & b == a


@dataclass(frozen=True)
class ContainmentDigraph:
    """Distinct support sets ordered canonically, arcs for proper inclusion.

    ``origin`` is set on induced sub-digraphs and maps each local vertex to
    its index in the digraph it was taken from.
    """

    m: int
    supports: tuple[int, ...]
    multiplicity: tuple[int, ...] = ()
    columns: tuple[tuple[int, ...], ...] = ()
    row_labels: tuple[str, ...] = ()
    origin: tuple[int, ...] | None = None
    succ: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    pred: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        k = len(self.supports)
        if not self.multiplicity:
            object.__setattr__(self, "multiplicity", (1,) * k)
        if not self.columns:
            object.__setattr__(self, "columns", ((),) * k)
        if not self.row_labels:
            object.__setattr__(self, "row_labels", tuple(f"r{i + 1}" for i in range(self.m)))
        succ: list[list[int]] = [[] for _ in range(k)]
        pred: list[list[int]] = [[] for _ in range(k)]
        for u in range(k):
            a = self.supports[u]
            for v in range(k):
                if is_proper_subset(a, self.supports[v]):
                    succ[u].append(v)
                    pred[v].append(u)
        object.__setattr__(self, "succ", tuple(map(tuple, succ)))
        object.__setattr__(self, "pred", tuple(map(tuple, pred)))

    @classmethod
    def from_supports(
        cls,
        supports: Sequence[int],
        m: int | None = None,
        row_labels: Sequence[str] = (),
    ) -> ContainmentDigraph:
        """Deduplicate and canonically order a family of support sets.

        Empty sets are dropped.  Used directly by tests to build arbitrary
        posets (any finite poset is the containment order of its down-sets).
        """
        groups: dict[int, list[int]] = {}
        for j, bits in enumerate(supports):
            if bits:
                groups.setdefault(bits, []).append(j)
        if not groups:
            raise EmptyPosetError("empty poset: every column is all-zero")
        if m is None:
            m = max(groups).bit_length()
        ordered = sorted(groups, key=canonical_key)
        return cls(
            m=m,
            supports=tuple(ordered),
            multiplicity=tuple(len(groups[b]) for b in ordered),
            columns=tuple(tuple(groups[b]) for b in ordered),
            row_labels=tuple(row_labels),
        )

    def __len__(self) -> int:
        return len(self.supports)

    def weight(self, v: int) -> int:
        return self.supports[v].bit_count()

    def weights(self) -> list[int]:
        return [b.bit_count() for b in self.supports]

    def is_arc(self, u: int, v: int) -> bool:
        return is_proper_subset(self.supports[u], self.supports[v])

    def comparable(self, u: int, v: int) -> bool:
        return self.is_arc(u, v) or self.is_arc(v, u)

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u, outs in enumerate(self.succ):
            for v in outs:
                yield u, v

    def num_arcs(self) -> int:
        return sum(len(s) for s in self.succ)

    def sinks(self) -> list[int]:
        return [v for v in range(len(self)) if not self.succ[v]]

    def sources(self) -> list[int]:
        return [v for v in range(len(self)) if not self.pred[v]]

    def label(self, v: int) -> str:
        return "{" + ",".join(self.row_labels[i] for i in rows_of(self.supports[v])) + "}"

    def index_of(self, bits: int) -> int:
        try:
            return self.supports.index(bits)
        except ValueError:
            raise KeyError(f"support set {bits:#b} is not a vertex") from None

    def induced(self, vertices: Iterable[int]) -> ContainmentDigraph:
        """Induced sub-digraph; the result keeps canonical order."""
        keep = sorted(set(vertices))
        return ContainmentDigraph(
            m=self.m,
            supports=tuple(self.supports[v] for v in keep),
            multiplicity=tuple(self.multiplicity[v] for v in keep),
            columns=tuple(self.columns[v] for v in keep),
            row_labels=self.row_labels,
            origin=tuple(keep),
        )

    def check_invariants(self) -> None:
        assert len(set(self.supports)) == len(self.supports), "duplicate vertices"
        assert all(self.supports), "empty support set"
        for u, v in self.arcs():
            assert is_proper_subset(self.supports[u], self.supports[v])
        for u, v in self.arcs():
            for w in self.succ[v]:
                assert w in self.succ[u], "arc relation not transitive"
        for u in range(len(self)):
            for v in range(len(self)):
                if is_proper_subset(self.supports[u], self.supports[v]):
                    assert v in self.succ[u]


def build_containment_digraph(matrix: BinaryMatrix) -> ContainmentDigraph:
    supports = matrix.column_supports()
    zero = [matrix.col_labels[j] for j, b in enumerate(supports) if not b]
    if zero and len(zero) < len(supports):
        logger.warning("dropping %d all-zero column(s): %s", len(zero), ", ".join(zero))
    return ContainmentDigraph.from_supports(supports, m=matrix.m, row_labels=matrix.row_labels)


def principal_subgraph(digraph: ContainmentDigraph, r: int) -> ContainmentDigraph:
    """Sub-digraph induced by the vertices containing row ``r`` (0-based)."""
    if not 0 <= r < digraph.m:
        raise IndexError(f"row {r} out of range for {digraph.m} rows")
    return digraph.induced(v for v, bits in enumerate(digraph.supports) if bits >> r & 1)


def columns_conflict(a: int, b: int) -> bool:
    """Rows with restricted entries (1,1), (1,0) and (0,1) all exist."""
    return bool(a & b) and bool(a & ~b) and bool(b & ~a)


def conflict_pairs(matrix: BinaryMatrix) -> list[tuple[int, int]]:
    supports = matrix.column_supports()
    return [(i, j) for i, j in combinations(range(matrix.n), 2) if columns_conflict(supports[i], supports[j])]


def is_conflict_free(matrix: BinaryMatrix) -> bool:
    return not conflict_pairs(matrix)


def digraph_to_dot(
    digraph: ContainmentDigraph,
    branching_arcs: Iterable[tuple[int, int]] = (),
    hasse: bool = False,
) -> str:
    """DOT text for the digraph; branching arcs are drawn bold.

    With ``hasse`` only covering arcs are drawn (branching arcs always are).
    """
    bold = set(branching_arcs)
    lines = ["digraph containment {", "  rankdir=BT;", "  node [shape=box];"]
    for v in range(len(digraph)):
        label = digraph.label(v)
        if digraph.multiplicity[v] > 1:
            label += f" x{digraph.multiplicity[v]}"
        lines.append(f'  v{v} [label="{label}"];')
    for u, v in digraph.arcs():
        covering = not any(w in digraph.succ[u] for w in digraph.pred[v])
        if (u, v) in bold:
            lines.append(f"  v{u} -> v{v} [style=bold, penwidth=2.5];")
        elif covering or not hasse:
            lines.append(f"  v{u} -> v{v} [color=gray];")
    lines.append("}")
    return "\n".join(lines) + "\n"
