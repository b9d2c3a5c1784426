"""Tables, labeled nulls, and column-to-attribute alignment.

A :class:`Table` holds string cells; absent information is ``None`` (a
labeled null: it never equals any value, including another null, for join
purposes). An :class:`AlignmentSpec` binds physical columns of several
tables to shared integrated attributes, and :class:`AlignedRelationSet`
packages the two together for the matcher and the integration engine.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import AlignmentError, TableFormatError

#: Cell spellings treated as null on load (compared case-insensitively,
#: after trimming surrounding whitespace).
DEFAULT_NULL_MARKERS = ("", "null", "nan")


@dataclass(frozen=True)
class Table:
    """One input table: ordered columns and rows of ``str | None`` cells.

    ``table_id`` is the 1-based position of the table in its integration
    set; it is used for tie-breaking during representative selection and
    must be unique within a set.
    """

    table_id: int
    columns: tuple[str, ...]
    rows: tuple[tuple[str | None, ...], ...]
    name: str = ""

    def __post_init__(self):
        if self.table_id < 1:
            raise ValueError(f"table_id must be >= 1, got {self.table_id}")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise TableFormatError(
                    f"row {i} of table {self.name or self.table_id} has "
                    f"{len(row)} cells, expected {len(self.columns)}"
                )

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column_index(self, column: str) -> int:
        try:
            return self.columns.index(column)
        except ValueError:
            raise AlignmentError(
                f"table {self.name or self.table_id} has no column {column!r}"
            ) from None

    def column_values(self, column: str) -> list[str | None]:
        """All cells of one column, in row order, nulls included."""
        idx = self.column_index(column)
        return [row[idx] for row in self.rows]


def make_table(table_id: int, columns: Sequence[str], rows: Iterable[Sequence[str | None]],
               name: str = "") -> Table:
    """Build a Table from plain lists, normalizing to immutable tuples."""
    return Table(
        table_id=table_id,
        columns=tuple(columns),
        rows=tuple(tuple(r) for r in rows),
        name=name,
    )


def _normalize_cell(raw: str, null_markers: frozenset[str]) -> str | None:
    cell = raw.strip()
    if cell.lower() in null_markers:
        return None
    return cell


def load_table(path: str | Path, *, table_id: int, delimiter: str = ",",
               null_markers: Sequence[str] = DEFAULT_NULL_MARKERS) -> Table:
    """Load a delimited text file (header row required) into a Table.

    Cells equal to any null marker (case-insensitive, surrounding
    whitespace ignored) become null; every other cell is kept verbatim
    apart from trimming surrounding whitespace. Rows whose length differs
    from the header are rejected with their row index.
    """
    path = Path(path)
    markers = frozenset(m.lower() for m in null_markers)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise TableFormatError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise TableFormatError(f"{path}: empty file, header row required") from None
        columns = tuple(h.strip() for h in header)
        rows = []
        for i, raw in enumerate(reader):
            if len(raw) != len(columns):
                raise TableFormatError(
                    f"{path}: row {i + 1} has {len(raw)} cells, expected {len(columns)}"
                )
            rows.append(tuple(_normalize_cell(c, markers) for c in raw))
    return Table(table_id=table_id, columns=columns, rows=tuple(rows), name=path.stem)


def write_table(table: Table, path: str | Path, *, delimiter: str = ",") -> None:
    """Write a Table back to delimited text; nulls become empty cells."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow(["" if c is None else c for c in row])


def distinct_values(table: Table, column: str) -> list[str]:
    """Non-null values of a column, first-occurrence order, deduplicated.

    Duplicate multiplicity is not represented here; use
    :func:`value_counts` when occurrence counts are needed.
    """
    seen = dict.fromkeys(v for v in table.column_values(column) if v is not None)
    return list(seen)


def value_counts(table: Table, column: str) -> Counter[str]:
    """Occurrence counts of the non-null values of a column."""
    return Counter(v for v in table.column_values(column) if v is not None)


@dataclass(frozen=True)
class AlignmentSpec:
    """Maps each integrated attribute to the physical columns backing it.

    ``attributes`` preserves declaration order: attribute -> list of
    (table_id, column name). At most one column per table may appear in
    one attribute's aligned set.
    """

    attributes: dict[str, list[tuple[int, str]]]

    def __post_init__(self):
        for attr, cols in self.attributes.items():
            seen_tables = set()
            for table_id, _column in cols:
                if table_id in seen_tables:
                    raise AlignmentError(
                        f"attribute {attr!r} aligns more than one column of table {table_id}"
                    )
                seen_tables.add(table_id)
            if not cols:
                raise AlignmentError(f"attribute {attr!r} aligns no columns")

    @property
    def attribute_names(self) -> list[str]:
        return list(self.attributes)

    def columns_for(self, attribute: str) -> list[tuple[int, str]]:
        try:
            cols = self.attributes[attribute]
        except KeyError:
            raise AlignmentError(f"unknown attribute {attribute!r}") from None
        return sorted(cols)


def load_alignment_spec(path: str | Path) -> AlignmentSpec:
    """Read an alignment spec from JSON.

    Expected shape::

        {"City": [{"table": 1, "column": "City"}, {"table": 2, "column": "city"}], ...}

    ``table`` is the 1-based position of the table in the integration set.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise AlignmentError(f"cannot open alignment spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise AlignmentError(f"alignment spec {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise AlignmentError(f"alignment spec {path} must be a JSON object")
    attributes: dict[str, list[tuple[int, str]]] = {}
    for attr, entries in raw.items():
        if not isinstance(entries, list):
            raise AlignmentError(f"attribute {attr!r}: expected a list of column refs")
        cols = []
        for entry in entries:
            try:
                cols.append((int(entry["table"]), str(entry["column"])))
            except (TypeError, KeyError, ValueError) as exc:
                raise AlignmentError(
                    f"attribute {attr!r}: each entry needs integer 'table' and 'column', got {entry!r}"
                ) from exc
        attributes[attr] = cols
    return AlignmentSpec(attributes)


@dataclass(frozen=True)
class AlignedRelationSet:
    """An integration set: the tables plus the alignment binding them."""

    tables: tuple[Table, ...]
    spec: AlignmentSpec
    _by_id: dict[int, Table] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_id: dict[int, Table] = {}
        for table in self.tables:
            if table.table_id in by_id:
                raise AlignmentError(f"duplicate table_id {table.table_id}")
            by_id[table.table_id] = table
        for attr, cols in self.spec.attributes.items():
            for table_id, column in cols:
                table = by_id.get(table_id)
                if table is None:
                    raise AlignmentError(
                        f"attribute {attr!r} references table {table_id}, "
                        f"but the set has tables {sorted(by_id)}"
                    )
                if column not in table.columns:
                    raise AlignmentError(
                        f"attribute {attr!r} references column {column!r} "
                        f"missing from table {table.name or table_id}"
                    )
        object.__setattr__(self, "_by_id", by_id)

    @property
    def attributes(self) -> list[str]:
        return self.spec.attribute_names

    def table(self, table_id: int) -> Table:
        return self._by_id[table_id]


def build_relation_set(tables: Sequence[Table], spec: AlignmentSpec) -> AlignedRelationSet:
    return AlignedRelationSet(tables=tuple(tables), spec=spec)


def load_relation_set(paths: Sequence[str | Path], spec_path: str | Path, *,
                      delimiter: str = ",",
                      null_markers: Sequence[str] = DEFAULT_NULL_MARKERS) -> AlignedRelationSet:
    """Load tables (ids assigned by input order, 1-based) plus their spec."""
    tables = [
        load_table(p, table_id=i + 1, delimiter=delimiter, null_markers=null_markers)
        for i, p in enumerate(paths)
    ]
    return build_relation_set(tables, load_alignment_spec(spec_path))


def project_aligned(relset: AlignedRelationSet, attribute: str) -> list[tuple[int, list[str]]]:
    """Per aligned column, the non-null values in row order.

    Returns one ``(table_id, values)`` entry per aligned column, ascending
    in ``table_id``. Duplicate values are kept: the matcher counts value
    frequency over exactly these lists.
    """
    out = []
    for table_id, column in relset.spec.columns_for(attribute):
        table = relset.table(table_id)
        out.append((table_id, [v for v in table.column_values(column) if v is not None]))
    return out
