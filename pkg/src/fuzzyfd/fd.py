"""Full-disjunction integration of aligned tables.

Two tuples merge when they agree on every attribute where both carry a
value and share at least one such attribute (labeled nulls never join).
The engine computes the integrated table the classical way: left-fold a
full outer join over every permutation of the input tables, outer-union
the per-permutation results, and drop tuples subsumed by more complete
ones. That is exponential in the number of tables, which is acceptable
for the small integration sets this targets; a cap refuses larger sets.

``fd_oracle`` is an independent desk-scale verifier: it enumerates every
connected, pairwise-consistent combination of input tuples directly. The
two paths share nothing beyond the tuple model, so agreement between
them is meaningful.
"""

from __future__ import annotations

import csv
from itertools import permutations, product
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import OracleBoundError, PermutationCapError
from .tables import AlignedRelationSet, Table

DEFAULT_PERMUTATION_CAP = 7

Provenance = frozenset[tuple[int, int]]


class WideTuple:
    """A tuple over the full attribute universe, plus optional provenance.

    Equality and hashing consider only the values: provenance records
    which ``(table_id, row_index)`` sources contributed and is carried
    along for illustration, not identity.
    """

    __slots__ = ("values", "provenance", "_hash")

    def __init__(self, values: tuple[str | None, ...], provenance: Provenance | None = None):
        self.values = values
        self.provenance = provenance
        self._hash = hash(values)

    def __eq__(self, other):
        return isinstance(other, WideTuple) and self.values == other.values

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"WideTuple({self.values!r})"


def _sort_key(values: tuple[str | None, ...]):
    return tuple((v is None, v or "") for v in values)


class IntegratedTable:
    """A set of wide tuples over an ordered attribute universe.

    Internally rows live in a dict keyed by value tuples, so exact
    duplicates collapse (first provenance wins). ``tuples`` lists them in
    a deterministic order: sorted by attribute values, nulls last.
    """

    __slots__ = ("attributes", "_rows")

    def __init__(self, attributes: Sequence[str],
                 rows: Mapping[tuple[str | None, ...], Provenance | None] | None = None):
        self.attributes = tuple(attributes)
        self._rows: dict[tuple[str | None, ...], Provenance | None] = dict(rows or {})

    @classmethod
    def from_values(cls, attributes: Sequence[str],
                    rows: Iterable[Sequence[str | None]]) -> "IntegratedTable":
        return cls(attributes, {tuple(r): None for r in rows})

    @classmethod
    def from_wide_tuples(cls, attributes: Sequence[str],
                         tuples: Iterable[WideTuple]) -> "IntegratedTable":
        table = cls(attributes)
        for t in tuples:
            table._rows.setdefault(t.values, t.provenance)
        return table

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self) -> Iterator[WideTuple]:
        return iter(self.tuples)

    def __eq__(self, other):
        return (isinstance(other, IntegratedTable)
                and self.attributes == other.attributes
                and self._rows.keys() == other._rows.keys())

    def __hash__(self):
        return hash((self.attributes, frozenset(self._rows)))

    @property
    def tuples(self) -> list[WideTuple]:
        return [WideTuple(v, p) for v, p in
                sorted(self._rows.items(), key=lambda it: _sort_key(it[0]))]

    def value_set(self) -> frozenset[tuple[str | None, ...]]:
        return frozenset(self._rows)


def join_consistent(a: WideTuple, b: WideTuple) -> tuple[bool, bool]:
    """(consistent, connected) for two tuples over the same universe.

    Consistent: no attribute where both carry different values.
    Connected: at least one attribute where both carry a value (without
    it, a merge would pair tuples that share no evidence).
    """
    if len(a.values) != len(b.values):
        raise ValueError("tuples must share one attribute universe")
    connected = False
    for x, y in zip(a.values, b.values):
        if x is not None and y is not None:
            if x != y:
                return False, False
            connected = True
    return True, connected


def merge_tuples(parts: Iterable[WideTuple]) -> WideTuple:
    """Merge pairwise-consistent tuples attribute-wise; provenance unions."""
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to merge")
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            consistent, _ = join_consistent(a, b)
            if not consistent:
                raise ValueError(f"cannot merge inconsistent tuples {a!r} and {b!r}")
    merged = list(parts[0].values)
    for part in parts[1:]:
        for i, v in enumerate(part.values):
            if merged[i] is None:
                merged[i] = v
    provs = [p.provenance for p in parts if p.provenance is not None]
    prov = frozenset().union(*provs) if provs else None
    return WideTuple(tuple(merged), prov)


class _IndexedRelation:
    """Rows of one join operand plus a per-attribute value index."""

    __slots__ = ("rows", "provs", "index")

    def __init__(self, rows: Mapping[tuple[str | None, ...], Provenance | None], n_attrs: int):
        self.rows: list[tuple[str | None, ...]] = list(rows)
        self.provs: list[Provenance | None] = list(rows.values())
        self.index: list[dict[str, list[int]]] = [{} for _ in range(n_attrs)]
        for rid, vals in enumerate(self.rows):
            for ai, v in enumerate(vals):
                if v is not None:
                    self.index[ai].setdefault(v, []).append(rid)


def _join_into(left: Mapping[tuple[str | None, ...], Provenance | None],
               right: _IndexedRelation, n_attrs: int,
               track_provenance: bool) -> dict[tuple[str | None, ...], Provenance | None]:
    """Full outer join: merged pairs plus unmatched tuples of both sides.

    Candidate partners are found through the right-hand value index, so
    every candidate already shares one non-null attribute value with the
    probe (the connectedness requirement); only full consistency remains
    to be checked.
    """
    out: dict[tuple[str | None, ...], Provenance | None] = {}
    matched_right: set[int] = set()
    index = right.index
    rrows = right.rows
    for lvals, lprov in left.items():
        candidates: list[int] = []
        n_buckets = 0
        for ai, v in enumerate(lvals):
            if v is not None:
                bucket = index[ai].get(v)
                if bucket:
                    candidates.extend(bucket)
                    n_buckets += 1
        if n_buckets > 1:
            candidates = list(dict.fromkeys(candidates))
        hit = False
        for rid in candidates:
            rvals = rrows[rid]
            consistent = True
            for x, y in zip(lvals, rvals):
                if x is not None and y is not None and x != y:
                    consistent = False
                    break
            if consistent:
                hit = True
                matched_right.add(rid)
                merged = tuple([x if x is not None else y for x, y in zip(lvals, rvals)])
                if merged not in out:
                    if track_provenance and lprov is not None and right.provs[rid] is not None:
                        out[merged] = lprov | right.provs[rid]
                    else:
                        out[merged] = lprov if track_provenance else None
        if not hit:
            out.setdefault(lvals, lprov)
    for rid, rvals in enumerate(rrows):
        if rid not in matched_right:
            out.setdefault(rvals, right.provs[rid])
    return out


def outer_join(left: IntegratedTable, right: IntegratedTable) -> IntegratedTable:
    """Full outer join on shared non-null attribute equality."""
    if left.attributes != right.attributes:
        raise ValueError("operands must share one attribute universe")
    n = len(left.attributes)
    indexed = _IndexedRelation(right._rows, n)
    return IntegratedTable(left.attributes, _join_into(left._rows, indexed, n, True))


def outer_union(relations: Sequence[IntegratedTable]) -> IntegratedTable:
    """Union over the union of attributes, padding missing ones with null."""
    if not relations:
        return IntegratedTable(())
    attrs: list[str] = []
    for rel in relations:
        for a in rel.attributes:
            if a not in attrs:
                attrs.append(a)
    out: dict[tuple[str | None, ...], Provenance | None] = {}
    for rel in relations:
        positions = [rel.attributes.index(a) if a in rel.attributes else None for a in attrs]
        for vals, prov in rel._rows.items():
            padded = tuple(vals[p] if p is not None else None for p in positions)
            out.setdefault(padded, prov)
    return IntegratedTable(attrs, out)


def subsumes(a: WideTuple, b: WideTuple) -> bool:
    """True when a carries strictly more information than b.

    Every attribute of b is either null or equal to a's value, and the
    tuples differ (a tuple never subsumes itself).
    """
    if a.values == b.values:
        return False
    return all(y is None or x == y for x, y in zip(a.values, b.values))


def _remove_subsumed_rows(
        rows: Mapping[tuple[str | None, ...], Provenance | None],
        n_attrs: int) -> dict[tuple[str | None, ...], Provenance | None]:
    # Inverted index: a subsumer of b must appear in the bucket of every
    # non-null (attribute, value) of b, so probing b's smallest bucket
    # bounds the candidate set.
    index: list[dict[str, list[tuple[str | None, ...]]]] = [{} for _ in range(n_attrs)]
    for vals in rows:
        for ai, v in enumerate(vals):
            if v is not None:
                index[ai].setdefault(v, []).append(vals)
    out: dict[tuple[str | None, ...], Provenance | None] = {}
    for vals, prov in rows.items():
        buckets = [index[ai][v] for ai, v in enumerate(vals) if v is not None]
        smallest = min(buckets, key=len)
        subsumed = False
        for other in smallest:
            if other != vals and all(y is None or x == y for x, y in zip(other, vals)):
                subsumed = True
                break
        if not subsumed:
            out[vals] = prov
    return out


def remove_subsumed(table: IntegratedTable) -> IntegratedTable:
    """Keep exactly the tuples not subsumed by any other tuple."""
    return IntegratedTable(table.attributes,
                           _remove_subsumed_rows(table._rows, len(table.attributes)))


def _pad_table(relset: AlignedRelationSet, table: Table,
               track_provenance: bool) -> dict[tuple[str | None, ...], Provenance | None]:
    """Project a source table onto the attribute universe.

    Rows that are null on every integrated attribute carry no joinable
    information and are dropped here.
    """
    positions: list[int | None] = []
    for attr in relset.attributes:
        col = None
        for table_id, column in relset.spec.columns_for(attr):
            if table_id == table.table_id:
                col = table.column_index(column)
                break
        positions.append(col)
    out: dict[tuple[str | None, ...], Provenance | None] = {}
    for ridx, row in enumerate(table.rows):
        vals = tuple(row[p] if p is not None else None for p in positions)
        if all(v is None for v in vals):
            continue
        prov = frozenset({(table.table_id, ridx)}) if track_provenance else None
        out.setdefault(vals, prov)
    return out


def table_as_integrated(relset: AlignedRelationSet, table_id: int) -> IntegratedTable:
    """One source table projected onto the integrated attribute universe."""
    return IntegratedTable(relset.attributes,
                           _pad_table(relset, relset.table(table_id), True))


def full_disjunction(relset: AlignedRelationSet, *,
                     perm_cap: int = DEFAULT_PERMUTATION_CAP,
                     track_provenance: bool = True) -> IntegratedTable:
    """Integrate the set: all-orders outer joins, union, subsumption removal.

    Every permutation of the tables is left-folded through the outer
    join, the per-permutation results are unioned, and subsumed tuples
    are removed. ``perm_cap`` refuses sets whose factorial blow-up would
    be unreasonable. ``track_provenance`` can be switched off to shave
    allocation cost in benchmarks.
    """
    attrs = relset.attributes
    n = len(relset.tables)
    if n == 0:
        return IntegratedTable(attrs)
    if n > perm_cap:
        raise PermutationCapError(
            f"{n} tables exceeds the permutation cap {perm_cap}; "
            f"raise the cap explicitly to proceed"
        )
    n_attrs = len(attrs)
    padded = [_pad_table(relset, t, track_provenance) for t in relset.tables]
    indexed = [_IndexedRelation(p, n_attrs) for p in padded]

    union: dict[tuple[str | None, ...], Provenance | None] = {}
    for order in permutations(range(n)):
        acc = padded[order[0]]
        for k in order[1:]:
            acc = _join_into(acc, indexed[k], n_attrs, track_provenance)
        for vals, prov in acc.items():
            union.setdefault(vals, prov)
    return IntegratedTable(attrs, _remove_subsumed_rows(union, n_attrs))


def fd_oracle(relset: AlignedRelationSet, *, max_tuples: int = 20) -> IntegratedTable:
    """Brute-force reference integration, for verification only.

    Enumerates every combination of at most one row per table, keeps the
    combinations that are pairwise consistent and connected through
    shared non-null attributes, merges each, and removes subsumed
    results. Exponential in the input, hence the tuple bound.
    """
    attrs = relset.attributes
    padded = [list(_pad_table(relset, t, True).items()) for t in relset.tables]
    total = sum(len(p) for p in padded)
    if total > max_tuples:
        raise OracleBoundError(
            f"{total} tuples exceeds the oracle bound {max_tuples}; "
            f"the oracle is desk-scale only"
        )
    merged: dict[tuple[str | None, ...], Provenance | None] = {}
    choices = [[None] + list(range(len(p))) for p in padded]
    for pick in product(*choices):
        chosen = [padded[t][i] for t, i in enumerate(pick) if i is not None]
        if not chosen:
            continue
        k = len(chosen)
        # Pairwise consistency, and connectivity over pairs sharing a
        # non-null attribute.
        adjacency = [set() for _ in range(k)]
        consistent = True
        for i in range(k):
            for j in range(i + 1, k):
                connected = False
                for x, y in zip(chosen[i][0], chosen[j][0]):
                    if x is not None and y is not None:
                        if x != y:
                            consistent = False
                            break
                        connected = True
                if not consistent:
                    break
                if connected:
                    adjacency[i].add(j)
                    adjacency[j].add(i)
            if not consistent:
                break
        if not consistent:
            continue
        if k > 1:
            seen = {0}
            frontier = [0]
            while frontier:
                node = frontier.pop()
                for nxt in adjacency[node]:
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
            if len(seen) != k:
                continue
        vals = list(chosen[0][0])
        prov: Provenance = chosen[0][1] or frozenset()
        for other_vals, other_prov in chosen[1:]:
            for i, v in enumerate(other_vals):
                if vals[i] is None:
                    vals[i] = v
            prov = prov | (other_prov or frozenset())
        merged.setdefault(tuple(vals), prov)
    return IntegratedTable(attrs, _remove_subsumed_rows(merged, len(attrs)))


def write_integrated(table: IntegratedTable, path, *, delimiter: str = ",",
                     include_provenance: bool = False) -> None:
    """Write the integrated table as delimited text, nulls as empty cells.

    With ``include_provenance`` a trailing column lists the contributing
    ``table:row`` pairs of each tuple.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        header = list(table.attributes)
        if include_provenance:
            header.append("provenance")
        writer.writerow(header)
        for wide in table.tuples:
            row = ["" if v is None else v for v in wide.values]
            if include_provenance:
                prov = sorted(wide.provenance or ())
                row.append(";".join(f"{t}:{r}" for t, r in prov))
            writer.writerow(row)
