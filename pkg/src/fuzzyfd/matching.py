"""Resolve fuzzy value matches across aligned columns.

For one attribute the matcher walks the aligned columns in table order:
it keeps a running combined column of matched-value sets, solves a
minimum-cost bipartite assignment between the combined column's
representatives and the next column's values, drops assigned pairs whose
cosine distance reaches the threshold, and re-selects each merged set's
representative (most frequent value across all aligned columns, ties
broken toward the earliest table). The final sets partition the distinct
values of the attribute; replacing every value by its representative
turns fuzzy agreement into exact agreement, which is what the
integration engine joins on.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .embedding import EmbeddingProvider, cosine_distance_matrix
from .errors import MatcherError
from .tables import AlignedRelationSet, Table, project_aligned

DEFAULT_THETA = 0.7


@dataclass(frozen=True)
class MatcherConfig:
    """Threshold and embedding provider for value matching.

    ``theta`` gates assigned pairs: a pair is kept only when its cosine
    distance is strictly below ``theta``. 0 disables matching entirely
    (every value stays a singleton).
    """

    provider: EmbeddingProvider
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        if not 0.0 <= self.theta < 2.0:
            raise ValueError(f"theta must be in [0, 2), got {self.theta}")


@dataclass(frozen=True)
class AssignedPair:
    left: int
    right: int
    distance: float


def pairwise_assign(left: Sequence[np.ndarray], right: Sequence[np.ndarray],
                    theta: float) -> list[AssignedPair]:
    """Minimum-cost bipartite assignment between two vector lists.

    Solves the rectangular linear sum assignment on the full cosine
    distance matrix (maximum cardinality, minimum total distance), then
    drops every assigned pair whose distance is >= ``theta``. Values left
    unassigned on either side are implicitly singletons. Either side may
    be empty.
    """
    if not len(left) or not len(right):
        return []
    dist = cosine_distance_matrix(left, right, dtype=np.float32)
    rows, cols = linear_sum_assignment(dist)
    return [
        AssignedPair(int(r), int(c), float(dist[r, c]))
        for r, c in zip(rows, cols)
        if dist[r, c] < theta
    ]


def select_representative(members: Sequence[tuple[int, str]], counts: Mapping[str, int],
                          first_table: Mapping[str, int]) -> str:
    """Pick the value standing for a matched set.

    Most frequent across all aligned columns wins; a count tie goes to
    the value whose earliest occurrence is in the lowest-numbered table;
    a remaining tie falls back to lexicographic order for determinism.
    """
    if not members:
        raise ValueError("members must be non-empty")
    candidates = sorted({value for _tid, value in members})
    return min(candidates, key=lambda v: (-counts[v], first_table[v], v))


@dataclass(frozen=True)
class MatchEdge:
    """One kept assignment edge, for audit: values and their distance."""

    left: str
    right: str
    distance: float


@dataclass
class CombinedEntry:
    """One matched-value set in the running combined column."""

    representative: str
    vector: np.ndarray
    members: list[tuple[int, str]]
    count: int
    edges: list[MatchEdge] = field(default_factory=list)


def fold_combine(combined: list[CombinedEntry], next_column: tuple[int, Sequence[str]],
                 config: MatcherConfig, counts: Mapping[str, int],
                 first_table: Mapping[str, int],
                 vectors: Mapping[str, np.ndarray]) -> list[CombinedEntry]:
    """Match the combined column against one more aligned column.

    Matched entries absorb the new value, re-select their representative,
    and carry the representative's vector forward. Unmatched entries and
    unmatched new values survive as separate entries.
    """
    table_id, values = next_column
    if not values:
        return combined
    if not combined:
        return [
            CombinedEntry(v, vectors[v], [(table_id, v)], counts[v])
            for v in values
        ]
    pairs = pairwise_assign([e.vector for e in combined],
                            [vectors[v] for v in values], config.theta)
    matched_right = set()
    out = list(combined)
    for pair in pairs:
        entry = out[pair.left]
        value = values[pair.right]
        matched_right.add(pair.right)
        members = entry.members + [(table_id, value)]
        rep = select_representative(members, counts, first_table)
        out[pair.left] = CombinedEntry(
            representative=rep,
            vector=vectors[rep],
            members=members,
            count=counts[rep],
            edges=entry.edges + [MatchEdge(entry.representative, value, pair.distance)],
        )
    for i, value in enumerate(values):
        if i not in matched_right:
            out.append(CombinedEntry(value, vectors[value], [(table_id, value)], counts[value]))
    return out


@dataclass(frozen=True)
class MatchedValueSet:
    """Final matched set: members, representative, and audit distances.

    ``max_pair_distance`` is the largest direct distance between any two
    members. Folding guarantees every kept edge is below theta, but a set
    grown over several folds can contain member pairs whose direct
    distance exceeds it; the report exposes that instead of hiding it.
    """

    representative: str
    members: tuple[tuple[int, str], ...]
    edges: tuple[MatchEdge, ...]
    max_pair_distance: float


@dataclass(frozen=True)
class AttributeMatch:
    """Match result for one attribute: a partition of its values."""

    attribute: str
    sets: tuple[MatchedValueSet, ...]

    def partition(self) -> list[frozenset[tuple[int, str]]]:
        return [frozenset(s.members) for s in self.sets]

    def representative_map(self) -> dict[tuple[int, str], str]:
        return {m: s.representative for s in self.sets for m in s.members}


def match_values(relset: AlignedRelationSet, attribute: str,
                 config: MatcherConfig) -> AttributeMatch:
    """Solve the fuzzy value match problem for one attribute.

    The combined column starts from the lowest-numbered aligned column
    and folds the remaining columns in ascending table order. Frequency
    counts include within-column duplicates and are computed once, over
    all aligned columns, before folding starts.
    """
    columns = project_aligned(relset, attribute)
    counts: Counter[str] = Counter()
    first_table: dict[str, int] = {}
    distinct_columns: list[tuple[int, list[str]]] = []
    for table_id, values in columns:
        counts.update(values)
        for v in values:
            first_table.setdefault(v, table_id)
        distinct_columns.append((table_id, list(dict.fromkeys(values))))

    all_values = list(first_table)
    if not all_values:
        return AttributeMatch(attribute=attribute, sets=())
    if sum(1 for _tid, vs in distinct_columns if vs) < 2:
        # One populated column: nothing to match against, so every value
        # is its own singleton and embedding it would be wasted work.
        return AttributeMatch(attribute=attribute, sets=tuple(
            MatchedValueSet(representative=v, members=((tid, v),), edges=(),
                            max_pair_distance=0.0)
            for tid, vs in distinct_columns for v in vs
        ))
    vectors = dict(zip(all_values, config.provider.embed_batch(all_values)))

    combined: list[CombinedEntry] = []
    for column in distinct_columns:
        combined = fold_combine(combined, column, config, counts, first_table, vectors)

    sets = []
    for entry in combined:
        members = tuple(sorted(entry.members))
        max_pair = 0.0
        if len(members) > 1:
            vecs = [vectors[v] for _tid, v in members]
            dist = cosine_distance_matrix(vecs, vecs)
            max_pair = float(dist.max())
        sets.append(MatchedValueSet(
            representative=entry.representative,
            members=members,
            edges=tuple(entry.edges),
            max_pair_distance=max_pair,
        ))
    return AttributeMatch(attribute=attribute, sets=tuple(sets))


@dataclass(frozen=True)
class MatchResult:
    """Match results for every attribute of an integration set."""

    attributes: dict[str, AttributeMatch]
    theta: float
    provider: str

    def partition(self) -> dict[str, list[frozenset[tuple[int, str]]]]:
        return {a: m.partition() for a, m in self.attributes.items()}

    def representative_map(self) -> dict[str, dict[tuple[int, str], str]]:
        return {a: m.representative_map() for a, m in self.attributes.items()}


def match_all(relset: AlignedRelationSet, config: MatcherConfig,
              jobs: int | None = None) -> MatchResult:
    """Match every attribute; attributes are independent and can fan out."""
    names = relset.attributes
    provider_name = getattr(config.provider, "describe", lambda: type(config.provider).__name__)()
    if jobs is not None and jobs > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            matches = list(pool.map(lambda a: match_values(relset, a, config), names))
    else:
        matches = [match_values(relset, a, config) for a in names]
    return MatchResult(
        attributes={m.attribute: m for m in matches},
        theta=config.theta,
        provider=provider_name,
    )


def rewrite_tables(relset: AlignedRelationSet,
                   representatives: Mapping[str, Mapping[tuple[int, str], str]]) -> AlignedRelationSet:
    """Replace every aligned cell value by its set's representative.

    Nulls and unaligned columns are untouched; table shapes are
    preserved. A value missing from the map means the matcher did not
    cover its column, which is an internal consistency failure.
    """
    replacements: dict[int, dict[int, Mapping[tuple[int, str], str]]] = {}
    for attribute, mapping in representatives.items():
        for table_id, column in relset.spec.columns_for(attribute):
            col_idx = relset.table(table_id).column_index(column)
            replacements.setdefault(table_id, {})[col_idx] = mapping

    new_tables = []
    for table in relset.tables:
        per_column = replacements.get(table.table_id)
        if not per_column:
            new_tables.append(table)
            continue
        rows = []
        for row in table.rows:
            cells = list(row)
            for col_idx, mapping in per_column.items():
                value = cells[col_idx]
                if value is None:
                    continue
                try:
                    cells[col_idx] = mapping[(table.table_id, value)]
                except KeyError:
                    raise MatcherError(
                        f"value {value!r} in table {table.table_id} column "
                        f"{table.columns[col_idx]!r} has no representative; "
                        f"the match result does not cover its column"
                    ) from None
            rows.append(tuple(cells))
        new_tables.append(Table(
            table_id=table.table_id, columns=table.columns,
            rows=tuple(rows), name=table.name,
        ))
    return AlignedRelationSet(tables=tuple(new_tables), spec=relset.spec)


def write_match_report(result: MatchResult, path) -> None:
    """Write the match result as JSON for audit and for scoring."""
    doc = {
        "theta": result.theta,
        "provider": result.provider,
        "attributes": {
            attr: [
                {
                    "representative": s.representative,
                    "members": [{"table": t, "value": v} for t, v in s.members],
                    "edges": [
                        {"left": e.left, "right": e.right, "distance": round(e.distance, 6)}
                        for e in s.edges
                    ],
                    "max_pair_distance": round(s.max_pair_distance, 6),
                }
                for s in match.sets
            ]
            for attr, match in result.attributes.items()
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def read_match_report(path) -> dict[str, list[frozenset[tuple[int, str]]]]:
    """Read back the partition part of a match report (for scoring)."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return {
        attr: [
            frozenset((int(m["table"]), str(m["value"])) for m in s["members"])
            for s in sets
        ]
        for attr, sets in doc.get("attributes", {}).items()
    }
