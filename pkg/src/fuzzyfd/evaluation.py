"""Scoring of value-match quality, and the scaling benchmark.

Match quality is scored against gold pairs: the predicted partition is
expanded into unordered cross-column value pairs and compared with the
annotated pairs per attribute (precision, recall, F1; macro and micro
averages). The benchmark times the plain integration engine against the
full fuzzy pipeline on a seeded synthetic multi-table universe, so the
overhead of value matching can be read off one series.
"""

from __future__ import annotations

import gc
import json
import random
import time
from collections import defaultdict
from dataclasses import dataclass
from statistics import median
from typing import Iterable, Mapping, Sequence

from .embedding import EmbeddingProvider, NgramEmbedder
from .errors import GoldFormatError
from .fd import DEFAULT_PERMUTATION_CAP, full_disjunction
from .matching import MatcherConfig, match_all, rewrite_tables
from .tables import AlignedRelationSet, AlignmentSpec, Table, build_relation_set

Partition = Mapping[str, Sequence[frozenset[tuple[int, str]]]]
GoldPairs = Mapping[str, set[frozenset[str]]]


# ---------------------------------------------------------------------------
# Precision / recall / F1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatchScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, n_predicted: int, n_gold: int) -> "MatchScore":
        if n_predicted == 0:
            precision = 1.0 if n_gold == 0 else 0.0
        else:
            precision = tp / n_predicted
        recall = 1.0 if n_gold == 0 else tp / n_gold
        if precision + recall == 0.0:
            f1 = 0.0
        else:
            f1 = 2.0 * precision * recall / (precision + recall)
        return cls(precision, recall, f1)


@dataclass(frozen=True)
class EvaluationReport:
    """Per-attribute scores plus macro and micro averages."""

    per_attribute: dict[str, MatchScore]
    macro: MatchScore
    micro: MatchScore
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "per_attribute": {
                a: {"precision": s.precision, "recall": s.recall, "f1": s.f1}
                for a, s in self.per_attribute.items()
            },
            "macro": {"precision": self.macro.precision, "recall": self.macro.recall,
                      "f1": self.macro.f1},
            "micro": {"precision": self.micro.precision, "recall": self.micro.recall,
                      "f1": self.micro.f1},
            "warnings": list(self.warnings),
        }


def partition_to_pairs(sets: Sequence[frozenset[tuple[int, str]]]) -> set[frozenset[str]]:
    """Expand a partition into unordered cross-column value pairs.

    Only pairs of distinct value strings from different tables count;
    the same string co-occurring in two tables is trivially correct
    under the clean-clean assumption and is not scored.
    """
    pairs: set[frozenset[str]] = set()
    for s in sets:
        members = sorted(s)
        for i, (t1, v1) in enumerate(members):
            for t2, v2 in members[i + 1:]:
                if t1 != t2 and v1 != v2:
                    pairs.add(frozenset((v1, v2)))
    return pairs


def load_gold(path) -> dict[str, set[frozenset[str]]]:
    """Read gold pairs from JSON: ``{attribute: [[value, value], ...]}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise GoldFormatError(f"gold file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise GoldFormatError(f"gold file {path} must be a JSON object")
    gold: dict[str, set[frozenset[str]]] = {}
    for attr, pairs in raw.items():
        out = set()
        for pair in pairs:
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(v, str) for v in pair)):
                raise GoldFormatError(
                    f"gold attribute {attr!r}: expected [value, value], got {pair!r}"
                )
            if pair[0] == pair[1]:
                raise GoldFormatError(
                    f"gold attribute {attr!r}: pair {pair!r} repeats one value"
                )
            out.add(frozenset(pair))
        gold[attr] = out
    return gold


def save_gold(gold: GoldPairs, path) -> None:
    doc = {attr: sorted(sorted(p) for p in pairs) for attr, pairs in gold.items()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def matching_prf(predicted: Partition, gold: GoldPairs) -> EvaluationReport:
    """Score a predicted partition against gold pairs.

    Scoring runs over the attributes present in the gold mapping. Gold
    pairs that reference values absent from the predicted partition's
    columns are ignored and reported as warnings.
    """
    per_attribute: dict[str, MatchScore] = {}
    warnings: list[str] = []
    total_tp = total_pred = total_gold = 0
    for attr in gold:
        sets = list(predicted.get(attr, ()))
        if attr not in predicted:
            warnings.append(f"gold attribute {attr!r} missing from prediction")
        known = {v for s in sets for _t, v in s}
        usable = set()
        for pair in gold[attr]:
            unknown = [v for v in pair if v not in known]
            if unknown:
                warnings.append(
                    f"gold pair {sorted(pair)} for {attr!r} references unknown "
                    f"values {unknown}; ignored"
                )
            else:
                usable.add(pair)
        pred_pairs = partition_to_pairs(sets)
        tp = len(pred_pairs & usable)
        per_attribute[attr] = MatchScore.from_counts(tp, len(pred_pairs), len(usable))
        total_tp += tp
        total_pred += len(pred_pairs)
        total_gold += len(usable)

    if per_attribute:
        scores = list(per_attribute.values())
        macro = MatchScore(
            precision=sum(s.precision for s in scores) / len(scores),
            recall=sum(s.recall for s in scores) / len(scores),
            f1=sum(s.f1 for s in scores) / len(scores),
        )
    else:
        macro = MatchScore(1.0, 1.0, 1.0)
    micro = MatchScore.from_counts(total_tp, total_pred, total_gold)
    return EvaluationReport(per_attribute=per_attribute, macro=macro, micro=micro,
                            warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# Synthetic scaling universe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingFixture:
    """A generated integration set plus its correct-by-construction truth.

    ``synonym_groups`` lists, per corrupted value, the surface forms that
    mean the same thing; ``gold`` holds the cross-column pairs those
    groups induce. Both are empty when corruption is 0.
    """

    relset: AlignedRelationSet
    synonym_groups: tuple[frozenset[str], ...]
    gold: dict[str, set[frozenset[str]]]
    total_rows: int


def _typo(rng: random.Random, value: str) -> str:
    """A seeded small corruption that keeps the string recognizable."""
    chars = list(value)
    op = rng.randrange(3)
    pos = rng.randrange(len(chars))
    if op == 0:
        chars.insert(pos, chars[pos])
    elif op == 1 and len(chars) > 3:
        del chars[pos]
    else:
        chars.insert(pos, rng.choice("abcdef0123456789"))
    variant = "".join(chars)
    return variant if variant != value else variant + "0"


def generate_scaling_set(total_rows: int, *, n_tables: int = 6, overlap: float = 0.5,
                         corruption: float = 0.0,
                         seed: int | str = 0) -> ScalingFixture:
    """Build a seeded multi-table universe of shared entities.

    Entities carry an id (aligned across all tables) and a name (aligned
    across the first three tables); each table adds one private payload
    column. ``overlap`` is the chance that an entity appears in any given
    table; ``corruption`` is the chance that a repeated id or name
    occurrence is replaced by a typo variant, recorded in the synonym
    groups and gold pairs.
    """
    if total_rows < n_tables:
        raise ValueError("total_rows must be at least the table count")
    rng = random.Random(seed)
    named_tables = min(3, n_tables)
    rows: list[list[tuple[str, str | None]]] = [[] for _ in range(n_tables)]
    groups: list[frozenset[str]] = []
    placements: dict[str, list[tuple[int, str]]] = defaultdict(list)

    produced = 0
    seen_ids: set[str] = set()
    while produced < total_rows:
        eid = f"{rng.getrandbits(48):012x}"
        if eid in seen_ids:
            continue
        seen_ids.add(eid)
        member_of = [t for t in range(n_tables) if rng.random() < overlap]
        if not member_of:
            member_of = [rng.randrange(n_tables)]
        member_of = member_of[:total_rows - produced]
        name = "nm-" + eid
        id_forms = {eid}
        name_forms = {name}
        for occurrence, t in enumerate(member_of):
            id_val = eid
            name_val = name
            if occurrence > 0 and rng.random() < corruption:
                id_val = _typo(rng, eid)
                id_forms.add(id_val)
            if t < named_tables and occurrence > 0 and rng.random() < corruption:
                name_val = _typo(rng, name)
                name_forms.add(name_val)
            rows[t].append((id_val, name_val if t < named_tables else None))
            placements["id"].append((t + 1, id_val))
            if t < named_tables:
                placements["name"].append((t + 1, name_val))
        if len(id_forms) > 1:
            groups.append(frozenset(id_forms))
        if len(name_forms) > 1:
            groups.append(frozenset(name_forms))
        produced += len(member_of)

    tables = []
    for t in range(n_tables):
        has_name = t < named_tables
        columns = ["id"] + (["name"] if has_name else []) + [f"m{t + 1}"]
        table_rows = []
        for i, (id_val, name_val) in enumerate(rows[t]):
            payload = f"x{t + 1}-{i}"
            table_rows.append(
                (id_val, name_val, payload) if has_name else (id_val, payload)
            )
        tables.append(Table(
            table_id=t + 1, columns=tuple(columns),
            rows=tuple(table_rows), name=f"synthetic{t + 1}",
        ))

    attributes: dict[str, list[tuple[int, str]]] = {
        "id": [(t + 1, "id") for t in range(n_tables)],
        "name": [(t + 1, "name") for t in range(named_tables)],
    }
    for t in range(n_tables):
        attributes[f"m{t + 1}"] = [(t + 1, f"m{t + 1}")]
    relset = build_relation_set(tables, AlignmentSpec(attributes))

    group_index: dict[str, frozenset[str]] = {}
    for g in groups:
        for v in g:
            group_index[v] = g
    gold: dict[str, set[frozenset[str]]] = {"id": set(), "name": set()}
    for attr, placed in placements.items():
        by_group: dict[frozenset[str], list[tuple[int, str]]] = defaultdict(list)
        for tid, value in placed:
            g = group_index.get(value)
            if g is not None:
                by_group[g].append((tid, value))
        for members in by_group.values():
            for i, (t1, v1) in enumerate(members):
                for t2, v2 in members[i + 1:]:
                    if t1 != t2 and v1 != v2:
                        gold[attr].add(frozenset((v1, v2)))
    return ScalingFixture(
        relset=relset,
        synonym_groups=tuple(groups),
        gold=gold,
        total_rows=total_rows,
    )


# ---------------------------------------------------------------------------
# Runtime benchmark
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BenchPoint:
    """Median timings at one input size, with the raw repeat samples.

    ``regular_samples[i]`` and ``fuzzy_samples[i]`` were measured back to
    back in repeat ``i``, so their elementwise ratios cancel machine
    drift far better than the ratio of medians does.
    """

    size: int
    regular_seconds: float | None = None
    fuzzy_seconds: float | None = None
    matcher_seconds: float | None = None
    censored: bool = False
    regular_samples: tuple[float, ...] = ()
    fuzzy_samples: tuple[float, ...] = ()
    matcher_samples: tuple[float, ...] = ()


@dataclass(frozen=True)
class BenchReport:
    points: tuple[BenchPoint, ...]
    repeats: int
    seed: int
    overlap: float
    corruption: float
    theta: float
    provider: str

    def to_dict(self) -> dict:
        return {
            "repeats": self.repeats,
            "seed": self.seed,
            "overlap": self.overlap,
            "corruption": self.corruption,
            "theta": self.theta,
            "provider": self.provider,
            "points": [
                {
                    "size": p.size,
                    "regular_seconds": p.regular_seconds,
                    "fuzzy_seconds": p.fuzzy_seconds,
                    "matcher_seconds": p.matcher_seconds,
                    "censored": p.censored,
                    "regular_samples": list(p.regular_samples),
                    "fuzzy_samples": list(p.fuzzy_samples),
                }
                for p in self.points
            ],
        }


def bench_scaling(sizes: Sequence[int], *, modes: Iterable[str] = ("regular", "fuzzy"),
                  repeats: int = 3, n_tables: int = 6, overlap: float = 0.5,
                  corruption: float = 0.0, theta: float = 0.7, seed: int = 0,
                  provider: EmbeddingProvider | None = None,
                  timeout_seconds: float | None = None,
                  perm_cap: int = DEFAULT_PERMUTATION_CAP) -> BenchReport:
    """Time plain integration against the fuzzy pipeline across sizes.

    Per size, the regular mode times ``full_disjunction`` alone and the
    fuzzy mode times matching + rewriting + ``full_disjunction``; the
    median over ``repeats`` runs is reported, with the matcher's share
    broken out. Runs are sequential on purpose (timing integrity). A run
    exceeding ``timeout_seconds`` marks its point censored and stops
    that mode from escalating to larger sizes.
    """
    modes = set(modes)
    unknown = modes - {"regular", "fuzzy"}
    if unknown:
        raise ValueError(f"unknown benchmark modes: {sorted(unknown)}")
    sizes = sorted(set(sizes))
    points: list[BenchPoint] = []
    dead_modes: set[str] = set()
    provider_name = "ngram(default)" if provider is None else getattr(
        provider, "describe", lambda: type(provider).__name__)()

    for size in sizes:
        fixture = generate_scaling_set(
            size, n_tables=n_tables, overlap=overlap,
            corruption=corruption, seed=f"{seed}:{size}",
        )
        relset = fixture.relset
        size_provider = provider if provider is not None else NgramEmbedder()
        config = MatcherConfig(provider=size_provider, theta=theta)
        regular_samples: list[float] = []
        fuzzy_samples: list[float] = []
        matcher_samples: list[float] = []
        censored = False

        # Modes alternate within each repeat so cache warm-up and machine
        # load drift do not systematically favor either side; collecting
        # garbage between legs keeps one leg's debris out of the next
        # leg's clock.
        for _ in range(repeats):
            if "regular" in modes and "regular" not in dead_modes:
                gc.collect()
                t0 = time.perf_counter()
                full_disjunction(relset, perm_cap=perm_cap, track_provenance=False)
                regular_samples.append(time.perf_counter() - t0)
                if timeout_seconds is not None and regular_samples[-1] > timeout_seconds:
                    censored = True
                    dead_modes.add("regular")
            if "fuzzy" in modes and "fuzzy" not in dead_modes:
                gc.collect()
                t0 = time.perf_counter()
                result = match_all(relset, config)
                rewritten = rewrite_tables(relset, result.representative_map())
                del result
                t_match = time.perf_counter() - t0
                full_disjunction(rewritten, perm_cap=perm_cap, track_provenance=False)
                fuzzy_samples.append(time.perf_counter() - t0)
                matcher_samples.append(t_match)
                if timeout_seconds is not None and fuzzy_samples[-1] > timeout_seconds:
                    censored = True
                    dead_modes.add("fuzzy")

        points.append(BenchPoint(
            size=size,
            regular_seconds=median(regular_samples) if regular_samples else None,
            fuzzy_seconds=median(fuzzy_samples) if fuzzy_samples else None,
            matcher_seconds=median(matcher_samples) if matcher_samples else None,
            censored=censored,
            regular_samples=tuple(regular_samples),
            fuzzy_samples=tuple(fuzzy_samples),
            matcher_samples=tuple(matcher_samples),
        ))
    return BenchReport(
        points=tuple(points), repeats=repeats, seed=seed, overlap=overlap,
        corruption=corruption, theta=theta, provider=provider_name,
    )


def write_bench_csv(report: BenchReport, path) -> None:
    """Tabular series: one row per size, one timing column per mode."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("size,regular_seconds,fuzzy_seconds,matcher_seconds,censored\n")
        for p in report.points:
            cells = [str(p.size)]
            for v in (p.regular_seconds, p.fuzzy_seconds, p.matcher_seconds):
                cells.append("" if v is None else f"{v:.6f}")
            cells.append("1" if p.censored else "0")
            fh.write(",".join(cells) + "\n")


def write_bench_series(report: BenchReport, path) -> None:
    """Plot-ready long format: mode, size, seconds."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("mode,size,seconds\n")
        for p in report.points:
            if p.regular_seconds is not None:
                fh.write(f"regular,{p.size},{p.regular_seconds:.6f}\n")
            if p.fuzzy_seconds is not None:
                fh.write(f"fuzzy,{p.size},{p.fuzzy_seconds:.6f}\n")


def write_bench_json(report: BenchReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")
