"""Shared test fixtures: the cities demo set and small random integration sets."""

from __future__ import annotations

import json
import random

from fuzzyfd import AlignedRelationSet, AlignmentSpec, build_relation_set, make_table

# Three small tables about city case counts. Table 1 has a typo (Berlinn)
# and spells countries in full; table 2 uses country codes and has one row
# with an unknown city; table 3 repeats one city in lowercase. The synonym
# groups below pin down which surface forms mean the same thing.
CITIES_T1 = {
    "columns": ["City", "Country", "Cases"],
    "rows": [
        ["Berlinn", "Germany", "200"],
        ["Toronto", "Canada", "150"],
        ["Barcelona", "Spain", "180"],
        ["New Delhi", "India", "320"],
    ],
}
CITIES_T2 = {
    "columns": ["City", "Country", "Deaths"],
    "rows": [
        ["Toronto", "CA", "6"],
        [None, "US", "9"],
        ["Berlin", "DE", "12"],
        ["Barcelona", "ES", "8"],
    ],
}
CITIES_T3 = {
    "columns": ["City", "Recovered"],
    "rows": [
        ["Berlin", "160"],
        ["barcelona", "140"],
        ["Toronto", "85"],
        ["Boston", "95"],
    ],
}
CITIES_ALIGNMENT = {
    "City": [(1, "City"), (2, "City"), (3, "City")],
    "Country": [(1, "Country"), (2, "Country")],
    "Cases": [(1, "Cases")],
    "Deaths": [(2, "Deaths")],
    "Recovered": [(3, "Recovered")],
}
CITIES_SYNONYMS = [
    ["Berlinn", "Berlin"],
    ["Germany", "DE"],
    ["Canada", "CA"],
    ["Spain", "ES"],
    ["Barcelona", "barcelona"],
]


def build_cities_relset() -> AlignedRelationSet:
    tables = [
        make_table(1, CITIES_T1["columns"], CITIES_T1["rows"], name="t1"),
        make_table(2, CITIES_T2["columns"], CITIES_T2["rows"], name="t2"),
        make_table(3, CITIES_T3["columns"], CITIES_T3["rows"], name="t3"),
    ]
    return build_relation_set(tables, AlignmentSpec(dict(CITIES_ALIGNMENT)))


def write_cities_files(directory):
    """Write the cities fixture as CSV + JSON files; returns their paths."""
    paths = {}
    for name, data in (("t1", CITIES_T1), ("t2", CITIES_T2), ("t3", CITIES_T3)):
        p = directory / f"{name}.csv"
        lines = [",".join(data["columns"])]
        for row in data["rows"]:
            lines.append(",".join("" if c is None else c for c in row))
        p.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths[name] = p
    spec = {
        attr: [{"table": t, "column": c} for t, c in cols]
        for attr, cols in CITIES_ALIGNMENT.items()
    }
    paths["alignment"] = directory / "alignment.json"
    paths["alignment"].write_text(json.dumps(spec, indent=2), encoding="utf-8")
    paths["synonyms"] = directory / "synonyms.json"
    paths["synonyms"].write_text(json.dumps(CITIES_SYNONYMS), encoding="utf-8")
    gold = {
        "City": [["Berlinn", "Berlin"], ["Barcelona", "barcelona"]],
        "Country": [["Germany", "DE"], ["Canada", "CA"], ["Spain", "ES"]],
    }
    paths["gold"] = directory / "gold.json"
    paths["gold"].write_text(json.dumps(gold, indent=2), encoding="utf-8")
    return paths


def random_acyclic_relset(rng: random.Random) -> AlignedRelationSet:
    """2..3 tables over <=4 attributes arranged as a chain or a star.

    Attribute domains are tiny so joins actually fire, and cells go null
    often enough to exercise the labeled-null rules.
    """
    n_tables = rng.choice([2, 3])
    if rng.random() < 0.5:
        shapes = [["A", "B"], ["B", "C"], ["C", "D"]][:n_tables]
    else:
        shapes = [["A", "B"], ["A", "C"], ["A", "D"]][:n_tables]
    tables = []
    alignment: dict[str, list[tuple[int, str]]] = {}
    for i, columns in enumerate(shapes):
        table_id = i + 1
        for col in columns:
            alignment.setdefault(col, []).append((table_id, col))
        n_rows = rng.randint(1, 5)
        rows = []
        for _ in range(n_rows):
            row = []
            for col in columns:
                if rng.random() < 0.25:
                    row.append(None)
                else:
                    row.append(f"{col.lower()}{rng.randint(0, 2)}")
            rows.append(row)
        tables.append(make_table(table_id, columns, rows, name=f"r{table_id}"))
    return build_relation_set(tables, AlignmentSpec(alignment))
