"""Table loading, null handling, and alignment plumbing."""

import pytest
from hypothesis import given, strategies as st

from fuzzyfd import (AlignmentSpec, build_relation_set, distinct_values, load_table,
                     make_table, project_aligned, value_counts, write_table)
from fuzzyfd.errors import AlignmentError, TableFormatError
from fuzzyfd.tables import load_alignment_spec


def _write(tmp_path, text, name="t.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestLoadTable:
    def test_basic_parse(self, tmp_path):
        t = load_table(_write(tmp_path, "City,Cases\nBerlin,200\n"), table_id=1)
        assert t.columns == ("City", "Cases")
        assert t.rows == (("Berlin", "200"),)

    def test_trailing_empty_cell_is_null(self, tmp_path):
        t = load_table(_write(tmp_path, "City,Cases\nBerlin,\n"), table_id=1)
        assert t.rows[0] == ("Berlin", None)

    def test_ragged_row_rejected_with_index(self, tmp_path):
        path = _write(tmp_path, "A,B,C\n1,2,3\nx,y\n")
        with pytest.raises(TableFormatError, match="row 2"):
            load_table(path, table_id=1)

    @pytest.mark.parametrize("marker", ["NULL", "null", "nan", "NaN", "  null  ", ""])
    def test_default_null_markers(self, tmp_path, marker):
        t = load_table(_write(tmp_path, f'A,B\n"{marker}",x\n'), table_id=1)
        assert t.rows[0][0] is None

    def test_custom_null_marker(self, tmp_path):
        path = _write(tmp_path, "A\nN/A\nkeep\n")
        t = load_table(path, table_id=1, null_markers=["", "N/A"])
        assert [r[0] for r in t.rows] == [None, "keep"]
        # Defaults no longer apply once overridden.
        t2 = load_table(_write(tmp_path, "A\nNULL\n", "u.csv"), table_id=1,
                        null_markers=["", "N/A"])
        assert t2.rows[0][0] == "NULL"

    def test_cells_kept_verbatim_apart_from_trim(self, tmp_path):
        t = load_table(_write(tmp_path, "A\n  MiXeD CaSe  \n"), table_id=1)
        assert t.rows[0][0] == "MiXeD CaSe"

    def test_missing_file(self, tmp_path):
        with pytest.raises(TableFormatError):
            load_table(tmp_path / "nope.csv", table_id=1)

    def test_empty_file(self, tmp_path):
        with pytest.raises(TableFormatError, match="header"):
            load_table(_write(tmp_path, ""), table_id=1)

    def test_alternate_delimiter(self, tmp_path):
        t = load_table(_write(tmp_path, "A;B\n1;2\n"), table_id=1, delimiter=";")
        assert t.rows == (("1", "2"),)


cells = st.one_of(st.none(), st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\r\n\",\x00"),
    min_size=1, max_size=8,
).map(str.strip).filter(lambda s: s and s.lower() not in {"null", "nan"}))


@given(rows=st.lists(st.tuples(cells, cells, cells), max_size=8))
def test_write_then_load_round_trips(tmp_path_factory, rows):
    table = make_table(1, ["c1", "c2", "c3"], rows)
    path = tmp_path_factory.mktemp("rt") / "t.csv"
    write_table(table, path)
    again = load_table(path, table_id=1)
    assert again.rows == table.rows


class TestDistinctValues:
    def test_fixture_city_column(self, cities_relset):
        t2 = cities_relset.table(2)
        assert distinct_values(t2, "City") == ["Toronto", "Berlin", "Barcelona"]

    def test_all_null_column_is_empty(self):
        t = make_table(1, ["A"], [[None], [None]])
        assert distinct_values(t, "A") == []

    def test_duplicates_collapse_but_counts_remain(self):
        t = make_table(1, ["A"], [["A"], ["A"], ["B"]])
        assert distinct_values(t, "A") == ["A", "B"]
        assert value_counts(t, "A") == {"A": 2, "B": 1}

    def test_unknown_column(self):
        t = make_table(1, ["A"], [["x"]])
        with pytest.raises(AlignmentError):
            distinct_values(t, "B")

    def test_no_duplicates_and_subset_of_cells(self, cities_relset):
        for table in cities_relset.tables:
            for col in table.columns:
                vals = distinct_values(table, col)
                assert len(vals) == len(set(vals))
                assert set(vals) <= {c for r in table.rows for c in r if c is not None}


class TestAlignment:
    def test_project_aligned_city(self, cities_relset):
        entries = project_aligned(cities_relset, "City")
        assert [t for t, _ in entries] == [1, 2, 3]
        assert entries[0][1] == ["Berlinn", "Toronto", "Barcelona", "New Delhi"]
        assert entries[1][1] == ["Toronto", "Berlin", "Barcelona"]  # null city skipped
        assert entries[2][1] == ["Berlin", "barcelona", "Toronto", "Boston"]

    def test_single_table_attribute(self, cities_relset):
        entries = project_aligned(cities_relset, "Cases")
        assert entries == [(1, ["200", "150", "180", "320"])]

    def test_unknown_attribute(self, cities_relset):
        with pytest.raises(AlignmentError):
            project_aligned(cities_relset, "Citty")

    def test_two_columns_of_one_table_rejected(self):
        with pytest.raises(AlignmentError):
            AlignmentSpec({"X": [(1, "A"), (1, "B")]})

    def test_reference_to_missing_table(self):
        t = make_table(1, ["A"], [["x"]])
        with pytest.raises(AlignmentError, match="table 2"):
            build_relation_set([t], AlignmentSpec({"X": [(2, "A")]}))

    def test_reference_to_missing_column(self):
        t = make_table(1, ["A"], [["x"]])
        with pytest.raises(AlignmentError, match="'B'"):
            build_relation_set([t], AlignmentSpec({"X": [(1, "B")]}))

    def test_duplicate_table_ids_rejected(self):
        t1 = make_table(1, ["A"], [["x"]])
        t2 = make_table(1, ["B"], [["y"]])
        with pytest.raises(AlignmentError, match="duplicate"):
            build_relation_set([t1, t2], AlignmentSpec({"X": [(1, "A")]}))

    def test_spec_file_must_be_object(self, tmp_path):
        p = tmp_path / "spec.json"
        p.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(AlignmentError):
            load_alignment_spec(p)

    def test_spec_file_entry_shape(self, tmp_path):
        p = tmp_path / "spec.json"
        p.write_text('{"X": [{"table": "one"}]}', encoding="utf-8")
        with pytest.raises(AlignmentError):
            load_alignment_spec(p)
