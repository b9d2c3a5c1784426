"""Command-line surface: subcommands, flags, exit codes."""

import json

import pytest

from fuzzyfd.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def match_args(files, out, *extra):
    return ["match",
            "--tables", str(files["t1"]), str(files["t2"]), str(files["t3"]),
            "--alignment", str(files["alignment"]),
            "--provider", f"dictionary:{files['synonyms']}",
            "--out", str(out), *extra]


class TestMatchCommand:
    def test_writes_report_with_merged_city_set(self, cities_files, tmp_path, capsys):
        out = tmp_path / "report.json"
        code, stdout, _ = run(capsys, *match_args(cities_files, out))
        assert code == 0
        assert "value sets" in stdout
        doc = json.loads(out.read_text())
        berlin = next(s for s in doc["attributes"]["City"]
                      if s["representative"] == "Berlin")
        assert len(berlin["members"]) == 3

    def test_theta_zero_keeps_all_singletons(self, cities_files, tmp_path, capsys):
        out = tmp_path / "report.json"
        code, _, _ = run(capsys, *match_args(cities_files, out, "--theta", "0"))
        assert code == 0
        doc = json.loads(out.read_text())
        assert all(len(s["members"]) == 1
                   for sets in doc["attributes"].values() for s in sets)

    def test_missing_alignment_file_exits_2(self, cities_files, tmp_path, capsys):
        code, _, err = run(
            capsys, "match",
            "--tables", str(cities_files["t1"]),
            "--alignment", str(tmp_path / "nope.json"),
            "--out", str(tmp_path / "r.json"))
        assert code == 2
        assert "error" in err

    def test_unknown_provider_exits_2(self, cities_files, tmp_path, capsys):
        out = tmp_path / "r.json"
        args = match_args(cities_files, out)
        args[args.index("--provider") + 1] = "telepathy"
        code, _, err = run(capsys, *args)
        assert code == 2
        assert "telepathy" in err

    def test_unreachable_remote_exits_1(self, cities_files, tmp_path, capsys):
        out = tmp_path / "r.json"
        args = match_args(cities_files, out)
        args[args.index("--provider") + 1] = "remote:http://127.0.0.1:1"
        code, _, err = run(capsys, *args)
        assert code == 1
        assert "unreachable" in err

    def test_remote_url_env_override(self, cities_files, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("FUZZYFD_EMBED_URL", "http://127.0.0.1:1")
        out = tmp_path / "r.json"
        args = match_args(cities_files, out)
        args[args.index("--provider") + 1] = "remote:http://also-ignored.invalid"
        code, _, err = run(capsys, *args)
        assert code == 1
        assert "127.0.0.1:1" in err


def integrate_args(files, out, *extra):
    return ["integrate",
            "--tables", str(files["t1"]), str(files["t2"]), str(files["t3"]),
            "--alignment", str(files["alignment"]),
            "--provider", f"dictionary:{files['synonyms']}",
            "--out", str(out), *extra]


class TestIntegrateCommand:
    def test_fuzzy_merges_city_variants(self, cities_files, tmp_path, capsys):
        out = tmp_path / "out.csv"
        code, stdout, _ = run(capsys, *integrate_args(cities_files, out))
        assert code == 0
        assert "fuzzy integration" in stdout
        lines = out.read_text().splitlines()
        assert lines[0] == "City,Country,Cases,Deaths,Recovered"
        assert "Berlin,Germany,200,12,160" in lines
        assert len(lines) == 1 + 6

    def test_regular_keeps_variants_apart(self, cities_files, tmp_path, capsys):
        out = tmp_path / "out.csv"
        code, _, _ = run(capsys, *integrate_args(cities_files, out, "--regular"))
        assert code == 0
        text = out.read_text()
        assert "Berlinn,Germany,200,," in text
        assert "Berlin,DE,,12,160" in text

    def test_provenance_column(self, cities_files, tmp_path, capsys):
        out = tmp_path / "out.csv"
        code, _, _ = run(capsys, *integrate_args(cities_files, out, "--provenance"))
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert header.endswith(",provenance")

    def test_match_report_side_output(self, cities_files, tmp_path, capsys):
        out = tmp_path / "out.csv"
        report = tmp_path / "report.json"
        code, _, _ = run(capsys, *integrate_args(cities_files, out,
                                                 "--match-report", str(report)))
        assert code == 0
        assert report.exists()

    def test_empty_input_set(self, tmp_path, capsys):
        spec = tmp_path / "alignment.json"
        spec.write_text("{}", encoding="utf-8")
        out = tmp_path / "out.csv"
        code, _, _ = run(capsys, "integrate", "--tables",
                         "--alignment", str(spec), "--out", str(out))
        assert code == 0
        assert out.read_text().strip() == ""

    def test_permutation_cap_refusal_names_flag(self, tmp_path, capsys):
        paths = []
        spec = {"A": []}
        for i in range(8):
            p = tmp_path / f"t{i}.csv"
            p.write_text(f"A\nv{i}\n", encoding="utf-8")
            paths.append(str(p))
            spec["A"].append({"table": i + 1, "column": "A"})
        spec_path = tmp_path / "alignment.json"
        spec_path.write_text(json.dumps(spec), encoding="utf-8")
        code, _, err = run(capsys, "integrate", "--tables", *paths,
                           "--alignment", str(spec_path), "--regular",
                           "--out", str(tmp_path / "out.csv"))
        assert code == 2
        assert "--perm-cap" in err
        code, _, _ = run(capsys, "integrate", "--tables", *paths,
                         "--alignment", str(spec_path), "--regular",
                         "--perm-cap", "8", "--out", str(tmp_path / "out.csv"))
        assert code == 0


class TestEvalCommand:
    def test_perfect_fixture_scores_ones(self, cities_files, tmp_path, capsys):
        report = tmp_path / "report.json"
        code, _, _ = run(capsys, *match_args(cities_files, report))
        assert code == 0
        scores = tmp_path / "scores.json"
        code, stdout, _ = run(capsys, "eval", "--report", str(report),
                              "--gold", str(cities_files["gold"]),
                              "--out", str(scores))
        assert code == 0
        assert "macro" in stdout
        doc = json.loads(scores.read_text())
        assert doc["macro"] == {"precision": 1.0, "recall": 1.0, "f1": 1.0}
        assert doc["per_attribute"]["City"]["f1"] == 1.0

    def test_malformed_gold_exits_2(self, cities_files, tmp_path, capsys):
        report = tmp_path / "report.json"
        run(capsys, *match_args(cities_files, report))
        bad_gold = tmp_path / "gold.json"
        bad_gold.write_text('{"City": [["only"]]}', encoding="utf-8")
        code, _, err = run(capsys, "eval", "--report", str(report),
                           "--gold", str(bad_gold))
        assert code == 2
        assert "only" in err

    def test_unknown_gold_values_warn(self, cities_files, tmp_path, capsys):
        report = tmp_path / "report.json"
        run(capsys, *match_args(cities_files, report))
        gold = tmp_path / "gold.json"
        gold.write_text('{"City": [["Berlinn", "Berlin"], ["Atlantis", "atlantis"]]}',
                        encoding="utf-8")
        code, _, err = run(capsys, "eval", "--report", str(report), "--gold", str(gold))
        assert code == 0
        assert "Atlantis" in err


class TestBenchCommand:
    def test_smoke_and_determinism(self, tmp_path, capsys):
        out1 = tmp_path / "b1"
        code, stdout, _ = run(capsys, "bench", "--sizes", "60,120", "--repeats", "1",
                              "--seed", "3", "--out-dir", str(out1))
        assert code == 0
        assert "fuzzy_s" in stdout
        doc1 = json.loads((out1 / "bench.json").read_text())
        assert [p["size"] for p in doc1["points"]] == [60, 120]
        out2 = tmp_path / "b2"
        code, _, _ = run(capsys, "bench", "--sizes", "60,120", "--repeats", "1",
                         "--seed", "3", "--out-dir", str(out2))
        assert code == 0
        doc2 = json.loads((out2 / "bench.json").read_text())
        assert [p["size"] for p in doc1["points"]] == [p["size"] for p in doc2["points"]]
        assert (out1 / "bench.csv").exists()
        assert (out1 / "bench_series.csv").exists()

    def test_usage_error_from_argparse(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["bench", "--sizes"])
        assert info.value.code == 2
