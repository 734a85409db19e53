import json
import random
import subprocess
import sys

import pytest

import aawrangle as aa
from aawrangle import construct, format_dense, format_triples, read_triples
from aawrangle.cli import main

from conftest import random_triples
from oracles import Dense, dense_matmul, filter_range

HEADER = "#aa-triples v1\n#semiring plus_times\n"


def run(*argv):
    return main([str(a) for a in argv])


def write(path, A):
    path.write_text(format_triples(A), encoding="utf-8", newline="")
    return path


def load(path):
    triples, sr = read_triples(path.read_bytes())
    return construct(triples, sr)


@pytest.fixture
def two_records(tmp_path):
    p = tmp_path / "data.json"
    p.write_text(json.dumps([{"x": 1}, {"x": 2}]))
    return p


def test_ingest_json(tmp_path, two_records, capsys):
    out = tmp_path / "t.tsv"
    assert run("ingest", two_records, "-o", out) == 0
    assert out.read_text() == HEADER + "1\tx\t1\n2\tx\t2\n"
    err = capsys.readouterr().err
    assert "records: 2" in err and "triples: 2" in err


def test_ingest_xml_attribute(tmp_path, capsys):
    doc = tmp_path / "doc.xml"
    doc.write_text('<r><item id="7"/></r>')
    assert run("ingest", "--format", "xml", doc) == 0
    assert capsys.readouterr().out == HEADER + "1\titem/@id\t7\n"


def test_ingest_flags(tmp_path, capsys):
    doc = tmp_path / "d.json"
    doc.write_text(json.dumps({"items": [{"id": "a", "tags": ["x", "y"]}]}))
    assert run("ingest", doc, "--record-selector", "items", "--row-id-field", "id",
               "--array-mode", "value_column", "--separator", ".",
               "--semiring", "max_plus") == 0
    out = capsys.readouterr().out
    assert out == ("#aa-triples v1\n#semiring max_plus\n"
                   "a\tid.a\t1\na\ttags.x\t1\na\ttags.y\t1\n")


def test_ingest_count_matches_leaf_oracle(tmp_path):
    from oracles import json_oracle
    import synth
    recs = synth.catalog(random.Random(2), 10 ** 4)
    doc = tmp_path / "cat.json"
    doc.write_text(json.dumps(recs))
    out = tmp_path / "t.tsv"
    assert run("ingest", doc, "--semiring", "union_intersection", "-o", out) == 0
    triples, _ = read_triples(out.read_bytes())
    assert len(triples) == len(json_oracle(recs))


def test_ingest_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('[{"a": 1},\n {"a": }]')
    assert run("ingest", bad) == 2
    assert "line 2" in capsys.readouterr().err
    badx = tmp_path / "bad.xml"
    badx.write_text("<r><a></r>")
    assert run("ingest", badx) == 2
    assert "line 1" in capsys.readouterr().err
    assert run("ingest", tmp_path / "noext") == 1
    assert run("ingest", bad, "--separator", "") == 1


def test_stdin_input(two_records):
    proc = subprocess.run([sys.executable, "-m", "aawrangle", "ingest", "--format", "json", "-"],
                          input=two_records.read_bytes(), capture_output=True)
    assert proc.returncode == 0
    assert proc.stdout.decode() == HEADER + "1\tx\t1\n2\tx\t2\n"


def test_stats(tmp_path, two_records, capsys):
    t = tmp_path / "t.tsv"
    run("ingest", two_records, "-o", t)
    capsys.readouterr()
    assert run("stats", t) == 0
    assert capsys.readouterr().out == "rows: 2\ncols: 1\nentries: 2\nsemiring: plus_times\n"
    empty = write(tmp_path / "e.tsv", aa.empty("plus_times"))
    assert run("stats", empty) == 0
    assert capsys.readouterr().out == "rows: 0\ncols: 0\nentries: 0\nsemiring: plus_times\n"


def test_stats_random_matches_library(tmp_path, rng, capsys):
    A = construct(random_triples(rng, "min_plus"), "min_plus")
    assert run("stats", write(tmp_path / "a.tsv", A)) == 0
    assert capsys.readouterr().out == (f"rows: {A.shape[0]}\ncols: {A.shape[1]}\n"
                                       f"entries: {A.nnz}\nsemiring: min_plus\n")


def test_stats_parse_failure(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text(HEADER + "a\tb\n")
    assert run("stats", bad) == 2
    assert run("stats", tmp_path / "missing.tsv") == 2


def test_add_empty_is_canonical_rewrite(tmp_path, rng):
    A = construct(random_triples(rng, "plus_times"), "plus_times")
    a = tmp_path / "a.tsv"
    # non-canonical order and a duplicate on input
    trip = aa.to_triples(A)
    a.write_text(HEADER + "".join(f"{aa.formats.render_key(r)}\t{aa.formats.render_key(c)}\t"
                                  f"{aa.formats.render_value(v)}\n" for r, c, v in reversed(trip)))
    e = write(tmp_path / "e.tsv", aa.empty("plus_times"))
    out = tmp_path / "o.tsv"
    assert run("add", a, e, "-o", out) == 0
    assert out.read_text() == format_triples(A)


def test_matmul_identity_and_oracle(tmp_path, rng, capsys):
    A = construct(random_triples(rng, "plus_times"), "plus_times")
    a = write(tmp_path / "a.tsv", A)
    i = write(tmp_path / "i.tsv", aa.identity(A.cols, "plus_times"))
    out = tmp_path / "o.tsv"
    assert run("matmul", a, i, "-o", out) == 0
    assert out.read_text() == format_triples(A)
    for name in ("max_plus", "min_max"):
        ta = random_triples(rng, name, nrows=5, ncols=4)
        tb = random_triples(rng, name, nrows=4, ncols=6)
        fa = write(tmp_path / "fa.tsv", construct(ta, name))
        fb = write(tmp_path / "fb.tsv", construct(tb, name))
        assert run("matmul", fa, fb, "-o", out) == 0
        expected = dense_matmul(name, Dense.from_triples(name, ta).entries(),
                                Dense.from_triples(name, tb).entries())
        expected_arr = construct([(r, c, v) for (r, c), v in expected.items()], name)
        assert format_dense(load(out)) == format_dense(expected_arr)


def test_emul_and_mismatch(tmp_path, capsys):
    a = write(tmp_path / "a.tsv", construct([("r", "c", 2)], "plus_times"))
    b = write(tmp_path / "b.tsv", construct([("r", "c", 3)], "max_plus"))
    assert run("emul", a, b) == 2
    assert "semiring mismatch" in capsys.readouterr().err
    assert run("emul", a, b, "--semiring", "max_plus") == 0
    assert capsys.readouterr().out == "#aa-triples v1\n#semiring max_plus\nr\tc\t5\n"


def test_transpose(tmp_path, rng, capsys):
    A = construct(random_triples(rng, "max_min"), "max_min")
    a = write(tmp_path / "a.tsv", A)
    t1, t2 = tmp_path / "t1.tsv", tmp_path / "t2.tsv"
    assert run("transpose", a, "-o", t1) == 0
    assert t1.read_text() == format_triples(A.T)
    assert run("transpose", t1, "-o", t2) == 0
    assert t2.read_text() == a.read_text()
    e = write(tmp_path / "e.tsv", aa.empty("max_min"))
    assert run("transpose", e) == 0
    assert capsys.readouterr().out == "#aa-triples v1\n#semiring max_min\n"


def test_query(tmp_path, two_records, rng, capsys):
    t = tmp_path / "t.tsv"
    run("ingest", two_records, "-o", t)
    capsys.readouterr()
    assert run("query", t, "--rows", "1:1") == 0
    assert capsys.readouterr().out == HEADER + "1\tx\t1\n"
    assert run("query", t, "--rows", "1:2", "--cols", "x:x") == 0
    assert capsys.readouterr().out == t.read_text()
    assert run("query", t, "--rows", "2:1") == 1
    assert "empty-range" in capsys.readouterr().err
    assert run("query", t, "--rows", "12") == 1

    keys = list(range(10)) + list("abcdefghij")
    trip = [(rng.choice(keys), rng.choice(keys), rng.randint(1, 9)) for _ in range(120)]
    f = write(tmp_path / "r.tsv", construct(trip, "plus_times"))
    out = tmp_path / "o.tsv"
    assert run("query", f, "--rows", "3:c", "--cols", "0:5", "-o", out) == 0
    expected = filter_range(Dense.from_triples("plus_times", trip).entries(), (3, "c"), (0, 5))
    assert dict(load(out).items()) == expected


def test_query_keys_as_text(tmp_path, capsys):
    f = write(tmp_path / "t.tsv", construct([("1", "a", 1), ("2", "a", 1)], "plus_times"))
    assert run("query", f, "--rows", "1:1") == 0
    assert capsys.readouterr().out == HEADER  # numeric range misses text keys
    assert run("query", f, "--rows", "1:1", "--keys-as-text") == 0
    assert capsys.readouterr().out == HEADER + "#keys text\n1\ta\t1\n"


def test_pivot(tmp_path, capsys):
    doc = tmp_path / "d.json"
    doc.write_text(json.dumps([{"city": "NY", "kind": "A"}, {"city": "NY", "kind": "A"},
                               {"city": "LA"}]))
    t = tmp_path / "t.tsv"
    assert run("ingest", doc, "--semiring", "union_intersection", "-o", t) == 0
    capsys.readouterr()
    assert run("pivot", t, "--row-field", "city", "--col-field", "kind", "--dense") == 0
    cap = capsys.readouterr()
    assert cap.out == "\tA\nNY\t2\n"
    assert "skipped: 1" in cap.err
    assert run("pivot", t, "--row-field", "city", "--col-field", "kind") == 0
    assert capsys.readouterr().out == HEADER + "NY\tA\t2\n"


def test_pivot_value_mode_group_by(tmp_path, capsys):
    import synth
    from oracles import group_by
    recs = synth.pivot_records(random.Random(21))
    doc = tmp_path / "p.json"
    doc.write_text(json.dumps(recs))
    t = tmp_path / "t.tsv"
    run("ingest", doc, "--semiring", "union_intersection", "-o", t)
    out = tmp_path / "o.tsv"
    assert run("pivot", t, "--row-field", "city", "--col-field", "kind",
               "--value-field", "amt", "--agg", "max_plus", "-o", out) == 0
    expected, _ = group_by(recs, "city", "kind", "amt", "max")
    assert dict(load(out).items()) == expected


def test_pivot_flag_errors(tmp_path, two_records, capsys):
    t = tmp_path / "t.tsv"
    run("ingest", two_records, "-o", t)
    assert run("pivot", t, "--row-field", "x", "--col-field", "x") == 1
    assert "degenerate pivot" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        run("pivot", t, "--row-field", "x")
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run("pivot", t, "--row-field", "x", "--col-field", "y", "--agg", "bogus")
    assert exc.value.code == 1


def test_usage_errors_exit_1():
    for argv in (["nosuch"], [], ["add", "onlyone"], ["ingest", "x.json", "--array-mode", "z"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1


def test_pipeline_composes(tmp_path, rng):
    A = construct(random_triples(rng, "plus_times"), "plus_times")
    a = write(tmp_path / "a.tsv", A)
    t, m = tmp_path / "t.tsv", tmp_path / "m.tsv"
    assert run("transpose", a, "-o", t) == 0
    assert run("matmul", t, a, "-o", m) == 0
    assert aa.equal_within(load(m), A.T @ A, 1e-9)
