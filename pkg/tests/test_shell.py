import json
import re

import pytest

from extricat import cli
from extricat.shell.cache import CatalogCache, atomic_write_text, cache_key
from extricat.shell.context import build_context
from extricat.shell.report import EXIT_CODES, Report, Table, emit_report, parse_report
from extricat.shell.scenario import (BUILTINS, ScenarioError, builtin_scenario, builtin_text,
                                     load_scenario, parse_scenario)
from extricat.repcat.catalog import enumerate_indecomposables
from extricat.verdict import Caps, Status, Verdict


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


# --- scenario parsing --------------------------------------------------------

MINIMAL = """\
[algebra]
field = 3
vertices = a, b, c
arrows = x: a -> b
         , y: b -> c
relations = y*x
"""


def test_parse_minimal():
    s = parse_scenario(MINIMAL, "m")
    assert s.algebra.p == 3
    assert s.algebra.vertices == ("a", "b", "c")
    assert s.algebra.arrows == (("x", "a", "b"), ("y", "b", "c"))
    # composition notation: y*x means x first
    assert s.algebra.relations == (((1, ("x", "y")),),)
    assert s.category.construction == "modules"


@pytest.mark.parametrize("text,line,col", [
    ("", 1, 1),
    ("[algebra]\nfield = 2\nvertices = 1\nflavour = sweet\n", 4, 1),
    ("[algebra]\nfield = 4\nvertices = 1\n", 2, 9),
    ("[nonsense]\n", 1, 2),
    ("[algebra]\nvertices = 1\nvertices = 2\n", 3, 1),
    ("key = value\n", 1, 1),
])
def test_parse_errors_are_located(text, line, col):
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text, "bad")
    assert exc.value.line == line
    assert exc.value.col == col
    assert f"line {line}" in str(exc.value)


def test_empty_file_message():
    with pytest.raises(ScenarioError, match="empty scenario"):
        parse_scenario("# only a comment\n\n", "e")


def test_bad_arrow_and_relation():
    with pytest.raises(ScenarioError):
        parse_scenario("[algebra]\nvertices = 1, 2\narrows = a 1 -> 2\n", "x")
    with pytest.raises(ScenarioError):
        parse_scenario("[algebra]\nvertices = 1, 2\narrows = a: 1 -> 3\n", "x")
    with pytest.raises(ScenarioError) as exc:
        build_context(parse_scenario(
            "[algebra]\nvertices = 1, 2\narrows = a: 1 -> 2\nrelations = a*a\n", "x"))
    assert exc.value.line == 4
    with pytest.raises(ScenarioError) as exc:
        build_context(parse_scenario(
            "[algebra]\nvertices = 1, 2\narrows = a: 1 -> 2, b: 2 -> 1\n", "x"))
    assert "cycle" in str(exc.value) and exc.value.line == 3


def test_unresolved_alias_is_located():
    text = builtin_text("paper-abelian") + "nonsense = Q7\n"
    scn = parse_scenario(text, "x")
    with pytest.raises(ScenarioError) as exc:
        build_context(scn)
    assert exc.value.line == text.count("\n")
    assert "Q7" in str(exc.value)


def test_map_alias_needs_nonzero_hom():
    text = builtin_text("paper-abelian").replace("psi = P1 -> S1", "psi = S1 -> S2")
    with pytest.raises(ScenarioError, match="no nonzero map"):
        build_context(parse_scenario(text, "x"))


def test_unknown_subcategory_object_is_located():
    text = builtin_text("paper-extriangulated").replace("0|S1\n", "0|Q9\n")
    with pytest.raises(ScenarioError) as exc:
        build_context(parse_scenario(text, "x"))
    assert exc.value.line is not None and "0|Q9" in str(exc.value)


def test_bad_override_rejected():
    text = builtin_text("paper-abelian").replace("right = *", "right = *\nj_star = i_shriek")
    with pytest.raises(ScenarioError, match="cannot stand in"):
        build_context(parse_scenario(text, "x"))


def test_builtins(abelian, extri):
    assert set(BUILTINS) == {"paper-abelian", "paper-extriangulated"}
    assert len(abelian.cats["A"].indices) == 3 and len(abelian.cats["B"].indices) == 11
    assert len(extri.cats["B"].indices) == 8
    assert len(extri.cats["C"].indices) == 2 and len(extri.cats["A"].indices) == 3
    assert extri.cats["C"].name == "X2"


def test_load_from_path(tmp_path):
    p = tmp_path / "mine.exs"
    p.write_text(builtin_text("paper-abelian"))
    assert load_scenario(str(p)).digest == builtin_scenario("paper-abelian").digest
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / "missing.exs"))


def test_digest_ignores_caps_and_comments():
    base = builtin_text("paper-abelian")
    a = parse_scenario(base, "a")
    b = parse_scenario("# extra\n" + base + "\n[caps]\nseed = 3\n", "a")
    assert a.digest == b.digest
    assert b.caps.seed == 3


def test_canonical_names_resolve(abelian):
    x = abelian.cats["B"]
    cat = x.catalog
    for i in range(len(cat)):
        assert cat.index_of(cat.names[i]) == i
        assert cat.index_of(cat.display_name(i)) == i
    base = abelian.base
    assert base.index_of("P2") == base.index_of("S2")
    assert base.index_of("I2") == base.index_of("P1")
    assert base.index_of("I1") == base.index_of("S1")


# --- reports -----------------------------------------------------------------

def _sample_report():
    r = Report("demo", "s", "0" * 16, Caps().to_json())
    r.tables["t"] = Table(["a", "b"], ["x", "y", "z"], [[1, 0, 2], [0, 1, 0]], "row")
    r.lists["L"] = ["S1", "P1"]
    r.add_verdict("fine", Verdict.holds())
    r.add_verdict("bad", Verdict.fails({"T": "S1"}, "witnessed"))
    r.add_data("d", {"k": [1, 2]})
    return r


def test_report_round_trip():
    r = _sample_report()
    text = emit_report(r, "json")
    again = parse_report(text)
    assert again == r
    assert emit_report(again, "json") == text
    assert r.exit_code == 1


def test_empty_report_round_trip():
    r = Report("demo", "s", "0" * 16, Caps().to_json())
    assert parse_report(emit_report(r, "json")) == r
    assert r.status is Status.HOLDS and r.exit_code == 0


def test_human_rendering():
    text = emit_report(_sample_report(), "human")
    assert re.search(r"^\[FAILS\]\s+bad — witnessed$", text, re.M)
    assert re.search(r"^\[HOLDS\]\s+fine$", text, re.M)
    assert "overall: FAILS" in text
    lines = Table(["a", "b"], ["x", "y", "z"], [[1, 0, 2], [0, 1, 0]], "row").render()
    assert len({len(l) for l in lines}) == 1   # aligned grid


def test_exit_code_table():
    assert EXIT_CODES[Status.HOLDS] == 0 and EXIT_CODES[Status.FAILS] == 1
    assert EXIT_CODES[Status.UNKNOWN] == 2 and EXIT_CODES[Status.INCONSISTENT] == 4


def test_parse_report_rejects_other_schema():
    with pytest.raises(ValueError):
        parse_report(json.dumps({"schema": "other"}))


# --- cache -------------------------------------------------------------------

def test_cache_round_trip(tmp_path, abelian):
    cache = CatalogCache(tmp_path)
    alg = abelian.base_algebra
    key = cache_key(alg, (1, 1), "modules")
    calls = []

    def compute():
        calls.append(1)
        return enumerate_indecomposables(alg, (1, 1))

    first = cache.get(alg, key, Caps(), compute)
    second = CatalogCache(tmp_path).get(alg, key, Caps(), compute)
    assert calls == [1]
    assert first.same_as(second)
    assert not any(p.name.startswith("tmp") for p in tmp_path.iterdir())


def test_cache_key_depends_on_inputs(abelian):
    alg = abelian.base_algebra
    keys = {cache_key(alg, (1, 1), "modules"), cache_key(alg, (2, 2), "modules"),
            cache_key(alg, (1, 1), "scan"), cache_key(alg, (1, 1), "modules", "x")}
    assert len(keys) == 4


def test_atomic_write(tmp_path):
    p = tmp_path / "out.txt"
    atomic_write_text(p, "one")
    atomic_write_text(p, "two")
    assert p.read_text() == "two" and len(list(tmp_path.iterdir())) == 1


def test_corrupt_cache_entry_is_recomputed(tmp_path, abelian):
    cache = CatalogCache(tmp_path)
    alg = abelian.base_algebra
    key = cache_key(alg, (1, 1), "modules")
    cache.path_for(key).parent.mkdir(parents=True, exist_ok=True)
    cache.path_for(key).write_text("{not json")
    cat = cache.get(alg, key, Caps(), lambda: enumerate_indecomposables(alg, (1, 1)))
    assert len(cat) == 3


# --- CLI ---------------------------------------------------------------------

def test_cli_catalog(capsys):
    code, d = run_json(capsys, "catalog", "paper-abelian")
    assert code == 0
    assert len(d["data"]["mod A objects"]) == 3 and len(d["data"]["mod B objects"]) == 11
    grid = d["tables"]["mod A Ext dimensions"]
    assert sum(map(sum, grid["data"])) == 1
    assert grid["data"][grid["rows"].index("S1")][grid["cols"].index("S2")] == 1


def test_cli_verify_cache(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("EXTRICAT_CACHE_DIR", str(tmp_path))
    for _ in range(2):
        code, d = run_json(capsys, "catalog", "paper-extriangulated", "--verify-cache")
        assert code == 0
        assert d["verdicts"]["cache soundness"]["status"] == "HOLDS"
    assert any(tmp_path.iterdir())


def test_cli_cached_and_uncached_reports_identical(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("EXTRICAT_CACHE_DIR", str(tmp_path))
    _, a, _ = run(capsys, "catalog", "paper-abelian", "--json")
    _, b, _ = run(capsys, "catalog", "paper-abelian", "--json")
    _, c, _ = run(capsys, "catalog", "paper-abelian", "--json", "--no-cache")
    assert a == b == c


def test_cli_usage_errors(capsys, tmp_path):
    assert run(capsys, "catalog", str(tmp_path / "nope.exs"))[0] == 3
    assert run(capsys, "cotorsion", "check", "paper-abelian", "--T", "S1")[0] == 3
    code, _, err = run(capsys, "closure", "paper-abelian", "--objects", "Q1")
    assert code == 3 and "Q1" in err
    assert run(capsys, "frobnicate")[0] == 3
    assert run(capsys, "catalog", "paper-abelian", "--cap", "nonsense=1")[0] == 3
    bad = tmp_path / "bad.exs"
    bad.write_text("[algebra]\nfield = 6\nvertices = 1\n")
    code, _, err = run(capsys, "catalog", str(bad))
    assert code == 3 and "line 2" in err


def test_cli_fails_with_witness(capsys):
    code, d = run_json(capsys, "closure", "paper-abelian", "--in", "A", "--objects", "S2,S1")
    assert code == 1
    (v,) = d["verdicts"].values()
    assert v["status"] == "FAILS" and v["witness"]["middle"]["summands"] == [["P1", 1]]


def test_cli_unknown_exit_code(capsys):
    code, d = run_json(capsys, "closure", "paper-abelian", "--objects", "*",
                       "--cap", "sample_cap=1")
    assert code == 2
    assert d["caps"]["sample_cap"] == 1


def test_cli_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = cli.main(["catalog", "paper-abelian", "--json", "-o", str(out)])
    capsys.readouterr()
    assert code == 0 and parse_report(out.read_text()).command == "catalog"


def test_cli_deterministic(capsys):
    args = ("cotorsion", "enumerate", "paper-abelian", "--in", "A", "--json")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_cli_human_output(capsys):
    code, out, _ = run(capsys, "functor", "check", "paper-abelian", "--functor", "i^*",
                       "--mode", "exact")
    assert code == 1 and "[FAILS]" in out and "overall: FAILS" in out
