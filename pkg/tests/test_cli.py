import io
import json

import pytest

from cantube import (
    build_tube_module,
    canonical_type,
    module_to_doc,
    tube_class,
)
from cantube import cli


def run(argv):
    buf = io.StringIO()
    code = cli.run(argv, out=buf)
    return code, buf.getvalue()


def run_json(argv):
    code, out = run(argv + ["--format", "json"])
    assert code == 0, out
    return json.loads(out)


# --- parsing -------------------------------------------------------------------


def test_vector_roundtrip():
    t = canonical_type([2, 3, 3])
    spec = "2,2;3;2,2;2,1"
    d = cli.parse_dim_vector(t, spec)
    assert cli.format_dim_vector(d) == spec
    with pytest.raises(cli.InputError):
        cli.parse_dim_vector(t, "2,2;3;2,2")
    with pytest.raises(cli.InputError):
        cli.parse_dim_vector(t, "2,2;3;2,2;x,1")


def test_regular_part_roundtrip():
    t = canonical_type([2, 3, 3])
    part = cli.parse_regular_part(t, "2:0-2+3:1-1")
    assert str(part) == "2:0-2+3:1-1"
    assert cli.parse_regular_part(t, "0").classes == ()
    with pytest.raises(cli.InputError):
        cli.parse_regular_part(t, "2:0")


# --- verbs ----------------------------------------------------------------------


def test_classify_verb():
    doc = run_json(["classify", "--type", "2,2,2", "--d", "1,1;1;1;1"])
    assert doc["in_R"] and not doc["in_P"]
    assert doc["delta_invariant"] == "-1/4"
    assert doc["threshold_N"] == 3
    assert doc["p"] == 1


def test_candecomp_and_intervals_verbs():
    doc = run_json(["candecomp", "--type", "2,2,2", "--d", "2,2;3;2;2"])
    assert doc["p"] == 2 and doc["table"] == [[0, 1], [0, 0], [0, 0]]
    doc = run_json(["intervals", "--type", "2,2,2", "--d", "2,2;3;2;2"])
    assert doc["ad"] == 5
    assert doc["classes"][0] == [{"j1": 0, "j2": 2}]
    assert doc["inside_multiplicity"][0] == [1, 1]


def test_strata_verb_spec_example():
    doc = run_json(
        ["strata", "--type", "2,2,2", "--d", "1,1;1;1;1", "--level", "cprime"]
    )
    assert doc["count"] == 1
    (row,) = doc["strata"]
    assert row["dim"] == 0
    assert row["dp"] == "1,0;0;0;0" and row["x"] == "1:1-1+2:1-1+3:1-1"


def test_ci_check_verb():
    doc = run_json(["ci-check", "--type", "2,2,2", "--d", "3,3;3;3;3"])
    assert doc["verdict"] is True and doc["s"] == 7
    code, _ = run(["ci-check", "--type", "2,2,2", "--d", "1,1;1;1;1"])
    assert code == 3
    code, _ = run(["ci-check", "--type", "2,3,7", "--d", "3,3;3;3,3;3,3,3,3,3,3"])
    assert code == 3  # wild without the override
    doc = run_json(
        [
            "ci-check",
            "--type",
            "2,3,7",
            "--d",
            "3,3;3;3,3;3,3,3,3,3,3",
            "--assume-irreducible",
        ]
    )
    assert doc["s"] == 13


def test_exit_codes():
    code, _ = run(["classify", "--type", "2,2,2", "--d", "1,1;1;1"])
    assert code == 2
    code, _ = run(["nonsense"])
    assert code == 1
    code, _ = run(["classify", "--type", "2,2"])  # missing --d is a usage error
    assert code == 1
    code, _ = run(["classify", "--type", "2,2", "--d", "1,1;1"])  # bad algebra spec
    assert code == 2
    code, _ = run(["zdim", "--type", "2,2,2", "--d", "0,0;1;1;0"])
    assert code == 3  # no homogeneous part


def test_reduce_verb():
    doc = run_json(
        [
            "reduce",
            "--type",
            "2,2,2",
            "--d",
            "2,2;2;2;2",
            "--dp",
            "1,0;0;0;0",
            "--dq",
            "0,1;0;0;0",
            "--x",
            "1:0-1+1:1-1+2:1-1+3:1-1",
        ]
    )
    assert doc["start"]["quantity"] == 9
    assert [step["quantity"] for step in doc["steps"]] == [8, 6]
    assert doc["final"]["dp"] == "2,1;1;1;1"


def test_hom_verbs(tmp_path):
    doc = run_json(["hom", "--type", "2,2,2", "--a", "1:0-1", "--b", "1:1-1"])
    assert doc["hom"] == 1 and doc["ext1"] == 1
    t = canonical_type([2, 2, 2])
    fa = tmp_path / "a.json"
    fb = tmp_path / "b.json"
    fa.write_text(json.dumps(module_to_doc(build_tube_module(t, tube_class(t, 1, 0, 1)))))
    fb.write_text(json.dumps(module_to_doc(build_tube_module(t, tube_class(t, 1, 1, 1)))))
    doc = run_json(["hom", "--type", "2,2,2", "--mfile-a", str(fa), "--mfile-b", str(fb)])
    assert doc["route"] == "matrix-oracle" and doc["hom"] == 1
    code, _ = run(["hom", "--type", "2,2,2", "--mfile-a", str(fa)])
    assert code == 2
    code, _ = run(["hom", "--type", "2,2,2", "--mfile-a", str(fa), "--mfile-b", "/nope.json"])
    assert code == 2


def test_sweep_formats_and_determinism():
    argv = ["sweep", "--type", "2,2,2", "--p-min", "3", "--p-max", "3", "--tube-bound", "1"]
    doc1 = run_json(argv + ["--jobs", "1"])
    doc2 = run_json(argv + ["--jobs", "2"])
    assert doc1["rows"] == doc2["rows"]
    assert doc1["counterexamples"] == 0
    assert len(doc1["rows"]) == 27
    # rows parse back to identical vectors
    t = canonical_type([2, 2, 2])
    for row in doc1["rows"]:
        d = cli.parse_dim_vector(t, row["d"])
        assert cli.format_dim_vector(d) == row["d"]
    code, out = run(argv + ["--format", "csv"])
    assert code == 0
    lines = [l for l in out.strip().splitlines() if l]
    assert lines[0].startswith("d,p,ad,s,codim,verdict")
    assert lines[-1].startswith("# counterexamples,0")
    assert len(lines) == 2 + 27


def test_sweep_cprime_level_agrees():
    argv = [
        "sweep", "--type", "2,2,2", "--p-min", "2", "--p-max", "2", "--tube-bound", "1",
        "--coord-bound", "3",
    ]
    fast = run_json(argv + ["--level", "c3"])
    slow = run_json(argv + ["--level", "cprime"])
    assert fast["rows"] == slow["rows"]


def test_sweep_empty_box():
    doc = run_json(
        ["sweep", "--type", "2,2,2", "--p-min", "3", "--p-max", "2", "--tube-bound", "1"]
    )
    assert doc["rows"] == [] and doc["counterexamples"] == 0


def test_adm_bound_campaign_direct():
    from cantube import campaigns, canonical_type

    for m, bound in (([2, 2, 2], 4), ([2, 3, 3], 3)):
        rep = campaigns.adm_bound_check(canonical_type(m), bound)
        assert rep.ok and rep.checked > 100


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("CANTUBE_THREADS", "1")
    doc = run_json(
        ["sweep", "--type", "2,2,2", "--p-min", "3", "--p-max", "3", "--tube-bound", "0",
         "--jobs", "8"]
    )
    assert len(doc["rows"]) == 1 and doc["rows"][0]["verdict"] == "true"


def test_verify_verbs():
    doc = run_json(
        ["verify-lemmas", "--type", "2,2,2", "--coord-bound", "2", "--p-max", "2",
         "--max-summands", "1", "--checks", "bound,swap,typea"]
    )
    assert doc["all_ok"]
    assert {rep["name"].split()[0] for rep in doc["reports"]} >= {"inside-multiplicity", "crossing-swap"}
    doc = run_json(["verify-oracle", "--type", "2,2,2", "--length-factor", "1"])
    assert doc["ok"] and doc["checked"] == 12 * 12
