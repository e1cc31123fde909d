import json

import pytest

from favres.cli import main
from favres.resolution import ResolutionPlan, favorable_resolution, koszul_stratum_resolution
from favres.serialize import (
    ParseError,
    complex_from_dict,
    complex_to_dict,
    dumps,
    group_from_dict,
    group_to_dict,
    loads,
    plan_from_dict,
    plan_to_dict,
    report_to_dict,
)
from favres.pseudo_rep import dihedral_group, symmetric_group
from favres.terms import Term
from favres.toy_model import realize_complex, verify_exactness
from favres.weight_lattice import Params, Weight


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_complex_round_trip():
    P = Params(3, 2, 1, delta_threshold=5)
    cx = favorable_resolution(P, Weight((1, 1), 1))
    d = complex_to_dict(cx)
    back = complex_from_dict(loads(dumps(d)))
    assert back.terms == cx.terms and back.diffs == cx.diffs
    assert back.metadata["source"] == cx.metadata["source"]
    assert back.metadata["augmentation"] == cx.metadata["augmentation"]
    assert dumps(complex_to_dict(back)) == dumps(d)


def test_plan_and_group_round_trip():
    P = Params(3, 2, 1)
    plan = ResolutionPlan(P, {frozenset({1}): {1: 2}, frozenset(): None}, 4)
    back = plan_from_dict(loads(dumps(plan_to_dict(plan))), P)
    assert back.by_support == plan.by_support and back.N == 4
    for G in (symmetric_group(3), dihedral_group(4)):
        H = group_from_dict(loads(dumps(group_to_dict(G))))
        assert H.elements == G.elements and H.table == G.table


def test_report_serializes():
    P = Params(3, 2, 1)
    _, cx = koszul_stratum_resolution(P, Term(Weight((1, 1), 1), (0, 0)), {1: 2, 2: 2})
    d = report_to_dict(verify_exactness(realize_complex(cx), (5, 5)))
    assert json.loads(dumps(d)) == d


def test_parse_errors():
    with pytest.raises(ParseError):
        loads("{nope")
    with pytest.raises(ParseError):
        complex_from_dict({"params": {"p": 3, "g": 2}, "w": 1})
    with pytest.raises(ParseError):
        group_from_dict({"elements": ["1", "g"], "table": [["1", "h"], ["g", "1"]]})


def test_resolve_exit0_and_deterministic(capsys):
    c1, o1 = run(capsys, "resolve", "--p", "3", "--g", "2", "--m", "1", "--k", "1,1", "--w", "1")
    c2, o2 = run(capsys, "resolve", "--p", "3", "--g", "2", "--m", "1", "--k", "1,1", "--w", "1")
    assert c1 == c2 == 0
    assert o1 == o2 and o1.endswith("\n")
    assert "differentials" in json.loads(o1)


def test_resolve_parity_error(capsys):
    code, _ = run(capsys, "resolve", "--k", "1,2", "--w", "1")
    assert code == 2


def test_resolve_already_favorable(capsys):
    code, out = run(capsys, "resolve", "--k", "100,100", "--w", "0", "--threshold", "5")
    assert code == 0
    assert json.loads(out)["terms"] == [[{"k": [100, 100], "M": [0, 0]}]]


def test_resolve_budget_exhausted(capsys):
    code, _ = run(capsys, "resolve", "--p", "2", "--g", "2", "--k", "1,1", "--w", "1",
                  "--threshold", "11", "--budget", "8")
    assert code == 6


def test_verify_resolution_round_trip(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, _ = run(capsys, "resolve", "--k", "1,1", "--w", "1", "--out", str(path))
    assert code == 0
    code, out = run(capsys, "verify", str(path), "--mode", "quasi-iso")
    assert code == 0 and json.loads(out)["exact"]


def test_verify_fixtures(capsys, fixture_path):
    assert run(capsys, "verify", fixture_path("stratum_g3.json"), "--mode", "quasi-iso")[0] == 0
    assert run(capsys, "verify", fixture_path("lower_g3.json"), "--mode", "quasi-iso")[0] == 0
    code, out = run(capsys, "verify", fixture_path("corrupted_stratum_g3.json"), "--mode", "quasi-iso")
    assert code == 5
    fails = json.loads(out)["failures"]
    assert fails and "multidegree" in fails[0]


def test_verify_errors(capsys, tmp_path, fixture_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{]")
    assert run(capsys, "verify", str(bad))[0] == 3
    assert run(capsys, "verify", fixture_path("stratum_g3.json"), "--box", "1,1,1")[0] == 4


def test_koszul_shapes(capsys):
    code, out = run(capsys, "koszul", "--kind", "stratum", "--p", "3", "--g", "3",
                    "--k", "1,1,1", "--w", "1", "--M", "2,0,0", "--exponents", "2,2")
    assert code == 0
    assert [len(r) for r in json.loads(out)["terms"]] == [1, 2, 1]
    code, out = run(capsys, "koszul", "--kind", "lower", "--p", "2", "--g", "3",
                    "--k", "1,1,1", "--w", "1", "--M", "2,2,0", "--exponents", "2")
    assert code == 0
    assert [len(r) for r in json.loads(out)["terms"]] == [1, 3, 3, 1]
    code, out = run(capsys, "koszul", "--kind", "stratum", "--p", "3", "--g", "2",
                    "--k", "1,1", "--w", "1", "--M", "2,2", "--exponents", "")
    assert code == 0
    assert [len(r) for r in json.loads(out)["terms"]] == [1]


def test_pseudorep_commands(capsys, fixture_path):
    code, out = run(capsys, "pseudorep", "check", "--group", fixture_path("s3.json"),
                    "--tau", fixture_path("tau_s3_std2.json"), "--d", "2")
    assert code == 0 and json.loads(out)["verdict"]["status"] == "valid"
    code, out = run(capsys, "pseudorep", "relations", "--group", fixture_path("z2.json"))
    assert code == 0 and "t_g^3 - 4*t_g" in json.loads(out)["reduced_t1_eq_2"]
    code, out = run(capsys, "pseudorep", "from-rep", "--group", fixture_path("s3.json"),
                    "--rep", fixture_path("s3_std2.json"))
    assert code == 0 and json.loads(out)["verdict"]["d"] == 2
    code, out = run(capsys, "pseudorep", "check", "--group", fixture_path("s3.json"),
                    "--tau", fixture_path("tau_s3_noncentral.json"), "--d", "2")
    assert code == 5 and json.loads(out)["verdict"]["status"] == "fails-at-condition-2"


def test_jobs_env(capsys, monkeypatch, fixture_path):
    monkeypatch.setenv("FAVRES_JOBS", "2")
    code, out = run(capsys, "verify", fixture_path("stratum_g3.json"), "--mode", "quasi-iso")
    assert code == 0
    # a malformed value falls back to one worker
    monkeypatch.setenv("FAVRES_JOBS", "x")
    assert run(capsys, "verify", fixture_path("stratum_g3.json"), "--mode", "quasi-iso")[0] == 0
    # the bracket alone carries the source in degree 0, so plain exactness fails
    assert run(capsys, "verify", fixture_path("stratum_g3.json"))[0] == 5


def test_unknown_command(capsys):
    assert run(capsys, "frobnicate")[0] == 3
