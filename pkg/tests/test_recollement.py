import pytest

from extricat.recollement import (check_r1, check_r2, check_r3, check_r4, check_r5,
                                  consequence_suite, enough_injectives, enough_projectives,
                                  full_report, injective_indices, projective_indices,
                                  transfer_check, verify_axioms)
from extricat.shell.context import build_context
from extricat.shell.scenario import builtin_text, parse_scenario
from extricat.verdict import Status


def names(x, idx):
    return {x.catalog.display_name(i) for i in idx}


@pytest.fixture(scope="module")
def corrupted():
    text = builtin_text("paper-abelian").replace(
        "right = *", "right = *\nj_lower_star = j_lower_shriek")
    return build_context(parse_scenario(text, "corrupted")).recollement


def test_projectives_and_injectives(abelian):
    s = abelian.recollement
    assert names(s.A, projective_indices(s.A)) == {"P1", "S2"}
    assert names(s.A, injective_indices(s.A)) == {"P1", "S1"}
    assert names(s.B, projective_indices(s.B)) == {"S2|0", "S2|S2_1", "P1|0", "P1|P1_1"}
    assert names(s.B, injective_indices(s.B)) == {"0|S1", "0|P1", "S1|S1_1", "P1|P1_1"}


def test_subcategory_projectives(extri):
    s = extri.recollement
    assert names(s.B, projective_indices(s.B)) == {"S2|0", "S1|S1_1", "P1|0", "P1|P1_1"}
    # in add(S1 + P1) both objects are projective and injective
    assert names(s.C, projective_indices(s.C)) == {"S1", "P1"}
    assert names(s.C, injective_indices(s.C)) == {"S1", "P1"}


@pytest.mark.parametrize("side", "ABC")
def test_enough_projectives_and_injectives(abelian, extri, side):
    for ctx in (abelian, extri):
        x = ctx.recollement.cat_of(side)
        assert enough_projectives(x).status is Status.HOLDS
        assert enough_injectives(x).status is Status.HOLDS


@pytest.mark.parametrize("which", ["abelian", "extri"])
def test_axioms_hold(request, which):
    s = request.getfixturevalue(which).recollement
    rep = verify_axioms(s)
    assert {k: v.status for k, v in rep.axioms.items()} == {
        k: Status.HOLDS for k in ("functors", "R1", "R2", "R3", "R4", "R5")}


@pytest.mark.parametrize("which", ["abelian", "extri"])
def test_full_report(request, which):
    s = request.getfixturevalue(which).recollement
    rep = full_report(s)
    assert rep.status() is Status.HOLDS
    assert set(rep.consequences) == {"1", "2", "3", "3'", "4.i", "4.j", "4'.i", "4'.j",
                                     "5.P", "5.I", "6.P", "6.I", "7", "7'", "8", "8'"}
    assert rep.transfer["1"].status is Status.HOLDS
    # i^* is never exact here, so everything gated on it is skipped with a witness
    for key in ("4'.i", "8"):
        v = rep.consequences[key]
        assert v.status is Status.SKIPPED
        assert v.witness["hypothesis"] == "i^* exact"
    gate = rep.transfer["2"]
    assert gate.status is Status.SKIPPED
    assert "conflation" in gate.witness["witness"]


def test_i_upper_star_witness(abelian):
    s = abelian.recollement
    v = s.exactness("i_star_upper", "exact")
    assert v.status is Status.FAILS
    conf = v.witness["conflation"]
    # the image of the witness conflation is not left exact
    assert conf["C"] and conf["A"] and v.witness["image"]
    assert s.exactness("i_star_upper", "right").status is Status.HOLDS
    assert s.exactness("i_shriek", "left").status is Status.HOLDS
    assert s.exactness("i_shriek", "exact").status is Status.HOLDS


def test_report_json_shape(extri):
    out = full_report(extri.recollement).to_json()
    assert out["status"] == "HOLDS"
    assert set(out) == {"axioms", "consequences", "transfer", "notes", "status"}
    assert sorted(out["notes"]["projectives"]["C"]) == ["P1", "S1"]


def test_corrupted_recollement_fails(corrupted):
    # j_* replaced by j_!: the image of j_* is no longer the kernel of i^!
    assert check_r1(corrupted).status is Status.FAILS
    assert check_r4(corrupted).status is Status.FAILS
    rep = full_report(corrupted)
    assert rep.status() is Status.FAILS


def test_consequences_without_axioms_are_not_inconsistent(corrupted):
    out = consequence_suite(corrupted, None)
    assert all(v.status is not Status.INCONSISTENT for v in out.values())
    tr = transfer_check(corrupted, None)
    assert all(v.status is not Status.INCONSISTENT for v in tr.values())


def test_individual_axioms(abelian):
    s = abelian.recollement
    for fn in (check_r1, check_r2, check_r3, check_r4, check_r5):
        assert fn(s).status is Status.HOLDS, fn.__name__
