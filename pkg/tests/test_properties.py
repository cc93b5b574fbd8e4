import pytest

from extricat import properties
from extricat.exstruct import ExCat, Subcat
from extricat.properties import (check_et4, check_ext_round_trip, check_hom_ext_exactness,
                                 hom_ext_sequences, property_suite)
from extricat.repcat.homext import ExtClass, ext_to_conflation
from extricat.verdict import Caps, Status


def test_hom_ext_sequence_on_the_nonsplit_sequence(modA):
    s1, s2 = modA.indecs[modA.index_of("S1")], modA.indecs[modA.index_of("S2")]
    conf = ext_to_conflation(ExtClass(s1, s2, (1,)))
    for x in modA.indecs:
        assert all(hom_ext_sequences(conf, x).values())


def test_suite_on_subcategory_scenario(extri):
    out = property_suite(extri.cats, extri.recollement)
    statuses = {k: v.status for k, v in out.items()}
    assert all(s in (Status.HOLDS, Status.SKIPPED) for s in statuses.values()), statuses
    for side in "ABC":
        assert statuses[f"{side}: Hom-Ext exactness"] is Status.HOLDS
        assert statuses[f"{side}: ET4 certificates"] is Status.HOLDS
    assert statuses["triangle identities"] is Status.HOLDS
    assert statuses["Ext adjunction (i_*, i^!)"] is Status.HOLDS


@pytest.mark.slow
def test_suite_on_abelian_scenario(abelian):
    out = property_suite(abelian.cats, abelian.recollement)
    assert all(v.status in (Status.HOLDS, Status.SKIPPED) for v in out.values())


def test_et4_counts_every_pair(abelian):
    v = check_et4(abelian.cats["B"])
    assert v.status is Status.HOLDS and not v.evidence["truncated"]
    assert v.evidence["pairs"] > 100


def _zero_transport(delta, a=None, c=None):
    C = c.source if c is not None else delta.C
    A = a.target if a is not None else delta.A
    return properties.ext_space(C, A).zero()


def test_broken_transport_is_inconsistent(abelian, monkeypatch):
    # a transport that forgets the class breaks the long exact sequences
    monkeypatch.setattr(properties, "ext_transport", _zero_transport)
    v = check_hom_ext_exactness(abelian.cats["A"])
    assert v.status is Status.INCONSISTENT
    assert v.witness["positions"]


def test_broken_round_trip_is_inconsistent(abelian, monkeypatch):
    monkeypatch.setattr(properties, "conflation_to_ext",
                        lambda c: properties.ext_space(c.C, c.A).zero())
    v = check_ext_round_trip(abelian.cats["A"])
    assert v.status is Status.INCONSISTENT
    assert v.witness["C"] == "S1" and v.witness["A"] == "S2"


def test_round_trip_sampled_is_unknown(modB):
    v = check_ext_round_trip(ExCat(Subcat.full(modB)), Caps(sample_cap=1))
    assert v.status is Status.UNKNOWN
