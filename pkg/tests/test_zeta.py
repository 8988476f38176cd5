from fractions import Fraction

import pytest

from pointinterval.relations import rel
from pointinterval.zeta import (
    ORDERS, ZetaError, catalog, find_witness, format_element, loads, parse_element, verify,
)

HEAD = "zeta t class=Den domain=QQ respects=eqp,lt breaks=ip0\n"


def _spec(text: str):
    (s,) = loads(text)
    return s


def test_elements_round_trip():
    assert parse_element("1/2") == Fraction(1, 2)
    assert parse_element("[0, 3/2]") == (Fraction(0), Fraction(3, 2))
    for e in (Fraction(-7, 3), (Fraction(0), Fraction(1, 2))):
        assert parse_element(format_element(e)) == e


def test_order_grid():
    assert ORDERS["ZZ"].grid() == [Fraction(n) for n in range(-20, 21)]
    q01 = ORDERS["QQ01"].grid()
    assert min(q01) == 0 and max(q01) == 1 and Fraction(1, 6) in q01


@pytest.mark.parametrize("text, fragment", [
    ("zeta t class=Den domain=RR respects=eqp breaks=lt\n", "unknown order"),
    ("zeta t class=Den domain=QQ respects=eqp,lt breaks=lt\n", "both respected and broken"),
    ("zeta t class=Den domain=QQ respects=eqp\n", "missing field"),
    (HEAD + 'point map out="a**2"\n', "unsupported"),
    (HEAD + 'point map out="a + 0.5"\n', "integer literals"),
    (HEAD + 'interval map out="a"\n', "[left,right]"),
    (HEAD + 'point map out="c"\n', "unknown variable"),
    ('point map out="a"\n', "before any"),
    (HEAD + HEAD, "duplicate id"),
    ("zeta t class=Den domain=QQ respects=eqp breaks=lt expect=magic\n", "unknown check"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ZetaError, match=None) as ei:
        loads(text)
    assert fragment in str(ei.value)


def test_catalog_loads_with_a_witness_for_every_broken_relation():
    specs = catalog()
    assert len(specs) >= 20
    for s in specs:
        assert set(s.witnesses) >= set(s.breaks) or s.expect_fail


@pytest.mark.parametrize("spec", [s for s in catalog() if not s.expect_fail], ids=lambda s: s.id)
def test_catalog_specs_verify(spec):
    rep = verify(spec, samples=500, seed=1)
    assert rep.ok, rep.lines()


def test_uncorrected_construction_fails_as_predicted():
    (spec,) = [s for s in catalog() if "negative-fixture" in s.flags]
    rep = verify(spec, samples=500, seed=1)
    assert "surjective" in rep.failed
    assert rep.as_expected
    assert "expected failure confirmed" in rep.lines()[-1]


def test_mutated_map_breaks_respect():
    spec = _spec("zeta m class=Den domain=QQ respects=lt,eqp breaks=ip0\n"
                 'point map out="-a"\npoint inverse out="-a"\n'
                 'witness ip0 args="[-1/2,0];0" images="[-1/2,0];0"\n')
    rep = verify(spec, samples=200)
    assert "respect" in rep.failed


def test_wrong_witness_is_rejected():
    good = next(s for s in catalog() if s.id == "den-flip-start")
    text = ("zeta w class=Den domain=QQ respects=eqp,eqi,ip1,ii14 breaks=lt,ip0\n"
            'point map out="-a"\npoint inverse out="-a"\n'
            'interval map out="[-a, b-2*a]"\ninterval inverse out="[-a, b-2*a]"\n'
            'witness lt args="0;1" images="0;1"\n'
            'witness ip0 args="[-1/2,0];0" images="[1/2,1];0"\n')
    rep = verify(_spec(text), samples=100)
    assert rep.failed == {"break"}
    assert verify(good, samples=100).ok


def test_soundness_flags_derivable_breaks():
    spec = _spec("zeta s class=Den domain=QQ respects=ii44 breaks=ii34\n"
                 'witness ii34 args="[0,1];[1,2]" images="[0,1];[1,2]"\n')
    rep = verify(spec, samples=50)
    assert "soundness" in rep.failed


def test_find_witness_for_reflection():
    spec = next(s for s in catalog() if s.id == "den-reflection")
    r = spec.breaks[0]
    w = find_witness(spec, r)
    assert w is not None
