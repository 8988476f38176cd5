import pytest
from hypothesis import given, strategies as st

from pointinterval.relations import (
    ALL, BIT, EXPLICIT, FULL_MASK, I_PLUS, M_PLUS, P_PLUS, Kind, Relation, RelationError,
    dual_symbol_action, format_set, from_mask, inverse, is_reversible, parse_set, rel, reverse,
    symmetric_mask, symmetric_set, to_mask,
)


def test_vocabulary_size():
    assert len(ALL) == 26
    assert len(set(ALL)) == 26
    assert sum(r.kind is Kind.II for r in ALL) == 13


def test_explicit_bit_order():
    names = [r.name for r in EXPLICIT]
    assert names == ["lt", "eqp", "ip0", "ip1", "ip2", "ip3", "ip4",
                     "ii34", "ii44", "ii14", "ii03", "ii04", "ii24", "eqi"]
    assert FULL_MASK == (1 << 14) - 1
    assert to_mask(I_PLUS) | to_mask(M_PLUS) | to_mask(P_PLUS) == FULL_MASK


@pytest.mark.parametrize("alias,name", [
    ("meets", "ii34"), ("before", "ii44"), ("starts", "ii14"), ("finishes", "ii03"),
    ("during", "ii04"), ("overlaps", "ii24"), ("eq_i", "eqi"), ("ii13", "eqi"),
    ("lt", "lt"), ("pp4", "lt"), ("eq_p", "eqp"), ("pp2", "eqp"), ("gt", "gtp"), ("pp0", "gtp"),
])
def test_aliases(alias, name):
    assert rel(alias).name == name


@pytest.mark.parametrize("bad", ["ii11", "ii33", "ii43", "pi01", "pi22", "ip5", "pp1", "xx", "ip9"])
def test_rejects_invalid_symbols(bad):
    with pytest.raises(RelationError):
        rel(bad)


def test_point_partitions_use_even_regions():
    for r in ALL:
        if r.kind in (Kind.PP, Kind.PI):
            assert set(r.regions) <= {0, 2, 4}


def test_inverse_is_involution_everywhere():
    for r in ALL:
        assert inverse(inverse(r)) == r
        sx, sy = r.signature
        assert inverse(r).signature == (sy, sx)


@pytest.mark.parametrize("r,inv", [
    ("ii34", "ii01"), ("ii44", "ii00"), ("ii14", "ii12"), ("ii03", "ii23"),
    ("ii04", "ii22"), ("ii24", "ii02"), ("eqi", "eqi"), ("lt", "gtp"), ("ip0", "pi44"), ("ip2", "pi04"),
])
def test_inverse_examples(r, inv):
    assert inverse(rel(r)).name == inv


def test_reverse_pairs():
    pairs = {("ip0", "ip4"), ("ip1", "ip3"), ("ii14", "ii03")}
    for a, b in pairs:
        assert reverse(rel(a)) == rel(b) and reverse(rel(b)) == rel(a)
        assert is_reversible(rel(a))
    for r in EXPLICIT:
        assert reverse(reverse(r)) == r


def test_dual_symbol_action():
    assert dual_symbol_action(rel("ip2")) == (rel("ip2"), False)
    assert dual_symbol_action(rel("ii04")) == (rel("ii04"), False)
    assert dual_symbol_action(rel("ip0")) == (rel("ip4"), False)
    for name in ("lt", "eqp", "eqi", "ii34", "ii44", "ii24"):
        assert dual_symbol_action(rel(name)) == (rel(name), True)


def test_symmetric_mask_examples():
    assert symmetric_mask(parse_set("ip0")) == parse_set("ip4")
    assert symmetric_mask(parse_set("ip1,ii04")) == parse_set("ip3,ii04")
    assert symmetric_mask(parse_set("ii44")) == parse_set("ii44")
    assert symmetric_set({rel("ii14"), rel("lt")}) == {rel("ii03"), rel("lt")}


def test_symmetric_mask_involution_exhaustive():
    for m in range(FULL_MASK + 1):
        assert symmetric_mask(symmetric_mask(m)) == m


@given(st.integers(0, FULL_MASK))
def test_mask_text_round_trip(m):
    assert parse_set(format_set(m)) == m
    assert to_mask(from_mask(m)) == m


def test_parse_set_rejects_non_explicit():
    with pytest.raises(RelationError):
        parse_set("ii00")
