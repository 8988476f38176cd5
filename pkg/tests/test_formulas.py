import itertools

import pytest
from hypothesis import given, settings

from pointinterval.formulas import (
    And, Atom, DefinabilityQuery, Exists, Forall, FormulaError, FormulaSortError, FormulaSyntaxError,
    Iff, Implies, Not, Or, UnboundVariable, compile_finite, dual_transform, eval_finite, free_vars,
    inline, parse, quantifier_depth, relations_of, rename_free, to_text,
)
from pointinterval.relations import RelationError, Sort, rel
from pointinterval.structures import Chain

from strategies import FREE, formulas

I, P = Sort.INTERVAL, Sort.POINT
XY = {"x": I, "y": I}


def test_parse_atom_and_aliases():
    assert parse("meets(x,y)", XY) == Atom(rel("ii34"), "x", "y")
    assert parse("ii34(x,y)", XY) == parse("meets(x,y)", XY)


def test_precedence():
    f = parse("~ii34(x,y) & ii44(x,y) | ii14(x,y) -> ii03(x,y) <-> ii04(x,y)", XY)
    assert isinstance(f, Iff)
    assert isinstance(f.left, Implies)
    assert isinstance(f.left.left, Or)
    assert isinstance(f.left.left.left, And)
    assert isinstance(f.left.left.left.left, Not)


def test_implication_is_right_associative():
    f = parse("ii34(x,y) -> ii44(x,y) -> ii14(x,y)", XY)
    assert isinstance(f.right, Implies)


def test_quantifier_scope_is_maximal():
    f = parse("all z:i. ii44(z,x) & ii44(z,y)", XY)
    assert isinstance(f, Forall) and isinstance(f.body, And)
    g = parse("(all z:i. ii44(z,x)) & ii44(x,y)", XY)
    assert isinstance(g, And)


def test_sort_errors():
    with pytest.raises(FormulaSortError):
        parse("ii34(x,y)", {"x": I, "y": P})
    with pytest.raises(FormulaSortError):
        parse("ex z:p. ii34(z,x)", XY)


def test_syntax_and_unknown_symbols():
    with pytest.raises(FormulaSyntaxError):
        parse("ii34(x,y) &", XY)
    with pytest.raises((FormulaError, RelationError)):
        parse("ip9(x,y)", {"x": I, "y": P})


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        parse("ii34(x,w)", XY)


def test_free_vars_and_relations():
    f = parse("ex z:i. (ii44(x,z) & ~ii44(y,z))", XY)
    assert free_vars(f) == {"x": I, "y": I}
    assert relations_of(f) == {rel("ii44")}
    assert quantifier_depth(f) == 1


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_print_parse_round_trip(f):
    assert parse(to_text(f), dict(FREE)) == f


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_dual_transform_is_involution(f):
    assert dual_transform(dual_transform(f)) == f


def _dual_env(F: Chain, env: dict) -> dict:
    return {k: F.dual_element(v) for k, v in env.items()}


@settings(max_examples=60, deadline=None)
@given(formulas(depth=2))
def test_dual_transform_reads_the_same_in_the_dual(f):
    for n in range(0, 5):
        F = Chain(n)
        for x in F.intervals:
            for y in F.points:
                env = {"x": x, "y": y}
                assert eval_finite(f, F, env) == eval_finite(dual_transform(f), F, _dual_env(F, env))


def test_dual_transform_example():
    f = parse("ex k:p. (ip0(x,k) & ip2(y,k)) & ii24(x,y) & ii14(x,y)", XY)
    g = dual_transform(f)
    assert to_text(g) == "ex k:p. (ip4(x,k) & ip2(y,k) & ii24(y,x) & ii03(x,y))"


def test_rename_and_inline():
    f = parse("ii44(x,y)", XY)
    assert rename_free(f, {"x": "y", "y": "x"}) == Atom(rel("ii44"), "y", "x")
    meets = parse("ii34(x,y)", XY)
    body = parse("ex z:i. (ii44(x,z) & ~ii34(z,y))", XY)
    d = parse("~ii44(x,y)", XY)
    out = inline(body, rel("ii34"), d)
    assert relations_of(out) == {rel("ii44")}
    assert meets != out


def test_eval_finite_examples():
    F = Chain(4)
    f = parse("ex z:i. (ii34(x,z) & ii34(z,y))", XY)
    assert eval_finite(f, F, {"x": (0, 1), "y": (2, 3)})
    assert not eval_finite(f, F, {"x": (0, 1), "y": (1, 2)})


def test_compiled_matches_interpreted():
    f = parse("all z:i. (ii44(z,x) <-> ii44(z,y))", XY)
    F = Chain(5)
    c = compile_finite(f, F)
    for x, y in itertools.product(F.intervals, repeat=2):
        assert c({"x": x, "y": y}) == eval_finite(f, F, {"x": x, "y": y})


def test_definability_query_validation():
    body = parse("ii44(x,y)", XY)
    with pytest.raises(FormulaError):
        DefinabilityQuery(frozenset({rel("ii34")}), rel("ii14"), body)
    with pytest.raises(FormulaError):
        DefinabilityQuery(frozenset({rel("ii44")}), rel("ii00"), body)
    q = DefinabilityQuery(frozenset({rel("ii44")}), rel("ii14"), body)
    assert q.target_atom() == Atom(rel("ii14"), "x", "y")
