"""Hypothesis strategies for well-sorted formulas over the explicit relations."""

from hypothesis import strategies as st

from pointinterval.formulas import And, Atom, Exists, Forall, Iff, Implies, Not, Or
from pointinterval.relations import EXPLICIT, Sort

FREE = {"x": Sort.INTERVAL, "y": Sort.POINT}


def _atoms(scope: dict):
    options = []
    for r in EXPLICIT:
        sx, sy = r.signature
        xs = [v for v, s in scope.items() if s is sx]
        ys = [v for v, s in scope.items() if s is sy]
        if xs and ys:
            options.append(st.tuples(st.just(r), st.sampled_from(xs), st.sampled_from(ys)))
    return st.one_of(options).map(lambda t: Atom(*t))


def formulas(scope: dict | None = None, depth: int = 3):
    scope = dict(scope or FREE)
    if depth == 0:
        return _atoms(scope)
    sub = formulas(scope, depth - 1)
    fresh = f"v{depth}"
    quant = st.sampled_from([Sort.POINT, Sort.INTERVAL]).flatmap(
        lambda s: st.tuples(st.sampled_from([Forall, Exists]), st.just(s),
                            formulas({**scope, fresh: s}, depth - 1)))
    return st.one_of(
        _atoms(scope),
        sub.map(Not),
        st.tuples(st.sampled_from([And, Or, Implies, Iff]), sub, sub).map(lambda t: t[0](t[1], t[2])),
        quant.map(lambda t: t[0](fresh, t[1], t[2])),
    )
