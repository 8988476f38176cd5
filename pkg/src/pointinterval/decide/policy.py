"""Class policies: which point theories decide or witness validity for a class."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..classes import ClassTag
from ..formulas import DefinabilityQuery, compile_finite
from ..relations import Sort
from ..structures import Chain, format_element
from .pointlogic import (
    DISCRETE_UNBOUNDED, DLO_OPEN, DLO_THEORIES, Theory, eval_qf, finite_chain, mk_and,
    model_of, negate, satisfying_literals, tidy,
)
from .qe import _qe
from .translate import endpoints, free_point_vars, translate_open

VALID = "VALID"
INVALID = "INVALID"
VALID_ON_REPRESENTATIVES = "VALID_ON_REPRESENTATIVES"


@dataclass(frozen=True)
class ClassPolicy:
    cls: ClassTag
    mode: str                       # "exact" or "representatives"
    models: tuple[Theory, ...]


POLICIES = {
    ClassTag.DEN: ClassPolicy(ClassTag.DEN, "exact",
                              DLO_THEORIES + (finite_chain(0), finite_chain(1))),
    ClassTag.UNB: ClassPolicy(ClassTag.UNB, "representatives", (DLO_OPEN, DISCRETE_UNBOUNDED)),
    # infinite representatives first so their countermodels are reported
    ClassTag.LIN: ClassPolicy(ClassTag.LIN, "representatives",
                              (DLO_OPEN, DISCRETE_UNBOUNDED) + tuple(finite_chain(n) for n in range(7))),
    ClassTag.DIS: ClassPolicy(ClassTag.DIS, "representatives",
                              (DISCRETE_UNBOUNDED,) + tuple(finite_chain(n) for n in range(7))),
}


@dataclass(frozen=True)
class Verdict:
    status: str
    theory: str | None = None
    assignment: dict = field(default_factory=dict)

    def line(self, query_id: str) -> str:
        parts = [query_id, self.status]
        if self.theory:
            parts.append(self.theory)
            parts.extend(f"{k}={format_element(v)}" for k, v in self.assignment.items())
        return " ".join(parts)


def _counter_formula(q: DefinabilityQuery, T: Theory):
    """Quantifier-free formula over the free endpoints, true exactly on countermodels."""
    g, core = translate_open(q)
    return mk_and((_qe(g, T), negate(_qe(core, T), T)))


def _elements(q: DefinabilityQuery, env: dict) -> dict:
    out = {}
    for v, s in zip(q.free, q.target.signature):
        out[v] = tuple(env[e] for e in endpoints(v)) if s is Sort.INTERVAL else env[v]
    return out


def check_theory(q: DefinabilityQuery, T: Theory) -> tuple[bool, dict | None]:
    """(holds, countermodel assignment) of the query in one representative."""
    if T.kind == "FINITE_CHAIN":
        return _check_chain(q, Chain(T.size))
    bad = tidy(_counter_formula(q, T), T)
    pvars = free_point_vars(q)
    if T.dense:
        # over a dense order a quantifier-free formula only sees the order type
        # of its variables against the endpoints, and the grid covers them all
        env = _small_witness(bad, pvars, T)
        return (True, None) if env is None else (False, _elements(q, env))
    lits = satisfying_literals(bad, T)
    if lits is None:
        return True, None
    env = _small_witness(bad, pvars, T)
    if env is None:
        env, Ti = model_of(lits, pvars, T)
        if not eval_qf(bad, _values(env, T), Ti):
            raise AssertionError(f"{T.name}: constructed countermodel does not falsify the query")
    return False, _elements(q, env)


def _values(env: dict, T: Theory) -> dict:
    return {k: Fraction(v) for k, v in env.items()} if T.dense else dict(env)


def _small_witness(bad, pvars: list[str], T: Theory):
    """Least assignment (by largest value used, then lexicographically) from 0..B."""
    n = len(pvars)
    limit = n + 2 if T.dense else 2 * n + 4
    for top in range(limit + 1):
        Ti = T.with_endpoints(0, top) if T.dense else T
        for vals in itertools.product(range(top + 1), repeat=n):
            if top and top not in vals and not Ti.has_max:
                continue
            env = dict(zip(pvars, vals))
            if eval_qf(bad, _values(env, T), Ti):
                return env
    return None


def _check_chain(q: DefinabilityQuery, F: Chain):
    body = compile_finite(q.body, F)
    target = compile_finite(q.target_atom(), F)
    x, y = q.free
    sx, sy = q.target.signature
    for a in F.domain(sx):
        for b in F.domain(sy):
            env = {x: a, y: b}
            if body(env) != target(env):
                return False, env
    return True, None


def decide_validity(q: DefinabilityQuery, cls: ClassTag | str) -> Verdict:
    if isinstance(cls, str):
        cls = ClassTag.parse(cls)
    policy = POLICIES[cls]
    for T in policy.models:
        ok, env = check_theory(q, T)
        if not ok:
            return Verdict(INVALID, T.name, env)
    return Verdict(VALID if policy.mode == "exact" else VALID_ON_REPRESENTATIVES)


def decide_in(q: DefinabilityQuery, T: Theory) -> Verdict:
    ok, env = check_theory(q, T)
    return Verdict(VALID) if ok else Verdict(INVALID, T.name, env)

