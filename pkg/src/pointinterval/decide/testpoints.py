"""Independent oracle: evaluate quantifiers over finitely many candidate points.

Dense theories: every current value, the midpoint of each adjacent pair, one
point below the least and one above the greatest (endpoint constants take
their place where the theory has them).

Discrete theory: every current value shifted by each ``|s| <= R`` plus a far
point ``R + 1`` beyond each extreme, where ``R = (c + 1) * 2**q``, ``c`` is the
largest literal offset and ``q`` the quantifier depth still to be evaluated.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .pointlogic import (
    Const, Lit, PAll, PAnd, PEx, PF, PNot, POr, Theory, eq, eval_lit, lt,
    max_offset, quantifier_depth,
)


def _dense_candidates(values: set, T: Theory) -> list:
    vals = set(values)
    if T.has_min:
        vals.add(T.lo)
    if T.has_max:
        vals.add(T.hi)
    if not vals:
        return [Fraction(0)]
    s = sorted(vals)
    out = list(s)
    out.extend((a + b) / 2 for a, b in zip(s, s[1:]))
    if not T.has_min:
        out.append(s[0] - 1)
    if not T.has_max:
        out.append(s[-1] + 1)
    return out


def _discrete_candidates(values: set, radius: int) -> list[int]:
    if not values:
        return [0]
    out = {v + s for v in values for s in range(-radius, radius + 1)}
    out.add(min(values) - radius - 1)
    out.add(max(values) + radius + 1)
    return sorted(out)


def eval_testpoints(f: PF, T: Theory, env: dict | None = None) -> bool:
    """Truth of ``f`` in ``T`` under ``env`` (rationals for dense, integers for discrete)."""
    env = dict(env or {})
    missing = f.fv - env.keys()
    if missing:
        raise ValueError(f"no value for free variables {sorted(missing)}")
    for k, v in env.items():
        if T.discrete and not isinstance(v, int):
            raise TypeError(f"{k}={v!r}: discrete theory needs integer values")
        if T.dense and not isinstance(v, (int, Fraction)):
            raise TypeError(f"{k}={v!r}: dense theory needs rational values")
        if T.has_min and v < T.lo or T.has_max and v > T.hi:
            raise ValueError(f"{k}={v} lies outside the order of {T.name}")
    if T.dense:
        env = {k: Fraction(v) for k, v in env.items()}
    c = max_offset(f) + 1
    return _ev(f, env, T, c)


def _ev(f: PF, env: dict, T: Theory, c: int) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Lit):
        return eval_lit(f, env, T)
    if isinstance(f, PAnd):
        return all(_ev(a, env, T, c) for a in f.args)
    if isinstance(f, POr):
        return any(_ev(a, env, T, c) for a in f.args)
    if isinstance(f, PNot):
        return not _ev(f.arg, env, T, c)
    # only values of variables the body can see matter
    seen = {env[v] for v in f.body.fv if v != f.var}
    if T.discrete:
        cands = _discrete_candidates(seen, c * 2 ** quantifier_depth(f))
    else:
        cands = _dense_candidates(seen, T)
    want = isinstance(f, PEx)
    saved = env.get(f.var)
    try:
        for v in cands:
            env[f.var] = v
            if _ev(f.body, env, T, c) == want:
                return want
        return not want
    finally:
        if saved is None:
            env.pop(f.var, None)
        else:
            env[f.var] = saved


# -- random sentences for oracle agreement -----------------------------------

def random_sentence(rng: random.Random, T: Theory, depth: int = 3, size: int = 4) -> PF:
    """A random sentence with at most ``depth`` nested quantifiers."""
    constants = []
    if T.has_min:
        constants.append("$min")
    if T.has_max:
        constants.append("$max")
    counter = [0]

    def atom(scope):
        terms = scope + constants
        u, v = rng.choice(terms), rng.choice(terms)
        d = rng.choice((-1, 0, 0, 1)) if T.discrete else 0
        return (lt if rng.random() < 0.6 else eq)(u, v, d)

    def gen(scope, qleft, budget):
        r = rng.random()
        if qleft and (not scope or r < 0.45):
            counter[0] += 1
            var = f"v{counter[0]}"
            body = gen(scope + [var], qleft - 1, budget)
            return (PEx if rng.random() < 0.5 else PAll)(var, body)
        if budget <= 1 or r < 0.55:
            return atom(scope)
        if r < 0.65:
            return PNot(gen(scope, qleft, budget - 1))
        k = rng.randint(2, 3)
        parts = tuple(gen(scope, qleft if i == 0 else rng.randint(0, qleft), budget // k)
                      for i in range(k))
        return (PAnd if rng.random() < 0.5 else POr)(parts)

    return gen([], depth, size * 2)
