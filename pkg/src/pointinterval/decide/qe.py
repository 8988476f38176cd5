"""Quantifier elimination for dense linear orders and for discrete unbounded orders.

Innermost quantifiers go first.  To eliminate ``x`` the body is put into a
partial disjunctive normal form in which only literals mentioning ``x`` are
multiplied out; subformulas without ``x`` ride along untouched.
"""

from __future__ import annotations

from .pointlogic import (
    FALSE, MAX, MIN, TRUE, Const, Lit, PAnd, PEx, PF, PNot, POr, Theory,
    conj_satisfiable, lt, mk_and, mk_or, negate, simplify_lit, substitute, tidy,
)


def qe(f: PF, T: Theory) -> PF:
    """Equivalent quantifier-free formula over ``T`` (NNF, simplified)."""
    if T.kind == "FINITE_CHAIN":
        raise ValueError("finite chains are decided by enumeration, not elimination")
    return _qe(f, T)


def qe_dense(f: PF, T: Theory) -> PF:
    if not T.dense:
        raise ValueError(f"{T.name} is not a dense theory")
    return _qe(f, T)


def qe_discrete(f: PF, T: Theory | None = None) -> PF:
    from .pointlogic import DISCRETE_UNBOUNDED
    T = T or DISCRETE_UNBOUNDED
    if not T.discrete:
        raise ValueError(f"{T.name} is not discrete")
    return _qe(f, T)


def _qe(f: PF, T: Theory) -> PF:
    if isinstance(f, Const):
        return f
    if isinstance(f, Lit):
        return simplify_lit(f, T)
    if isinstance(f, PAnd):
        return mk_and(_qe(a, T) for a in f.args)
    if isinstance(f, POr):
        return mk_or(_qe(a, T) for a in f.args)
    if isinstance(f, PNot):
        return negate(_qe(f.arg, T), T)
    body = _qe(f.body, T)
    if isinstance(f, PEx):
        return tidy(eliminate(f.var, body, T), T)
    return tidy(negate(eliminate(f.var, negate(body, T), T), T), T)


# -- one existential ---------------------------------------------------------

def _split(f: PF, x: str, T: Theory) -> list[tuple[frozenset, tuple]]:
    """Disjuncts ``(x-literals, x-free conjuncts)`` whose disjunction is ``f``."""
    if x not in f.fv:
        return [(frozenset(), (f,))]
    if isinstance(f, Lit):
        return [(frozenset((f,)), ())]
    if isinstance(f, POr):
        out = []
        for a in f.args:
            out.extend(_split(a, x, T))
        return out
    if isinstance(f, PAnd):
        acc = [(frozenset(), ())]
        for a in f.args:
            parts = _split(a, x, T)
            nxt = {}
            for lits, rest in acc:
                for plits, prest in parts:
                    m = lits | plits
                    if len(m) > len(lits) and len(m) > 1 and not conj_satisfiable(m, T):
                        continue
                    nxt[(m, rest + prest)] = None
            acc = list(nxt)
            if not acc:
                break
        return acc
    raise TypeError(f"unexpected node in quantifier-free formula: {type(f).__name__}")


def eliminate(x: str, body: PF, T: Theory) -> PF:
    """Quantifier-free equivalent of ``ex x. body`` for quantifier-free ``body``."""
    if x not in body.fv:
        return body  # every theory here is nonempty
    groups: dict[frozenset, list[PF]] = {}
    for lits, rest in _split(body, x, T):
        groups.setdefault(lits, []).append(mk_and(rest))
    out = []
    for lits, rests in groups.items():
        core = _eliminate_conj(x, list(lits), T)
        if core == FALSE:
            continue
        out.append(mk_and((core, mk_or(rests))))
    return mk_or(out)


def _eliminate_conj(x: str, lits: list[Lit], T: Theory) -> PF:
    if T.discrete:
        return _eliminate_discrete(x, lits, T)
    return _eliminate_dense(x, lits, T)


def _eliminate_dense(x: str, lits: list[Lit], T: Theory) -> PF:
    for l in lits:
        if l.op == "=":
            t = l.v if l.u == x else l.u
            return mk_and(simplify_lit(substitute(m, x, t), T) for m in lits if m is not l)
    lower = [l.u for l in lits if l.v == x]
    upper = [l.v for l in lits if l.u == x]
    if not lower:
        if not T.has_min:
            return TRUE
        lower = [MIN]
    if not upper:
        if not T.has_max:
            return TRUE
        upper = [MAX]
    return mk_and(simplify_lit(lt(a, b), T) for a in lower for b in upper)


def _eliminate_discrete(x: str, lits: list[Lit], T: Theory) -> PF:
    for l in lits:
        if l.op == "=":
            # x = t + e
            t, e = (l.v, l.d) if l.u == x else (l.u, -l.d)
            return mk_and(simplify_lit(substitute(m, x, t, e), T) for m in lits if m is not l)
    lower, upper = [], []          # inclusive bounds (term, offset)
    for l in lits:
        if l.u == x:               # x < t + d  ->  x <= t + d - 1
            upper.append((l.v, l.d - 1))
        else:                      # t < x + d  ->  x >= t - d + 1
            lower.append((l.u, 1 - l.d))
    if not lower or not upper:
        return TRUE
    # tl + el <= tu + eu  <=>  tl < tu + (eu - el + 1)
    return mk_and(simplify_lit(lt(tl, tu, eu - el + 1), T)
                  for tl, el in lower for tu, eu in upper)


def decide_sentence(f: PF, T: Theory) -> bool:
    if f.fv:
        raise ValueError(f"not a sentence: free variables {sorted(f.fv)}")
    r = qe(f, T)
    if not isinstance(r, Const):
        raise AssertionError(f"elimination left a non-ground residue over {T.name}")
    return r.value
