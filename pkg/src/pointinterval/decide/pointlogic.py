"""One-sorted formulas over a linear order of points.

Literals are ``u < v + d`` and ``u = v + d`` where ``u``/``v`` are variable
names or the endpoint constants ``$min``/``$max`` and ``d`` is an integer
offset (always 0 over dense orders).  Nodes cache their hash and free
variables because quantifier elimination hashes them constantly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

MIN, MAX = "$min", "$max"
CONSTANTS = frozenset({MIN, MAX})


@dataclass(frozen=True)
class Theory:
    """A complete theory of points, with numeric endpoint values for evaluation."""

    kind: str
    lo: Fraction | None = None
    hi: Fraction | None = None
    size: int | None = None

    @property
    def name(self) -> str:
        return f"FINITE_CHAIN({self.size})" if self.kind == "FINITE_CHAIN" else self.kind

    @property
    def discrete(self) -> bool:
        return self.kind == "DISCRETE_UNBOUNDED"

    @property
    def dense(self) -> bool:
        return self.kind.startswith("DLO")

    @property
    def has_min(self) -> bool:
        return self.kind in ("DLO_left", "DLO_closed")

    @property
    def has_max(self) -> bool:
        return self.kind in ("DLO_right", "DLO_closed")

    def with_endpoints(self, lo, hi) -> "Theory":
        return Theory(self.kind, Fraction(lo) if self.has_min else None,
                      Fraction(hi) if self.has_max else None)

    def __str__(self):
        return self.name


DLO_OPEN = Theory("DLO_open")
DLO_LEFT = Theory("DLO_left", lo=Fraction(0))
DLO_RIGHT = Theory("DLO_right", hi=Fraction(0))
DLO_CLOSED = Theory("DLO_closed", lo=Fraction(0), hi=Fraction(1))
DISCRETE_UNBOUNDED = Theory("DISCRETE_UNBOUNDED")
DLO_THEORIES = (DLO_OPEN, DLO_LEFT, DLO_RIGHT, DLO_CLOSED)


def finite_chain(n: int) -> Theory:
    return Theory("FINITE_CHAIN", size=n)


def theory_by_name(name: str) -> Theory:
    for t in DLO_THEORIES + (DISCRETE_UNBOUNDED,):
        if t.kind.lower() == name.lower():
            return t
    raise ValueError(f"unknown point theory {name!r}")


# -- nodes -------------------------------------------------------------------

class PF:
    __slots__ = ("_h", "fv")

    def __init_subclass__(cls, **kw):
        super().__init_subclass__(**kw)
        cls.__hash__ = PF.__hash__

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"<{show(self)}>"


class Const(PF):
    __slots__ = ("value",)

    def __init__(self, value: bool):
        self.value = value
        self.fv = frozenset()
        self._h = hash(value)

    def __eq__(self, other):
        return isinstance(other, Const) and other.value == self.value


TRUE, FALSE = Const(True), Const(False)


class Lit(PF):
    __slots__ = ("op", "u", "v", "d")

    def __init__(self, op: str, u: str, v: str, d: int = 0):
        if op == "=" and u > v:
            u, v, d = v, u, -d
        self.op, self.u, self.v, self.d = op, u, v, d
        self.fv = frozenset(t for t in (u, v) if t not in CONSTANTS)
        self._h = hash((op, u, v, d))

    def __eq__(self, other):
        return (isinstance(other, Lit) and self._h == other._h and self.op == other.op
                and self.u == other.u and self.v == other.v and self.d == other.d)


class _Nary(PF):
    __slots__ = ("args",)
    tag = ""

    def __init__(self, args: tuple):
        self.args = args
        self.fv = frozenset().union(*(a.fv for a in args))
        self._h = hash((self.tag, args))

    def __eq__(self, other):
        return type(other) is type(self) and self._h == other._h and self.args == other.args


class PAnd(_Nary):
    __slots__ = ()
    tag = "and"


class POr(_Nary):
    __slots__ = ()
    tag = "or"


class PNot(PF):
    __slots__ = ("arg",)

    def __init__(self, arg: PF):
        self.arg = arg
        self.fv = arg.fv
        self._h = hash(("not", arg))

    def __eq__(self, other):
        return isinstance(other, PNot) and self.arg == other.arg


class _Quant(PF):
    __slots__ = ("var", "body")
    tag = ""

    def __init__(self, var: str, body: PF):
        self.var, self.body = var, body
        self.fv = body.fv - {var}
        self._h = hash((self.tag, var, body))

    def __eq__(self, other):
        return type(other) is type(self) and self.var == other.var and self.body == other.body


class PEx(_Quant):
    __slots__ = ()
    tag = "ex"


class PAll(_Quant):
    __slots__ = ()
    tag = "all"


def lt(u: str, v: str, d: int = 0) -> Lit:
    return Lit("<", u, v, d)


def eq(u: str, v: str, d: int = 0) -> Lit:
    return Lit("=", u, v, d)


def implies(a: PF, b: PF) -> PF:
    return POr((PNot(a), b))


def iff(a: PF, b: PF) -> PF:
    return PAnd((implies(a, b), implies(b, a)))


def exists(vars_: Iterable[str], body: PF) -> PF:
    for v in reversed(list(vars_)):
        body = PEx(v, body)
    return body


def forall(vars_: Iterable[str], body: PF) -> PF:
    for v in reversed(list(vars_)):
        body = PAll(v, body)
    return body


# -- printing ----------------------------------------------------------------

def _term(t: str, d: int = 0) -> str:
    name = {MIN: "min", MAX: "max"}.get(t, t)
    if d == 0:
        return name
    return f"{name}+{d}" if d > 0 else f"{name}{d}"


def show(f: PF) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Lit):
        # u < v + d is printed with the offset on whichever side keeps it positive
        if f.d >= 0:
            return f"{_term(f.u)} {f.op} {_term(f.v, f.d)}"
        return f"{_term(f.u, -f.d)} {f.op} {_term(f.v)}"
    if isinstance(f, PNot):
        return "~" + _wrap(f.arg)
    if isinstance(f, _Nary):
        op = " & " if isinstance(f, PAnd) else " | "
        return op.join(_wrap(a) for a in f.args)
    q = "ex" if isinstance(f, PEx) else "all"
    return f"{q} {f.var}. {show(f.body)}"


def _wrap(f: PF) -> str:
    return "(" + show(f) + ")" if isinstance(f, (_Nary, _Quant)) else show(f)


# -- simplification ----------------------------------------------------------

def simplify_lit(l: Lit, T: Theory) -> PF:
    """Reduce ground literals and endpoint facts; return the literal otherwise."""
    if l.d and not T.discrete:
        raise ValueError(f"offset literal {show(l)} under dense theory {T.name}")
    if l.u == l.v:
        return TRUE if (l.d > 0 if l.op == "<" else l.d == 0) else FALSE
    if T.discrete:
        if l.u in CONSTANTS or l.v in CONSTANTS:
            raise ValueError("endpoint constant under an unbounded theory")
        return l
    u, v = l.u, l.v
    if l.op == "<":
        if v == MIN or u == MAX:
            return FALSE
        if u == MIN and v == MAX:
            return TRUE
    elif {u, v} == CONSTANTS:
        return FALSE
    for t in (u, v):
        if (t == MIN and not T.has_min) or (t == MAX and not T.has_max):
            raise ValueError(f"theory {T.name} has no {_term(t)} constant")
    return l


def mk_and(args: Iterable[PF]) -> PF:
    out: dict[PF, None] = {}
    for a in args:
        if isinstance(a, PAnd):
            for b in a.args:
                out[b] = None
        elif isinstance(a, Const):
            if not a.value:
                return FALSE
        else:
            out[a] = None
    if not out:
        return TRUE
    if len(out) == 1:
        return next(iter(out))
    return PAnd(tuple(out))


def mk_or(args: Iterable[PF]) -> PF:
    out: dict[PF, None] = {}
    for a in args:
        if isinstance(a, POr):
            for b in a.args:
                out[b] = None
        elif isinstance(a, Const):
            if a.value:
                return TRUE
        else:
            out[a] = None
    if not out:
        return FALSE
    if len(out) == 1:
        return next(iter(out))
    return POr(tuple(out))


def negate_lit(l: Lit, discrete: bool) -> PF:
    if l.op == "<":
        if discrete:
            # not (u < v+d)  <=>  v+d <= u  <=>  v < u-d+1
            return lt(l.v, l.u, 1 - l.d)
        return POr((lt(l.v, l.u), eq(l.u, l.v)))
    return POr((lt(l.u, l.v, l.d), lt(l.v, l.u, -l.d)))


def negate(f: PF, T: Theory) -> PF:
    """Negation pushed down to literals (quantifiers are dualized)."""
    if isinstance(f, Const):
        return FALSE if f.value else TRUE
    if isinstance(f, Lit):
        n = negate_lit(f, T.discrete)
        if isinstance(n, Lit):
            return simplify_lit(n, T)
        return mk_or(simplify_lit(a, T) for a in n.args)
    if isinstance(f, PNot):
        return f.arg
    if isinstance(f, PAnd):
        return mk_or(negate(a, T) for a in f.args)
    if isinstance(f, POr):
        return mk_and(negate(a, T) for a in f.args)
    if isinstance(f, PEx):
        return PAll(f.var, PNot(f.body))
    return PEx(f.var, PNot(f.body))


def substitute(f: PF, x: str, t: str, e: int = 0) -> PF:
    """Replace ``x`` by the term ``t + e`` in a quantifier-free formula."""
    if x not in f.fv:
        return f
    if isinstance(f, Lit):
        u, v, d = f.u, f.v, f.d
        if u == x:
            u, d = t, d - e
        if v == x:
            v, d = t, d + e
        return Lit(f.op, u, v, d)
    if isinstance(f, PAnd):
        return mk_and(substitute(a, x, t, e) for a in f.args)
    if isinstance(f, POr):
        return mk_or(substitute(a, x, t, e) for a in f.args)
    if isinstance(f, PNot):
        return PNot(substitute(f.arg, x, t, e))
    raise TypeError("substitute expects a quantifier-free formula")


def simplify(f: PF, T: Theory) -> PF:
    """Ground-reduce literals and flatten connectives (quantifier-free input)."""
    if isinstance(f, Lit):
        return simplify_lit(f, T)
    if isinstance(f, PAnd):
        return mk_and(simplify(a, T) for a in f.args)
    if isinstance(f, POr):
        return mk_or(simplify(a, T) for a in f.args)
    if isinstance(f, PNot):
        return negate(simplify(f.arg, T), T)
    return f


# -- satisfiability of literal conjunctions ----------------------------------

def conj_satisfiable(lits: Iterable[Lit], T: Theory) -> bool:
    key = (frozenset(lits), T.kind)
    hit = _SAT_CACHE.get(key)
    if hit is None:
        if len(_SAT_CACHE) > 200_000:
            _SAT_CACHE.clear()
        hit = _SAT_CACHE[key] = _conj_satisfiable(key[0], T)
    return hit


_SAT_CACHE: dict = {}


def _conj_satisfiable(lits: Iterable[Lit], T: Theory) -> bool:
    """Exact satisfiability of a conjunction of literals in ``T``.

    Dense: a strict edge inside a cycle of the ``<=`` graph is a contradiction.
    Discrete: a negative cycle among the difference constraints.
    """
    lits = list(lits)
    if not lits:
        return True
    nodes: dict[str, int] = {}
    for l in lits:
        for t in (l.u, l.v):
            nodes.setdefault(t, len(nodes))
    n = len(nodes)
    INF = None
    if T.discrete:
        # dist[a][b] bounds x_b - x_a
        dist = [[INF] * n for _ in range(n)]

        def add(a, b, w):
            i, j = nodes[a], nodes[b]
            if dist[i][j] is None or w < dist[i][j]:
                dist[i][j] = w

        for l in lits:
            if l.op == "<":
                add(l.v, l.u, l.d - 1)          # u - v <= d-1
            else:
                add(l.v, l.u, l.d)
                add(l.u, l.v, -l.d)
        for k in range(n):
            dk = dist[k]
            for i in range(n):
                dik = dist[i][k]
                if dik is None:
                    continue
                di = dist[i]
                for j in range(n):
                    if dk[j] is not None:
                        w = dik + dk[j]
                        if di[j] is None or w < di[j]:
                            di[j] = w
            if any(dist[i][i] is not None and dist[i][i] < 0 for i in range(n)):
                return False
        return True

    # dense: reach[i][j] = None (no path), 0 (<=), 1 (<)
    reach = [[INF] * n for _ in range(n)]

    def edge(a, b, s):
        i, j = nodes[a], nodes[b]
        if reach[i][j] is None or s > reach[i][j]:
            reach[i][j] = s

    for l in lits:
        if l.op == "<":
            edge(l.u, l.v, 1)
        else:
            edge(l.u, l.v, 0)
            edge(l.v, l.u, 0)
    for t in nodes:
        if T.has_min and MIN in nodes:
            edge(MIN, t, 0)
        if T.has_max and MAX in nodes:
            edge(t, MAX, 0)
    if MIN in nodes and MAX in nodes:
        edge(MIN, MAX, 1)
    for k in range(n):
        rk = reach[k]
        for i in range(n):
            rik = reach[i][k]
            if rik is None:
                continue
            ri = reach[i]
            for j in range(n):
                if rk[j] is not None:
                    s = rik if rik > rk[j] else rk[j]
                    if ri[j] is None or s > ri[j]:
                        ri[j] = s
    return not any(reach[i][i] == 1 for i in range(n))


# -- evaluation --------------------------------------------------------------

def eval_lit(l: Lit, env: dict, T: Theory) -> bool:
    def val(t):
        if t == MIN:
            return T.lo
        if t == MAX:
            return T.hi
        return env[t]
    u, v = val(l.u), val(l.v)
    return u < v + l.d if l.op == "<" else u == v + l.d


def eval_qf(f: PF, env: dict, T: Theory) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Lit):
        return eval_lit(f, env, T)
    if isinstance(f, PAnd):
        return all(eval_qf(a, env, T) for a in f.args)
    if isinstance(f, POr):
        return any(eval_qf(a, env, T) for a in f.args)
    if isinstance(f, PNot):
        return not eval_qf(f.arg, env, T)
    raise TypeError("eval_qf expects a quantifier-free formula")


def is_quantifier_free(f: PF) -> bool:
    if isinstance(f, (Const, Lit)):
        return True
    if isinstance(f, _Quant):
        return False
    if isinstance(f, PNot):
        return is_quantifier_free(f.arg)
    return all(is_quantifier_free(a) for a in f.args)


def max_offset(f: PF) -> int:
    if isinstance(f, Lit):
        return abs(f.d)
    if isinstance(f, Const):
        return 0
    if isinstance(f, PNot):
        return max_offset(f.arg)
    if isinstance(f, _Quant):
        return max_offset(f.body)
    return max((max_offset(a) for a in f.args), default=0)


def quantifier_depth(f: PF) -> int:
    if isinstance(f, (Const, Lit)):
        return 0
    if isinstance(f, PNot):
        return quantifier_depth(f.arg)
    if isinstance(f, _Quant):
        return 1 + quantifier_depth(f.body)
    return max((quantifier_depth(a) for a in f.args), default=0)


# -- contextual tidying ------------------------------------------------------

def tidy(f: PF, T: Theory) -> PF:
    """Cheap literal-level contextual simplification of a quantifier-free NNF formula.

    Inside a conjunction, literals contradicting the sibling literals are
    dropped from disjunctive siblings, and disjunctive siblings already
    satisfied by a sibling literal vanish.  Dually inside a disjunction.
    """
    if isinstance(f, PAnd):
        args = [tidy(a, T) for a in f.args]
        lits = [a for a in args if isinstance(a, Lit)]
        if len(lits) > 1 and not conj_satisfiable(lits, T):
            return FALSE
        if not lits:
            return mk_and(args)
        litset = set(lits)
        out = []
        for a in args:
            if isinstance(a, POr):
                kept = []
                for b in a.args:
                    if isinstance(b, Lit):
                        if b in litset:
                            kept = None
                            break
                        if not conj_satisfiable(lits + [b], T):
                            continue
                    kept.append(b)
                if kept is None:
                    continue
                a = mk_or(kept)
            out.append(a)
        return mk_and(out)
    if isinstance(f, POr):
        args = [tidy(a, T) for a in f.args]
        lits = {a for a in args if isinstance(a, Lit)}
        if not lits:
            return mk_or(args)
        out = []
        for a in args:
            if isinstance(a, PAnd) and any(b in lits for b in a.args):
                continue
            out.append(a)
        return mk_or(out)
    return f


# -- satisfiability of quantifier-free formulas ------------------------------

def satisfying_literals(f: PF, T: Theory) -> frozenset | None:
    """A consistent literal set entailing ``f`` (tableau search), or None if unsatisfiable."""

    def search(goals: tuple, lits: frozenset):
        while goals:
            g, goals = goals[0], goals[1:]
            if isinstance(g, Const):
                if not g.value:
                    return None
                continue
            if isinstance(g, Lit):
                g = simplify_lit(g, T)
                if isinstance(g, Const):
                    if not g.value:
                        return None
                    continue
                if g in lits:
                    continue
                lits = lits | {g}
                if not conj_satisfiable(lits, T):
                    return None
                continue
            if isinstance(g, PAnd):
                # literals first so branching happens as late as possible
                goals = tuple(sorted(g.args, key=lambda a: not isinstance(a, Lit))) + goals
                continue
            if isinstance(g, POr):
                for a in g.args:
                    r = search((a,) + goals, lits)
                    if r is not None:
                        return r
                return None
            raise TypeError("satisfying_literals expects a quantifier-free NNF formula")
        return lits

    return search((f,), frozenset())


def model_of(lits: Iterable[Lit], variables: Iterable[str], T: Theory) -> tuple[dict, Theory]:
    """Integer values for ``variables`` satisfying the consistent literal set ``lits``.

    Returns the assignment and the theory instance with its endpoint values.
    Dense: values are ranks of a linear extension.  Discrete: shortest-path
    potentials of the difference constraints, shifted to start at 0.
    """
    lits = list(lits)
    names = list(dict.fromkeys(list(variables) + [t for l in lits for t in (l.u, l.v)]))
    if T.has_min and MIN not in names:
        names.append(MIN)
    if T.has_max and MAX not in names:
        names.append(MAX)
    idx = {t: i for i, t in enumerate(names)}
    n = len(names)
    if T.discrete:
        # x_j - x_i <= w[i][j]; source-less Bellman-Ford from all-zero start
        pot = [0] * n
        edges = []
        for l in lits:
            if l.op == "<":
                edges.append((idx[l.v], idx[l.u], l.d - 1))
            else:
                edges.append((idx[l.v], idx[l.u], l.d))
                edges.append((idx[l.u], idx[l.v], -l.d))
        for _ in range(n + 1):
            changed = False
            for i, j, w in edges:
                if pot[i] + w < pot[j]:
                    pot[j] = pot[i] + w
                    changed = True
            if not changed:
                break
        else:
            raise ValueError("inconsistent literal set")
        base = min(pot) if pot else 0
        return {v: pot[idx[v]] - base for v in variables}, T
    # dense: merge equalities, then rank a topological order of the classes
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for l in lits:
        if l.op == "=":
            parent[find(idx[l.u])] = find(idx[l.v])
    succ: dict[int, set] = {find(i): set() for i in range(n)}
    for l in lits:
        if l.op == "<":
            succ[find(idx[l.u])].add(find(idx[l.v]))
    lo_c = find(idx[MIN]) if T.has_min else None
    hi_c = find(idx[MAX]) if T.has_max else None
    for c in succ:
        if lo_c is not None and c != lo_c:
            succ[lo_c].add(c)
        if hi_c is not None and c != hi_c:
            succ[c].add(hi_c)
    indeg = {c: 0 for c in succ}
    for c, ss in succ.items():
        for d in ss:
            indeg[d] += 1
    order, ready = [], sorted((c for c in succ if indeg[c] == 0), key=lambda c: names[c])
    while ready:
        c = ready.pop(0)
        order.append(c)
        for d in sorted(succ[c], key=lambda c: names[c]):
            indeg[d] -= 1
            if indeg[d] == 0:
                ready.append(d)
    if len(order) != len(succ):
        raise ValueError("inconsistent literal set")
    rank = {c: i for i, c in enumerate(order)}
    env = {v: rank[find(idx[v])] for v in variables}
    Ti = T.with_endpoints(rank[lo_c] if lo_c is not None else 0,
                          rank[hi_c] if hi_c is not None else 0) if T.dense else T
    return env, Ti
