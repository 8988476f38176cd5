"""Two-sorted first-order formulas over the relation vocabulary.

Concrete syntax::

    atom     rel(x,y)
    not      ~f
    and/or   f & g, f | g
    arrows   f -> g (right-assoc), f <-> g
    quant    all v:p. f     ex v:i. f      (scope extends maximally right)

Binding strength: ``~`` > ``&`` > ``|`` > ``->`` > ``<->``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .relations import Relation, RelationError, Sort, dual_symbol_action, is_explicit, rel
from .structures import Chain, holds_raw, sort_of


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    rel: Relation
    lhs: str
    rhs: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sort: Sort
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sort: Sort
    body: "Formula"


Formula = Union[Atom, Not, And, Or, Implies, Iff, Forall, Exists]
BINARY = (And, Or, Implies, Iff)
QUANT = (Forall, Exists)


class FormulaError(ValueError):
    pass


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class FormulaSortError(FormulaError):
    pass


class UnboundVariable(FormulaError):
    pass


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(<->|->|[~&|().,:]|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[bad]!r}", bad)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            shown = repr(tok) if tok else "end of input"
            raise FormulaSyntaxError(f"expected {expected!r}, found {shown}", self.pos())
        self.i += 1
        return tok

    def ident(self, what: str) -> str:
        tok = self.peek()
        if not tok or not (tok[0].isalpha() or tok[0] == "_"):
            raise FormulaSyntaxError(f"expected {what}", self.pos())
        self.i += 1
        return tok

    def formula(self) -> Formula:
        f = self.implication()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.implication())
        return f

    def implication(self) -> Formula:
        f = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.implication())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok in ("all", "ex"):
            self.take()
            var = self.ident("variable")
            self.take(":")
            spos = self.pos()
            s = self.ident("sort")
            if s not in ("p", "i"):
                raise FormulaSyntaxError(f"sort must be p or i, not {s!r}", spos)
            self.take(".")
            body = self.formula()
            return (Forall if tok == "all" else Exists)(var, Sort(s), body)
        if not tok:
            raise FormulaSyntaxError("unexpected end of input", self.pos())
        npos = self.pos()
        name = self.ident("relation atom")
        try:
            r = rel(name)
        except RelationError:
            raise RelationError(f"unknown relation {name!r} at position {npos}") from None
        self.take("(")
        x = self.ident("variable")
        self.take(",")
        y = self.ident("variable")
        self.take(")")
        return Atom(r, x, y)


def parse(text: str, free: dict[str, Sort] | None = None) -> Formula:
    """Parse and sort-check ``text``.

    With ``free`` given, every free variable must be declared there; otherwise
    free-variable sorts are inferred from their atoms.
    """
    p = _Parser(text)
    f = p.formula()
    if p.peek():
        raise FormulaSyntaxError(f"unexpected {p.peek()!r}", p.pos())
    sort_check(f, free)
    return f


def sort_check(f: Formula, free: dict[str, Sort] | None = None) -> dict[str, Sort]:
    """Return the sorts of the free variables, raising on any inconsistency."""
    inferred: dict[str, Sort] = {}

    def visit(g, scope):
        if isinstance(g, Atom):
            for var, want in zip((g.lhs, g.rhs), g.rel.signature):
                if var in scope:
                    have = scope[var]
                elif free is not None:
                    if var not in free:
                        raise UnboundVariable(f"variable {var!r} is neither bound nor declared free")
                    have = free[var]
                else:
                    have = inferred.setdefault(var, want)
                if have is not want:
                    raise FormulaSortError(
                        f"ill-sorted atom {g.rel.name}({g.lhs},{g.rhs}): {var!r} has sort "
                        f"{have.value} but position expects {want.value}")
                if var not in scope and free is not None:
                    inferred[var] = have
        elif isinstance(g, Not):
            visit(g.body, scope)
        elif isinstance(g, BINARY):
            visit(g.left, scope)
            visit(g.right, scope)
        else:
            visit(g.body, {**scope, g.var: g.sort})

    visit(f, {})
    return inferred


def free_vars(f: Formula) -> dict[str, Sort]:
    return sort_check(f)


def relations_of(f: Formula) -> frozenset[Relation]:
    if isinstance(f, Atom):
        return frozenset({f.rel})
    if isinstance(f, Not) or isinstance(f, QUANT):
        return relations_of(f.body)
    return relations_of(f.left) | relations_of(f.right)


# -- printing ----------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OP = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _prec(f) -> int:
    return _PREC.get(type(f), 5)


def to_text(f: Formula) -> str:
    """Single-line canonical text; ``parse(to_text(f)) == f``."""
    return _show(f, tail=True)


def _show(f, tail: bool) -> str:
    if isinstance(f, Atom):
        return f"{f.rel.name}({f.lhs},{f.rhs})"
    if isinstance(f, Not):
        inner = f.body
        if isinstance(inner, BINARY):
            return "~(" + _show(inner, True) + ")"
        return "~" + _show(inner, tail)
    if isinstance(f, QUANT):
        q = "all" if isinstance(f, Forall) else "ex"
        body = f.body
        btxt = "(" + _show(body, True) + ")" if isinstance(body, BINARY) else _show(body, True)
        text = f"{q} {f.var}:{f.sort.value}. {btxt}"
        return text if tail else "(" + text + ")"
    p = _PREC[type(f)]
    right_assoc = isinstance(f, Implies)
    lp, rp = _prec(f.left), _prec(f.right)
    lparen = lp < p or (lp == p and right_assoc)
    rparen = rp < p or (rp == p and not right_assoc)
    left = "(" + _show(f.left, True) + ")" if lparen else _show(f.left, False)
    right = "(" + _show(f.right, True) + ")" if rparen else _show(f.right, tail)
    return f"{left} {_OP[type(f)]} {right}"


# -- transforms --------------------------------------------------------------

def dual_transform(f: Formula) -> Formula:
    """The formula that says in the order dual what ``f`` says in the original.

    Reversible atoms are replaced by their reverse, symmetric atoms that are
    not self-symmetric get their arguments swapped, self-symmetric atoms stay.
    """
    if isinstance(f, Atom):
        r, swap = dual_symbol_action(f.rel)
        return Atom(r, f.rhs, f.lhs) if swap else Atom(r, f.lhs, f.rhs)
    if isinstance(f, Not):
        return Not(dual_transform(f.body))
    if isinstance(f, QUANT):
        return type(f)(f.var, f.sort, dual_transform(f.body))
    return type(f)(dual_transform(f.left), dual_transform(f.right))


def _all_vars(f) -> set[str]:
    if isinstance(f, Atom):
        return {f.lhs, f.rhs}
    if isinstance(f, Not):
        return _all_vars(f.body)
    if isinstance(f, QUANT):
        return {f.var} | _all_vars(f.body)
    return _all_vars(f.left) | _all_vars(f.right)


def rename_free(f: Formula, mapping: dict[str, str]) -> Formula:
    """Capture-avoiding renaming of free variables."""
    if isinstance(f, Atom):
        return Atom(f.rel, mapping.get(f.lhs, f.lhs), mapping.get(f.rhs, f.rhs))
    if isinstance(f, Not):
        return Not(rename_free(f.body, mapping))
    if isinstance(f, BINARY):
        return type(f)(rename_free(f.left, mapping), rename_free(f.right, mapping))
    inner = {k: v for k, v in mapping.items() if k != f.var}
    var, body = f.var, f.body
    if var in inner.values():
        taken = _all_vars(body) | set(inner.values()) | set(inner)
        fresh = next(f"{var}{i}" for i in range(1, 10_000) if f"{var}{i}" not in taken)
        body = rename_free(body, {var: fresh})
        var = fresh
    return type(f)(var, f.sort, rename_free(body, inner))


def inline(f: Formula, r: Relation, definition: Formula, params=("x", "y")) -> Formula:
    """Replace every ``r(u,v)`` atom in ``f`` by ``definition[x:=u, y:=v]``."""
    if isinstance(f, Atom):
        if f.rel == r:
            return rename_free(definition, {params[0]: f.lhs, params[1]: f.rhs})
        return f
    if isinstance(f, Not):
        return Not(inline(f.body, r, definition, params))
    if isinstance(f, BINARY):
        return type(f)(inline(f.left, r, definition, params), inline(f.right, r, definition, params))
    return type(f)(f.var, f.sort, inline(f.body, r, definition, params))


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, QUANT):
        return 1 + quantifier_depth(f.body)
    return max(quantifier_depth(f.left), quantifier_depth(f.right))


# -- evaluation on finite chains ---------------------------------------------

def compile_finite(f: Formula, F: Chain):
    """Compile ``f`` into a predicate over an environment dict for chain ``F``."""
    tables: dict[Relation, frozenset] = {}

    def table(r):
        if r not in tables:
            d1, d2 = (F.domain(s) for s in r.signature)
            tables[r] = frozenset((x, y) for x in d1 for y in d2 if holds_raw(r, x, y))
        return tables[r]

    def comp(g):
        if isinstance(g, Atom):
            t, x, y = table(g.rel), g.lhs, g.rhs
            return lambda env: (env[x], env[y]) in t
        if isinstance(g, Not):
            b = comp(g.body)
            return lambda env: not b(env)
        if isinstance(g, BINARY):
            lf, rf = comp(g.left), comp(g.right)
            if isinstance(g, And):
                return lambda env: lf(env) and rf(env)
            if isinstance(g, Or):
                return lambda env: lf(env) or rf(env)
            if isinstance(g, Implies):
                return lambda env: (not lf(env)) or rf(env)
            return lambda env: lf(env) == rf(env)
        b, var, dom = comp(g.body), g.var, F.domain(g.sort)
        want = isinstance(g, Exists)

        def quant(env):
            saved = env.get(var, _MISSING)
            try:
                for v in dom:
                    env[var] = v
                    if b(env) == want:
                        return want
                return not want
            finally:
                if saved is _MISSING:
                    env.pop(var, None)
                else:
                    env[var] = saved
        return quant

    return comp(f)


_MISSING = object()


def eval_finite(f: Formula, F: Chain, env: dict) -> bool:
    """Tarskian truth of ``f`` in chain ``F`` under ``env``."""
    for var, s in free_vars(f).items():
        if var not in env:
            raise FormulaError(f"no binding for free variable {var!r}")
        if sort_of(env[var]) is not s or not F.contains(env[var]):
            raise FormulaSortError(f"binding {var}={env[var]!r} is not a {s.name.lower()} of chain({F.size})")
    return compile_finite(f, F)(dict(env))


# -- definability queries ----------------------------------------------------

@dataclass(frozen=True)
class DefinabilityQuery:
    """Does ``body`` define ``target(x, y)`` using only ``premises``?"""

    premises: frozenset[Relation]
    target: Relation
    body: Formula
    free: tuple[str, str] = ("x", "y")

    def __post_init__(self):
        if not is_explicit(self.target):
            raise FormulaError(f"target {self.target.name} is not an explicit relation")
        x, y = self.free
        if x == y:
            raise FormulaError("the two free variables must differ")
        sorts = dict(zip(self.free, self.target.signature))
        sort_check(self.body, sorts)
        extra = relations_of(self.body) - set(self.premises)
        if extra:
            names = ", ".join(sorted(r.name for r in extra))
            raise FormulaError(f"body uses relations outside the premises: {names}")

    @property
    def free_sorts(self) -> dict[str, Sort]:
        return dict(zip(self.free, self.target.signature))

    def target_atom(self) -> Atom:
        return Atom(self.target, *self.free)

    def sentence(self) -> Formula:
        """Universal closure of ``body <-> target(x, y)``."""
        f: Formula = Iff(self.body, self.target_atom())
        for v in reversed(self.free):
            f = Forall(v, self.free_sorts[v], f)
        return f
