"""Command-line entry point: ``pointinterval <command> [options]``.

Exit status is 0 on success, 1 when a verification fails or a table does not
match, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import closure as cl
from . import rulebase as rb
from . import zeta as zt
from .classes import ClassTag
from .formulas import DefinabilityQuery, FormulaError, eval_finite, free_vars, parse, quantifier_depth, relations_of, to_text
from .relations import (
    ALL, BIT, EXPLICIT, FULL_MASK, RelationError, dual_symbol_action, format_set, inverse, is_explicit, mask_names,
    parse_set, rel,
)
from .structures import Chain, format_element, parse_element, sort_of


class UsageError(Exception):
    pass


def _out(line: str = "") -> None:
    print(line)


def _err(line: str) -> None:
    print(line, file=sys.stderr)


def _class(args, default: str | None = None) -> ClassTag:
    value = args.cls or default
    if value is None:
        raise UsageError("--class is required")
    return ClassTag.parse(value)


def _rules(args):
    """Symmetry-expanded rules from --rulebase, or None for the bundled set."""
    if not args.rulebase:
        return None
    return rb.expand_symmetry(rb.load(args.rulebase))


def _raw_rules(args):
    return rb.load(args.rulebase) if args.rulebase else rb.load()


# -- commands ----------------------------------------------------------------

def cmd_relations(args) -> int:
    if args.action == "list":
        for r in ALL:
            bit = f"bit {BIT[r]:2d}" if r in BIT else "      "
            sx, sy = r.signature
            row = [r.name, r.region_name, bit, f"{sx.value}x{sy.value}", f"inverse={inverse(r).name}"]
            if args.format == "tsv":
                _out("\t".join(x.strip() for x in row))
            else:
                _out("  ".join(f"{x:<14}" for x in row).rstrip())
        return 0
    if not args.name:
        raise UsageError(f"relations {args.action} needs a relation name")
    r = rel(args.name)
    if args.action == "inverse":
        _out(inverse(r).name)
        return 0
    if not is_explicit(r):
        raise UsageError(f"{r.name} is not an explicit relation; dual is defined on the 14 explicit ones")
    sym, swap = dual_symbol_action(r)
    _out(f"{sym.name}" + (" (arguments swapped)" if swap else ""))
    return 0


def _free_sorts(specs: list[str]) -> dict:
    out = {}
    for s in specs or []:
        name, _, sort = s.partition(":")
        if sort not in ("p", "i"):
            raise UsageError(f"bad --free {s!r}; use name:p or name:i")
        from .relations import Sort
        out[name] = Sort.POINT if sort == "p" else Sort.INTERVAL
    return out


def cmd_parse(args) -> int:
    f = parse(args.formula, _free_sorts(args.free) or None)
    _out(to_text(f))
    fv = free_vars(f)
    _out("free: " + (", ".join(f"{v}:{s.value}" for v, s in sorted(fv.items())) or "none"))
    _out("relations: " + (", ".join(sorted(r.name for r in relations_of(f))) or "none"))
    _out(f"quantifier depth: {quantifier_depth(f)}")
    return 0


def cmd_eval(args) -> int:
    env = {}
    for item in args.env or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad --env {item!r}; use name=3 or name=[0,2]")
        env[name] = parse_element(value)
    F = Chain(args.chain)
    f = parse(args.formula, {k: sort_of(v) for k, v in env.items()})
    missing = set(free_vars(f)) - set(env)
    if missing:
        raise UsageError(f"no value for free variable(s): {', '.join(sorted(missing))}")
    for k, v in env.items():
        if not F.contains(v):
            raise UsageError(f"{k}={format_element(v)} is not an element of chain({args.chain})")
    _out("true" if eval_finite(f, F, env) else "false")
    return 0


def cmd_decide(args) -> int:
    from .decide import decide_in, decide_validity, theory_by_name
    if args.rule:
        rules = {r.id: r for r in rb.expand_symmetry(_raw_rules(args))}
        if args.rule not in rules:
            raise UsageError(f"no rule with id {args.rule!r}")
        r = rules[args.rule]
        if r.formula is None:
            raise UsageError(f"rule {r.id} has no formula to decide")
        q, cls, qid = r.query(), r.cls, r.id
    else:
        if not (args.target and args.formula):
            raise UsageError("decide needs --rule, or --target with --formula")
        target = rel(args.target)
        body = parse(args.formula, dict(zip(("x", "y"), target.signature)))
        premises = frozenset(relations_of(body))
        if args.premises:
            from .relations import from_mask
            premises = from_mask(parse_set(args.premises))
        q = DefinabilityQuery(premises, target, body)
        cls, qid = (_class(args, "den") if not args.theory else None), "query"
    if args.theory:
        v = decide_in(q, theory_by_name(args.theory))
    else:
        if args.cls:
            cls = _class(args)
        v = decide_validity(q, cls)
    _out(v.line(qid))
    return 1 if v.status == "INVALID" else 0


def cmd_check_rules(args) -> int:
    rules = rb.expand_symmetry(_raw_rules(args))
    cls = ClassTag.parse(args.cls) if args.cls else None
    bad = 0
    for row in rb.verify_rules(rules, cls):
        fields = [row.id, row.cls.value, row.verdict, row.detail]
        _out("\t".join(fields).rstrip() if args.format == "tsv" else " ".join(f for f in fields if f))
        if row.verdict == "INVALID":
            bad += 1
    return 1 if bad else 0


def cmd_closure(args) -> int:
    cls = _class(args)
    if args.set is None:
        raise UsageError("closure needs --set r1,r2,...")
    s = parse_set(args.set)
    c = cl.closure(s, cls, _rules(args))
    names = mask_names(c)
    _out("\t".join(names) if args.format == "tsv" else format_set(c))
    return 0


def _scope(text: str | None) -> int:
    if not text:
        return FULL_MASK
    return cl.SCOPES[text] if text in cl.SCOPES else parse_set(text)


def _emit_sets(title: str, key: str, sets: list[int], fmt: str) -> None:
    if fmt == "tsv":
        for m in sets:
            _out(f"{key}\t{','.join(mask_names(m))}")
        return
    _out(f"{title} ({len(sets)}):")
    for m in sets:
        _out(f"  {format_set(m)}")


def _compare(computed: dict, args, cls: ClassTag, rules) -> int:
    table = cl.load_table(args.expected)
    rep = cl.diff_tables(computed, table, cls, rules)
    for line in rep.lines():
        _out(line)
    return 0 if rep.ok else 1


def cmd_spectrum(args) -> int:
    cls = _class(args)
    if not args.target:
        raise UsageError("spectrum needs --target")
    r = rel(args.target)
    if r not in BIT:
        raise UsageError(f"{r.name} is not an explicit relation")
    rules = _rules(args)
    scope = _scope(args.scope)
    sp = cl.spectrum(r, cls, scope, rules)
    kinds = ["mcs", "mis"] if args.kind == "both" else [args.kind]
    if args.format == "tsv":
        if len(kinds) > 1:
            raise UsageError("--format tsv prints one kind at a time; pass --kind mcs or --kind mis")
        _out(f"@class {cls.value}")
        _out(f"@kind {kinds[0]}")
        if scope != FULL_MASK:
            _out(f"@scope {','.join(mask_names(scope))}")
        _out(f"@targets {r.name}")
    for k in kinds:
        _emit_sets(f"{k} of {r.name} over {cls.value}", r.name, sp.mcs if k == "mcs" else sp.mis, args.format)
    if args.expected:
        computed = {r.name: sp.mcs if kinds[0] == "mcs" else sp.mis}
        return _compare(computed, args, cls, rules)
    return 0


def cmd_harvest(args) -> int:
    cls = _class(args)
    rules = _rules(args)
    h = cl.harvest(cls, rules)
    if args.format == "tsv":
        _out(f"@class {cls.value}")
        _out("@kind harvest")
    _emit_sets(f"mcs over R+ for {cls.value}", "mcs", h.mcs, args.format)
    _emit_sets(f"mis over R+ for {cls.value}", "mis", h.mis, args.format)
    if args.expected:
        return _compare({"mcs": h.mcs, "mis": h.mis}, args, cls, rules)
    return 0


def cmd_diff_tables(args) -> int:
    rules = _rules(args)
    if args.expected:
        tables = {Path(args.expected).stem: cl.load_table(args.expected)}
    else:
        tables = cl.bundled_tables()
    status = 0
    for name, t in tables.items():
        cls = ClassTag.parse(args.cls) if args.cls else t.cls
        if cls is None:
            raise UsageError(f"table {name} names no class; pass --class")
        if args.cls and t.cls is not None and t.cls is not cls:
            continue
        rep = cl.diff_tables(cl.computed_sets(t, cls, rules), t, cls, rules)
        for line in rep.lines():
            _out(line)
        if not rep.ok:
            status = 1
    return status


def cmd_verify_zeta(args) -> int:
    specs = zt.load(args.catalog) if args.catalog else zt.catalog()
    if args.id:
        specs = [s for s in specs if s.id == args.id]
        if not specs:
            raise UsageError(f"no catalog entry {args.id!r}")
    elif not args.all:
        raise UsageError("verify-zeta needs --id or --all")
    raw = rb.load(args.rulebase) if args.rulebase else None
    status = 0
    for s in specs:
        rep = zt.verify(s, args.samples, args.seed, raw)
        for line in rep.lines():
            _out(line)
        if not rep.as_expected:
            status = 1
    return status


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--class", dest="cls", choices=["lin", "den", "dis", "unb", "Lin", "Den", "Dis", "Unb"])
    common.add_argument("--rulebase", help="rule file (default: bundled)")
    common.add_argument("--expected", help="expected-table file to diff against")
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["text", "tsv"], default="text")

    p = argparse.ArgumentParser(prog="pointinterval", description="Point/interval definability workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("relations", parents=[common], help="list relations, inverses and duals")
    s.add_argument("action", choices=["list", "inverse", "dual"])
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_relations)

    s = sub.add_parser("parse", parents=[common], help="parse and pretty-print a formula")
    s.add_argument("formula")
    s.add_argument("--free", action="append", help="declare a free variable, e.g. x:i")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("eval", parents=[common], help="evaluate a formula on a finite chain")
    s.add_argument("formula")
    s.add_argument("--chain", type=int, required=True, help="number of points")
    s.add_argument("--env", action="append", help="binding such as x=[0,2] or z=1")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("decide", parents=[common], help="decide a definability query")
    s.add_argument("--rule", help="rule id from the rulebase (mirror ids end in ~sym)")
    s.add_argument("--target")
    s.add_argument("--formula")
    s.add_argument("--premises")
    s.add_argument("--theory", help="decide in one theory only, e.g. DISCRETE_UNBOUNDED")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("check-rules", parents=[common], help="decide every formula-bearing rule")
    s.set_defaults(func=cmd_check_rules)

    s = sub.add_parser("closure", parents=[common], help="closure of a relation set")
    s.add_argument("--set")
    s.set_defaults(func=cmd_closure)

    s = sub.add_parser("spectrum", parents=[common], help="mcs and MIS of one target")
    s.add_argument("--target")
    s.add_argument("--scope", help="all, I+, M+ or a relation list")
    s.add_argument("--kind", choices=["mcs", "mis", "both"], default=None)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("harvest", parents=[common], help="minimal complete and maximal incomplete sets over R+")
    s.set_defaults(func=cmd_harvest)

    s = sub.add_parser("diff-tables", parents=[common], help="compare computed spectra with expected tables")
    s.set_defaults(func=cmd_diff_tables)

    s = sub.add_parser("verify-zeta", parents=[common], help="check truth-preserving relations")
    s.add_argument("--id")
    s.add_argument("--all", action="store_true")
    s.add_argument("--catalog", help="catalog file (default: bundled)")
    s.set_defaults(func=cmd_verify_zeta)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "kind", "unset") is None:
        args.kind = "mcs" if args.format == "tsv" or args.expected else "both"
    try:
        return args.func(args)
    except UsageError as e:
        _err(f"pointinterval {args.command}: {e}")
        return 2
    except (FormulaError, RelationError, rb.RulebaseError, cl.TableError, zt.ZetaError, ValueError, OSError) as e:
        _err(f"pointinterval {args.command}: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
