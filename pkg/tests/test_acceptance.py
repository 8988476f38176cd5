"""End-to-end acceptance checks; a summary line per criterion is printed after the run."""

import random
import time

import numpy as np
import pytest

from pointinterval.classes import ClassTag
from pointinterval.closure import (
    ClosureEngine, bundled_tables, computed_sets, diff_tables, engine,
)
from pointinterval.decide import (
    DISCRETE_UNBOUNDED, DLO_THEORIES, INVALID, VALID, VALID_ON_REPRESENTATIVES, decide_in,
    decide_sentence, decide_validity, eval_testpoints, random_sentence,
)
from pointinterval.formulas import compile_finite, dual_transform
from pointinterval.relations import (
    ALL, BIT, EXPLICIT, FULL_MASK, inverse, reverse, symmetric_mask, symmetric_set, to_mask,
)
from pointinterval.rulebase import expand_symmetry, load
from pointinterval.structures import Chain
from pointinterval.zeta import catalog, verify

RESULTS: dict[int, tuple[bool, list[str]]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    prev_ok, details = RESULTS.get(n, (True, []))
    RESULTS[n] = (prev_ok and ok, details + [detail])


def _harvest_case(n: int, cls: ClassTag, table: str, sizes: tuple[int, int]):
    t0 = time.perf_counter()
    h = ClosureEngine(expand_symmetry(load()), cls).harvest()
    elapsed = time.perf_counter() - t0
    t = bundled_tables()[table]
    want = {k: {e.mask for e in t.entries if e.key == k} for k in ("mcs", "mis")}
    ok = set(h.mcs) == want["mcs"] and set(h.mis) == want["mis"] and \
        (len(h.mcs), len(h.mis)) == sizes and elapsed < 10
    record(n, ok, f"{cls.value}: {len(h.mcs)} mcs, {len(h.mis)} MIS in {elapsed:.1f}s")
    assert ok


def test_criterion_1_harvest_den():
    _harvest_case(1, ClassTag.DEN, "den_harvest", (29, 4))


def test_criterion_2_harvest_unb():
    _harvest_case(2, ClassTag.UNB, "unb_harvest", (34, 5))


def test_criterion_3_spectrum_tables():
    ok = True
    covered = {ClassTag.DEN: set(), ClassTag.UNB: set()}
    n_match = n_suspect = 0
    for name, t in bundled_tables().items():
        if t.kind == "harvest":
            continue
        rep = diff_tables(computed_sets(t), t)
        covered[t.cls].update(t.keys())
        n_match += len(rep.match)
        n_suspect += len(rep.suspects)
        if not rep.ok or any(not a.reason for a in rep.suspects):
            ok = False
            record(3, False, f"{name}: " + " | ".join(rep.lines()[:4]))
    for cls, keys in covered.items():
        if keys != {r.name for r in EXPLICIT}:
            ok = False
            record(3, False, f"{cls.value} tables miss {sorted({r.name for r in EXPLICIT} - keys)}")
    record(3, ok, f"{n_match} entries match, {n_suspect} marked entries adjudicated")
    assert ok


def _class_rules(cls: ClassTag):
    return [r for r in expand_symmetry(load()) if r.cls is cls and r.formula is not None]


def test_criterion_4_den_rules_valid():
    t0 = time.perf_counter()
    bad = []
    rules = _class_rules(ClassTag.DEN)
    for r in rules:
        v = decide_validity(r.query(), r.cls)
        if v.status != VALID:
            bad.append(v.line(r.id))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300
    record(4, ok, f"{len(rules)} rules, {len(bad)} not VALID, {elapsed:.0f}s" + (f": {bad[:3]}" if bad else ""))
    assert ok


def test_criterion_5_unb_rules_valid():
    bad = []
    rules = _class_rules(ClassTag.UNB)
    for r in rules:
        v = decide_validity(r.query(), r.cls)
        if v.status != VALID_ON_REPRESENTATIVES:
            bad.append(v.line(r.id))
    record(5, not bad, f"{len(rules)} rules, {len(bad)} not VALID_ON_REPRESENTATIVES" + (f": {bad[:3]}" if bad else ""))
    assert not bad


CONTROLS = [
    "den-ii24-ii34",
    pytest.param("den-ii44-ii14", marks=pytest.mark.xfail(
        strict=True, reason="equal predecessors pin the start point over the integers as well")),
    "den-ip2-eqi",
]


@pytest.mark.parametrize("rid", CONTROLS)
def test_criterion_6_negative_controls(rid):
    rule = next(r for r in load() if r.id == rid)
    v = decide_in(rule.query(), DISCRETE_UNBOUNDED)
    # unit-interval counterexamples, as found by brute force on a four-point chain
    ok = v.status == INVALID and bool(v.assignment) and \
        all(b - a == 1 for e in v.assignment.values() if isinstance(e, tuple) for a, b in [e])
    record(6, ok, v.line(rid))
    assert ok


def test_criterion_7_zeta_catalog():
    ok = True
    summary = []
    for spec in catalog():
        rep = verify(spec, samples=100_000, seed=7)
        if spec.expect_fail:
            good = rep.as_expected and "surjective" in rep.failed
            summary.append(f"{spec.id} fails {','.join(sorted(rep.failed))}")
        else:
            good = rep.ok
        if not good:
            ok = False
            summary.append(" | ".join(l for l in rep.lines() if l.startswith("FAIL"))[:200])
    record(7, ok, f"{len(catalog())} specs at 10^5 samples; " + "; ".join(summary))
    assert ok


def test_criterion_8_oracle_agreement():
    ok = True
    for T in DLO_THEORIES + (DISCRETE_UNBOUNDED,):
        rng = random.Random(8)
        bad = 0
        for _ in range(500):
            f = random_sentence(rng, T)
            bad += decide_sentence(f, T) != eval_testpoints(f, T)
        ok &= bad == 0
        record(8, bad == 0, f"{T.name}: {bad}/500 disagree")
    assert ok


def test_criterion_9_global_consistency():
    t0 = time.perf_counter()
    idx = np.arange(FULL_MASK + 1, dtype=np.int32)
    bad = []
    for cls in (ClassTag.DEN, ClassTag.UNB):
        eng = engine(cls)
        for r in EXPLICIT:
            complete = eng.complete_for(r)
            below_mis = np.zeros(FULL_MASK + 1, dtype=bool)
            for m in eng.spectrum(r).mis:
                below_mis |= (idx & ~m) == 0
            if not np.array_equal(complete, ~below_mis):
                bad.append(f"{cls.value}/{r.name}")
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    record(9, ok, f"28 class/target pairs, {len(bad)} inconsistent, {elapsed:.1f}s")
    assert ok


def _dual_mismatch(f, sig, n):
    F = Chain(n)
    fwd, back = compile_finite(f, F), compile_finite(dual_transform(f), F)
    for x in F.domain(sig[0]):
        for y in F.domain(sig[1]):
            if fwd({"x": x, "y": y}) != back({"x": F.dual_element(x), "y": F.dual_element(y)}):
                return x, y
    return None


def test_criterion_10_properties():
    rules = [r for r in expand_symmetry(load()) if r.formula is not None]
    dual_bad = [r.id for r in rules
                for n in range(6) if _dual_mismatch(r.formula, r.target.signature, n)]
    record(10, not dual_bad, f"dual transform checked on {len(rules)} formulas over chains 0..5, "
                             f"{len(dual_bad)} mismatches")

    rng = random.Random(10)
    law_bad = 0
    for cls in (ClassTag.LIN, ClassTag.DEN, ClassTag.UNB):
        eng = engine(cls)
        for _ in range(1000):
            a = rng.randrange(FULL_MASK + 1)
            b = a | rng.randrange(FULL_MASK + 1)
            ca = eng.closure(a)
            law_bad += ca & a != a or eng.closure(ca) != ca or eng.closure(b) & ca != ca
    record(10, law_bad == 0, f"closure laws on 3x1000 random sets, {law_bad} violations")

    inv_bad = sum(inverse(inverse(r)) != r for r in ALL)
    inv_bad += sum(reverse(reverse(r)) != r for r in EXPLICIT)
    inv_bad += sum(symmetric_mask(symmetric_mask(m)) != m for m in range(FULL_MASK + 1))
    inv_bad += sum(symmetric_set(symmetric_set({r})) != {r} for r in EXPLICIT)
    record(10, inv_bad == 0, f"involutions checked exhaustively, {inv_bad} failures")
    assert not dual_bad and law_bad == 0 and inv_bad == 0
