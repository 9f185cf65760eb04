"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the terminal summary.  ``python tests/test_acceptance.py`` prints them too.
"""

import io
import itertools
import time
from pathlib import Path

import pytest

from ssclab.calculus import NormalForm, postpone_gcv
from ssclab.cbv import CbvFuelExhausted, Value, cbv_eval
from ssclab.cli import main
from ssclab.harness import (
    generate_closed_apps, generate_closed_terms, op_equiv_verdict, random_traces, run_suite,
)
from ssclab.machines import check_projection, readback, record_run
from ssclab.multitypes import indices, infer_tight, is_tight
from ssclab.strategies import cbn_normalize, cbs_normalize, cbs_postpone_gcv
from ssclab.terms import alpha_eq, fresh_scope, parse

GOLDEN = Path(__file__).parent / "golden"
DELTA_II = r"(\y. y y) ((\z. z) (\z. z))"
SHOWCASE = r"(\y. \x. x (\w. x)) ((\z. z z) (\z. z z)) ((\z. z) (\z. z))"
TABLE_TERM = r"(\x. \y. y) ((\z. z) (\w. w))"
ERASED_OMEGA = r"(\x. \z. z) ((\z. z z) (\z. z z))"

RESULTS = {}


def report(n, ok, detail):
    line = "criterion %d: %s  %s" % (n, "PASS" if ok else "FAIL", detail)
    RESULTS[n] = line
    print(line)
    return ok


def _cli(*argv):
    out = io.StringIO()
    return main(list(argv), out), out.getvalue()


def criterion_1():
    start = time.perf_counter()
    code, out = _cli("eval", "--strategy", "cbs", DELTA_II)
    counts = out.splitlines()[-1]
    d = infer_tight(parse(DELTA_II))
    idx = indices(d)
    secs = time.perf_counter() - start
    ok = code == 0 and counts.startswith("m=6 e=8 ") and idx == (6, 8) and is_tight(d) \
        and secs < 1
    return report(1, ok, "eval: %s; tight derivation %s; %.2fs" % (counts, idx, secs))


def criterion_2():
    start = time.perf_counter()
    dup = cbn_normalize(parse(DELTA_II)).counts
    show = cbn_normalize(parse(SHOWCASE))
    fuels = (50, 100, 500)
    silly = [cbs_normalize(parse(SHOWCASE), f) for f in fuels]
    diverges = all(not isinstance(r, NormalForm) and len(r.trace) == f
                   for r, f in zip(silly, fuels))
    secs = time.perf_counter() - start
    ok = (dup.m, dup.e) == (4, 5) and isinstance(show, NormalForm) \
        and (show.counts.m, show.counts.e, show.counts.gcv) == (4, 3, 3) and diverges \
        and secs < 1
    return report(2, ok, "CbN (\\y.yy)(II) nm=%d ne=%d; showcase nm=%d ne=%d ngc=%d; "
                  "CbS out of fuel at %s: %s; %.2fs" % (
                      dup.m, dup.e, show.counts.m, show.counts.e, show.counts.gcv,
                      "/".join(map(str, fuels)), diverges, secs))


def criterion_3():
    start = time.perf_counter()
    code, out = _cli("machine", "silly", "--trace", TABLE_TERM)
    golden = (GOLDEN / "silly_mam_table.txt").read_text(encoding="utf-8")
    r = record_run(parse(TABLE_TERM), "silly")
    q = r.states[-1]
    shape = r.final and q.code.tag == parse(r"\x. x").tag and not q.stack and not q.env
    rb = alpha_eq(readback(q), parse(r"(\y. y)[x <- \z. z][z <- \z. z]"))
    labels = r.labels == ["sea1", "m", "sea2", "sea1", "m", "e", "sea2"]
    secs = time.perf_counter() - start
    ok = code == 0 and out == golden and shape and rb and labels and secs < 1
    return report(3, ok, "table matches golden: %s; labels %s; final (C, v, e, e): %s; "
                  "read-back: %s; %.2fs" % (out == golden, ",".join(r.labels), shape, rb, secs))


def _suite_line(names, size):
    reps = [run_suite(n, size) for n in names]
    ok = all(r.ok for r in reps) and all(r.instances > 0 for r in reps)
    detail = "; ".join("%s %d instances, %d failures" % (r.suite, r.instances, len(r.failures))
                       for r in reps)
    return ok, detail + " (size <= %d)" % size


def criterion_4():
    return report(4, *_suite_line(["tight-correctness"], 7))


def criterion_5():
    return report(5, *_suite_line(["maximality"], 6))


def criterion_6():
    return report(6, *_suite_line(["confluence", "uniform-normalization"], 7))


def criterion_7():
    runs = list(itertools.islice(generate_closed_apps(11), 1000))
    bad, counted = [], {"m": 0, "e": 0, "sea1": 0, "sea2": 0}
    for t in runs:
        r = record_run(t, "silly", fuel=200)
        rep = check_projection(r)
        bad += rep.violations
        for k in counted:
            counted[k] += r.labels.count(k)
    ok = len(runs) == 1000 and not bad and counted["m"] > 0 and counted["e"] > 0
    return report(7, ok, "%d runs, transitions %s, %d violations" % (
        len(runs), " ".join("%s=%d" % kv for kv in counted.items()), len(bad)))


def criterion_8():
    bad, n = [], 0
    for t in generate_closed_terms(7):
        n += 1
        v, s = op_equiv_verdict(t, 10000)
        if isinstance(v, Value) != isinstance(s, NormalForm):
            bad.append(t)
    erased = parse(ERASED_OMEGA)
    both_diverge = isinstance(cbv_eval(erased, 2000), CbvFuelExhausted) \
        and not isinstance(cbs_normalize(erased, 2000), NormalForm)
    show = parse(SHOWCASE)
    cbn_only = isinstance(cbn_normalize(show, 2000), NormalForm) \
        and not isinstance(cbs_normalize(show, 2000), NormalForm) \
        and isinstance(cbv_eval(show, 2000), CbvFuelExhausted)
    ok = not bad and both_diverge and cbn_only
    return report(8, ok, "%d closed terms, %d violations; (\\x.I)Omega diverges in CbV and CbS: "
                  "%s; showcase converges in CbN only: %s" % (n, len(bad), both_diverge, cbn_only))


def criterion_9():
    terms = list(generate_closed_apps(9))
    traces = random_traces(terms, 1000, fuel=40, seed=0)
    weak_bad = 0
    for d in traces:
        p = postpone_gcv(d)
        names = p.names()
        k = sum(1 for x in names if x != "wgcv")
        if k != len(d) - d.count("wgcv") or names.count("wgcv") < d.count("wgcv") \
                or "wgcv" in names[:k] or not alpha_eq(p.end, d.end):
            weak_bad += 1
    silly_bad, silly_n = 0, 0
    for t in terms:
        d = cbs_normalize(t, 200, "eager").trace
        if "ygcv" not in d.names():
            continue
        silly_n += 1
        p = cbs_postpone_gcv(d)
        names = p.names()
        h = names.count("ygcv")
        if h != d.names().count("ygcv") or len(names) != len(d) \
                or "ygcv" in names[:len(names) - h] or not alpha_eq(p.end, d.end):
            silly_bad += 1
    ok = len(traces) == 1000 and weak_bad == 0 and silly_bad == 0 and silly_n > 0
    return report(9, ok, "%d weak traces, %d contract failures; %d CbS traces, %d failures" % (
        len(traces), weak_bad, silly_n, silly_bad))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("check", CRITERIA, ids=["criterion_%d" % i for i in range(1, 10)])
def test_criterion(check):
    assert check(), RESULTS[CRITERIA.index(check) + 1]


if __name__ == "__main__":
    for c in CRITERIA:
        with fresh_scope():
            c()
