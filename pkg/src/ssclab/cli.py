"""Command line front end.

Exit codes: 0 success, 1 a checked property failed, 2 usage or input error.
"""

import argparse
import json
import sys

from .calculus import NormalForm, normalize_w
from .cbv import Value, cbv_eval
from .harness import SUITES, run_suite
from .machines import check_projection, format_table, readback, record_run
from .multitypes import (
    check_derivation, derivation_from_json, derivation_to_json,
    format_derivation, indices, infer_tight, is_tight,
)
from .strategies import PreconditionError, cbn_normalize, cbs_normalize
from .terms import ParseError, fresh_scope, parse, term_size, to_str


class UsageError(Exception):
    pass


def _read_term(args):
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    elif args.term is not None:
        text = args.term
    else:
        raise UsageError("give a term or --file")
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError("syntax error: %s" % exc) from None


def _add_term(p):
    p.add_argument("term", nargs="?", help="term text, e.g. '(\\x. x) (\\y. y)'")
    p.add_argument("--file", "-f", help="read the term from a file")


def _counts_line(strategy, counts):
    if strategy == "cbn":
        return "nm=%d ne=%d ngc=%d" % (counts.m, counts.e, counts.gcv)
    if strategy == "cbs":
        return "m=%d e=%d gcv=%d" % (counts.m, counts.e, counts.gcv)
    return "m=%d e=%d gcv=%d" % counts


def cmd_parse(args, out):
    t = _read_term(args)
    if args.json:
        out.write(json.dumps({"term": to_str(t), "size": term_size(t)}) + "\n")
    else:
        out.write(to_str(t) + "\n")
    return 0


def cmd_eval(args, out):
    t = _read_term(args)
    s = args.strategy
    if s == "cbv":
        res = cbv_eval(t, args.fuel, args.policy if args.policy != "random" else "leftmost")
        done = isinstance(res, Value)
        if args.json:
            out.write(json.dumps({"strategy": s, "normal": done, "term": to_str(res.term),
                                  "steps": res.length}) + "\n")
        else:
            out.write("%s\n" % to_str(res.term) if done else "fuel exhausted\n")
            out.write("steps=%d\n" % res.length)
        return 0
    if s == "cbn":
        res = cbn_normalize(t, args.fuel)
        counts = res.counts
    elif s == "cbs":
        res = cbs_normalize(t, args.fuel, args.gcv)
        counts = res.counts
    else:
        res = normalize_w(t, args.policy, args.fuel, args.seed)
        tr = res.trace
        counts = (tr.count("wm"), tr.count("we"), tr.count("wgcv"))
    done = isinstance(res, NormalForm)
    trace = res.trace
    if args.json:
        obj = trace.to_json()
        obj.update({"strategy": s, "normal": done})
        obj["counts"] = dict(zip(("m", "e", "gcv"), counts if isinstance(counts, tuple)
                                 else (counts.m, counts.e, counts.gcv)))
        out.write(json.dumps(obj) + "\n")
        return 0
    if args.trace:
        out.write(trace.to_text() + "\n")
    out.write(("%s\n" % to_str(trace.end)) if done else "fuel exhausted\n")
    out.write(_counts_line(s, counts) + "\n")
    return 0


def cmd_machine(args, out):
    t = _read_term(args)
    try:
        r = record_run(t, args.flavor, args.fuel)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.trace:
        out.write(format_table(r) + "\n")
    q = r.states[-1]
    out.write("read-back: %s\n" % to_str(readback(q)))
    labels = ("sea1", "m", "e", "sea2") if args.flavor == "silly" else ("sea", "m", "e")
    out.write(" ".join("%s=%d" % (k, r.labels.count(k)) for k in labels))
    out.write("%s\n" % ("" if r.final else " (fuel exhausted)"))
    if args.check:
        rep = check_projection(r)
        for v in rep.violations:
            out.write("violation: %s\n" % v)
        return 0 if rep.ok else 1
    return 0


def cmd_type(args, out):
    if args.action == "infer":
        t = _read_term(args)
        d = infer_tight(t, args.fuel)
        if d is None:
            out.write("no tight derivation found: CbS ran out of fuel\n")
            return 1
        if args.json:
            out.write(json.dumps(derivation_to_json(d)) + "\n")
        else:
            out.write(format_derivation(d) + "\n")
            out.write("indices (%d,%d) %s\n" % (indices(d) + ("tight" if is_tight(d) else "not tight",)))
        return 0
    src = args.file or args.term
    try:
        if src in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(src, encoding="utf-8") as fh:
                text = fh.read()
        d = derivation_from_json(text)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError("cannot read derivation: %s" % exc) from None
    chk = check_derivation(d)
    for msg in chk.diagnostics:
        out.write("error: %s\n" % msg)
    if chk.ok:
        out.write("valid, indices (%d,%d) %s\n" % (indices(d) + ("tight" if is_tight(d) else "not tight",)))
        return 0
    return 1


def cmd_check(args, out):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        raise UsageError("unknown suite %r; known: %s" % (args.suite, ", ".join(sorted(SUITES))))
    status = 0
    reports = []
    for n in names:
        rep = run_suite(n, args.size, args.fuel, args.budget, args.seed,
                        "apps" if args.apps else "all")
        reports.append(rep)
        if not rep.ok:
            status = 1
        if not args.json:
            out.write(rep.summary() + "\n")
            for f in rep.failures[:5]:
                out.write("  %s: %s\n" % (f.term, f.witness))
    if args.json:
        out.write(json.dumps([r.to_json() for r in reports]) + "\n")
    return status


def cmd_compare(args, out):
    t = _read_term(args)
    fuel = args.fuel
    rows = []
    n = cbn_normalize(t, fuel)
    rows.append(("CbN", n, "nm=%d ne=%d ngc=%d" % (n.counts.m, n.counts.e, n.counts.gcv)))
    try:
        s = cbs_normalize(t, fuel)
        rows.append(("CbS", s, "ym=%d ye=%d ygcv=%d" % (s.counts.m, s.counts.e, s.counts.gcv)))
    except PreconditionError as exc:
        rows.append(("CbS", None, str(exc)))
        s = None
    try:
        v = cbv_eval(t, fuel)
        rows.append(("CbV", v, "beta_v=%d" % v.length))
    except ValueError as exc:
        rows.append(("CbV", None, str(exc)))
    for name, res, counts in rows:
        done = isinstance(res, (NormalForm, Value))
        out.write("%-4s %-15s %s\n" % (name, "normal" if done else "fuel exhausted", counts))
    if isinstance(s, NormalForm):
        d = infer_tight(t, fuel)
        out.write("tight %-15s (%d,%d)\n" % ("derivation", *indices(d)))
    else:
        out.write("tight %-15s none\n" % "derivation")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="ssclab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="parse and print a term")
    _add_term(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("eval", help="evaluate with a strategy")
    _add_term(sp)
    sp.add_argument("--strategy", choices=("cbn", "cbs", "cbv", "ssc"), default="cbs")
    sp.add_argument("--policy", choices=("leftmost", "rightmost", "random"), default="leftmost",
                    help="redex choice for ssc and cbv")
    sp.add_argument("--gcv", choices=("lazy", "eager"), default="lazy",
                    help="garbage collection policy for cbs")
    sp.add_argument("--fuel", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--trace", action="store_true")
    g.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("machine", help="run an abstract machine")
    sp.add_argument("flavor", choices=("mam", "silly"))
    _add_term(sp)
    sp.add_argument("--fuel", type=int, default=10000)
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--check", action="store_true", help="check the run against the calculus")
    sp.set_defaults(func=cmd_machine)

    sp = sub.add_parser("type", help="infer or check silly multi type derivations")
    sp.add_argument("action", choices=("infer", "check"))
    _add_term(sp)
    sp.add_argument("--fuel", type=int, default=10000)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_type)

    sp = sub.add_parser("check", help="run a property suite")
    sp.add_argument("suite", help="suite name or 'all'")
    sp.add_argument("--size", type=int, default=7)
    sp.add_argument("--fuel", type=int, default=10000)
    sp.add_argument("--budget", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--apps", action="store_true",
                    help="only closed applications, skipping terms that are already values")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("compare", help="CbN, CbS and CbV side by side")
    _add_term(sp)
    sp.add_argument("--fuel", type=int, default=10000)
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        # a term written after an option is left over by argparse
        if len(extra) == 1 and getattr(args, "term", "") is None \
                and not extra[0].startswith("--"):
            args.term = extra[0]
        elif extra:
            parser.error("unrecognized arguments: %s" % " ".join(extra))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        with fresh_scope():
            return args.func(args, out)
    except (UsageError, PreconditionError) as exc:
        sys.stderr.write("ssclab: %s\n" % exc)
        return 2
    except ValueError as exc:
        sys.stderr.write("ssclab: %s\n" % exc)
        return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
