"""Term enumeration, reduction graphs and property suites.

Every suite runs over a deterministic stream of terms and reports the
instances it checked, the failures with a witness, and how much of the
exploration budget it used.
"""

import functools
import itertools
import random
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List

from .calculus import (
    FuelExhausted, NormalForm, apply, is_answer, is_strict_answer,
    is_weak_normal, normalize_w, postpone_gcv, redexes_w,
)
from .cbv import Value, cbv_eval, cbv_reducts
from .machines import (
    check_invariants, check_projection, readback, record_run,
    struct_normalize, struct_red_ans, struct_red_appl,
)
from .multitypes import (
    check_derivation, indices, infer_tight, is_tight, size, subject_reduce,
)
from .strategies import (
    cbn_step, cbs_decompose, cbs_enabled, cbs_normalize, cbs_postpone_gcv,
    cbs_step,
)
from .terms import (
    App, Lam, Sub, Var, alpha_key, fresh_scope, term_size, to_str,
)

__all__ = [
    "generate_closed_terms", "generate_closed_apps", "generate_terms", "ReductionGraph", "explore",
    "longest_w_reduction", "PropertyReport", "Failure", "SUITES",
    "run_suite", "random_traces", "MAX_SIZE",
]

MAX_SIZE = 12

_NAMES = ["x", "y", "z", "w", "u", "v", "p", "q", "r", "s"]


def _binder(depth):
    if depth < len(_NAMES):
        return _NAMES[depth]
    return "x%d" % depth


# ---------------------------------------------------------------------------
# enumeration

@functools.lru_cache(maxsize=None)
def _db_terms(n, k):
    """De Bruijn terms with exactly ``n`` constructors and ``k`` indices in scope."""
    if n <= 0:
        return ()
    out = []
    if n == 1:
        out.extend(("var", i) for i in range(k))
        return tuple(out)
    out.extend(("lam", b) for b in _db_terms(n - 1, k + 1))
    for i in range(1, n - 1):
        for f in _db_terms(i, k):
            for a in _db_terms(n - 1 - i, k):
                out.append(("app", f, a))
    return tuple(out)


def _named(db, depth=0, free=()):
    kind = db[0]
    if kind == "var":
        i = db[1]
        if i < depth:
            return Var(_binder(depth - 1 - i))
        return Var(free[i - depth])
    if kind == "lam":
        return Lam(_binder(depth), _named(db[1], depth + 1, free))
    if kind == "sub":
        return Sub(_named(db[1], depth + 1, free), _binder(depth), _named(db[2], depth, free))
    return App(_named(db[1], depth, free), _named(db[2], depth, free))


def generate_closed_terms(max_size, min_size=1):
    """Closed pure terms by increasing size, one per alpha class.

    Size counts constructors, each variable, abstraction and application
    counting one.  Binders are named after their depth.
    """
    if max_size > MAX_SIZE:
        raise ValueError("max_size above the cap of %d" % MAX_SIZE)
    for n in range(max(1, min_size), max_size + 1):
        for db in _db_terms(n, 0):
            yield _named(db)


def generate_closed_apps(max_size):
    """Closed applications ``t u`` of total size at most ``max_size``.

    Small closed terms are mostly abstractions, already normal; this stream
    keeps only terms that have work to do.
    """
    if max_size > MAX_SIZE:
        raise ValueError("max_size above the cap of %d" % MAX_SIZE)
    for n in range(5, max_size + 1):
        for db in _db_terms(n, 0):
            if db[0] == "app":
                yield _named(db)


@functools.lru_cache(maxsize=None)
def _db_es_terms(n, k, nfree):
    if n <= 0:
        return ()
    out = []
    if n == 1:
        out.extend(("var", i) for i in range(k + nfree))
        return tuple(out)
    out.extend(("lam", b) for b in _db_es_terms(n - 1, k + 1, nfree))
    for i in range(1, n - 1):
        for f in _db_es_terms(i, k, nfree):
            for a in _db_es_terms(n - 1 - i, k, nfree):
                out.append(("app", f, a))
        for b in _db_es_terms(i, k + 1, nfree):
            for a in _db_es_terms(n - 1 - i, k, nfree):
                out.append(("sub", b, a))
    return tuple(out)


def generate_terms(max_size, free=("a", "b")):
    """Possibly open terms with explicit substitutions, by increasing size."""
    if max_size > MAX_SIZE:
        raise ValueError("max_size above the cap of %d" % MAX_SIZE)
    for n in range(1, max_size + 1):
        for db in _db_es_terms(n, 0, len(free)):
            yield _named(db, 0, tuple(free))


# ---------------------------------------------------------------------------
# reduction graphs

@dataclass
class ReductionGraph:
    root: object
    nodes: Dict[object, object]
    edges: Dict[object, list]
    truncated: bool

    def normal_forms(self):
        return [self.nodes[k] for k, out in self.edges.items() if not out]

    def has_cycle(self):
        color = {}
        for start in self.edges:
            if start in color:
                continue
            stack = [(start, iter(self.edges[start]))]
            color[start] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    color[node] = 2
                    stack.pop()
                    continue
                dst = nxt[1]
                c = color.get(dst)
                if c == 1:
                    return True
                if c is None and dst in self.edges:
                    color[dst] = 1
                    stack.append((dst, iter(self.edges[dst])))
        return False


def explore(t, budget=20000, rules=None):
    """Breadth-first reachability graph of ``t`` modulo alpha.

    ``edges[k]`` lists ``(redex, key)`` pairs.  With ``truncated`` set,
    only the first ``budget`` nodes were expanded.
    """
    k0 = alpha_key(t)
    nodes = {k0: t}
    edges = {}
    queue = deque([k0])
    truncated = False
    while queue:
        if len(edges) >= budget:
            truncated = True
            break
        k = queue.popleft()
        s = nodes[k]
        out = []
        for r in redexes_w(s):
            if rules is not None and r.rule not in rules:
                continue
            u = apply(s, r)
            ku = alpha_key(u)
            if ku not in nodes:
                nodes[ku] = u
                queue.append(ku)
            out.append((r, ku))
        edges[k] = out
    return ReductionGraph(t, nodes, edges, truncated)


def longest_w_reduction(t, budget=20000):
    """Length of the longest reduction to normal form, or None.

    None means the budget ran out or the graph has a cycle.
    """
    g = explore(t, budget)
    if g.truncated or g.has_cycle():
        return None
    best = {}
    for start in g.edges:
        if start in best:
            continue
        stack = [(start, False)]
        while stack:
            k, done = stack.pop()
            if done:
                best[k] = max((best[d] + 1 for _, d in g.edges[k]), default=0)
                continue
            if k in best:
                continue
            stack.append((k, True))
            stack.extend((d, False) for _, d in g.edges[k] if d not in best)
    return best[alpha_key(t)]


# ---------------------------------------------------------------------------
# reports

@dataclass
class Failure:
    term: str
    witness: str

    def to_json(self):
        return {"term": self.term, "witness": self.witness}


@dataclass
class PropertyReport:
    suite: str
    size: int
    instances: int = 0
    failures: List[Failure] = field(default_factory=list)
    budget: Dict[str, int] = field(default_factory=dict)
    seed: int = 0
    source: str = "all"
    seconds: float = 0.0

    @property
    def ok(self):
        return not self.failures

    def fail(self, t, witness):
        self.failures.append(Failure(t if isinstance(t, str) else to_str(t), witness))

    def note(self, key, n=1):
        self.budget[key] = self.budget.get(key, 0) + n

    def merge(self, other):
        self.instances += other.instances
        self.failures.extend(other.failures)
        for k, v in other.budget.items():
            self.note(k, v)
        return self

    def summary(self):
        return "%s: %s (%d instances, %d failures, size <= %d%s)" % (
            self.suite, "ok" if self.ok else "FAILED", self.instances,
            len(self.failures), self.size, "" if self.source == "all" else ", applications")

    def to_json(self):
        return {
            "suite": self.suite, "size": self.size, "ok": self.ok,
            "instances": self.instances,
            "failures": [f.to_json() for f in self.failures],
            "budget": dict(self.budget), "seed": self.seed, "source": self.source,
            "seconds": round(self.seconds, 3),
        }


# ---------------------------------------------------------------------------
# helpers shared by suites

def _keys(terms):
    return {alpha_key(u) for u in terms}


def _one_step(t, rule):
    return [apply(t, r) for r in redexes_w(t) if r.rule == rule]


def _reach(t, rule, max_steps, cap=2000):
    """Alpha keys reachable in 1..max_steps steps of ``rule``."""
    seen = set()
    frontier = [t]
    for _ in range(max_steps):
        nxt = []
        for s in frontier:
            for u in _one_step(s, rule):
                k = alpha_key(u)
                if k not in seen:
                    seen.add(k)
                    nxt.append(u)
        frontier = nxt
        if not frontier or len(seen) > cap:
            break
    return seen


def _graph_sample(t, cap, budget):
    g = explore(t, budget)
    return list(itertools.islice(g.nodes.values(), cap)), g


def _local_instances(rep, size, per_term=20):
    """Open terms with substitutions, then reducts of closed terms.

    Local properties (peaks, structural steps) need explicit substitutions
    at interesting places, which small pure terms rarely provide.
    """
    yield from generate_terms(min(size, 7))
    for t in _closed(rep, min(size + 2, MAX_SIZE)):
        nodes, _ = _graph_sample(t, per_term, 2 * per_term)
        yield from nodes


def random_traces(terms, count, fuel=40, seed=0):
    """``count`` random-policy weak traces over ``terms``, cycling seeds."""
    out = []
    terms = list(terms)
    for i in itertools.count():
        if len(out) >= count:
            break
        t = terms[i % len(terms)]
        res = normalize_w(t, "random", fuel, seed + i)
        out.append(res.trace)
    return out


# ---------------------------------------------------------------------------
# suites

def _closed(rep, size):
    if rep.source == "apps":
        return generate_closed_apps(size)
    return generate_closed_terms(size)

def suite_normal_form_grammar(rep, size, fuel, budget, seed):
    for t in generate_terms(min(size, 6)):
        rep.instances += 1
        empty = not redexes_w(t)
        if empty != is_weak_normal(t):
            rep.fail(t, "no redexes: %s, grammar: %s" % (empty, is_weak_normal(t)))


def _confluence_check(rep, t, budget, rules, tag):
    g = explore(t, budget, rules)
    if g.truncated:
        rep.note("truncated " + tag)
        return
    nfs = _keys(g.normal_forms())
    if len(nfs) > 1:
        rep.fail(t, "%s: %d distinct normal forms" % (tag, len(nfs)))
    if g.has_cycle() and nfs:
        rep.fail(t, "%s: cycle next to a normal form" % tag)


def suite_confluence(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        rep.instances += 1
        _confluence_check(rep, t, budget, None, "w")
        _confluence_check(rep, t, budget, ("wm", "we"), "w-not-gcv")


def suite_uniform_normalization(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        g = explore(t, budget)
        if g.truncated:
            rep.note("truncated")
            continue
        rep.instances += 1
        nfs = g.normal_forms()
        if g.has_cycle() and nfs:
            rep.fail(t, "an infinite path coexists with a normal form")
        # every maximal path of a finite acyclic graph ends in a sink
        for k, out in g.edges.items():
            if not out and not is_weak_normal(g.nodes[k]):
                rep.fail(t, "stuck non-normal node %s" % to_str(g.nodes[k]))


def suite_diamond_gcv(rep, size, fuel, budget, seed):
    for s in _local_instances(rep, size):
        for rule in ("wm", "wgcv"):
            reds = _one_step(s, rule)
            for u1, u2 in itertools.combinations(reds, 2):
                rep.instances += 1
                if alpha_key(u1) == alpha_key(u2):
                    continue
                k1 = _keys(_one_step(u1, rule))
                k2 = _keys(_one_step(u2, rule))
                if not k1 & k2:
                    rep.fail(s, "%s peak does not close in one step" % rule)


_COMMUTE = (("we", "wm"), ("we", "wgcv"), ("wgcv", "wm"))


def suite_commutation(rep, size, fuel, budget, seed):
    """``u1 <-1 t ->2 u2`` closes as ``u1 ->2+ s <-1 u2``."""
    for s in _local_instances(rep, size):
        for one, two in _COMMUTE:
            for u1 in _one_step(s, one):
                for u2 in _one_step(s, two):
                    rep.instances += 1
                    left = _reach(u1, two, 6)
                    right = _keys(_one_step(u2, one))
                    if not left & right:
                        rep.fail(s, "%s over %s peak does not close" % (one, two))


def suite_local_termination(rep, size, fuel, budget, seed):
    for s in _local_instances(rep, size):
        rep.instances += 1
        bound = 4 * term_size(s) ** 2 + 10
        for rule in ("wm", "wgcv", "we"):
            res = normalize_w(s, "leftmost", bound, rules=(rule,))
            if isinstance(res, FuelExhausted):
                rep.fail(s, "%s alone ran past %d steps" % (rule, bound))


def suite_postponement(rep, size, fuel, budget, seed):
    terms = list(_closed(rep, size))
    for d in random_traces(terms, 1000, 40, seed):
        rep.instances += 1
        p = postpone_gcv(d)
        _check_postponed(rep, d, p, exact_gcv=False)
    for t in terms:
        res = cbs_normalize(t, min(fuel, 200), "eager")
        rep.instances += 1
        p = cbs_postpone_gcv(res.trace)
        _check_postponed(rep, res.trace, p, exact_gcv=True)


def _check_postponed(rep, d, p, exact_gcv):
    names = [s.redex.rule for s in d.steps]
    pnames = [s.redex.rule for s in p.steps]
    gc_before = sum(n == "wgcv" for n in names)
    gc_after = sum(n == "wgcv" for n in pnames)
    if alpha_key(p.end) != alpha_key(d.end):
        rep.fail(d.start, "endpoint changed")
    if [n for n in names if n != "wgcv"] != [n for n in pnames if n != "wgcv"]:
        rep.fail(d.start, "non-gcv steps changed")
    if gc_after < gc_before or (exact_gcv and gc_after != gc_before):
        rep.fail(d.start, "gcv count %d became %d" % (gc_before, gc_after))
    seen_gc = False
    for n in pnames:
        if n == "wgcv":
            seen_gc = True
        elif seen_gc:
            rep.fail(d.start, "gcv step not postponed")
            break
    cur = p.start
    for s in p.steps:
        cur = apply(cur, s.redex)
        if alpha_key(cur) != alpha_key(s.term):
            rep.fail(d.start, "postponed trace does not replay")
            break


def _machine_terms(rep, size, count=None):
    it = _closed(rep, size)
    return list(itertools.islice(it, count)) if count else list(it)


def suite_machine_invariants(rep, size, fuel, budget, seed):
    for t in _machine_terms(rep, size):
        for flavor in ("silly", "mam"):
            r = record_run(t, flavor, min(fuel, 300))
            for q in r.states:
                rep.instances += 1
                bad = check_invariants(q)
                if bad:
                    rep.fail(t, "%s: %s" % (flavor, bad[0]))
                    break
            sea2 = r.labels.count("sea2")
            if sea2 > r.labels.count("m"):
                rep.fail(t, "more sea2 than m transitions")


def suite_projection(rep, size, fuel, budget, seed):
    for t in _machine_terms(rep, size):
        for flavor in ("silly", "mam"):
            r = record_run(t, flavor, min(fuel, 300))
            rep.instances += 1
            pr = check_projection(r)
            for v in pr.violations:
                rep.fail(t, "%s: %s" % (flavor, v))
            rep.note("flags", len(pr.flags))


def suite_halt(rep, size, fuel, budget, seed):
    for t in _machine_terms(rep, size):
        r = record_run(t, "silly", min(fuel, 300))
        if not r.final:
            rep.note("fuel exhausted")
            continue
        rep.instances += 1
        q = r.states[-1]
        if not q.is_final_silly():
            rep.fail(t, "final state is not (C, v, e, e)")
        rb = readback(q)
        if not is_answer(rb):
            rep.fail(t, "read-back %s is not an answer" % to_str(rb))
        ne = normalize_w(t, "leftmost", fuel, rules=("wm", "we"))
        if isinstance(ne, NormalForm):
            if alpha_key(struct_normalize(rb)) != alpha_key(struct_normalize(ne.term)):
                rep.fail(t, "read-back %s and normal form %s are not structurally joinable"
                         % (to_str(rb), to_str(ne.term)))


def _struct_reach(t, kind, depth=3):
    red = struct_red_appl if kind == "appl" else struct_red_ans
    seen = {alpha_key(t)}
    frontier = [t]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for u in red(s):
                k = alpha_key(u)
                if k not in seen:
                    seen.add(k)
                    nxt.append(u)
        frontier = nxt
    return seen


def suite_struct_bisim(rep, size, fuel, budget, seed):
    for s in _local_instances(rep, size):
        for kind in ("appl", "ans"):
            red = struct_red_appl if kind == "appl" else struct_red_ans
            for u in red(s):
                for rule in ("wm", "we"):
                    rep.instances += 1
                    ts = _one_step(s, rule)
                    us = _one_step(u, rule)
                    for u2 in us:
                        k = alpha_key(u2)
                        if not any(k in _struct_reach(t2, kind) for t2 in ts):
                            rep.fail(s, "%s: %s step from the right unmatched" % (kind, rule))
                    for t2 in ts:
                        reach = _struct_reach(t2, kind)
                        if not any(alpha_key(u2) in reach for u2 in us):
                            rep.fail(s, "%s: %s step from the left unmatched" % (kind, rule))


def suite_tight_correctness(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        for policy in ("lazy", "eager"):
            res = cbs_normalize(t, fuel, policy)
            if not isinstance(res, NormalForm):
                rep.note("fuel exhausted")
                continue
            rep.instances += 1
            d = infer_tight(t, fuel, policy)
            if d is None or not check_derivation(d) or not is_tight(d) or d.ctx.domain():
                rep.fail(t, "%s: no valid tight derivation" % policy)
                continue
            c = res.counts
            if indices(d) != (c.m, c.e):
                rep.fail(t, "%s: indices %s but %d ym and %d ye steps"
                         % (policy, indices(d), c.m, c.e))


def suite_subject_reduction_indices(rep, size, fuel, budget, seed):
    rng = random.Random(seed)
    for t in _closed(rep, size):
        d0 = infer_tight(t, fuel)
        if d0 is None:
            rep.note("fuel exhausted")
            continue
        res = cbs_normalize(t, fuel)
        _reduce_along(rep, t, d0, res.trace, exact=True)
        w = normalize_w(t, "random", fuel, rng.randrange(1 << 30))
        _reduce_along(rep, t, d0, w.trace, exact=False)
        m, e = indices(d0)
        if w.trace.count("wm") > m or w.trace.count("we") > e:
            rep.fail(t, "weak trace longer than the derivation indices")


def _reduce_along(rep, t, d, trace, exact):
    cur = t
    for st in trace.steps:
        rep.instances += 1
        d2 = subject_reduce(cur, st.redex, d)
        if not check_derivation(d2):
            rep.fail(t, "invalid derivation after %s" % st.redex)
            return
        (m, e), (m2, e2) = indices(d), indices(d2)
        rule = st.redex.rule
        if rule == "wm":
            ok = m2 == m - 1 if exact else m2 < m
            ok = ok and e2 == e
        elif rule == "we":
            ok = e2 == e - 1 if exact else e2 < e
            ok = ok and m2 == m
        else:
            ok = (m2, e2) == (m, e) and size(d2) < size(d)
        if not ok:
            rep.fail(t, "%s changed indices (%d,%d) -> (%d,%d)" % (rule, m, e, m2, e2))
            return
        cur, d = st.term, d2


def suite_maximality(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        res = cbs_normalize(t, fuel)
        if not isinstance(res, NormalForm):
            rep.note("fuel exhausted")
            continue
        longest = longest_w_reduction(t, budget)
        if longest is None:
            rep.note("graph over budget")
            continue
        rep.instances += 1
        if longest != res.counts.total:
            rep.fail(t, "longest weak reduction %d, CbS %d" % (longest, res.counts.total))


def op_equiv_verdict(t, fuel):
    """``(cbv, cbs)`` outcomes, with the slower side re-run at 100x fuel."""
    v = cbv_eval(t, fuel)
    s = cbs_normalize(t, fuel)
    v_ok, s_ok = isinstance(v, Value), isinstance(s, NormalForm)
    if v_ok and not s_ok:
        s = cbs_normalize(t, 100 * max(v.length, 1) + fuel)
    elif s_ok and not v_ok:
        v = cbv_eval(t, 100 * max(len(s.trace), 1) + fuel)
    return v, s


def suite_op_equiv(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        rep.instances += 1
        v, s = op_equiv_verdict(t, fuel)
        if isinstance(v, Value) != isinstance(s, NormalForm):
            rep.fail(t, "CbV %s, CbS %s" % (type(v).__name__, type(s).__name__))


def suite_cbv_bound(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        v = cbv_eval(t, fuel)
        if not isinstance(v, Value):
            rep.note("fuel exhausted")
            continue
        d = infer_tight(t, fuel)
        if d is None:
            rep.fail(t, "CbV terminates but no tight derivation was found")
            continue
        rep.instances += 1
        m, _ = indices(d)
        if v.length > m:
            rep.fail(t, "CbV length %d exceeds m = %d" % (v.length, m))


def suite_cbs_determinism(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        cur = t
        for _ in range(min(fuel, 200)):
            rep.instances += 1
            en = cbs_enabled(cur)
            for k in ("ym", "yeAY", "yeYN"):
                if len(en[k]) > 1:
                    rep.fail(cur, "%d %s steps" % (len(en[k]), k))
            ys = en["ygcv"]
            for r1, r2 in itertools.combinations(ys, 2):
                k1 = _keys(_one_step(apply(cur, r1), "wgcv"))
                if not k1 & _keys(_one_step(apply(cur, r2), "wgcv")):
                    rep.fail(cur, "ygcv peak does not close")
            st = cbs_step(cur)
            if st is None:
                if not is_strict_answer(cur):
                    rep.fail(cur, "CbS stops on a non strict answer")
                break
            cur = st.result
        res = cbs_normalize(t, fuel)
        if isinstance(res, NormalForm):
            ne = _non_erasing_end(t, fuel)
            if ne is not None and not is_answer(ne):
                rep.fail(t, "non-erasing CbS stops on a non answer")


def _non_erasing_end(t, fuel):
    cur = t
    for _ in range(fuel):
        st = cbs_decompose(cur, erasing=False)
        if st is None:
            return cur
        cur = st.result
    return None


def suite_cbs_extends_cbn(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        cur = t
        for _ in range(min(fuel, 200)):
            st = cbn_step(cur)
            if st is None:
                break
            if st.label != "ngc":
                rep.instances += 1
                want = "ym" if st.label == "nm" else "yeYN"
                en = cbs_enabled(cur)
                if st.redex not in en[want]:
                    rep.fail(cur, "CbN %s at %s is not a %s step" % (st.label, st.redex, want))
            cur = st.result


def suite_gcv_policy(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        lazy = cbs_normalize(t, fuel, "lazy")
        eager = cbs_normalize(t, fuel, "eager")
        if not (isinstance(lazy, NormalForm) and isinstance(eager, NormalForm)):
            if isinstance(lazy, NormalForm) != isinstance(eager, NormalForm):
                rep.fail(t, "policies disagree on termination")
            continue
        rep.instances += 1
        if lazy.counts != eager.counts:
            rep.fail(t, "lazy %s, eager %s" % (lazy.counts, eager.counts))
        if alpha_key(lazy.term) != alpha_key(eager.term):
            rep.fail(t, "different results")


def suite_cbv_diamond(rep, size, fuel, budget, seed):
    for t in _closed(rep, size):
        left = cbv_eval(t, fuel, "leftmost")
        right = cbv_eval(t, fuel, "rightmost")
        if isinstance(left, Value) and isinstance(right, Value):
            rep.instances += 1
            if left.length != right.length:
                rep.fail(t, "lengths %d and %d" % (left.length, right.length))
        cur, n = t, 0
        while n < 50:
            reds = cbv_reducts(cur)
            for u1, u2 in itertools.combinations(reds, 2):
                rep.instances += 1
                if alpha_key(u1) == alpha_key(u2):
                    continue
                if not _keys(cbv_reducts(u1)) & _keys(cbv_reducts(u2)):
                    rep.fail(cur, "CbV peak does not close in one step")
            if not reds:
                break
            cur, n = reds[0], n + 1


SUITES = {
    "normal-form-grammar": suite_normal_form_grammar,
    "confluence": suite_confluence,
    "diamond-gcv": suite_diamond_gcv,
    "commutation": suite_commutation,
    "local-termination": suite_local_termination,
    "postponement": suite_postponement,
    "uniform-normalization": suite_uniform_normalization,
    "machine-invariants": suite_machine_invariants,
    "projection": suite_projection,
    "halt": suite_halt,
    "struct-bisim": suite_struct_bisim,
    "tight-correctness": suite_tight_correctness,
    "subject-reduction-indices": suite_subject_reduction_indices,
    "maximality": suite_maximality,
    "op-equiv": suite_op_equiv,
    "cbv-bound": suite_cbv_bound,
    "cbs-determinism": suite_cbs_determinism,
    "cbs-extends-cbn": suite_cbs_extends_cbn,
    "gcv-policy": suite_gcv_policy,
    "cbv-diamond": suite_cbv_diamond,
}


def run_suite(name, size_bound=7, fuel=10000, budget=20000, seed=0, source="all"):
    """Run one suite; names are the keys of :data:`SUITES`.

    ``source`` is ``all`` for every closed term or ``apps`` for closed
    applications only.
    """
    if source not in ("all", "apps"):
        raise ValueError("source must be all or apps")
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError("unknown suite %r" % name) from None
    rep = PropertyReport(name, size_bound, seed=seed, source=source)
    start = time.perf_counter()
    with fresh_scope():
        fn(rep, size_bound, fuel, budget, seed)
    rep.seconds = time.perf_counter() - start
    return rep
