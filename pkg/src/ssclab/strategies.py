"""Call-by-name and call-by-silly strategies.

Name contexts      N ::= <.> | N t | N[x<-t]
Auxiliary contexts A ::= <.> | a[x<-A] | A[x<-t]      (a an answer)
Silly contexts     Y ::= A<N>

CbN steps are ``nm``, ``ne`` (occurrence chosen by a name context) and
``ngc`` (garbage collection by name).  CbS steps are ``ym``, ``yeAY``
(root exponential rule under A, occurrence chosen by a silly context),
``yeYN`` (under Y, occurrence chosen by a name context) and ``ygcv``.
The two exponential classes overlap; a step in both is labelled ``yeAY``
and the step records every class it belongs to.
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet

from .calculus import (
    FuelExhausted, InvalidRedex, NormalForm, NotComposable, Redex, Trace,
    TraceStep, abs_under_subs, apply, is_answer,
)
from .terms import (
    APP, LAM, SUB, VAR, Step, alpha_key, free_vars, shallow_free_vars, to_str,
)

log = logging.getLogger(__name__)

__all__ = [
    "StrategyStep", "StepCounts", "PreconditionError", "cbn_step",
    "cbn_normalize", "cbs_enabled", "cbs_decompose", "cbs_step",
    "cbs_normalize", "cbs_local_swap_gcv", "cbs_postpone_gcv",
    "DIAGNOSTICS", "silly_positions", "print_order",
]

CBS_PRIORITY = ("ym", "yeAY", "yeYN", "ygcv")


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class StrategyStep:
    label: str
    redex: Redex
    result: object
    classes: FrozenSet[str] = field(default_factory=frozenset)

    def trace_step(self):
        return TraceStep(self.redex, self.result, self.label)


@dataclass(frozen=True)
class StepCounts:
    m: int = 0
    e: int = 0
    gcv: int = 0

    @property
    def total(self):
        return self.m + self.e + self.gcv


_M = {"nm", "ym"}
_E = {"ne", "yeAY", "yeYN"}
_G = {"ngc", "ygcv"}


def counts_of(trace):
    names = trace.names()
    return StepCounts(
        sum(1 for n in names if n in _M),
        sum(1 for n in names if n in _E),
        sum(1 for n in names if n in _G),
    )


class _Diagnostics:
    """Records states where distinct non-erasing CbS steps coexist."""

    def __init__(self):
        self.events = []

    def record(self, term, enabled):
        self.events.append((to_str(term), {k: len(v) for k, v in enabled.items()}))
        log.debug("several non-erasing CbS steps enabled on %s", to_str(term))

    def clear(self):
        self.events.clear()


DIAGNOSTICS = _Diagnostics()


def print_order(pos):
    """Sort key placing positions in left-to-right printing order."""
    key = []
    for s in pos:
        key.append(2 if s in (Step.APP_ARG, Step.SUB_DEF) else 0)
    key.append(1)
    return tuple(key)


# ---------------------------------------------------------------------------
# call-by-name

def cbn_step(t):
    """The CbN step of ``t``, or None if ``t`` is CbN normal."""
    spine = []
    pos = ()
    s = t
    while True:
        tag = s.tag
        if tag == APP:
            if abs_under_subs(s.fun) is not None:
                r = Redex("wm", pos)
                return StrategyStep("nm", r, apply(t, r), frozenset(("nm",)))
            spine.append((pos, s))
            s = s.fun
            pos = pos + (Step.APP_FUN,)
        elif tag == SUB:
            spine.append((pos, s))
            s = s.body
            pos = pos + (Step.SUB_BODY,)
        else:
            break
    if s.tag == VAR:
        for p, node in reversed(spine):
            if node.tag == SUB and node.var == s.name:
                r = Redex("we", p, pos[len(p) + 1:])
                return StrategyStep("ne", r, apply(t, r), frozenset(("ne",)))
    for p, node in reversed(spine):
        if node.tag == SUB and node.var not in free_vars(node.body):
            r = Redex("wgc-name", p)
            return StrategyStep("ngc", r, apply(t, r), frozenset(("ngc",)))
    return None


def cbn_normalize(t, fuel=10000):
    steps = []
    cur = t
    while True:
        st = cbn_step(cur)
        if st is None:
            trace = Trace(t, tuple(steps))
            return NormalForm(cur, trace, counts_of(trace))
        if len(steps) >= fuel:
            trace = Trace(t, tuple(steps))
            return FuelExhausted(trace, counts_of(trace))
        cur = st.result
        steps.append(st.trace_step())


# ---------------------------------------------------------------------------
# call-by-silly

class _AnswerMemo:
    """``is_answer`` with sharing across the nested bodies of an ES spine."""

    def __init__(self):
        self.memo = {}

    def __call__(self, s):
        memo = self.memo
        chain = []
        while s.tag == SUB and id(s) not in memo:
            chain.append(s)
            s = s.body
        r = memo.get(id(s))
        if r is None:
            r = s.tag == LAM
        for c in reversed(chain):
            r = r and self(c.arg)
            memo[id(c)] = r
        return r


def silly_positions(t):
    """Yield ``(position, subterm, in_A)`` for every silly-context hole.

    ``in_A`` tells whether the hole is also an auxiliary-context hole.
    """
    return [(pos, s, in_a) for pos, s, in_a, _ in _silly_walk(t, _AnswerMemo())]


def _silly_walk(t, answer):
    # also yields the path of binders: name -> [(depth, in_A at the ES)]
    stack = [((), t, True, {})]
    while stack:
        pos, s, in_a, env = stack.pop()
        yield pos, s, in_a, env
        tag = s.tag
        if tag == APP:
            stack.append((pos + (Step.APP_FUN,), s.fun, False, env))
        elif tag == SUB:
            if in_a and answer(s.body):
                stack.append((pos + (Step.SUB_DEF,), s.arg, True, env))
            inner = dict(env)
            inner[s.var] = (len(pos), in_a)
            stack.append((pos + (Step.SUB_BODY,), s.body, in_a, inner))


_NAME_STEPS = (Step.APP_FUN, Step.SUB_BODY)


def cbs_enabled(t):
    """Every CbS step of ``t``, grouped by class: ``{label: [Redex, ...]}``.

    One walk over silly positions: each variable found there is matched to
    the ES binding it.  Any path from that ES lies in a silly context; it is
    a name context when it never enters a definiens.
    """
    out = {k: [] for k in CBS_PRIORITY}
    for pos, s, in_a, env in _silly_walk(t, _AnswerMemo()):
        tag = s.tag
        if tag == APP:
            if abs_under_subs(s.fun) is not None:
                out["ym"].append(Redex("wm", pos))
        elif tag == VAR:
            b = env.get(s.name)
            if b is None:
                continue
            d, es_in_a = b
            hole, occ = pos[:d], pos[d + 1:]
            if es_in_a:
                out["yeAY"].append(Redex("we", hole, occ))
            if all(st in _NAME_STEPS for st in occ):
                out["yeYN"].append(Redex("we", hole, occ))
        elif tag == SUB:
            if (s.var not in free_vars(s.body) and abs_under_subs(s.arg) is not None):
                out["ygcv"].append(Redex("wgcv", pos))
    for k in ("ym", "yeAY", "yeYN"):
        out[k].sort(key=lambda r: (print_order(r.hole), print_order(r.occ or ())))
    out["ygcv"].sort(key=lambda r: print_order(r.hole))
    return out


def _check_closed(t):
    if shallow_free_vars(t):
        raise PreconditionError(
            "call-by-silly needs a term without shallow free variables, got %s"
            % ", ".join(sorted(shallow_free_vars(t))))


def cbs_decompose(t, erasing=True):
    """The CbS step of ``t`` by priority ym > yeAY > yeYN > ygcv, or None.

    With ``erasing=False`` only non-erasing steps are considered.
    """
    _check_closed(t)
    return _pick(t, cbs_enabled(t), erasing, first_gcv=False)


def cbs_step(t, gcv_policy="lazy"):
    _check_closed(t)
    en = cbs_enabled(t)
    return _pick(t, en, True, first_gcv=(gcv_policy == "eager"))


def _pick(t, en, erasing, first_gcv):
    distinct = {r for k in ("ym", "yeAY", "yeYN") for r in en[k]}
    if len(distinct) > 1:
        DIAGNOSTICS.record(t, en)
    if first_gcv and en["ygcv"]:
        r = en["ygcv"][0]
        return StrategyStep("ygcv", r, apply(t, r), frozenset(("ygcv",)))
    for label in CBS_PRIORITY:
        if label == "ygcv" and not erasing:
            break
        if en[label]:
            r = en[label][0]
            classes = frozenset(k for k in CBS_PRIORITY if r in en[k])
            return StrategyStep(label, r, apply(t, r), classes)
    return None


def cbs_normalize(t, fuel=10000, gcv_policy="lazy"):
    """Run the CbS strategy.

    ``lazy`` collects garbage only once no non-erasing step is left;
    ``eager`` collects as soon as possible.
    """
    if gcv_policy not in ("lazy", "eager"):
        raise ValueError("gcv_policy must be lazy or eager")
    _check_closed(t)
    steps = []
    cur = t
    while True:
        st = cbs_step(cur, gcv_policy)
        if st is None:
            trace = Trace(t, tuple(steps))
            return NormalForm(cur, trace, counts_of(trace))
        if len(steps) >= fuel:
            trace = Trace(t, tuple(steps))
            return FuelExhausted(trace, counts_of(trace))
        cur = st.result
        steps.append(st.trace_step())


def cbs_local_swap_gcv(t, first, second):
    """Swap ``t ->ygcv ->y(m|e) t''`` into ``t ->y(m|e) ->ygcv`` ending alpha-equal to ``t''``."""
    if first.rule != "wgcv" or second.rule not in ("wm", "we"):
        raise NotComposable("expected a ygcv step followed by a non-erasing step")
    try:
        mid = apply(t, first)
        end = apply(mid, second)
    except InvalidRedex as exc:
        raise NotComposable(str(exc)) from None
    st = cbs_decompose(t, erasing=False)
    if st is None or st.redex.rule != second.rule:
        raise NotComposable("no matching non-erasing CbS step before the collection")
    target = alpha_key(end)
    for r in cbs_enabled(st.result)["ygcv"]:
        u = apply(st.result, r)
        if alpha_key(u) == target:
            return Trace(t, (st.trace_step(), TraceStep(r, end, "ygcv")))
    raise NotComposable("no single ygcv step closes the swap")


def cbs_postpone_gcv(d):
    """Reorder a CbS trace into non-erasing steps followed by ygcv steps."""
    head = []
    tail = []
    for step in d.steps:
        if step.name == "ygcv":
            tail.append(step)
            continue
        moving = step
        after = []
        while tail:
            g = tail.pop()
            src = tail[-1].term if tail else (head[-1].term if head else d.start)
            swapped = cbs_local_swap_gcv(src, g.redex, moving.redex)
            moving = swapped.steps[0]
            after = [swapped.steps[1]] + _rechain(after, swapped.steps[1].term)
        head.append(moving)
        tail = after
    return Trace(d.start, tuple(head + tail))


def _rechain(steps, start):
    out = []
    cur = start
    for s in steps:
        cur = apply(cur, s.redex)
        out.append(TraceStep(s.redex, cur, s.label))
    return out
