"""Weak rewriting rules of the silly substitution calculus.

Root rules, closed under weak contexts (never under an abstraction)::

    wm    S<\\x.t> u          ->  S<t[x<-u]>
    we    W<<x>>[x<-u]         ->  W<<u>>[x<-u]
    wgcv  t[x<-S<v>]           ->  S<t>          if x not free in t

``S`` is a list of explicit substitutions and ``v`` an abstraction.  Two
variants are also available for cross-calculus tests: ``wgc-name`` erases
any unused substitution, ``we-value`` copies values only.
"""

import json
import random
from dataclasses import dataclass
from typing import Optional, Tuple

from .terms import (
    APP, LAM, SUB, VAR, App, Step, Sub, Var,
    all_names, alpha_key, format_position, fresh, free_vars, rename_var,
    rename_well_bound,
    replace_at, shallow_free_vars, subterm_at, to_str,
)

__all__ = [
    "RULES", "Redex", "InvalidRedex", "NotComposable", "TraceStep", "Trace",
    "NormalForm", "FuelExhausted", "redexes_w", "apply", "is_weak_normal",
    "classify_normal", "is_answer", "is_strict_answer", "normalize_w",
    "local_swap_gcv", "postpone_gcv", "choose", "abs_under_subs",
    "value_under_subs", "shallow_occurrences",
]

RULES = ("wm", "we", "wgcv", "wgc-name", "we-value")


class InvalidRedex(ValueError):
    pass


class NotComposable(ValueError):
    pass


@dataclass(frozen=True)
class Redex:
    rule: str
    hole: Tuple[Step, ...] = ()
    occ: Optional[Tuple[Step, ...]] = None

    def __str__(self):
        s = format_position(self.hole)
        if self.occ is not None:
            s += ":" + format_position(self.occ)
        return s

    def to_json(self):
        d = {"rule": self.rule, "hole": format_position(self.hole)}
        if self.occ is not None:
            d["occ"] = format_position(self.occ)
        return d


@dataclass(frozen=True)
class TraceStep:
    redex: Redex
    term: object
    label: Optional[str] = None

    @property
    def name(self):
        return self.label or self.redex.rule


@dataclass(frozen=True)
class Trace:
    start: object
    steps: Tuple[TraceStep, ...] = ()

    def __len__(self):
        return len(self.steps)

    @property
    def end(self):
        return self.steps[-1].term if self.steps else self.start

    def terms(self):
        return [self.start] + [s.term for s in self.steps]

    def names(self):
        return [s.name for s in self.steps]

    def count(self, *names):
        return sum(1 for s in self.steps if s.name in names)

    def to_text(self):
        lines = []
        for i, s in enumerate(self.steps, 1):
            lines.append("%d. %s @ %s => %s" % (i, s.name, s.redex, to_str(s.term)))
        return "\n".join(lines)

    def to_json(self):
        out = []
        for s in self.steps:
            d = s.redex.to_json()
            if s.label is not None:
                d["label"] = s.label
            d["term"] = to_str(s.term)
            out.append(d)
        return {"start": to_str(self.start), "steps": out}

    def dumps(self):
        return json.dumps(self.to_json(), ensure_ascii=False)


@dataclass(frozen=True)
class NormalForm:
    term: object
    trace: Trace
    counts: object = None


@dataclass(frozen=True)
class FuelExhausted:
    trace: Trace
    counts: object = None


# ---------------------------------------------------------------------------
# patterns

def abs_under_subs(t):
    """The abstraction of ``S<\\x.t>``, or None."""
    while t.tag == SUB:
        t = t.body
    return t if t.tag == LAM else None


value_under_subs = abs_under_subs


def shallow_occurrences(body, x):
    """Positions in ``body`` of free occurrences of ``x`` out of abstractions.

    Listed left to right.  Occurrences below an ES rebinding ``x`` are not
    free, but the definiens of such an ES still is in scope.
    """
    out = []

    def go(s, pos):
        tag = s.tag
        if tag == VAR:
            if s.name == x:
                out.append(pos)
        elif tag == APP:
            go(s.fun, pos + (Step.APP_FUN,))
            go(s.arg, pos + (Step.APP_ARG,))
        elif tag == SUB:
            if s.var != x:
                go(s.body, pos + (Step.SUB_BODY,))
            go(s.arg, pos + (Step.SUB_DEF,))

    if x in shallow_free_vars(body):
        go(body, ())
    return out


def redexes_w(t):
    """All weak redexes, leftmost-outermost by hole and then by occurrence."""
    out = []

    def go(s, pos):
        tag = s.tag
        if tag == APP:
            if abs_under_subs(s.fun) is not None:
                out.append(Redex("wm", pos))
            go(s.fun, pos + (Step.APP_FUN,))
            go(s.arg, pos + (Step.APP_ARG,))
        elif tag == SUB:
            occs = shallow_occurrences(s.body, s.var)
            if occs:
                for occ in occs:
                    out.append(Redex("we", pos, occ))
            elif s.var not in free_vars(s.body) and abs_under_subs(s.arg) is not None:
                out.append(Redex("wgcv", pos))
            go(s.body, pos + (Step.SUB_BODY,))
            go(s.arg, pos + (Step.SUB_DEF,))

    go(t, ())
    return out


# ---------------------------------------------------------------------------
# contraction

def _rename_subs(t, bad):
    """Rename the binders of the ES list on top of ``t`` that lie in ``bad``."""
    if t.tag != SUB:
        return t
    body, y = t.body, t.var
    if y in bad:
        y2 = fresh(y, bad | free_vars(body))
        body = rename_var(body, y, y2)
        y = y2
    return Sub(_rename_subs(body, bad), y, t.arg)


def _contract_m(t):
    u = t.arg
    f = _rename_subs(t.fun, free_vars(u))

    def go(s):
        if s.tag == LAM:
            return Sub(s.body, s.var, u)
        return Sub(go(s.body), s.var, s.arg)

    return go(f)


def _plug_occurrence(body, x, occ, u):
    """Replace the free occurrence of ``x`` at ``occ`` by ``u``.

    ES binders crossed on the way that would capture a free variable of
    ``u`` are renamed first.
    """
    fvu = free_vars(u)

    def go(s, i):
        if i == len(occ):
            if s.tag != VAR or s.name != x:
                raise InvalidRedex("no occurrence of %s at the given position" % x)
            return u
        step = occ[i]
        tag = s.tag
        if step == Step.APP_FUN and tag == APP:
            return App(go(s.fun, i + 1), s.arg)
        if step == Step.APP_ARG and tag == APP:
            return App(s.fun, go(s.arg, i + 1))
        if step == Step.SUB_BODY and tag == SUB:
            if s.var == x:
                raise InvalidRedex("occurrence is bound by an inner substitution")
            b, y = s.body, s.var
            if y in fvu:
                y2 = fresh(y, fvu | free_vars(b))
                b = rename_var(b, y, y2)
                y = y2
            return Sub(go(b, i + 1), y, s.arg)
        if step == Step.SUB_DEF and tag == SUB:
            return Sub(s.body, s.var, go(s.arg, i + 1))
        raise InvalidRedex("occurrence position leaves the weak context")

    return go(body, 0)


def _own_binder_apart(t, u):
    """Rename the binder of ``t`` if ``u``, about to enter its scope, mentions it."""
    b, x = t.body, t.var
    if x in free_vars(u):
        x2 = fresh(x, free_vars(b) | free_vars(u))
        b = rename_var(b, x, x2)
        x = x2
    return b, x


def _fresh_copy(u, t):
    # binders of a copy get fresh names, so traces never reuse a binder
    return u if u.tag == VAR else rename_well_bound(u, all_names(t))


def _contract_e(t, occ):
    b, x = _own_binder_apart(t, t.arg)
    return Sub(_plug_occurrence(b, x, occ, _fresh_copy(t.arg, t)), x, t.arg)


def _contract_gcv(t):
    b = t.body
    d = _rename_subs(t.arg, free_vars(b))

    def go(s):
        if s.tag == LAM:
            return b
        return Sub(go(s.body), s.var, s.arg)

    return go(d)


def _contract_e_value(t, occ):
    # W<<x>>[x<-S<v>]  ->  S<W<<v>>[x<-v]>
    d = _rename_subs(t.arg, free_vars(t.body) - {t.var})
    b, x = _own_binder_apart(t, abs_under_subs(d))
    entries = []
    s = d
    while s.tag == SUB:
        entries.append((s.var, s.arg))
        s = s.body
    v = s
    inner = Sub(_plug_occurrence(b, x, occ, _fresh_copy(v, t)), x, v)
    for var, arg in reversed(entries):
        inner = Sub(inner, var, arg)
    return inner


def apply(t, r):
    """Contract the redex ``r`` of ``t``."""
    if Step.ABS_BODY in r.hole:
        raise InvalidRedex("hole %s is under an abstraction" % format_position(r.hole))
    try:
        s = subterm_at(t, r.hole)
    except ValueError as exc:
        raise InvalidRedex(str(exc)) from None
    rule = r.rule
    if rule == "wm":
        if s.tag != APP or abs_under_subs(s.fun) is None:
            raise InvalidRedex("no multiplicative redex at %s" % format_position(r.hole))
        new = _contract_m(s)
    elif rule in ("we", "we-value"):
        if s.tag != SUB or r.occ is None:
            raise InvalidRedex("no exponential redex at %s" % format_position(r.hole))
        if Step.ABS_BODY in r.occ:
            raise InvalidRedex("occurrence under an abstraction")
        if rule == "we":
            new = _contract_e(s, r.occ)
        else:
            if abs_under_subs(s.arg) is None:
                raise InvalidRedex("definiens is not a value")
            new = _contract_e_value(s, r.occ)
    elif rule == "wgcv":
        if s.tag != SUB or s.var in free_vars(s.body) or abs_under_subs(s.arg) is None:
            raise InvalidRedex("no gc-by-value redex at %s" % format_position(r.hole))
        new = _contract_gcv(s)
    elif rule == "wgc-name":
        if s.tag != SUB or s.var in free_vars(s.body):
            raise InvalidRedex("no gc redex at %s" % format_position(r.hole))
        new = s.body
    else:
        raise InvalidRedex("unknown rule %r" % rule)
    return replace_at(t, r.hole, new)


# ---------------------------------------------------------------------------
# normal forms

def classify_normal(t):
    """``"answer"`` or ``"inert"`` if ``t`` is weak normal, else None.

    Answers   a ::= v | a[x<-i] (x not in shfv a) | a[x<-a'] (x in fv a - shfv a)
    Inert     i ::= x | i n | i[x<-i'] (x not in shfv i) | i[x<-a] (x in fv i - shfv i)
    """
    tag = t.tag
    if tag == LAM:
        return "answer"
    if tag == VAR:
        return "inert"
    if tag == APP:
        if classify_normal(t.fun) == "inert" and classify_normal(t.arg) is not None:
            return "inert"
        return None
    body = classify_normal(t.body)
    if body is None:
        return None
    arg = classify_normal(t.arg)
    x = t.var
    if x in shallow_free_vars(t.body):
        return None
    if arg == "inert":
        return body
    if arg == "answer" and x in free_vars(t.body):
        return body
    return None


def is_weak_normal(t):
    return classify_normal(t) is not None


def is_answer(t):
    """``a ::= v | a[x<-a']``."""
    while t.tag == SUB:
        if not is_answer(t.arg):
            return False
        t = t.body
    return t.tag == LAM


def is_strict_answer(t):
    """Answers in which every ES variable occurs free in its body."""
    while t.tag == SUB:
        if t.var not in free_vars(t.body) or not is_strict_answer(t.arg):
            return False
        t = t.body
    return t.tag == LAM


# ---------------------------------------------------------------------------
# normalization

def choose(redexes, policy, rng=None):
    if policy == "leftmost":
        return redexes[0]
    if policy == "rightmost":
        return redexes[-1]
    if policy == "random":
        return rng.choice(redexes)
    raise ValueError("unknown policy %r" % policy)


def normalize_w(t, policy="leftmost", fuel=10000, seed=0, rules=None):
    """Reduce until weak normal or out of fuel.

    ``rules`` restricts the step relation, e.g. ``("wm", "we")`` for the
    non-erasing fragment.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    rng = random.Random(seed) if policy == "random" else None
    steps = []
    cur = t
    while True:
        rs = redexes_w(cur)
        if rules is not None:
            rs = [r for r in rs if r.rule in rules]
        if not rs:
            return NormalForm(cur, Trace(t, tuple(steps)))
        if len(steps) >= fuel:
            return FuelExhausted(Trace(t, tuple(steps)))
        r = choose(rs, policy, rng)
        cur = apply(cur, r)
        steps.append(TraceStep(r, cur))


# ---------------------------------------------------------------------------
# postponement of gc by value

def _gcv_path(start, target_key, limit=10000):
    """Shortest sequence of wgcv steps from ``start`` to the alpha-class of the target."""
    if alpha_key(start) == target_key:
        return []
    frontier = [(start, [])]
    seen = {alpha_key(start)}
    while frontier and len(seen) < limit:
        nxt = []
        for s, path in frontier:
            for r in redexes_w(s):
                if r.rule != "wgcv":
                    continue
                u = apply(s, r)
                k = alpha_key(u)
                if k in seen:
                    continue
                p = path + [TraceStep(r, u)]
                if k == target_key:
                    return p
                seen.add(k)
                nxt.append((u, p))
        frontier = nxt
    return None


def local_swap_gcv(t, first, second):
    """Turn ``t ->wgcv ->w(m|e) t''`` into ``t ->w(m|e) ->wgcv^k`` ending alpha-equal to ``t''``."""
    if first.rule != "wgcv" or second.rule not in ("wm", "we"):
        raise NotComposable("expected a wgcv step followed by wm or we")
    try:
        mid = apply(t, first)
        end = apply(mid, second)
    except InvalidRedex as exc:
        raise NotComposable(str(exc)) from None
    target = alpha_key(end)
    cands = [r for r in redexes_w(t) if r.rule == second.rule]
    # try the redex at the same place first
    cands.sort(key=lambda r: (r.hole != second.hole, r.occ != second.occ))
    for r in cands:
        u = apply(t, r)
        path = _gcv_path(u, target)
        if path:
            if path[-1].term != end:
                path[-1] = TraceStep(path[-1].redex, end, path[-1].label)
            return Trace(t, (TraceStep(r, u),) + tuple(path))
    raise NotComposable("no postponed form found")


def postpone_gcv(d):
    """Reorder a weak trace into non-gcv steps followed by gcv steps."""
    head = []       # non-gcv steps, already in final position
    tail = []       # gcv steps after head
    for step in d.steps:
        if step.redex.rule == "wgcv":
            tail.append(step)
            continue
        if step.redex.rule not in ("wm", "we"):
            raise ValueError("postpone_gcv expects wm/we/wgcv steps")
        # bubble the step leftwards through the gcv tail
        moving = step
        after = []
        while tail:
            g = tail.pop()
            src = tail[-1].term if tail else (head[-1].term if head else d.start)
            swapped = local_swap_gcv(src, g.redex, moving.redex)
            moving = swapped.steps[0]
            after = list(swapped.steps[1:]) + _rechain(after, swapped.steps[-1].term)
        head.append(moving)
        tail = after
    return Trace(d.start, tuple(head + tail))


def _rechain(steps, start):
    """Replay ``steps`` (by redex) from an alpha-equal start, keeping names aligned."""
    out = []
    cur = start
    for s in steps:
        cur = apply(cur, s.redex)
        out.append(TraceStep(s.redex, cur, s.label))
    return out
