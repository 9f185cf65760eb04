"""The MAM and the Silly MAM.

A state is ``(panswer, code, stack, env)``.  Transitions::

    sea1  (C, t u, S, E)            ->  (C, t, u::S, E)
    m     (C, \\x.t, u::S, E)         ->  (C, t, S, [x<-u]::E)
    e     (C, x, S, E)  [x<-t] in E ->  (C, t', S, E)    t' fresh copy of t
    sea2  (C, v, [], [x<-t]::E)     ->  (C::(v,x), t, [], E)

``sea2`` belongs to the Silly MAM only; the plain MAM stops there.  The MAM
labels its search transition ``sea``.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .calculus import alpha_key, is_answer, redexes_w
from .strategies import cbn_step, cbs_decompose
from .terms import (
    APP, LAM, SUB, VAR, App, Sub,
    all_names, free_vars, fresh, is_pure, is_well_bound, rename_var, rename_well_bound,
    term_size, to_str,
)

__all__ = [
    "MachineState", "MachineError", "Final", "MachineFuelExhausted", "Run",
    "init", "step", "readback", "run", "record_run", "check_invariants",
    "struct_red_appl", "struct_red_ans", "struct_closure", "struct_normalize",
    "check_projection", "ProjectionReport", "format_table", "state_names",
]


class MachineError(ValueError):
    pass


@dataclass(frozen=True)
class MachineState:
    panswer: Tuple = ()      # ((value, name), ...), oldest first
    code: object = None
    stack: Tuple = ()        # head first
    env: Tuple = ()          # ((name, term), ...), head first

    def is_final_silly(self):
        return self.code.tag == LAM and not self.stack and not self.env


@dataclass(frozen=True)
class Final:
    state: MachineState
    counts: Dict[str, int]


@dataclass(frozen=True)
class MachineFuelExhausted:
    state: MachineState
    counts: Dict[str, int]


@dataclass
class Run:
    flavor: str
    states: List[MachineState] = field(default_factory=list)
    labels: List[str] = field(default_factory=list)
    final: bool = False

    @property
    def transitions(self):
        return list(zip(self.states, self.labels, self.states[1:]))


def init(t):
    if not is_pure(t):
        raise MachineError("machines start from terms without explicit substitutions")
    if free_vars(t):
        raise MachineError("machines start from closed terms; free: %s"
                           % ", ".join(sorted(free_vars(t))))
    code = t if is_well_bound(t) else rename_well_bound(t)
    return MachineState((), code, (), ())


def state_names(q):
    names = set()
    for v, x in q.panswer:
        names |= all_names(v)
        names.add(x)
    names |= all_names(q.code)
    for s in q.stack:
        names |= all_names(s)
    for x, s in q.env:
        names.add(x)
        names |= all_names(s)
    return names


def step(q, flavor="silly"):
    """One transition as ``(label, state)``, or None on a final state."""
    code = q.code
    tag = code.tag
    if tag == APP:
        label = "sea1" if flavor == "silly" else "sea"
        return label, MachineState(q.panswer, code.fun, (code.arg,) + q.stack, q.env)
    if tag == LAM:
        if q.stack:
            return "m", MachineState(q.panswer, code.body, q.stack[1:],
                                     ((code.var, q.stack[0]),) + q.env)
        if flavor == "silly" and q.env:
            (x, t), rest = q.env[0], q.env[1:]
            return "sea2", MachineState(q.panswer + ((code, x),), t, (), rest)
        return None
    if tag == VAR:
        for x, t in q.env:
            if x == code.name:
                new = rename_well_bound(t, state_names(q))
                return "e", MachineState(q.panswer, new, q.stack, q.env)
        return None
    raise MachineError("code with an explicit substitution")


def readback(q):
    t = q.code
    for s in q.stack:
        t = App(t, s)
    if q.panswer:
        acc = q.panswer[0][0]
        for i, (v, x) in enumerate(q.panswer):
            filler = q.panswer[i + 1][0] if i + 1 < len(q.panswer) else t
            acc = Sub(acc, x, filler)
        t = acc
    for x, s in q.env:
        t = Sub(t, x, s)
    return t


def record_run(t, flavor="silly", fuel=10000):
    q = init(t)
    r = Run(flavor, [q])
    while len(r.labels) < fuel:
        nxt = step(q, flavor)
        if nxt is None:
            r.final = True
            return r
        label, q = nxt
        r.labels.append(label)
        r.states.append(q)
    r.final = step(q, flavor) is None
    return r


def _counts(labels, flavor):
    keys = ("sea1", "m", "e", "sea2") if flavor == "silly" else ("sea", "m", "e")
    return {k: labels.count(k) for k in keys}


def run(t, flavor="silly", fuel=10000):
    r = record_run(t, flavor, fuel)
    counts = _counts(r.labels, flavor)
    if r.final:
        return Final(r.states[-1], counts)
    return MachineFuelExhausted(r.states[-1], counts)


# ---------------------------------------------------------------------------
# invariants

def _items(q):
    """State components in left-to-right order as (kind, term, binder)."""
    items = [("panswer", v, x) for v, x in q.panswer]
    items.append(("code", q.code, None))
    items += [("stack", s, None) for s in q.stack]
    items += [("env", s, x) for x, s in q.env]
    return items


def check_invariants(q):
    """Closure and well-boundness; returns a list of violations."""
    problems = []
    items = _items(q)
    # closure: free names need a binding entry to their right; a partial
    # answer entry (v, x) also scopes over its own value
    for i, (kind, s, x) in enumerate(items):
        later = {b for _, _, b in items[i + 1:] if b is not None}
        if kind == "panswer":
            later.add(x)
        # code, stack and env terms are outside partial answer scopes
        if kind != "panswer":
            later = {b for k, _, b in items[i + 1:] if k == "env"}
        missing = free_vars(s) - later
        if missing:
            problems.append("closure: %s free in %s %s" % (sorted(missing), kind, to_str(s)))
    # well-bound: binders pairwise distinct across the state
    binders = []
    for kind, s, x in items:
        if x is not None:
            binders.append(x)
        binders += _lam_and_sub_binders(s)
    dup = {b for b in binders if binders.count(b) > 1}
    if dup:
        problems.append("well-bound: repeated binders %s" % sorted(dup))
    # a binder name must not occur outside its scope
    for i, (kind, s, x) in enumerate(items):
        for b in _lam_and_sub_binders(s):
            for j, (_, s2, _) in enumerate(items):
                if j != i and b in all_names(s2):
                    problems.append("well-bound: %s escapes its abstraction" % b)
        if x is not None:
            for _, s2, _ in items[i + 1:]:
                if x in all_names(s2):
                    problems.append("well-bound: %s occurs right of its entry" % x)
    return problems


def _lam_and_sub_binders(t):
    out = []
    stack = [t]
    while stack:
        s = stack.pop()
        if s.tag == LAM:
            out.append(s.var)
            stack.append(s.body)
        elif s.tag == APP:
            stack.append(s.fun)
            stack.append(s.arg)
        elif s.tag == SUB:
            out.append(s.var)
            stack.append(s.body)
            stack.append(s.arg)
    return out


# ---------------------------------------------------------------------------
# structural reductions

def _binder_apart(sub, avoid):
    """Body and binder of ``sub``, the binder renamed away from ``avoid``."""
    b, y = sub.body, sub.var
    if y in avoid:
        y2 = fresh(y, avoid | free_vars(b))
        b = rename_var(b, y, y2)
        y = y2
    return b, y


def struct_red_appl(t):
    """One ``(t[x<-u]) s => (t s)[x<-u]`` step anywhere weak, x renamed apart from s."""
    out = []

    def go(s, rebuild):
        tag = s.tag
        if tag == APP:
            f = s.fun
            if f.tag == SUB:
                b, y = _binder_apart(f, free_vars(s.arg))
                out.append(rebuild(Sub(App(b, s.arg), y, f.arg)))
            go(s.fun, lambda n, s=s: rebuild(App(n, s.arg)))
            go(s.arg, lambda n, s=s: rebuild(App(s.fun, n)))
        elif tag == SUB:
            go(s.body, lambda n, s=s: rebuild(Sub(n, s.var, s.arg)))
            go(s.arg, lambda n, s=s: rebuild(Sub(s.body, s.var, n)))

    go(t, lambda n: n)
    return out


def struct_red_ans(t):
    """One ``a[x<-t[y<-u]] => a[x<-t][y<-u]`` step under an ES list, y renamed apart from a."""
    out = []

    def go(s, rebuild):
        if s.tag != SUB:
            return
        d = s.arg
        if d.tag == SUB and is_answer(s.body):
            b, y = _binder_apart(d, free_vars(s.body))
            out.append(rebuild(Sub(Sub(s.body, s.var, b), y, d.arg)))
        go(s.body, lambda n, s=s: rebuild(Sub(n, s.var, s.arg)))

    go(t, lambda n: n)
    return out


def struct_closure(t, depth=8, ans=True):
    """Terms reachable by at most ``depth`` appl steps followed by at most one ans step."""
    seen = {alpha_key(t): t}
    frontier = [t]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            for u in struct_red_appl(s):
                k = alpha_key(u)
                if k not in seen:
                    seen[k] = u
                    nxt.append(u)
        if not nxt:
            break
        frontier = nxt
    if ans:
        for s in list(seen.values()):
            for u in struct_red_ans(s):
                seen.setdefault(alpha_key(u), u)
    return seen


def struct_normalize(t, limit=100000):
    """Apply structural steps (leftmost first) until none applies."""
    for _ in range(limit):
        nxt = struct_red_appl(t) or struct_red_ans(t)
        if not nxt:
            return t
        t = nxt[0]
    raise MachineError("structural normalization did not stop")


# ---------------------------------------------------------------------------
# projection

@dataclass
class ProjectionReport:
    checked: int = 0
    violations: List[str] = field(default_factory=list)
    flags: List[str] = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def check_projection(r):
    """Check every transition of a recorded run against the calculus."""
    rep = ProjectionReport()
    for i, (q, label, q2) in enumerate(r.transitions):
        rep.checked += 1
        before, after = readback(q), readback(q2)
        where = "transition %d (%s)" % (i + 1, label)
        if label in ("sea", "sea1", "sea2"):
            if before != after:
                rep.violations.append("%s: read-back changed" % where)
            continue
        if r.flavor == "silly":
            st = cbs_decompose(before, erasing=False)
            want = {"m": "ym", "e": "yeAY"}[label]
            got_ok = st is not None and (want in st.classes)
        else:
            st = cbn_step(before)
            want = {"m": "nm", "e": "ne"}[label]
            got_ok = st is not None and st.label == want
        if not got_ok:
            rep.violations.append("%s: no %s step from %s" % (where, want, to_str(before)))
            continue
        if st.redex not in redexes_w(before):
            rep.violations.append("%s: strategy step is not a weak step" % where)
        if label == "m":
            reach = struct_closure(st.result, depth=len(q.stack) + 1, ans=(r.flavor == "silly"))
            if alpha_key(after) not in reach:
                rep.violations.append("%s: %s not structurally reachable from %s"
                                      % (where, to_str(after), to_str(st.result)))
        else:
            if alpha_key(after) != alpha_key(st.result):
                rep.violations.append("%s: read-back %s differs from %s"
                                      % (where, to_str(after), to_str(st.result)))
            if r.flavor == "silly" and "yeYN" in st.classes:
                rep.flags.append("%s: also a yeYN step" % where)
    return rep


# ---------------------------------------------------------------------------
# printing

def _fmt_panswer(pa):
    if not pa:
        return "ε"
    return "::".join("(%s,%s)" % (to_str(v), x) for v, x in pa)


def _fmt_stack(st):
    if not st:
        return "ε"
    return "::".join(_paren(s) for s in st)


def _fmt_env(env):
    if not env:
        return "ε"
    return "::".join("[%s<-%s]" % (x, to_str(s)) for x, s in env)


def _paren(s):
    return to_str(s) if s.tag == VAR else "(%s)" % to_str(s)


def format_table(r):
    """Trace table with columns ``PAnsw | Code | Stack | Env | label``."""
    rows = [("PAnsw", "Code", "Stack", "Env", "label")]
    labels = r.labels + ["final" if r.final else "..."]
    for q, label in zip(r.states, labels):
        rows.append((_fmt_panswer(q.panswer), to_str(q.code), _fmt_stack(q.stack),
                     _fmt_env(q.env), label))
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = []
    for row in rows:
        cells = [row[i].ljust(widths[i]) for i in range(4)] + [row[4]]
        lines.append(" | ".join(cells))
    return "\n".join(lines)
