"""Silly multi types.

Linear types ``L ::= n | M -> L``, multi types ``M`` are finite multisets of
linear types.  Typing rules (judgments ``G |-(m,e) t : T``)::

    ax     x:[L] |-(0,1) x : L
    many   (G_i |-(m_i,e_i) t : L_i)_i  gives  sum G_i |-(sum m_i, sum e_i) t : [L_i]_i
    ax_lam |-(0,0) \\x.t : n
    app    G |- t : M -> L  and  D |- u : M + [n]        gives  G+D |-(m+m'+1, e+e') t u : L
    lam    G |- t : L                                    gives  G\\x |- \\x.t : G(x) -> L
    es     G |- t : L  and  D |- u : G(x) + [n]          gives  G\\x + D |- t[x<-u] : L

The extra ``[n]`` on arguments and substitutions is what makes the system
silly: every argument is typed once more than it is used.
"""

import json
from dataclasses import dataclass
from typing import Tuple

from .calculus import apply, classify_normal, is_answer
from .strategies import cbs_normalize
from .terms import (
    APP, LAM, SUB, VAR, App, Lam, Step, Sub, Var,
    alpha_eq, free_vars, parse, rename_well_bound, shallow_free_vars,
    subterm_at, to_str,
)

__all__ = [
    "N", "Arrow", "MultiType", "Ctx", "Judgment", "Derivation",
    "TypingError", "Check", "mset", "ax", "ax_lam", "many", "app", "lam", "es",
    "check_derivation", "indices", "is_tight", "size", "type_normal_form",
    "subject_reduce", "subject_expand", "infer_tight", "realign",
    "format_derivation", "derivation_to_json", "derivation_from_json",
    "type_str",
]


class TypingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# types

class _Normal:
    __slots__ = ()

    def __repr__(self):
        return "N"

    def __reduce__(self):
        return (_normal, ())


def _normal():
    return N


N = _Normal()


@dataclass(frozen=True)
class Arrow:
    source: "MultiType"
    target: object


def type_key(t):
    """Total structural order on linear and multi types."""
    if t is N:
        return (0,)
    if isinstance(t, Arrow):
        return (1, type_key(t.source), type_key(t.target))
    return (2,) + tuple(type_key(i) for i in t.items)


@dataclass(frozen=True)
class MultiType:
    """A multiset, stored as a tuple sorted by :func:`type_key`."""

    items: Tuple = ()

    def __add__(self, other):
        return mset(self.items + other.items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def remove(self, lt):
        items = list(self.items)
        items.remove(lt)
        return MultiType(tuple(items))


def mset(items=()):
    return MultiType(tuple(sorted(items, key=type_key)))


EMPTY = MultiType()
NN = mset([N])


def type_str(t):
    if t is N:
        return "n"
    if isinstance(t, Arrow):
        return "%s -> %s" % (type_str(t.source), type_str(t.target))
    return "[%s]" % ", ".join(type_str(i) for i in t.items)


class Ctx:
    """Type context: a finite map from names to non-empty multi types."""

    __slots__ = ("_map",)

    def __init__(self, mapping=None):
        self._map = {k: v for k, v in (mapping or {}).items() if len(v)}

    def __call__(self, x):
        return self._map.get(x, EMPTY)

    def __add__(self, other):
        out = dict(self._map)
        for k, v in other._map.items():
            out[k] = out[k] + v if k in out else v
        return Ctx(out)

    def without(self, x):
        out = dict(self._map)
        out.pop(x, None)
        return Ctx(out)

    def rename(self, ren):
        return Ctx({ren.get(k, k): v for k, v in self._map.items()})

    def domain(self):
        return frozenset(self._map)

    def items(self):
        return sorted(self._map.items())

    def __eq__(self, other):
        return isinstance(other, Ctx) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        return "Ctx(%r)" % (self._map,)

    def __str__(self):
        return ", ".join("%s:%s" % (k, type_str(v)) for k, v in self.items())


@dataclass(frozen=True)
class Judgment:
    ctx: Ctx
    m: int
    e: int
    subject: object
    type: object


@dataclass(frozen=True)
class Derivation:
    rule: str
    premises: Tuple["Derivation", ...]
    conclusion: Judgment

    @property
    def subject(self):
        return self.conclusion.subject

    @property
    def type(self):
        return self.conclusion.type

    @property
    def ctx(self):
        return self.conclusion.ctx


# ---------------------------------------------------------------------------
# rule constructors (conclusion computed from premises, not checked)

def ax(name, lt):
    return Derivation("ax", (), Judgment(Ctx({name: mset([lt])}), 0, 1, Var(name), lt))


def ax_lam(t):
    return Derivation("ax_lam", (), Judgment(Ctx(), 0, 0, t, N))


def many(premises, subject=None):
    premises = tuple(premises)
    if subject is None:
        subject = premises[0].subject
    ctx = Ctx()
    m = e = 0
    for p in premises:
        ctx = ctx + p.ctx
        m += p.conclusion.m
        e += p.conclusion.e
    return Derivation("many", premises,
                      Judgment(ctx, m, e, subject, mset(p.type for p in premises)))


def app(dfun, dargs):
    t = dfun.type
    c1, c2 = dfun.conclusion, dargs.conclusion
    return Derivation("app", (dfun, dargs), Judgment(
        c1.ctx + c2.ctx, c1.m + c2.m + 1, c1.e + c2.e,
        App(dfun.subject, dargs.subject), t.target))


def lam(var, dbody):
    c = dbody.conclusion
    return Derivation("lam", (dbody,), Judgment(
        c.ctx.without(var), c.m, c.e, Lam(var, dbody.subject), Arrow(c.ctx(var), c.type)))


def es(dbody, var, ddef):
    c1, c2 = dbody.conclusion, ddef.conclusion
    return Derivation("es", (dbody, ddef), Judgment(
        c1.ctx.without(var) + c2.ctx, c1.m + c2.m, c1.e + c2.e,
        Sub(dbody.subject, var, ddef.subject), c1.type))


# ---------------------------------------------------------------------------
# checking

class Check:
    def __init__(self, diagnostics):
        self.diagnostics = diagnostics

    @property
    def ok(self):
        return not self.diagnostics

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "Check(ok=%s, %r)" % (self.ok, self.diagnostics)


def _is_linear(t):
    return t is N or isinstance(t, Arrow)


def check_derivation(d):
    """Validate every node against its rule; diagnostics name the node path."""
    diags = []
    _check(d, "root", diags)
    return Check(diags)


def _check(d, path, diags):
    def bad(msg):
        diags.append("%s [%s]: %s" % (path, d.rule, msg))

    j = d.conclusion
    t = j.subject
    ps = d.premises
    if j.m < 0 or j.e < 0:
        bad("negative index")
    rule = d.rule
    if rule == "ax":
        if ps:
            bad("ax has no premises")
        if t.tag != VAR:
            bad("subject is not a variable")
        elif not _is_linear(j.type):
            bad("type is not linear")
        elif j.ctx != Ctx({t.name: mset([j.type])}):
            bad("context must be exactly %s:[%s]" % (t.name, type_str(j.type)))
        if (j.m, j.e) != (0, 1):
            bad("indices must be (0,1)")
        return
    if rule == "ax_lam":
        if ps:
            bad("ax_lam has no premises")
        if t.tag != LAM:
            bad("subject is not an abstraction")
        if j.type is not N:
            bad("type must be n")
        if j.ctx != Ctx():
            bad("context must be empty")
        if (j.m, j.e) != (0, 0):
            bad("indices must be (0,0)")
        return
    for i, p in enumerate(ps):
        _check(p, "%s.%d" % (path, i), diags)
    if rule == "many":
        if not isinstance(j.type, MultiType):
            bad("type must be a multi type")
            return
        for p in ps:
            if p.rule == "many":
                bad("premise of many must end with a linear type")
            if p.subject != t:
                bad("premise subject %s differs" % to_str(p.subject))
        if j.type != mset(p.type for p in ps):
            bad("multi type is not the multiset of premise types")
        _sums(j, ps, 0, bad)
        return
    if rule == "app":
        if t.tag != APP or len(ps) != 2:
            bad("expects an application and two premises")
            return
        p1, p2 = ps
        if p1.subject != t.fun or p2.subject != t.arg:
            bad("premise subjects do not match the application")
        if not isinstance(p1.type, Arrow):
            bad("left premise needs an arrow type")
            return
        if p2.rule != "many":
            bad("right premise must be a many rule")
        if p2.type != p1.type.source + NN:
            bad("right premise typed %s, needs %s + [n]"
                % (type_str(p2.type), type_str(p1.type.source)))
        if j.type != p1.type.target:
            bad("type must be the arrow target")
        _sums(j, ps, 1, bad)
        return
    if rule == "lam":
        if t.tag != LAM or len(ps) != 1:
            bad("expects an abstraction and one premise")
            return
        (p,) = ps
        if p.subject != t.body:
            bad("premise subject does not match the body")
        if not _is_linear(p.type):
            bad("body type is not linear")
        if j.type != Arrow(p.ctx(t.var), p.type):
            bad("type must be %s -> %s" % (type_str(p.ctx(t.var)), type_str(p.type)))
        if j.ctx != p.ctx.without(t.var):
            bad("context must drop %s" % t.var)
        if (j.m, j.e) != (p.conclusion.m, p.conclusion.e):
            bad("indices must be unchanged")
        return
    if rule == "es":
        if t.tag != SUB or len(ps) != 2:
            bad("expects an explicit substitution and two premises")
            return
        p1, p2 = ps
        if p1.subject != t.body or p2.subject != t.arg:
            bad("premise subjects do not match the substitution")
        if not _is_linear(p1.type):
            bad("body type is not linear")
        if p2.rule != "many":
            bad("right premise must be a many rule")
        if p2.type != p1.ctx(t.var) + NN:
            bad("right premise typed %s, needs %s + [n]"
                % (type_str(p2.type), type_str(p1.ctx(t.var))))
        if j.type != p1.type:
            bad("type must be the body type")
        if j.ctx != p1.ctx.without(t.var) + p2.ctx:
            bad("context must be body context without %s plus definiens context" % t.var)
        if (j.m, j.e) != (p1.conclusion.m + p2.conclusion.m, p1.conclusion.e + p2.conclusion.e):
            bad("indices must add up")
        return
    bad("unknown rule")


def _sums(j, ps, extra_m, bad):
    ctx = Ctx()
    for p in ps:
        ctx = ctx + p.ctx
    if j.ctx != ctx:
        bad("context must be the sum of premise contexts")
    m = sum(p.conclusion.m for p in ps) + extra_m
    e = sum(p.conclusion.e for p in ps)
    if (j.m, j.e) != (m, e):
        bad("indices (%d,%d) should be (%d,%d)" % (j.m, j.e, m, e))


def _count(d, rule):
    return (d.rule == rule) + sum(_count(p, rule) for p in d.premises)


def indices(d):
    """``(#app, #ax)``; raises if the conclusion disagrees."""
    m, e = _count(d, "app"), _count(d, "ax")
    if (m, e) != (d.conclusion.m, d.conclusion.e):
        raise TypingError("index mismatch: conclusion (%d,%d), counted (%d,%d)"
                          % (d.conclusion.m, d.conclusion.e, m, e))
    return m, e


def is_tight(d):
    return d.type is N or d.type == NN


def size(d):
    """Number of rules other than many."""
    return (d.rule != "many") + sum(size(p) for p in d.premises)


# ---------------------------------------------------------------------------
# normal forms

def type_normal_form(t, want=None):
    """Derivation of a weak normal form; answers get ``n``, inert terms ``want``.

    Answers with garbage, such as ``(\\y. y)[x <- \\w. w]``, are accepted
    too: they are normal for the non-erasing rules.
    """
    kind = classify_normal(t)
    if kind is None and is_answer(t):
        kind = "answer"
    if kind is None:
        raise TypingError("not a weak normal form: %s" % to_str(t))
    if kind == "answer" and want not in (None, N):
        raise TypingError("answers are typed n only")
    return _tnf(t, N if want is None else want)


def _tnf(t, want):
    tag = t.tag
    if tag == LAM:
        return ax_lam(t)
    if tag == VAR:
        return ax(t.name, want)
    if tag == APP:
        left = _tnf(t.fun, Arrow(EMPTY, want))
        return app(left, many([_tnf(t.arg, N)]))
    body = _tnf(t.body, want)
    return es(body, t.var, many([_tnf(t.arg, N)]))


# ---------------------------------------------------------------------------
# alpha-realignment

def realign(d, target, ren=None):
    """Carry ``d`` over to an alpha-equivalent subject, renaming contexts."""
    ren = ren or {}
    j = d.conclusion
    rule = d.rule
    if rule == "many":
        prem = tuple(realign(p, target, ren) for p in d.premises)
    elif rule in ("ax", "ax_lam"):
        prem = ()
    elif rule == "app":
        prem = (realign(d.premises[0], target.fun, ren),
                realign(d.premises[1], target.arg, ren))
    elif rule == "lam":
        inner = dict(ren)
        inner[j.subject.var] = target.var
        prem = (realign(d.premises[0], target.body, inner),)
    elif rule == "es":
        inner = dict(ren)
        inner[j.subject.var] = target.var
        prem = (realign(d.premises[0], target.body, inner),
                realign(d.premises[1], target.arg, ren))
    else:
        raise TypingError("unknown rule %r" % rule)
    return Derivation(rule, prem, Judgment(j.ctx.rename(ren), j.m, j.e, target, j.type))


# ---------------------------------------------------------------------------
# subject reduction and expansion

def _map_at(d, path, fn):
    """Apply ``fn`` to every sub-derivation typing the subterm at ``path``."""
    if d.rule == "many":
        if not d.premises:
            # cannot happen at weak positions: arguments always carry [n]
            raise TypingError("empty multi type at a weak position")
        return many([_map_at(p, path, fn) for p in d.premises])
    if not path:
        return fn(d)
    step, rest = path[0], path[1:]
    if step == Step.APP_FUN:
        return app(_map_at(d.premises[0], rest, fn), d.premises[1])
    if step == Step.APP_ARG:
        return app(d.premises[0], _map_at(d.premises[1], rest, fn))
    if step == Step.SUB_BODY:
        return es(_map_at(d.premises[0], rest, fn), d.subject.var, d.premises[1])
    if step == Step.SUB_DEF:
        return es(d.premises[0], d.subject.var, _map_at(d.premises[1], rest, fn))
    raise TypingError("weak positions never enter abstractions")


def _reduce_m(d):
    dfun, dargs = d.premises

    def go(x):
        if x.rule == "lam":
            return es(x.premises[0], x.subject.var, dargs)
        if x.rule != "es":
            raise TypingError("multiplicative redex not typed by an abstraction")
        return es(go(x.premises[0]), x.subject.var, x.premises[1])

    return go(dfun)


def _reduce_e(d, occ):
    dbody, ddef = d.premises
    x = d.subject.var
    pool = list(ddef.premises)

    def take(lt):
        for i, p in enumerate(pool):
            if p.type == lt:
                return pool.pop(i)
        raise TypingError("no definiens derivation of type %s" % type_str(lt))

    def at_occ(a):
        if a.rule != "ax" or a.subject.name != x:
            raise TypingError("occurrence is not typed by an axiom on %s" % x)
        return take(a.type)

    new_body = _map_at(dbody, occ, at_occ)
    return es(new_body, x, many(pool, d.subject.arg))


def _reduce_gcv(d):
    dbody, ddef = d.premises
    if len(ddef.premises) != 1:
        raise TypingError("erased substitution must be typed [n]")

    def go(x):
        if x.rule == "ax_lam":
            return dbody
        if x.rule != "es":
            raise TypingError("erased value not typed n")
        return es(go(x.premises[0]), x.subject.var, x.premises[1])

    return go(ddef.premises[0])


def _transform_reduce(d, r):
    if r.rule == "wm":
        return _map_at(d, r.hole, _reduce_m)
    if r.rule == "we":
        return _map_at(d, r.hole, lambda x: _reduce_e(x, r.occ))
    if r.rule == "wgcv":
        return _map_at(d, r.hole, _reduce_gcv)
    raise TypingError("rule %s is not a silly weak rule" % r.rule)


def subject_reduce(t, r, d):
    """Derivation of ``apply(t, r)`` from a derivation ``d`` of ``t``.

    The term is first renamed apart so that the contraction needs no
    renaming; the result is then carried back to the actual reduct.
    """
    if not alpha_eq(d.subject, t):
        raise TypingError("derivation does not type the given term")
    t_wb = rename_well_bound(t)
    d_wb = realign(d, t_wb)
    new = _transform_reduce(d_wb, r)
    u = apply(t, r)
    if not alpha_eq(new.subject, u):
        raise TypingError("reduced derivation does not type the reduct")
    return realign(new, u)


def _expand_m(d, redex):
    # redex = S<\x.b> u ; d types S<b[x<-u]>
    k = 0
    f = redex.fun
    while f.tag == SUB:
        k += 1
        f = f.body

    def go(x, i):
        if i == k:
            dbody, dargs = x.premises
            return lam(x.subject.var, dbody), dargs
        inner, dargs = go(x.premises[0], i + 1)
        return es(inner, x.subject.var, x.premises[1]), dargs

    dfun, dargs = go(d, 0)
    return app(dfun, dargs)


def _expand_e(d, redex, occ):
    dbody, ddef = d.premises
    x = redex.var
    moved = []

    def at_occ(a):
        moved.append(a)
        return ax(x, a.type)

    new_body = _map_at(dbody, occ, at_occ)
    return es(new_body, x, many(list(ddef.premises) + moved, redex.arg))


def _expand_gcv(d, redex):
    # redex = b[x<-S<v>] ; d types S<b>
    entries = []
    s = redex.arg
    while s.tag == SUB:
        entries.append(s)
        s = s.body
    v = s

    def go(y, i):
        if i == len(entries):
            return ax_lam(v), y
        inner, dbody = go(y.premises[0], i + 1)
        return es(inner, y.subject.var, y.premises[1]), dbody

    dval, dbody = go(d, 0)
    return es(dbody, redex.var, many([dval]))


def subject_expand(t, r, d, validate=True):
    """Derivation of ``t`` from a derivation ``d`` of ``apply(t, r)``.

    With ``validate`` the result is re-checked rule by rule.
    """
    t_wb = rename_well_bound(t)
    u_wb = apply(t_wb, r)
    if not alpha_eq(u_wb, d.subject):
        raise TypingError("derivation does not type the reduct of the given step")
    d_wb = realign(d, u_wb)
    redex = subterm_at(t_wb, r.hole)
    if r.rule == "wm":
        new = _map_at(d_wb, r.hole, lambda x: _expand_m(x, redex))
    elif r.rule == "we":
        new = _map_at(d_wb, r.hole, lambda x: _expand_e(x, redex, r.occ))
    elif r.rule == "wgcv":
        new = _map_at(d_wb, r.hole, lambda x: _expand_gcv(x, redex))
    else:
        raise TypingError("rule %s is not a silly weak rule" % r.rule)
    if new.subject != t_wb:
        raise TypingError("expanded derivation does not type the source")
    out = realign(new, t)
    if validate:
        chk = check_derivation(out)
        if not chk:
            raise TypingError("expansion produced an invalid derivation: %s" % chk.diagnostics[0])
    return out


def infer_tight(t, fuel=10000, gcv_policy="lazy"):
    """Tight derivation of a closed term by normalize-then-expand, or None."""
    res = cbs_normalize(t, fuel, gcv_policy)
    if not hasattr(res, "term"):
        return None
    d = type_normal_form(res.term)
    terms = res.trace.terms()
    for i in range(len(res.trace.steps) - 1, -1, -1):
        d = subject_expand(terms[i], res.trace.steps[i].redex, d)
    return d


# ---------------------------------------------------------------------------
# output

_RULE_NAMES = {"ax": "ax", "many": "many", "ax_lam": "ax_λ", "app": "@", "lam": "λ", "es": "ES"}


def judgment_str(j):
    ctx = str(j.ctx)
    return "%s%s⊢(%d,%d) %s : %s" % (ctx, " " if ctx else "", j.m, j.e,
                                    to_str(j.subject), type_str(j.type))


def format_derivation(d, indent="  "):
    """Indented rule tree, conclusion first, one judgment per line."""
    lines = []

    def go(x, depth):
        lines.append("%s%s  [%s]" % (indent * depth, judgment_str(x.conclusion),
                                     _RULE_NAMES[x.rule]))
        for p in x.premises:
            go(p, depth + 1)

    go(d, 0)
    return "\n".join(lines)


def _type_json(t):
    if t is N:
        return "n"
    if isinstance(t, Arrow):
        return {"arrow": [_type_json(t.source), _type_json(t.target)]}
    return [_type_json(i) for i in t.items]


def _type_from_json(obj):
    if obj == "n":
        return N
    if isinstance(obj, dict) and "arrow" in obj:
        src, tgt = obj["arrow"]
        return Arrow(_type_from_json(src), _type_from_json(tgt))
    if isinstance(obj, list):
        return mset(_type_from_json(i) for i in obj)
    raise TypingError("bad type %r" % (obj,))


def derivation_to_json(d):
    j = d.conclusion
    return {
        "rule": d.rule,
        "conclusion": {
            "ctx": {k: _type_json(v) for k, v in j.ctx.items()},
            "m": j.m,
            "e": j.e,
            "subject": to_str(j.subject),
            "type": _type_json(j.type),
        },
        "premises": [derivation_to_json(p) for p in d.premises],
    }


def derivation_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    c = obj["conclusion"]
    ctx = Ctx({k: _type_from_json(v) for k, v in c["ctx"].items()})
    j = Judgment(ctx, int(c["m"]), int(c["e"]), parse(c["subject"]), _type_from_json(c["type"]))
    return Derivation(obj["rule"], tuple(derivation_from_json(p) for p in obj["premises"]), j)
