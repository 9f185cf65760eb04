"""Named terms with explicit substitutions.

Grammar accepted by :func:`parse`::

    term ::= abs | app
    abs  ::= ("\\" | "λ") name "." term
    app  ::= atom {atom}
    atom ::= name | "(" term ")" | atom "[" name "<-" term "]"

Names match ``[a-zA-Z][a-zA-Z0-9'_]*``.  Names produced by the fresh-name
supply carry a ``#<n>`` suffix, which the parser also accepts so that
printed terms read back.
"""

import contextlib
import contextvars
import itertools
import re
from enum import IntEnum

from .core import (
    APP, LAM, SUB, VAR, App, Lam, Sub, Term, Var,
    alpha_key, free_vars, shallow_free_vars, term_size,
)

__all__ = [
    "Term", "Var", "Lam", "App", "Sub", "VAR", "LAM", "APP", "SUB",
    "Step", "ParseError", "NameSupply",
    "parse", "to_str", "free_vars", "shallow_free_vars", "term_size",
    "alpha_key", "alpha_eq", "meta_substitute", "rename_var",
    "rename_well_bound", "is_well_bound", "fresh", "fresh_scope",
    "subterm_at", "replace_at", "format_position", "parse_position",
    "all_names", "is_value", "peel_subs", "wrap_subs", "is_pure",
]


# ---------------------------------------------------------------------------
# positions

class Step(IntEnum):
    ABS_BODY = 0
    APP_FUN = 1
    APP_ARG = 2
    SUB_BODY = 3
    SUB_DEF = 4

    def __str__(self):
        return _STEP_NAMES[self]


_STEP_NAMES = {
    Step.ABS_BODY: "AbsBody",
    Step.APP_FUN: "AppFun",
    Step.APP_ARG: "AppArg",
    Step.SUB_BODY: "SubBody",
    Step.SUB_DEF: "SubDef",
}
_STEP_BY_NAME = {v: k for k, v in _STEP_NAMES.items()}


def format_position(pos):
    """``root`` for the empty position, else dot separated step names."""
    if not pos:
        return "root"
    return ".".join(_STEP_NAMES[s] for s in pos)


def parse_position(text):
    if text == "root":
        return ()
    try:
        return tuple(_STEP_BY_NAME[p] for p in text.split("."))
    except KeyError as exc:
        raise ValueError("bad position step %s" % exc) from None


def _child(t, step):
    tag = t.tag
    if step == Step.ABS_BODY and tag == LAM:
        return t.body
    if step == Step.APP_FUN and tag == APP:
        return t.fun
    if step == Step.APP_ARG and tag == APP:
        return t.arg
    if step == Step.SUB_BODY and tag == SUB:
        return t.body
    if step == Step.SUB_DEF and tag == SUB:
        return t.arg
    raise ValueError("position step %s does not fit %s" % (step, to_str(t)))


def subterm_at(t, pos):
    for step in pos:
        t = _child(t, step)
    return t


def replace_at(t, pos, new):
    """Rebuild ``t`` with the subterm at ``pos`` replaced by ``new``."""
    spine = []
    for step in pos:
        spine.append(t)
        t = _child(t, step)
    for node, step in zip(reversed(spine), reversed(pos)):
        if step == Step.ABS_BODY:
            new = Lam(node.var, new)
        elif step == Step.APP_FUN:
            new = App(new, node.arg)
        elif step == Step.APP_ARG:
            new = App(node.fun, new)
        elif step == Step.SUB_BODY:
            new = Sub(new, node.var, node.arg)
        else:
            new = Sub(node.body, node.var, new)
    return new


# ---------------------------------------------------------------------------
# fresh names

_SUFFIX = re.compile(r"#\d+$")


class NameSupply:
    """Monotone counter producing ``base#n`` names.

    ``itertools.count`` advances atomically under the interpreter lock, so a
    single supply may be shared between threads.
    """

    def __init__(self, start=1):
        self._counter = itertools.count(start)

    def fresh(self, base, avoid=()):
        base = _SUFFIX.sub("", base)
        while True:
            name = "%s#%d" % (base, next(self._counter))
            if name not in avoid:
                return name


_GLOBAL_SUPPLY = NameSupply()
_supply = contextvars.ContextVar("ssclab_name_supply", default=_GLOBAL_SUPPLY)


def fresh(base, avoid=()):
    return _supply.get().fresh(base, avoid)


@contextlib.contextmanager
def fresh_scope(start=1):
    """Use a private supply inside the block, so names are reproducible."""
    token = _supply.set(NameSupply(start))
    try:
        yield
    finally:
        _supply.reset(token)


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, message, line, column):
        super().__init__("%s at line %d, column %d" % (message, line, column))
        self.line = line
        self.column = column


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<name>[a-zA-Z][a-zA-Z0-9'_]*(?:\#\d+)?)
  | (?P<arrow><-)
  | (?P<lam>[\\λ])
  | (?P<punct>[.()\[\]])
""", re.VERBOSE)


def _tokenize(text):
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError("unexpected character %r" % text[pos], line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rindex("\n") + 1
        else:
            value = m.group()
            if kind == "punct":
                kind = value
            toks.append((kind, value, line, pos - line_start + 1))
        pos = m.end()
    toks.append(("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError("expected %s, found %s" % (kind, what), tok[2], tok[3])
        self.i += 1
        return tok[1]

    def term(self):
        if self.peek() == "lam":
            self.take("lam")
            name = self.take("name")
            self.take(".")
            return Lam(name, self.term())
        t = self.atom()
        while self.peek() in ("name", "("):
            t = App(t, self.atom())
        return t

    def atom(self):
        if self.peek() == "name":
            t = Var(self.take("name"))
        elif self.peek() == "(":
            self.take("(")
            t = self.term()
            self.take(")")
        else:
            tok = self.toks[self.i]
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError("expected a term, found %s" % what, tok[2], tok[3])
        while self.peek() == "[":
            self.take("[")
            name = self.take("name")
            self.take("arrow")
            t = Sub(t, name, self.term())
            self.take("]")
        return t


def parse(text):
    p = _Parser(text)
    t = p.term()
    p.take("eof")
    return t


# ---------------------------------------------------------------------------
# printing

def to_str(t, lam="\\"):
    """Print with minimal parentheses; the result parses back to ``t``."""
    out = []
    _emit(t, out, lam)
    return "".join(out)


def _emit(t, out, lam):
    tag = t.tag
    if tag == VAR:
        out.append(t.name)
    elif tag == LAM:
        out.append("%s%s. " % (lam, t.var))
        _emit(t.body, out, lam)
    elif tag == APP:
        f = t.fun
        if f.tag == LAM:
            out.append("(")
            _emit(f, out, lam)
            out.append(")")
        else:
            _emit(f, out, lam)
        out.append(" ")
        _emit_atom(t.arg, out, lam)
    else:
        _emit_atom(t.body, out, lam)
        out.append("[%s <- " % t.var)
        _emit(t.arg, out, lam)
        out.append("]")


def _emit_atom(t, out, lam):
    if t.tag in (APP, LAM):
        out.append("(")
        _emit(t, out, lam)
        out.append(")")
    else:
        _emit(t, out, lam)


# ---------------------------------------------------------------------------
# substitution and alpha

def meta_substitute(t, x, u):
    """Capture-avoiding ``t{x<-u}``."""
    if x not in free_vars(t):
        return t
    return _subst(t, x, u, free_vars(u))


def _subst(t, x, u, fvu):
    if x not in free_vars(t):
        return t
    tag = t.tag
    if tag == VAR:
        return u
    if tag == APP:
        return App(_subst(t.fun, x, u, fvu), _subst(t.arg, x, u, fvu))
    if tag == LAM:
        y, body = _avoid_capture(t.var, t.body, x, fvu)
        return Lam(y, _subst(body, x, u, fvu))
    arg = _subst(t.arg, x, u, fvu)
    if t.var == x:
        return Sub(t.body, x, arg)
    y, body = _avoid_capture(t.var, t.body, x, fvu)
    return Sub(_subst(body, x, u, fvu), y, arg)


def _avoid_capture(y, body, x, fvu):
    # x is known free in the whole node; only the body may need renaming
    if y == x or y not in fvu or x not in free_vars(body):
        return y, body
    y2 = fresh(y, fvu | free_vars(body) | {x})
    return y2, _subst(body, y, Var(y2), frozenset((y2,)))


def rename_var(t, old, new):
    """Rename the free occurrences of ``old`` to ``new``."""
    return meta_substitute(t, old, Var(new))


def alpha_eq(t, u):
    return alpha_key(t) == alpha_key(u)


def all_names(t):
    """Every name occurring in ``t``, free, bound or binding."""
    names = set()
    stack = [t]
    while stack:
        s = stack.pop()
        tag = s.tag
        if tag == VAR:
            names.add(s.name)
        elif tag == LAM:
            names.add(s.var)
            stack.append(s.body)
        elif tag == APP:
            stack.append(s.fun)
            stack.append(s.arg)
        else:
            names.add(s.var)
            stack.append(s.body)
            stack.append(s.arg)
    return names


def _binders(t):
    out = []
    stack = [t]
    while stack:
        s = stack.pop()
        tag = s.tag
        if tag == LAM:
            out.append(s.var)
            stack.append(s.body)
        elif tag == APP:
            stack.append(s.fun)
            stack.append(s.arg)
        elif tag == SUB:
            out.append(s.var)
            stack.append(s.body)
            stack.append(s.arg)
    return out


def is_well_bound(t):
    binders = _binders(t)
    return len(set(binders)) == len(binders) and not set(binders) & free_vars(t)


def rename_well_bound(t, avoid=frozenset()):
    """Alpha-equivalent copy whose binders are pairwise distinct and fresh.

    Every binder is renamed, so the result also avoids ``avoid``.
    """
    taken = set(avoid) | free_vars(t)

    def go(s, env):
        tag = s.tag
        if tag == VAR:
            name = env.get(s.name)
            return s if name is None else Var(name)
        if tag == APP:
            return App(go(s.fun, env), go(s.arg, env))
        new = fresh(s.var, taken)
        taken.add(new)
        inner = dict(env)
        inner[s.var] = new
        if tag == LAM:
            return Lam(new, go(s.body, inner))
        return Sub(go(s.body, inner), new, go(s.arg, env))

    return go(t, {})


# ---------------------------------------------------------------------------
# small shape helpers

def is_value(t):
    return t.tag == LAM


def peel_subs(t):
    """Split ``S<s>`` into the outermost-first ES list of ``S`` and ``s``."""
    entries = []
    while t.tag == SUB:
        entries.append((t.var, t.arg))
        t = t.body
    return entries, t


def wrap_subs(entries, t):
    """Inverse of :func:`peel_subs`."""
    for var, arg in reversed(entries):
        t = Sub(t, var, arg)
    return t


def is_pure(t):
    """No explicit substitutions."""
    stack = [t]
    while stack:
        s = stack.pop()
        tag = s.tag
        if tag == SUB:
            return False
        if tag == LAM:
            stack.append(s.body)
        elif tag == APP:
            stack.append(s.fun)
            stack.append(s.arg)
    return True
