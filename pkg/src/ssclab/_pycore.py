"""Term nodes and the traversal kernels that dominate run time.

This is the interpreted implementation.  ``_ccore.pyx`` is a compiled twin
with the same public names; :mod:`ssclab.core` picks one at import time.
Nodes are immutable by convention and cache their hash, size and variable
sets on first use.
"""

VAR = 0
LAM = 1
APP = 2
SUB = 3


class Term:
    __slots__ = ("_hash", "_fv", "_shfv", "_size")

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return term_equal(self, other)

    def __ne__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return not term_equal(self, other)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = _compute_hash(self)
        return h


class Var(Term):
    __slots__ = ("name",)
    tag = VAR

    def __init__(self, name):
        self.name = name
        self._hash = self._fv = self._shfv = self._size = None

    def __repr__(self):
        return "Var(%r)" % (self.name,)

    def __reduce__(self):
        return (Var, (self.name,))


class Lam(Term):
    __slots__ = ("var", "body")
    tag = LAM

    def __init__(self, var, body):
        self.var = var
        self.body = body
        self._hash = self._fv = self._shfv = self._size = None

    def __repr__(self):
        return "Lam(%r, %r)" % (self.var, self.body)

    def __reduce__(self):
        return (Lam, (self.var, self.body))


class App(Term):
    __slots__ = ("fun", "arg")
    tag = APP

    def __init__(self, fun, arg):
        self.fun = fun
        self.arg = arg
        self._hash = self._fv = self._shfv = self._size = None

    def __repr__(self):
        return "App(%r, %r)" % (self.fun, self.arg)

    def __reduce__(self):
        return (App, (self.fun, self.arg))


class Sub(Term):
    """Explicit substitution ``body[var <- arg]``."""

    __slots__ = ("body", "var", "arg")
    tag = SUB

    def __init__(self, body, var, arg):
        self.body = body
        self.var = var
        self.arg = arg
        self._hash = self._fv = self._shfv = self._size = None

    def __repr__(self):
        return "Sub(%r, %r, %r)" % (self.body, self.var, self.arg)

    def __reduce__(self):
        return (Sub, (self.body, self.var, self.arg))


def _children(t):
    tag = t.tag
    if tag == VAR:
        return ()
    if tag == LAM:
        return (t.body,)
    if tag == APP:
        return (t.fun, t.arg)
    return (t.body, t.arg)


def _pending(t, slot):
    # nodes whose cached slot is empty, children before parents
    order = []
    stack = [t]
    while stack:
        s = stack.pop()
        if getattr(s, slot) is not None:
            continue
        order.append(s)
        for c in _children(s):
            if getattr(c, slot) is None:
                stack.append(c)
    order.reverse()
    return order


def _compute_hash(t):
    for s in _pending(t, "_hash"):
        tag = s.tag
        if tag == VAR:
            h = hash((VAR, s.name))
        elif tag == LAM:
            h = hash((LAM, s.var, s.body._hash))
        elif tag == APP:
            h = hash((APP, s.fun._hash, s.arg._hash))
        else:
            h = hash((SUB, s.var, s.body._hash, s.arg._hash))
        s._hash = h
    return t._hash


def term_equal(a, b):
    """Syntactic equality, names included."""
    stack = [(a, b)]
    while stack:
        s, t = stack.pop()
        if s is t:
            continue
        tag = s.tag
        if tag != t.tag or hash(s) != hash(t):
            return False
        if tag == VAR:
            if s.name != t.name:
                return False
        elif tag == LAM:
            if s.var != t.var:
                return False
            stack.append((s.body, t.body))
        elif tag == APP:
            stack.append((s.fun, t.fun))
            stack.append((s.arg, t.arg))
        else:
            if s.var != t.var:
                return False
            stack.append((s.body, t.body))
            stack.append((s.arg, t.arg))
    return True


def free_vars(t):
    """Free variables; both abstractions and explicit substitutions bind."""
    fv = t._fv
    if fv is not None:
        return fv
    for s in _pending(t, "_fv"):
        tag = s.tag
        if tag == VAR:
            fv = frozenset((s.name,))
        elif tag == LAM:
            fv = s.body._fv
            if s.var in fv:
                fv = fv - {s.var}
        elif tag == APP:
            fv = s.fun._fv | s.arg._fv
        else:
            fv = s.body._fv
            if s.var in fv:
                fv = fv - {s.var}
            fv = fv | s.arg._fv
        s._fv = fv
    return t._fv


_EMPTY = frozenset()


def shallow_free_vars(t):
    """Free variables with an occurrence outside every abstraction."""
    sv = t._shfv
    if sv is not None:
        return sv
    for s in _pending(t, "_shfv"):
        tag = s.tag
        if tag == VAR:
            sv = frozenset((s.name,))
        elif tag == LAM:
            sv = _EMPTY
        elif tag == APP:
            sv = s.fun._shfv | s.arg._shfv
        else:
            sv = s.body._shfv
            if s.var in sv:
                sv = sv - {s.var}
            sv = sv | s.arg._shfv
        s._shfv = sv
    return t._shfv


def term_size(t):
    """Number of constructors."""
    n = t._size
    if n is not None:
        return n
    for s in _pending(t, "_size"):
        tag = s.tag
        if tag == VAR:
            n = 1
        elif tag == LAM:
            n = 1 + s.body._size
        elif tag == APP:
            n = 1 + s.fun._size + s.arg._size
        else:
            n = 1 + s.body._size + s.arg._size
        s._size = n
    return t._size


def alpha_key(t):
    """Canonical hashable key: binders numbered in traversal order.

    Bound occurrences become the number of their binder, free ones keep
    their name, so two terms get the same key iff they are alpha-equivalent.
    Constructors are encoded by negative integers, which no name or binder
    number can collide with.
    """
    out = []
    env = {}
    count = 0
    # markers are lists [is_bind, name, slot]; a bind marker stores the
    # shadowed binding in its slot, the matching unbind marker points to it
    stack = [t]
    while stack:
        s = stack.pop()
        if s.__class__ is list:
            if s[0]:
                s[2] = env.get(s[1])
                env[s[1]] = count
                count += 1
            else:
                prev = s[2][2]
                if prev is None:
                    del env[s[1]]
                else:
                    env[s[1]] = prev
            continue
        tag = s.tag
        if tag == VAR:
            b = env.get(s.name)
            out.append(s.name if b is None else b)
        elif tag == APP:
            out.append(-2)
            stack.append(s.arg)
            stack.append(s.fun)
        else:
            m = [True, s.var, None]
            stack.append([False, s.var, m])
            stack.append(s.body)
            stack.append(m)
            if tag == LAM:
                out.append(-1)
            else:
                # definiens first: it lies outside the scope of the binder
                out.append(-3)
                stack.append(s.arg)
    return tuple(out)
