# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pycore``: term nodes and traversal kernels.

Same public names and results as the interpreted core.  Traversals are
iterative so deep terms cannot overflow the C stack.
"""

VAR = 0
LAM = 1
APP = 2
SUB = 3

cdef int C_VAR = 0
cdef int C_LAM = 1
cdef int C_APP = 2
cdef int C_SUB = 3

cdef object _EMPTY = frozenset()


cdef class Term:
    cdef readonly int tag
    cdef object _hash
    cdef object _fv
    cdef object _shfv
    cdef Py_ssize_t _size

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return _equal(self, <Term>other)

    def __ne__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return not _equal(self, <Term>other)

    def __hash__(self):
        if self._hash is None:
            _compute_hash(self)
        return self._hash


cdef class Var(Term):
    cdef readonly object name

    def __init__(self, name):
        self.tag = C_VAR
        self.name = name
        self._size = -1

    def __repr__(self):
        return "Var(%r)" % (self.name,)

    def __reduce__(self):
        return (Var, (self.name,))


cdef class Lam(Term):
    cdef readonly object var
    cdef readonly Term body

    def __init__(self, var, Term body):
        self.tag = C_LAM
        self.var = var
        self.body = body
        self._size = -1

    def __repr__(self):
        return "Lam(%r, %r)" % (self.var, self.body)

    def __reduce__(self):
        return (Lam, (self.var, self.body))


cdef class App(Term):
    cdef readonly Term fun
    cdef readonly Term arg

    def __init__(self, Term fun, Term arg):
        self.tag = C_APP
        self.fun = fun
        self.arg = arg
        self._size = -1

    def __repr__(self):
        return "App(%r, %r)" % (self.fun, self.arg)

    def __reduce__(self):
        return (App, (self.fun, self.arg))


cdef class Sub(Term):
    """Explicit substitution ``body[var <- arg]``."""

    cdef readonly Term body
    cdef readonly object var
    cdef readonly Term arg

    def __init__(self, Term body, var, Term arg):
        self.tag = C_SUB
        self.body = body
        self.var = var
        self.arg = arg
        self._size = -1

    def __repr__(self):
        return "Sub(%r, %r, %r)" % (self.body, self.var, self.arg)

    def __reduce__(self):
        return (Sub, (self.body, self.var, self.arg))


# children accessors without Python attribute lookups

cdef inline Term _c0(Term t):
    if t.tag == C_LAM:
        return (<Lam>t).body
    if t.tag == C_APP:
        return (<App>t).fun
    return (<Sub>t).body


cdef inline Term _c1(Term t):
    if t.tag == C_APP:
        return (<App>t).arg
    return (<Sub>t).arg


cdef inline int _arity(Term t):
    if t.tag == C_VAR:
        return 0
    if t.tag == C_LAM:
        return 1
    return 2


cdef list _post_order(Term t, int which):
    # uncached nodes, children before parents; which: 0 hash, 1 fv, 2 shfv, 3 size
    cdef list order = []
    cdef list stack = [t]
    cdef Term s, c
    cdef int n, i
    while stack:
        s = <Term>stack.pop()
        if _cached(s, which):
            continue
        order.append(s)
        n = _arity(s)
        for i in range(n):
            c = _c0(s) if i == 0 else _c1(s)
            if not _cached(c, which):
                stack.append(c)
    order.reverse()
    return order


cdef inline bint _cached(Term s, int which):
    if which == 0:
        return s._hash is not None
    if which == 1:
        return s._fv is not None
    if which == 2:
        return s._shfv is not None
    return s._size >= 0


cdef object _compute_hash(Term t):
    cdef Term s
    for s in _post_order(t, 0):
        if s.tag == C_VAR:
            s._hash = hash((VAR, (<Var>s).name))
        elif s.tag == C_LAM:
            s._hash = hash((LAM, (<Lam>s).var, (<Lam>s).body._hash))
        elif s.tag == C_APP:
            s._hash = hash((APP, (<App>s).fun._hash, (<App>s).arg._hash))
        else:
            s._hash = hash((SUB, (<Sub>s).var, (<Sub>s).body._hash, (<Sub>s).arg._hash))
    return t._hash


cdef bint _equal(Term a, Term b):
    cdef list stack = [(a, b)]
    cdef Term s, u
    while stack:
        s, u = stack.pop()
        if s is u:
            continue
        if s.tag != u.tag or hash(s) != hash(u):
            return False
        if s.tag == C_VAR:
            if (<Var>s).name != (<Var>u).name:
                return False
        elif s.tag == C_LAM:
            if (<Lam>s).var != (<Lam>u).var:
                return False
            stack.append(((<Lam>s).body, (<Lam>u).body))
        elif s.tag == C_APP:
            stack.append(((<App>s).fun, (<App>u).fun))
            stack.append(((<App>s).arg, (<App>u).arg))
        else:
            if (<Sub>s).var != (<Sub>u).var:
                return False
            stack.append(((<Sub>s).body, (<Sub>u).body))
            stack.append(((<Sub>s).arg, (<Sub>u).arg))
    return True


def term_equal(Term a, Term b):
    """Syntactic equality, names included."""
    return _equal(a, b)


def free_vars(Term t):
    """Free variables; both abstractions and explicit substitutions bind."""
    cdef Term s
    cdef object fv
    if t._fv is not None:
        return t._fv
    for s in _post_order(t, 1):
        if s.tag == C_VAR:
            fv = frozenset(((<Var>s).name,))
        elif s.tag == C_LAM:
            fv = (<Lam>s).body._fv
            if (<Lam>s).var in fv:
                fv = fv - {(<Lam>s).var}
        elif s.tag == C_APP:
            fv = (<App>s).fun._fv | (<App>s).arg._fv
        else:
            fv = (<Sub>s).body._fv
            if (<Sub>s).var in fv:
                fv = fv - {(<Sub>s).var}
            fv = fv | (<Sub>s).arg._fv
        s._fv = fv
    return t._fv


def shallow_free_vars(Term t):
    """Free variables with an occurrence outside every abstraction."""
    cdef Term s
    cdef object sv
    if t._shfv is not None:
        return t._shfv
    for s in _post_order(t, 2):
        if s.tag == C_VAR:
            sv = frozenset(((<Var>s).name,))
        elif s.tag == C_LAM:
            sv = _EMPTY
        elif s.tag == C_APP:
            sv = (<App>s).fun._shfv | (<App>s).arg._shfv
        else:
            sv = (<Sub>s).body._shfv
            if (<Sub>s).var in sv:
                sv = sv - {(<Sub>s).var}
            sv = sv | (<Sub>s).arg._shfv
        s._shfv = sv
    return t._shfv


def term_size(Term t):
    """Number of constructors."""
    cdef Term s
    if t._size >= 0:
        return t._size
    for s in _post_order(t, 3):
        if s.tag == C_VAR:
            s._size = 1
        elif s.tag == C_LAM:
            s._size = 1 + (<Lam>s).body._size
        elif s.tag == C_APP:
            s._size = 1 + (<App>s).fun._size + (<App>s).arg._size
        else:
            s._size = 1 + (<Sub>s).body._size + (<Sub>s).arg._size
    return t._size


cdef class _Marker:
    cdef bint bind
    cdef object name
    cdef object prev
    cdef _Marker partner


def alpha_key(Term t):
    """Canonical hashable key: binders numbered in traversal order.

    Bound occurrences become the number of their binder, free ones keep
    their name; constructors are negative integers.
    """
    cdef list out = []
    cdef dict env = {}
    cdef long count = 0
    cdef list stack = [t]
    cdef object item, b
    cdef Term s
    cdef _Marker m, u
    while stack:
        item = stack.pop()
        if type(item) is _Marker:
            m = <_Marker>item
            if m.bind:
                m.prev = env.get(m.name)
                env[m.name] = count
                count += 1
            else:
                if m.partner.prev is None:
                    del env[m.name]
                else:
                    env[m.name] = m.partner.prev
            continue
        s = <Term>item
        if s.tag == C_VAR:
            b = env.get((<Var>s).name)
            out.append((<Var>s).name if b is None else b)
        elif s.tag == C_APP:
            out.append(-2)
            stack.append((<App>s).arg)
            stack.append((<App>s).fun)
        else:
            m = _Marker()
            m.bind = True
            u = _Marker()
            u.bind = False
            u.partner = m
            if s.tag == C_LAM:
                m.name = u.name = (<Lam>s).var
                stack.append(u)
                stack.append((<Lam>s).body)
                stack.append(m)
                out.append(-1)
            else:
                m.name = u.name = (<Sub>s).var
                stack.append(u)
                stack.append((<Sub>s).body)
                stack.append(m)
                out.append(-3)
                stack.append((<Sub>s).arg)
    return tuple(out)
