"""Closed call-by-value lambda calculus, the reference evaluator.

Values are abstractions only.  ``(\\x.t) v -> t{x<-v}`` fires anywhere in a
CbV context ``V ::= <.> | t V | V t``, so it never enters an abstraction.
"""

from dataclasses import dataclass

from .terms import APP, LAM, SUB, Step, meta_substitute, replace_at, subterm_at

__all__ = ["Value", "CbvFuelExhausted", "cbv_redexes", "cbv_step", "cbv_eval"]


@dataclass(frozen=True)
class Value:
    term: object
    length: int


@dataclass(frozen=True)
class CbvFuelExhausted:
    term: object
    length: int


def _check_pure(t):
    stack = [t]
    while stack:
        s = stack.pop()
        if s.tag == SUB:
            raise ValueError("call-by-value terms have no explicit substitutions")
        if s.tag == LAM:
            stack.append(s.body)
        elif s.tag == APP:
            stack.append(s.fun)
            stack.append(s.arg)


def cbv_redexes(t):
    """Positions of every beta-value redex under a CbV context, leftmost first."""
    out = []
    stack = [((), t)]
    while stack:
        pos, s = stack.pop()
        if s.tag != APP:
            continue
        if s.fun.tag == LAM and s.arg.tag == LAM:
            out.append(pos)
        stack.append((pos + (Step.APP_ARG,), s.arg))
        stack.append((pos + (Step.APP_FUN,), s.fun))
    return out


def _contract(t, pos):
    r = subterm_at(t, pos)
    return replace_at(t, pos, meta_substitute(r.fun.body, r.fun.var, r.arg))


def cbv_step(t, policy="leftmost"):
    """One beta-value step, or None on values and stuck terms."""
    rs = cbv_redexes(t)
    if not rs:
        return None
    if policy == "leftmost":
        return _contract(t, rs[0])
    if policy == "rightmost":
        return _contract(t, rs[-1])
    raise ValueError("policy must be leftmost or rightmost")


def cbv_reducts(t):
    return [_contract(t, p) for p in cbv_redexes(t)]


def cbv_eval(t, fuel=10000, policy="leftmost"):
    _check_pure(t)
    n = 0
    while True:
        u = cbv_step(t, policy)
        if u is None:
            return Value(t, n)
        if n >= fuel:
            return CbvFuelExhausted(t, n)
        t = u
        n += 1
