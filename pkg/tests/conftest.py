import sys

import pytest
from hypothesis import strategies as st

from ssclab.terms import App, Lam, Sub, Var, fresh_scope, parse

NAMES = ["x", "y", "z", "w"]


@pytest.fixture(autouse=True)
def _fresh_names():
    # traces print fresh names, keep them stable per test
    with fresh_scope():
        yield


def _extend(children):
    names = st.sampled_from(NAMES)
    return st.one_of(
        st.builds(Lam, names, children),
        st.builds(App, children, children),
        st.builds(Sub, children, names, children),
    )


def _extend_pure(children):
    names = st.sampled_from(NAMES)
    return st.one_of(st.builds(Lam, names, children), st.builds(App, children, children))


terms = st.recursive(st.builds(Var, st.sampled_from(NAMES)), _extend, max_leaves=8)
pure_terms = st.recursive(st.builds(Var, st.sampled_from(NAMES)), _extend_pure, max_leaves=8)


@pytest.fixture
def P():
    return parse


# recurring terms, written in the surface syntax
I = r"\z. z"
DELTA_II = r"(\y. y y) ((\z. z) (\z. z))"
OMEGA = r"(\z. z z) (\z. z z)"
CBN_SHOWCASE = r"(\y. \x. x (\w. x)) ((\z. z z) (\z. z z)) ((\z. z) (\z. z))"
SILLY_TABLE = r"(\x. \y. y) ((\z. z) (\w. w))"


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.RESULTS[n])
