"""Call-by-name and call-by-silly strategies."""

import pytest
from hypothesis import given, settings

import cbs_reference

from conftest import CBN_SHOWCASE, DELTA_II, OMEGA, terms
from ssclab.calculus import FuelExhausted, NormalForm, Redex, is_answer, is_strict_answer
from ssclab.harness import generate_closed_apps, generate_closed_terms
from ssclab.strategies import (
    PreconditionError, StepCounts, cbn_normalize, cbn_step, cbs_decompose, cbs_enabled,
    cbs_local_swap_gcv, cbs_normalize, cbs_postpone_gcv,
)
from ssclab.terms import Step, alpha_eq, parse


class TestCallByName:
    def test_first_step_is_beta(self):
        st = cbn_step(parse(CBN_SHOWCASE))
        assert st.label == "nm"
        assert st.result == parse(r"(\x. x (\w. x))[y <- %s] ((\z. z) (\z. z))" % OMEGA)

    def test_copy_in_head_position(self):
        st = cbn_step(parse(r"(x (\w. x))[x <- (\z. z) (\z. z)]"))
        assert st.label == "ne"
        assert alpha_eq(st.result, parse(r"((\z. z) (\z. z) (\w. x))[x <- (\z. z) (\z. z)]"))

    def test_normal(self):
        assert cbn_step(parse(r"\x. x")) is None

    def test_showcase_counts(self):
        res = cbn_normalize(parse(CBN_SHOWCASE))
        assert isinstance(res, NormalForm)
        assert res.counts == StepCounts(4, 3, 3)
        assert res.trace.names()[-3:] == ["ngc"] * 3
        assert alpha_eq(res.term, parse(r"(\w. x)[x <- (\z. z) (\z. z)]"))

    def test_duplication_counts(self):
        res = cbn_normalize(parse(DELTA_II))
        assert (res.counts.m, res.counts.e) == (4, 5)

    def test_value(self):
        res = cbn_normalize(parse(r"\x. x"))
        assert len(res.trace) == 0

    def test_gc_erases_non_values(self):
        res = cbn_normalize(parse(r"(\x. \y. y) (%s)" % OMEGA))
        assert isinstance(res, NormalForm) and res.counts == StepCounts(1, 0, 1)


class TestCallBySilly:
    def test_first_step(self):
        st = cbs_decompose(parse(DELTA_II))
        assert st.label == "ym"
        assert st.result == parse(r"(y y)[y <- (\z. z) (\z. z)]")

    def test_auxiliary_copy(self):
        t = parse(r"(\w. x)[x <- z[z <- \z. z]][y <- %s]" % OMEGA)
        st = cbs_decompose(t)
        assert st.label == "yeAY"
        assert alpha_eq(st.result, parse(r"(\w. x)[x <- (\z. z)[z <- \z. z]][y <- %s]" % OMEGA))

    def test_abstraction_is_normal(self):
        assert cbs_decompose(parse(r"\x. %s" % OMEGA)) is None

    def test_counts(self):
        res = cbs_normalize(parse(DELTA_II))
        assert (res.counts.m, res.counts.e) == (6, 8)
        assert alpha_eq(res.term, parse(r"\z. z"))

    def test_diverges_on_erased_omega(self):
        res = cbs_normalize(parse(CBN_SHOWCASE), fuel=10000)
        assert isinstance(res, FuelExhausted)

    def test_answer_collects(self):
        res = cbs_normalize(parse(r"(\y. y)[x <- \z. z]"))
        assert res.counts == StepCounts(0, 0, 1)
        assert res.term == parse(r"\y. y")

    def test_rejects_shallow_free(self):
        with pytest.raises(PreconditionError):
            cbs_decompose(parse("x"))
        with pytest.raises(PreconditionError):
            cbs_normalize(parse(r"(\y. y) z"))

    def test_free_under_abstraction_is_allowed(self):
        res = cbs_normalize(parse(r"(\y. y) (\w. x)"))
        assert isinstance(res, NormalForm)

    def test_name_copy_carries_both_classes(self):
        # the empty auxiliary context makes a name-selected copy also silly-selected
        res = cbs_normalize(parse(CBN_SHOWCASE), fuel=3)
        st = cbs_decompose(res.trace.steps[1].term)
        assert st.label == "yeAY" and st.classes == {"yeAY", "yeYN"}

    def test_strict_answer_on_halt(self):
        for t in generate_closed_terms(7):
            res = cbs_normalize(t, 500)
            if isinstance(res, NormalForm):
                assert is_strict_answer(res.term)
                non_erasing = cbs_normalize(t, 500)
                pre = non_erasing.trace.terms()[len(res.trace) - res.counts.gcv]
                assert is_answer(pre)

    @pytest.mark.parametrize("text", [DELTA_II, r"(\x. x x) (\y. y)",
                                      r"(\x. \y. x) ((\z. z) (\z. z))"])
    def test_policy_invariance(self, text):
        lazy = cbs_normalize(parse(text), gcv_policy="lazy")
        eager = cbs_normalize(parse(text), gcv_policy="eager")
        assert lazy.counts == eager.counts
        assert alpha_eq(lazy.term, eager.term)
        assert lazy.trace.names() != eager.trace.names() or text != DELTA_II

    def test_bad_policy(self):
        with pytest.raises(ValueError):
            cbs_normalize(parse(r"\x. x"), gcv_policy="sometimes")


class TestSillyPostponement:
    def _prefix(self):
        # the showcase term after its non-erasing prefix, then six eager steps
        t = parse(CBN_SHOWCASE)
        u = cbn_normalize(t).trace.terms()[7]
        return cbs_normalize(u, 6, "eager").trace

    def test_showcase_prefix(self):
        d = self._prefix()
        assert d.names() == ["ygcv", "ygcv", "ym", "yeAY", "ygcv", "ym"]
        p = cbs_postpone_gcv(d)
        assert p.names() == ["ym", "yeAY", "ym", "ygcv", "ygcv", "ygcv"]
        assert alpha_eq(p.end, d.end)

    def test_single_swap(self):
        t = parse(r"(\y. y)[x <- \z. z] (\w. w)")
        st1 = Redex("wgcv", (Step.APP_FUN,))
        got = cbs_local_swap_gcv(t, st1, Redex("wm"))
        assert got.names() == ["ym", "ygcv"]

    def test_no_collection_unchanged(self):
        d = cbs_normalize(parse(r"(\x. x x) (\y. y)"), gcv_policy="lazy").trace
        d2 = cbs_normalize(parse(r"\x. x")).trace
        assert cbs_postpone_gcv(d2) == d2
        assert cbs_postpone_gcv(d).names() == d.names()

    def test_eager_traces_become_lazy_shaped(self):
        for t in generate_closed_terms(7):
            d = cbs_normalize(t, 300, "eager").trace
            p = cbs_postpone_gcv(d)
            names = p.names()
            h = names.count("ygcv")
            assert h == d.names().count("ygcv")
            assert "ygcv" not in names[:len(names) - h]
            assert alpha_eq(p.end, d.end)


class TestEnabledOracle:
    """The one-pass enumeration against the per-ES rescan."""

    @settings(max_examples=500)
    @given(terms)
    def test_random_terms(self, t):
        assert cbs_enabled(t) == cbs_reference.enabled(t)

    def test_along_reachable_terms(self):
        seen = 0
        for t in generate_closed_apps(9):
            d = cbs_normalize(t, 60, "eager").trace
            for u in d.terms():
                assert cbs_enabled(u) == cbs_reference.enabled(u)
                seen += 1
        assert seen > 500
