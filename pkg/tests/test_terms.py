"""Term syntax: parsing, printing, variables, substitution, alpha."""

import pytest
from hypothesis import given, settings

from conftest import pure_terms, terms
from ssclab.terms import (
    App, Lam, ParseError, Step, Sub, Var, all_names, alpha_eq, alpha_key,
    format_position, free_vars, fresh_scope, is_well_bound, meta_substitute,
    parse, parse_position, rename_well_bound, replace_at, shallow_free_vars,
    subterm_at, term_size, to_str,
)

I = Lam("z", Var("z"))


class TestParse:
    def test_identity(self):
        assert parse(r"\x. x") == Lam("x", Var("x"))

    def test_application_of_abstraction(self):
        t = parse(r"(\x. x x) ((\z. z) (\z. z))")
        assert t == App(Lam("x", App(Var("x"), Var("x"))), App(I, I))

    def test_explicit_substitution(self):
        t = parse(r"(x x)[x <- \z. z]")
        assert t == Sub(App(Var("x"), Var("x")), "x", I)

    def test_lambda_glyph(self):
        assert parse("λx. x") == parse(r"\x. x")

    def test_application_left_associates(self):
        assert parse("a b c") == App(App(Var("a"), Var("b")), Var("c"))

    def test_body_extends_right(self):
        assert parse(r"\x. x y") == Lam("x", App(Var("x"), Var("y")))

    def test_substitution_postfix_chains(self):
        t = parse("x[x <- y][y <- z]")
        assert t == Sub(Sub(Var("x"), "x", Var("y")), "y", Var("z"))

    @pytest.mark.parametrize("text,line,col", [
        ("(x", 1, 3),
        ("(\\x. x\n  y", 2, 4),
        ("\\. x", 1, 2),
        ("x [x <- ]", 1, 9),
    ])
    def test_error_position(self, text, line, col):
        with pytest.raises(ParseError) as ei:
            parse(text)
        assert (ei.value.line, ei.value.column) == (line, col)

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse("   ")


class TestPrint:
    @pytest.mark.parametrize("text", [
        r"\x. x",
        r"(\x. x) (\y. y)",
        r"(x x)[x <- \z. z]",
        r"(\y. y)[x <- \w. w][z <- \w. w]",
        r"x (y z)",
        r"(\x. x) (x x)[x <- y]",
        r"x[x <- y[y <- z]]",
    ])
    def test_round_trip_exact(self, text):
        assert to_str(parse(text)) == text

    def test_unicode_lambda(self):
        assert to_str(parse(r"\x. x"), lam="λ") == "λx. x"

    @settings(max_examples=300)
    @given(terms)
    def test_parse_print_identity(self, t):
        assert parse(to_str(t)) == t


class TestVariables:
    def test_fv_examples(self):
        assert free_vars(parse(r"\x. x")) == frozenset()
        assert free_vars(parse("(x y)[x <- z]")) == {"y", "z"}
        assert free_vars(parse(r"(\y. x)[x <- z]")) == {"z"}

    def test_shfv_examples(self):
        assert shallow_free_vars(parse("x")) == {"x"}
        assert shallow_free_vars(parse(r"\y. x")) == frozenset()
        assert shallow_free_vars(parse(r"(\y. x)[x <- z]")) == {"z"}

    def test_es_binds_only_in_body(self):
        assert free_vars(parse("y[x <- x]")) == {"x", "y"}

    @given(terms)
    def test_shallow_inside_free(self, t):
        assert shallow_free_vars(t) <= free_vars(t)

    def test_size(self):
        assert term_size(parse(r"(\x. x x) y")) == 6
        assert term_size(parse("x[x <- y]")) == 3


class TestSubstitution:
    def test_duplicates(self):
        got = meta_substitute(parse("x x"), "x", I)
        assert got == App(I, I)

    def test_avoids_capture(self):
        got = meta_substitute(parse(r"\y. x"), "x", Var("y"))
        assert isinstance(got, Lam)
        assert got.var != "y" and got.body == Var("y")
        assert alpha_eq(got, parse(r"\q. y"))

    def test_no_occurrence(self):
        t = parse("y")
        assert meta_substitute(t, "x", I) == t

    def test_es_binder_capture(self):
        got = meta_substitute(parse("x[y <- w]"), "x", Var("y"))
        assert alpha_eq(got, parse("y[q <- w]"))

    def test_shadowing_stops(self):
        t = parse(r"\x. x")
        assert meta_substitute(t, "x", Var("y")) == t

    @settings(max_examples=200)
    @given(terms, pure_terms)
    def test_commutes_with_alpha(self, t, u):
        t2 = rename_well_bound(t)
        assert alpha_eq(meta_substitute(t, "x", u), meta_substitute(t2, "x", u))


class TestAlpha:
    def test_examples(self):
        assert alpha_eq(parse(r"\x. x"), parse(r"\y. y"))
        assert alpha_eq(parse(r"\x. \y. x"), parse(r"\y. \x. y"))
        assert not alpha_eq(parse(r"\x. \y. x"), parse(r"\x. \y. y"))

    def test_free_names_matter(self):
        assert not alpha_eq(parse("x"), parse("y"))
        assert not alpha_eq(parse(r"\x. y"), parse(r"\x. z"))

    def test_es_binder(self):
        assert alpha_eq(parse("x[x <- y]"), parse("z[z <- y]"))
        assert not alpha_eq(parse("x[x <- x]"), parse("z[z <- z]"))

    def test_abstraction_is_not_substitution(self):
        assert not alpha_eq(parse(r"\x. x"), parse("x[x <- y]"))

    @given(terms, terms, terms)
    def test_equivalence_relation(self, a, b, c):
        assert alpha_eq(a, a)
        assert alpha_eq(a, b) == alpha_eq(b, a)
        if alpha_eq(a, b) and alpha_eq(b, c):
            assert alpha_eq(a, c)

    @given(terms)
    def test_key_agrees_with_renaming(self, t):
        assert alpha_key(rename_well_bound(t)) == alpha_key(t)


class TestRenameWellBound:
    def test_avoid_set(self):
        t = rename_well_bound(parse(r"\x. x"), {"x"})
        assert t.var != "x" and t.body == Var(t.var)

    def test_distinct_binders(self):
        t = rename_well_bound(parse(r"(\x. x) (\x. x)"))
        assert t.fun.var != t.arg.var
        assert alpha_eq(t, parse(r"(\x. x) (\x. x)"))

    def test_shared_occurrences(self):
        t = rename_well_bound(parse(r"\z. z z"), {"z"})
        assert t.var != "z" and t.body == App(Var(t.var), Var(t.var))

    def test_names_come_from_the_supply(self):
        with fresh_scope():
            t = rename_well_bound(parse(r"\x. x"))
        assert to_str(t) == r"\x#1. x#1"

    @settings(max_examples=300)
    @given(terms)
    def test_contract(self, t):
        avoid = {"x", "y"}
        r = rename_well_bound(t, avoid)
        assert alpha_eq(r, t)
        assert is_well_bound(r)
        bound = all_names(r) - free_vars(r)
        assert not bound & avoid


class TestPositions:
    def test_format_and_parse(self):
        pos = (Step.SUB_BODY, Step.APP_FUN)
        assert format_position(pos) == "SubBody.AppFun"
        assert parse_position("SubBody.AppFun") == pos
        assert format_position(()) == "root"
        assert parse_position("root") == ()

    def test_replace_and_get(self):
        t = parse("(x y)[x <- z]")
        pos = (Step.SUB_BODY, Step.APP_ARG)
        assert subterm_at(t, pos) == Var("y")
        assert replace_at(t, pos, Var("w")) == parse("(x w)[x <- z]")

    def test_bad_position(self):
        with pytest.raises(ValueError):
            subterm_at(parse("x"), (Step.APP_FUN,))
