#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support/gen.hpp"
#include "spl/syntax.hpp"

using namespace spl;

TEST_CASE("atoms and connectives parse with the documented precedence") {
    SequentInput in = parse_implication("p & q | r");
    REQUIRE(in.gamma.empty());
    CHECK(in.goal->op() == Op::Or);
    CHECK(in.goal->lhs()->op() == Op::And);
    CHECK(in.goal->rhs()->name() == "r");

    in = parse_implication("p | q & r");
    CHECK(in.goal->op() == Op::Or);
    CHECK(in.goal->rhs()->op() == Op::And);

    /* Both connectives associate to the left. */
    in = parse_implication("p | q | r");
    CHECK(in.goal->lhs()->op() == Op::Or);
    in = parse_implication("p & q & r");
    CHECK(in.goal->lhs()->op() == Op::And);
}

TEST_CASE("modalities take bracketed standpoint names") {
    SequentInput in = parse_implication("[s]p & <t'>~q | <*>p");
    const FormulaPtr& f = in.goal;
    CHECK(f->op() == Op::Or);
    CHECK(f->lhs()->lhs()->op() == Op::Box);
    CHECK(f->lhs()->lhs()->name() == "s");
    CHECK(f->lhs()->rhs()->op() == Op::Diamond);
    CHECK(f->lhs()->rhs()->name() == "t'");
    CHECK(f->lhs()->rhs()->lhs()->op() == Op::NegAtom);
    CHECK(f->rhs()->name() == kUniversal);
}

TEST_CASE("antecedents parse as sharpening lists") {
    SequentInput in = parse_implication("s <= t, t <= u |- [u]p");
    REQUIRE(in.gamma.size() == 2);
    CHECK(in.gamma[0] == Sharpening{"s", "t"});
    CHECK(in.gamma[1] == Sharpening{"t", "u"});
    CHECK(in.goal->op() == Op::Box);

    in = parse_implication("|- p");
    CHECK(in.gamma.empty());

    /* Duplicate statements collapse, first occurrence wins the order. */
    in = parse_implication("s <= t, s <= t, t <= s |- p");
    REQUIRE(in.gamma.size() == 2);
    CHECK(in.gamma[0] == Sharpening{"s", "t"});
    CHECK(in.gamma[1] == Sharpening{"t", "s"});
}

TEST_CASE("vocabulary lists gamma standpoints first and keeps '*' last") {
    SequentInput in = parse_implication("t <= u |- [s]p & <*>q");
    const Vocabulary& v = in.vocab;
    CHECK(v.propositions == std::vector<std::string>{"p", "q"});
    CHECK(v.standpoints == std::vector<std::string>{"t", "u", "s", kUniversal});
    CHECK(v.has_standpoint("u"));
    CHECK(!v.has_standpoint("v"));
    CHECK(v.has_proposition("q"));
}

TEST_CASE("parse errors carry positions and reject the reserved star") {
    CHECK_THROWS_AS(parse_implication(""), ParseError);
    CHECK_THROWS_AS(parse_implication("p |"), ParseError);
    CHECK_THROWS_AS(parse_implication("p & & q"), ParseError);
    CHECK_THROWS_AS(parse_implication("(p"), ParseError);
    CHECK_THROWS_AS(parse_implication("[s"), ParseError);
    CHECK_THROWS_AS(parse_implication("~(p & q)"), ParseError);
    CHECK_THROWS_AS(parse_implication("~~p"), ParseError);
    CHECK_THROWS_AS(parse_implication("*"), ParseError);
    CHECK_THROWS_AS(parse_implication("p & *"), ParseError);
    CHECK_THROWS_AS(parse_implication("s <= |- p"), ParseError);
    CHECK_THROWS_AS(parse_implication("p |- q"), ParseError);
    CHECK_THROWS_AS(parse_implication("_bot"), ParseError);
    CHECK_THROWS_AS(parse_implication("p q"), ParseError);

    try {
        parse_implication("p &\n& q");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("rendering inverts parsing") {
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
        spltest::GenOptions o;
        o.max_size = 11;
        o.max_named = 3;
        o.max_props = 3;
        SequentInput in = spltest::random_input(rng, o);
        std::string text = render_input(in);
        SequentInput back = parse_implication(text);
        CHECK(equal(back.goal, in.goal));
        CHECK(back.gamma == in.gamma);
        CHECK(render_input(back) == text);
    }
}

TEST_CASE("rendering drops only redundant parentheses") {
    CHECK(render_formula(parse_implication("(p & q) | r").goal) == "p & q | r");
    CHECK(render_formula(parse_implication("p & (q | r)").goal) == "p & (q | r)");
    CHECK(render_formula(parse_implication("p | (q | r)").goal) == "p | (q | r)");
    CHECK(render_formula(parse_implication("[s](p | q)").goal) == "[s](p | q)");
    CHECK(render_formula(parse_implication("<*>~p & [s']q").goal) == "<*>~p & [s']q");
}

TEST_CASE("negation is an involution on formulas in negation normal form") {
    std::mt19937 rng(11);
    std::vector<std::string> props{"p", "q"};
    std::vector<std::string> sps{"s", "t", kUniversal};
    for (int i = 0; i < 200; ++i) {
        FormulaPtr f = spltest::random_formula_sized(rng, 1 + i % 13, props, sps);
        CHECK(equal(negate_nnf(negate_nnf(f)), f));
        if (!f->is_literal()) CHECK(!equal(negate_nnf(f), f));
    }
    FormulaPtr g = parse_implication("[s](p | ~q)").goal;
    CHECK(render_formula(negate_nnf(g)) == "<s>(~p & q)");
}

TEST_CASE("formula size counts distinct subformulae") {
    CHECK(formula_size(parse_implication("p").goal) == 1);
    CHECK(formula_size(parse_implication("p | ~p").goal) == 3);
    CHECK(formula_size(parse_implication("p | p").goal) == 2);
    CHECK(formula_size(parse_implication("[s]p & <s>p").goal) == 4);
    /* Shared subtrees are counted once. */
    CHECK(formula_size(parse_implication("(p & q) | (p & q)").goal) == 4);
    CHECK(subformulae(parse_implication("<*>(p & q)").goal).size() == 4);
}

TEST_CASE("falsum and verum use a spelling no input can produce") {
    CHECK(falsum()->op() == Op::And);
    CHECK(verum()->op() == Op::Or);
    CHECK(falsum()->lhs()->name() == reserved_false_atom());
    CHECK_THROWS_AS(parse_implication(reserved_false_atom()), ParseError);
}

TEST_CASE("normalization collapses sharpening cycles to one representative") {
    SequentInput in = normalize_input(parse_implication("s1 <= s2, s2 <= s1 |- [s1]p | [s2]q"));
    CHECK(in.gamma.empty());
    /* Both cycle members are rewritten to the lexicographically greatest. */
    CHECK(render_formula(in.goal) == "[s2]p | [s2]q");
    CHECK(in.vocab.standpoints == std::vector<std::string>{"s2", kUniversal});
}

TEST_CASE("normalization removes statements the closure makes redundant") {
    SequentInput in = normalize_input(parse_implication("s <= s, t <= *, s <= t |- [s]p"));
    REQUIRE(in.gamma.size() == 1);
    CHECK(in.gamma[0] == Sharpening{"s", "t"});

    /* '* <= s' forces s to cover every precisification, so s becomes '*'. */
    in = normalize_input(parse_implication("* <= s |- [s]p & <s>q"));
    CHECK(in.gamma.empty());
    CHECK(render_formula(in.goal) == "[*]p & <*>q");

    /* A cycle through '*' pulls every member up to '*'. */
    in = normalize_input(parse_implication("s <= t, t <= *, * <= s |- <t>p"));
    CHECK(in.gamma.empty());
    CHECK(render_formula(in.goal) == "<*>p");
}

TEST_CASE("normalization is idempotent on random inputs") {
    std::mt19937 rng(23);
    for (int i = 0; i < 300; ++i) {
        spltest::GenOptions o;
        o.max_named = 3;
        o.max_gamma = 4;
        SequentInput in = spltest::random_input(rng, o);  /* already normalized */
        SequentInput twice = normalize_input(in);
        CHECK(twice.gamma == in.gamma);
        CHECK(equal(twice.goal, in.goal));
        CHECK(twice.vocab.standpoints == in.vocab.standpoints);
        for (const Sharpening& st : in.gamma) {
            CHECK(st.sharper != st.broader);
            CHECK(st.broader != kUniversal);
            CHECK(st.sharper != kUniversal);
        }
    }
}

TEST_CASE("structural equality ignores pointer identity") {
    FormulaPtr a = parse_implication("[s](p & ~q) | <*>p").goal;
    FormulaPtr b = parse_implication("[s](p & ~q) | <*>p").goal;
    CHECK(a != b);
    CHECK(equal(a, b));
    CHECK(a->hash() == b->hash());
    FormulaPtr c = parse_implication("[s](p & ~q) | <*>q").goal;
    CHECK(!equal(a, c));
}
