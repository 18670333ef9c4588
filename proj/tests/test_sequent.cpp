#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spl/coloring.hpp"
#include "spl/sequent.hpp"

using namespace spl;

namespace {

SharpeningClosure closure_of(const std::string& text) {
    SequentInput in = parse_implication(text);
    return SharpeningClosure(in.gamma, in.vocab);
}

}  // namespace

TEST_CASE("the closure is reflexive, transitive and bounded by '*'") {
    SharpeningClosure c = closure_of("s <= t, t <= u |- [s]p");
    CHECK(c.holds("s", "s"));
    CHECK(c.holds("s", "t"));
    CHECK(c.holds("t", "u"));
    CHECK(c.holds("s", "u"));
    CHECK(!c.holds("u", "s"));
    CHECK(!c.holds("t", "s"));
    CHECK(c.holds("s", kUniversal));
    CHECK(c.holds("u", kUniversal));
    CHECK(c.holds(kUniversal, kUniversal));
    CHECK(!c.holds(kUniversal, "s"));
    CHECK(c.standpoints().back() == kUniversal);
}

TEST_CASE("holds() stays total on names outside the vocabulary") {
    SharpeningClosure c = closure_of("|- p");
    CHECK(c.holds("ghost", "ghost"));
    CHECK(c.holds("ghost", kUniversal));
    CHECK(!c.holds("ghost", "other"));
}

TEST_CASE("closure pairs enumerate exactly the derivable statements") {
    SharpeningClosure c = closure_of("s <= t |- [s]p");
    const auto& pairs = c.pairs();
    auto has = [&](const std::string& a, const std::string& b) {
        for (const auto& pr : pairs) {
            if (pr.first == a && pr.second == b) return true;
        }
        return false;
    };
    CHECK(has("s", "t"));
    CHECK(has("s", "s"));
    CHECK(has("s", kUniversal));
    CHECK(has(kUniversal, kUniversal));
    CHECK(!has("t", "s"));
    CHECK(!has(kUniversal, "s"));
}

TEST_CASE("gamma names outside the vocabulary are rejected") {
    SequentInput in = parse_implication("|- [s]p");
    std::vector<Sharpening> gamma{{"v", "s"}};
    CHECK_THROWS_AS(SharpeningClosure(gamma, in.vocab), InputError);
}

TEST_CASE("sequents render with annotations and parse back exactly") {
    const std::string text = "s <= s' |- <s><*>~p | [s']p, <s><*>~p, (s')[p, <*>~p]@pi1";
    PlainSequent seq = parse_sequent(text);
    REQUIRE(seq.gamma.size() == 1);
    CHECK(seq.root.size() == 2);
    REQUIRE(seq.nestings.size() == 1);
    CHECK(seq.nestings[0].standpoint == "s'");
    CHECK(seq.nestings[0].label == 1);
    CHECK(seq.nestings[0].formulas.size() == 2);
    CHECK(seq.next_label == 2);
    CHECK(render_sequent(seq) == text);
    CHECK(equal_sequents(parse_sequent(render_sequent(seq)), seq));
}

TEST_CASE("empty components render and parse") {
    PlainSequent seq = parse_sequent("|- p, (s)[]@pi3, (*)[q]@pi7");
    CHECK(seq.root.size() == 1);
    REQUIRE(seq.nestings.size() == 2);
    CHECK(seq.nestings[0].formulas.empty());
    CHECK(seq.nestings[1].standpoint == kUniversal);
    CHECK(seq.next_label == 8);
    CHECK(render_sequent(seq) == "|- p, (s)[]@pi3, (*)[q]@pi7");

    PlainSequent root_empty = parse_sequent("|- (s)[p]@pi1");
    CHECK(root_empty.root.empty());
    CHECK(root_empty.nestings.size() == 1);
    CHECK(render_sequent(root_empty) == "|- (s)[p]@pi1");
}

TEST_CASE("malformed sequent text is rejected") {
    CHECK_THROWS_AS(parse_sequent("p, q"), ParseError);              /* no turnstile */
    CHECK_THROWS_AS(parse_sequent("|- (s)[p]"), ParseError);         /* missing label */
    CHECK_THROWS_AS(parse_sequent("|- (s)[p]@pi0"), ParseError);     /* root label is taken */
    CHECK_THROWS_AS(parse_sequent("|- (s)[p]@w1"), ParseError);
    CHECK_THROWS_AS(parse_sequent("|- (s)[p]@pi1, q"), ParseError);  /* root formula after nesting */
    CHECK_THROWS_AS(parse_sequent("|- (*)[p"), ParseError);
    CHECK_THROWS_AS(parse_sequent("s <= |- p"), ParseError);
}

TEST_CASE("sequent equality is structural and order sensitive") {
    PlainSequent a = parse_sequent("|- p, q, (s)[p]@pi1");
    PlainSequent b = parse_sequent("|- p, q, (s)[p]@pi1");
    PlainSequent c = parse_sequent("|- q, p, (s)[p]@pi1");
    PlainSequent d = parse_sequent("|- p, q, (s)[p]@pi2");
    PlainSequent e = parse_sequent("|- p, q, (t)[p]@pi1");
    CHECK(equal_sequents(a, b));
    CHECK(!equal_sequents(a, c));
    CHECK(!equal_sequents(a, d));
    CHECK(!equal_sequents(a, e));
}

TEST_CASE("multiset membership is structural") {
    PlainSequent seq = parse_sequent("|- p & q, p");
    CHECK(contains(seq.root, parse_implication("p & q").goal));
    CHECK(contains(seq.root, parse_implication("p").goal));
    CHECK(!contains(seq.root, parse_implication("q").goal));
}

TEST_CASE("initial sequents hold exactly the colored goal") {
    SequentInput in = parse_implication("s <= t |- [s]p & <t>q");
    std::vector<ColoredPtr> colorings = proper_colorings(in.goal);
    REQUIRE(!colorings.empty());
    ColoredSequent seq = initial_sequent(in, colorings[0]);
    CHECK(seq.gamma == in.gamma);
    REQUIRE(seq.root.size() == 1);
    CHECK(seq.nestings.empty());
    CHECK(seq.next_label == 1);
    CHECK(equal(erase(seq.root[0]), in.goal));

    PlainSequent plain = erase_sequent(seq);
    CHECK(equal_sequents(plain, parse_sequent("s <= t |- [s]p & <t>q")));

    /* A coloring of a different formula is rejected. */
    SequentInput other = parse_implication("s <= t |- [s]p & <t>p");
    CHECK_THROWS_AS(initial_sequent(other, colorings[0]), InternalError);
}

TEST_CASE("fresh labels never go backwards") {
    SequentInput in = parse_implication("|- [s]p");
    ColoredSequent seq = initial_sequent(in, proper_colorings(in.goal)[0]);
    CHECK(fresh_label(seq) == 1);
    seq.nestings.push_back({"s", 1, {}});
    seq.next_label = 2;
    CHECK(fresh_label(seq) == 2);
    /* Removing a nesting must not free its label. */
    seq.nestings.clear();
    CHECK(fresh_label(seq) == 2);
}

TEST_CASE("colored rendering can expose the marks") {
    SequentInput in = parse_implication("|- p & q");
    std::vector<ColoredPtr> cs = proper_colorings(in.goal);
    REQUIRE(cs.size() == 2);
    ColoredSequent seq = initial_sequent(in, cs[0]);
    std::string plain = render_sequent(seq);
    std::string marked = render_sequent(seq, true);
    CHECK(plain == "|- p & q");
    CHECK(marked.find('^') != std::string::npos);
    CHECK(marked != plain);
}

TEST_CASE("render_label formats the implicit root label too") {
    CHECK(render_label(0) == "pi0");
    CHECK(render_label(12) == "pi12");
}
