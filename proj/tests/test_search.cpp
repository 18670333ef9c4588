#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spl/proof.hpp"
#include "spl/search.hpp"
#include "support/gen.hpp"

using namespace spl;

namespace {

Thread run_thread(const std::string& text, std::size_t coloring_index = 0,
                  bool seriality = true) {
    SequentInput in = normalize_input(parse_implication(text));
    SharpeningClosure closure(in.gamma, in.vocab);
    std::vector<ColoredPtr> cs = proper_colorings(in.goal);
    REQUIRE(coloring_index < cs.size());
    SearchLimits limits{1000, 100};
    SearchStats stats;
    Thread t = proof_search(initial_sequent(in, cs[coloring_index]), closure, limits, stats,
                            seriality);
    t.coloring = cs[coloring_index];
    return t;
}

void expect_step(const SearchStep& s, Rule rule, int pc, int pi, const std::string& standpoint,
                 int target) {
    CHECK(s.rule == rule);
    CHECK(s.principal == Principal{pc, pi});
    CHECK(s.standpoint == standpoint);
    CHECK(s.target == target);
}

}  // namespace

TEST_CASE("rule tags round-trip") {
    CHECK(rule_tag(Rule::Id, "") == "(id)");
    CHECK(rule_tag(Rule::Or, "") == "(or)");
    CHECK(rule_tag(Rule::And, "") == "(and)");
    CHECK(rule_tag(Rule::Box, "s'") == "box[s']");
    CHECK(rule_tag(Rule::Ns, kUniversal) == "n[*]");
    CHECK(rule_tag(Rule::Dia1, "s") == "dia1[s]");
    CHECK(rule_tag(Rule::Dia2, kUniversal) == "dia2[*]");
    CHECK(rule_tag(Rule::DiaStar, kUniversal) == "dia[*]");
    for (const char* tag : {"(id)", "(or)", "(and)", "box[s]", "n[*]", "dia1[t]", "dia2[*]",
                            "dia[*]"}) {
        auto [r, sp] = parse_rule_tag(tag);
        CHECK(rule_tag(r, sp) == tag);
    }
    CHECK_THROWS_AS(parse_rule_tag("(cut)"), ParseError);
    CHECK_THROWS_AS(parse_rule_tag("box[s"), ParseError);
}

TEST_CASE("a diamond reaches into a nesting opened for a broader standpoint") {
    /* Valid: gamma makes s' sharpen s, so the s-diamond lands in the
     * s'-nesting and the universal diamond follows it inside. */
    Thread t = run_thread("s' <= s |- <s><*>~p | [s']p");
    CHECK(t.outcome == Outcome::Closed);
    REQUIRE(t.steps.size() == 4);
    expect_step(t.steps[0], Rule::Or, 0, 0, "", 0);
    CHECK(t.steps[0].added.size() == 2);
    expect_step(t.steps[1], Rule::Box, 0, 2, "s'", 1);
    CHECK(t.steps[1].new_label == 1);
    expect_step(t.steps[2], Rule::Dia1, 0, 1, "s", 1);
    expect_step(t.steps[3], Rule::Dia2, 1, 1, kUniversal, 1);
    CHECK(t.clash == Principal{1, 0});
    CHECK(render_sequent(erase_sequent(t.final_sequent())) ==
          "s' <= s |- <s><*>~p | [s']p, <s><*>~p, [s']p, (s')[p, <*>~p, ~p]@pi1");
}

TEST_CASE("a diamond with no reachable nesting saturates into a countermodel") {
    Thread t = run_thread("s <= s' |- [s']p | <s>~p");
    CHECK(t.outcome == Outcome::Saturated);
    REQUIRE(t.steps.size() == 5);
    expect_step(t.steps[0], Rule::Or, 0, 0, "", 0);
    expect_step(t.steps[1], Rule::Box, 0, 1, "s'", 1);
    CHECK(t.steps[2].rule == Rule::Ns);
    CHECK(t.steps[2].standpoint == "s");
    CHECK(t.steps[2].new_label == 2);
    expect_step(t.steps[3], Rule::Dia1, 0, 2, "s", 2);
    CHECK(t.steps[4].rule == Rule::Ns);
    CHECK(t.steps[4].standpoint == kUniversal);
    CHECK(t.steps[4].new_label == 3);

    SequentInput in = normalize_input(parse_implication("s <= s' |- [s']p | <s>~p"));
    SharpeningClosure closure(in.gamma, in.vocab);
    CHECK(is_saturated(t.final_sequent(), closure));

    StandpointModel m = extract_countermodel(t.final_sequent(), closure);
    CHECK(m.precisifications == std::vector<std::string>{"pi0", "pi1", "pi2", "pi3"});
    CHECK(m.sigma["s"] == std::set<std::string>{"pi2"});
    /* sigma is closed upward: pi2 asserts s, and s sharpens s'. */
    CHECK(m.sigma["s'"] == std::set<std::string>{"pi1", "pi2"});
    CHECK(m.sigma[kUniversal] == std::set<std::string>{"pi0", "pi1", "pi2", "pi3"});
    CHECK(m.delta["p"] == std::set<std::string>{"pi0", "pi2", "pi3"});
    CHECK(check_countermodel(m, erase_sequent(t.final_sequent())));
}

TEST_CASE("each coloring of a conjunction drives its own thread") {
    const std::string fig = "|- [s](p | (~p & ~p)) & <s>(q | ~q)";

    Thread t1 = run_thread(fig, 0);
    CHECK(t1.outcome == Outcome::Closed);
    REQUIRE(t1.steps.size() == 4);
    expect_step(t1.steps[0], Rule::And, 0, 0, "", 0);
    CHECK(t1.steps[0].side == Side::Left);
    expect_step(t1.steps[1], Rule::Box, 0, 1, "s", 1);
    expect_step(t1.steps[2], Rule::Or, 1, 0, "", 1);
    expect_step(t1.steps[3], Rule::And, 1, 2, "", 1);
    CHECK(t1.steps[3].side == Side::Left);
    CHECK(t1.clash == Principal{1, 1});

    Thread t2 = run_thread(fig, 1);
    CHECK(t2.outcome == Outcome::Closed);
    REQUIRE(t2.steps.size() == 4);
    CHECK(t2.steps[3].rule == Rule::And);
    CHECK(t2.steps[3].side == Side::Right);

    Thread t3 = run_thread(fig, 2);
    CHECK(t3.outcome == Outcome::Closed);
    REQUIRE(t3.steps.size() == 4);
    expect_step(t3.steps[0], Rule::And, 0, 0, "", 0);
    CHECK(t3.steps[0].side == Side::Right);
    CHECK(t3.steps[1].rule == Rule::Ns);
    CHECK(t3.steps[1].standpoint == "s");
    expect_step(t3.steps[2], Rule::Dia1, 0, 1, "s", 1);
    expect_step(t3.steps[3], Rule::Or, 1, 0, "", 1);
    CHECK(t3.clash == Principal{1, 1});
}

TEST_CASE("universal diamonds propagate into the root and every nesting") {
    Thread t = run_thread("|- <*>p | ~p");
    CHECK(t.outcome == Outcome::Closed);
    REQUIRE(t.steps.size() == 2);
    expect_step(t.steps[1], Rule::DiaStar, 0, 1, kUniversal, 0);
    CHECK(t.clash == Principal{0, 2});

    /* The universal diamond lands in the root first, then follows the boxed
     * nesting once it exists. */
    Thread boxed = run_thread("|- [s]~p | <*>p");
    CHECK(boxed.outcome == Outcome::Closed);
    REQUIRE(boxed.steps.size() == 4);
    expect_step(boxed.steps[1], Rule::DiaStar, 0, 2, kUniversal, 0);
    expect_step(boxed.steps[2], Rule::Box, 0, 1, "s", 1);
    expect_step(boxed.steps[3], Rule::Dia1, 0, 2, kUniversal, 1);
    CHECK(boxed.clash == Principal{1, 0});
}

TEST_CASE("empty nestings appear in vocabulary order with '*' last") {
    Thread t = run_thread("|- <t>q | <s>p");
    CHECK(t.outcome == Outcome::Saturated);
    REQUIRE(t.steps.size() == 6);
    CHECK(t.steps[1].rule == Rule::Ns);
    CHECK(t.steps[1].standpoint == "t");
    CHECK(t.steps[2].rule == Rule::Dia1);
    CHECK(t.steps[2].target == 1);
    CHECK(t.steps[3].rule == Rule::Ns);
    CHECK(t.steps[3].standpoint == "s");
    CHECK(t.steps[4].rule == Rule::Dia1);
    CHECK(t.steps[4].target == 2);
    CHECK(t.steps[5].rule == Rule::Ns);
    CHECK(t.steps[5].standpoint == kUniversal);
}

TEST_CASE("saturation requires every guard to be spent") {
    SequentInput in = normalize_input(parse_implication("|- p"));
    SharpeningClosure closure(in.gamma, in.vocab);
    ColoredSequent seq = initial_sequent(in, proper_colorings(in.goal)[0]);
    CHECK(!is_saturated(seq, closure));       /* the universal nesting is missing */
    CHECK(is_saturated(seq, closure, false)); /* unless seriality is dropped */
    seq.nestings.push_back({kUniversal, 1, {}});
    seq.next_label = 2;
    CHECK(is_saturated(seq, closure));

    /* A clash is never saturated. */
    SequentInput pq = normalize_input(parse_implication("|- p | ~p"));
    SharpeningClosure c2(pq.gamma, pq.vocab);
    Thread t = run_thread("|- p | ~p");
    CHECK(t.outcome == Outcome::Closed);
    CHECK(!is_saturated(t.final_sequent(), c2));
}

TEST_CASE("prove certifies validity with a checked proof") {
    ProveStats stats;
    Verdict v = prove(normalize_input(parse_implication("s' <= s |- <s><*>~p | [s']p")), stats);
    CHECK(v.valid);
    REQUIRE(v.proof != nullptr);
    CHECK(check_proof(*v.proof));
    CHECK(!v.model.has_value());
    CHECK(stats.colorings == 1);
    CHECK(stats.threads_run == 1);
    CHECK(stats.recursive_calls_max == 4);
    CHECK(stats.recursive_calls_max <= stats.bound);
    CHECK(stats.max_components <= stats.component_bound);
}

TEST_CASE("prove certifies invalidity with a checked countermodel") {
    ProveStats stats;
    SequentInput in = normalize_input(parse_implication("s <= s' |- [s']p | <s>~p"));
    Verdict v = prove(in, stats);
    CHECK(!v.valid);
    CHECK(v.proof == nullptr);
    REQUIRE(v.model.has_value());
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->outcome == Outcome::Saturated);
    StandpointImplication impl{in.gamma, in.goal};
    CHECK(sharpenings_hold(*v.model, impl.gamma));
    CHECK(!eval(*v.model, "pi0", impl.matrix));
}

TEST_CASE("the first saturated coloring wins deterministically") {
    /* Both colorings saturate; the verdict must come from the first. */
    ProveStats stats;
    Verdict v = prove(normalize_input(parse_implication("|- p & q")), stats);
    CHECK(!v.valid);
    REQUIRE(v.witness.has_value());
    /* Coloring 0 activates the left conjunct, so p is asserted at pi0. */
    CHECK(v.model->delta.at("p") == std::set<std::string>{"pi1"});
    CHECK(v.model->delta.at("q") == std::set<std::string>{"pi0", "pi1"});
    CHECK(stats.threads_run == 1);  /* stops at the first saturated thread */
    CHECK(stats.colorings == 2);
}

TEST_CASE("a saturated branch met during assembly flips the verdict") {
    /* A coloring fixes one conjunct per conjunction globally. When the same
     * conjunction lands in several components that need different conjuncts,
     * every thread can close even though the input is invalid; the branches
     * the colorings cannot cover saturate during assembly and must decide the
     * run, with a countermodel and no witness thread. */
    SequentInput in =
        normalize_input(parse_implication("|- <*>([*]~p | p & ([*]p | p & ~p)) | ~p"));
    for (bool seriality : {true, false}) {
        ProveStats stats;
        ProveOptions po;
        po.seriality = seriality;
        Verdict v = prove(in, stats, po);
        CHECK(!v.valid);
        CHECK(stats.colorings == 3);
        CHECK(stats.threads_run == 3); /* none saturated on its own */
        CHECK(!v.witness.has_value());
        REQUIRE(v.model.has_value());
        REQUIRE(v.falsified.has_value());
        CHECK(sharpenings_hold(*v.model, in.gamma));
        CHECK(!eval(*v.model, "pi0", in.goal));
        CHECK(check_countermodel(*v.model, *v.falsified, !seriality));
        OracleOptions oo;
        oo.allow_empty_sigma = !seriality;
        CHECK(!oracle_validity(in, 3, oo));
    }
}

TEST_CASE("identical runs produce identical artifacts") {
    std::mt19937 rng(47);
    spltest::GenOptions o;
    o.max_size = 7;
    for (int i = 0; i < 60; ++i) {
        SequentInput in = spltest::random_input(rng, o);
        ProveStats s1, s2;
        Verdict v1 = prove(in, s1);
        Verdict v2 = prove(in, s2);
        CHECK(v1.valid == v2.valid);
        CHECK(s1.colorings == s2.colorings);
        CHECK(s1.threads_run == s2.threads_run);
        CHECK(s1.recursive_calls_max == s2.recursive_calls_max);
        if (v1.valid) {
            CHECK(render_proof(*v1.proof) == render_proof(*v2.proof));
        } else {
            CHECK(model_to_json(*v1.model, "pi0") == model_to_json(*v2.model, "pi0"));
        }
    }
}

TEST_CASE("seriality is the difference on the diamond split") {
    SequentInput in = normalize_input(parse_implication("|- <s>p | <s>~p"));
    ProveStats stats;
    CHECK(prove(in, stats).valid);
    ProveOptions relaxed;
    relaxed.seriality = false;
    Verdict v = prove(in, stats, relaxed);
    CHECK(!v.valid);
    REQUIRE(v.model.has_value());
    CHECK(v.model->sigma.at("s").empty());
    /* The box direction stays valid without seriality. */
    CHECK(prove(normalize_input(parse_implication("|- [s]p | <s>~p")), stats, relaxed).valid);
}

TEST_CASE("the coloring ceiling raises a resource error") {
    SequentInput in = normalize_input(parse_implication("|- (p & q) & (p & q)"));
    ProveStats stats;
    ProveOptions opts;
    opts.max_colorings = 3;
    CHECK_THROWS_AS(prove(in, stats, opts), ResourceError);
    opts.max_colorings = 4;
    CHECK(prove(in, stats, opts).valid == false);
}

TEST_CASE("exhausted limits are internal errors, not verdicts") {
    SequentInput in = normalize_input(parse_implication("|- [s]p | <s>~p"));
    SharpeningClosure closure(in.gamma, in.vocab);
    ColoredSequent start = initial_sequent(in, proper_colorings(in.goal)[0]);
    SearchStats stats;
    SearchLimits starved{1, 100};
    CHECK_THROWS_AS(proof_search(start, closure, starved, stats), InternalError);
    SearchLimits cramped{1000, 1};
    CHECK_THROWS_AS(proof_search(start, closure, cramped, stats), InternalError);
}

TEST_CASE("labels stay contiguous in extracted countermodels") {
    std::mt19937 rng(53);
    spltest::GenOptions o;
    o.max_size = 8;
    int invalid_seen = 0;
    for (int i = 0; i < 150 && invalid_seen < 40; ++i) {
        SequentInput in = spltest::random_input(rng, o);
        ProveStats stats;
        Verdict v = prove(in, stats);
        if (v.valid) continue;
        ++invalid_seen;
        REQUIRE(v.model.has_value());
        int n = static_cast<int>(v.model->precisifications.size());
        for (int k = 0; k < n; ++k) {
            CHECK(v.model->precisifications[static_cast<std::size_t>(k)] == render_label(k));
        }
        REQUIRE(v.falsified.has_value());
        CHECK(check_countermodel(*v.model, *v.falsified));
    }
    CHECK(invalid_seen >= 20);
}
