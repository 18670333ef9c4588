#include "spl/search.hpp"

#include <algorithm>
#include <functional>

#include "spl/proof.hpp"

namespace spl {

std::string rule_tag(Rule r, const std::string& standpoint) {
    switch (r) {
        case Rule::Id: return "(id)";
        case Rule::Or: return "(or)";
        case Rule::And: return "(and)";
        case Rule::Box: return "box[" + standpoint + "]";
        case Rule::Ns: return "n[" + standpoint + "]";
        case Rule::Dia1: return "dia1[" + standpoint + "]";
        case Rule::Dia2: return "dia2[" + standpoint + "]";
        case Rule::DiaStar: return "dia[*]";
    }
    throw InternalError("rule_tag: bad rule");
}

std::pair<Rule, std::string> parse_rule_tag(const std::string& tag) {
    if (tag == "(id)") return {Rule::Id, ""};
    if (tag == "(or)") return {Rule::Or, ""};
    if (tag == "(and)") return {Rule::And, ""};
    if (tag == "dia[*]") return {Rule::DiaStar, kUniversal};
    auto bracketed = [&](const std::string& prefix) -> std::optional<std::string> {
        if (tag.size() > prefix.size() + 1 && tag.compare(0, prefix.size(), prefix) == 0 &&
            tag.back() == ']') {
            return tag.substr(prefix.size(), tag.size() - prefix.size() - 1);
        }
        return std::nullopt;
    };
    if (auto s = bracketed("box[")) return {Rule::Box, *s};
    if (auto s = bracketed("n[")) return {Rule::Ns, *s};
    if (auto s = bracketed("dia1[")) return {Rule::Dia1, *s};
    if (auto s = bracketed("dia2[")) return {Rule::Dia2, *s};
    throw ParseError("unknown rule tag: " + tag, 1, 1);
}

namespace {

std::optional<Principal> find_clash(const ColoredSequent& seq) {
    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const ColoredPtr& f = comp[m];
            if (!f->is_literal() || f->mark() != Mark::Active) continue;
            Op dual = f->op() == Op::Atom ? Op::NegAtom : Op::Atom;
            for (const ColoredPtr& g : comp) {
                if (g->op() == dual && g->mark() == Mark::Active && g->name() == f->name()) {
                    return Principal{i, static_cast<int>(m)};
                }
            }
        }
    }
    return std::nullopt;
}

const ColoredPtr& active_conjunct(const ColoredPtr& f) {
    return f->lhs()->mark() == Mark::Active ? f->lhs() : f->rhs();
}

}  // namespace

bool is_saturated(const ColoredSequent& seq, const SharpeningClosure& closure, bool seriality) {
    if (find_clash(seq)) return false;
    int n = static_cast<int>(seq.nestings.size());
    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (const ColoredPtr& f : comp) {
            if (f->mark() != Mark::Active) continue;
            switch (f->op()) {
                case Op::Atom:
                case Op::NegAtom:
                    break;
                case Op::Or:
                    if (!contains(comp, f->lhs()) || !contains(comp, f->rhs())) return false;
                    break;
                case Op::And:
                    if (!contains(comp, active_conjunct(f))) return false;
                    break;
                case Op::Diamond: {
                    for (int j = 1; j <= n; ++j) {
                        if (closure.holds(seq.component_standpoint(j), f->name()) &&
                            !contains(seq.component(j), f->lhs())) {
                            return false;
                        }
                    }
                    if (f->name() == kUniversal && !contains(seq.root, f->lhs())) return false;
                    break;
                }
                case Op::Box: {
                    bool witnessed = false;
                    for (int j = 1; j <= n && !witnessed; ++j) {
                        witnessed = seq.component_standpoint(j) == f->name() &&
                                    contains(seq.component(j), f->lhs());
                    }
                    if (!witnessed) return false;
                    break;
                }
            }
        }
    }
    if (seriality) {
        for (const std::string& s : closure.standpoints()) {
            bool present = false;
            for (const auto& nest : seq.nestings) {
                if (nest.standpoint == s) {
                    present = true;
                    break;
                }
            }
            if (!present) return false;
        }
    }
    return true;
}

namespace {

SearchStep apply_addition(const ColoredSequent& seq, Rule rule, Side side, Principal pr,
                          std::string standpoint, int target, std::vector<ColoredPtr> added) {
    SearchStep step;
    step.rule = rule;
    step.side = side;
    step.principal = pr;
    step.standpoint = std::move(standpoint);
    step.target = target;
    step.added = std::move(added);
    step.result = seq;
    for (const ColoredPtr& f : step.added) step.result.component(target).push_back(f);
    return step;
}

SearchStep apply_nesting(const ColoredSequent& seq, Rule rule, Principal pr,
                         std::string standpoint, std::vector<ColoredPtr> content) {
    SearchStep step;
    step.rule = rule;
    step.principal = pr;
    step.standpoint = standpoint;
    step.added = std::move(content);
    step.result = seq;
    NestingT<ColoredPtr> nest;
    nest.standpoint = std::move(standpoint);
    nest.label = fresh_label(seq);
    nest.formulas = step.added;
    step.new_label = nest.label;
    step.result.nestings.push_back(std::move(nest));
    step.result.next_label = step.new_label + 1;
    step.target = step.result.component_count() - 1;
    return step;
}

// The guard cascade. Scans are occurrence major: components by index,
// formulas by insertion order, targets by ascending component. The
// conjunction guard deliberately joins the left- and right-active cases into
// one positional scan so that threads of different colorings disagree only in
// which conjunct they add, never in which occurrence they decompose; thread
// zipping depends on that.
SearchStep next_step(const ColoredSequent& seq, const SharpeningClosure& closure, bool seriality) {
    int n = static_cast<int>(seq.nestings.size());

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const ColoredPtr& f = comp[m];
            if (f->op() != Op::Or || f->mark() != Mark::Active) continue;
            std::vector<ColoredPtr> missing;
            if (!contains(comp, f->lhs())) missing.push_back(f->lhs());
            if (!contains(comp, f->rhs())) missing.push_back(f->rhs());
            if (!missing.empty()) {
                return apply_addition(seq, Rule::Or, Side::None,
                                      Principal{i, static_cast<int>(m)}, "", i,
                                      std::move(missing));
            }
        }
    }

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const ColoredPtr& f = comp[m];
            if (f->op() != Op::And || f->mark() != Mark::Active) continue;
            const ColoredPtr& pick = active_conjunct(f);
            if (!contains(comp, pick)) {
                Side side = pick == f->lhs() ? Side::Left : Side::Right;
                return apply_addition(seq, Rule::And, side, Principal{i, static_cast<int>(m)},
                                      "", i, {pick});
            }
        }
    }

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const ColoredPtr& f = comp[m];
            if (f->op() != Op::Diamond || f->mark() != Mark::Active) continue;
            for (int j = 1; j <= n; ++j) {
                if (!closure.holds(seq.component_standpoint(j), f->name())) continue;
                if (contains(seq.component(j), f->lhs())) continue;
                Rule rule = (i == j) ? Rule::Dia2 : Rule::Dia1;
                return apply_addition(seq, rule, Side::None, Principal{i, static_cast<int>(m)},
                                      f->name(), j, {f->lhs()});
            }
        }
    }

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const ColoredPtr& f = comp[m];
            if (f->op() != Op::Diamond || f->name() != kUniversal || f->mark() != Mark::Active) {
                continue;
            }
            if (!contains(seq.root, f->lhs())) {
                return apply_addition(seq, Rule::DiaStar, Side::None,
                                      Principal{i, static_cast<int>(m)}, kUniversal, 0,
                                      {f->lhs()});
            }
        }
    }

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const ColoredPtr& f = comp[m];
            if (f->op() != Op::Box || f->mark() != Mark::Active) continue;
            bool witnessed = false;
            for (int j = 1; j <= n && !witnessed; ++j) {
                witnessed = seq.component_standpoint(j) == f->name() &&
                            contains(seq.component(j), f->lhs());
            }
            if (!witnessed) {
                return apply_nesting(seq, Rule::Box, Principal{i, static_cast<int>(m)}, f->name(),
                                     {f->lhs()});
            }
        }
    }

    if (seriality) {
        for (const std::string& s : closure.standpoints()) {
            bool present = false;
            for (const auto& nest : seq.nestings) {
                if (nest.standpoint == s) {
                    present = true;
                    break;
                }
            }
            if (!present) {
                return apply_nesting(seq, Rule::Ns, Principal{}, s, {});
            }
        }
    }

    throw InternalError("no rule applies to an unsaturated sequent");
}

}  // namespace

Thread proof_search(ColoredSequent start, const SharpeningClosure& closure,
                    const SearchLimits& limits, SearchStats& stats, bool seriality) {
    Thread th;
    th.initial = start;
    ColoredSequent seq = std::move(start);
    for (;;) {
        stats.max_components = std::max(stats.max_components, seq.component_count());
        stats.max_sequent_size = std::max(stats.max_sequent_size, seq.formula_count());
        if (auto clash = find_clash(seq)) {
            th.outcome = Outcome::Closed;
            th.clash = *clash;
            break;
        }
        if (is_saturated(seq, closure, seriality)) {
            th.outcome = Outcome::Saturated;
            break;
        }
        SearchStep step = next_step(seq, closure, seriality);
        stats.recursive_calls += 1;
        internal_check(stats.recursive_calls <= limits.max_calls,
                       "rule application count exceeded its bound");
        internal_check(step.result.component_count() <= limits.max_components,
                       "component count exceeded its bound");
        seq = step.result;
        th.steps.push_back(std::move(step));
    }
    return th;
}

StandpointModel extract_countermodel(const PlainSequent& final_seq,
                                     const SharpeningClosure& closure, bool seriality) {
    StandpointModel model;
    int n = static_cast<int>(final_seq.nestings.size());
    for (int i = 0; i <= n; ++i) {
        // The engine appends nestings with consecutive labels, so component
        // index and label coincide.
        if (i > 0) {
            internal_check(final_seq.nestings[static_cast<std::size_t>(i) - 1].label == i,
                           "extract_countermodel: non-contiguous labels");
        }
        model.precisifications.push_back(render_label(i));
    }
    std::set<std::string> all(model.precisifications.begin(), model.precisifications.end());
    for (const std::string& s : closure.standpoints()) {
        if (s == kUniversal) continue;
        std::set<std::string> set;
        for (int j = 1; j <= n; ++j) {
            if (closure.holds(final_seq.component_standpoint(j), s)) {
                set.insert(render_label(j));
            }
        }
        internal_check(!set.empty() || !seriality,
                       "extract_countermodel: empty sigma for " + s);
        model.sigma[s] = std::move(set);
    }
    model.sigma[kUniversal] = all;

    // Proposition names in first-occurrence order across the final sequent;
    // the root still holds the goal, so this covers the input vocabulary.
    std::vector<std::string> props;
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
        switch (f->op()) {
            case Op::Atom:
            case Op::NegAtom:
                if (std::find(props.begin(), props.end(), f->name()) == props.end()) {
                    props.push_back(f->name());
                }
                break;
            case Op::Box:
            case Op::Diamond:
                walk(f->lhs());
                break;
            case Op::Or:
            case Op::And:
                walk(f->lhs());
                walk(f->rhs());
                break;
        }
    };
    for (int i = 0; i <= n; ++i) {
        for (const FormulaPtr& f : final_seq.component(i)) walk(f);
    }
    for (const std::string& p : props) {
        FormulaPtr asserted = Formula::atom(p);
        std::set<std::string> set;
        for (int i = 0; i <= n; ++i) {
            if (!contains(final_seq.component(i), asserted)) {
                set.insert(render_label(i));
            }
        }
        model.delta[p] = std::move(set);
    }
    return model;
}

StandpointModel extract_countermodel(const ColoredSequent& final_seq,
                                     const SharpeningClosure& closure, bool seriality) {
    // Members always carry active roots, so erasure loses nothing delta needs.
    return extract_countermodel(erase_sequent(final_seq), closure, seriality);
}

Verdict prove(const SequentInput& input, ProveStats& stats, const ProveOptions& opts) {
    internal_check(input.goal != nullptr, "prove: null goal");
    int size = formula_size(input.goal);
    int standpoints = static_cast<int>(input.vocab.standpoints.size());
    long k_bound = 1 + standpoints + size;
    long n_bound = static_cast<long>(size) * k_bound;
    stats = ProveStats{};
    stats.bound = n_bound;
    stats.component_bound = static_cast<int>(k_bound);

    SharpeningClosure closure(input.gamma, input.vocab);

    unsigned long long count = coloring_count(input.goal);
    if (count > static_cast<unsigned long long>(opts.max_colorings)) {
        throw ResourceError("coloring space exhausted: " + std::to_string(count) +
                            " proper colorings exceed the ceiling of " +
                            std::to_string(opts.max_colorings));
    }
    stats.colorings = static_cast<long long>(count);

    SearchLimits limits{n_bound, static_cast<int>(k_bound)};
    std::vector<Thread> threads;
    ColoringStream stream(input.goal);
    while (auto coloring = stream.next()) {
        SearchStats ss;
        Thread th = proof_search(initial_sequent(input, *coloring), closure, limits, ss,
                                 opts.seriality);
        th.coloring = *coloring;
        stats.threads_run += 1;
        stats.recursive_calls_max = std::max(stats.recursive_calls_max, ss.recursive_calls);
        stats.max_components = std::max(stats.max_components, ss.max_components);
        if (th.outcome == Outcome::Saturated) {
            StandpointModel model =
                extract_countermodel(th.final_sequent(), closure, opts.seriality);
            PlainSequent final_plain = erase_sequent(th.final_sequent());
            StandpointImplication impl = interpret(erase_sequent(th.initial));
            internal_check(sharpenings_hold(model, impl.gamma),
                           "extracted model fails the antecedent");
            internal_check(!eval(model, render_label(0), impl.matrix),
                           "extracted model does not falsify the goal at pi0");
            internal_check(check_countermodel(model, final_plain, !opts.seriality),
                           "extracted model does not falsify the saturated sequent");
            Verdict v;
            v.valid = false;
            v.model = std::move(model);
            v.falsified = std::move(final_plain);
            v.witness = std::move(th);
            return v;
        }
        threads.push_back(std::move(th));
    }
    internal_check(static_cast<unsigned long long>(threads.size()) == count,
                   "enumerated coloring count disagrees with coloring_count");

    // Every thread closed, which is necessary but not sufficient: a coloring
    // fixes one conjunct per conjunction globally, so a conjunction whose
    // components need different conjuncts can close every thread on an
    // invalid input. Assembly settles it either way: a full derivation, or a
    // saturated branch whose sequent extends the conclusion by disjuncts only
    // and therefore refutes it.
    Verdict v;
    PlainSequent open;
    v.proof = zip_threads(threads, opts.seriality, &open);
    if (v.proof == nullptr) {
        StandpointModel model = extract_countermodel(open, closure, opts.seriality);
        StandpointImplication impl = interpret(erase_sequent(threads[0].initial));
        internal_check(sharpenings_hold(model, impl.gamma),
                       "assembled model fails the antecedent");
        internal_check(!eval(model, render_label(0), impl.matrix),
                       "assembled model does not falsify the goal at pi0");
        internal_check(check_countermodel(model, open, !opts.seriality),
                       "assembled model does not falsify the open branch");
        v.valid = false;
        v.model = std::move(model);
        v.falsified = std::move(open);
        return v;
    }
    v.valid = true;
    internal_check(equal_sequents(v.proof->conclusion, erase_sequent(threads[0].initial)),
                   "zipped proof concludes the wrong sequent");
    std::string diag;
    if (!check_proof(*v.proof, &diag)) {
        throw InternalError("zipped proof failed verification: " + diag);
    }
    return v;
}

}  // namespace spl
