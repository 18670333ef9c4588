#include "spl/proof.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace spl {

// ── Thread zipping ──────────────────────────────────────────────────────────

namespace {

Vocabulary sequent_vocabulary(const PlainSequent& seq);

struct ErasedStep {
    Rule rule = Rule::Id;
    Side side = Side::None;
    Principal principal;
    std::string standpoint;
    int target = -1;
    int new_label = 0;
    std::vector<FormulaPtr> added;
    PlainSequent result;
};

bool same_formulas(const std::vector<FormulaPtr>& a, const std::vector<FormulaPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!equal(a[i], b[i])) return false;
    }
    return true;
}

bool same_step(const ErasedStep& a, const ErasedStep& b) {
    return a.rule == b.rule && a.side == b.side && a.principal == b.principal &&
           a.standpoint == b.standpoint && a.target == b.target && a.new_label == b.new_label &&
           same_formulas(a.added, b.added) && equal_sequents(a.result, b.result);
}

struct ZThread {
    const Thread* source = nullptr;
    PlainSequent initial;
    std::vector<ErasedStep> steps;
};

ZThread erase_thread(const Thread& t) {
    ZThread z;
    z.source = &t;
    z.initial = erase_sequent(t.initial);
    z.steps.reserve(t.steps.size());
    for (const SearchStep& s : t.steps) {
        ErasedStep e;
        e.rule = s.rule;
        e.side = s.side;
        e.principal = s.principal;
        e.standpoint = s.standpoint;
        e.target = s.target;
        e.new_label = s.new_label;
        e.added.reserve(s.added.size());
        for (const ColoredPtr& f : s.added) e.added.push_back(erase(f));
        e.result = erase_sequent(s.result);
        z.steps.push_back(std::move(e));
    }
    return z;
}

bool same_zthread(const ZThread& a, const ZThread& b) {
    if (a.steps.size() != b.steps.size()) return false;
    if (!equal_sequents(a.initial, b.initial)) return false;
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        if (!same_step(a.steps[i], b.steps[i])) return false;
    }
    return true;
}

struct Cursor {
    const ZThread* t = nullptr;
    std::size_t k = 0;

    const PlainSequent& current() const { return k == 0 ? t->initial : t->steps[k - 1].result; }
    bool at_end() const { return k == t->steps.size(); }
    const ErasedStep& next() const { return t->steps[k]; }
    Cursor advanced() const { return Cursor{t, k + 1}; }
};

struct ZipCtx {
    SharpeningClosure closure;
    bool seriality = true;
    int max_components = 0;
    long budget = 0;
};

// Escape payload for a synthesized branch that saturated without clashing.
// Such a branch refutes the root conclusion, since every rule only adds
// disjuncts, so it ends the whole assembly rather than one recursion.
struct OpenLeaf {
    PlainSequent seq;
};

// Derives a branch no thread covers, straight on plain sequents. Threads obey
// one coloring, which repeats its side choice whenever the same conjunction
// recurs in another component; here a conjunction simply branches into both
// premises, so mixed side choices across components need no marks at all.
// `fired` keeps one conjunction split per component per branch; every other
// rule is blocked by plain containment, so branches only grow within the
// closure and the recursion bottoms out: it either clashes or saturates and
// throws OpenLeaf.
DerivationPtr derive_plain(ZipCtx& ctx, const PlainSequent& seq, std::vector<FormulaSet> fired) {
    if (ctx.budget-- <= 0) {
        throw ResourceError("proof assembly exceeded its branch synthesis budget");
    }
    internal_check(seq.component_count() <= ctx.max_components,
                   "zip: synthesized branch exceeded its component bound");
    fired.resize(static_cast<std::size_t>(seq.component_count()));

    auto node = std::make_shared<DerivationTree>();
    node->conclusion = seq;

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const FormulaPtr& f = comp[m];
            if (!f->is_literal()) continue;
            Op dual = f->op() == Op::Atom ? Op::NegAtom : Op::Atom;
            for (const FormulaPtr& g : comp) {
                if (g->op() == dual && g->name() == f->name()) {
                    node->rule = Rule::Id;
                    node->principal = Principal{i, static_cast<int>(m)};
                    return node;
                }
            }
        }
    }

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const FormulaPtr& f = comp[m];
            if (f->op() != Op::Or) continue;
            std::vector<FormulaPtr> missing;
            if (!contains(comp, f->lhs())) missing.push_back(f->lhs());
            if (!contains(comp, f->rhs())) missing.push_back(f->rhs());
            if (missing.empty()) continue;
            PlainSequent premise = seq;
            for (FormulaPtr& g : missing) premise.component(i).push_back(std::move(g));
            node->rule = Rule::Or;
            node->principal = Principal{i, static_cast<int>(m)};
            node->premises.push_back(derive_plain(ctx, premise, std::move(fired)));
            return node;
        }
    }

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const FormulaPtr& f = comp[m];
            if (f->op() != Op::And) continue;
            if (contains(comp, f->lhs()) && contains(comp, f->rhs())) continue;
            if (fired[static_cast<std::size_t>(i)].count(f)) continue;
            fired[static_cast<std::size_t>(i)].insert(f);
            PlainSequent left = seq;
            left.component(i).push_back(f->lhs());
            PlainSequent right = seq;
            right.component(i).push_back(f->rhs());
            node->rule = Rule::And;
            node->principal = Principal{i, static_cast<int>(m)};
            node->premises.push_back(derive_plain(ctx, left, fired));
            node->premises.push_back(derive_plain(ctx, right, std::move(fired)));
            return node;
        }
    }

    int n = static_cast<int>(seq.nestings.size());
    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const FormulaPtr& f = comp[m];
            if (f->op() != Op::Diamond) continue;
            for (int j = 1; j <= n; ++j) {
                if (!ctx.closure.holds(seq.component_standpoint(j), f->name())) continue;
                if (contains(seq.component(j), f->lhs())) continue;
                PlainSequent premise = seq;
                premise.component(j).push_back(f->lhs());
                node->rule = (i == j) ? Rule::Dia2 : Rule::Dia1;
                node->principal = Principal{i, static_cast<int>(m)};
                node->standpoint = f->name();
                node->premises.push_back(derive_plain(ctx, premise, std::move(fired)));
                return node;
            }
        }
    }

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const FormulaPtr& f = comp[m];
            if (f->op() != Op::Diamond || f->name() != kUniversal) continue;
            if (contains(seq.root, f->lhs())) continue;
            PlainSequent premise = seq;
            premise.root.push_back(f->lhs());
            node->rule = Rule::DiaStar;
            node->principal = Principal{i, static_cast<int>(m)};
            node->standpoint = kUniversal;
            node->premises.push_back(derive_plain(ctx, premise, std::move(fired)));
            return node;
        }
    }

    for (int i = 0; i < seq.component_count(); ++i) {
        const auto& comp = seq.component(i);
        for (std::size_t m = 0; m < comp.size(); ++m) {
            const FormulaPtr& f = comp[m];
            if (f->op() != Op::Box) continue;
            bool witnessed = false;
            for (int j = 1; j <= n && !witnessed; ++j) {
                witnessed = seq.component_standpoint(j) == f->name() &&
                            contains(seq.component(j), f->lhs());
            }
            if (witnessed) continue;
            PlainSequent premise = seq;
            NestingT<FormulaPtr> nest;
            nest.standpoint = f->name();
            nest.label = premise.next_label;
            nest.formulas.push_back(f->lhs());
            premise.next_label = nest.label + 1;
            premise.nestings.push_back(std::move(nest));
            node->rule = Rule::Box;
            node->principal = Principal{i, static_cast<int>(m)};
            node->standpoint = f->name();
            node->premises.push_back(derive_plain(ctx, premise, std::move(fired)));
            return node;
        }
    }

    if (ctx.seriality) {
        for (const std::string& s : ctx.closure.standpoints()) {
            bool present = false;
            for (const auto& nest : seq.nestings) {
                if (nest.standpoint == s) {
                    present = true;
                    break;
                }
            }
            if (present) continue;
            PlainSequent premise = seq;
            NestingT<FormulaPtr> nest;
            nest.standpoint = s;
            nest.label = premise.next_label;
            premise.next_label = nest.label + 1;
            premise.nestings.push_back(std::move(nest));
            node->rule = Rule::Ns;
            node->standpoint = s;
            node->premises.push_back(derive_plain(ctx, premise, std::move(fired)));
            return node;
        }
    }

    throw OpenLeaf{seq};
}

DerivationPtr zip_group(ZipCtx& ctx, std::vector<Cursor> group) {
    internal_check(!group.empty(), "zip: empty thread group");
    const PlainSequent& cur = group[0].current();
    for (std::size_t i = 1; i < group.size(); ++i) {
        internal_check(equal_sequents(group[i].current(), cur),
                       "zip: thread prefixes diverged before a conjunction step");
    }
    // Clashes are determined by the erased sequent alone, so threads standing
    // at the same sequent end together.
    bool all_end = true;
    bool any_end = false;
    for (const Cursor& c : group) {
        if (c.at_end()) {
            any_end = true;
        } else {
            all_end = false;
        }
    }
    internal_check(all_end || !any_end, "zip: threads end at different depths");

    auto node = std::make_shared<DerivationTree>();
    node->conclusion = cur;

    if (all_end) {
        internal_check(group.size() == 1, "zip: duplicate threads survived deduplication");
        node->rule = Rule::Id;
        node->principal = group[0].t->source->clash;
        return node;
    }

    // Colorings differ in which demand trips a guard first (one coloring's
    // conjunct may already sit in the component while another's is missing),
    // so threads can step apart here. Any single closed thread carries a full
    // derivation on its own, with uncovered conjunct sides synthesized, so the
    // group follows its first thread and drops the stragglers.
    const ErasedStep& first = group[0].next();
    bool aligned = true;
    for (const Cursor& c : group) {
        const ErasedStep& s = c.next();
        bool ok = first.rule == Rule::And
                      ? s.rule == Rule::And && s.principal == first.principal
                      : same_step(s, first);
        if (!ok) {
            aligned = false;
            break;
        }
    }
    if (!aligned) group.resize(1);

    if (first.rule == Rule::And) {
        std::vector<Cursor> left;
        std::vector<Cursor> right;
        for (const Cursor& c : group) {
            (c.next().side == Side::Left ? left : right).push_back(c.advanced());
        }
        // Every coloring reuses its one side choice each time a conjunction
        // recurs in another component, so a group can leave a conjunct side
        // with no covering thread; such a premise gets its own derivation.
        auto synthesize = [&](Side side) -> DerivationPtr {
            const Principal& pr = first.principal;
            const FormulaPtr& principal =
                cur.component(pr.component)[static_cast<std::size_t>(pr.index)];
            PlainSequent premise = cur;
            premise.component(pr.component)
                .push_back(side == Side::Left ? principal->lhs() : principal->rhs());
            std::vector<FormulaSet> fired(static_cast<std::size_t>(premise.component_count()));
            fired[static_cast<std::size_t>(pr.component)].insert(principal);
            return derive_plain(ctx, premise, std::move(fired));
        };
        node->rule = Rule::And;
        node->principal = first.principal;
        node->premises.push_back(left.empty() ? synthesize(Side::Left) : zip_group(ctx, left));
        node->premises.push_back(right.empty() ? synthesize(Side::Right) : zip_group(ctx, right));
        return node;
    }

    std::vector<Cursor> advanced;
    for (const Cursor& c : group) advanced.push_back(c.advanced());
    node->rule = first.rule;
    if (first.rule != Rule::Ns) node->principal = first.principal;
    node->standpoint = first.standpoint;
    node->premises.push_back(zip_group(ctx, advanced));
    return node;
}

}  // namespace

DerivationPtr zip_threads(const std::vector<Thread>& threads, bool seriality,
                          PlainSequent* open_branch) {
    internal_check(!threads.empty(), "zip: no threads");
    std::vector<ZThread> erased;
    erased.reserve(threads.size());
    for (const Thread& t : threads) {
        internal_check(t.outcome == Outcome::Closed, "zip: thread is not closed");
        erased.push_back(erase_thread(t));
    }
    std::vector<Cursor> group;
    for (const ZThread& z : erased) {
        bool duplicate = false;
        for (const Cursor& c : group) {
            if (same_zthread(*c.t, z)) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) group.push_back(Cursor{&z, 0});
    }

    // Synthesized branches stay within the same component ceiling a search
    // does. Their node budget is a backstop only: splits are spent one per
    // conjunction per component per branch, so running it out means a broken
    // invariant, and is reported as a resource failure rather than a verdict.
    const PlainSequent& root = erased.front().initial;
    Vocabulary vocab = sequent_vocabulary(root);
    FormulaSet all;
    for (int i = 0; i < root.component_count(); ++i) {
        for (const FormulaPtr& f : root.component(i)) {
            FormulaSet sub = subformulae(f);
            all.insert(sub.begin(), sub.end());
        }
    }
    long size = static_cast<long>(all.size());
    long k = 1 + static_cast<long>(vocab.standpoints.size()) + size;
    long budget = std::max((1L << 22) / std::max(size * k, 1L), 4096L);
    ZipCtx ctx{SharpeningClosure(root.gamma, vocab), seriality, static_cast<int>(k), budget};
    try {
        return zip_group(ctx, std::move(group));
    } catch (OpenLeaf& leaf) {
        if (open_branch != nullptr) {
            *open_branch = std::move(leaf.seq);
            return nullptr;
        }
        throw InternalError("zip: synthesized branch neither closes nor extends");
    }
}

// ── Proof checking ──────────────────────────────────────────────────────────

namespace {

struct CheckFail {
    std::string msg;
};

// Multiset difference: what `prem` adds over `concl`, or nullopt when some
// conclusion formula is missing from the premise.
std::optional<std::vector<FormulaPtr>> component_added(const std::vector<FormulaPtr>& concl,
                                                       const std::vector<FormulaPtr>& prem) {
    std::vector<bool> used(prem.size(), false);
    for (const FormulaPtr& c : concl) {
        bool found = false;
        for (std::size_t i = 0; i < prem.size(); ++i) {
            if (!used[i] && equal(prem[i], c)) {
                used[i] = true;
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    std::vector<FormulaPtr> added;
    for (std::size_t i = 0; i < prem.size(); ++i) {
        if (!used[i]) added.push_back(prem[i]);
    }
    return added;
}

Vocabulary sequent_vocabulary(const PlainSequent& seq) {
    Vocabulary v;
    auto add_sp = [&](const std::string& s) {
        if (s != kUniversal && !v.has_standpoint(s)) v.standpoints.push_back(s);
    };
    for (const Sharpening& st : seq.gamma) {
        add_sp(st.sharper);
        add_sp(st.broader);
    }
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
        switch (f->op()) {
            case Op::Atom:
            case Op::NegAtom:
                if (!v.has_proposition(f->name())) v.propositions.push_back(f->name());
                break;
            case Op::Box:
            case Op::Diamond:
                add_sp(f->name());
                walk(f->lhs());
                break;
            case Op::Or:
            case Op::And:
                walk(f->lhs());
                walk(f->rhs());
                break;
        }
    };
    for (int i = 0; i < seq.component_count(); ++i) {
        for (const FormulaPtr& f : seq.component(i)) walk(f);
    }
    for (const auto& nest : seq.nestings) add_sp(nest.standpoint);
    v.standpoints.push_back(kUniversal);
    return v;
}

class ProofChecker {
public:
    explicit ProofChecker(const DerivationTree& root)
        : root_(root),
          vocab_(sequent_vocabulary(root.conclusion)),
          closure_(root.conclusion.gamma, vocab_) {}

    bool run(std::string* diag) {
        try {
            walk(root_, "root");
            return true;
        } catch (const CheckFail& f) {
            if (diag) *diag = f.msg;
            return false;
        }
    }

private:
    [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
        throw CheckFail{path + ": " + msg};
    }

    static std::size_t expected_arity(Rule r) {
        switch (r) {
            case Rule::Id: return 0;
            case Rule::And: return 2;
            default: return 1;
        }
    }

    const FormulaPtr& principal_formula(const DerivationTree& node, const std::string& path) const {
        if (!node.principal) fail(path, "rule needs a principal formula");
        const Principal& pr = *node.principal;
        if (pr.component < 0 || pr.component >= node.conclusion.component_count()) {
            fail(path, "principal component out of range");
        }
        const auto& comp = node.conclusion.component(pr.component);
        if (pr.index < 0 || static_cast<std::size_t>(pr.index) >= comp.size()) {
            fail(path, "principal index out of range");
        }
        return comp[static_cast<std::size_t>(pr.index)];
    }

    struct Delta {
        std::vector<std::vector<FormulaPtr>> added;  // per conclusion component
        bool has_appended = false;
        const NestingT<FormulaPtr>* appended = nullptr;
    };

    Delta diff(const PlainSequent& concl, const PlainSequent& prem, const std::string& path) const {
        if (prem.gamma != concl.gamma) fail(path, "premise changes the antecedent");
        Delta d;
        if (prem.nestings.size() == concl.nestings.size() + 1) {
            d.has_appended = true;
            d.appended = &prem.nestings.back();
        } else if (prem.nestings.size() != concl.nestings.size()) {
            fail(path, "premise changes the number of nestings by more than one");
        }
        for (std::size_t j = 0; j < concl.nestings.size(); ++j) {
            if (prem.nestings[j].standpoint != concl.nestings[j].standpoint ||
                prem.nestings[j].label != concl.nestings[j].label) {
                fail(path, "premise relabels an existing nesting");
            }
        }
        for (int i = 0; i < concl.component_count(); ++i) {
            auto added = component_added(concl.component(i), prem.component(i));
            if (!added) fail(path, "premise drops a formula from a component");
            d.added.push_back(std::move(*added));
        }
        return d;
    }

    // For rules that add into one existing component: everything else must be
    // untouched.
    static int sole_target(const Delta& d, const std::string& path) {
        if (d.has_appended) fail(path, "rule must not introduce a nesting");
        int target = -1;
        for (std::size_t i = 0; i < d.added.size(); ++i) {
            if (d.added[i].empty()) continue;
            if (target >= 0) fail(path, "premise extends more than one component");
            target = static_cast<int>(i);
        }
        if (target < 0) fail(path, "premise adds nothing");
        return target;
    }

    void check_appended(const Delta& d, const PlainSequent& concl, const std::string& path) const {
        if (!d.has_appended) fail(path, "rule must introduce a nesting");
        for (std::size_t i = 0; i < d.added.size(); ++i) {
            if (!d.added[i].empty()) fail(path, "rule must not extend existing components");
        }
        int label = d.appended->label;
        if (label <= 0) fail(path, "appended nesting label must be positive");
        for (const auto& nest : concl.nestings) {
            if (nest.label == label) fail(path, "appended nesting label is not fresh");
        }
    }

    void walk(const DerivationTree& node, const std::string& path) const {
        if (node.conclusion.gamma != root_.conclusion.gamma) {
            fail(path, "antecedent differs from the root sequent");
        }
        if (node.premises.size() != expected_arity(node.rule)) {
            fail(path, "wrong number of premises for " + rule_tag(node.rule, node.standpoint));
        }
        for (const DerivationPtr& p : node.premises) {
            if (!p) fail(path, "null premise");
        }
        switch (node.rule) {
            case Rule::Id: {
                const FormulaPtr& f = principal_formula(node, path);
                if (!f->is_literal()) fail(path, "clash principal must be a literal");
                Op dual = f->op() == Op::Atom ? Op::NegAtom : Op::Atom;
                bool found = false;
                for (const FormulaPtr& g : node.conclusion.component(node.principal->component)) {
                    if (g->op() == dual && g->name() == f->name()) {
                        found = true;
                        break;
                    }
                }
                if (!found) fail(path, "no clashing dual literal in the component");
                break;
            }
            case Rule::Or: {
                const FormulaPtr& f = principal_formula(node, path);
                if (f->op() != Op::Or) fail(path, "principal of (or) must be a disjunction");
                const PlainSequent& prem = node.premises[0]->conclusion;
                Delta d = diff(node.conclusion, prem, path);
                int target = sole_target(d, path);
                if (target != node.principal->component) {
                    fail(path, "(or) must extend the principal's component");
                }
                const auto& added = d.added[static_cast<std::size_t>(target)];
                if (added.size() > 2) fail(path, "(or) adds too many formulas");
                bool saw_lhs = false;
                bool saw_rhs = false;
                for (const FormulaPtr& a : added) {
                    if (equal(a, f->lhs()) && !saw_lhs) {
                        saw_lhs = true;
                    } else if (equal(a, f->rhs()) && !saw_rhs) {
                        saw_rhs = true;
                    } else {
                        fail(path, "(or) adds a formula that is not a missing disjunct");
                    }
                }
                const auto& comp = prem.component(target);
                if (!contains(comp, f->lhs()) || !contains(comp, f->rhs())) {
                    fail(path, "(or) premise must contain both disjuncts");
                }
                walk(*node.premises[0], path + ".0");
                break;
            }
            case Rule::And: {
                const FormulaPtr& f = principal_formula(node, path);
                if (f->op() != Op::And) fail(path, "principal of (and) must be a conjunction");
                const FormulaPtr conjuncts[2] = {f->lhs(), f->rhs()};
                for (int b = 0; b < 2; ++b) {
                    const PlainSequent& prem = node.premises[static_cast<std::size_t>(b)]->conclusion;
                    std::string sub = path + "." + std::to_string(b);
                    Delta d = diff(node.conclusion, prem, sub);
                    int target = sole_target(d, sub);
                    if (target != node.principal->component) {
                        fail(sub, "(and) must extend the principal's component");
                    }
                    const auto& added = d.added[static_cast<std::size_t>(target)];
                    if (added.size() != 1 || !equal(added[0], conjuncts[b])) {
                        fail(sub, "(and) premise must add exactly its conjunct");
                    }
                    walk(*node.premises[static_cast<std::size_t>(b)], sub);
                }
                break;
            }
            case Rule::Box: {
                const FormulaPtr& f = principal_formula(node, path);
                if (f->op() != Op::Box) fail(path, "principal must be a box formula");
                if (node.standpoint != f->name()) fail(path, "rule standpoint mismatch");
                const PlainSequent& prem = node.premises[0]->conclusion;
                Delta d = diff(node.conclusion, prem, path);
                check_appended(d, node.conclusion, path);
                if (d.appended->standpoint != f->name()) {
                    fail(path, "appended nesting carries the wrong standpoint");
                }
                if (d.appended->formulas.size() != 1 || !equal(d.appended->formulas[0], f->lhs())) {
                    fail(path, "appended nesting must hold exactly the boxed formula");
                }
                walk(*node.premises[0], path + ".0");
                break;
            }
            case Rule::Ns: {
                if (node.principal) fail(path, "nesting introduction has no principal");
                if (!vocab_.has_standpoint(node.standpoint) && node.standpoint != kUniversal) {
                    fail(path, "nesting introduced for an unknown standpoint");
                }
                const PlainSequent& prem = node.premises[0]->conclusion;
                Delta d = diff(node.conclusion, prem, path);
                check_appended(d, node.conclusion, path);
                if (d.appended->standpoint != node.standpoint) {
                    fail(path, "appended nesting carries the wrong standpoint");
                }
                if (!d.appended->formulas.empty()) {
                    fail(path, "introduced nesting must be empty");
                }
                walk(*node.premises[0], path + ".0");
                break;
            }
            case Rule::Dia1:
            case Rule::Dia2: {
                const FormulaPtr& f = principal_formula(node, path);
                if (f->op() != Op::Diamond) fail(path, "principal must be a diamond formula");
                if (node.standpoint != f->name()) fail(path, "rule standpoint mismatch");
                const PlainSequent& prem = node.premises[0]->conclusion;
                Delta d = diff(node.conclusion, prem, path);
                int target = sole_target(d, path);
                if (target == 0) fail(path, "target must be a nesting");
                const auto& added = d.added[static_cast<std::size_t>(target)];
                if (added.size() != 1 || !equal(added[0], f->lhs())) {
                    fail(path, "premise must add exactly the diamond subformula");
                }
                const std::string& target_sp = node.conclusion.component_standpoint(target);
                if (!closure_.holds(target_sp, f->name())) {
                    fail(path, "target standpoint does not sharpen the principal's");
                }
                if (node.rule == Rule::Dia1 && target == node.principal->component) {
                    fail(path, "principal sits inside the target nesting");
                }
                if (node.rule == Rule::Dia2 && target != node.principal->component) {
                    fail(path, "principal must sit inside the target nesting");
                }
                walk(*node.premises[0], path + ".0");
                break;
            }
            case Rule::DiaStar: {
                const FormulaPtr& f = principal_formula(node, path);
                if (f->op() != Op::Diamond || f->name() != kUniversal) {
                    fail(path, "principal must be a universal diamond formula");
                }
                const PlainSequent& prem = node.premises[0]->conclusion;
                Delta d = diff(node.conclusion, prem, path);
                int target = sole_target(d, path);
                if (target != 0) fail(path, "rule must extend the root component");
                const auto& added = d.added[0];
                if (added.size() != 1 || !equal(added[0], f->lhs())) {
                    fail(path, "premise must add exactly the diamond subformula");
                }
                walk(*node.premises[0], path + ".0");
                break;
            }
        }
    }

    const DerivationTree& root_;
    Vocabulary vocab_;
    SharpeningClosure closure_;
};

}  // namespace

bool check_proof(const DerivationTree& proof, std::string* diagnostic) {
    return ProofChecker(proof).run(diagnostic);
}

// ── Rendering and parse-back ────────────────────────────────────────────────

namespace {

int component_from_label(const PlainSequent& seq, const std::string& label, bool* ok) {
    *ok = true;
    if (label == "pi0") return 0;
    if (label.size() > 2 && label.compare(0, 2, "pi") == 0) {
        int l = 0;
        for (std::size_t i = 2; i < label.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(label[i]))) {
                *ok = false;
                return -1;
            }
            l = l * 10 + (label[i] - '0');
        }
        for (std::size_t j = 0; j < seq.nestings.size(); ++j) {
            if (seq.nestings[j].label == l) return static_cast<int>(j) + 1;
        }
    }
    *ok = false;
    return -1;
}

void render_node(const DerivationTree& node, std::string& out) {
    for (const DerivationPtr& p : node.premises) render_node(*p, out);
    out += "---- ";
    out += rule_tag(node.rule, node.standpoint);
    if (node.principal) {
        out += " @ ";
        out += render_label(node.conclusion.component_label(node.principal->component));
        out += ':';
        out += std::to_string(node.principal->index);
    }
    out += '\n';
    out += render_sequent(node.conclusion);
    out += '\n';
}

}  // namespace

std::string render_proof(const DerivationTree& proof) {
    std::string out;
    render_node(proof, out);
    return out;
}

DerivationPtr parse_proof(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<DerivationPtr> stack;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.compare(0, 5, "---- ") != 0) {
            throw ParseError("expected an inference line", lineno, 1);
        }
        std::string head = line.substr(5);
        std::string tag = head;
        std::string principal_part;
        std::size_t at = head.find(" @ ");
        if (at != std::string::npos) {
            tag = head.substr(0, at);
            principal_part = head.substr(at + 3);
        }
        auto [rule, standpoint] = parse_rule_tag(tag);
        std::string seq_line;
        if (!std::getline(in, seq_line)) {
            throw ParseError("inference line without a sequent", lineno, 1);
        }
        ++lineno;
        auto node = std::make_shared<DerivationTree>();
        node->conclusion = parse_sequent(seq_line);
        node->rule = rule;
        node->standpoint = rule == Rule::Or || rule == Rule::And || rule == Rule::Id
                               ? std::string()
                               : standpoint;
        std::size_t arity = rule == Rule::And ? 2 : (rule == Rule::Id ? 0 : 1);
        if (stack.size() < arity) {
            throw ParseError("not enough premises on the stack", lineno, 1);
        }
        for (std::size_t i = 0; i < arity; ++i) {
            node->premises.insert(node->premises.begin(), stack.back());
            stack.pop_back();
        }
        if (!principal_part.empty()) {
            std::size_t colon = principal_part.find(':');
            if (colon == std::string::npos) {
                throw ParseError("malformed principal locator", lineno, 1);
            }
            bool ok = false;
            Principal pr;
            pr.component = component_from_label(node->conclusion,
                                                principal_part.substr(0, colon), &ok);
            if (!ok) throw ParseError("unknown component label in principal", lineno, 1);
            pr.index = std::stoi(principal_part.substr(colon + 1));
            node->principal = pr;
        }
        stack.push_back(std::move(node));
    }
    if (stack.size() != 1) {
        throw ParseError("proof text does not reduce to a single derivation", lineno, 1);
    }
    return stack[0];
}

nlohmann::json proof_to_json(const DerivationTree& proof) {
    nlohmann::json j;
    j["sequent"] = render_sequent(proof.conclusion);
    j["rule"] = rule_tag(proof.rule, proof.standpoint);
    if (proof.principal) {
        j["principal"] = {
            {"component",
             render_label(proof.conclusion.component_label(proof.principal->component))},
            {"index", proof.principal->index}};
    } else {
        j["principal"] = nullptr;
    }
    nlohmann::json premises = nlohmann::json::array();
    for (const DerivationPtr& p : proof.premises) premises.push_back(proof_to_json(*p));
    j["premises"] = std::move(premises);
    return j;
}

DerivationPtr proof_from_json(const nlohmann::json& j) {
    auto node = std::make_shared<DerivationTree>();
    try {
        node->conclusion = parse_sequent(j.at("sequent").get<std::string>());
        auto [rule, standpoint] = parse_rule_tag(j.at("rule").get<std::string>());
        node->rule = rule;
        node->standpoint = rule == Rule::Or || rule == Rule::And || rule == Rule::Id
                               ? std::string()
                               : standpoint;
        if (!j.at("principal").is_null()) {
            bool ok = false;
            Principal pr;
            pr.component = component_from_label(
                node->conclusion, j.at("principal").at("component").get<std::string>(), &ok);
            if (!ok) throw InputError("unknown component label in principal");
            pr.index = j.at("principal").at("index").get<int>();
            node->principal = pr;
        }
        for (const nlohmann::json& p : j.at("premises")) {
            node->premises.push_back(proof_from_json(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed proof json: ") + e.what());
    }
    return node;
}

int count_nodes(const DerivationTree& proof) {
    int n = 1;
    for (const DerivationPtr& p : proof.premises) n += count_nodes(*p);
    return n;
}

int count_rule(const DerivationTree& proof, Rule rule) {
    int n = proof.rule == rule ? 1 : 0;
    for (const DerivationPtr& p : proof.premises) n += count_rule(*p, rule);
    return n;
}

}  // namespace spl
