#pragma once

// Depth-one nested sequents: an antecedent of sharpening statements, a root
// component, and a flat list of annotated nestings. Components are insertion
// ordered multisets; rules only ever append, so positions are stable and
// nesting labels grow monotonically (the root's label 0 stays implicit).

#include <string>
#include <utility>
#include <vector>

#include "spl/coloring.hpp"
#include "spl/syntax.hpp"

namespace spl {

// Reflexive transitive closure of the sharpening statements, extended with
// (s, "*") for every standpoint. Holds() is total: names outside the indexed
// vocabulary fall back to reflexivity and the universal bound.
class SharpeningClosure {
public:
    SharpeningClosure() = default;
    SharpeningClosure(const std::vector<Sharpening>& gamma, const Vocabulary& vocab);

    bool holds(const std::string& sharper, const std::string& broader) const;
    const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
    const std::vector<std::string>& standpoints() const { return names_; }

private:
    std::vector<std::string> names_;  // vocabulary order, "*" last
    std::vector<std::vector<bool>> mat_;
    std::vector<std::pair<std::string, std::string>> pairs_;
};

SharpeningClosure sharpening_closure(const std::vector<Sharpening>& gamma, const Vocabulary& vocab);

template <class F>
struct NestingT {
    std::string standpoint;
    int label = 0;  // positive and unique within a sequent's history
    std::vector<F> formulas;
};

template <class F>
struct SequentT {
    std::vector<Sharpening> gamma;
    std::vector<F> root;
    std::vector<NestingT<F>> nestings;
    int next_label = 1;

    int component_count() const { return 1 + static_cast<int>(nestings.size()); }

    const std::vector<F>& component(int i) const {
        return i == 0 ? root : nestings[static_cast<std::size_t>(i) - 1].formulas;
    }
    std::vector<F>& component(int i) {
        return i == 0 ? root : nestings[static_cast<std::size_t>(i) - 1].formulas;
    }

    // Component 0 carries no annotation; callers must not ask for one.
    const std::string& component_standpoint(int i) const {
        return nestings[static_cast<std::size_t>(i) - 1].standpoint;
    }
    int component_label(int i) const {
        return i == 0 ? 0 : nestings[static_cast<std::size_t>(i) - 1].label;
    }

    int formula_count() const {
        std::size_t n = root.size();
        for (const auto& nest : nestings) n += nest.formulas.size();
        return static_cast<int>(n);
    }
};

using ColoredSequent = SequentT<ColoredPtr>;
using PlainSequent = SequentT<FormulaPtr>;

bool contains(const std::vector<ColoredPtr>& component, const ColoredPtr& f);
bool contains(const std::vector<FormulaPtr>& component, const FormulaPtr& f);

PlainSequent erase_sequent(const ColoredSequent& seq);

bool equal_sequents(const PlainSequent& a, const PlainSequent& b);
bool equal_sequents(const ColoredSequent& a, const ColoredSequent& b);

// Root component {colored goal}, no nestings; the coloring must erase to the
// input's goal.
ColoredSequent initial_sequent(const SequentInput& input, const ColoredPtr& colored_goal);

// Labels are never recycled: the next fresh one is one past the largest ever
// used in this sequent's history.
int fresh_label(const ColoredSequent& seq);

std::string render_label(int label);  // 0 -> "pi0"

std::string render_sequent(const PlainSequent& seq);
std::string render_sequent(const ColoredSequent& seq, bool show_marks = false);

// Strict inverse of render_sequent on plain sequents.
PlainSequent parse_sequent(const std::string& text);

}  // namespace spl
