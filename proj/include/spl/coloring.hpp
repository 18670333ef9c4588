#pragma once

// Colored formulas: one mark per AST node. A proper coloring keeps the root
// active, propagates the parent mark through disjunctions and modals, and at
// an active conjunction activates exactly one conjunct; everything below an
// inactive node is inactive. Identity (hashing, equality, membership) always
// includes the marks.

#include <optional>
#include <vector>

#include "spl/syntax.hpp"

namespace spl {

enum class Mark : unsigned char { Active, Inactive };

class ColoredFormula;
using ColoredPtr = std::shared_ptr<const ColoredFormula>;

class ColoredFormula {
public:
    static ColoredPtr make(Op op, std::string name, Mark mark, ColoredPtr lhs, ColoredPtr rhs);

    Op op() const { return op_; }
    const std::string& name() const { return name_; }
    Mark mark() const { return mark_; }
    const ColoredPtr& lhs() const { return lhs_; }
    const ColoredPtr& rhs() const { return rhs_; }
    std::size_t hash() const { return hash_; }

    bool is_literal() const { return op_ == Op::Atom || op_ == Op::NegAtom; }

private:
    ColoredFormula(Op op, std::string name, Mark mark, ColoredPtr lhs, ColoredPtr rhs);

    Op op_;
    std::string name_;
    Mark mark_;
    ColoredPtr lhs_;
    ColoredPtr rhs_;
    std::size_t hash_;
};

bool equal(const ColoredFormula& a, const ColoredFormula& b);
bool equal(const ColoredPtr& a, const ColoredPtr& b);

FormulaPtr erase(const ColoredPtr& f);
bool is_proper(const ColoredPtr& f);

// Independent count of proper colorings: 1 at literals, product across
// disjunctions, sum across conjunctions, carried through modals. Saturates
// instead of overflowing.
unsigned long long coloring_count(const FormulaPtr& f);

// Streams the proper colorings of a formula in a fixed order: choice points
// are visited depth first, and at each conjunction the left-active coloring
// comes before the right-active one.
class ColoringStream {
public:
    explicit ColoringStream(FormulaPtr phi);
    std::optional<ColoredPtr> next();

private:
    FormulaPtr phi_;
    std::vector<bool> choices_;  // false = left conjunct active
    bool done_ = false;
};

std::vector<ColoredPtr> proper_colorings(const FormulaPtr& phi);

std::string render_colored(const ColoredPtr& f);  // fully parenthesized, ^o / ^x marks

}  // namespace spl
