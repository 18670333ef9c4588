#include "spl/coloring.hpp"

#include <limits>
#include <utility>

namespace spl {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

ColoredFormula::ColoredFormula(Op op, std::string name, Mark mark, ColoredPtr lhs, ColoredPtr rhs)
    : op_(op), name_(std::move(name)), mark_(mark), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
    std::size_t h = hash_combine(0x7a3cd1f5, static_cast<std::size_t>(op_));
    h = hash_combine(h, static_cast<std::size_t>(mark_));
    h = hash_combine(h, std::hash<std::string>{}(name_));
    if (lhs_) h = hash_combine(h, lhs_->hash());
    if (rhs_) h = hash_combine(h, rhs_->hash());
    hash_ = h;
}

ColoredPtr ColoredFormula::make(Op op, std::string name, Mark mark, ColoredPtr lhs, ColoredPtr rhs) {
    switch (op) {
        case Op::Atom:
        case Op::NegAtom:
            internal_check(!lhs && !rhs, "colored literal with children");
            break;
        case Op::Box:
        case Op::Diamond:
            internal_check(lhs && !rhs, "colored modal needs one child");
            break;
        case Op::Or:
        case Op::And:
            internal_check(lhs && rhs, "colored binary needs two children");
            break;
    }
    return ColoredPtr(new ColoredFormula(op, std::move(name), mark, std::move(lhs), std::move(rhs)));
}

bool equal(const ColoredFormula& a, const ColoredFormula& b) {
    if (&a == &b) return true;
    if (a.hash() != b.hash()) return false;
    if (a.op() != b.op() || a.mark() != b.mark() || a.name() != b.name()) return false;
    switch (a.op()) {
        case Op::Atom:
        case Op::NegAtom:
            return true;
        case Op::Box:
        case Op::Diamond:
            return equal(*a.lhs(), *b.lhs());
        case Op::Or:
        case Op::And:
            return equal(*a.lhs(), *b.lhs()) && equal(*a.rhs(), *b.rhs());
    }
    return false;
}

bool equal(const ColoredPtr& a, const ColoredPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return equal(*a, *b);
}

FormulaPtr erase(const ColoredPtr& f) {
    switch (f->op()) {
        case Op::Atom:
            return Formula::atom(f->name());
        case Op::NegAtom:
            return Formula::neg_atom(f->name());
        case Op::Or:
            return Formula::disj(erase(f->lhs()), erase(f->rhs()));
        case Op::And:
            return Formula::conj(erase(f->lhs()), erase(f->rhs()));
        case Op::Box:
            return Formula::box(f->name(), erase(f->lhs()));
        case Op::Diamond:
            return Formula::dia(f->name(), erase(f->lhs()));
    }
    throw InternalError("erase: bad op");
}

namespace {

bool proper_below(const ColoredFormula& f) {
    Mark m = f.mark();
    switch (f.op()) {
        case Op::Atom:
        case Op::NegAtom:
            return true;
        case Op::Box:
        case Op::Diamond:
            return f.lhs()->mark() == m && proper_below(*f.lhs());
        case Op::Or:
            return f.lhs()->mark() == m && f.rhs()->mark() == m &&
                   proper_below(*f.lhs()) && proper_below(*f.rhs());
        case Op::And: {
            Mark l = f.lhs()->mark();
            Mark r = f.rhs()->mark();
            if (m == Mark::Inactive) {
                if (l != Mark::Inactive || r != Mark::Inactive) return false;
            } else {
                if (l == r) return false;  // exactly one conjunct stays active
            }
            return proper_below(*f.lhs()) && proper_below(*f.rhs());
        }
    }
    return false;
}

}  // namespace

bool is_proper(const ColoredPtr& f) {
    return f && f->mark() == Mark::Active && proper_below(*f);
}

namespace {

constexpr unsigned long long kSat = std::numeric_limits<unsigned long long>::max();

unsigned long long sat_add(unsigned long long a, unsigned long long b) {
    return (kSat - a < b) ? kSat : a + b;
}

unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
    if (a == 0 || b == 0) return 0;
    return (kSat / a < b) ? kSat : a * b;
}

}  // namespace

unsigned long long coloring_count(const FormulaPtr& f) {
    switch (f->op()) {
        case Op::Atom:
        case Op::NegAtom:
            return 1;
        case Op::Or:
            return sat_mul(coloring_count(f->lhs()), coloring_count(f->rhs()));
        case Op::And:
            return sat_add(coloring_count(f->lhs()), coloring_count(f->rhs()));
        case Op::Box:
        case Op::Diamond:
            return coloring_count(f->lhs());
    }
    throw InternalError("coloring_count: bad op");
}

namespace {

// Rebuilds a coloring from a choice word, recording the word actually used
// (defaults extend with left-active choices). Choice points are active
// conjunctions in depth-first order.
struct ColoringBuilder {
    const std::vector<bool>& given;
    std::vector<bool> used;
    std::size_t pos = 0;

    bool next_choice() {
        bool v = pos < given.size() ? given[pos] : false;
        used.push_back(v);
        ++pos;
        return v;
    }

    ColoredPtr inactive(const FormulaPtr& f) {
        switch (f->op()) {
            case Op::Atom:
            case Op::NegAtom:
                return ColoredFormula::make(f->op(), f->name(), Mark::Inactive, nullptr, nullptr);
            case Op::Box:
            case Op::Diamond:
                return ColoredFormula::make(f->op(), f->name(), Mark::Inactive, inactive(f->lhs()), nullptr);
            case Op::Or:
            case Op::And:
                return ColoredFormula::make(f->op(), f->name(), Mark::Inactive, inactive(f->lhs()),
                                            inactive(f->rhs()));
        }
        throw InternalError("inactive: bad op");
    }

    ColoredPtr active(const FormulaPtr& f) {
        switch (f->op()) {
            case Op::Atom:
            case Op::NegAtom:
                return ColoredFormula::make(f->op(), f->name(), Mark::Active, nullptr, nullptr);
            case Op::Box:
            case Op::Diamond:
                return ColoredFormula::make(f->op(), f->name(), Mark::Active, active(f->lhs()), nullptr);
            case Op::Or:
                return ColoredFormula::make(f->op(), f->name(), Mark::Active, active(f->lhs()),
                                            active(f->rhs()));
            case Op::And: {
                bool right_active = next_choice();
                ColoredPtr l = right_active ? inactive(f->lhs()) : active(f->lhs());
                ColoredPtr r = right_active ? active(f->rhs()) : inactive(f->rhs());
                return ColoredFormula::make(f->op(), f->name(), Mark::Active, std::move(l), std::move(r));
            }
        }
        throw InternalError("active: bad op");
    }
};

}  // namespace

ColoringStream::ColoringStream(FormulaPtr phi) : phi_(std::move(phi)) {
    internal_check(phi_ != nullptr, "ColoringStream: null formula");
}

std::optional<ColoredPtr> ColoringStream::next() {
    if (done_) return std::nullopt;
    ColoringBuilder b{choices_, {}, 0};
    ColoredPtr out = b.active(phi_);
    choices_ = std::move(b.used);
    // Odometer: flip the last left choice to right and drop everything after
    // it; the dropped tail may belong to a different set of choice points.
    std::size_t i = choices_.size();
    while (i > 0 && choices_[i - 1]) --i;
    if (i == 0) {
        done_ = true;
    } else {
        choices_[i - 1] = true;
        choices_.resize(i);
    }
    return out;
}

std::vector<ColoredPtr> proper_colorings(const FormulaPtr& phi) {
    std::vector<ColoredPtr> out;
    ColoringStream s(phi);
    while (auto c = s.next()) out.push_back(*c);
    return out;
}

std::string render_colored(const ColoredPtr& f) {
    const char* m = f->mark() == Mark::Active ? "^o" : "^x";
    switch (f->op()) {
        case Op::Atom:
            return f->name() + m;
        case Op::NegAtom:
            return "~" + f->name() + m;
        case Op::Or:
            return "(" + render_colored(f->lhs()) + " | " + render_colored(f->rhs()) + ")" + m;
        case Op::And:
            return "(" + render_colored(f->lhs()) + " & " + render_colored(f->rhs()) + ")" + m;
        case Op::Box:
            return "[" + f->name() + "]" + render_colored(f->lhs()) + m;
        case Op::Diamond:
            return "<" + f->name() + ">" + render_colored(f->lhs()) + m;
    }
    throw InternalError("render_colored: bad op");
}

}  // namespace spl
