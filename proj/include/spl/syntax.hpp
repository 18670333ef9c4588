#pragma once

// Formula AST, concrete syntax, and input normalization for the propositional
// standpoint language. Formulas are immutable, in negation normal form by
// construction (negation is a literal former, not a connective), and shared
// via shared_ptr. Structural equality with a cached hash; no interning table,
// values stay pure and thread-compatible.

#include <cstddef>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "spl/errors.hpp"

namespace spl {

inline const std::string kUniversal = "*";

enum class Op : unsigned char { Atom, NegAtom, Or, And, Box, Diamond };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
    static FormulaPtr atom(std::string name);
    static FormulaPtr neg_atom(std::string name);
    static FormulaPtr disj(FormulaPtr lhs, FormulaPtr rhs);
    static FormulaPtr conj(FormulaPtr lhs, FormulaPtr rhs);
    static FormulaPtr box(std::string standpoint, FormulaPtr sub);
    static FormulaPtr dia(std::string standpoint, FormulaPtr sub);

    Op op() const { return op_; }
    // Atom/NegAtom: the proposition. Box/Diamond: the standpoint. Else empty.
    const std::string& name() const { return name_; }
    const FormulaPtr& lhs() const { return lhs_; }  // modal subformula lives here
    const FormulaPtr& rhs() const { return rhs_; }
    std::size_t hash() const { return hash_; }

    bool is_literal() const { return op_ == Op::Atom || op_ == Op::NegAtom; }
    bool is_modal() const { return op_ == Op::Box || op_ == Op::Diamond; }

private:
    Formula(Op op, std::string name, FormulaPtr lhs, FormulaPtr rhs);

    Op op_;
    std::string name_;
    FormulaPtr lhs_;
    FormulaPtr rhs_;
    std::size_t hash_;
};

bool equal(const Formula& a, const Formula& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

struct FormulaPtrHash {
    std::size_t operator()(const FormulaPtr& f) const { return f->hash(); }
};
struct FormulaPtrEq {
    bool operator()(const FormulaPtr& a, const FormulaPtr& b) const { return equal(a, b); }
};
using FormulaSet = std::unordered_set<FormulaPtr, FormulaPtrHash, FormulaPtrEq>;

// Reserved proposition spelling falsum/verum. The name is outside the
// identifier grammar, so user input can never mention it; evaluation treats it
// as false everywhere.
const std::string& reserved_false_atom();
FormulaPtr falsum();
FormulaPtr verum();

struct Vocabulary {
    std::vector<std::string> propositions;  // first-occurrence order, unique
    std::vector<std::string> standpoints;   // first-occurrence order, unique, "*" last

    bool has_proposition(const std::string& p) const;
    bool has_standpoint(const std::string& s) const;
};

struct Sharpening {
    std::string sharper;  // s in "s <= s'"
    std::string broader;  // s'

    friend bool operator==(const Sharpening&, const Sharpening&) = default;
};

struct SequentInput {
    std::vector<Sharpening> gamma;  // statement order preserved, duplicate-free
    FormulaPtr goal;
    Vocabulary vocab;
};

// Text forms accepted: "gamma |- formula", "|- formula", or a bare formula.
// Identifiers are [A-Za-z][A-Za-z0-9_']*; "&" binds tighter than "|", both
// left-associative; "~" applies to atoms only; "[s]" / "<s>" / "[*]" / "<*>".
SequentInput parse_implication(const std::string& text);

FormulaPtr negate_nnf(const FormulaPtr& f);

// Deduplicated set of subformulae of f, including f itself.
FormulaSet subformulae(const FormulaPtr& f);
// |f| is the number of distinct subformulae.
int formula_size(const FormulaPtr& f);

std::string render_formula(const FormulaPtr& f);  // minimal parens, reparses equal
std::string render_sharpening(const Sharpening& st);
std::string render_input(const SequentInput& input);

Vocabulary infer_vocabulary(const std::vector<Sharpening>& gamma, const FormulaPtr& goal);

// Collapses sharpening cycles onto one representative (lexicographically
// greatest, or "*" when present), drops self and duplicate statements, drops
// "s <= *", and rewrites "* <= s" by identifying s with "*". Repeats to a
// fixpoint, then re-infers the vocabulary. Idempotent; preserves validity.
SequentInput normalize_input(const SequentInput& input);

}  // namespace spl
