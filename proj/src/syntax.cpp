#include "spl/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <utility>

namespace spl {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula::Formula(Op op, std::string name, FormulaPtr lhs, FormulaPtr rhs)
    : op_(op), name_(std::move(name)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
    std::size_t h = hash_combine(0x51ed270b, static_cast<std::size_t>(op_));
    h = hash_combine(h, std::hash<std::string>{}(name_));
    if (lhs_) h = hash_combine(h, lhs_->hash());
    if (rhs_) h = hash_combine(h, rhs_->hash());
    hash_ = h;
}

FormulaPtr Formula::atom(std::string name) {
    return FormulaPtr(new Formula(Op::Atom, std::move(name), nullptr, nullptr));
}

FormulaPtr Formula::neg_atom(std::string name) {
    return FormulaPtr(new Formula(Op::NegAtom, std::move(name), nullptr, nullptr));
}

FormulaPtr Formula::disj(FormulaPtr lhs, FormulaPtr rhs) {
    internal_check(lhs && rhs, "disj: null child");
    return FormulaPtr(new Formula(Op::Or, "", std::move(lhs), std::move(rhs)));
}

FormulaPtr Formula::conj(FormulaPtr lhs, FormulaPtr rhs) {
    internal_check(lhs && rhs, "conj: null child");
    return FormulaPtr(new Formula(Op::And, "", std::move(lhs), std::move(rhs)));
}

FormulaPtr Formula::box(std::string standpoint, FormulaPtr sub) {
    internal_check(sub != nullptr, "box: null child");
    return FormulaPtr(new Formula(Op::Box, std::move(standpoint), std::move(sub), nullptr));
}

FormulaPtr Formula::dia(std::string standpoint, FormulaPtr sub) {
    internal_check(sub != nullptr, "dia: null child");
    return FormulaPtr(new Formula(Op::Diamond, std::move(standpoint), std::move(sub), nullptr));
}

bool equal(const Formula& a, const Formula& b) {
    if (&a == &b) return true;
    if (a.hash() != b.hash()) return false;
    if (a.op() != b.op() || a.name() != b.name()) return false;
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

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return equal(*a, *b);
}

const std::string& reserved_false_atom() {
    static const std::string name = "_bot";  // leading '_' is unlexable, so unreachable from input
    return name;
}

FormulaPtr falsum() {
    return Formula::conj(Formula::atom(reserved_false_atom()),
                         Formula::neg_atom(reserved_false_atom()));
}

FormulaPtr verum() {
    return Formula::disj(Formula::atom(reserved_false_atom()),
                         Formula::neg_atom(reserved_false_atom()));
}

bool Vocabulary::has_proposition(const std::string& p) const {
    return std::find(propositions.begin(), propositions.end(), p) != propositions.end();
}

bool Vocabulary::has_standpoint(const std::string& s) const {
    return std::find(standpoints.begin(), standpoints.end(), s) != standpoints.end();
}

// ── Lexer / parser ──────────────────────────────────────────────────────────

namespace {

enum class Tok {
    Ident, Star, Tilde, Amp, Bar, LParen, RParen, LBrack, RBrack,
    LAngle, RAngle, Comma, Turnstile, SharpLe, End
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Star: return "'*'";
        case Tok::Tilde: return "'~'";
        case Tok::Amp: return "'&'";
        case Tok::Bar: return "'|'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrack: return "'['";
        case Tok::RBrack: return "']'";
        case Tok::LAngle: return "'<'";
        case Tok::RAngle: return "'>'";
        case Tok::Comma: return "','";
        case Tok::Turnstile: return "'|-'";
        case Tok::SharpLe: return "'<='";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string text, int c) {
        out.push_back(Token{k, std::move(text), line, c});
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        int start_col = col;
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) {
                ++j;
            }
            push(Tok::Ident, s.substr(i, j - i), start_col);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        auto two = [&](char second) { return i + 1 < s.size() && s[i + 1] == second; };
        switch (c) {
            case '*': push(Tok::Star, "*", start_col); break;
            case '~': push(Tok::Tilde, "~", start_col); break;
            case '&': push(Tok::Amp, "&", start_col); break;
            case '(': push(Tok::LParen, "(", start_col); break;
            case ')': push(Tok::RParen, ")", start_col); break;
            case '[': push(Tok::LBrack, "[", start_col); break;
            case ']': push(Tok::RBrack, "]", start_col); break;
            case ',': push(Tok::Comma, ",", start_col); break;
            case '>': push(Tok::RAngle, ">", start_col); break;
            case '|':
                if (two('-')) {
                    push(Tok::Turnstile, "|-", start_col);
                    ++i;
                    ++col;
                } else {
                    push(Tok::Bar, "|", start_col);
                }
                break;
            case '<':
                if (two('=')) {
                    push(Tok::SharpLe, "<=", start_col);
                    ++i;
                    ++col;
                } else {
                    push(Tok::LAngle, "<", start_col);
                }
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line, start_col);
        }
        ++i;
        ++col;
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

    SequentInput parse_input() {
        std::vector<Sharpening> gamma;
        if (peek(0).kind == Tok::Turnstile) {
            get();
        } else if ((peek(0).kind == Tok::Ident || peek(0).kind == Tok::Star) &&
                   peek(1).kind == Tok::SharpLe) {
            gamma = parse_gamma();
            expect(Tok::Turnstile);
        }
        FormulaPtr goal = parse_or();
        const Token& t = peek(0);
        if (t.kind != Tok::End) {
            fail(std::string("unexpected ") + tok_name(t.kind) + " after formula", t);
        }
        SequentInput input;
        input.gamma = std::move(gamma);
        input.goal = std::move(goal);
        input.vocab = infer_vocabulary(input.gamma, input.goal);
        return input;
    }

private:
    const Token& peek(std::size_t k) const {
        std::size_t i = pos_ + k;
        if (i >= toks_.size()) i = toks_.size() - 1;
        return toks_[i];
    }

    Token get() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    Token expect(Tok k) {
        const Token& t = peek(0);
        if (t.kind != k) {
            fail(std::string("expected ") + tok_name(k) + ", found " + tok_name(t.kind), t);
        }
        return get();
    }

    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        throw ParseError(msg, at.line, at.col);
    }

    std::string parse_standpoint_name() {
        const Token& t = peek(0);
        if (t.kind == Tok::Star) {
            get();
            return kUniversal;
        }
        if (t.kind == Tok::Ident) return get().text;
        fail(std::string("expected standpoint name, found ") + tok_name(t.kind), t);
    }

    std::vector<Sharpening> parse_gamma() {
        std::vector<Sharpening> gamma;
        for (;;) {
            std::string sharper = parse_standpoint_name();
            expect(Tok::SharpLe);
            std::string broader = parse_standpoint_name();
            Sharpening st{std::move(sharper), std::move(broader)};
            if (std::find(gamma.begin(), gamma.end(), st) == gamma.end()) {
                gamma.push_back(std::move(st));
            }
            if (peek(0).kind != Tok::Comma) break;
            get();
        }
        return gamma;
    }

    /* or := and ('|' and)* */
    FormulaPtr parse_or() {
        FormulaPtr f = parse_and();
        while (peek(0).kind == Tok::Bar) {
            get();
            f = Formula::disj(std::move(f), parse_and());
        }
        return f;
    }

    /* and := unary ('&' unary)* */
    FormulaPtr parse_and() {
        FormulaPtr f = parse_unary();
        while (peek(0).kind == Tok::Amp) {
            get();
            f = Formula::conj(std::move(f), parse_unary());
        }
        return f;
    }

    /* unary := '~' atom | atom | '[' sp ']' unary | '<' sp '>' unary | '(' or ')' */
    FormulaPtr parse_unary() {
        const Token& t = peek(0);
        switch (t.kind) {
            case Tok::Tilde: {
                get();
                const Token& a = peek(0);
                if (a.kind == Tok::Star) {
                    fail("reserved name '*' cannot be used as a proposition", a);
                }
                if (a.kind != Tok::Ident) {
                    fail(std::string("'~' applies to propositions only, found ") + tok_name(a.kind), a);
                }
                return Formula::neg_atom(get().text);
            }
            case Tok::Ident:
                return Formula::atom(get().text);
            case Tok::Star:
                fail("reserved name '*' cannot be used as a proposition", t);
            case Tok::LBrack: {
                get();
                std::string sp = parse_standpoint_name();
                expect(Tok::RBrack);
                return Formula::box(std::move(sp), parse_unary());
            }
            case Tok::LAngle: {
                get();
                std::string sp = parse_standpoint_name();
                expect(Tok::RAngle);
                return Formula::dia(std::move(sp), parse_unary());
            }
            case Tok::LParen: {
                get();
                FormulaPtr f = parse_or();
                expect(Tok::RParen);
                return f;
            }
            default:
                fail(std::string("expected formula, found ") + tok_name(t.kind), t);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

SequentInput parse_implication(const std::string& text) {
    return Parser(text).parse_input();
}

Vocabulary infer_vocabulary(const std::vector<Sharpening>& gamma, const FormulaPtr& goal) {
    Vocabulary v;
    auto add_sp = [&](const std::string& s) {
        if (s != kUniversal && !v.has_standpoint(s)) v.standpoints.push_back(s);
    };
    auto add_prop = [&](const std::string& p) {
        if (!v.has_proposition(p)) v.propositions.push_back(p);
    };
    for (const Sharpening& st : gamma) {
        add_sp(st.sharper);
        add_sp(st.broader);
    }
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
        switch (f->op()) {
            case Op::Atom:
            case Op::NegAtom:
                add_prop(f->name());
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
    if (goal) walk(goal);
    v.standpoints.push_back(kUniversal);
    return v;
}

FormulaPtr negate_nnf(const FormulaPtr& f) {
    switch (f->op()) {
        case Op::Atom:
            return Formula::neg_atom(f->name());
        case Op::NegAtom:
            return Formula::atom(f->name());
        case Op::Or:
            return Formula::conj(negate_nnf(f->lhs()), negate_nnf(f->rhs()));
        case Op::And:
            return Formula::disj(negate_nnf(f->lhs()), negate_nnf(f->rhs()));
        case Op::Box:
            return Formula::dia(f->name(), negate_nnf(f->lhs()));
        case Op::Diamond:
            return Formula::box(f->name(), negate_nnf(f->lhs()));
    }
    throw InternalError("negate_nnf: bad op");
}

namespace {

void collect_subformulae(const FormulaPtr& f, FormulaSet& out) {
    if (!out.insert(f).second) return;
    switch (f->op()) {
        case Op::Atom:
        case Op::NegAtom:
            break;
        case Op::Box:
        case Op::Diamond:
            collect_subformulae(f->lhs(), out);
            break;
        case Op::Or:
        case Op::And:
            collect_subformulae(f->lhs(), out);
            collect_subformulae(f->rhs(), out);
            break;
    }
}

}  // namespace

FormulaSet subformulae(const FormulaPtr& f) {
    FormulaSet out;
    collect_subformulae(f, out);
    return out;
}

int formula_size(const FormulaPtr& f) {
    return static_cast<int>(subformulae(f).size());
}

// ── Rendering ───────────────────────────────────────────────────────────────

namespace {

int precedence(Op op) {
    switch (op) {
        case Op::Or: return 1;
        case Op::And: return 2;
        default: return 3;
    }
}

void render(const Formula& f, int min_prec, std::string& out) {
    int p = precedence(f.op());
    bool parens = p < min_prec;
    if (parens) out += '(';
    switch (f.op()) {
        case Op::Atom:
            out += f.name();
            break;
        case Op::NegAtom:
            out += '~';
            out += f.name();
            break;
        case Op::Or:
            render(*f.lhs(), 1, out);
            out += " | ";
            render(*f.rhs(), 2, out);
            break;
        case Op::And:
            render(*f.lhs(), 2, out);
            out += " & ";
            render(*f.rhs(), 3, out);
            break;
        case Op::Box:
            out += '[';
            out += f.name();
            out += ']';
            render(*f.lhs(), 3, out);
            break;
        case Op::Diamond:
            out += '<';
            out += f.name();
            out += '>';
            render(*f.lhs(), 3, out);
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string render_formula(const FormulaPtr& f) {
    std::string out;
    render(*f, 1, out);
    return out;
}

std::string render_sharpening(const Sharpening& st) {
    return st.sharper + " <= " + st.broader;
}

std::string render_input(const SequentInput& input) {
    std::string out;
    for (std::size_t i = 0; i < input.gamma.size(); ++i) {
        if (i > 0) out += ", ";
        out += render_sharpening(input.gamma[i]);
    }
    if (!input.gamma.empty()) out += ' ';
    out += "|- ";
    out += render_formula(input.goal);
    return out;
}

// ── Normalization ───────────────────────────────────────────────────────────

namespace {

std::string map_name(const std::map<std::string, std::string>& m, const std::string& n) {
    auto it = m.find(n);
    return it == m.end() ? n : it->second;
}

FormulaPtr rename_standpoints(const FormulaPtr& f, const std::map<std::string, std::string>& m) {
    switch (f->op()) {
        case Op::Atom:
        case Op::NegAtom:
            return f;
        case Op::Box: {
            FormulaPtr sub = rename_standpoints(f->lhs(), m);
            std::string n = map_name(m, f->name());
            if (sub == f->lhs() && n == f->name()) return f;
            return Formula::box(std::move(n), std::move(sub));
        }
        case Op::Diamond: {
            FormulaPtr sub = rename_standpoints(f->lhs(), m);
            std::string n = map_name(m, f->name());
            if (sub == f->lhs() && n == f->name()) return f;
            return Formula::dia(std::move(n), std::move(sub));
        }
        case Op::Or: {
            FormulaPtr l = rename_standpoints(f->lhs(), m);
            FormulaPtr r = rename_standpoints(f->rhs(), m);
            if (l == f->lhs() && r == f->rhs()) return f;
            return Formula::disj(std::move(l), std::move(r));
        }
        case Op::And: {
            FormulaPtr l = rename_standpoints(f->lhs(), m);
            FormulaPtr r = rename_standpoints(f->rhs(), m);
            if (l == f->lhs() && r == f->rhs()) return f;
            return Formula::conj(std::move(l), std::move(r));
        }
    }
    throw InternalError("rename_standpoints: bad op");
}

void apply_rename(std::vector<Sharpening>& gamma, FormulaPtr& goal,
                  const std::map<std::string, std::string>& m) {
    for (Sharpening& st : gamma) {
        st.sharper = map_name(m, st.sharper);
        st.broader = map_name(m, st.broader);
    }
    goal = rename_standpoints(goal, m);
}

// Mutually reachable names in the gamma digraph collapse onto one
// representative: "*" when the cycle touches it, else the lexicographically
// greatest member.
std::map<std::string, std::string> cycle_collapse_map(const std::vector<Sharpening>& gamma) {
    std::vector<std::string> names;
    auto idx_of = [&](const std::string& n) {
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) {
            names.push_back(n);
            return names.size() - 1;
        }
        return static_cast<std::size_t>(it - names.begin());
    };
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const Sharpening& st : gamma) {
        edges.emplace_back(idx_of(st.sharper), idx_of(st.broader));
    }
    std::size_t n = names.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (auto [a, b] : edges) reach[a][b] = true;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[k][j]) reach[i][j] = true;
            }
        }
    }
    std::map<std::string, std::string> rename;
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::vector<std::size_t> part{i};
        for (std::size_t j = i + 1; j < n; ++j) {
            if (reach[i][j] && reach[j][i]) part.push_back(j);
        }
        if (part.size() < 2) continue;
        std::string rep = names[part[0]];
        bool has_star = false;
        for (std::size_t j : part) {
            if (names[j] == kUniversal) has_star = true;
            if (names[j] > rep) rep = names[j];
        }
        if (has_star) rep = kUniversal;
        for (std::size_t j : part) {
            done[j] = true;
            if (names[j] != rep) rename[names[j]] = rep;
        }
    }
    return rename;
}

}  // namespace

SequentInput normalize_input(const SequentInput& input) {
    std::vector<Sharpening> gamma = input.gamma;
    FormulaPtr goal = input.goal;
    for (;;) {
        bool changed = false;

        std::map<std::string, std::string> collapse = cycle_collapse_map(gamma);
        if (!collapse.empty()) {
            apply_rename(gamma, goal, collapse);
            changed = true;
        }

        std::vector<Sharpening> kept;
        for (const Sharpening& st : gamma) {
            if (st.sharper == st.broader) continue;
            if (st.broader == kUniversal) continue;
            if (std::find(kept.begin(), kept.end(), st) != kept.end()) continue;
            kept.push_back(st);
        }
        if (kept.size() != gamma.size()) changed = true;
        gamma = std::move(kept);

        std::map<std::string, std::string> to_star;
        for (const Sharpening& st : gamma) {
            if (st.sharper == kUniversal) to_star[st.broader] = kUniversal;
        }
        if (!to_star.empty()) {
            apply_rename(gamma, goal, to_star);
            std::erase_if(gamma, [](const Sharpening& st) { return st.sharper == st.broader; });
            changed = true;
        }

        if (!changed) break;
    }
    SequentInput out;
    out.gamma = std::move(gamma);
    out.goal = std::move(goal);
    out.vocab = infer_vocabulary(out.gamma, out.goal);
    return out;
}

}  // namespace spl
