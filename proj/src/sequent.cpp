#include "spl/sequent.hpp"

#include <algorithm>
#include <cctype>

namespace spl {

SharpeningClosure::SharpeningClosure(const std::vector<Sharpening>& gamma, const Vocabulary& vocab) {
    names_ = vocab.standpoints;
    if (names_.empty() || names_.back() != kUniversal) {
        // Keep "*" queryable even for vocabularies built by hand.
        if (std::find(names_.begin(), names_.end(), kUniversal) == names_.end()) {
            names_.push_back(kUniversal);
        }
    }
    auto idx = [&](const std::string& n) -> int {
        auto it = std::find(names_.begin(), names_.end(), n);
        return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
    };
    std::size_t n = names_.size();
    mat_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) mat_[i][i] = true;
    std::size_t star = static_cast<std::size_t>(idx(kUniversal));
    for (std::size_t i = 0; i < n; ++i) mat_[i][star] = true;
    for (const Sharpening& st : gamma) {
        int a = idx(st.sharper);
        int b = idx(st.broader);
        if (a < 0 || b < 0) {
            throw InputError("sharpening statement over undeclared standpoint: " +
                             render_sharpening(st));
        }
        mat_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!mat_[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (mat_[k][j]) mat_[i][j] = true;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (mat_[i][j]) pairs_.emplace_back(names_[i], names_[j]);
        }
    }
}

bool SharpeningClosure::holds(const std::string& sharper, const std::string& broader) const {
    if (sharper == broader) return true;
    if (broader == kUniversal) return true;
    auto it_a = std::find(names_.begin(), names_.end(), sharper);
    auto it_b = std::find(names_.begin(), names_.end(), broader);
    if (it_a == names_.end() || it_b == names_.end()) return false;
    return mat_[static_cast<std::size_t>(it_a - names_.begin())]
               [static_cast<std::size_t>(it_b - names_.begin())];
}

SharpeningClosure sharpening_closure(const std::vector<Sharpening>& gamma, const Vocabulary& vocab) {
    return SharpeningClosure(gamma, vocab);
}

bool contains(const std::vector<ColoredPtr>& component, const ColoredPtr& f) {
    for (const ColoredPtr& g : component) {
        if (equal(g, f)) return true;
    }
    return false;
}

bool contains(const std::vector<FormulaPtr>& component, const FormulaPtr& f) {
    for (const FormulaPtr& g : component) {
        if (equal(g, f)) return true;
    }
    return false;
}

PlainSequent erase_sequent(const ColoredSequent& seq) {
    PlainSequent out;
    out.gamma = seq.gamma;
    out.next_label = seq.next_label;
    out.root.reserve(seq.root.size());
    for (const ColoredPtr& f : seq.root) out.root.push_back(erase(f));
    out.nestings.reserve(seq.nestings.size());
    for (const auto& nest : seq.nestings) {
        NestingT<FormulaPtr> plain;
        plain.standpoint = nest.standpoint;
        plain.label = nest.label;
        plain.formulas.reserve(nest.formulas.size());
        for (const ColoredPtr& f : nest.formulas) plain.formulas.push_back(erase(f));
        out.nestings.push_back(std::move(plain));
    }
    return out;
}

namespace {

template <class F>
bool equal_sequents_impl(const SequentT<F>& a, const SequentT<F>& b) {
    if (a.gamma != b.gamma) return false;
    if (a.root.size() != b.root.size() || a.nestings.size() != b.nestings.size()) return false;
    for (std::size_t i = 0; i < a.root.size(); ++i) {
        if (!equal(a.root[i], b.root[i])) return false;
    }
    for (std::size_t j = 0; j < a.nestings.size(); ++j) {
        const auto& x = a.nestings[j];
        const auto& y = b.nestings[j];
        if (x.standpoint != y.standpoint || x.label != y.label) return false;
        if (x.formulas.size() != y.formulas.size()) return false;
        for (std::size_t i = 0; i < x.formulas.size(); ++i) {
            if (!equal(x.formulas[i], y.formulas[i])) return false;
        }
    }
    return true;
}

}  // namespace

bool equal_sequents(const PlainSequent& a, const PlainSequent& b) {
    return equal_sequents_impl(a, b);
}

bool equal_sequents(const ColoredSequent& a, const ColoredSequent& b) {
    return equal_sequents_impl(a, b);
}

ColoredSequent initial_sequent(const SequentInput& input, const ColoredPtr& colored_goal) {
    internal_check(colored_goal != nullptr, "initial_sequent: null coloring");
    internal_check(equal(erase(colored_goal), input.goal),
                   "initial_sequent: coloring does not erase to the goal");
    ColoredSequent seq;
    seq.gamma = input.gamma;
    seq.root.push_back(colored_goal);
    seq.next_label = 1;
    return seq;
}

int fresh_label(const ColoredSequent& seq) {
    return seq.next_label;
}

std::string render_label(int label) {
    return "pi" + std::to_string(label);
}

namespace {

template <class F, class RenderFn>
std::string render_sequent_impl(const SequentT<F>& seq, RenderFn&& render_one) {
    std::string out;
    for (std::size_t i = 0; i < seq.gamma.size(); ++i) {
        if (i > 0) out += ", ";
        out += render_sharpening(seq.gamma[i]);
    }
    if (!seq.gamma.empty()) out += ' ';
    out += "|- ";
    bool first = true;
    auto sep = [&] {
        if (!first) out += ", ";
        first = false;
    };
    for (const F& f : seq.root) {
        sep();
        out += render_one(f);
    }
    for (const auto& nest : seq.nestings) {
        sep();
        out += '(';
        out += nest.standpoint;
        out += ")[";
        for (std::size_t i = 0; i < nest.formulas.size(); ++i) {
            if (i > 0) out += ", ";
            out += render_one(nest.formulas[i]);
        }
        out += "]@";
        out += render_label(nest.label);
    }
    return out;
}

}  // namespace

std::string render_sequent(const PlainSequent& seq) {
    return render_sequent_impl(seq, [](const FormulaPtr& f) { return render_formula(f); });
}

std::string render_sequent(const ColoredSequent& seq, bool show_marks) {
    if (show_marks) {
        return render_sequent_impl(seq, [](const ColoredPtr& f) { return render_colored(f); });
    }
    return render_sequent_impl(seq, [](const ColoredPtr& f) { return render_formula(erase(f)); });
}

// ── Parse-back ──────────────────────────────────────────────────────────────

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Splits at top level commas; '[' ... ']' brackets nest the only commas that
// must be skipped (formulas contain none).
std::vector<std::string> split_components(const std::string& s) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    std::string last = trim(cur);
    if (!last.empty()) parts.push_back(std::move(last));
    return parts;
}

FormulaPtr parse_bare_formula(const std::string& text) {
    SequentInput in = parse_implication(text);
    if (!in.gamma.empty()) {
        throw ParseError("expected a formula, found an antecedent", 1, 1);
    }
    return in.goal;
}

NestingT<FormulaPtr> parse_nesting(const std::string& piece) {
    // (s)[f1, f2]@piN
    std::size_t close = piece.find(')');
    if (piece.empty() || piece[0] != '(' || close == std::string::npos) {
        throw ParseError("malformed nesting: " + piece, 1, 1);
    }
    NestingT<FormulaPtr> nest;
    nest.standpoint = trim(piece.substr(1, close - 1));
    if (nest.standpoint.empty()) throw ParseError("empty nesting annotation", 1, 1);
    std::size_t open_b = piece.find('[', close);
    std::size_t close_b = piece.rfind(']');
    if (open_b == std::string::npos || close_b == std::string::npos || close_b < open_b) {
        throw ParseError("malformed nesting body: " + piece, 1, 1);
    }
    std::string body = piece.substr(open_b + 1, close_b - open_b - 1);
    for (const std::string& part : split_components(body)) {
        nest.formulas.push_back(parse_bare_formula(part));
    }
    std::string tail = trim(piece.substr(close_b + 1));
    if (tail.size() < 4 || tail[0] != '@' || tail.compare(1, 2, "pi") != 0) {
        throw ParseError("malformed nesting label: " + piece, 1, 1);
    }
    nest.label = std::stoi(tail.substr(3));
    if (nest.label <= 0) throw ParseError("nesting label must be positive: " + piece, 1, 1);
    return nest;
}

}  // namespace

PlainSequent parse_sequent(const std::string& text) {
    std::size_t turn = text.find("|-");
    if (turn == std::string::npos) {
        throw ParseError("sequent is missing '|-'", 1, 1);
    }
    PlainSequent seq;
    std::string before = trim(text.substr(0, turn));
    if (!before.empty()) {
        for (const std::string& part : split_components(before)) {
            // Reuse the antecedent grammar by parsing "part |- p".
            SequentInput st = parse_implication(part + " |- p");
            if (st.gamma.size() != 1) {
                throw ParseError("malformed sharpening statement: " + part, 1, 1);
            }
            seq.gamma.push_back(st.gamma[0]);
        }
    }
    int max_label = 0;
    for (const std::string& piece : split_components(trim(text.substr(turn + 2)))) {
        bool is_nesting = false;
        if (!piece.empty() && piece[0] == '(') {
            std::size_t close = piece.find(')');
            if (close != std::string::npos && close + 1 < piece.size() && piece[close + 1] == '[') {
                is_nesting = true;
            }
        }
        if (is_nesting) {
            NestingT<FormulaPtr> nest = parse_nesting(piece);
            max_label = std::max(max_label, nest.label);
            seq.nestings.push_back(std::move(nest));
        } else {
            if (!seq.nestings.empty()) {
                throw ParseError("root formula after a nesting: " + piece, 1, 1);
            }
            seq.root.push_back(parse_bare_formula(piece));
        }
    }
    seq.next_label = max_label + 1;
    return seq;
}

}  // namespace spl
