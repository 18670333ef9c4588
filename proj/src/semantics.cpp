#include "spl/semantics.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>

namespace spl {

void check_model_wellformed(const StandpointModel& m, bool allow_empty_sigma) {
    if (m.precisifications.empty()) {
        throw InputError("model has no precisifications");
    }
    std::set<std::string> pis(m.precisifications.begin(), m.precisifications.end());
    if (pis.size() != m.precisifications.size()) {
        throw InputError("duplicate precisification names");
    }
    auto it = m.sigma.find(kUniversal);
    if (it == m.sigma.end() || it->second != pis) {
        throw InputError("sigma(*) must be the full precisification set");
    }
    for (const auto& [s, set] : m.sigma) {
        if (!allow_empty_sigma && set.empty()) {
            throw InputError("sigma(" + s + ") is empty");
        }
        for (const std::string& pi : set) {
            if (!pis.count(pi)) throw InputError("sigma(" + s + ") mentions unknown " + pi);
        }
    }
    for (const auto& [p, set] : m.delta) {
        for (const std::string& pi : set) {
            if (!pis.count(pi)) throw InputError("delta(" + p + ") mentions unknown " + pi);
        }
    }
}

// ── Compiled evaluation core ────────────────────────────────────────────────
//
// Both the public evaluator and the oracle run over the same compiled form:
// formulas flattened to nodes with integer ids, models as bitmasks over
// precisification indices. Precisification counts stay tiny (the oracle
// refuses anything past 64), so masks are single words.

namespace {

struct CompiledNode {
    Op op;
    int id = -1;  // proposition id or standpoint id
    int lhs = -1;
    int rhs = -1;
};

struct Compiled {
    std::vector<CompiledNode> nodes;
    int root = -1;
};

struct DenseModel {
    int n = 0;
    std::uint64_t all = 0;
    std::vector<std::uint64_t> sigma;  // by standpoint id
    std::vector<std::uint64_t> delta;  // by proposition id
};

struct NameIds {
    std::vector<std::string> names;

    int find(const std::string& n) const {
        auto it = std::find(names.begin(), names.end(), n);
        return it == names.end() ? -1 : static_cast<int>(it - names.begin());
    }
    int add(const std::string& n) {
        int i = find(n);
        if (i >= 0) return i;
        names.push_back(n);
        return static_cast<int>(names.size()) - 1;
    }
};

int compile_into(const FormulaPtr& f, const NameIds& props, const NameIds& sps, int false_id,
                 Compiled& out) {
    CompiledNode node;
    node.op = f->op();
    switch (f->op()) {
        case Op::Atom:
        case Op::NegAtom: {
            int id = props.find(f->name());
            if (id < 0) {
                if (f->name() == reserved_false_atom()) {
                    id = false_id;
                } else {
                    throw InputError("proposition outside the model's valuation: " + f->name());
                }
            }
            node.id = id;
            break;
        }
        case Op::Box:
        case Op::Diamond: {
            int id = sps.find(f->name());
            if (id < 0) throw InputError("standpoint outside the model: " + f->name());
            node.id = id;
            node.lhs = compile_into(f->lhs(), props, sps, false_id, out);
            break;
        }
        case Op::Or:
        case Op::And:
            node.lhs = compile_into(f->lhs(), props, sps, false_id, out);
            node.rhs = compile_into(f->rhs(), props, sps, false_id, out);
            break;
    }
    out.nodes.push_back(node);
    return static_cast<int>(out.nodes.size()) - 1;
}

bool eval_node(const DenseModel& m, const Compiled& c, int node, int pi) {
    const CompiledNode& nd = c.nodes[static_cast<std::size_t>(node)];
    switch (nd.op) {
        case Op::Atom:
            return (m.delta[static_cast<std::size_t>(nd.id)] >> pi) & 1u;
        case Op::NegAtom:
            return !((m.delta[static_cast<std::size_t>(nd.id)] >> pi) & 1u);
        case Op::Or:
            return eval_node(m, c, nd.lhs, pi) || eval_node(m, c, nd.rhs, pi);
        case Op::And:
            return eval_node(m, c, nd.lhs, pi) && eval_node(m, c, nd.rhs, pi);
        case Op::Box: {
            std::uint64_t dom = m.sigma[static_cast<std::size_t>(nd.id)];
            for (int q = 0; q < m.n; ++q) {
                if (((dom >> q) & 1u) && !eval_node(m, c, nd.lhs, q)) return false;
            }
            return true;
        }
        case Op::Diamond: {
            std::uint64_t dom = m.sigma[static_cast<std::size_t>(nd.id)];
            for (int q = 0; q < m.n; ++q) {
                if (((dom >> q) & 1u) && eval_node(m, c, nd.lhs, q)) return true;
            }
            return false;
        }
    }
    throw InternalError("eval_node: bad op");
}

// Conversion of a public model into the dense form, with name tables taken
// from the model itself.
struct DenseView {
    DenseModel dense;
    NameIds props;
    NameIds sps;
    int false_id = -1;

    explicit DenseView(const StandpointModel& m) {
        dense.n = static_cast<int>(m.precisifications.size());
        if (dense.n > 64) throw InputError("model too large to evaluate (over 64 points)");
        dense.all = dense.n == 64 ? ~0ull : ((1ull << dense.n) - 1);
        auto pi_index = [&](const std::string& pi) {
            auto it = std::find(m.precisifications.begin(), m.precisifications.end(), pi);
            if (it == m.precisifications.end()) {
                throw InputError("unknown precisification: " + pi);
            }
            return static_cast<int>(it - m.precisifications.begin());
        };
        for (const auto& [s, set] : m.sigma) {
            std::uint64_t mask = 0;
            for (const std::string& pi : set) mask |= 1ull << pi_index(pi);
            sps.add(s);
            dense.sigma.push_back(mask);
        }
        for (const auto& [p, set] : m.delta) {
            std::uint64_t mask = 0;
            for (const std::string& pi : set) mask |= 1ull << pi_index(pi);
            props.add(p);
            dense.delta.push_back(mask);
        }
        false_id = static_cast<int>(dense.delta.size());
        dense.delta.push_back(0);  // the reserved atom holds nowhere
    }
};

}  // namespace

bool sharpenings_hold(const StandpointModel& m, const std::vector<Sharpening>& gamma) {
    for (const Sharpening& st : gamma) {
        auto a = m.sigma.find(st.sharper);
        auto b = m.sigma.find(st.broader);
        if (a == m.sigma.end() || b == m.sigma.end()) {
            throw InputError("sharpening statement over standpoint outside the model: " +
                             render_sharpening(st));
        }
        if (!std::includes(b->second.begin(), b->second.end(), a->second.begin(),
                           a->second.end())) {
            return false;
        }
    }
    return true;
}

bool eval(const StandpointModel& m, const std::string& pi, const FormulaPtr& f) {
    DenseView view(m);
    auto it = std::find(m.precisifications.begin(), m.precisifications.end(), pi);
    if (it == m.precisifications.end()) {
        throw InputError("unknown precisification: " + pi);
    }
    Compiled c;
    c.root = compile_into(f, view.props, view.sps, view.false_id, c);
    return eval_node(view.dense, c, c.root,
                     static_cast<int>(it - m.precisifications.begin()));
}

bool eval_implication(const StandpointModel& m, const std::string& pi,
                      const StandpointImplication& impl) {
    if (!sharpenings_hold(m, impl.gamma)) return true;
    return eval(m, pi, impl.matrix);
}

namespace {

FormulaPtr fold_disjunction(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return falsum();
    FormulaPtr out = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) out = Formula::disj(out, fs[i]);
    return out;
}

}  // namespace

StandpointImplication interpret(const PlainSequent& seq) {
    StandpointImplication impl;
    impl.gamma = seq.gamma;
    FormulaPtr matrix = fold_disjunction(seq.root);
    for (const auto& nest : seq.nestings) {
        matrix = Formula::disj(matrix, Formula::box(nest.standpoint, fold_disjunction(nest.formulas)));
    }
    impl.matrix = matrix;
    return impl;
}

StandpointImplication interpret(const ColoredSequent& seq) {
    return interpret(erase_sequent(seq));
}

// ── Oracle ──────────────────────────────────────────────────────────────────

bool oracle_validity(const SequentInput& input, int bound, const OracleOptions& opts) {
    if (bound < 1) throw InputError("oracle bound must be positive");
    internal_check(input.goal != nullptr, "oracle_validity: null goal");

    const std::vector<std::string>& sps = input.vocab.standpoints;  // "*" last
    const std::vector<std::string>& props = input.vocab.propositions;
    int named = static_cast<int>(sps.size()) - 1;
    int bits = named + static_cast<int>(props.size());
    if (bits > 20) {
        throw ResourceError("oracle: type space over 2^20");
    }
    long long types = 1ll << bits;
    if (types > 64) {
        throw ResourceError("oracle: more than 64 precisification types");
    }

    // Count what the subset walk will visit; refuse past the ceiling.
    int k_max = static_cast<int>(std::min<long long>(bound, types));
    long long total = 0;
    {
        // C(types, k) summed for k = 1 .. k_max, saturating.
        long double c = 1;
        for (int k = 1; k <= k_max; ++k) {
            c = c * static_cast<long double>(types - k + 1) / k;
            total += static_cast<long long>(std::min<long double>(c, 1e18L));
            if (total > opts.max_models) {
                throw ResourceError("oracle: enumeration space exceeds the ceiling");
            }
        }
    }

    NameIds prop_ids;
    for (const std::string& p : props) prop_ids.add(p);
    NameIds sp_ids;
    for (const std::string& s : sps) sp_ids.add(s);  // named first, "*" last
    int false_id = static_cast<int>(props.size());

    Compiled matrix;
    matrix.root = compile_into(input.goal, prop_ids, sp_ids, false_id, matrix);

    std::vector<std::pair<int, int>> gamma_ids;
    for (const Sharpening& st : input.gamma) {
        int a = sp_ids.find(st.sharper);
        int b = sp_ids.find(st.broader);
        if (a < 0 || b < 0) {
            throw InputError("sharpening statement over undeclared standpoint: " +
                             render_sharpening(st));
        }
        gamma_ids.emplace_back(a, b);
    }

    // A type packs sigma membership for named standpoints in its low bits and
    // the valuation above them. One precisification per inhabited type.
    std::uint64_t subset_limit = types == 64 ? ~0ull : ((1ull << types) - 1);
    DenseModel m;
    m.sigma.assign(sps.size(), 0);
    m.delta.assign(props.size() + 1, 0);  // trailing slot: the reserved atom
    for (std::uint64_t mask = 1; mask != 0 && mask <= subset_limit; ++mask) {
        int n = std::popcount(mask);
        if (n > k_max) continue;
        m.n = n;
        m.all = n == 64 ? ~0ull : ((1ull << n) - 1);
        std::fill(m.sigma.begin(), m.sigma.end(), 0);
        std::fill(m.delta.begin(), m.delta.end(), 0);
        m.sigma[static_cast<std::size_t>(named)] = m.all;  // the universal standpoint
        int k = 0;
        for (int t = 0; t < types; ++t) {
            if (!((mask >> t) & 1u)) continue;
            for (int j = 0; j < named; ++j) {
                if ((t >> j) & 1) m.sigma[static_cast<std::size_t>(j)] |= 1ull << k;
            }
            for (std::size_t i = 0; i < props.size(); ++i) {
                if ((static_cast<std::uint64_t>(t) >> (named + i)) & 1u) m.delta[i] |= 1ull << k;
            }
            ++k;
        }
        if (!opts.allow_empty_sigma) {
            bool serial = true;
            for (int j = 0; j < named; ++j) {
                if (m.sigma[static_cast<std::size_t>(j)] == 0) {
                    serial = false;
                    break;
                }
            }
            if (!serial) continue;
        }
        bool gamma_ok = true;
        for (auto [a, b] : gamma_ids) {
            std::uint64_t sa = m.sigma[static_cast<std::size_t>(a)];
            if ((sa & m.sigma[static_cast<std::size_t>(b)]) != sa) {
                gamma_ok = false;
                break;
            }
        }
        if (!gamma_ok) continue;  // the implication holds vacuously here
        for (int pi = 0; pi < n; ++pi) {
            if (!eval_node(m, matrix, matrix.root, pi)) return false;
        }
    }
    return true;
}

// ── Counter-model checking ──────────────────────────────────────────────────

std::optional<std::string> countermodel_witness(const StandpointModel& m, const PlainSequent& seq,
                                                bool allow_empty_sigma) {
    check_model_wellformed(m, allow_empty_sigma);
    StandpointImplication impl = interpret(seq);
    if (!sharpenings_hold(m, impl.gamma)) return std::nullopt;
    for (const std::string& pi : m.precisifications) {
        if (!eval(m, pi, impl.matrix)) return pi;
    }
    return std::nullopt;
}

bool check_countermodel(const StandpointModel& m, const PlainSequent& seq, bool allow_empty_sigma) {
    return countermodel_witness(m, seq, allow_empty_sigma).has_value();
}

// ── JSON ────────────────────────────────────────────────────────────────────

namespace {

nlohmann::json pi_array(const std::vector<std::string>& order, const std::set<std::string>& set) {
    nlohmann::json arr = nlohmann::json::array();
    for (const std::string& pi : order) {
        if (set.count(pi)) arr.push_back(pi);
    }
    return arr;
}

}  // namespace

nlohmann::json model_to_json(const StandpointModel& m, const std::string& falsified_at) {
    nlohmann::json j;
    j["precisifications"] = m.precisifications;
    nlohmann::json sigma = nlohmann::json::object();
    for (const auto& [s, set] : m.sigma) sigma[s] = pi_array(m.precisifications, set);
    j["sigma"] = std::move(sigma);
    nlohmann::json delta = nlohmann::json::object();
    for (const auto& [p, set] : m.delta) delta[p] = pi_array(m.precisifications, set);
    j["delta"] = std::move(delta);
    j["falsified_at"] = falsified_at;
    return j;
}

StandpointModel model_from_json(const nlohmann::json& j, std::string* falsified_at) {
    StandpointModel m;
    try {
        m.precisifications = j.at("precisifications").get<std::vector<std::string>>();
        for (const auto& [s, arr] : j.at("sigma").items()) {
            m.sigma[s] = std::set<std::string>(arr.begin(), arr.end());
        }
        for (const auto& [p, arr] : j.at("delta").items()) {
            m.delta[p] = std::set<std::string>(arr.begin(), arr.end());
        }
        if (falsified_at) *falsified_at = j.value("falsified_at", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed model json: ") + e.what());
    }
    return m;
}

}  // namespace spl
