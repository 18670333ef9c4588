#pragma once

// Standpoint models and evaluation. A model fixes a non-empty precisification
// set, a standpoint assignment sigma (sigma("*") is the whole set, every
// sigma(s) non-empty unless explicitly relaxed), and a valuation delta per
// proposition. Sharpening statements are global: "s <= s'" holds in a model
// iff sigma(s) is included in sigma(s'), independently of the evaluation
// point.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "spl/sequent.hpp"
#include "spl/syntax.hpp"

namespace spl {

struct StandpointModel {
    std::vector<std::string> precisifications;           // non-empty, fixed order
    std::map<std::string, std::set<std::string>> sigma;  // standpoint name -> subset
    std::map<std::string, std::set<std::string>> delta;  // proposition -> subset
};

// Throws InputError when the model breaks its own invariants.
void check_model_wellformed(const StandpointModel& m, bool allow_empty_sigma = false);

struct StandpointImplication {
    std::vector<Sharpening> gamma;
    FormulaPtr matrix;
};

bool sharpenings_hold(const StandpointModel& m, const std::vector<Sharpening>& gamma);
bool eval(const StandpointModel& m, const std::string& pi, const FormulaPtr& f);
bool eval_implication(const StandpointModel& m, const std::string& pi,
                      const StandpointImplication& impl);

// Empty disjunctions become falsum; each nesting (s)[...] contributes a boxed
// disjunct.
StandpointImplication interpret(const PlainSequent& seq);
StandpointImplication interpret(const ColoredSequent& seq);

struct OracleOptions {
    long long max_models = 1ll << 22;  // enumeration ceiling, refuse above it
    bool allow_empty_sigma = false;
};

// Ground-truth validity over all models with at most `bound` precisifications.
// Enumerates one representative per inhabited-type set, which decides exactly
// the same space: truth of the implication depends only on which
// (sigma-membership, valuation) types are inhabited, and every type set of
// size at most `bound` is realized by a model of that size.
bool oracle_validity(const SequentInput& input, int bound, const OracleOptions& opts = {});

// True when the model falsifies the sequent's interpretation somewhere while
// satisfying the antecedent.
bool check_countermodel(const StandpointModel& m, const PlainSequent& seq,
                        bool allow_empty_sigma = false);
std::optional<std::string> countermodel_witness(const StandpointModel& m, const PlainSequent& seq,
                                                bool allow_empty_sigma = false);

nlohmann::json model_to_json(const StandpointModel& m, const std::string& falsified_at);
StandpointModel model_from_json(const nlohmann::json& j, std::string* falsified_at = nullptr);

}  // namespace spl
