#pragma once

// Erased derivation trees, the thread zipper, and an independent proof
// checker. The checker re-derives every inference from the rule schemata and
// the sequents alone; it shares no rule application code with the search
// engine.

#include <json.hpp>

#include "spl/search.hpp"

namespace spl {

class DerivationTree {
public:
    PlainSequent conclusion;
    Rule rule = Rule::Id;
    std::optional<Principal> principal;  // absent for nesting introduction
    std::string standpoint;              // modal and nesting rules
    std::vector<DerivationPtr> premises;
};

// Folds closed threads into one derivation. Threads whose erased step
// sequences fully coincide (rule, principal, conjunct side, additions,
// sequents) collapse into one; the rest share erased prefixes and split
// pairwise at conjunction steps. Threads that step apart anywhere else are
// dropped in favor of the group's first thread. A conjunct side no remaining
// thread covers (a coloring repeats its side choice when the same conjunction
// recurs in several components, or covering threads were dropped) gets a
// derivation of its own, built directly on plain sequents; `seriality` must
// match the mode the threads were produced under.
//
// Assembly can fail outright: every thread closed, yet a synthesized branch
// saturates without a clash, so the conclusion has no derivation at all. With
// `open_branch` set, the saturated sequent is written there and nullptr comes
// back; the caller owns turning it into a counter-model. Without it the same
// condition raises InternalError.
DerivationPtr zip_threads(const std::vector<Thread>& threads, bool seriality = true,
                          PlainSequent* open_branch = nullptr);

bool check_proof(const DerivationTree& proof, std::string* diagnostic = nullptr);

std::string render_proof(const DerivationTree& proof);
DerivationPtr parse_proof(const std::string& text);

nlohmann::json proof_to_json(const DerivationTree& proof);
DerivationPtr proof_from_json(const nlohmann::json& j);

int count_nodes(const DerivationTree& proof);
int count_rule(const DerivationTree& proof, Rule rule);

}  // namespace spl
