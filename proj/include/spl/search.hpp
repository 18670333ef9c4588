#pragma once

// Backtracking-free proof search. One coloring yields one deterministic
// thread: apply the first enabled rule under a fixed guard order until the
// sequent closes (a clashing literal pair) or saturates. Validity needs every
// coloring to close; the first saturated thread instead yields a
// counter-model. Closing every thread is still not conclusive: assembling the
// threads into one derivation can uncover a saturated branch, and that branch
// yields a counter-model too.

#include <optional>
#include <string>
#include <vector>

#include "spl/semantics.hpp"

namespace spl {

enum class Rule : unsigned char { Id, Or, And, Box, Ns, Dia1, Dia2, DiaStar };
enum class Side : unsigned char { None, Left, Right };

std::string rule_tag(Rule r, const std::string& standpoint);
// Inverse of rule_tag; throws ParseError on unknown tags.
std::pair<Rule, std::string> parse_rule_tag(const std::string& tag);

struct Principal {
    int component = -1;
    int index = -1;

    friend bool operator==(const Principal&, const Principal&) = default;
};

struct SearchStep {
    Rule rule = Rule::Id;
    Side side = Side::None;        // conjunction steps only
    Principal principal;           // {-1,-1} for nesting introduction
    std::string standpoint;        // modal and nesting steps
    int target = -1;               // component index that received the addition
    int new_label = 0;             // appended nestings only
    std::vector<ColoredPtr> added;
    ColoredSequent result;
};

enum class Outcome : unsigned char { Closed, Saturated };

struct Thread {
    ColoredPtr coloring;
    ColoredSequent initial;
    std::vector<SearchStep> steps;
    Outcome outcome = Outcome::Saturated;
    Principal clash;  // Closed: first literal whose dual shares the component

    const ColoredSequent& final_sequent() const {
        return steps.empty() ? initial : steps.back().result;
    }
};

struct SearchLimits {
    long max_calls = 0;      // rule applications per thread
    int max_components = 0;  // components per sequent
};

struct SearchStats {
    long recursive_calls = 0;
    int max_components = 0;
    int max_sequent_size = 0;
};

bool is_saturated(const ColoredSequent& seq, const SharpeningClosure& closure,
                  bool seriality = true);

Thread proof_search(ColoredSequent start, const SharpeningClosure& closure,
                    const SearchLimits& limits, SearchStats& stats, bool seriality = true);

// sigma from nesting annotations closed under the sharpening preorder, delta
// from absent literals; built only from saturated sequents. The plain overload
// serves saturated branches met during proof assembly.
StandpointModel extract_countermodel(const ColoredSequent& final_seq,
                                     const SharpeningClosure& closure, bool seriality = true);
StandpointModel extract_countermodel(const PlainSequent& final_seq,
                                     const SharpeningClosure& closure, bool seriality = true);

class DerivationTree;
using DerivationPtr = std::shared_ptr<const DerivationTree>;

struct ProveOptions {
    long long max_colorings = 1ll << 20;
    bool seriality = true;
};

struct ProveStats {
    long long colorings = 0;
    long long threads_run = 0;
    long recursive_calls_max = 0;
    long bound = 0;          // rule application ceiling per thread
    int component_bound = 0;
    int max_components = 0;
};

struct Verdict {
    bool valid = false;
    DerivationPtr proof;                    // valid only
    std::optional<StandpointModel> model;   // invalid only, falsified at pi0
    std::optional<PlainSequent> falsified;  // invalid only, the saturated sequent the model refutes
    std::optional<Thread> witness;          // set when a thread saturated; absent when the
                                            // saturated branch surfaced during proof assembly
};

// Decides validity of the input implication. Certificates are self-checked
// before they are returned; a failed self-check raises InternalError.
Verdict prove(const SequentInput& input, ProveStats& stats, const ProveOptions& opts = {});

}  // namespace spl
