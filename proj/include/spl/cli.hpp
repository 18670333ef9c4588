#pragma once

#include <iosfwd>
#include <string>

#include "spl/search.hpp"

namespace spl {

enum class Mode { Validity, Sat };
enum class EmitFormat { Text, Json };
enum class CertificateKind { Proof, Model, Both, None };

struct RunConfig {
    Mode mode = Mode::Validity;
    EmitFormat emit = EmitFormat::Text;
    CertificateKind certificate = CertificateKind::Both;
    bool oracle_check = false;
    bool seriality = true;
    bool show_stats = false;
    bool batch = false;
    long long max_colorings = 1ll << 20;
    long long oracle_max_models = 1ll << 22;

    /* Exactly one input source: inline text, a file, or stdin. */
    std::string input_text;
    std::string input_file;
    bool use_stdin = false;
};

/* Exit codes: 0 valid/satisfiable, 1 invalid/unsatisfiable, 2 input or
 * resource problem, 3 violated internal invariant. */
int run(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace spl
