#include "spl/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spl/proof.hpp"
#include "spl/semantics.hpp"

namespace spl {

namespace {

std::string read_stream(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string verdict_word(Mode mode, bool valid) {
    if (mode == Mode::Validity) return valid ? "valid" : "invalid";
    /* Sat mode proves the negated goal: its validity refutes satisfiability. */
    return valid ? "unsatisfiable" : "satisfiable";
}

std::string render_set(const std::set<std::string>& xs) {
    std::string out = "{";
    bool first = true;
    for (const std::string& x : xs) {
        if (!first) out += ", ";
        out += x;
        first = false;
    }
    out += "}";
    return out;
}

std::string render_model_text(const StandpointModel& m, const std::string& falsified_at) {
    std::string out = "precisifications:";
    for (const std::string& pi : m.precisifications) {
        out += ' ';
        out += pi;
    }
    out += '\n';
    for (const auto& [name, pis] : m.sigma) {
        out += "sigma(" + name + ") = " + render_set(pis) + "\n";
    }
    for (const auto& [name, pis] : m.delta) {
        out += "delta(" + name + ") = " + render_set(pis) + "\n";
    }
    out += "falsified at " + falsified_at + "\n";
    return out;
}

nlohmann::json stats_json(long long colorings, long long threads_run, long recursive_calls_max,
                          long bound) {
    return nlohmann::json{{"colorings", colorings},
                          {"threads_run", threads_run},
                          {"recursive_calls_max", recursive_calls_max},
                          {"bound", bound}};
}

std::string stats_text(long long colorings, long long threads_run, long recursive_calls_max,
                       long bound) {
    std::ostringstream os;
    os << "stats: colorings=" << colorings << " threads_run=" << threads_run
       << " recursive_calls_max=" << recursive_calls_max << " bound=" << bound;
    return os.str();
}

void emit_report(const RunConfig& cfg, const Verdict& v, const ProveStats& stats,
                 std::ostream& out) {
    bool want_proof =
        cfg.certificate == CertificateKind::Proof || cfg.certificate == CertificateKind::Both;
    bool want_model =
        cfg.certificate == CertificateKind::Model || cfg.certificate == CertificateKind::Both;
    if (cfg.emit == EmitFormat::Json) {
        nlohmann::json rep;
        rep["verdict"] = verdict_word(cfg.mode, v.valid);
        rep["certificate"] = nullptr;
        if (v.valid && v.proof && want_proof) {
            rep["certificate"] = proof_to_json(*v.proof);
        } else if (!v.valid && v.model && want_model) {
            rep["certificate"] = model_to_json(*v.model, render_label(0));
        }
        rep["stats"] =
            stats_json(stats.colorings, stats.threads_run, stats.recursive_calls_max, stats.bound);
        out << rep.dump(2) << "\n";
    } else {
        out << verdict_word(cfg.mode, v.valid) << "\n";
        if (v.valid && v.proof && want_proof) {
            out << render_proof(*v.proof);
        } else if (!v.valid && v.model && want_model) {
            out << render_model_text(*v.model, render_label(0));
        }
        if (cfg.show_stats) {
            out << stats_text(stats.colorings, stats.threads_run, stats.recursive_calls_max,
                              stats.bound)
                << "\n";
        }
    }
}

struct Decision {
    Verdict verdict;
    ProveStats stats;
};

Decision decide(const RunConfig& cfg, const std::string& text, std::ostream& err) {
    SequentInput input = normalize_input(parse_implication(text));
    if (cfg.mode == Mode::Sat) {
        input.goal = negate_nnf(input.goal);
    }
    ProveOptions opts;
    opts.max_colorings = cfg.max_colorings;
    opts.seriality = cfg.seriality;
    Decision d;
    d.verdict = prove(input, d.stats, opts);

    if (cfg.oracle_check) {
        long oracle_bound = 1 + static_cast<long>(input.vocab.standpoints.size()) +
                            formula_size(input.goal);
        OracleOptions oopts;
        oopts.max_models = cfg.oracle_max_models;
        oopts.allow_empty_sigma = !cfg.seriality;
        try {
            bool oracle_valid = oracle_validity(input, oracle_bound, oopts);
            if (oracle_valid != d.verdict.valid) {
                err << "oracle disagreement on '" << render_input(input) << "': search says "
                    << (d.verdict.valid ? "valid" : "invalid")
                    << ", model enumeration says the opposite\n";
                if (d.verdict.proof) err << render_proof(*d.verdict.proof);
                if (d.verdict.model) {
                    err << render_model_text(*d.verdict.model, render_label(0));
                }
                throw InternalError("search verdict contradicts the semantic oracle");
            }
        } catch (const ResourceError& e) {
            err << "oracle check skipped: " << e.what() << "\n";
        }
    }
    return d;
}

int run_single(const RunConfig& cfg, const std::string& text, std::ostream& out,
               std::ostream& err) {
    Decision d = decide(cfg, text, err);
    emit_report(cfg, d.verdict, d.stats, out);
    bool ok = cfg.mode == Mode::Validity ? d.verdict.valid : !d.verdict.valid;
    return ok ? 0 : 1;
}

bool blank(const std::string& line) {
    for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

int run_batch(const RunConfig& cfg, const std::string& corpus, std::ostream& out,
              std::ostream& err) {
    std::istringstream in(corpus);
    std::string line;
    int lineno = 0;
    long long n_valid = 0;
    long long n_invalid = 0;
    long long n_errors = 0;
    long long colorings = 0;
    long long threads_run = 0;
    long recursive_calls_max = 0;
    long bound = 0;
    bool internal = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        try {
            Decision d = decide(cfg, line, err);
            colorings += d.stats.colorings;
            threads_run += d.stats.threads_run;
            recursive_calls_max = std::max(recursive_calls_max, d.stats.recursive_calls_max);
            bound = std::max(bound, d.stats.bound);
            bool ok = cfg.mode == Mode::Validity ? d.verdict.valid : !d.verdict.valid;
            (d.verdict.valid ? n_valid : n_invalid) += 1;
            if (cfg.emit == EmitFormat::Json) {
                nlohmann::json row{{"line", lineno},
                                   {"verdict", verdict_word(cfg.mode, d.verdict.valid)}};
                out << row.dump() << "\n";
            } else {
                out << lineno << ": " << verdict_word(cfg.mode, d.verdict.valid) << "\n";
            }
            (void)ok;
        } catch (const InternalError& e) {
            internal = true;
            n_errors += 1;
            err << "line " << lineno << ": internal error: " << e.what() << "\n";
            if (cfg.emit == EmitFormat::Json) {
                out << nlohmann::json{{"line", lineno}, {"verdict", "error"}}.dump() << "\n";
            } else {
                out << lineno << ": error\n";
            }
        } catch (const std::runtime_error& e) {
            n_errors += 1;
            err << "line " << lineno << ": " << e.what() << "\n";
            if (cfg.emit == EmitFormat::Json) {
                out << nlohmann::json{{"line", lineno}, {"verdict", "error"}}.dump() << "\n";
            } else {
                out << lineno << ": error\n";
            }
        }
    }

    const char* valid_key = cfg.mode == Mode::Validity ? "valid" : "unsatisfiable";
    const char* invalid_key = cfg.mode == Mode::Validity ? "invalid" : "satisfiable";
    if (cfg.emit == EmitFormat::Json) {
        nlohmann::json summary{{valid_key, n_valid},
                               {invalid_key, n_invalid},
                               {"errors", n_errors},
                               {"stats", stats_json(colorings, threads_run, recursive_calls_max,
                                                    bound)}};
        out << summary.dump(2) << "\n";
    } else {
        out << "summary: " << valid_key << "=" << n_valid << " " << invalid_key << "="
            << n_invalid << " errors=" << n_errors << "\n";
        out << stats_text(colorings, threads_run, recursive_calls_max, bound) << "\n";
    }
    return internal ? 3 : 0;
}

}  // namespace

int run(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
    try {
        std::string text;
        if (!config.input_text.empty()) {
            text = config.input_text;
        } else if (!config.input_file.empty()) {
            std::ifstream file(config.input_file);
            if (!file) throw InputError("cannot open input file: " + config.input_file);
            text = read_stream(file);
        } else {
            text = read_stream(in);
        }
        if (config.batch) return run_batch(config, text, out, err);
        return run_single(config, text, out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace spl
