#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spl/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Validity prover for propositional standpoint logic"};
    spl::RunConfig cfg;
    std::string mode = "validity";
    std::string emit = "text";
    std::string certificate = "both";
    bool no_seriality = false;

    app.add_option("input", cfg.input_text,
                   "Implication to decide, e.g. \"s <= t |- [t]p | <s>~p\"; omit to read stdin");
    app.add_option("--file", cfg.input_file, "Read the input from a file instead");
    app.add_option("--mode", mode, "validity | sat")
        ->check(CLI::IsMember({"validity", "sat"}));
    app.add_option("--emit", emit, "text | json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--certificate", certificate, "proof | model | both | none")
        ->check(CLI::IsMember({"proof", "model", "both", "none"}));
    app.add_flag("--oracle-check", cfg.oracle_check,
                 "Cross-check the verdict against bounded model enumeration");
    app.add_flag("--no-seriality", no_seriality,
                 "Allow standpoints with no precisifications");
    app.add_flag("--stats", cfg.show_stats, "Print search statistics");
    app.add_flag("--batch", cfg.batch, "Treat the input as one implication per line");
    app.add_option("--max-colorings", cfg.max_colorings,
                   "Ceiling on proper colorings before giving up");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    cfg.mode = mode == "sat" ? spl::Mode::Sat : spl::Mode::Validity;
    cfg.emit = emit == "json" ? spl::EmitFormat::Json : spl::EmitFormat::Text;
    if (certificate == "proof") {
        cfg.certificate = spl::CertificateKind::Proof;
    } else if (certificate == "model") {
        cfg.certificate = spl::CertificateKind::Model;
    } else if (certificate == "none") {
        cfg.certificate = spl::CertificateKind::None;
    } else {
        cfg.certificate = spl::CertificateKind::Both;
    }
    cfg.seriality = !no_seriality;
    cfg.use_stdin = cfg.input_text.empty() && cfg.input_file.empty();

    return spl::run(cfg, std::cin, std::cout, std::cerr);
}
