#include "gv/cli/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct Invocation {
    gv::cli::Options options;
    std::string report_path;
};

void add_common(CLI::App* sub, Invocation& inv) {
    auto& o = inv.options;
    sub->add_option("input", o.input, "JSON input document")->required();
    sub->add_option("--degree", o.degree, "truncation degree for inverse transition tensors")
        ->envname("GV_DEGREE")
        ->capture_default_str();
    sub->add_option("--samples", o.samples, "number of random samples for property checks")
        ->envname("GV_SAMPLES")
        ->capture_default_str();
    sub->add_option("--seed", o.seed, "random seed")->envname("GV_SEED")->capture_default_str();
    sub->add_option("--report", inv.report_path, "write the JSON report here instead of standard output");
}

int emit(const gv::cli::Outcome& out, const std::string& path) {
    const std::string text = out.report.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            std::cerr << "gv: cannot write report to " << path << "\n";
            return 2;
        }
        f << text;
    }
    if (out.report.contains("error")) std::cerr << "gv: " << out.report["error"]["message"].get<std::string>() << "\n";
    return out.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Double Lie antialgebroid verifier"};
    app.set_version_flag("--version", std::string("gv ") + gv::cli::tool_version);
    app.require_subcommand(1);
    Invocation inv;
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"check-antialgebroid", "check Q^2 = 0, Jacobi and anchor laws of one antialgebroid"},
        {"check-double", "run Conditions I, II, III and the commutativity check"},
        {"equivalence", "run all four checks and emit the implication table"},
        {"neighbors", "emit the twelve-node neighbor graph"},
        {"cotangent-double", "build and verify the cotangent double of QE and QEstar"},
        {"nfold-check", "check pairwise brackets of n homological fields"},
        {"validate", "schema and shape validation without running checks"},
    };
    for (const auto& [name, help] : subs) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, inv);
        if (name == "check-double")
            sub->add_option("--conditions", inv.options.conditions, "comma-separated subset of I,II,III,commute")
                ->delimiter(',')
                ->allow_extra_args(false);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    inv.options.command = app.get_subcommands().front()->get_name();

    std::ifstream in(inv.options.input, std::ios::binary);
    if (!in) {
        gv::cli::json rep = gv::cli::report_header(inv.options);
        rep["error"] = {{"kind", "io"}, {"message", "cannot read " + inv.options.input}};
        rep["pass"] = false;
        return emit({2, rep}, inv.report_path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return emit(gv::cli::run(inv.options, text.str()), inv.report_path);
}
