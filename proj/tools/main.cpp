#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "experiments.hpp"

namespace {

const char* comparisonSymbol(fracflux::cli::Comparison c) {
    switch (c) {
        case fracflux::cli::Comparison::AtMost: return "<=";
        case fracflux::cli::Comparison::AtLeast: return ">=";
        case fracflux::cli::Comparison::Report: return "  ";
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracflux: numerical checks of fractional calculus and fractional Noether currents"};
    app.require_subcommand(1);

    fracflux::cli::RunOptions options;
    std::string outDir;
    std::string only;
    std::uint64_t seed = 0;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "run the experiments listed in a config file");
    run->add_option("config", options.configPath, "JSON config file")->required();
    auto* outOpt = run->add_option("--out", outDir, "output directory (overrides the config)");
    auto* onlyOpt = run->add_option("--only", only, "run a single experiment");
    auto* seedOpt = run->add_option("--seed", seed, "random seed (overrides the config)");
    run->add_flag("-q,--quiet", quiet, "print failures and the final status only");

    std::string filter;
    auto* list = app.add_subcommand("list", "list experiments");
    list->add_option("filter", filter, "substring of the name or description");

    CLI11_PARSE(app, argc, argv);

    if (*list) {
        std::cout << fracflux::cli::listExperiments(filter);
        return 0;
    }

    if (*outOpt) options.outDir = outDir;
    if (*onlyOpt) options.only = only;
    if (*seedOpt) options.seed = seed;
    const auto result = fracflux::cli::run(options);
    for (const auto& c : result.checks) {
        if (quiet && c.pass) continue;
        std::printf("%s  %-16s %-52s %-28s %.3e %s %.3e %s\n", c.pass ? "PASS" : "FAIL", c.experiment.c_str(),
                    c.caseId.c_str(), c.check.c_str(), c.value, comparisonSymbol(c.comparison), c.threshold,
                    c.note.c_str());
    }
    std::fprintf(result.exitCode == 0 ? stdout : stderr, "%s\n", result.message.c_str());
    return result.exitCode;
}
