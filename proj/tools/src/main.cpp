#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include <hillspec/errors.hpp>
#include <hillspec/io.hpp>

#include "commands.hpp"

using namespace hillspec::cli;

int main(int argc, char** argv) {
    CLI::App app{"Hill operator spectra, Lyapunov-Schmidt reduction and KdV flows"};
    app.set_version_flag("--version", std::string("hillspec ") + hillspec::kVersion);
    app.require_subcommand(1);

    std::optional<std::string> config;
    std::map<std::string, std::optional<std::string>> flags;
    const std::vector<std::pair<std::string, std::string>> flag_keys{
        {"--potential", "potential.spec"}, {"--K", "spectral.K"},         {"--s", "spectral.s"},
        {"--weight", "spectral.weight"},   {"--t", "flow.t"},             {"--dt", "flow.dt"},
        {"--out", "output.out"},           {"--seed", "output.seed"},     {"--suite", "verify.suite"},
        {"--m", "reduction.m"},            {"--n-from", "reduction.n_from"}, {"--n-to", "reduction.n_to"},
        {"--tol", "reduction.tol"},        {"--K-pde", "flow.K_pde"},     {"--gap-table", "verify.gap_table"},
    };
    std::string chosen;
    for (const char* name : {"spectrum", "reduce", "flow", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "Config file (flat key = value with [sections])");
        for (const auto& [flag, key] : flag_keys) sub->add_option(flag, flags[key], "Overrides " + key);
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsageError;
    }

    try {
        ExperimentConfig cfg;
        if (config) load_config_file(*config, cfg);
        for (const auto& [key, value] : flags)
            if (value) set_field(cfg, key, *value);
        if (chosen == "spectrum") return cmd_spectrum(cfg, std::cerr);
        if (chosen == "reduce") return cmd_reduce(cfg, std::cerr);
        if (chosen == "flow") return cmd_flow(cfg, std::cerr);
        return cmd_verify(cfg, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsageError;
    } catch (const hillspec::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const hillspec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAssertionFailed;
    }
}
