#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fplap/errors.hpp"

int main(int argc, char** argv) {
    using namespace fplap::cli;

    CLI::App app{"fplap: fractional p-Laplacian expansions, lattice schemes and convergence studies"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    std::string config_path;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", opt.seed, "seed for randomized suites");
    app.add_flag("--allow-unstable", opt.allow_unstable, "run even when tau exceeds the CFL bound");
    app.add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));

    int (*handler)(const IniConfig&, const Options&) = nullptr;
    const auto add = [&](const char* name, const char* help, int (*fn)(const IniConfig&, const Options&)) {
        app.add_subcommand(name, help)->callback([&handler, fn] { handler = fn; });
    };
    add("expand", "evaluate expansions over an r-sweep", cmd_expand);
    add("weights", "lattice weights and summability ratios", cmd_weights);
    add("evolve", "run the explicit parabolic scheme", cmd_evolve);
    add("study", "convergence studies and figure tables", cmd_study);
    add("selftest", "randomized property suites", cmd_selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }
    opt.out = out_dir;

    try {
        IniConfig cfg;
        if (!config_path.empty())
            cfg = IniConfig::load(config_path);
        else if (handler != cmd_selftest)
            throw fplap::ConfigurationError("--config is required for this command");
        return handler(cfg, opt);
    } catch (const fplap::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const fplap::InsufficientDataError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const fplap::Error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
}
