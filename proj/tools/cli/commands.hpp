#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "fplap/evolve.hpp"
#include "fplap/fields.hpp"
#include "fplap/kernel.hpp"

namespace fplap::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3, kSelftestFailure = 4 };

struct Options {
    std::filesystem::path out = ".";
    std::uint64_t seed = 1;
    bool allow_unstable = false;
    int threads = 1;
    std::string format = "csv";  // csv or json
};

int cmd_expand(const IniConfig& cfg, const Options& opt);
int cmd_weights(const IniConfig& cfg, const Options& opt);
int cmd_evolve(const IniConfig& cfg, const Options& opt);
int cmd_study(const IniConfig& cfg, const Options& opt);
int cmd_selftest(const IniConfig& cfg, const Options& opt);

/// [operator] d, p, s.
OperatorParams read_params(const IniConfig& cfg);
/// [operator] regime = uniform | nonvanishing, epsilon.
RateRegime read_regime(const IniConfig& cfg);
/// A builtin field from `section`: name plus value, gradient, clamp, exponent, cutoff.
ScalarField read_field(const IniConfig& cfg, const std::string& section, int d, double default_exponent);
/// [operator], [u0], [f] and [evolve].
EvolutionProblem read_problem(const IniConfig& cfg);
SchemeConfig read_scheme(const IniConfig& cfg, const Options& opt);

}  // namespace fplap::cli
