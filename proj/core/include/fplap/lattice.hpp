#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fplap/kernel.hpp"
#include "fplap/types.hpp"

namespace fplap {

enum class WeightKind { W1, W2 };

const char* to_string(WeightKind kind);
WeightKind weight_kind_from_string(const std::string& name);

enum class ExtensionKind { ConstantFarField, ZeroFarField, CallerField };

/// How the field is continued outside the sampled region.
struct Extension {
    ExtensionKind kind = ExtensionKind::ZeroFarField;
    double value = 0.0;  // used by ConstantFarField

    static Extension constant(double v) { return {ExtensionKind::ConstantFarField, v}; }
    static Extension zero() { return {ExtensionKind::ZeroFarField, 0.0}; }
    static Extension caller() { return {ExtensionKind::CallerField, 0.0}; }
    double far_value() const { return kind == ExtensionKind::ConstantFarField ? value : 0.0; }
};

/// Uniform grid h Z^d truncated at rho_max.
struct GridSpec {
    double h = 0.01;
    int d = 1;
    double rho_max = 2.0;
    Extension extension;

    void validate() const;
};

/// Lattice weights for the discrete operator at splitting radius r.
///
/// Offsets with 0 < |y_alpha| < r all share `inner_weight`; offsets with r <= |y_alpha| <= rho_max
/// carry their own weight in `outer`. Kernel mass beyond `tail_radius` is lumped into `tail_mass`.
/// In d = 1 the tail starts at the outer edge of the last cell, (n + 1/2) h, so that W1 cells and
/// the tail tile the complement of the inner region exactly.
struct WeightTable {
    int d = 1;
    double p = 2.0;
    double s = 0.5;
    double h = 0.0;
    double r = 0.0;
    double rho_max = 0.0;
    WeightKind kind = WeightKind::W1;
    double inner_weight = 0.0;
    std::vector<MultiIndex> inner;
    std::map<MultiIndex, double> outer;
    double tail_radius = 0.0;
    double tail_mass = 0.0;

    OperatorParams params() const { return {d, p, s}; }
    /// Weight of offset alpha (0 outside the table and at alpha = 0).
    double weight(const MultiIndex& alpha) const;
    /// Largest |alpha_i| over stored offsets.
    int reach() const;
};

/// Builds the table. Throws ConfigurationError when h > r/4 (W1) or h > r/(4 sqrt d) (W2),
/// or when r >= rho_max.
WeightTable build_weights(const GridSpec& grid, double r, const OperatorParams& params,
                          WeightKind kind);

/// int_{|y| > rho} |y|^{-(d+sp)} dy.
double kernel_tail_mass(double rho, const OperatorParams& params);

/// Smallest rho_max with kernel_tail_mass(rho_max) (2 sup)^{p-1} below 1e-3 * target_error,
/// never less than 2.
double default_rho_max(const OperatorParams& params, double sup_bound, double target_error);

struct SummabilityReport {
    double total = 0.0;
    double far = 0.0;
    std::vector<double> nus;
    std::vector<double> moments;
};

/// total = sum of all weights plus tail mass, far = the part with |y_alpha| >= 1 plus tail mass,
/// moments[i] = sum over 0 < |y_alpha| < 1 of |y_alpha|^{nus[i]} omega_alpha.
SummabilityReport summability_report(const WeightTable& table, std::span<const double> nus);

struct SummabilityRatios {
    double r = 0.0;
    double total_scaled = 0.0;              // total * r^{sp}
    double far = 0.0;
    std::vector<double> moment_scaled;      // moment(nu) / S_nu(r)
};

/// Ratios whose boundedness in r is the summability statement.
SummabilityRatios summability_ratios(const WeightTable& table, std::span<const double> nus);

/// Empirical summability constant: the largest ratio over tables at r, r/2, ..., (levels values),
/// with h = r/4 and the given rho_max. Never below 1.
double calibrate_summability_constant(const OperatorParams& params, WeightKind kind, double r,
                                      std::span<const double> nus, int levels = 4,
                                      double rho_max = 2.0);

/// Cache file name derived from (d, p, s, h, r, kind, rho_max).
std::string weight_cache_key(const WeightTable& table);
void save_weight_table(const WeightTable& table, const std::filesystem::path& path);
WeightTable load_weight_table(const std::filesystem::path& path);
/// Loads the table from `dir` if a matching cache file exists, otherwise builds and stores it.
WeightTable cached_weights(const std::filesystem::path& dir, const GridSpec& grid, double r,
                           const OperatorParams& params, WeightKind kind);

}  // namespace fplap
