#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fplap/discrete_op.hpp"
#include "fplap/field.hpp"
#include "fplap/kernel.hpp"
#include "fplap/lattice.hpp"

namespace fplap {

/// u_t = -(-Delta)^s_p u + f on R^d, u(0) = u0, with p > 2.
struct EvolutionProblem {
    ScalarField u0;
    ScalarField f;
    OperatorParams params{1, 3.0, 0.5};
    double T = 0.1;

    /// Common Hoelder exponent a of u0 and f.
    double holder_exponent() const;
    /// max{Hoelder constant, sup norm} for u0 and f.
    double L_u0() const;
    double L_f() const;
    void validate() const;
};

enum class CflMode { Formula, UserValue };

struct CflSpec {
    CflMode mode = CflMode::Formula;
    /// Formula: replaces the computed K_{s,p,d} when set. UserValue: the constant K itself.
    std::optional<double> K;
    /// Constant K of the time-modulus lemma; enters K2 = K_holder L_u0^{p-1} C.
    double K_holder = 1.0;
    /// r-levels used to calibrate the summability constant C.
    int calibration_levels = 4;
};

enum class CflBranch { Power, Log };

struct CflInfo {
    double tau = 0.0;        // the bound K * r^e or K * r^a / |log r|
    double K = 0.0;
    double C = 0.0;
    double K2 = 0.0;
    CflBranch branch = CflBranch::Power;
    double exponent = 0.0;   // e in the power branch, a in the log branch
};

const char* to_string(CflBranch branch);

/// Stability bound on tau. Throws ParameterError unless 0 < r < 1.
CflInfo cfl_tau(double r, const OperatorParams& params, double a, double L_u0, double L_f, double T,
                const CflSpec& spec, WeightKind kind = WeightKind::W1);

struct SchemeConfig {
    GridSpec grid;                 // h, d, rho_max and the far-field rule (constant or zero)
    double box_radius = 4.0;       // computational box [-R, R]^d
    double r = 0.1;
    WeightKind kind = WeightKind::W1;
    std::optional<double> tau;     // empty: the CFL bound
    CflSpec cfl;
    int thin = 0;                  // store every thin-th step; 0 means ceil(N / 200)
    bool allow_unstable = false;
    bool full_diagnostics = false; // Hoelder margin over all pairs at every step
    int threads = 1;
};

struct StepDiagnostics {
    /// min over steps of (||u0|| + t_j ||f|| - sup |U^j|).
    double linf_margin = std::numeric_limits<double>::infinity();
    /// min over steps and box pairs of (Lambda_u0 + t_j Lambda_f - |U_a - U_b|).
    double holder_margin = std::numeric_limits<double>::infinity();
    /// max over steps of (sup U^{j+1} - sup U^j); nonpositive when f = 0 and the step is monotone.
    double max_increase = -std::numeric_limits<double>::infinity();
    std::size_t steps_checked = 0;
};

struct EvolutionState {
    std::vector<LatticeArray> snapshots;
    std::vector<double> times;
    std::vector<std::size_t> steps;
    LatticeArray forcing;
    std::shared_ptr<const WeightTable> table;
    double tau = 0.0;
    std::size_t N = 0;
    CflInfo cfl;
    bool cfl_satisfied = true;
    bool overridden = false;
    bool blew_up = false;
    std::string blow_up_message;
    StepDiagnostics diagnostics;
    double sup_u0 = 0.0;
    double sup_f = 0.0;
    double far_value = 0.0;
    OperatorParams params;
};

/// Dense stepping operator for one box and one weight table.
class BoxOperator {
public:
    BoxOperator(const WeightTable& table, int n, Extension exterior);

    /// L_h U at every box point.
    void apply(const LatticeArray& U, std::vector<double>& out, int threads = 1) const;
    double apply_at(const LatticeArray& U, std::size_t i) const;

    int n() const { return n_; }

private:
    int d_;
    int n_;
    double p_;
    double far_;
    std::size_t side_;
    std::size_t off_side_;
    std::vector<double> offset_weight_;  // dense over (-2n..2n)^d
    std::vector<double> exterior_mass_;  // per box point
};

/// U^{j} = U^{j-1} + tau (L_h U^{j-1} + f). Throws NumericalError on non-finite values.
LatticeArray step(const LatticeArray& U, const BoxOperator& op, const LatticeArray& f, double tau,
                  int threads = 1, std::size_t step_index = 0);

/// Runs the scheme. Throws CflError when tau exceeds the bound without allow_unstable.
EvolutionState run(const EvolutionProblem& problem, const SchemeConfig& config);

/// Linear blend of the stored snapshots bracketing t.
double interpolate(const EvolutionState& state, const MultiIndex& alpha, double t);

struct TimeModulusReport {
    double max_ratio = 0.0;
    double K2 = 0.0;
    std::vector<double> lags;          // t_k
    std::vector<double> max_modulus;   // max_j ||U^{j+k} - U^j|| at lag t_k
};

/// ||U^{j+k} - U^j|| against K2 t_k S_{a(p-1)}(r) + ||f|| t_k over the stored snapshots.
TimeModulusReport time_modulus_check(const EvolutionState& state, const EvolutionProblem& problem,
                                     const SchemeConfig& config);

struct PairedReport {
    double delta_u0 = 0.0;
    double delta_f = 0.0;
    double max_excess = -std::numeric_limits<double>::infinity();  // max_j sup|U-V| - (du0 + t_j df)
    double max_difference = 0.0;
};

/// Runs both problems with the same tau and compares them at every stored step.
PairedReport continuous_dependence(const EvolutionProblem& a, const EvolutionProblem& b,
                                   SchemeConfig config);

/// Metadata JSON (parameters, CFL branch, constants, diagnostics).
std::string evolution_metadata_json(const EvolutionState& state, const EvolutionProblem& problem,
                                    const SchemeConfig& config);
/// One row per box point: index components, coordinates, one column per stored time.
std::string evolution_snapshots_csv(const EvolutionState& state);

}  // namespace fplap
