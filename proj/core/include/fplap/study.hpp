#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fplap/discrete_op.hpp"
#include "fplap/evolve.hpp"
#include "fplap/expansion.hpp"
#include "fplap/kernel.hpp"

namespace fplap {

/// (abscissa, error) series with its least-squares log-log slope.
struct EocReport {
    std::vector<double> abscissae;   // strictly decreasing
    std::vector<double> errors;
    double slope = 0.0;
    double residual = 0.0;           // RMS deviation from the fitted line, in log space
    int fitted_points = 0;           // number of finest points used by the fit
    int zero_errors = 0;             // points dropped because the error was exactly 0
    std::optional<double> expected_slope;
    std::string provenance;
    bool oracle_limited = false;     // oracle accuracy could not be pushed below 1% of the errors
};

/// Fits log(error) = slope log(abscissa) + c on the `finest` smallest abscissae (all when 0).
/// Throws InsufficientDataError with fewer than 3 usable points.
EocReport eoc(std::span<const double> abscissae, std::span<const double> errors, int finest = 0);

struct MuChoice {
    double mu = 1.0;
    double order = 1.0;      // expected order of the consistency error in h
    double gamma = 2.0;
    std::string range;       // "p>3", "2<=p<=3" or "1<p<2"
};

/// Recommended coupling r ~ h^mu and the implied order in h.
MuChoice mu_select(const OperatorParams& params, const RateRegime& regime);

/// Expected order in r of an expansion. `one_dimensional` applies the order-2 rate available
/// in d = 1 at nonvanishing gradient points.
double expected_expansion_order(ExpansionKind kind, const OperatorParams& params,
                                const RateRegime& regime, bool one_dimensional = false);

struct SweepOptions {
    int fit_points = 3;
    QuadSpec spec{1e-12, 1e-12, 20000, 0.0};
    /// Known exact operator value; otherwise the quadrature oracle (or reference_plap for local kinds).
    std::optional<double> exact;
    /// Oracle and expansion quadrature errors are pushed below this fraction of the finest error.
    double oracle_fraction = 0.01;
    std::optional<double> expected_slope;
    std::string provenance;
    int threads = 1;
};

/// |expansion(r) - reference| over the radii.
EocReport expansion_sweep(const ScalarField& phi, const Vec& x, const OperatorParams& params,
                          ExpansionKind kind, std::span<const double> radii,
                          const SweepOptions& options = {});

/// r = c h^mu.
struct Coupling {
    double mu = 1.0;
    double c = 4.0;
    double radius(double h) const;
};

/// Discrete consistency error over the mesh widths, r coupled to h.
EocReport consistency_sweep(const ScalarField& phi, const Vec& x, const OperatorParams& params,
                            WeightKind kind, std::span<const double> hs, const Coupling& coupling,
                            const SweepOptions& options = {},
                            const ConsistencyOptions& base = {});

struct RefinementOptions {
    int levels = 3;
    double mu = 1.0;         // r_k = r_0 (h_k / h_0)^mu
    double tau_scale = 1.0;  // tau_k = tau_scale * CFL bound
};

struct RefinementReport {
    std::vector<double> h;
    std::vector<double> r;
    std::vector<double> tau;
    std::vector<double> cfl_tau;
    std::vector<double> linf_margin;
    std::vector<bool> blew_up;
    std::vector<double> differences;  // sup |U_k - U_{k+1}| on level-k points and stored times
    bool decreasing = false;
    bool bound_violated = false;
};

/// Successive halvings of h with tau recoupled to the CFL bound.
RefinementReport refinement_cauchy(const EvolutionProblem& problem, const SchemeConfig& base,
                                   const RefinementOptions& options = {});

struct Fig1Row {
    double p = 0.0;
    double s = 0.0;
    double gamma = 0.0;
    double nu = 0.0;
};

/// nu = gamma + p(1-s) over the grid; rows with no proved rate are skipped.
std::vector<Fig1Row> fig1_table(std::span<const double> ps, std::span<const double> ss,
                                const RateRegime& regime);

/// CSV with columns abscissa,error,expected_order,fitted_order,residual.
std::string eoc_csv(const EocReport& report);
/// JSON summary of one study.
std::string eoc_json(const EocReport& report, const std::string& name);

}  // namespace fplap
