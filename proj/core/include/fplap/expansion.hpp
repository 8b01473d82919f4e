#pragma once

#include <string>

#include "fplap/field.hpp"
#include "fplap/kernel.hpp"
#include "fplap/quad.hpp"

namespace fplap {

enum class ExpansionKind { LocalSurface, LocalVolume, Fractional, BucurSquassina };

const char* to_string(ExpansionKind kind);
ExpansionKind expansion_kind_from_string(const std::string& name);

struct ExpansionResult {
    double value = 0.0;
    double quadrature_error = 0.0;
    double r = 0.0;
    ExpansionKind kind = ExpansionKind::Fractional;
};

/// kappa_{p,d} / r^p times the average of J_p(phi(x+y) - phi(x)) over the sphere of radius r.
ExpansionResult mvp_local_surface(const ScalarField& phi, const Vec& x, double r, double p, int d,
                                  const QuadSpec& spec = {});

/// (p+d) kappa_{p,d} / (d r^p) times the average of J_p(phi(x+y) - phi(x)) over B_r.
ExpansionResult mvp_local_volume(const ScalarField& phi, const Vec& x, double r, double p, int d,
                                 const QuadSpec& spec = {});

/// Bounded-measure expansion of the fractional p-Laplacian: a constant-weight average over B_r
/// plus the exact kernel outside B_r. Requires phi.sup_bound for the tail.
ExpansionResult mvp_fractional(const ScalarField& phi, const Vec& x, double r,
                               const OperatorParams& params, const QuadSpec& spec = {});

/// int_{|y|>r} J_p(phi(x+y) - phi(x)) |y|^{-(d+(p-2)s)} (|y|^2 - r^2)^{-s} dy.
ExpansionResult bs_expansion(const ScalarField& phi, const Vec& x, double r,
                             const OperatorParams& params, const QuadSpec& spec = {});

inline constexpr double kDefaultPvRadius = 1e-3;

/// Principal-value quadrature of -(-Delta)^s_p phi(x): symmetrized integrand inside B_delta,
/// plain kernel outside.
QuadResult reference_fraclap(const ScalarField& phi, const Vec& x, const OperatorParams& params,
                             const QuadSpec& spec = {}, double delta = kDefaultPvRadius);

/// |g|^{p-2} (tr H + (p-2) <H g/|g|, g/|g|>); 0 when g = 0 and p > 2.
double plap_from_derivatives(const Vec& g, const Mat& H, double p, int d);

/// Delta_p phi(x) from the field's analytic derivatives.
double reference_plap(const ScalarField& phi, const Vec& x, double p, int d);

struct IdentityPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Surface form of the quadratic-model identity: a_{p,d} times the sphere average of
/// (p-1)|g.y|^{p-2} y^T H y against Delta_p(g, H) r^p.
IdentityPair identity_check_J2(const Vec& g, const Mat& H, double r, double p, int d,
                               const QuadSpec& spec = {});

/// Volume form of the same identity, prefactor (p+d) a_{p,d} / d.
IdentityPair identity_check_J2_volume(const Vec& g, const Mat& H, double r, double p, int d,
                                      const QuadSpec& spec = {});

/// Fractional-weight form: a_{s,p,d} P.V. int_{B_r} (p-1)|g.y|^{p-2} y^T H y |y|^{-(d+sp)} dy
/// against Delta_p(g, H) r^{p(1-s)}.
IdentityPair identity_check_J1(const Vec& g, const Mat& H, double r, const OperatorParams& params,
                               const QuadSpec& spec = {});

}  // namespace fplap
