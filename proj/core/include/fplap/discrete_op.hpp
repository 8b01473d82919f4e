#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fplap/field.hpp"
#include "fplap/lattice.hpp"
#include "fplap/quad.hpp"

namespace fplap {

/// Values on the box {alpha : |alpha_i| <= n for i < d} of the grid h Z^d.
class LatticeArray {
public:
    LatticeArray() = default;
    LatticeArray(int d, double h, int n, double fill = 0.0);

    static LatticeArray sample(const ScalarField& phi, int d, double h, int n);

    int d() const { return d_; }
    double h() const { return h_; }
    int n() const { return n_; }
    std::size_t size() const { return values_.size(); }

    bool contains(const MultiIndex& alpha) const;
    std::size_t index(const MultiIndex& alpha) const;
    MultiIndex multi_index(std::size_t i) const;
    Vec coordinate(std::size_t i) const { return lattice_point(multi_index(i), h_); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double at(const MultiIndex& alpha) const { return values_[index(alpha)]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

private:
    int d_ = 1;
    double h_ = 0.0;
    int n_ = 0;
    std::size_t side_ = 1;
    std::vector<double> values_;
};

/// Where lattice values come from: an array on a box, a callable field, or both (array first).
/// Points outside both are resolved by the exterior rule; CallerField requires a field.
struct FieldSample {
    const ScalarField* field = nullptr;
    const LatticeArray* array = nullptr;
    Extension exterior = Extension::caller();
    /// Tolerances for the continuous tail used by CallerField.
    QuadSpec tail_spec{1e-12, 1e-12, 4000, 0.0};

    static FieldSample of_field(const ScalarField& phi) { return {&phi, nullptr, Extension::caller()}; }
    static FieldSample of_array(const LatticeArray& a, Extension ext) { return {nullptr, &a, ext}; }

    /// Value at the lattice point h * beta. Throws DomainCoverageError when unresolvable.
    double resolve(const MultiIndex& beta, double h) const;
};

/// Discrete operator at the lattice point h * x:
/// inner_weight * sum_{inner} J_p(phi(x+y) - phi(x)) + sum_{outer} omega_alpha J_p(...) + tail term.
/// The tail term is J_p(far - phi(x)) tail_mass for constant extensions, and the exact kernel
/// integral beyond tail_radius for CallerField.
double apply_discrete(const FieldSample& field, const MultiIndex& x, const WeightTable& table,
                      double p);

struct ConsistencyOptions {
    double rho_max = 2.0;
    /// Known exact operator value; when empty reference_fraclap is used.
    std::optional<double> exact;
    QuadSpec reference_spec{1e-12, 1e-12, 20000, 0.0};
};

struct ConsistencyResult {
    double discrete = 0.0;
    double reference = 0.0;
    double reference_error = 0.0;
    double error = 0.0;
};

/// |apply_discrete - reference| at the grid point x (x must lie on h Z^d).
ConsistencyResult consistency_error(const ScalarField& phi, const Vec& x,
                                    const OperatorParams& params, double h, double r,
                                    WeightKind kind, const ConsistencyOptions& options = {});

/// Nearest multi-index to x / h; throws DomainCoverageError if x is not on the grid.
MultiIndex grid_index(const Vec& x, double h, int d);

}  // namespace fplap
