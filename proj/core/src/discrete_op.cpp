#include "fplap/discrete_op.hpp"

#include <cmath>
#include <string>

#include "fplap/errors.hpp"
#include "fplap/expansion.hpp"
#include "fplap/kernel.hpp"

namespace fplap {

namespace {

std::string show(const MultiIndex& a, int d) {
    std::string s = "(";
    for (int i = 0; i < d; ++i) s += (i ? ", " : "") + std::to_string(a[i]);
    return s + ")";
}

}  // namespace

LatticeArray::LatticeArray(int d, double h, int n, double fill) : d_(d), h_(h), n_(n) {
    if (d < 1 || d > kMaxDim) throw ParameterError("LatticeArray: d must be 1, 2 or 3");
    if (n < 0) throw ParameterError("LatticeArray: n must be >= 0");
    side_ = static_cast<std::size_t>(2 * n + 1);
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= side_;
    values_.assign(total, fill);
}

LatticeArray LatticeArray::sample(const ScalarField& phi, int d, double h, int n) {
    LatticeArray a(d, h, n);
    for (std::size_t i = 0; i < a.size(); ++i) a.values_[i] = phi(a.coordinate(i));
    return a;
}

bool LatticeArray::contains(const MultiIndex& alpha) const {
    for (int i = 0; i < kMaxDim; ++i) {
        if (i < d_) {
            if (alpha[i] < -n_ || alpha[i] > n_) return false;
        } else if (alpha[i] != 0) {
            return false;
        }
    }
    return true;
}

std::size_t LatticeArray::index(const MultiIndex& alpha) const {
    std::size_t idx = 0;
    for (int i = 0; i < d_; ++i) idx = idx * side_ + static_cast<std::size_t>(alpha[i] + n_);
    return idx;
}

MultiIndex LatticeArray::multi_index(std::size_t i) const {
    MultiIndex a{0, 0, 0};
    for (int k = d_ - 1; k >= 0; --k) {
        a[k] = static_cast<int>(i % side_) - n_;
        i /= side_;
    }
    return a;
}

double FieldSample::resolve(const MultiIndex& beta, double h) const {
    if (array != nullptr && array->contains(beta)) return array->at(beta);
    if (field != nullptr) return (*field)(lattice_point(beta, h));
    if (exterior.kind != ExtensionKind::CallerField) return exterior.far_value();
    throw DomainCoverageError("lattice point " + show(beta, kMaxDim) +
                              " is outside the sampled box and no field is available");
}

double apply_discrete(const FieldSample& field, const MultiIndex& x, const WeightTable& table,
                      double p) {
    if (!(p > 1.0)) throw ParameterError("apply_discrete: requires p > 1");
    if (field.array != nullptr && field.array->d() != table.d) {
        throw ConfigurationError("apply_discrete: array and weight table dimensions differ");
    }
    const double h = table.h;
    const Vec xp = lattice_point(x, h);
    const bool direct = field.field != nullptr && field.array == nullptr;
    const double center = field.resolve(x, h);

    auto difference = [&](const MultiIndex& alpha) {
        if (direct) return field.field->diff(xp, lattice_point(alpha, h));
        const MultiIndex beta = x + alpha;
        if (field.array != nullptr && !field.array->contains(beta) && field.field == nullptr &&
            field.exterior.kind == ExtensionKind::CallerField) {
            throw DomainCoverageError("apply_discrete: offset " + show(alpha, table.d) +
                                      " from " + show(x, table.d) + " leaves the sampled box");
        }
        return field.resolve(beta, h) - center;
    };

    double inner = 0.0;
    for (const auto& a : table.inner) inner += jp_unchecked(difference(a), p);
    double outer = 0.0;
    for (const auto& [a, w] : table.outer) outer += w * jp_unchecked(difference(a), p);

    double tail = 0.0;
    if (field.exterior.kind == ExtensionKind::CallerField) {
        if (field.field == nullptr) {
            throw DomainCoverageError("apply_discrete: CallerField extension needs a field for |y| > " +
                                      std::to_string(table.tail_radius));
        }
        const ScalarField& phi = *field.field;
        if (!phi.bounded()) {
            throw ContractError("apply_discrete: field '" + phi.name + "' has no sup_bound");
        }
        const QuadResult q = integrate_tail(
            [&](const Vec& y) { return jp_unchecked(phi.diff(xp, y), p); }, table.tail_radius,
            table.d, table.s, p, std::pow(2.0 * phi.sup_bound, p - 1.0), field.tail_spec);
        tail = q.value;
    } else {
        tail = table.tail_mass * jp_unchecked(field.exterior.far_value() - center, p);
    }
    return table.inner_weight * inner + outer + tail;
}

MultiIndex grid_index(const Vec& x, double h, int d) {
    MultiIndex b{0, 0, 0};
    for (int i = 0; i < kMaxDim; ++i) {
        const double q = x[i] / h;
        const double rq = std::round(q);
        if (std::abs(q - rq) > 1e-9 || (i >= d && x[i] != 0.0)) {
            throw DomainCoverageError("point is not on the grid h Z^d with h = " + std::to_string(h));
        }
        b[i] = static_cast<int>(rq);
    }
    return b;
}

ConsistencyResult consistency_error(const ScalarField& phi, const Vec& x,
                                    const OperatorParams& params, double h, double r,
                                    WeightKind kind, const ConsistencyOptions& options) {
    params.validate();
    GridSpec grid;
    grid.h = h;
    grid.d = params.d;
    grid.rho_max = options.rho_max;
    grid.extension = Extension::caller();
    const WeightTable table = build_weights(grid, r, params, kind);
    const MultiIndex xi = grid_index(x, h, params.d);

    ConsistencyResult res;
    res.discrete = apply_discrete(FieldSample::of_field(phi), xi, table, params.p);
    if (options.exact) {
        res.reference = *options.exact;
    } else {
        const QuadResult ref = reference_fraclap(phi, x, params, options.reference_spec);
        res.reference = ref.value;
        res.reference_error = ref.error;
    }
    res.error = std::abs(res.discrete - res.reference);
    return res;
}

}  // namespace fplap
