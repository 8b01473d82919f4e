#include "fplap/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fplap/errors.hpp"
#include "fplap/io.hpp"
#include "parallel.hpp"

namespace fplap {

namespace {

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double sup_value(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    return m;
}

double holder_L(const ScalarField& f) {
    const double l = f.holder ? f.holder->constant : 0.0;
    return std::max(l, f.sup_bound);
}

// min over pairs of (L |x_a - x_b|^a - |U_a - U_b|).
double holder_margin(const LatticeArray& U, double L, double a, int threads) {
    const std::size_t m = U.size();
    const double h = U.h();
    std::vector<double> best(m, std::numeric_limits<double>::infinity());
    if (U.d() == 1) {
        std::vector<double> modulus(m);
        for (std::size_t k = 0; k < m; ++k) modulus[k] = L * std::pow(h * static_cast<double>(k), a);
        detail::parallel_for(m, threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                double local = std::numeric_limits<double>::infinity();
                for (std::size_t j = i + 1; j < m; ++j) {
                    local = std::min(local, modulus[j - i] - std::abs(U[i] - U[j]));
                }
                best[i] = local;
            }
        });
    } else {
        detail::parallel_for(m, threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const Vec xi = U.coordinate(i);
                double local = std::numeric_limits<double>::infinity();
                for (std::size_t j = i + 1; j < m; ++j) {
                    const double dist = norm(U.coordinate(j) - xi);
                    local = std::min(local, L * std::pow(dist, a) - std::abs(U[i] - U[j]));
                }
                best[i] = local;
            }
        });
    }
    return *std::min_element(best.begin(), best.end());
}

}  // namespace

double EvolutionProblem::holder_exponent() const {
    const double a0 = u0.holder ? u0.holder->exponent : 1.0;
    const double af = f.holder ? f.holder->exponent : 1.0;
    return std::min(a0, af);
}

double EvolutionProblem::L_u0() const { return holder_L(u0); }
double EvolutionProblem::L_f() const { return holder_L(f); }

void EvolutionProblem::validate() const {
    params.validate();
    if (!(params.p > 2.0)) throw ParameterError("EvolutionProblem: the scheme requires p > 2");
    if (!(T > 0.0)) throw ParameterError("EvolutionProblem: T must be positive");
    if (!u0.eval || !f.eval) throw ContractError("EvolutionProblem: u0 and f must be callable");
    if (!u0.holder || !f.holder) {
        throw ContractError("EvolutionProblem: u0 and f need Hoelder data (exponent, constant)");
    }
    if (!u0.bounded() || !f.bounded()) throw ContractError("EvolutionProblem: u0 and f must be bounded");
    const double a = holder_exponent();
    if (!(a > 0.0 && a <= 1.0)) throw ParameterError("EvolutionProblem: Hoelder exponent must lie in (0, 1]");
}

const char* to_string(CflBranch branch) { return branch == CflBranch::Power ? "power" : "log"; }

CflInfo cfl_tau(double r, const OperatorParams& params, double a, double L_u0, double L_f, double T,
                const CflSpec& spec, WeightKind kind) {
    params.validate();
    if (!(r > 0.0 && r < 1.0)) throw ParameterError("cfl_tau: requires 0 < r < 1");
    if (!(params.p > 2.0)) throw ParameterError("cfl_tau: requires p > 2");
    if (!(a > 0.0 && a <= 1.0)) throw ParameterError("cfl_tau: Hoelder exponent must lie in (0, 1]");
    if (!(L_u0 >= 0.0 && L_f >= 0.0 && T > 0.0)) throw ParameterError("cfl_tau: constants must be nonnegative");
    const double p = params.p;
    const double s = params.s;
    const double sp = params.sp();

    CflInfo info;
    const double nus[2] = {a * (p - 2.0), a * (p - 1.0)};
    info.C = calibrate_summability_constant(params, kind, r, nus, spec.calibration_levels);
    info.K2 = spec.K_holder * std::pow(L_u0, p - 1.0) * info.C;
    if (spec.mode == CflMode::UserValue) {
        if (!spec.K || !(*spec.K > 0.0)) throw ConfigurationError("cfl_tau: UserValue mode needs K > 0");
        info.K = *spec.K;
    } else if (spec.K) {
        if (!(*spec.K > 0.0)) throw ConfigurationError("cfl_tau: K override must be positive");
        info.K = *spec.K;
    } else {
        info.K = 1.0 / ((p - 1.0) * std::pow(2.0, p) * info.C *
                        std::pow(L_u0 + T * L_f + 3.0 * info.K2 + 1.0, p - 2.0));
    }
    if (a < sp / (p - 1.0)) {
        info.branch = CflBranch::Power;
        info.exponent = 2.0 * s + (s - a) * (p - 2.0);
        info.tau = info.K * std::pow(r, info.exponent);
    } else {
        info.branch = CflBranch::Log;
        info.exponent = a;
        info.tau = info.K * std::pow(r, a) / std::abs(std::log(r));
    }
    return info;
}

BoxOperator::BoxOperator(const WeightTable& table, int n, Extension exterior)
    : d_(table.d), n_(n), p_(table.p), far_(exterior.far_value()) {
    if (exterior.kind == ExtensionKind::CallerField) {
        throw ConfigurationError("BoxOperator: evolution needs a constant or zero far field");
    }
    const double span = 2.0 * n * table.h * std::sqrt(static_cast<double>(d_));
    if (table.tail_radius < span) {
        throw ConfigurationError("BoxOperator: weight table radius " + std::to_string(table.tail_radius) +
                                 " does not cover the box diameter " + std::to_string(span));
    }
    side_ = static_cast<std::size_t>(2 * n + 1);
    off_side_ = static_cast<std::size_t>(4 * n + 1);
    std::size_t off_total = 1;
    std::size_t box_total = 1;
    for (int k = 0; k < d_; ++k) {
        off_total *= off_side_;
        box_total *= side_;
    }
    offset_weight_.assign(off_total, 0.0);
    auto off_index = [&](const MultiIndex& a) {
        std::size_t idx = 0;
        for (int k = 0; k < d_; ++k) idx = idx * off_side_ + static_cast<std::size_t>(a[k] + 2 * n);
        return idx;
    };
    auto in_offsets = [&](const MultiIndex& a) {
        for (int k = 0; k < d_; ++k)
            if (std::abs(a[k]) > 2 * n) return false;
        return true;
    };
    for (const auto& a : table.inner)
        if (in_offsets(a)) offset_weight_[off_index(a)] = table.inner_weight;
    for (const auto& [a, w] : table.outer)
        if (in_offsets(a)) offset_weight_[off_index(a)] = w;

    // Kernel mass landing outside the box, seen from each box point.
    LatticeArray shape(d_, table.h, n);
    exterior_mass_.assign(box_total, table.tail_mass);
    for (std::size_t i = 0; i < box_total; ++i) {
        const MultiIndex alpha = shape.multi_index(i);
        double mass = 0.0;
        for (const auto& a : table.inner)
            if (!shape.contains(alpha + a)) mass += table.inner_weight;
        for (const auto& [a, w] : table.outer)
            if (!shape.contains(alpha + a)) mass += w;
        exterior_mass_[i] += mass;
    }
}

double BoxOperator::apply_at(const LatticeArray& U, std::size_t i) const {
    const double* u = U.values().data();
    const double* w = offset_weight_.data();
    const double ui = u[i];
    const double p = p_;
    double sum = 0.0;
    const MultiIndex alpha = U.multi_index(i);
    const int n = n_;
    const long os = static_cast<long>(off_side_);
    if (d_ == 1) {
        const double* wrow = w + (2 * n - alpha[0] - n);  // weight of gamma at wrow[gamma + n]
        for (std::size_t j = 0; j < side_; ++j) sum += wrow[j] * jp_unchecked(u[j] - ui, p);
    } else {
        const int n2 = d_ >= 3 ? 2 * n + 1 : 1;
        std::size_t j = 0;
        for (int g0 = -n; g0 <= n; ++g0) {
            for (int g1 = -n; g1 <= n; ++g1) {
                for (int t = 0; t < n2; ++t, ++j) {
                    const int g2 = d_ >= 3 ? t - n : 0;
                    long idx = (g0 - alpha[0] + 2 * n);
                    idx = idx * os + (g1 - alpha[1] + 2 * n);
                    if (d_ >= 3) idx = idx * os + (g2 - alpha[2] + 2 * n);
                    sum += w[idx] * jp_unchecked(u[j] - ui, p);
                }
            }
        }
    }
    return sum + exterior_mass_[i] * jp_unchecked(far_ - ui, p);
}

void BoxOperator::apply(const LatticeArray& U, std::vector<double>& out, int threads) const {
    out.resize(U.size());
    detail::parallel_for(U.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) out[i] = apply_at(U, i);
    });
}

LatticeArray step(const LatticeArray& U, const BoxOperator& op, const LatticeArray& f, double tau,
                  int threads, std::size_t step_index) {
    if (f.size() != U.size()) throw ConfigurationError("step: forcing and state sizes differ");
    std::vector<double> L;
    op.apply(U, L, threads);
    LatticeArray next = U;
    for (std::size_t i = 0; i < U.size(); ++i) {
        next[i] = U[i] + tau * (L[i] + f[i]);
        if (!std::isfinite(next[i])) {
            const MultiIndex a = U.multi_index(i);
            throw NumericalError("step " + std::to_string(step_index) + ": non-finite value at index (" +
                                 std::to_string(a[0]) + ", " + std::to_string(a[1]) + ", " +
                                 std::to_string(a[2]) + ")");
        }
    }
    return next;
}

EvolutionState run(const EvolutionProblem& problem, const SchemeConfig& config) {
    problem.validate();
    config.grid.validate();
    if (config.grid.d != problem.params.d) throw ConfigurationError("run: grid and operator dimensions differ");
    if (!(config.box_radius > 0.0)) throw ConfigurationError("run: box_radius must be positive");
    if (config.grid.extension.kind == ExtensionKind::CallerField) {
        throw ConfigurationError("run: the far field must be ConstantFarField or ZeroFarField");
    }
    const double h = config.grid.h;
    const int d = config.grid.d;
    const int n = static_cast<int>(std::lround(config.box_radius / h));

    GridSpec grid = config.grid;
    grid.rho_max = std::max(grid.rho_max, 2.0 * n * h * std::sqrt(double(d)) + h);
    auto table = std::make_shared<const WeightTable>(build_weights(grid, config.r, problem.params, config.kind));
    const BoxOperator op(*table, n, grid.extension);

    EvolutionState st;
    st.params = problem.params;
    st.table = table;
    st.far_value = grid.extension.far_value();
    const double a = problem.holder_exponent();
    st.cfl = cfl_tau(config.r, problem.params, a, problem.L_u0(), problem.L_f(), problem.T, config.cfl,
                     config.kind);
    const double requested = config.tau ? *config.tau : st.cfl.tau;
    if (!(requested > 0.0)) throw ConfigurationError("run: tau must be positive");
    st.N = static_cast<std::size_t>(std::ceil(problem.T / requested - 1e-9));
    st.N = std::max<std::size_t>(st.N, 1);
    st.tau = problem.T / static_cast<double>(st.N);
    st.cfl_satisfied = st.tau <= st.cfl.tau * (1.0 + 1e-12);
    if (!st.cfl_satisfied) {
        if (!config.allow_unstable) {
            throw CflError("run: tau = " + format_sci(st.tau) + " exceeds the CFL bound " +
                           format_sci(st.cfl.tau) + " (pass allow_unstable to override)");
        }
        st.overridden = true;
    }
    const std::size_t thin = config.thin > 0 ? static_cast<std::size_t>(config.thin)
                                             : std::max<std::size_t>(1, (st.N + 199) / 200);

    LatticeArray U = LatticeArray::sample(problem.u0, d, h, n);
    st.forcing = LatticeArray::sample(problem.f, d, h, n);
    st.sup_u0 = problem.u0.sup_bound;
    st.sup_f = problem.f.sup_bound;
    st.snapshots.push_back(U);
    st.times.push_back(0.0);
    st.steps.push_back(0);

    const double Lu = problem.L_u0();
    const double Lf = problem.L_f();
    auto& diag = st.diagnostics;
    auto check = [&](const LatticeArray& V, double t) {
        diag.linf_margin = std::min(diag.linf_margin, st.sup_u0 + t * st.sup_f - sup_abs(V.values()));
        if (config.full_diagnostics) {
            diag.holder_margin = std::min(diag.holder_margin, holder_margin(V, Lu + t * Lf, a, config.threads));
        }
        ++diag.steps_checked;
    };
    check(U, 0.0);

    double prev_sup = sup_value(U.values());
    for (std::size_t j = 1; j <= st.N; ++j) {
        const double t = st.tau * static_cast<double>(j);
        try {
            U = step(U, op, st.forcing, st.tau, config.threads, j);
        } catch (const NumericalError& e) {
            if (!st.overridden) throw;
            st.blew_up = true;
            st.blow_up_message = e.what();
            break;
        }
        check(U, t);
        const double cur_sup = sup_value(U.values());
        diag.max_increase = std::max(diag.max_increase, cur_sup - prev_sup);
        prev_sup = cur_sup;
        if (j % thin == 0 || j == st.N) {
            st.snapshots.push_back(U);
            st.times.push_back(j == st.N ? problem.T : t);
            st.steps.push_back(j);
        }
    }
    return st;
}

double interpolate(const EvolutionState& state, const MultiIndex& alpha, double t) {
    if (state.times.empty()) throw ContractError("interpolate: state has no snapshots");
    const double T = state.times.back();
    if (!(t >= 0.0 && t <= T)) throw ParameterError("interpolate: t must lie in [0, T]");
    const auto it = std::upper_bound(state.times.begin(), state.times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - state.times.begin());
    if (k == 0) k = 1;
    if (k >= state.times.size()) return state.snapshots.back().at(alpha);
    const std::size_t j = k - 1;
    const double t0 = state.times[j];
    const double t1 = state.times[k];
    if (t == t0) return state.snapshots[j].at(alpha);
    const double span = t1 - t0;
    return ((t1 - t) / span) * state.snapshots[j].at(alpha) + ((t - t0) / span) * state.snapshots[k].at(alpha);
}

TimeModulusReport time_modulus_check(const EvolutionState& state, const EvolutionProblem& problem,
                                     const SchemeConfig& config) {
    TimeModulusReport rep;
    rep.K2 = state.cfl.K2;
    const double a = problem.holder_exponent();
    const double p = problem.params.p;
    const double S = s_nu(a * (p - 1.0), config.r, problem.params.s, p);
    std::map<std::size_t, std::pair<double, double>> by_lag;  // lag steps -> (t_k, max modulus)
    const std::size_t m = state.snapshots.size();
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
            const auto& A = state.snapshots[j].values();
            const auto& B = state.snapshots[k].values();
            double diff = 0.0;
            for (std::size_t i = 0; i < A.size(); ++i) diff = std::max(diff, std::abs(B[i] - A[i]));
            const double tk = state.times[k] - state.times[j];
            const double bound = rep.K2 * tk * S + state.sup_f * tk;
            if (bound > 0.0) rep.max_ratio = std::max(rep.max_ratio, diff / bound);
            auto& slot = by_lag[state.steps[k] - state.steps[j]];
            slot.first = tk;
            slot.second = std::max(slot.second, diff);
        }
    }
    for (const auto& [lag, v] : by_lag) {
        rep.lags.push_back(v.first);
        rep.max_modulus.push_back(v.second);
    }
    return rep;
}

PairedReport continuous_dependence(const EvolutionProblem& a, const EvolutionProblem& b,
                                   SchemeConfig config) {
    const double cfl_a = cfl_tau(config.r, a.params, a.holder_exponent(), a.L_u0(), a.L_f(), a.T, config.cfl,
                                 config.kind).tau;
    const double cfl_b = cfl_tau(config.r, b.params, b.holder_exponent(), b.L_u0(), b.L_f(), b.T, config.cfl,
                                 config.kind).tau;
    if (!config.tau) config.tau = std::min(cfl_a, cfl_b);
    config.thin = 1;
    const EvolutionState A = run(a, config);
    const EvolutionState B = run(b, config);

    PairedReport rep;
    const auto& u = A.snapshots.front().values();
    const auto& v = B.snapshots.front().values();
    for (std::size_t i = 0; i < u.size(); ++i) rep.delta_u0 = std::max(rep.delta_u0, std::abs(u[i] - v[i]));
    for (std::size_t i = 0; i < A.forcing.size(); ++i) {
        rep.delta_f = std::max(rep.delta_f, std::abs(A.forcing[i] - B.forcing[i]));
    }
    // The far field enters like data outside the box.
    rep.delta_u0 = std::max(rep.delta_u0, std::abs(A.far_value - B.far_value));
    const std::size_t m = std::min(A.snapshots.size(), B.snapshots.size());
    for (std::size_t j = 0; j < m; ++j) {
        const auto& x = A.snapshots[j].values();
        const auto& y = B.snapshots[j].values();
        double diff = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) diff = std::max(diff, std::abs(x[i] - y[i]));
        rep.max_difference = std::max(rep.max_difference, diff);
        rep.max_excess = std::max(rep.max_excess, diff - (rep.delta_u0 + A.times[j] * rep.delta_f));
    }
    return rep;
}

std::string evolution_metadata_json(const EvolutionState& st, const EvolutionProblem& problem,
                                    const SchemeConfig& config) {
    nlohmann::ordered_json j;
    j["d"] = problem.params.d;
    j["p"] = problem.params.p;
    j["s"] = problem.params.s;
    j["T"] = problem.T;
    j["u0"] = problem.u0.name;
    j["f"] = problem.f.name;
    j["holder_exponent"] = problem.holder_exponent();
    j["L_u0"] = problem.L_u0();
    j["L_f"] = problem.L_f();
    j["h"] = config.grid.h;
    j["r"] = config.r;
    j["kind"] = to_string(config.kind);
    j["box_radius"] = config.box_radius;
    j["rho_max"] = st.table ? st.table->rho_max : config.grid.rho_max;
    j["far_value"] = st.far_value;
    j["tau"] = st.tau;
    j["N"] = st.N;
    j["cfl"] = {{"mode", config.cfl.mode == CflMode::Formula ? "Formula" : "UserValue"},
                {"branch", to_string(st.cfl.branch)},
                {"exponent", st.cfl.exponent},
                {"tau_bound", st.cfl.tau},
                {"K", st.cfl.K},
                {"C", st.cfl.C},
                {"K2", st.cfl.K2},
                {"K_holder", config.cfl.K_holder},
                {"satisfied", st.cfl_satisfied},
                {"overridden", st.overridden}};
    j["blew_up"] = st.blew_up;
    if (st.blew_up) j["blow_up_message"] = st.blow_up_message;
    nlohmann::ordered_json dg;
    dg["linf_margin"] = st.diagnostics.linf_margin;
    dg["max_sup_increase"] = st.diagnostics.max_increase;
    if (config.full_diagnostics) dg["holder_margin"] = st.diagnostics.holder_margin;
    dg["steps_checked"] = st.diagnostics.steps_checked;
    j["diagnostics"] = dg;
    j["stored_times"] = st.times;
    return j.dump(2) + "\n";
}

std::string evolution_snapshots_csv(const EvolutionState& st) {
    std::ostringstream out;
    if (st.snapshots.empty()) return {};
    const LatticeArray& first = st.snapshots.front();
    const int d = first.d();
    for (int k = 0; k < d; ++k) out << "i" << k << ",";
    for (int k = 0; k < d; ++k) out << "x" << k << ",";
    for (std::size_t c = 0; c < st.times.size(); ++c) {
        out << "t=" << format_sci(st.times[c]) << (c + 1 < st.times.size() ? "," : "\n");
    }
    for (std::size_t i = 0; i < first.size(); ++i) {
        const MultiIndex a = first.multi_index(i);
        const Vec x = first.coordinate(i);
        for (int k = 0; k < d; ++k) out << a[k] << ",";
        for (int k = 0; k < d; ++k) out << format_sci(x[k]) << ",";
        for (std::size_t c = 0; c < st.snapshots.size(); ++c) {
            out << format_sci(st.snapshots[c][i]) << (c + 1 < st.snapshots.size() ? "," : "\n");
        }
    }
    return out.str();
}

}  // namespace fplap
