#include "fplap/study.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fplap/errors.hpp"
#include "fplap/io.hpp"
#include "parallel.hpp"

namespace fplap {

namespace {

constexpr double kTolFloor = 1e-15;

void check_abscissae(std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !std::isfinite(x[i]))
            throw ParameterError("eoc: abscissae must be positive and finite");
        if (i > 0 && !(x[i] < x[i - 1]))
            throw ParameterError("eoc: abscissae must be strictly decreasing");
    }
}

// Runs fn(i) for every cell and rethrows the first failure by cell index.
template <class Fn>
void run_cells(std::size_t n, int threads, Fn&& fn) {
    std::vector<std::exception_ptr> failures(n);
    detail::parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            try {
                fn(i);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    });
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

double finest_positive(const std::vector<double>& errors) {
    double m = std::numeric_limits<double>::infinity();
    for (double e : errors)
        if (e > 0.0) m = std::min(m, e);
    return m;
}

// Oracle at `spec`, loosened tenfold (at most four times) while the quadrature cannot converge.
QuadResult loosening_reference(const ScalarField& phi, const Vec& x, const OperatorParams& params,
                               QuadSpec spec, bool& limited) {
    for (int attempt = 0;; ++attempt) {
        try {
            return reference_fraclap(phi, x, params, spec);
        } catch (const QuadratureError&) {
            if (attempt == 4) throw;
            limited = true;
            spec = spec.tightened(10.0);
        }
    }
}

EocReport finish(std::vector<double> abscissae, std::vector<double> errors,
                 const SweepOptions& options, bool oracle_limited) {
    EocReport rep = eoc(abscissae, errors, options.fit_points);
    rep.expected_slope = options.expected_slope;
    rep.provenance = options.provenance;
    rep.oracle_limited = oracle_limited;
    return rep;
}

}  // namespace

EocReport eoc(std::span<const double> abscissae, std::span<const double> errors, int finest) {
    if (abscissae.size() != errors.size())
        throw ParameterError("eoc: abscissae and errors differ in length");
    check_abscissae(abscissae);
    EocReport rep;
    rep.abscissae.assign(abscissae.begin(), abscissae.end());
    rep.errors.assign(errors.begin(), errors.end());

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        const double e = errors[i];
        if (e == 0.0) {
            ++rep.zero_errors;
            continue;
        }
        if (!(e > 0.0) || !std::isfinite(e))
            throw ParameterError("eoc: errors must be nonnegative and finite");
        lx.push_back(std::log(abscissae[i]));
        ly.push_back(std::log(e));
    }
    if (finest > 0 && lx.size() > static_cast<std::size_t>(finest)) {
        lx.erase(lx.begin(), lx.end() - finest);
        ly.erase(ly.begin(), ly.end() - finest);
    }
    if (lx.size() < 3)
        throw InsufficientDataError("eoc: need at least 3 points with positive error, got " +
                                    std::to_string(lx.size()));

    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    rep.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double dev = ly[i] - (my + rep.slope * (lx[i] - mx));
        ss += dev * dev;
    }
    rep.residual = std::sqrt(ss / n);
    rep.fitted_points = static_cast<int>(lx.size());
    return rep;
}

MuChoice mu_select(const OperatorParams& params, const RateRegime& regime) {
    const double p = params.p;
    const double s = params.s;
    if (!(p > 1.0)) throw ParameterError("mu_select: requires p > 1");
    MuChoice c;
    c.gamma = gamma_exponent(p, regime);
    const double g = c.gamma;
    const double q = p * (1.0 - s);
    if (p > 3.0) {
        c.range = "p>3";
        if (q >= 2.0) {
            c.mu = 1.0;
            c.order = 1.0;
        } else {
            c.mu = 1.0 / (g + 2.0);
            c.order = (g + q) / (g + 2.0);
        }
    } else if (p >= 2.0) {
        c.range = "2<=p<=3";
        if (q >= 2.0) {
            c.mu = 1.0 / (g + q);
            c.order = 1.0;
        } else {
            c.mu = 1.0 / (g + 2.0);
            c.order = (g + q) / (g + 2.0);
        }
    } else {
        c.range = "1<p<2";
        c.mu = (p - 1.0) / (g + p);
        c.order = (p - 1.0) * (1.0 - s * p / (g + p));
    }
    return c;
}

double expected_expansion_order(ExpansionKind kind, const OperatorParams& params,
                                const RateRegime& regime, bool one_dimensional) {
    const double p = params.p;
    const double s = params.s;
    switch (kind) {
        case ExpansionKind::LocalSurface:
        case ExpansionKind::LocalVolume:
            return gamma_exponent(p, regime);
        case ExpansionKind::BucurSquassina:
            return 2.0 - 2.0 * s;
        case ExpansionKind::Fractional:
            break;
    }
    if (one_dimensional && params.d == 1 && regime.tag == RateTag::NonvanishingGradient)
        return 2.0 + p * (1.0 - s);
    return gamma_exponent(p, regime) + p * (1.0 - s);
}

EocReport expansion_sweep(const ScalarField& phi, const Vec& x, const OperatorParams& params,
                          ExpansionKind kind, std::span<const double> radii,
                          const SweepOptions& options) {
    check_abscissae(radii);
    const bool local = kind == ExpansionKind::LocalSurface || kind == ExpansionKind::LocalVolume;
    const std::size_t n = radii.size();

    auto evaluate = [&](double r, const QuadSpec& spec) {
        switch (kind) {
            case ExpansionKind::LocalSurface:
                return mvp_local_surface(phi, x, r, params.p, params.d, spec);
            case ExpansionKind::LocalVolume:
                return mvp_local_volume(phi, x, r, params.p, params.d, spec);
            case ExpansionKind::Fractional:
                return mvp_fractional(phi, x, r, params, spec);
            case ExpansionKind::BucurSquassina:
                return bs_expansion(phi, x, r, params, spec);
        }
        throw ParameterError("expansion_sweep: unknown kind");
    };

    bool limited = false;
    QuadResult ref;
    if (options.exact) {
        ref.value = *options.exact;
    } else if (local) {
        ref.value = reference_plap(phi, x, params.p, params.d);
    } else {
        ref = loosening_reference(phi, x, params, options.spec, limited);
    }

    std::vector<ExpansionResult> vals(n);
    std::vector<QuadSpec> specs(n, options.spec);
    run_cells(n, options.threads, [&](std::size_t i) { vals[i] = evaluate(radii[i], specs[i]); });

    std::vector<double> errors(n);
    auto refresh = [&] {
        for (std::size_t i = 0; i < n; ++i) errors[i] = std::abs(vals[i].value - ref.value);
    };
    refresh();

    const double frac = options.oracle_fraction;
    // Oracle first: its error enters every cell.
    QuadSpec ref_spec = options.spec;
    while (!options.exact && !local) {
        const double target = frac * finest_positive(errors);
        if (!(ref.error > target)) break;
        if (ref_spec.abs_tol <= kTolFloor && ref_spec.rel_tol <= kTolFloor) {
            limited = true;
            break;
        }
        ref_spec = ref_spec.tightened(0.1);
        ref_spec.abs_tol = std::max(ref_spec.abs_tol, kTolFloor);
        ref_spec.rel_tol = std::max(ref_spec.rel_tol, kTolFloor);
        try {
            ref = reference_fraclap(phi, x, params, ref_spec);
        } catch (const QuadratureError&) {
            // tighter tolerances ran into rounding; keep the last converged oracle
            limited = true;
            break;
        }
        refresh();
    }
    for (;;) {
        std::vector<std::size_t> redo;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(vals[i].quadrature_error > frac * errors[i])) continue;
            if (specs[i].abs_tol <= kTolFloor && specs[i].rel_tol <= kTolFloor) {
                if (errors[i] > 0.0) limited = true;
                continue;
            }
            specs[i] = specs[i].tightened(0.1);
            specs[i].abs_tol = std::max(specs[i].abs_tol, kTolFloor);
            specs[i].rel_tol = std::max(specs[i].rel_tol, kTolFloor);
            redo.push_back(i);
        }
        if (redo.empty()) break;
        run_cells(redo.size(), options.threads, [&](std::size_t k) {
            const std::size_t i = redo[k];
            try {
                vals[i] = evaluate(radii[i], specs[i]);
            } catch (const QuadratureError&) {
                specs[i].abs_tol = specs[i].rel_tol = kTolFloor;  // stop refining this cell
            }
        });
        refresh();
    }

    return finish({radii.begin(), radii.end()}, std::move(errors), options, limited);
}

double Coupling::radius(double h) const {
    if (!(mu > 0.0 && mu <= 1.0)) throw ParameterError("coupling: mu must lie in (0, 1]");
    if (!(c > 0.0)) throw ParameterError("coupling: c must be positive");
    return c * std::pow(h, mu);
}

EocReport consistency_sweep(const ScalarField& phi, const Vec& x, const OperatorParams& params,
                            WeightKind kind, std::span<const double> hs, const Coupling& coupling,
                            const SweepOptions& options, const ConsistencyOptions& base) {
    check_abscissae(hs);
    params.validate();
    const std::size_t n = hs.size();

    bool limited = false;
    QuadResult ref;
    std::optional<double> exact = options.exact ? options.exact : base.exact;
    QuadSpec ref_spec = base.reference_spec;
    if (exact) {
        ref.value = *exact;
    } else {
        ref = loosening_reference(phi, x, params, ref_spec, limited);
    }

    std::vector<double> discrete(n);
    run_cells(n, options.threads, [&](std::size_t i) {
        ConsistencyOptions o = base;
        o.exact = 0.0;
        discrete[i] = consistency_error(phi, x, params, hs[i], coupling.radius(hs[i]), kind, o).discrete;
    });

    std::vector<double> errors(n);
    auto refresh = [&] {
        for (std::size_t i = 0; i < n; ++i) errors[i] = std::abs(discrete[i] - ref.value);
    };
    refresh();

    while (!exact) {
        const double target = options.oracle_fraction * finest_positive(errors);
        if (!(ref.error > target)) break;
        if (ref_spec.abs_tol <= kTolFloor && ref_spec.rel_tol <= kTolFloor) {
            limited = true;
            break;
        }
        ref_spec = ref_spec.tightened(0.1);
        ref_spec.abs_tol = std::max(ref_spec.abs_tol, kTolFloor);
        ref_spec.rel_tol = std::max(ref_spec.rel_tol, kTolFloor);
        try {
            ref = reference_fraclap(phi, x, params, ref_spec);
        } catch (const QuadratureError&) {
            // tighter tolerances ran into rounding; keep the last converged oracle
            limited = true;
            break;
        }
        refresh();
    }
    return finish({hs.begin(), hs.end()}, std::move(errors), options, limited);
}

RefinementReport refinement_cauchy(const EvolutionProblem& problem, const SchemeConfig& base,
                                   const RefinementOptions& options) {
    if (options.levels < 2) throw ParameterError("refinement_cauchy: levels must be >= 2");
    if (!(options.tau_scale > 0.0)) throw ParameterError("refinement_cauchy: tau_scale must be positive");
    problem.validate();

    RefinementReport rep;
    std::vector<EvolutionState> states;
    const double a = problem.holder_exponent();
    for (int k = 0; k < options.levels; ++k) {
        SchemeConfig cfg = base;
        const double scale = std::ldexp(1.0, -k);
        cfg.grid.h = base.grid.h * scale;
        cfg.r = base.r * std::pow(scale, options.mu);
        cfg.thin = 1;
        const CflInfo info = cfl_tau(cfg.r, problem.params, a, problem.L_u0(), problem.L_f(),
                                     problem.T, cfg.cfl, cfg.kind);
        if (options.tau_scale != 1.0) {
            cfg.tau = options.tau_scale * info.tau;
            if (options.tau_scale > 1.0) cfg.allow_unstable = true;
        }
        EvolutionState st = run(problem, cfg);
        rep.h.push_back(cfg.grid.h);
        rep.r.push_back(cfg.r);
        rep.tau.push_back(st.tau);
        rep.cfl_tau.push_back(info.tau);
        rep.linf_margin.push_back(st.diagnostics.linf_margin);
        rep.blew_up.push_back(st.blew_up);
        if (!st.blew_up && st.diagnostics.linf_margin < -1e-12) rep.bound_violated = true;
        states.push_back(std::move(st));
    }

    const double inf = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < options.levels; ++k) {
        const EvolutionState& c = states[k];
        const EvolutionState& f = states[k + 1];
        if (c.blew_up || f.blew_up || c.snapshots.empty() || f.snapshots.empty()) {
            rep.differences.push_back(inf);
            continue;
        }
        const double T = std::min(c.times.back(), f.times.back());
        double worst = 0.0;
        for (std::size_t j = 0; j < c.snapshots.size(); ++j) {
            const double t = c.times[j];
            if (t > T) break;
            const LatticeArray& U = c.snapshots[j];
            for (std::size_t i = 0; i < U.size(); ++i) {
                MultiIndex alpha = U.multi_index(i);
                for (int m = 0; m < U.d(); ++m) alpha[m] *= 2;
                if (!f.snapshots.front().contains(alpha)) continue;
                worst = std::max(worst, std::abs(U[i] - interpolate(f, alpha, t)));
            }
        }
        rep.differences.push_back(std::isfinite(worst) ? worst : inf);
    }

    rep.decreasing = true;
    for (std::size_t k = 0; k < rep.differences.size(); ++k) {
        if (!std::isfinite(rep.differences[k])) rep.decreasing = false;
        if (k > 0 && !(rep.differences[k] < rep.differences[k - 1])) rep.decreasing = false;
    }
    return rep;
}

std::vector<Fig1Row> fig1_table(std::span<const double> ps, std::span<const double> ss,
                                const RateRegime& regime) {
    std::vector<Fig1Row> rows;
    for (double p : ps) {
        double g;
        try {
            g = gamma_exponent(p, regime);
        } catch (const ParameterError&) {
            continue;
        }
        for (double s : ss) {
            if (!(s > 0.0 && s < 1.0)) throw ParameterError("fig1_table: s must lie in (0, 1)");
            rows.push_back({p, s, g, g + p * (1.0 - s)});
        }
    }
    return rows;
}

std::string eoc_csv(const EocReport& report) {
    std::ostringstream os;
    os << "abscissa,error,expected_order,fitted_order,residual\n";
    const std::string expected =
        report.expected_slope ? format_sci(*report.expected_slope) : std::string("nan");
    for (std::size_t i = 0; i < report.abscissae.size(); ++i) {
        os << format_sci(report.abscissae[i]) << ',' << format_sci(report.errors[i]) << ','
           << expected << ',' << format_sci(report.slope) << ',' << format_sci(report.residual)
           << '\n';
    }
    return os.str();
}

std::string eoc_json(const EocReport& report, const std::string& name) {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["abscissae"] = report.abscissae;
    j["errors"] = report.errors;
    j["fitted_order"] = report.slope;
    j["residual"] = report.residual;
    j["fitted_points"] = report.fitted_points;
    j["zero_errors"] = report.zero_errors;
    if (report.expected_slope)
        j["expected_order"] = *report.expected_slope;
    else
        j["expected_order"] = nullptr;
    j["provenance"] = report.provenance;
    j["oracle_limited"] = report.oracle_limited;
    return j.dump(2) + "\n";
}

}  // namespace fplap
