#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fplap/discrete_op.hpp"
#include "fplap/errors.hpp"
#include "fplap/expansion.hpp"
#include "fplap/io.hpp"
#include "fplap/lattice.hpp"
#include "fplap/study.hpp"
#include "selftest.hpp"

namespace fplap::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void write_out(const Options& opt, const std::string& file, const std::string& content) {
    atomic_write(opt.out / file, content);
}

// Writes stem.csv or stem.json according to --format.
void emit(const Options& opt, const std::string& stem, const std::string& csv, const std::string& js) {
    if (opt.format == "json")
        write_out(opt, stem + ".json", js);
    else
        write_out(opt, stem + ".csv", csv);
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json eoc_object(const EocReport& rep, const std::string& name) {
    return json::parse(eoc_json(rep, name));
}

QuadSpec read_spec(const IniConfig& cfg, const std::string& section, const QuadSpec& base) {
    QuadSpec q = base;
    q.abs_tol = cfg.num(section, "abs_tol", q.abs_tol);
    q.rel_tol = cfg.num(section, "rel_tol", q.rel_tol);
    q.max_subdivisions = cfg.integer(section, "max_subdivisions", q.max_subdivisions);
    q.validate();
    return q;
}

std::string point_label(const Vec& x, int d) {
    std::ostringstream os;
    for (int k = 0; k < d; ++k) os << (k ? "," : "") << format_sci(x[k]);
    return os.str();
}

struct Expected {
    std::optional<double> slope;
    std::string provenance;
};

Expected expansion_expectation(ExpansionKind kind, const OperatorParams& params,
                               const RateRegime& regime) {
    Expected e;
    try {
        e.slope = expected_expansion_order(kind, params, regime, true);
    } catch (const ParameterError&) {
        e.provenance = "no proved rate in this regime";
        return e;
    }
    switch (kind) {
        case ExpansionKind::LocalSurface:
        case ExpansionKind::LocalVolume:
            e.provenance = "gamma";
            break;
        case ExpansionKind::BucurSquassina:
            e.provenance = "2 - 2s";
            break;
        case ExpansionKind::Fractional:
            e.provenance = (params.d == 1 && regime.tag == RateTag::NonvanishingGradient)
                               ? "2 + p(1-s), d = 1 with nonvanishing gradient"
                               : "gamma + p(1-s)";
            break;
    }
    return e;
}

ExpansionResult evaluate_expansion(ExpansionKind kind, const ScalarField& phi, const Vec& x, double r,
                                   const OperatorParams& params, const QuadSpec& spec) {
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
    throw ConfigurationError("unknown expansion kind");
}

std::string fmt(double v) { return format_sci(v); }

// One EocReport per (point, kind) with CSV rows of raw values.
int run_expand(const IniConfig& cfg, const Options& opt, const std::string& section,
               const std::string& stem) {
    const OperatorParams params = read_params(cfg);
    const RateRegime regime = read_regime(cfg);
    const ScalarField phi = read_field(cfg, "field", params.d, params.s);
    const auto points = cfg.points(section, "points", params.d);
    std::vector<ExpansionKind> kinds;
    for (const auto& k : cfg.strings(section, "kinds")) kinds.push_back(expansion_kind_from_string(k));
    const auto radii = cfg.numbers(section, "radii");
    const bool oracle = cfg.boolean(section, "oracle", true);
    SweepOptions so;
    so.spec = read_spec(cfg, section, so.spec);
    so.fit_points = cfg.integer(section, "fit_points", so.fit_points);
    so.exact = cfg.opt_num(section, "exact");
    so.threads = opt.threads;
    cfg.check_unused();
    if (oracle && radii.size() < 3)
        throw ConfigurationError("[" + section + "] radii: the oracle comparison needs at least 3 radii");

    std::ostringstream csv;
    csv << "point,";
    for (int k = 0; k < params.d; ++k) csv << "x" << k << ",";
    csv << "kind,r,value,error\n";
    json rows = json::array();
    json reports = json::array();

    for (std::size_t i = 0; i < points.size(); ++i) {
        for (ExpansionKind kind : kinds) {
            std::vector<double> errors(radii.size(), kNan);
            if (oracle) {
                const Expected e = expansion_expectation(kind, params, regime);
                SweepOptions o = so;
                o.expected_slope = e.slope;
                o.provenance = e.provenance;
                const EocReport rep = expansion_sweep(phi, points[i], params, kind, radii, o);
                errors = rep.errors;
                const std::string name = "p" + std::to_string(i) + "_" + to_string(kind);
                emit(opt, stem + "_eoc_" + name, eoc_csv(rep), eoc_json(rep, name));
                reports.push_back(eoc_object(rep, name));
                std::cout << "point " << i << " " << to_string(kind) << ": fitted order "
                          << rep.slope;
                if (rep.expected_slope) std::cout << ", expected " << *rep.expected_slope;
                std::cout << "\n";
            }
            for (std::size_t j = 0; j < radii.size(); ++j) {
                const ExpansionResult v = evaluate_expansion(kind, phi, points[i], radii[j], params, so.spec);
                csv << i << "," << point_label(points[i], params.d) << "," << to_string(kind) << ","
                    << fmt(radii[j]) << "," << fmt(v.value) << "," << fmt(errors[j]) << "\n";
                json row;
                row["point"] = i;
                row["kind"] = to_string(kind);
                row["r"] = radii[j];
                row["value"] = v.value;
                row["error"] = num_or_null(errors[j]);
                rows.push_back(row);
            }
        }
    }
    json all;
    all["rows"] = rows;
    all["eoc"] = reports;
    emit(opt, stem, csv.str(), all.dump(2) + "\n");
    return kOk;
}

int run_consistency(const IniConfig& cfg, const Options& opt) {
    const OperatorParams params = read_params(cfg);
    const RateRegime regime = read_regime(cfg);
    const ScalarField phi = read_field(cfg, "field", params.d, params.s);
    const Vec x = cfg.points("study", "point", params.d).front();
    const WeightKind kind = weight_kind_from_string(cfg.str("study", "kind", "W1"));
    const auto hs = cfg.numbers("study", "h");
    const MuChoice choice = mu_select(params, regime);
    Coupling coupling;
    const std::string mu_text = cfg.str("study", "mu", "auto");
    coupling.mu = mu_text == "auto" ? choice.mu : parse_number(mu_text, "[study] mu");
    coupling.c = cfg.num("study", "c", coupling.c);
    SweepOptions so;
    so.fit_points = cfg.integer("study", "fit_points", so.fit_points);
    so.exact = cfg.opt_num("study", "exact");
    so.threads = opt.threads;
    ConsistencyOptions co;
    co.rho_max = cfg.num("study", "rho_max", co.rho_max);
    co.reference_spec = read_spec(cfg, "study", co.reference_spec);
    cfg.check_unused();

    if (std::abs(coupling.mu - choice.mu) < 1e-12) {
        so.expected_slope = choice.order;
        so.provenance = "mu selection, range " + choice.range;
    } else {
        so.provenance = "mu set by the caller; no expected order";
    }
    const EocReport rep = consistency_sweep(phi, x, params, kind, hs, coupling, so, co);
    emit(opt, "consistency", eoc_csv(rep), eoc_json(rep, "consistency"));
    std::cout << "consistency " << to_string(kind) << " mu " << coupling.mu << ": fitted order "
              << rep.slope;
    if (rep.expected_slope) std::cout << ", expected " << *rep.expected_slope;
    std::cout << "\n";
    return kOk;
}

int run_refinement(const IniConfig& cfg, const Options& opt) {
    const EvolutionProblem problem = read_problem(cfg);
    const SchemeConfig scheme = read_scheme(cfg, opt);
    RefinementOptions ro;
    ro.levels = cfg.integer("study", "levels", ro.levels);
    ro.mu = cfg.num("study", "mu", ro.mu);
    ro.tau_scale = cfg.num("study", "tau_scale", ro.tau_scale);
    cfg.check_unused();
    if (ro.tau_scale > 1.0 && !opt.allow_unstable && !scheme.allow_unstable)
        throw CflError("[study] tau_scale > 1 exceeds the CFL bound; pass --allow-unstable");

    const RefinementReport rep = refinement_cauchy(problem, scheme, ro);
    std::ostringstream csv;
    csv << "level,h,r,tau,cfl_tau,linf_margin,blew_up,difference\n";
    json levels = json::array();
    for (std::size_t k = 0; k < rep.h.size(); ++k) {
        const double diff = k < rep.differences.size() ? rep.differences[k] : kNan;
        csv << k << "," << fmt(rep.h[k]) << "," << fmt(rep.r[k]) << "," << fmt(rep.tau[k]) << ","
            << fmt(rep.cfl_tau[k]) << "," << fmt(rep.linf_margin[k]) << "," << (rep.blew_up[k] ? 1 : 0)
            << "," << fmt(diff) << "\n";
        json l;
        l["h"] = rep.h[k];
        l["r"] = rep.r[k];
        l["tau"] = rep.tau[k];
        l["cfl_tau"] = rep.cfl_tau[k];
        l["linf_margin"] = num_or_null(rep.linf_margin[k]);
        l["blew_up"] = static_cast<bool>(rep.blew_up[k]);
        l["difference_to_next"] = num_or_null(diff);
        levels.push_back(l);
    }
    json j;
    j["levels"] = levels;
    j["decreasing"] = rep.decreasing;
    j["bound_violated"] = rep.bound_violated;
    j["tau_scale"] = ro.tau_scale;
    emit(opt, "refinement", csv.str(), j.dump(2) + "\n");
    std::cout << "refinement differences:";
    for (double d : rep.differences) std::cout << " " << d;
    std::cout << "\nstrictly decreasing: " << (rep.decreasing ? "yes" : "no")
              << ", L-infinity bound violated: " << (rep.bound_violated ? "yes" : "no") << "\n";
    return kOk;
}

int run_fig1(const IniConfig& cfg, const Options& opt) {
    const auto ps = cfg.numbers("study", "p");
    const auto ss = cfg.numbers("study", "s");
    const double eps = cfg.num("study", "epsilon", 0.05);
    cfg.check_unused();
    const RateRegime uni{RateTag::Uniform, eps};
    const RateRegime nv{RateTag::NonvanishingGradient, eps};
    std::ostringstream csv;
    csv << "p,s,gamma_uniform,nu_uniform,gamma_nonvanishing,nu_nonvanishing\n";
    json rows = json::array();
    for (double p : ps) {
        for (double s : ss) {
            if (!(p > 1.0) || !(s > 0.0 && s < 1.0))
                throw ConfigurationError("[study] fig1 grid needs p > 1 and 0 < s < 1");
            double gu = kNan, gn = gamma_exponent(p, nv);
            try {
                gu = gamma_exponent(p, uni);
            } catch (const ParameterError&) {
            }
            const double q = p * (1.0 - s);
            csv << fmt(p) << "," << fmt(s) << "," << fmt(gu) << "," << fmt(gu + q) << "," << fmt(gn)
                << "," << fmt(gn + q) << "\n";
            json r;
            r["p"] = p;
            r["s"] = s;
            r["gamma_uniform"] = num_or_null(gu);
            r["nu_uniform"] = num_or_null(gu + q);
            r["gamma_nonvanishing"] = gn;
            r["nu_nonvanishing"] = gn + q;
            rows.push_back(r);
        }
    }
    emit(opt, "fig1", csv.str(), rows.dump(2) + "\n");
    std::cout << "fig1: " << rows.size() << " rows\n";
    return kOk;
}

int run_fig2(const IniConfig& cfg, const Options& opt) {
    const int d = cfg.integer("operator", "d", 1);
    const RateRegime regime = read_regime(cfg);
    const auto pairs = cfg.strings("study", "pairs");
    const auto hs = cfg.numbers("study", "h");
    const Vec x = cfg.points("study", "point", d).front();
    const double c = cfg.num("study", "c", 4.0);
    const double cutoff = cfg.num("study", "cutoff", 1e14);
    const WeightKind kind = weight_kind_from_string(cfg.str("study", "kind", "W1"));
    SweepOptions so;
    so.fit_points = cfg.integer("study", "fit_points", so.fit_points);
    so.exact = 0.0;
    so.threads = opt.threads;
    ConsistencyOptions co;
    co.rho_max = cfg.num("study", "rho_max", 9.0);
    cfg.check_unused();

    std::ostringstream csv;
    csv << "p,s,mu,expected_order,fitted_order,residual\n";
    json out = json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto colon = pairs[i].find(':');
        if (colon == std::string::npos)
            throw ConfigurationError("[study] pairs: expected p:s, got '" + pairs[i] + "'");
        const OperatorParams params{d, parse_number(pairs[i].substr(0, colon), "[study] pairs"),
                                    parse_number(pairs[i].substr(colon + 1), "[study] pairs")};
        params.validate();
        const MuChoice choice = mu_select(params, regime);
        SweepOptions o = so;
        o.expected_slope = choice.order;
        o.provenance = "mu selection, range " + choice.range;
        const ScalarField phi = heaviside_s(params.s, cutoff);
        const EocReport rep =
            consistency_sweep(phi, x, params, kind, hs, Coupling{choice.mu, c}, o, co);
        const std::string name = "pair" + std::to_string(i);
        emit(opt, "fig2_" + name, eoc_csv(rep), eoc_json(rep, name));
        csv << fmt(params.p) << "," << fmt(params.s) << "," << fmt(choice.mu) << "," << fmt(choice.order)
            << "," << fmt(rep.slope) << "," << fmt(rep.residual) << "\n";
        json r = eoc_object(rep, name);
        r["p"] = params.p;
        r["s"] = params.s;
        r["mu"] = choice.mu;
        out.push_back(r);
        std::cout << "p " << params.p << " s " << params.s << " mu " << choice.mu << ": fitted order "
                  << rep.slope << ", expected " << choice.order << "\n";
    }
    emit(opt, "fig2", csv.str(), out.dump(2) + "\n");
    return kOk;
}

int run_synthetic(const IniConfig& cfg, const Options& opt) {
    const auto exps = cfg.numbers("study", "exponents");
    const auto hs = cfg.numbers("study", "h", {0.1, 0.05, 0.025, 0.0125});
    const double C = cfg.num("study", "constant", 1.0);
    cfg.check_unused();
    std::ostringstream csv;
    csv << "exponent,fitted_order,residual\n";
    json out = json::array();
    for (double k : exps) {
        std::vector<double> e;
        for (double h : hs) e.push_back(C * std::pow(h, k));
        EocReport rep = eoc(hs, e, 0);
        rep.expected_slope = k;
        rep.provenance = "synthetic power law";
        csv << fmt(k) << "," << fmt(rep.slope) << "," << fmt(rep.residual) << "\n";
        out.push_back(eoc_object(rep, "synthetic"));
        std::cout << "exponent " << k << ": fitted order " << rep.slope << "\n";
    }
    emit(opt, "synthetic", csv.str(), out.dump(2) + "\n");
    return kOk;
}

}  // namespace

OperatorParams read_params(const IniConfig& cfg) {
    OperatorParams p;
    p.d = cfg.integer("operator", "d", 1);
    p.p = cfg.num("operator", "p");
    p.s = cfg.num("operator", "s");
    if (p.d < 1 || p.d > 3) throw ConfigurationError("[operator] d: must be 1, 2 or 3");
    p.validate();
    return p;
}

RateRegime read_regime(const IniConfig& cfg) {
    RateRegime r;
    const std::string tag = cfg.str("operator", "regime", "nonvanishing");
    if (tag == "uniform")
        r.tag = RateTag::Uniform;
    else if (tag == "nonvanishing")
        r.tag = RateTag::NonvanishingGradient;
    else
        throw ConfigurationError("[operator] regime: expected uniform or nonvanishing, got '" + tag + "'");
    r.epsilon = cfg.num("operator", "epsilon", r.epsilon);
    if (!(r.epsilon > 0.0)) throw ConfigurationError("[operator] epsilon: must be positive");
    return r;
}

ScalarField read_field(const IniConfig& cfg, const std::string& section, int d, double default_exponent) {
    FieldOptions fo;
    fo.value = cfg.num(section, "value", fo.value);
    if (cfg.has(section, "gradient")) {
        const auto g = cfg.numbers(section, "gradient");
        if (static_cast<int>(g.size()) != d)
            throw ConfigurationError("[" + section + "] gradient: needs d = " + std::to_string(d) + " components");
        fo.gradient = {0.0, 0.0, 0.0};
        for (int k = 0; k < d; ++k) fo.gradient[k] = g[k];
    }
    fo.clamp = cfg.num(section, "clamp", fo.clamp);
    fo.s = cfg.num(section, "exponent", default_exponent);
    fo.cutoff = cfg.num(section, "cutoff", fo.cutoff);
    ScalarField phi = make_builtin(cfg.str(section, "name"), d, fo);
    if (cfg.has(section, "scale")) phi = phi.scaled(cfg.num(section, "scale"));
    return phi;
}

EvolutionProblem read_problem(const IniConfig& cfg) {
    EvolutionProblem pr;
    pr.params = read_params(cfg);
    pr.u0 = read_field(cfg, "u0", pr.params.d, pr.params.s);
    pr.f = cfg.has_section("f") ? read_field(cfg, "f", pr.params.d, pr.params.s) : constant_field(0.0);
    pr.T = cfg.num("evolve", "T", pr.T);
    pr.validate();
    return pr;
}

SchemeConfig read_scheme(const IniConfig& cfg, const Options& opt) {
    SchemeConfig sc;
    sc.grid.d = cfg.integer("operator", "d", 1);
    sc.grid.h = cfg.num("evolve", "h");
    sc.grid.rho_max = cfg.num("evolve", "rho_max", sc.grid.rho_max);
    const std::string ext = cfg.str("evolve", "extension", "zero");
    if (ext == "zero")
        sc.grid.extension = Extension::zero();
    else if (ext == "constant")
        sc.grid.extension = Extension::constant(cfg.num("evolve", "far_value"));
    else
        throw ConfigurationError("[evolve] extension: expected zero or constant, got '" + ext + "'");
    sc.r = cfg.num("evolve", "r");
    sc.box_radius = cfg.num("evolve", "box_radius", sc.box_radius);
    sc.kind = weight_kind_from_string(cfg.str("evolve", "kind", "W1"));
    sc.tau = cfg.opt_num("evolve", "tau");
    const std::string mode = cfg.str("evolve", "cfl", "formula");
    if (mode == "formula")
        sc.cfl.mode = CflMode::Formula;
    else if (mode == "user")
        sc.cfl.mode = CflMode::UserValue;
    else
        throw ConfigurationError("[evolve] cfl: expected formula or user, got '" + mode + "'");
    sc.cfl.K = cfg.opt_num("evolve", "K");
    if (sc.cfl.mode == CflMode::UserValue && !sc.cfl.K)
        throw ConfigurationError("[evolve] K: required when cfl = user");
    sc.cfl.K_holder = cfg.num("evolve", "K_holder", sc.cfl.K_holder);
    sc.cfl.calibration_levels = cfg.integer("evolve", "calibration_levels", sc.cfl.calibration_levels);
    sc.thin = cfg.integer("evolve", "thin", sc.thin);
    sc.full_diagnostics = cfg.boolean("evolve", "full_diagnostics", sc.full_diagnostics);
    sc.allow_unstable = cfg.boolean("evolve", "allow_unstable", false) || opt.allow_unstable;
    sc.threads = opt.threads;
    sc.grid.validate();
    return sc;
}

int cmd_expand(const IniConfig& cfg, const Options& opt) { return run_expand(cfg, opt, "expand", "expand"); }

int cmd_weights(const IniConfig& cfg, const Options& opt) {
    const OperatorParams params = read_params(cfg);
    const WeightKind kind = weight_kind_from_string(cfg.str("weights", "kind", "W1"));
    const auto radii = cfg.numbers("weights", "radii");
    const double default_ratio = kind == WeightKind::W1 ? 0.25 : 0.25 / std::sqrt(params.d);
    const double ratio = cfg.num("weights", "h_ratio", default_ratio);
    const auto fixed_h = cfg.opt_num("weights", "h");
    const double rho_max = cfg.num("weights", "rho_max", 2.0);
    const double sp = params.sp();
    const auto nus = cfg.numbers("weights", "nus", {0.5 * sp, sp, 2.0 * sp});
    const std::string cache = cfg.str("weights", "cache_dir", "");
    cfg.check_unused();

    std::ostringstream csv;
    csv << "r,h,inner_weight,tail_mass,total,far,total_scaled";
    for (std::size_t i = 0; i < nus.size(); ++i) csv << ",moment_" << i << ",moment_scaled_" << i;
    csv << "\n";
    json tables = json::array();
    std::vector<double> tot, far;
    std::vector<std::vector<double>> mom(nus.size());
    for (double r : radii) {
        GridSpec grid;
        grid.d = params.d;
        grid.h = fixed_h ? *fixed_h : ratio * r;
        grid.rho_max = rho_max;
        grid.extension = Extension::zero();
        grid.validate();
        const WeightTable t = cache.empty() ? build_weights(grid, r, params, kind)
                                            : cached_weights(cache, grid, r, params, kind);
        const SummabilityReport rep = summability_report(t, nus);
        const SummabilityRatios rat = summability_ratios(t, nus);
        csv << fmt(r) << "," << fmt(grid.h) << "," << fmt(t.inner_weight) << "," << fmt(t.tail_mass) << ","
            << fmt(rep.total) << "," << fmt(rep.far) << "," << fmt(rat.total_scaled);
        for (std::size_t i = 0; i < nus.size(); ++i)
            csv << "," << fmt(rep.moments[i]) << "," << fmt(rat.moment_scaled[i]);
        csv << "\n";
        json j;
        j["r"] = r;
        j["h"] = grid.h;
        j["inner_weight"] = t.inner_weight;
        j["outer_offsets"] = t.outer.size();
        j["tail_radius"] = t.tail_radius;
        j["tail_mass"] = t.tail_mass;
        j["total"] = rep.total;
        j["far"] = rep.far;
        j["total_scaled"] = rat.total_scaled;
        j["moments"] = rep.moments;
        j["moments_scaled"] = rat.moment_scaled;
        tables.push_back(j);
        tot.push_back(rat.total_scaled);
        far.push_back(rat.far);
        for (std::size_t i = 0; i < nus.size(); ++i) mom[i].push_back(rat.moment_scaled[i]);
    }
    auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi / *lo;
    };
    json summary;
    summary["d"] = params.d;
    summary["p"] = params.p;
    summary["s"] = params.s;
    summary["kind"] = to_string(kind);
    summary["rho_max"] = rho_max;
    summary["nus"] = nus;
    summary["tables"] = tables;
    json spreads;
    spreads["total_scaled"] = spread(tot);
    spreads["far"] = spread(far);
    json ms = json::array();
    for (auto& m : mom) ms.push_back(spread(m));
    spreads["moments_scaled"] = ms;
    summary["max_over_min"] = spreads;
    emit(opt, "weights", csv.str(), summary.dump(2) + "\n");
    std::cout << "max/min over the sweep: total*r^sp " << spread(tot) << ", far " << spread(far);
    for (std::size_t i = 0; i < nus.size(); ++i) std::cout << ", moment(" << nus[i] << ") " << ms[i];
    std::cout << "\n";
    return kOk;
}

int cmd_evolve(const IniConfig& cfg, const Options& opt) {
    const EvolutionProblem problem = read_problem(cfg);
    const SchemeConfig scheme = read_scheme(cfg, opt);
    const auto paired_delta = cfg.opt_num("evolve", "paired_delta");
    const std::string paired_shape = cfg.str("evolve", "paired_shape", "gauss-bump");
    const bool modulus = cfg.boolean("evolve", "time_modulus", false);
    cfg.check_unused();

    const EvolutionState st = run(problem, scheme);
    write_out(opt, "evolve_metadata.json", evolution_metadata_json(st, problem, scheme));
    write_out(opt, "evolve_snapshots.csv", evolution_snapshots_csv(st));
    std::cout << "CFL branch " << to_string(st.cfl.branch) << ", tau " << st.tau << " (bound " << st.cfl.tau
              << "), N " << st.N << "\n";
    std::cout << "max-principle margin " << st.diagnostics.linf_margin;
    if (scheme.full_diagnostics) std::cout << ", Hoelder margin " << st.diagnostics.holder_margin;
    std::cout << "\n";

    if (modulus && !st.blew_up) {
        const TimeModulusReport tm = time_modulus_check(st, problem, scheme);
        json j;
        j["max_ratio"] = tm.max_ratio;
        j["K2"] = tm.K2;
        j["lags"] = tm.lags;
        j["max_modulus"] = tm.max_modulus;
        write_out(opt, "evolve_time_modulus.json", j.dump(2) + "\n");
        std::cout << "time modulus: max ratio to bound " << tm.max_ratio << "\n";
    }
    if (paired_delta) {
        EvolutionProblem other = problem;
        other.u0 = add_fields(problem.u0,
                              make_builtin(paired_shape, problem.params.d).scaled(*paired_delta));
        const PairedReport pr = continuous_dependence(problem, other, scheme);
        json j;
        j["delta_u0"] = pr.delta_u0;
        j["delta_f"] = pr.delta_f;
        j["max_difference"] = pr.max_difference;
        j["max_excess"] = pr.max_excess;
        j["margin"] = 0.0 - pr.max_excess;
        write_out(opt, "evolve_paired.json", j.dump(2) + "\n");
        std::cout << "continuous dependence margin " << 0.0 - pr.max_excess << "\n";
    }
    if (st.blew_up) {
        std::cerr << "error: " << st.blow_up_message << "\n";
        return kNumericalError;
    }
    return kOk;
}

int cmd_study(const IniConfig& cfg, const Options& opt) {
    const std::string type = cfg.str("study", "type");
    if (type == "expansion") return run_expand(cfg, opt, "study", "study_expansion");
    if (type == "consistency") return run_consistency(cfg, opt);
    if (type == "refinement") return run_refinement(cfg, opt);
    if (type == "fig1") return run_fig1(cfg, opt);
    if (type == "fig2") return run_fig2(cfg, opt);
    if (type == "synthetic") return run_synthetic(cfg, opt);
    throw ConfigurationError("[study] type: expected expansion, consistency, refinement, fig1, fig2 or "
                             "synthetic, got '" + type + "'");
}

int cmd_selftest(const IniConfig& cfg, const Options& opt) {
    const int samples = cfg.integer("selftest", "samples", 10000);
    cfg.check_unused();
    if (samples < 1) throw ConfigurationError("[selftest] samples: must be positive");
    const auto results = run_selftests(opt.seed, samples);
    bool ok = true;
    json out = json::array();
    for (const auto& r : results) {
        ok = ok && r.passed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (worst " << r.worst << ", tol "
                  << r.tolerance << ", samples " << r.samples << ")\n";
        json j;
        j["name"] = r.name;
        j["passed"] = r.passed;
        j["worst"] = r.worst;
        j["tolerance"] = r.tolerance;
        j["samples"] = r.samples;
        out.push_back(j);
    }
    write_out(opt, "selftest.json", out.dump(2) + "\n");
    return ok ? kOk : kSelftestFailure;
}

}  // namespace fplap::cli
