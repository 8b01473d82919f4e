#include "fplap/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "fplap/errors.hpp"
#include "fplap/io.hpp"
#include "fplap/quad.hpp"

namespace fplap {

namespace {

constexpr int kCacheVersion = 1;

// 6-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 6> kGlX = {-0.932469514203152027812301554493995,
                                        -0.661209386466264513661399595019906,
                                        -0.238619186083196908630501721680712,
                                        0.238619186083196908630501721680712,
                                        0.661209386466264513661399595019906,
                                        0.932469514203152027812301554493995};
constexpr std::array<double, 6> kGlW = {0.171324492379170345040296142172732,
                                        0.360761573048138607569833513837716,
                                        0.467913934428661047389870343989552,
                                        0.467913934428661047389870343989552,
                                        0.360761573048138607569833513837716,
                                        0.171324492379170345040296142172732};

double cube_rule(const Vec& center, double half, double expo, int d) {
    double sum = 0.0;
    const int n = static_cast<int>(kGlX.size());
    const int n2 = d >= 2 ? n : 1;
    const int n3 = d >= 3 ? n : 1;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n2; ++j) {
            for (int k = 0; k < n3; ++k) {
                Vec y = center;
                double w = kGlW[i];
                y[0] += half * kGlX[i];
                if (d >= 2) {
                    y[1] += half * kGlX[j];
                    w *= kGlW[j];
                }
                if (d >= 3) {
                    y[2] += half * kGlX[k];
                    w *= kGlW[k];
                }
                sum += w * std::pow(dot(y, y), -0.5 * expo);
            }
        }
    }
    return sum * std::pow(half, d);
}

double split_rule(const Vec& center, double half, double expo, int d) {
    const double q = 0.5 * half;
    double sum = 0.0;
    const int corners = 1 << d;
    for (int c = 0; c < corners; ++c) {
        Vec sub = center;
        for (int k = 0; k < d; ++k) sub[k] += ((c >> k) & 1) ? q : -q;
        sum += cube_rule(sub, q, expo, d);
    }
    return sum;
}

// int over center + [-half, half]^d of |y|^{-expo}, to relative 1e-10.
double cube_integral(const Vec& center, double half, double expo, int d, int depth = 0) {
    const double coarse = cube_rule(center, half, expo, d);
    const double fine = split_rule(center, half, expo, d);
    if (std::abs(fine - coarse) <= 1e-10 * std::abs(fine) || depth >= 8) return fine;
    const double q = 0.5 * half;
    double sum = 0.0;
    for (int c = 0; c < (1 << d); ++c) {
        Vec sub = center;
        for (int k = 0; k < d; ++k) sub[k] += ((c >> k) & 1) ? q : -q;
        sum += cube_integral(sub, q, expo, d, depth + 1);
    }
    return sum;
}

// First nonzero component positive.
bool canonical(const MultiIndex& a) {
    for (int v : a) {
        if (v != 0) return v > 0;
    }
    return false;
}

std::string kind_tag(WeightKind kind) { return to_string(kind); }

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string key_from(int d, double p, double s, double h, double r, WeightKind kind, double rho) {
    return "weights_d" + std::to_string(d) + "_p" + num(p) + "_s" + num(s) + "_h" + num(h) + "_r" +
           num(r) + "_" + kind_tag(kind) + "_rho" + num(rho) + ".json";
}

}  // namespace

const char* to_string(WeightKind kind) { return kind == WeightKind::W1 ? "W1" : "W2"; }

WeightKind weight_kind_from_string(const std::string& name) {
    if (name == "W1") return WeightKind::W1;
    if (name == "W2") return WeightKind::W2;
    throw ConfigurationError("unknown weight kind '" + name + "' (expected W1 or W2)");
}

void GridSpec::validate() const {
    if (!(h > 0.0 && h < 1.0)) throw ConfigurationError("GridSpec: 0 < h < 1 violated");
    if (d < 1 || d > 3) throw ConfigurationError("GridSpec: d must be 1, 2 or 3");
    if (!(rho_max > 1.0)) throw ConfigurationError("GridSpec: rho_max > 1 violated");
}

double WeightTable::weight(const MultiIndex& alpha) const {
    const auto it = outer.find(alpha);
    if (it != outer.end()) return it->second;
    if (std::find(inner.begin(), inner.end(), alpha) != inner.end()) return inner_weight;
    return 0.0;
}

int WeightTable::reach() const {
    int m = 0;
    for (const auto& a : inner)
        for (int v : a) m = std::max(m, std::abs(v));
    for (const auto& [a, w] : outer)
        for (int v : a) m = std::max(m, std::abs(v));
    return m;
}

double kernel_tail_mass(double rho, const OperatorParams& params) {
    params.validate();
    const double sp = params.sp();
    return unit_sphere_area(params.d) * std::pow(rho, -sp) / sp;
}

double default_rho_max(const OperatorParams& params, double sup_bound, double target_error) {
    params.validate();
    if (!(target_error > 0.0)) throw ParameterError("default_rho_max: target error must be positive");
    const double amp = std::pow(2.0 * sup_bound, params.p - 1.0);
    const double sp = params.sp();
    const double budget = 1e-3 * target_error;
    if (amp == 0.0) return 2.0;
    // |S| rho^{-sp} / sp * amp = budget
    const double rho = std::pow(unit_sphere_area(params.d) * amp / (sp * budget), 1.0 / sp);
    return std::max(2.0, rho);
}

WeightTable build_weights(const GridSpec& grid, double r, const OperatorParams& params,
                          WeightKind kind) {
    grid.validate();
    params.validate();
    if (params.d != grid.d) throw ConfigurationError("build_weights: grid and operator dimensions differ");
    if (!(r > 0.0)) throw ConfigurationError("build_weights: r must be positive");
    if (!(r < grid.rho_max)) throw ConfigurationError("build_weights: r < rho_max violated");
    const int d = grid.d;
    const double h = grid.h;
    if (kind == WeightKind::W1 && h > r / 4.0) {
        throw ConfigurationError("build_weights: W1 requires h <= r/4 (h = " + num(h) +
                                 ", r/4 = " + num(r / 4.0) + ")");
    }
    if (kind == WeightKind::W2 && h > r / (4.0 * std::sqrt(static_cast<double>(d)))) {
        throw ConfigurationError("build_weights: W2 requires h <= r/(4 sqrt d) (h = " + num(h) +
                                 ", bound = " + num(r / (4.0 * std::sqrt(double(d)))) + ")");
    }

    WeightTable t;
    t.d = d;
    t.p = params.p;
    t.s = params.s;
    t.h = h;
    t.r = r;
    t.rho_max = grid.rho_max;
    t.kind = kind;
    const double sp = params.sp();
    const double expo = d + sp;
    t.inner_weight = (params.p + d) / (params.p * (1.0 - params.s)) * std::pow(h, d) / std::pow(r, expo);

    const int n = static_cast<int>(std::floor(grid.rho_max / h));
    const int n2 = d >= 2 ? n : 0;
    const int n3 = d >= 3 ? n : 0;
    for (int i = -n; i <= n; ++i) {
        for (int j = -n2; j <= n2; ++j) {
            for (int k = -n3; k <= n3; ++k) {
                const MultiIndex a{i, j, k};
                if (!canonical(a)) continue;
                const Vec y = lattice_point(a, h);
                const double ny = norm(y);
                if (ny > grid.rho_max) continue;
                if (ny < r) {
                    t.inner.push_back(a);
                    t.inner.push_back(-a);
                    continue;
                }
                double w = 0.0;
                if (kind == WeightKind::W2) {
                    w = std::pow(h, d) / std::pow(ny, expo);
                } else if (d == 1) {
                    const double lo = ny - 0.5 * h;
                    w = std::pow(lo, -sp) * -std::expm1(-sp * std::log1p(h / lo)) / sp;
                } else {
                    w = cube_integral(y, 0.5 * h, expo, d);
                }
                t.outer.emplace(a, w);
                t.outer.emplace(-a, w);
            }
        }
    }
    std::sort(t.inner.begin(), t.inner.end());
    t.tail_radius = d == 1 ? (n + 0.5) * h : grid.rho_max;
    t.tail_mass = kernel_tail_mass(t.tail_radius, params);
    return t;
}

SummabilityReport summability_report(const WeightTable& table, std::span<const double> nus) {
    SummabilityReport rep;
    rep.nus.assign(nus.begin(), nus.end());
    rep.moments.assign(nus.size(), 0.0);
    auto visit = [&](const MultiIndex& a, double w) {
        const double ny = norm(lattice_point(a, table.h));
        rep.total += w;
        if (ny >= 1.0) {
            rep.far += w;
        } else {
            for (std::size_t i = 0; i < nus.size(); ++i) rep.moments[i] += std::pow(ny, nus[i]) * w;
        }
    };
    for (const auto& a : table.inner) visit(a, table.inner_weight);
    for (const auto& [a, w] : table.outer) visit(a, w);
    rep.total += table.tail_mass;
    rep.far += table.tail_mass;
    return rep;
}

SummabilityRatios summability_ratios(const WeightTable& table, std::span<const double> nus) {
    const SummabilityReport rep = summability_report(table, nus);
    SummabilityRatios out;
    out.r = table.r;
    const double sp = table.s * table.p;
    out.total_scaled = rep.total * std::pow(table.r, sp);
    out.far = rep.far;
    for (std::size_t i = 0; i < nus.size(); ++i) {
        out.moment_scaled.push_back(rep.moments[i] / s_nu(nus[i], table.r, table.s, table.p));
    }
    return out;
}

double calibrate_summability_constant(const OperatorParams& params, WeightKind kind, double r,
                                      std::span<const double> nus, int levels, double rho_max) {
    if (levels < 1) throw ParameterError("calibrate_summability_constant: levels must be >= 1");
    double c = 1.0;
    double rk = std::min(r, 0.5);
    for (int k = 0; k < levels; ++k, rk *= 0.5) {
        GridSpec grid;
        grid.d = params.d;
        grid.h = kind == WeightKind::W1 ? rk / 4.0 : rk / (4.0 * std::sqrt(double(params.d)));
        grid.rho_max = rho_max;
        const WeightTable t = build_weights(grid, rk, params, kind);
        const SummabilityRatios q = summability_ratios(t, nus);
        c = std::max({c, q.total_scaled, q.far});
        for (double m : q.moment_scaled) c = std::max(c, m);
    }
    return c;
}

std::string weight_cache_key(const WeightTable& t) {
    return key_from(t.d, t.p, t.s, t.h, t.r, t.kind, t.rho_max);
}

void save_weight_table(const WeightTable& t, const std::filesystem::path& path) {
    nlohmann::json j;
    j["format"] = "fplap-weights";
    j["version"] = kCacheVersion;
    j["d"] = t.d;
    j["p"] = t.p;
    j["s"] = t.s;
    j["h"] = t.h;
    j["r"] = t.r;
    j["rho_max"] = t.rho_max;
    j["kind"] = to_string(t.kind);
    j["inner_weight"] = t.inner_weight;
    j["tail_radius"] = t.tail_radius;
    j["tail_mass"] = t.tail_mass;
    nlohmann::json inner = nlohmann::json::array();
    for (const auto& a : t.inner) inner.push_back({a[0], a[1], a[2]});
    j["inner"] = std::move(inner);
    nlohmann::json outer = nlohmann::json::array();
    for (const auto& [a, w] : t.outer) outer.push_back({a[0], a[1], a[2], w});
    j["outer"] = std::move(outer);
    atomic_write(path, j.dump());
}

WeightTable load_weight_table(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError("weight cache '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (j.value("format", "") != "fplap-weights" || j.value("version", 0) != kCacheVersion) {
        throw ConfigurationError("weight cache '" + path.string() + "' has an unsupported format");
    }
    WeightTable t;
    t.d = j.at("d").get<int>();
    t.p = j.at("p").get<double>();
    t.s = j.at("s").get<double>();
    t.h = j.at("h").get<double>();
    t.r = j.at("r").get<double>();
    t.rho_max = j.at("rho_max").get<double>();
    t.kind = weight_kind_from_string(j.at("kind").get<std::string>());
    t.inner_weight = j.at("inner_weight").get<double>();
    t.tail_radius = j.at("tail_radius").get<double>();
    t.tail_mass = j.at("tail_mass").get<double>();
    for (const auto& e : j.at("inner")) t.inner.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
    for (const auto& e : j.at("outer")) {
        t.outer.emplace(MultiIndex{e[0].get<int>(), e[1].get<int>(), e[2].get<int>()}, e[3].get<double>());
    }
    return t;
}

WeightTable cached_weights(const std::filesystem::path& dir, const GridSpec& grid, double r,
                           const OperatorParams& params, WeightKind kind) {
    const auto path = dir / key_from(grid.d, params.p, params.s, grid.h, r, kind, grid.rho_max);
    if (std::filesystem::exists(path)) return load_weight_table(path);
    WeightTable t = build_weights(grid, r, params, kind);
    save_weight_table(t, path);
    return t;
}

}  // namespace fplap
