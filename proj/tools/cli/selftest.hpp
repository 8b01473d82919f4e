#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fplap::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;   // largest observed deviation
    double tolerance = 0.0;
    int samples = 0;
};

/// eoc on exact power laws C h^k, k in {0.5, 1, 2, 3.5}; slope within 1e-10.
CheckResult check_eoc_synthetic();
/// C1 h^2 + C2 h^3 gives a slope in (2, 3) with positive residual.
CheckResult check_eoc_mixed();
/// J_p(-x) = -J_p(x) and J_p(l x) = l^{p-1} J_p(x) on random samples.
CheckResult check_jp_properties(std::uint64_t seed, int samples);
/// D_y antisymmetric in phi, (p-1)-homogeneous, even in y, and zero on affine fields.
CheckResult check_dy_properties(std::uint64_t seed, int samples);
/// Quadratic-model identity on random (g, H, r, p, d); 1e-8 relative, d = 1 to rounding.
CheckResult check_identity_J2(std::uint64_t seed, int cases);

std::vector<CheckResult> run_selftests(std::uint64_t seed, int samples);

}  // namespace fplap::cli
