#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace fplap {

/// Points and vectors live in R^d with d <= 3; unused trailing components are zero.
inline constexpr int kMaxDim = 3;

using Vec = std::array<double, kMaxDim>;
using Mat = std::array<Vec, kMaxDim>;
using MultiIndex = std::array<int, kMaxDim>;

inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec operator-(const Vec& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec operator*(double c, const Vec& a) { return {c * a[0], c * a[1], c * a[2]}; }

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec mat_vec(const Mat& m, const Vec& v) {
    return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

inline MultiIndex operator-(const MultiIndex& a) { return {-a[0], -a[1], -a[2]}; }
inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

/// y_alpha = h * alpha.
inline Vec lattice_point(const MultiIndex& alpha, double h) {
    return {h * alpha[0], h * alpha[1], h * alpha[2]};
}

}  // namespace fplap
