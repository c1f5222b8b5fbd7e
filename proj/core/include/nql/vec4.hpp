#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace nql {

inline constexpr std::size_t kDims = 4;

using Vec4 = std::array<double, kDims>;

inline Vec4 operator+(const Vec4& a, const Vec4& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

inline Vec4 operator-(const Vec4& a, const Vec4& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

inline Vec4 operator*(double s, const Vec4& a) {
    return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

inline double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double squared_norm(const Vec4& a) { return dot(a, a); }

inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

inline double squared_distance(const Vec4& a, const Vec4& b) { return squared_norm(a - b); }

}  // namespace nql
