#include "nql/linear_pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "nql/error.hpp"

namespace nql {
namespace {

double off_diagonal_norm(const SymmetricMatrix4& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < kDims; ++i)
        for (std::size_t j = 0; j < kDims; ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

double frobenius_norm(const SymmetricMatrix4& a) {
    double s = 0.0;
    for (const auto& row : a.entries) s += squared_norm(row);
    return std::sqrt(s);
}

// One Jacobi rotation zeroing a(p,q); v accumulates the rotations column-wise.
void rotate(SymmetricMatrix4& a, SymmetricMatrix4& v, std::size_t p, std::size_t q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    for (std::size_t k = 0; k < kDims; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (std::size_t k = 0; k < kDims; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (std::size_t k = 0; k < kDims; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

}  // namespace

SymmetricMatrix4 SymmetricMatrix4::identity() {
    SymmetricMatrix4 m;
    for (std::size_t i = 0; i < kDims; ++i) m(i, i) = 1.0;
    return m;
}

Vec4 SymmetricMatrix4::apply(const Vec4& v) const {
    Vec4 out{};
    for (std::size_t i = 0; i < kDims; ++i) out[i] = dot(entries[i], v);
    return out;
}

SymmetricMatrix4 covariance(std::span<const Vec4> rows) {
    SymmetricMatrix4 c;
    for (const auto& x : rows)
        for (std::size_t i = 0; i < kDims; ++i)
            for (std::size_t j = i; j < kDims; ++j) c(i, j) += x[i] * x[j];
    const double inv_n = 1.0 / static_cast<double>(rows.size());
    for (std::size_t i = 0; i < kDims; ++i) {
        for (std::size_t j = i; j < kDims; ++j) {
            c(i, j) *= inv_n;
            c(j, i) = c(i, j);
        }
    }
    return c;
}

PrincipalBasis eigendecompose(const SymmetricMatrix4& cov, const JacobiOptions& options) {
    SymmetricMatrix4 a = cov;
    SymmetricMatrix4 v = SymmetricMatrix4::identity();
    const double threshold = options.off_diagonal_tol * std::max(1.0, frobenius_norm(cov));

    int sweep = 0;
    while (off_diagonal_norm(a) > threshold) {
        if (sweep++ >= options.max_sweeps) {
            throw Error(ErrorKind::ConvergenceFailure,
                        fmt::format("Jacobi did not converge in {} sweeps", options.max_sweeps));
        }
        for (std::size_t p = 0; p + 1 < kDims; ++p)
            for (std::size_t q = p + 1; q < kDims; ++q) rotate(a, v, p, q);
    }

    std::array<std::size_t, kDims> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    PrincipalBasis basis;
    for (std::size_t k = 0; k < kDims; ++k) {
        const std::size_t col = order[k];
        basis.eigenvalues[k] = a(col, col);
        Vec4 vec{};
        for (std::size_t i = 0; i < kDims; ++i) vec[i] = v(i, col);
        vec = (1.0 / norm(vec)) * vec;

        std::size_t largest = 0;
        for (std::size_t i = 1; i < kDims; ++i)
            if (std::abs(vec[i]) > std::abs(vec[largest])) largest = i;
        if (vec[largest] < 0.0) vec = -1.0 * vec;
        basis.components[k] = vec;
    }
    basis.total_variance = 0.0;
    for (std::size_t i = 0; i < kDims; ++i) basis.total_variance += cov(i, i);
    return basis;
}

double explained_variance_ratio(const PrincipalBasis& basis, int k) {
    if (k < 1 || k > static_cast<int>(kDims)) {
        throw Error(ErrorKind::InvalidConfig, fmt::format("component count {} outside 1..{}", k, kDims));
    }
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += basis.eigenvalues[static_cast<std::size_t>(i)];
    return std::clamp(s / basis.total_variance, 0.0, 1.0);
}

std::vector<double> component_scores(std::span<const Vec4> rows, const Vec4& component) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(dot(r, component));
    return out;
}

}  // namespace nql
