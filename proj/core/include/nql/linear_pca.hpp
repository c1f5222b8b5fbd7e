#pragma once

#include <array>
#include <span>
#include <vector>

#include "nql/dataset.hpp"
#include "nql/vec4.hpp"

namespace nql {

struct SymmetricMatrix4 {
    std::array<Vec4, kDims> entries{};

    double operator()(std::size_t i, std::size_t j) const { return entries[i][j]; }
    double& operator()(std::size_t i, std::size_t j) { return entries[i][j]; }

    static SymmetricMatrix4 identity();
    Vec4 apply(const Vec4& v) const;
};

/// Orthonormal eigenvectors, eigenvalues descending. Each component is
/// signed so that its largest-magnitude coordinate is positive.
struct PrincipalBasis {
    std::array<Vec4, kDims> components{};
    Vec4 eigenvalues{};
    double total_variance = 0.0;
};

struct JacobiOptions {
    int max_sweeps = 100;
    double off_diagonal_tol = 1e-12;
};

/// Population covariance (1/N) X^T X of already-centred rows.
SymmetricMatrix4 covariance(std::span<const Vec4> rows);
inline SymmetricMatrix4 covariance(const StandardizedMatrix& m) { return covariance(m.rows()); }

/// Cyclic Jacobi. Throws ConvergenceFailure when the sweep budget runs out.
PrincipalBasis eigendecompose(const SymmetricMatrix4& cov, const JacobiOptions& options = {});

/// (lambda_1 + ... + lambda_k) / total_variance, k in 1..4.
double explained_variance_ratio(const PrincipalBasis& basis, int k);

std::vector<double> component_scores(std::span<const Vec4> rows, const Vec4& component);

inline std::vector<double> pc1_scores(const StandardizedMatrix& m, const PrincipalBasis& basis) {
    return component_scores(m.rows(), basis.components[0]);
}

}  // namespace nql
