#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nql {

/// Symmetric positive-definite matrix with bandwidth 2 (pentadiagonal),
/// factored as L D L^T. Row j stores A(j,j), A(j,j+1), A(j,j+2).
class PentadiagonalSpd {
public:
    explicit PentadiagonalSpd(std::size_t n);

    std::size_t size() const { return diag_.size(); }

    /// Adds v to A(i,j) and A(j,i); |i - j| must be <= 2.
    void add(std::size_t i, std::size_t j, double v);
    double at(std::size_t i, std::size_t j) const;

    /// Throws SingularSystem on a non-positive pivot.
    void factorize();
    /// Solves in place; factorize() must have been called.
    void solve_in_place(std::span<double> rhs) const;

    std::vector<double> multiply(std::span<const double> x) const;

private:
    std::vector<double> diag_, off1_, off2_;
    std::vector<double> d_, l1_, l2_;
    bool factored_ = false;
};

}  // namespace nql
