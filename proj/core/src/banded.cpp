#include "nql/banded.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "nql/error.hpp"

namespace nql {

PentadiagonalSpd::PentadiagonalSpd(std::size_t n) : diag_(n, 0.0), off1_(n, 0.0), off2_(n, 0.0) {}

void PentadiagonalSpd::add(std::size_t i, std::size_t j, double v) {
    if (i > j) std::swap(i, j);
    switch (j - i) {
        case 0: diag_[i] += v; break;
        case 1: off1_[i] += v; break;
        case 2: off2_[i] += v; break;
        default: std::abort();
    }
    factored_ = false;
}

double PentadiagonalSpd::at(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    switch (j - i) {
        case 0: return diag_[i];
        case 1: return off1_[i];
        case 2: return off2_[i];
        default: return 0.0;
    }
}

void PentadiagonalSpd::factorize() {
    const std::size_t n = size();
    d_.assign(n, 0.0);
    l1_.assign(n, 0.0);  // L(j+1, j)
    l2_.assign(n, 0.0);  // L(j+2, j)
    double scale = 0.0;
    for (double v : diag_) scale = std::max(scale, std::abs(v));

    for (std::size_t j = 0; j < n; ++j) {
        double dj = diag_[j];
        if (j >= 1) dj -= l1_[j - 1] * l1_[j - 1] * d_[j - 1];
        if (j >= 2) dj -= l2_[j - 2] * l2_[j - 2] * d_[j - 2];
        if (!(dj > 1e-14 * scale)) {
            throw Error(ErrorKind::SingularSystem, fmt::format("non-positive pivot {} at row {}", dj, j));
        }
        d_[j] = dj;
        if (j + 1 < n) {
            double a = off1_[j];
            if (j >= 1) a -= l1_[j - 1] * d_[j - 1] * l2_[j - 1];
            l1_[j] = a / dj;
        }
        if (j + 2 < n) l2_[j] = off2_[j] / dj;
    }
    factored_ = true;
}

void PentadiagonalSpd::solve_in_place(std::span<double> b) const {
    const std::size_t n = size();
    if (!factored_ || b.size() != n) std::abort();
    for (std::size_t i = 1; i < n; ++i) {
        b[i] -= l1_[i - 1] * b[i - 1];
        if (i >= 2) b[i] -= l2_[i - 2] * b[i - 2];
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= d_[i];
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) b[i] -= l1_[i] * b[i + 1];
        if (i + 2 < n) b[i] -= l2_[i] * b[i + 2];
    }
}

std::vector<double> PentadiagonalSpd::multiply(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += diag_[i] * x[i];
        if (i + 1 < n) {
            y[i] += off1_[i] * x[i + 1];
            y[i + 1] += off1_[i] * x[i];
        }
        if (i + 2 < n) {
            y[i] += off2_[i] * x[i + 2];
            y[i + 2] += off2_[i] * x[i];
        }
    }
    return y;
}

}  // namespace nql
