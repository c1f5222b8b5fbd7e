#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nql/key_value.hpp"
#include "nql/linear_pca.hpp"
#include "nql/vec4.hpp"

namespace nql {

/// Hyperparameters of the elastic principal curve. Each annealing epoch
/// pairs lambda_schedule[e] (stretching) with mu_schedule[e] (bending).
struct ChainConfig {
    std::size_t n_nodes = 30;
    std::vector<double> lambda_schedule{0.1, 0.05, 0.02, 0.01};
    std::vector<double> mu_schedule{100.0, 50.0, 25.0, 12.5};
    std::size_t max_iters_per_epoch = 100;
    double tol = 1e-7;
    std::int64_t seed = 0;  // reserved; fitting is deterministic
    /// After fitting, each end is pushed out past the last projecting data
    /// point by this fraction of the curve length. Zero disables the margin.
    double end_margin = 0.05;

    /// Throws InvalidConfig.
    void validate() const;

    /// Flat `chain.key = value` lines, full precision.
    std::string to_text() const;
    static ChainConfig from_text(std::string_view text);
    /// Consumes `chain.*` entries; other keys are ignored.
    static ChainConfig from_key_values(const KeyValueList& entries);

    bool operator==(const ChainConfig&) const = default;
};

struct ElasticChain {
    std::vector<Vec4> nodes;
    ChainConfig config;
};

/// Nearest-node assignment, ties to the lower node index.
struct Partition {
    std::vector<std::size_t> assignment;
    std::vector<std::size_t> counts;
};

struct EnergyBreakdown {
    double approximation = 0.0;
    double stretching = 0.0;
    double bending = 0.0;
    double total = 0.0;
};

struct EnergyLogEntry {
    std::size_t epoch = 0;
    std::size_t iteration = 0;
    double lambda = 0.0;
    double mu = 0.0;
    EnergyBreakdown energy;
};

struct FitResult {
    ElasticChain chain;
    std::vector<EnergyLogEntry> energy_log;
};

/// Equally spaced nodes on the PC1 axis spanning the data's PC1 score range.
ElasticChain init_chain(std::span<const Vec4> rows, const PrincipalBasis& basis, std::size_t n_nodes);

Partition assign(std::span<const Vec4> rows, std::span<const Vec4> nodes);

/// Exact minimiser of
///   U = (1/N) sum_i |x_i - y_K(i)|^2 + lambda sum_j |y_j+1 - y_j|^2
///       + mu sum_j |y_j-1 - 2 y_j + y_j+1|^2
/// for a fixed partition. One pentadiagonal system shared by all four coordinates.
std::vector<Vec4> solve_nodes(std::span<const Vec4> rows, const Partition& partition, double lambda, double mu,
                              std::size_t n_nodes);

EnergyBreakdown energy(std::span<const Vec4> rows, std::span<const Vec4> nodes, const Partition& partition,
                       double lambda, double mu);

/// Moves the two end nodes outward along their end segments until no row
/// projects past an end, then adds `margin` times the curve length per end.
std::vector<Vec4> extend_ends(std::span<const Vec4> rows, std::vector<Vec4> nodes, double margin);

FitResult fit(std::span<const Vec4> rows, const PrincipalBasis& basis, const ChainConfig& config);

/// 1 - MSE / total variance, MSE from exact projection onto the polyline and
/// total variance as the mean squared norm of the rows.
double curve_explained_variance(std::span<const Vec4> rows, std::span<const Vec4> nodes);

}  // namespace nql
