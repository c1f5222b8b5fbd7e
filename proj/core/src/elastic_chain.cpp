#include "nql/elastic_chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nql/banded.hpp"
#include "nql/error.hpp"
#include "nql/index.hpp"

namespace nql {

void ChainConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
    if (n_nodes < 3) fail(fmt::format("chain.n_nodes must be >= 3, got {}", n_nodes));
    if (lambda_schedule.empty()) fail("chain.lambda_schedule is empty");
    if (lambda_schedule.size() != mu_schedule.size()) {
        fail(fmt::format("schedule lengths differ: {} lambdas, {} mus", lambda_schedule.size(), mu_schedule.size()));
    }
    for (const auto* sched : {&lambda_schedule, &mu_schedule}) {
        for (std::size_t e = 0; e < sched->size(); ++e) {
            if (!((*sched)[e] > 0.0)) fail("schedule values must be positive");
            if (e > 0 && (*sched)[e] > (*sched)[e - 1]) fail("schedules must be non-increasing");
        }
    }
    if (max_iters_per_epoch == 0) fail("chain.max_iters_per_epoch must be positive");
    if (!(tol > 0.0)) fail("chain.tol must be positive");
    if (!(end_margin >= 0.0) || !std::isfinite(end_margin)) fail("chain.end_margin must be >= 0");
}

std::string ChainConfig::to_text() const {
    std::string out;
    out += fmt::format("chain.n_nodes = {}\n", n_nodes);
    out += fmt::format("chain.lambda_schedule = {}\n", fmt::join(lambda_schedule, ", "));
    out += fmt::format("chain.mu_schedule = {}\n", fmt::join(mu_schedule, ", "));
    out += fmt::format("chain.max_iters_per_epoch = {}\n", max_iters_per_epoch);
    out += fmt::format("chain.tol = {}\n", tol);
    out += fmt::format("chain.seed = {}\n", seed);
    out += fmt::format("chain.end_margin = {}\n", end_margin);
    return out;
}

ChainConfig ChainConfig::from_text(std::string_view text) {
    const auto entries = parse_key_values(text);
    for (const auto& [key, value] : entries) {
        if (!key.starts_with("chain.")) throw Error(ErrorKind::InvalidConfig, fmt::format("unknown key '{}'", key));
    }
    return from_key_values(entries);
}

ChainConfig ChainConfig::from_key_values(const KeyValueList& entries) {
    ChainConfig cfg;
    auto non_negative = [](std::string_view key, long long v) {
        if (v < 0) throw Error(ErrorKind::InvalidConfig, fmt::format("{} must be non-negative", key));
        return static_cast<std::size_t>(v);
    };
    for (const auto& [key, value] : entries) {
        if (!key.starts_with("chain.")) continue;
        if (key == "chain.n_nodes") cfg.n_nodes = non_negative(key, parse_integer(key, value));
        else if (key == "chain.lambda_schedule") cfg.lambda_schedule = parse_real_list(key, value);
        else if (key == "chain.mu_schedule") cfg.mu_schedule = parse_real_list(key, value);
        else if (key == "chain.max_iters_per_epoch") cfg.max_iters_per_epoch = non_negative(key, parse_integer(key, value));
        else if (key == "chain.tol") cfg.tol = parse_real(key, value);
        else if (key == "chain.seed") cfg.seed = parse_integer(key, value);
        else if (key == "chain.end_margin") cfg.end_margin = parse_real(key, value);
        else throw Error(ErrorKind::InvalidConfig, fmt::format("unknown key '{}'", key));
    }
    cfg.validate();
    return cfg;
}

ElasticChain init_chain(std::span<const Vec4> rows, const PrincipalBasis& basis, std::size_t n_nodes) {
    if (n_nodes < 3) throw Error(ErrorKind::InvalidConfig, "init_chain needs at least 3 nodes");
    const Vec4& axis = basis.components[0];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : rows) {
        const double s = dot(r, axis);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    ElasticChain chain;
    chain.config.n_nodes = n_nodes;
    chain.nodes.reserve(n_nodes);
    const double step = (hi - lo) / static_cast<double>(n_nodes - 1);
    for (std::size_t j = 0; j < n_nodes; ++j) {
        chain.nodes.push_back((lo + step * static_cast<double>(j)) * axis);
    }
    return chain;
}

Partition assign(std::span<const Vec4> rows, std::span<const Vec4> nodes) {
    Partition p;
    p.assignment.resize(rows.size());
    p.counts.assign(nodes.size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t best = 0;
        double best_d = squared_distance(rows[i], nodes[0]);
        for (std::size_t j = 1; j < nodes.size(); ++j) {
            const double d = squared_distance(rows[i], nodes[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        p.assignment[i] = best;
        ++p.counts[best];
    }
    return p;
}

std::vector<Vec4> solve_nodes(std::span<const Vec4> rows, const Partition& partition, double lambda, double mu,
                              std::size_t n_nodes) {
    if (partition.assignment.size() != rows.size() || partition.counts.size() != n_nodes) {
        throw Error(ErrorKind::SingularSystem, "partition does not match the data or node count");
    }
    const double inv_n = 1.0 / static_cast<double>(rows.size());

    // Stationarity: (W + lambda E + mu B) y = (1/N) sum of assigned rows,
    // W = diag(count_j / N), E the path Laplacian, B = D2^T D2 for second differences D2.
    PentadiagonalSpd system(n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j) system.add(j, j, static_cast<double>(partition.counts[j]) * inv_n);
    for (std::size_t j = 0; j + 1 < n_nodes; ++j) {
        system.add(j, j, lambda);
        system.add(j + 1, j + 1, lambda);
        system.add(j, j + 1, -lambda);
    }
    for (std::size_t j = 1; j + 1 < n_nodes; ++j) {
        const std::size_t idx[3] = {j - 1, j, j + 1};
        const double coef[3] = {1.0, -2.0, 1.0};
        for (int a = 0; a < 3; ++a) {
            system.add(idx[a], idx[a], mu * coef[a] * coef[a]);
            for (int b = a + 1; b < 3; ++b) system.add(idx[a], idx[b], mu * coef[a] * coef[b]);
        }
    }
    system.factorize();

    std::vector<Vec4> nodes(n_nodes, Vec4{});
    std::vector<double> rhs(n_nodes);
    for (std::size_t c = 0; c < kDims; ++c) {
        std::fill(rhs.begin(), rhs.end(), 0.0);
        for (std::size_t i = 0; i < rows.size(); ++i) rhs[partition.assignment[i]] += rows[i][c] * inv_n;
        system.solve_in_place(rhs);
        for (std::size_t j = 0; j < n_nodes; ++j) nodes[j][c] = rhs[j];
    }
    return nodes;
}

EnergyBreakdown energy(std::span<const Vec4> rows, std::span<const Vec4> nodes, const Partition& partition,
                       double lambda, double mu) {
    EnergyBreakdown e;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        e.approximation += squared_distance(rows[i], nodes[partition.assignment[i]]);
    }
    e.approximation /= static_cast<double>(rows.size());
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) e.stretching += squared_distance(nodes[j + 1], nodes[j]);
    for (std::size_t j = 1; j + 1 < nodes.size(); ++j) {
        e.bending += squared_norm(nodes[j - 1] - 2.0 * nodes[j] + nodes[j + 1]);
    }
    e.total = e.approximation + lambda * e.stretching + mu * e.bending;
    return e;
}

std::vector<Vec4> extend_ends(std::span<const Vec4> rows, std::vector<Vec4> nodes, double margin) {
    const std::size_t n = nodes.size();
    if (n < 2) return nodes;

    // Projection parameter of x along the ray inner -> outer (1 at the outer node).
    auto overshoot = [&](std::size_t inner, std::size_t outer) {
        const Vec4 d = nodes[outer] - nodes[inner];
        const double len2 = squared_norm(d);
        double t_max = 1.0;
        if (len2 == 0.0) return t_max;
        for (const auto& x : rows) {
            const auto proj = project_point(x, nodes);
            const bool at_outer = outer == 0 ? (proj.segment == 0 && proj.t == 0.0)
                                             : (proj.segment == n - 2 && proj.t == 1.0);
            if (at_outer) t_max = std::max(t_max, dot(x - nodes[inner], d) / len2);
        }
        return t_max;
    };

    // Extending one end can capture further points, so repeat until stable.
    for (int pass = 0; pass < 16; ++pass) {
        bool moved = false;
        for (auto [inner, outer] : {std::pair{n - 2, n - 1}, std::pair{std::size_t{1}, std::size_t{0}}}) {
            const double t = overshoot(inner, outer);
            if (t > 1.0) {
                nodes[outer] = nodes[inner] + t * (nodes[outer] - nodes[inner]);
                moved = true;
            }
        }
        if (!moved) break;
    }

    if (margin > 0.0) {
        const double extra = margin * polyline_length(nodes);
        for (auto [inner, outer] : {std::pair{n - 2, n - 1}, std::pair{std::size_t{1}, std::size_t{0}}}) {
            const Vec4 d = nodes[outer] - nodes[inner];
            const double len = norm(d);
            if (len > 0.0) nodes[outer] = nodes[outer] + (extra / len) * d;
        }
    }
    return nodes;
}

FitResult fit(std::span<const Vec4> rows, const PrincipalBasis& basis, const ChainConfig& config) {
    config.validate();
    FitResult result;
    result.chain = init_chain(rows, basis, config.n_nodes);
    result.chain.config = config;
    auto& nodes = result.chain.nodes;

    for (std::size_t epoch = 0; epoch < config.lambda_schedule.size(); ++epoch) {
        const double lambda = config.lambda_schedule[epoch];
        const double mu = config.mu_schedule[epoch];
        double previous = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t iter = 0; iter < config.max_iters_per_epoch; ++iter) {
            const Partition partition = assign(rows, nodes);
            nodes = solve_nodes(rows, partition, lambda, mu, config.n_nodes);
            const EnergyBreakdown e = energy(rows, nodes, partition, lambda, mu);
            result.energy_log.push_back({epoch, iter, lambda, mu, e});
            if (!std::isnan(previous) && std::abs(previous - e.total) <= config.tol * std::abs(previous)) break;
            previous = e.total;
        }
    }
    nodes = extend_ends(rows, std::move(nodes), config.end_margin);
    return result;
}

double curve_explained_variance(std::span<const Vec4> rows, std::span<const Vec4> nodes) {
    double total = 0.0;
    double residual = 0.0;
    for (const auto& x : rows) {
        total += squared_norm(x);
        const double d = project_point(x, nodes).distance;
        residual += d * d;
    }
    return std::clamp(1.0 - residual / total, 0.0, 1.0);
}

}  // namespace nql
