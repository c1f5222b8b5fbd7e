#include "nql/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "nql/dataset.hpp"
#include "nql/error.hpp"

namespace nql {

std::vector<double> cumulative_lengths(std::span<const Vec4> nodes) {
    std::vector<double> cum(nodes.size(), 0.0);
    for (std::size_t j = 1; j < nodes.size(); ++j) cum[j] = cum[j - 1] + norm(nodes[j] - nodes[j - 1]);
    return cum;
}

double polyline_length(std::span<const Vec4> nodes) {
    return nodes.empty() ? 0.0 : cumulative_lengths(nodes).back();
}

PolylineProjection project_point(const Vec4& point, std::span<const Vec4> nodes) {
    if (nodes.size() < 2) throw Error(ErrorKind::DegenerateSegment, "polyline needs at least 2 nodes");
    PolylineProjection best;
    double best_d2 = std::numeric_limits<double>::infinity();
    double arc = 0.0;
    double best_arc_start = 0.0;
    double best_len = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const Vec4 d = nodes[k + 1] - nodes[k];
        const double len2 = squared_norm(d);
        if (len2 == 0.0) throw Error(ErrorKind::DegenerateSegment, fmt::format("segment {} has zero length", k));
        const double t = std::clamp(dot(point - nodes[k], d) / len2, 0.0, 1.0);
        const double d2 = squared_distance(point, nodes[k] + t * d);
        const double len = std::sqrt(len2);
        if (d2 < best_d2) {
            best_d2 = d2;
            best.segment = k;
            best.t = t;
            best_arc_start = arc;
            best_len = len;
        }
        arc += len;
    }
    best.arclength = best_arc_start + best.t * best_len;
    best.distance = std::sqrt(best_d2);
    return best;
}

std::vector<PolylineProjection> project_all(std::span<const Vec4> rows, std::span<const Vec4> nodes) {
    std::vector<PolylineProjection> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(project_point(r, nodes));
    return out;
}

double orientation_sign(std::span<const double> values, std::span<const Vec4> rows) {
    const auto n = static_cast<double>(values.size());
    double mv = 0.0;
    double mg = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        mv += values[i];
        mg += rows[i][kGdpColumn];
    }
    mv /= n;
    mg /= n;
    double cov = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) cov += (values[i] - mv) * (rows[i][kGdpColumn] - mg);
    // The correlation's sign is the covariance's sign.
    return cov < 0.0 ? -1.0 : 1.0;
}

ElasticChain orient(ElasticChain chain, std::span<const Vec4> rows) {
    std::vector<double> arcs;
    arcs.reserve(rows.size());
    for (const auto& p : project_all(rows, chain.nodes)) arcs.push_back(p.arclength);
    if (orientation_sign(arcs, rows) < 0.0) std::reverse(chain.nodes.begin(), chain.nodes.end());
    return chain;
}

double nql_index(const PolylineProjection& projection, double total_length) {
    return std::clamp(2.0 * projection.arclength / total_length - 1.0, -1.0, 1.0);
}

const IndexRow& IndexTable::at(std::string_view name) const {
    for (const auto& r : rows)
        if (r.name == name) return r;
    throw Error(ErrorKind::UnknownCountry, fmt::format("unknown country '{}'", name));
}

std::vector<std::size_t> rank(std::span<const std::string> names, std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return names[a] < names[b];
    });
    std::vector<std::size_t> ranks(values.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = pos + 1;
    return ranks;
}

IndexTable build_index_table(std::span<const std::string> names, std::span<const double> nql_values,
                             std::span<const double> linear_values) {
    const auto nql_ranks = rank(names, nql_values);
    const auto linear_ranks = rank(names, linear_values);
    IndexTable table;
    table.rows.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        table.rows[nql_ranks[i] - 1] = {names[i], nql_values[i], nql_ranks[i], linear_values[i], linear_ranks[i]};
    }
    return table;
}

IndexTable index_countries(std::span<const std::string> names, std::span<const Vec4> rows,
                           std::span<const Vec4> nodes, const Vec4& linear_axis, double linear_sign) {
    const double length = polyline_length(nodes);
    std::vector<double> nql_values;
    std::vector<double> linear_values;
    nql_values.reserve(rows.size());
    linear_values.reserve(rows.size());
    for (const auto& r : rows) {
        nql_values.push_back(nql_index(project_point(r, nodes), length));
        linear_values.push_back(linear_sign * dot(r, linear_axis));
    }
    return build_index_table(names, nql_values, linear_values);
}

std::vector<RankShift> ComparisonReport::top_movers(std::size_t count) const {
    std::vector<RankShift> out = shifts;
    std::stable_sort(out.begin(), out.end(), [](const RankShift& a, const RankShift& b) {
        if (std::labs(a.shift) != std::labs(b.shift)) return std::labs(a.shift) > std::labs(b.shift);
        return a.name < b.name;
    });
    out.resize(std::min(count, out.size()));
    return out;
}

ComparisonReport compare_linear_nonlinear(const IndexTable& table,
                                          std::optional<std::pair<std::string, std::string>> pair) {
    ComparisonReport report;
    report.shifts.reserve(table.rows.size());
    for (const auto& r : table.rows) {
        report.shifts.push_back({r.name, r.linear_rank, r.nql_rank,
                                 static_cast<long>(r.linear_rank) - static_cast<long>(r.nql_rank)});
    }
    if (pair) {
        const IndexRow& a = table.at(pair->first);
        const IndexRow& b = table.at(pair->second);
        report.pair = PairVerdict{a.name, b.name, a.linear_rank, b.linear_rank, a.nql_rank, b.nql_rank};
    }
    return report;
}

namespace {

std::string fixed3(double v) {
    std::string s = fmt::format("{:.3f}", v);
    if (s == "-0.000") s = "0.000";
    return s;
}

}  // namespace

std::string format_ranking_tsv(const IndexTable& table) {
    std::string out = "rank\tcountry\tnql_index\tlinear_rank\tlinear_index\n";
    for (const auto& r : table.rows) {
        out += fmt::format("{}\t{}\t{}\t{}\t{}\n", r.nql_rank, r.name, fixed3(r.nql_index), r.linear_rank,
                           fixed3(r.linear_index));
    }
    return out;
}

}  // namespace nql
