#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nql/elastic_chain.hpp"
#include "nql/vec4.hpp"

namespace nql {

struct PolylineProjection {
    std::size_t segment = 0;
    double t = 0.0;
    double arclength = 0.0;
    double distance = 0.0;
};

/// cum[j] = arclength of node j; cum.back() is the total length.
std::vector<double> cumulative_lengths(std::span<const Vec4> nodes);
double polyline_length(std::span<const Vec4> nodes);

/// Exact closest point on the polyline; ties go to the lower segment.
/// Throws DegenerateSegment if any edge has zero length.
PolylineProjection project_point(const Vec4& point, std::span<const Vec4> nodes);

std::vector<PolylineProjection> project_all(std::span<const Vec4> rows, std::span<const Vec4> nodes);

/// +1 or -1: sign of the Pearson correlation between `values` and the GDP
/// z-score column. Zero correlation counts as +1.
double orientation_sign(std::span<const double> values, std::span<const Vec4> rows);

/// Reverses the node order iff arclength correlates negatively with GDP.
ElasticChain orient(ElasticChain chain, std::span<const Vec4> rows);

/// 2 s / L - 1.
double nql_index(const PolylineProjection& projection, double total_length);

struct IndexRow {
    std::string name;
    double nql_index = 0.0;
    std::size_t nql_rank = 0;
    double linear_index = 0.0;
    std::size_t linear_rank = 0;
};

/// Rows ordered by nql_rank.
struct IndexTable {
    std::vector<IndexRow> rows;

    /// Throws UnknownCountry.
    const IndexRow& at(std::string_view name) const;
};

/// 1-based ranks, descending value, ties by ascending name. Output is aligned
/// with the inputs.
std::vector<std::size_t> rank(std::span<const std::string> names, std::span<const double> values);

IndexTable build_index_table(std::span<const std::string> names, std::span<const double> nql_values,
                             std::span<const double> linear_values);

struct RankShift {
    std::string name;
    std::size_t linear_rank = 0;
    std::size_t nql_rank = 0;
    long shift = 0;  // linear_rank - nql_rank; positive means the curve ranks it higher
};

struct PairVerdict {
    std::string first;
    std::string second;
    std::size_t first_linear_rank = 0;
    std::size_t second_linear_rank = 0;
    std::size_t first_nql_rank = 0;
    std::size_t second_nql_rank = 0;

    bool first_above_linear() const { return first_linear_rank < second_linear_rank; }
    bool first_above_nql() const { return first_nql_rank < second_nql_rank; }
    bool reversed() const { return first_above_linear() != first_above_nql(); }
};

struct ComparisonReport {
    std::vector<RankShift> shifts;  // in table order
    std::optional<PairVerdict> pair;

    /// Largest |shift| first, then by name.
    std::vector<RankShift> top_movers(std::size_t count) const;
};

ComparisonReport compare_linear_nonlinear(const IndexTable& table,
                                          std::optional<std::pair<std::string, std::string>> pair = std::nullopt);

/// Projects every row onto an oriented chain and scores it on the linear
/// axis (multiplied by linear_sign), then ranks both.
IndexTable index_countries(std::span<const std::string> names, std::span<const Vec4> rows,
                           std::span<const Vec4> nodes, const Vec4& linear_axis, double linear_sign);

/// `rank country nql_index linear_rank linear_index`, values to 3 decimals.
std::string format_ranking_tsv(const IndexTable& table);

}  // namespace nql
