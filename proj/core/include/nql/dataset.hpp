#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nql/vec4.hpp"

namespace nql {

/// Column order of the indicator CSV; GDP is column 0 and drives orientation.
inline constexpr std::array<std::string_view, kDims> kIndicatorColumns = {
    "gdp_ppp", "life_expectancy", "tb_incidence", "infant_mortality"};

inline constexpr std::string_view kCountryColumn = "country";

inline constexpr std::size_t kGdpColumn = 0;

struct CountryRecord {
    std::string name;
    double gdp_ppp = 0.0;
    double life_expectancy = 0.0;
    double tb_incidence = 0.0;
    double infant_mortality = 0.0;

    Vec4 indicators() const { return {gdp_ppp, life_expectancy, tb_incidence, infant_mortality}; }

    bool operator==(const CountryRecord&) const = default;
};

/// Validated, ordered list of countries. Names are non-empty and unique,
/// all indicators finite, at least two rows.
class CountryTable {
public:
    explicit CountryTable(std::vector<CountryRecord> records);

    std::span<const CountryRecord> records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    const CountryRecord& operator[](std::size_t i) const { return records_[i]; }

    std::optional<std::size_t> find(std::string_view name) const;
    std::vector<std::string> names() const;

    bool operator==(const CountryTable&) const = default;

private:
    std::vector<CountryRecord> records_;
};

/// N x 4 z-scored data (population std) plus the moments needed to undo it.
class StandardizedMatrix {
public:
    StandardizedMatrix(std::vector<Vec4> values, Vec4 means, Vec4 stds, std::vector<std::string> names);

    std::span<const Vec4> rows() const { return values_; }
    const Vec4& row(std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }
    const Vec4& means() const { return means_; }
    const Vec4& stds() const { return stds_; }
    std::span<const std::string> names() const { return names_; }

private:
    std::vector<Vec4> values_;
    Vec4 means_;
    Vec4 stds_;
    std::vector<std::string> names_;
};

CountryTable parse_table(std::string_view source);
CountryTable load_table(const std::filesystem::path& path);
std::string serialize_table(const CountryTable& table);

StandardizedMatrix standardize(const CountryTable& table);

/// Applies previously fitted moments (e.g. from a saved model) to a table.
StandardizedMatrix standardize_with(const CountryTable& table, const Vec4& means, const Vec4& stds);

Vec4 destandardize(const StandardizedMatrix& matrix, const Vec4& z);

}  // namespace nql
