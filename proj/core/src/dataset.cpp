#include "nql/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nql/error.hpp"

namespace nql {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Splits one CSV line. Fields may be double-quoted; "" inside quotes is a literal quote.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            if (!trim(field).empty()) {
                throw Error(ErrorKind::MalformedRow,
                            fmt::format("line {}: stray quote inside unquoted field", line_no));
            }
            field.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : std::string(trim(field)));
            field.clear();
            was_quoted = false;
        } else {
            field.push_back(c);
        }
    }
    if (quoted) {
        throw Error(ErrorKind::MalformedRow, fmt::format("line {}: unterminated quoted field", line_no));
    }
    fields.push_back(was_quoted ? field : std::string(trim(field)));
    return fields;
}

double parse_number(std::string_view text, std::string_view column, std::size_t line_no) {
    text = trim(text);
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw Error(ErrorKind::MalformedRow,
                    fmt::format("line {}: cannot parse {} value '{}'", line_no, column, text));
    }
    return value;
}

bool needs_quotes(std::string_view s) {
    return s.find_first_of(",\"") != std::string_view::npos || s != trim(s);
}

StandardizedMatrix apply_moments(const CountryTable& table, const Vec4& means, const Vec4& stds) {
    std::vector<Vec4> values;
    values.reserve(table.size());
    for (const auto& rec : table.records()) {
        const Vec4 raw = rec.indicators();
        Vec4 z{};
        for (std::size_t c = 0; c < kDims; ++c) z[c] = (raw[c] - means[c]) / stds[c];
        values.push_back(z);
    }
    return StandardizedMatrix(std::move(values), means, stds, table.names());
}

}  // namespace

CountryTable::CountryTable(std::vector<CountryRecord> records) : records_(std::move(records)) {
    if (records_.size() < 2) {
        throw Error(ErrorKind::EmptyTable,
                    fmt::format("table needs at least 2 countries, got {}", records_.size()));
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& rec : records_) {
        if (rec.name.empty()) throw Error(ErrorKind::MalformedRow, "empty country name");
        for (double v : rec.indicators()) {
            if (!std::isfinite(v)) {
                throw Error(ErrorKind::MalformedRow, fmt::format("non-finite indicator for '{}'", rec.name));
            }
        }
        if (!seen.insert(rec.name).second) {
            throw Error(ErrorKind::DuplicateCountry, fmt::format("duplicate country '{}'", rec.name));
        }
    }
}

std::optional<std::size_t> CountryTable::find(std::string_view name) const {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (records_[i].name == name) return i;
    }
    return std::nullopt;
}

std::vector<std::string> CountryTable::names() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& rec : records_) out.push_back(rec.name);
    return out;
}

StandardizedMatrix::StandardizedMatrix(std::vector<Vec4> values, Vec4 means, Vec4 stds,
                                       std::vector<std::string> names)
    : values_(std::move(values)), means_(means), stds_(stds), names_(std::move(names)) {}

CountryTable parse_table(std::string_view source) {
    if (source.starts_with("\xEF\xBB\xBF")) source.remove_prefix(3);

    std::vector<CountryRecord> records;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (!source.empty()) {
        const auto nl = source.find('\n');
        std::string_view line = source.substr(0, nl);
        source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);
        ++line_no;
        if (trim(line).empty()) continue;

        const auto fields = split_csv_line(line, line_no);
        if (!header_seen) {
            bool ok = fields.size() == kDims + 1 && fields[0] == kCountryColumn;
            for (std::size_t c = 0; ok && c < kDims; ++c) ok = fields[c + 1] == kIndicatorColumns[c];
            if (!ok) {
                throw Error(ErrorKind::SchemaMismatch,
                            fmt::format("unexpected header '{}'; want country,{}", trim(line),
                                        fmt::join(kIndicatorColumns, ",")));
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != kDims + 1) {
            throw Error(ErrorKind::MalformedRow,
                        fmt::format("line {}: expected {} columns, got {}", line_no, kDims + 1, fields.size()));
        }
        CountryRecord rec;
        rec.name = fields[0];
        if (rec.name.empty()) throw Error(ErrorKind::MalformedRow, fmt::format("line {}: empty country name", line_no));
        rec.gdp_ppp = parse_number(fields[1], kIndicatorColumns[0], line_no);
        rec.life_expectancy = parse_number(fields[2], kIndicatorColumns[1], line_no);
        rec.tb_incidence = parse_number(fields[3], kIndicatorColumns[2], line_no);
        rec.infant_mortality = parse_number(fields[4], kIndicatorColumns[3], line_no);
        records.push_back(std::move(rec));
    }
    if (!header_seen) throw Error(ErrorKind::EmptyTable, "missing header row");
    return CountryTable(std::move(records));
}

CountryTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open data file '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_table(buf.str());
}

std::string serialize_table(const CountryTable& table) {
    std::string out = fmt::format("{},{}\n", kCountryColumn, fmt::join(kIndicatorColumns, ","));
    for (const auto& rec : table.records()) {
        if (needs_quotes(rec.name)) {
            std::string escaped;
            for (char c : rec.name) {
                if (c == '"') escaped.push_back('"');
                escaped.push_back(c);
            }
            out += fmt::format("\"{}\"", escaped);
        } else {
            out += rec.name;
        }
        // {} is the shortest representation that round-trips exactly.
        out += fmt::format(",{},{},{},{}\n", rec.gdp_ppp, rec.life_expectancy, rec.tb_incidence,
                           rec.infant_mortality);
    }
    return out;
}

StandardizedMatrix standardize(const CountryTable& table) {
    const auto n = static_cast<double>(table.size());
    Vec4 means{};
    for (const auto& rec : table.records()) means = means + rec.indicators();
    means = (1.0 / n) * means;

    Vec4 stds{};
    for (const auto& rec : table.records()) {
        const Vec4 d = rec.indicators() - means;
        for (std::size_t c = 0; c < kDims; ++c) stds[c] += d[c] * d[c];
    }
    for (std::size_t c = 0; c < kDims; ++c) {
        stds[c] = std::sqrt(stds[c] / n);
        // Relative test so constant columns with float noise in the mean are still caught.
        if (!(stds[c] > 1e-12 * std::max(1.0, std::abs(means[c])))) {
            throw Error(ErrorKind::ZeroVariance,
                        fmt::format("column '{}' has zero variance", kIndicatorColumns[c]));
        }
    }
    return apply_moments(table, means, stds);
}

StandardizedMatrix standardize_with(const CountryTable& table, const Vec4& means, const Vec4& stds) {
    for (std::size_t c = 0; c < kDims; ++c) {
        if (!(stds[c] > 0.0) || !std::isfinite(stds[c]) || !std::isfinite(means[c])) {
            throw Error(ErrorKind::ZeroVariance,
                        fmt::format("stored std for column '{}' is not positive", kIndicatorColumns[c]));
        }
    }
    return apply_moments(table, means, stds);
}

Vec4 destandardize(const StandardizedMatrix& matrix, const Vec4& z) {
    Vec4 out{};
    for (std::size_t c = 0; c < kDims; ++c) out[c] = z[c] * matrix.stds()[c] + matrix.means()[c];
    return out;
}

}  // namespace nql
