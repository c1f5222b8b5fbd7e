#include "nql/key_value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "nql/error.hpp"

namespace nql {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

KeyValueList parse_key_values(std::string_view text) {
    KeyValueList out;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidConfig, fmt::format("line {}: expected 'key = value'", line_no));
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw Error(ErrorKind::InvalidConfig, fmt::format("line {}: empty key", line_no));
        if (!seen.insert(key).second) {
            throw Error(ErrorKind::InvalidConfig, fmt::format("line {}: duplicate key '{}'", line_no, key));
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    value = trim(value);
    double v = 0.0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (value.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw Error(ErrorKind::InvalidConfig, fmt::format("{}: '{}' is not a number", key, value));
    }
    return v;
}

long long parse_integer(std::string_view key, std::string_view value) {
    value = trim(value);
    long long v = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (value.empty() || ec != std::errc{} || ptr != end) {
        throw Error(ErrorKind::InvalidConfig, fmt::format("{}: '{}' is not an integer", key, value));
    }
    return v;
}

std::vector<double> parse_real_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    while (true) {
        const auto comma = value.find(',');
        out.push_back(parse_real(key, value.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        value = value.substr(comma + 1);
    }
    return out;
}

}  // namespace nql
