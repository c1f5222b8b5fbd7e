#include "nql/cli/model_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nql/error.hpp"

namespace nql::cli {
namespace {

[[noreturn]] void malformed(std::size_t line_no, std::string_view what) {
    throw Error(ErrorKind::Io, fmt::format("malformed model file, line {}: {}", line_no, what));
}

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    std::string_view next() {
        if (text_.empty()) malformed(line_no_ + 1, "unexpected end of file");
        const auto nl = text_.find('\n');
        std::string_view line = text_.substr(0, nl);
        text_ = nl == std::string_view::npos ? std::string_view{} : text_.substr(nl + 1);
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    }

    std::size_t line_no() const { return line_no_; }

    void expect(std::string_view header) {
        if (next() != header) malformed(line_no_, fmt::format("expected '{}'", header));
    }

    // "NAME <count>"
    std::size_t expect_counted(std::string_view name) {
        const auto line = next();
        if (!line.starts_with(name) || line.size() <= name.size() + 1 || line[name.size()] != ' ') {
            malformed(line_no_, fmt::format("expected '{} <count>'", name));
        }
        return static_cast<std::size_t>(parse_number(line.substr(name.size() + 1)));
    }

    double parse_number(std::string_view token) const {
        double v = 0.0;
        const char* end = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(token.data(), end, v);
        if (token.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
            malformed(line_no_, fmt::format("bad number '{}'", token));
        }
        return v;
    }

    std::vector<double> numbers(std::size_t count) {
        const auto line = next();
        std::vector<double> out;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const auto sp = line.find(' ', pos);
            out.push_back(parse_number(line.substr(pos, sp == std::string_view::npos ? sp : sp - pos)));
            if (sp == std::string_view::npos) break;
            pos = sp + 1;
        }
        if (out.size() != count) malformed(line_no_, fmt::format("expected {} values, got {}", count, out.size()));
        return out;
    }

    Vec4 vec4() {
        const auto v = numbers(kDims);
        return {v[0], v[1], v[2], v[3]};
    }

private:
    std::string_view text_;
    std::size_t line_no_ = 0;
};

std::string vec_line(const Vec4& v) { return fmt::format("{} {} {} {}\n", v[0], v[1], v[2], v[3]); }

}  // namespace

std::string write_model(const FittedModel& m) {
    std::string out = fmt::format("NQL_MODEL {}\n", kModelFormatVersion);
    out += fmt::format("COLUMNS\n{}\n", fmt::join(m.columns, ","));
    out += "MEANS\n" + vec_line(m.means);
    out += "STDS\n" + vec_line(m.stds);
    out += "EIGENVALUES\n" + vec_line(m.basis.eigenvalues);
    out += fmt::format("TOTAL_VARIANCE\n{}\n", m.basis.total_variance);
    out += "BASIS\n";
    for (const auto& c : m.basis.components) out += vec_line(c);
    out += fmt::format("LINEAR_SIGN\n{}\n", m.linear_sign);

    const std::string config = m.chain.config.to_text();
    out += fmt::format("CONFIG {}\n{}", std::count(config.begin(), config.end(), '\n'), config);
    out += fmt::format("NODES {}\n", m.chain.nodes.size());
    for (const auto& n : m.chain.nodes) out += vec_line(n);
    out += fmt::format("ENERGY_LOG {}\n", m.energy_log.size());
    for (const auto& e : m.energy_log) {
        out += fmt::format("{} {} {} {} {} {} {} {}\n", e.epoch, e.iteration, e.lambda, e.mu, e.energy.approximation,
                           e.energy.stretching, e.energy.bending, e.energy.total);
    }
    out += "END\n";
    return out;
}

FittedModel read_model(std::string_view text) {
    LineReader in(text);
    FittedModel m;
    if (in.next() != fmt::format("NQL_MODEL {}", kModelFormatVersion)) {
        malformed(in.line_no(), fmt::format("expected format version {}", kModelFormatVersion));
    }
    in.expect("COLUMNS");
    {
        std::string_view cols = in.next();
        while (true) {
            const auto comma = cols.find(',');
            m.columns.emplace_back(cols.substr(0, comma));
            if (comma == std::string_view::npos) break;
            cols = cols.substr(comma + 1);
        }
    }
    in.expect("MEANS");
    m.means = in.vec4();
    in.expect("STDS");
    m.stds = in.vec4();
    in.expect("EIGENVALUES");
    m.basis.eigenvalues = in.vec4();
    in.expect("TOTAL_VARIANCE");
    m.basis.total_variance = in.numbers(1)[0];
    in.expect("BASIS");
    for (auto& c : m.basis.components) c = in.vec4();
    in.expect("LINEAR_SIGN");
    m.linear_sign = in.numbers(1)[0];

    const std::size_t config_lines = in.expect_counted("CONFIG");
    std::string config;
    for (std::size_t i = 0; i < config_lines; ++i) {
        config += in.next();
        config += '\n';
    }
    m.chain.config = ChainConfig::from_text(config);

    const std::size_t n_nodes = in.expect_counted("NODES");
    m.chain.nodes.reserve(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) m.chain.nodes.push_back(in.vec4());

    const std::size_t n_log = in.expect_counted("ENERGY_LOG");
    m.energy_log.reserve(n_log);
    for (std::size_t i = 0; i < n_log; ++i) {
        const auto v = in.numbers(8);
        m.energy_log.push_back({static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]), v[2], v[3],
                                EnergyBreakdown{v[4], v[5], v[6], v[7]}});
    }
    in.expect("END");
    return m;
}

void save_model(const FittedModel& model, const std::filesystem::path& path) {
    const std::string text = write_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write model file '{}'", path.string()));
    out << text;
    if (!out) throw Error(ErrorKind::Io, fmt::format("failed writing model file '{}'", path.string()));
}

FittedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open model file '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_model(buf.str());
}

}  // namespace nql::cli
