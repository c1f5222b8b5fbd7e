#include "nql/cli/run_config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "nql/error.hpp"
#include "nql/key_value.hpp"

namespace nql::cli {

PlotAxes parse_axes(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
        throw Error(ErrorKind::InvalidConfig, fmt::format("axes '{}' must look like a,b", text));
    }
    PlotAxes axes{static_cast<int>(parse_integer("axes", text.substr(0, comma))),
                  static_cast<int>(parse_integer("axes", text.substr(comma + 1)))};
    auto valid = [](int a) { return a >= 1 && a <= static_cast<int>(kDims); };
    if (!valid(axes.first) || !valid(axes.second) || axes.first == axes.second) {
        throw Error(ErrorKind::InvalidConfig,
                    fmt::format("axes {},{} must be distinct components in 1..{}", axes.first, axes.second, kDims));
    }
    return axes;
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
    const auto entries = parse_key_values(text);
    RunConfig cfg;
    bool have_data = false;
    for (const auto& [key, value] : entries) {
        if (key == "data_path") {
            cfg.data_path = base_dir / value;
            have_data = true;
        } else if (key == "output_dir") {
            cfg.output_dir = base_dir / value;
        } else if (key == "plot.axes") {
            cfg.plot_axes = parse_axes(value);
        } else if (!key.starts_with("chain.")) {
            throw Error(ErrorKind::InvalidConfig, fmt::format("unknown key '{}'", key));
        }
    }
    if (!have_data) throw Error(ErrorKind::InvalidConfig, "config is missing data_path");
    if (cfg.output_dir.empty()) cfg.output_dir = base_dir;
    cfg.chain = ChainConfig::from_key_values(entries);
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open config file '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path.parent_path());
}

}  // namespace nql::cli
