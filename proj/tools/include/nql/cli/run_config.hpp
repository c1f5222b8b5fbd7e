#pragma once

#include <filesystem>
#include <string_view>
#include <utility>

#include "nql/elastic_chain.hpp"

namespace nql::cli {

struct PlotAxes {
    int first = 1;
    int second = 2;
};

/// Throws InvalidConfig unless both axes are distinct and within 1..4.
PlotAxes parse_axes(std::string_view text);

struct RunConfig {
    std::filesystem::path data_path;
    std::filesystem::path output_dir;
    ChainConfig chain;
    PlotAxes plot_axes;
};

/// Keys: data_path, output_dir, plot.axes, chain.*. Relative paths are
/// resolved against base_dir.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace nql::cli
