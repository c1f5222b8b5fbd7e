#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nql/cli/model_file.hpp"
#include "nql/cli/run_config.hpp"
#include "nql/dataset.hpp"
#include "nql/error.hpp"
#include "nql/index.hpp"

namespace nql::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

int exit_code_for(ErrorKind kind);

/// standardize -> PCA -> elastic fit -> orient.
FittedModel fit_model(const CountryTable& table, const ChainConfig& config);

std::filesystem::path model_path(const RunConfig& config);

/// Throws SchemaMismatch if the model was fitted on different columns.
void check_schema(const FittedModel& model);

IndexTable rank_with_model(const FittedModel& model, const CountryTable& table);

struct Summary {
    double pc1_ratio = 0.0;
    double curve_ratio = 0.0;
};

Summary summarize(const FittedModel& model, const CountryTable& table);

std::string report_text(const FittedModel& model, const CountryTable& table);

std::string plot_svg(const FittedModel& model, const CountryTable& table, PlotAxes axes);

/// Writes the model, prints a short summary to `out`. Returns the model.
FittedModel cmd_fit(const RunConfig& config, std::ostream& out);

/// Full command-line entry point. Diagnostics go to `err` as one line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nql::cli
