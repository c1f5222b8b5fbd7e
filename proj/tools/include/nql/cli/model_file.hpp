#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nql/elastic_chain.hpp"
#include "nql/linear_pca.hpp"

namespace nql::cli {

inline constexpr int kModelFormatVersion = 1;

/// Everything needed to index new data without refitting.
struct FittedModel {
    std::vector<std::string> columns;  // header of the training CSV
    Vec4 means{};
    Vec4 stds{};
    PrincipalBasis basis;
    double linear_sign = 1.0;
    ElasticChain chain;  // oriented
    std::vector<EnergyLogEntry> energy_log;
};

/// Versioned plain-text sections with shortest round-trip decimals.
std::string write_model(const FittedModel& model);
FittedModel read_model(std::string_view text);

void save_model(const FittedModel& model, const std::filesystem::path& path);
FittedModel load_model(const std::filesystem::path& path);

}  // namespace nql::cli
