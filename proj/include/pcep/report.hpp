#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "pcep/eval.hpp"
#include "pcep/inference.hpp"
#include "pcep/search.hpp"

namespace pcep {

/// Formats with 6 significant digits, as used in every CSV output.
std::string csv_number(double value);

nlohmann::json to_json(const PosteriorSummary& summary, const std::vector<std::string>& names,
                       std::size_t top = 10);
nlohmann::json to_json(const SummaryStats& stats);
nlohmann::json to_json(const ReplicateReport& report);
nlohmann::json to_json(const RmseReport& report, const std::vector<std::string>& names);

/// One row per model: bitmask, covariate label, dimension, then the log
/// marginal of each table in column order. Tables must share p.
void write_scores_csv(const std::filesystem::path& path, const std::vector<const ScoreTable*>& tables,
                      const std::vector<std::string>& names);
void write_replicates_csv(const std::filesystem::path& path, const ReplicateReport& report);
void write_rmse_csv(const std::filesystem::path& path, const std::vector<RmseReport>& reports,
                    const std::vector<std::string>& names);
void write_contour_csv(const std::filesystem::path& path, const std::vector<ContourPoint>& grid);
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace pcep
