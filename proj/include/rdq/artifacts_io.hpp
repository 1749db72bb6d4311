#pragma once

#include "rdq/pipeline.hpp"

#include "json.hpp"

#include <filesystem>

namespace rdq {

nlohmann::json to_json(const QualityReport& report);
nlohmann::json to_json(const std::vector<FieldProfile>& profiles);
nlohmann::json to_json(const MatchResult& matches);
nlohmann::json lineage_json(const std::vector<GoldenRecord>& golden);

/// Lossless state dump; `artifacts_from_json(to_json(s))` reproduces `s`.
nlohmann::json to_json(const StageArtifacts& state);
StageArtifacts artifacts_from_json(const nlohmann::json& j);

/// Throws IO_FAILURE when the file cannot be read or written, CONFIG_INVALID
/// when a dump is malformed.
void save_state(const std::filesystem::path& path, const StageArtifacts& state);
StageArtifacts load_state(const std::filesystem::path& path);

/// Trend series stored one JSON object per line.
TrendSeries load_trend(const std::filesystem::path& path, const std::string& dataset_id);
void append_trend(const std::filesystem::path& path, const TrendPoint& point);

} // namespace rdq
