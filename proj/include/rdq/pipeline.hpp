#pragma once

#include "rdq/config.hpp"
#include "rdq/consolidator.hpp"
#include "rdq/enricher.hpp"
#include "rdq/matcher.hpp"
#include "rdq/parser.hpp"
#include "rdq/quality.hpp"
#include "rdq/record_model.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rdq {

enum class Stage { Profile, Assess, Cleanse, Enrich, Match, Consolidate };

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view name);

struct StageNote {
    std::string stage;
    ErrorCode code = ErrorCode::EmptyDataset;
    std::string detail;

    bool operator==(const StageNote&) const = default;
};

struct MatchResult {
    std::vector<MatchPair> scored; // every candidate pair, in candidate order
    std::vector<MatchCluster> clusters;
};

struct StageArtifacts {
    std::optional<std::vector<RawRecord>> raw;
    std::vector<MalformedRow> malformed;
    std::optional<std::vector<FieldProfile>> profiles;
    std::optional<QualityReport> quality_before;
    std::optional<std::vector<CleansedRecord>> cleansed;
    std::optional<std::vector<CleansedRecord>> enriched;
    std::vector<EnrichmentNote> enrichment_notes;
    std::optional<MatchResult> matches;
    std::optional<std::vector<CleansedRecord>> cleansed_final; // enriched, after back-propagation
    std::optional<std::vector<CleansedRecord>> consolidated;   // members carrying their golden author id
    std::optional<std::vector<GoldenRecord>> golden;
    std::optional<QualityReport> quality_after;
    std::optional<Strategy> strategy;
    std::optional<Trend> trend;
    std::vector<StageNote> notes;
};

using Clock = std::function<std::int64_t()>; // epoch milliseconds

std::int64_t system_clock_ms();

/// Reads the input dataset into a fresh artifact set.
StageArtifacts load_input(const std::filesystem::path& input, const PipelineConfig& config);

/// Runs one stage on top of earlier results. MATCH enriches first when only
/// cleansed records exist. ASSESS scores the raw data, or the
/// back-propagated records once consolidation has run. Throws MISSING_PREREQUISITE when an
/// earlier stage's output is absent.
StageArtifacts run_stage(Stage stage, StageArtifacts state, const PipelineConfig& config,
                         const Clock& clock = system_clock_ms);

/// PROFILE, ASSESS, CLEANSE, ENRICH, MATCH, CONSOLIDATE, ASSESS.
StageArtifacts run_pipeline(const std::filesystem::path& input, const PipelineConfig& config,
                            const Clock& clock = system_clock_ms);

/// Table renderings in the stage layouts. MISSING cells are empty strings.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Author id, first, last, identifier, date, full address.
Table cleansed_table(const std::vector<CleansedRecord>& records, const PipelineConfig& config);
/// As above with the zip moved out of the address into its own column.
Table enriched_table(const std::vector<CleansedRecord>& records, const PipelineConfig& config);
Table golden_table(const std::vector<GoldenRecord>& golden, const PipelineConfig& config);

void write_table(std::ostream& out, const Table& table);

/// Writes every artifact present in `state` into `dir`; returns the file
/// names written. Data files carry no timestamps.
std::vector<std::string> write_outputs(const StageArtifacts& state, const PipelineConfig& config,
                                       const std::filesystem::path& dir);

} // namespace rdq
