#pragma once

#include "rdq/consolidator.hpp"
#include "rdq/gazetteer.hpp"
#include "rdq/lexicons.hpp"
#include "rdq/matcher.hpp"
#include "rdq/quality.hpp"
#include "rdq/record_model.hpp"
#include "rdq/standardizer.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rdq {

/// Column names of the stage tables that do not come from the schema.
struct TableLayout {
    std::string first = "First";
    std::string last = "Last";
    std::string zip = "Zip";
};

struct PipelineConfig {
    explicit PipelineConfig(Schema s)
        : schema(std::move(s))
    {
    }

    Schema schema;
    std::optional<DataFormat> input_format; // by extension when unset
    Lexicons lexicons;
    Gazetteer gazetteer;
    StandardizerOptions standardizer;
    MatchConfig match;
    SurvivorshipPolicy survivorship;
    std::vector<DimensionSpec> dimensions;
    double quality_threshold = 0.8;
    std::optional<CanonicalDate> as_of;
    int horizon_days = 365;
    StrategyInput strategy_input;
    StrategyCuts strategy_cuts;
    TableLayout layout;
    std::filesystem::path output_dir;
    std::optional<std::filesystem::path> trend_file;

    AssessmentContext assessment_context() const;
};

/// Loads a JSON config. Relative paths resolve against the config file's
/// directory. Throws CONFIG_INVALID on malformed or inconsistent content and
/// IO_FAILURE when the file or a referenced resource cannot be read.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);

} // namespace rdq
