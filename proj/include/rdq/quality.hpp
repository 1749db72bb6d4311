#pragma once

#include "rdq/gazetteer.hpp"
#include "rdq/lexicons.hpp"
#include "rdq/record_model.hpp"
#include "rdq/standardizer.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rdq {

enum class Dimension { Completeness, Correctness, Timeliness, Consistency };

std::string_view to_string(Dimension dimension);
std::optional<Dimension> parse_dimension(std::string_view name);

/// Check applied to one field of every record.
///   PRESENT   value is non-MISSING and not a placeholder identifier
///   PARSES    value standardizes to a canonical form (MISSING: not applicable)
///   CANONICAL value already equals its canonical rendering (MISSING: not applicable)
///   FRESH     value is a date no older than the horizon before `as_of`
///             (MISSING or no `as_of`: not applicable)
enum class RuleKind { Present, Parses, Canonical, Fresh };

std::string_view to_string(RuleKind kind);
std::optional<RuleKind> parse_rule_kind(std::string_view name);

struct QualityRule {
    std::string field;
    RuleKind kind = RuleKind::Present;
    std::vector<std::string> good; // "" stands for MISSING
    std::vector<std::string> bad;

    std::string label() const; // "FIELD:KIND"
};

struct DimensionSpec {
    Dimension dimension = Dimension::Completeness;
    double weight = 0.0;
    std::vector<QualityRule> rules;
};

/// Reference data the rules need to standardize values.
struct AssessmentContext {
    const Schema& schema;
    const Lexicons& lexicons;
    const Gazetteer& gazetteer;
    StandardizerOptions options;
    std::optional<CanonicalDate> as_of;
    int horizon_days = 365;
};

/// true pass, false fail, nullopt not applicable.
std::optional<bool> evaluate_rule(const QualityRule& rule, const std::optional<std::string>& value,
                                  const AssessmentContext& context);

/// Throws CONFIG_INVALID unless weights lie in [0, 1] and sum to 1 (1e-9),
/// rule fields exist, and every rule passes its good and fails its bad
/// exemplars.
void validate_specs(const std::vector<DimensionSpec>& specs, const AssessmentContext& context);

struct Violation {
    RecordRef ref;
    std::string field;
    DefectCode code = DefectCode::MissingInfo;
    Dimension dimension = Dimension::Completeness;

    bool operator==(const Violation&) const = default;
};

struct QualityReport {
    std::map<Dimension, double> per_dimension;
    std::map<std::string, double> per_rule; // keyed by "DIMENSION:FIELD:KIND"
    std::map<Dimension, double> weights;
    double aggregate = 0.0;
    double threshold = 0.0;
    bool acceptable = false;
    std::vector<Violation> violations;
    std::size_t record_count = 0;
    std::int64_t run_timestamp = 0; // epoch milliseconds
};

/// Scores each dimension as passing / applicable checks; a dimension with no
/// applicable check scores 1. Throws EMPTY_DATASET on no records.
QualityReport assess(const std::vector<RawRecord>& records, const std::vector<DimensionSpec>& specs, double threshold,
                     const AssessmentContext& context, std::int64_t run_timestamp);
QualityReport assess(const std::vector<CleansedRecord>& records, const std::vector<DimensionSpec>& specs,
                     double threshold, const AssessmentContext& context, std::int64_t run_timestamp);

struct TrendPoint {
    std::int64_t run_timestamp = 0;
    double aggregate = 0.0;
    std::map<Dimension, double> per_dimension;
};

struct TrendSeries {
    std::string dataset_id;
    std::vector<TrendPoint> points; // strictly increasing timestamps
};

enum class Trend { Improving, Declining, Stable };

std::string_view to_string(Trend trend);

/// Appends the report. Throws NON_MONOTONE_TIMESTAMP unless it is newer than
/// the last point.
TrendSeries record_trend(const TrendSeries& series, const QualityReport& report);

/// Direction of the last step; STABLE with fewer than two points.
Trend trend_of(const TrendSeries& series);

enum class Strategy { LaissezFaire, Reactive, Proactive };

std::string_view to_string(Strategy strategy);

struct StrategyInput {
    double importance = 0.0;
    double change_frequency = 0.0;
};

struct StrategyCuts {
    double importance_cut = 0.5;
    double frequency_cut = 0.5;
};

/// Throws CONFIG_INVALID when inputs leave [0, 1] or cuts leave (0, 1).
Strategy recommend_strategy(const StrategyInput& input, const StrategyCuts& cuts);

} // namespace rdq
