#include "rdq/quality.hpp"

#include "rdq/errors.hpp"
#include "rdq/parser.hpp"
#include "rdq/text.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace rdq {

namespace {

std::chrono::sys_days to_days(const CanonicalDate& d)
{
    return std::chrono::sys_days{std::chrono::year{d.year} / std::chrono::month{unsigned(d.month)} /
                                 std::chrono::day{unsigned(d.day)}};
}

bool is_placeholder_id(const std::string& value, const StandardizerOptions& options)
{
    std::string compact;
    for (char c : value)
        if (c != '-' && !text::is_space(c))
            compact += c;
    compact = text::to_upper(compact);
    return std::find(options.placeholder_ids.begin(), options.placeholder_ids.end(), compact) !=
           options.placeholder_ids.end();
}

// Canonical rendering of `value` under `kind`, or nullopt if it does not parse.
std::optional<std::string> canonical_form(const std::string& value, FieldKind kind, const AssessmentContext& ctx)
{
    switch (kind) {
    case FieldKind::FreeText:
        return std::string(text::trim(value));
    case FieldKind::Identifier:
        if (auto id = standardize_id(value, ctx.options).value)
            return id->str();
        return std::nullopt;
    case FieldKind::Date:
        if (auto d = standardize_date(value, ctx.options).value)
            return d->iso();
        return std::nullopt;
    case FieldKind::PersonName: {
        static const NameContext no_evidence;
        if (auto n = standardize_name(tokenize(value, kind, ctx.lexicons), no_evidence).value)
            return n->display();
        return std::nullopt;
    }
    case FieldKind::Address: {
        auto tokens = tokenize(value, kind, ctx.lexicons, &ctx.gazetteer);
        if (auto a = standardize_address(value, tokens, ctx.gazetteer, ctx.lexicons).value)
            return a->render();
        return std::nullopt;
    }
    }
    return std::nullopt;
}

DefectCode defect_for(Dimension dimension)
{
    switch (dimension) {
    case Dimension::Completeness: return DefectCode::MissingInfo;
    case Dimension::Correctness: return DefectCode::Typo;
    case Dimension::Timeliness: return DefectCode::Obsolete;
    case Dimension::Consistency: return DefectCode::TransformFault;
    }
    return DefectCode::Typo;
}

std::optional<std::string> exemplar_value(const std::string& exemplar)
{
    return exemplar.empty() ? std::nullopt : std::optional<std::string>(exemplar);
}

} // namespace

std::string_view to_string(Dimension dimension)
{
    switch (dimension) {
    case Dimension::Completeness: return "COMPLETENESS";
    case Dimension::Correctness: return "CORRECTNESS";
    case Dimension::Timeliness: return "TIMELINESS";
    case Dimension::Consistency: return "CONSISTENCY";
    }
    return "?";
}

std::optional<Dimension> parse_dimension(std::string_view name)
{
    for (auto d : {Dimension::Completeness, Dimension::Correctness, Dimension::Timeliness, Dimension::Consistency})
        if (text::iequals(to_string(d), name))
            return d;
    return std::nullopt;
}

std::string_view to_string(RuleKind kind)
{
    switch (kind) {
    case RuleKind::Present: return "PRESENT";
    case RuleKind::Parses: return "PARSES";
    case RuleKind::Canonical: return "CANONICAL";
    case RuleKind::Fresh: return "FRESH";
    }
    return "?";
}

std::optional<RuleKind> parse_rule_kind(std::string_view name)
{
    for (auto k : {RuleKind::Present, RuleKind::Parses, RuleKind::Canonical, RuleKind::Fresh})
        if (text::iequals(to_string(k), name))
            return k;
    return std::nullopt;
}

std::string QualityRule::label() const { return field + ":" + std::string(to_string(kind)); }

std::optional<bool> evaluate_rule(const QualityRule& rule, const std::optional<std::string>& value,
                                  const AssessmentContext& context)
{
    const auto* field = context.schema.find(rule.field);
    const FieldKind kind = field ? field->kind : FieldKind::FreeText;
    switch (rule.kind) {
    case RuleKind::Present:
        if (!value)
            return false;
        return !(kind == FieldKind::Identifier && is_placeholder_id(*value, context.options));
    case RuleKind::Parses:
        if (!value)
            return std::nullopt;
        return canonical_form(*value, kind, context).has_value();
    case RuleKind::Canonical: {
        if (!value)
            return std::nullopt;
        auto canonical = canonical_form(*value, kind, context);
        return canonical && *canonical == *value;
    }
    case RuleKind::Fresh: {
        if (!value || !context.as_of)
            return std::nullopt;
        auto date = standardize_date(*value, context.options).value;
        if (!date)
            return false;
        auto age = (to_days(*context.as_of) - to_days(*date)).count();
        return age >= 0 && age <= context.horizon_days;
    }
    }
    return std::nullopt;
}

void validate_specs(const std::vector<DimensionSpec>& specs, const AssessmentContext& context)
{
    if (specs.empty())
        throw Error(ErrorCode::ConfigInvalid, "no quality dimensions configured");
    double sum = 0.0;
    for (const auto& spec : specs) {
        if (!(spec.weight >= 0.0 && spec.weight <= 1.0))
            throw Error(ErrorCode::ConfigInvalid, std::string(to_string(spec.dimension)) + " weight outside [0, 1]");
        sum += spec.weight;
        for (const auto& rule : spec.rules) {
            const std::string where = std::string(to_string(spec.dimension)) + " rule " + rule.label();
            if (!context.schema.find(rule.field))
                throw Error(ErrorCode::ConfigInvalid, where + " names an unknown field");
            if (rule.good.empty() || rule.bad.empty())
                throw Error(ErrorCode::ConfigInvalid, where + " needs good and bad exemplars");
            if (rule.kind == RuleKind::Fresh && !context.as_of)
                throw Error(ErrorCode::ConfigInvalid, where + " needs an as_of date");
            for (const auto& g : rule.good)
                if (evaluate_rule(rule, exemplar_value(g), context) != std::optional<bool>(true))
                    throw Error(ErrorCode::ConfigInvalid, where + " rejects its good exemplar '" + g + "'");
            for (const auto& b : rule.bad)
                if (evaluate_rule(rule, exemplar_value(b), context) != std::optional<bool>(false))
                    throw Error(ErrorCode::ConfigInvalid, where + " accepts its bad exemplar '" + b + "'");
        }
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorCode::ConfigInvalid, "quality dimension weights do not sum to 1");
}

QualityReport assess(const std::vector<RawRecord>& records, const std::vector<DimensionSpec>& specs, double threshold,
                     const AssessmentContext& context, std::int64_t run_timestamp)
{
    if (records.empty())
        throw Error(ErrorCode::EmptyDataset, "nothing to assess");

    QualityReport report;
    report.threshold = threshold;
    report.record_count = records.size();
    report.run_timestamp = run_timestamp;
    for (const auto& spec : specs) {
        long passed = 0;
        long applicable = 0;
        for (const auto& rule : spec.rules) {
            long rule_passed = 0;
            long rule_applicable = 0;
            for (const auto& r : records) {
                const auto& value = r.value(rule.field);
                auto outcome = evaluate_rule(rule, value, context);
                if (!outcome)
                    continue;
                ++rule_applicable;
                if (*outcome) {
                    ++rule_passed;
                    continue;
                }
                DefectCode code = defect_for(spec.dimension);
                if (rule.kind == RuleKind::Present && value)
                    code = DefectCode::Incomplete;
                report.violations.push_back({r.ref(), rule.field, code, spec.dimension});
            }
            report.per_rule[std::string(to_string(spec.dimension)) + ":" + rule.label()] =
                rule_applicable ? double(rule_passed) / double(rule_applicable) : 1.0;
            passed += rule_passed;
            applicable += rule_applicable;
        }
        double score = applicable ? double(passed) / double(applicable) : 1.0;
        report.per_dimension[spec.dimension] = score;
        report.weights[spec.dimension] = spec.weight;
        report.aggregate += spec.weight * score;
    }
    report.acceptable = report.aggregate >= threshold;
    std::stable_sort(report.violations.begin(), report.violations.end(),
                     [](const Violation& a, const Violation& b) { return a.ref < b.ref; });
    return report;
}

QualityReport assess(const std::vector<CleansedRecord>& records, const std::vector<DimensionSpec>& specs,
                     double threshold, const AssessmentContext& context, std::int64_t run_timestamp)
{
    std::vector<RawRecord> rendered;
    rendered.reserve(records.size());
    for (const auto& r : records)
        rendered.push_back(render(r, context.schema));
    return assess(rendered, specs, threshold, context, run_timestamp);
}

std::string_view to_string(Trend trend)
{
    switch (trend) {
    case Trend::Improving: return "IMPROVING";
    case Trend::Declining: return "DECLINING";
    case Trend::Stable: return "STABLE";
    }
    return "?";
}

TrendSeries record_trend(const TrendSeries& series, const QualityReport& report)
{
    if (!series.points.empty() && report.run_timestamp <= series.points.back().run_timestamp)
        throw Error(ErrorCode::NonMonotoneTimestamp, "report timestamp " + std::to_string(report.run_timestamp) +
                                                         " is not after " +
                                                         std::to_string(series.points.back().run_timestamp));
    TrendSeries out = series;
    out.points.push_back({report.run_timestamp, report.aggregate, report.per_dimension});
    return out;
}

Trend trend_of(const TrendSeries& series)
{
    const auto& p = series.points;
    if (p.size() < 2)
        return Trend::Stable;
    double delta = p.back().aggregate - p[p.size() - 2].aggregate;
    if (delta > 1e-12)
        return Trend::Improving;
    if (delta < -1e-12)
        return Trend::Declining;
    return Trend::Stable;
}

std::string_view to_string(Strategy strategy)
{
    switch (strategy) {
    case Strategy::LaissezFaire: return "LAISSEZ_FAIRE";
    case Strategy::Reactive: return "REACTIVE";
    case Strategy::Proactive: return "PROACTIVE";
    }
    return "?";
}

Strategy recommend_strategy(const StrategyInput& input, const StrategyCuts& cuts)
{
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!unit(input.importance) || !unit(input.change_frequency))
        throw Error(ErrorCode::ConfigInvalid, "strategy inputs must lie in [0, 1]");
    if (!open_unit(cuts.importance_cut) || !open_unit(cuts.frequency_cut))
        throw Error(ErrorCode::ConfigInvalid, "strategy cuts must lie in (0, 1)");
    if (input.importance < cuts.importance_cut)
        return Strategy::LaissezFaire;
    return input.change_frequency < cuts.frequency_cut ? Strategy::Reactive : Strategy::Proactive;
}

} // namespace rdq
