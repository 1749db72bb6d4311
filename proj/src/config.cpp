#include "rdq/config.hpp"

#include "rdq/errors.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace rdq {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::ConfigInvalid, message); }

void only_keys(const json& object, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!object.is_object())
        invalid(where + " must be an object");
    std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : object.items())
        if (!known.count(key))
            invalid("unknown key '" + key + "' in " + where);
}

template <typename T>
T get_or(const json& object, const char* key, T fallback)
{
    auto it = object.find(key);
    if (it == object.end())
        return fallback;
    return it->get<T>();
}

fs::path resolve(const fs::path& base, const std::string& relative)
{
    fs::path p(relative);
    p = p.is_absolute() ? p : base / p;
    return p.lexically_normal();
}

fs::path existing(const fs::path& base, const std::string& relative)
{
    auto p = resolve(base, relative);
    if (!fs::exists(p))
        invalid("referenced file does not exist: " + p.string());
    return p;
}

Schema parse_schema(const json& fields)
{
    if (!fields.is_array())
        invalid("schema must be a list of fields");
    std::vector<FieldSchema> out;
    for (const auto& f : fields) {
        only_keys(f, "schema field", {"name", "kind", "required"});
        FieldSchema field;
        field.name = f.at("name").get<std::string>();
        auto kind = parse_field_kind(get_or<std::string>(f, "kind", "FREE_TEXT"));
        if (!kind)
            invalid("unknown field kind for '" + field.name + "'");
        field.kind = *kind;
        field.required = get_or<bool>(f, "required", false);
        out.push_back(std::move(field));
    }
    return Schema(std::move(out));
}

void parse_lexicons(const json& j, const fs::path& base, Lexicons& out)
{
    only_keys(j, "lexicons", {"titles", "street_types", "state_codes", "given_names", "countries"});
    const std::pair<const char*, Lexicon*> slots[] = {
        {"titles", &out.titles},           {"street_types", &out.street_types}, {"state_codes", &out.state_codes},
        {"given_names", &out.given_names}, {"countries", &out.countries},
    };
    for (const auto& [key, slot] : slots)
        if (j.contains(key))
            *slot = load_lexicon(existing(base, j.at(key).get<std::string>()));
}

void parse_match(const json& j, MatchConfig& out)
{
    only_keys(j, "match", {"weights", "threshold", "blocking_key"});
    if (j.contains("weights")) {
        out.weights.clear();
        for (const auto& [name, w] : j.at("weights").items())
            out.weights[name] = w.get<double>();
    }
    out.match_threshold = get_or<double>(j, "threshold", out.match_threshold);
    if (j.contains("blocking_key")) {
        auto key = parse_blocking_key(j.at("blocking_key").get<std::string>());
        if (!key)
            invalid("unknown blocking key");
        out.blocking_key = *key;
    }
    out.validate();
}

QualityRule parse_rule(const json& j)
{
    only_keys(j, "quality rule", {"field", "kind", "good", "bad"});
    QualityRule rule;
    rule.field = j.at("field").get<std::string>();
    auto kind = parse_rule_kind(j.at("kind").get<std::string>());
    if (!kind)
        invalid("unknown rule kind for field '" + rule.field + "'");
    rule.kind = *kind;
    rule.good = get_or<std::vector<std::string>>(j, "good", {});
    rule.bad = get_or<std::vector<std::string>>(j, "bad", {});
    return rule;
}

void parse_quality(const json& j, PipelineConfig& config)
{
    only_keys(j, "quality", {"threshold", "as_of", "horizon_days", "dimensions"});
    config.quality_threshold = get_or<double>(j, "threshold", config.quality_threshold);
    if (!(config.quality_threshold >= 0.0 && config.quality_threshold <= 1.0))
        invalid("quality threshold outside [0, 1]");
    if (j.contains("as_of")) {
        auto date = standardize_date(j.at("as_of").get<std::string>(), config.standardizer).value;
        if (!date)
            invalid("quality.as_of is not a date");
        config.as_of = date;
    }
    config.horizon_days = get_or<int>(j, "horizon_days", config.horizon_days);
    if (config.horizon_days < 0)
        invalid("quality.horizon_days is negative");
    std::set<Dimension> seen;
    for (const auto& d : j.at("dimensions")) {
        only_keys(d, "quality dimension", {"dimension", "weight", "rules"});
        DimensionSpec spec;
        auto dim = parse_dimension(d.at("dimension").get<std::string>());
        if (!dim)
            invalid("unknown quality dimension");
        if (!seen.insert(*dim).second)
            invalid("quality dimension listed twice");
        spec.dimension = *dim;
        spec.weight = d.at("weight").get<double>();
        for (const auto& r : get_or<json>(d, "rules", json::array()))
            spec.rules.push_back(parse_rule(r));
        config.dimensions.push_back(std::move(spec));
    }
}

void parse_strategy(const json& j, PipelineConfig& config)
{
    only_keys(j, "strategy", {"importance", "change_frequency", "importance_cut", "frequency_cut"});
    config.strategy_input.importance = get_or<double>(j, "importance", config.strategy_input.importance);
    config.strategy_input.change_frequency =
        get_or<double>(j, "change_frequency", config.strategy_input.change_frequency);
    config.strategy_cuts.importance_cut = get_or<double>(j, "importance_cut", config.strategy_cuts.importance_cut);
    config.strategy_cuts.frequency_cut = get_or<double>(j, "frequency_cut", config.strategy_cuts.frequency_cut);
    recommend_strategy(config.strategy_input, config.strategy_cuts);
}

PipelineConfig build(const json& root, const fs::path& base)
{
    only_keys(root, "config",
              {"schema", "input_format", "lexicons", "gazetteer", "standardizer", "match", "survivorship", "quality",
               "strategy", "layout", "output_dir", "trend_file"});
    PipelineConfig config(parse_schema(root.at("schema")));

    if (root.contains("input_format")) {
        auto format = parse_data_format(root.at("input_format").get<std::string>());
        if (!format)
            invalid("unknown input format");
        config.input_format = format;
    }
    if (root.contains("lexicons"))
        parse_lexicons(root.at("lexicons"), base, config.lexicons);
    if (root.contains("gazetteer"))
        config.gazetteer = load_gazetteer(existing(base, root.at("gazetteer").get<std::string>()));

    if (root.contains("standardizer")) {
        const auto& s = root.at("standardizer");
        only_keys(s, "standardizer", {"two_digit_year_pivot", "compact_dates", "placeholder_ids"});
        auto& opt = config.standardizer;
        opt.two_digit_year_pivot = get_or<int>(s, "two_digit_year_pivot", opt.two_digit_year_pivot);
        if (opt.two_digit_year_pivot < 0 || opt.two_digit_year_pivot > 99)
            invalid("two_digit_year_pivot outside [0, 99]");
        opt.compact_dates = get_or<bool>(s, "compact_dates", opt.compact_dates);
        opt.placeholder_ids = get_or<std::vector<std::string>>(s, "placeholder_ids", opt.placeholder_ids);
    }

    if (root.contains("match"))
        parse_match(root.at("match"), config.match);

    if (root.contains("survivorship")) {
        config.survivorship.rule_order.clear();
        for (const auto& r : root.at("survivorship")) {
            auto rule = parse_survivorship_rule(r.get<std::string>());
            if (!rule)
                invalid("unknown survivorship rule");
            config.survivorship.rule_order.push_back(*rule);
        }
    }
    config.survivorship.validate();

    if (root.contains("quality"))
        parse_quality(root.at("quality"), config);
    validate_specs(config.dimensions, config.assessment_context());

    if (root.contains("strategy"))
        parse_strategy(root.at("strategy"), config);

    if (root.contains("layout")) {
        const auto& l = root.at("layout");
        only_keys(l, "layout", {"first", "last", "zip"});
        config.layout.first = get_or<std::string>(l, "first", config.layout.first);
        config.layout.last = get_or<std::string>(l, "last", config.layout.last);
        config.layout.zip = get_or<std::string>(l, "zip", config.layout.zip);
    }

    config.output_dir = resolve(base, get_or<std::string>(root, "output_dir", "out"));
    if (root.contains("trend_file"))
        config.trend_file = resolve(base, root.at("trend_file").get<std::string>());
    return config;
}

} // namespace

AssessmentContext PipelineConfig::assessment_context() const
{
    return AssessmentContext{schema, lexicons, gazetteer, standardizer, as_of, horizon_days};
}

PipelineConfig parse_config(std::string_view json_text, const fs::path& base_dir)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        invalid(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return build(root, base_dir);
    } catch (const json::exception& e) {
        invalid(std::string("config has a missing or mistyped entry: ") + e.what());
    }
}

PipelineConfig load_config(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot read config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path());
}

} // namespace rdq
