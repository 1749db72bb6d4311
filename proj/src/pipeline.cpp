#include "rdq/pipeline.hpp"

#include "rdq/artifacts_io.hpp"
#include "rdq/delimited.hpp"
#include "rdq/errors.hpp"
#include "rdq/text.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

namespace rdq {

namespace {

namespace fs = std::filesystem;

template <typename T>
const T& require(const std::optional<T>& slot, Stage stage, const char* what)
{
    if (!slot)
        throw Error(ErrorCode::MissingPrerequisite,
                    std::string(to_string(stage)) + " needs " + what + " from an earlier stage");
    return *slot;
}

void profile(StageArtifacts& state, const PipelineConfig& config)
{
    const auto& raw = require(state.raw, Stage::Profile, "raw records");
    std::vector<FieldProfile> profiles;
    for (const auto& field : config.schema.fields())
        profiles.push_back(profile_field(raw, field, config.lexicons, &config.gazetteer));
    state.profiles = std::move(profiles);
}

void cleanse(StageArtifacts& state, const PipelineConfig& config)
{
    const auto& raw = require(state.raw, Stage::Cleanse, "raw records");
    const auto names = build_name_context(raw, config.schema, config.lexicons);
    const CleansingContext context{config.schema, config.lexicons, config.gazetteer, names, config.standardizer};
    std::vector<CleansedRecord> out;
    out.reserve(raw.size());
    for (const auto& r : raw)
        out.push_back(cleanse_record(r, context));
    state.cleansed = std::move(out);
}

void enrich(StageArtifacts& state, const PipelineConfig& config)
{
    const auto& cleansed = require(state.cleansed, Stage::Enrich, "cleansed records");
    const auto roles = FieldRoles::from_schema(config.schema);
    std::vector<CleansedRecord> out;
    state.enrichment_notes.clear();
    for (const auto& r : cleansed) {
        auto e = enrich_record(r, config.gazetteer, roles.address);
        out.push_back(std::move(e.record));
        for (auto& n : e.notes)
            state.enrichment_notes.push_back(std::move(n));
    }
    state.enriched = std::move(out);
}

void match(StageArtifacts& state, const PipelineConfig& config)
{
    require(state.cleansed, Stage::Match, "cleansed records");
    if (!state.enriched)
        enrich(state, config);
    const auto& records = *state.enriched;
    MatchResult result;
    result.scored = score_pairs(records, block(records, config.match), config.match);
    result.clusters = cluster(result.scored, records, config.match);
    state.matches = std::move(result);
}

void consolidate_stage(StageArtifacts& state, const PipelineConfig& config)
{
    const auto& matches = require(state.matches, Stage::Consolidate, "match clusters");
    const auto& records = require(state.enriched, Stage::Consolidate, "enriched records");
    const auto roles = FieldRoles::from_schema(config.schema);

    std::map<RecordRef, CleansedRecord> repaired;
    std::vector<GoldenRecord> golden;
    std::vector<CleansedRecord> consolidated;
    for (const auto& c : matches.clusters) {
        auto members = cluster_members(c, records);
        auto g = consolidate(members, config.survivorship, roles);
        auto back = backpropagate(members, g, roles);
        for (const auto& m : back)
            repaired.insert_or_assign(m.ref, m);
        for (auto& m : majority_identity_members(back, g))
            consolidated.push_back(std::move(m));
        golden.push_back(std::move(g));
    }

    std::vector<CleansedRecord> final_records;
    for (const auto& r : records) {
        auto it = repaired.find(r.ref);
        final_records.push_back(it == repaired.end() ? r : it->second);
    }
    state.cleansed_final = std::move(final_records);
    state.consolidated = std::move(consolidated);
    state.golden = std::move(golden);
}

void assess_stage(StageArtifacts& state, const PipelineConfig& config, const Clock& clock)
{
    const auto context = config.assessment_context();
    const bool after = state.cleansed_final.has_value();
    if (!after)
        require(state.raw, Stage::Assess, "raw records");

    std::int64_t stamp = clock();
    if (after && state.quality_before)
        stamp = std::max(stamp, state.quality_before->run_timestamp + 1);

    try {
        if (after) {
            state.quality_after =
                assess(*state.cleansed_final, config.dimensions, config.quality_threshold, context, stamp);
        } else {
            state.quality_before = assess(*state.raw, config.dimensions, config.quality_threshold, context, stamp);
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyDataset)
            throw;
        state.notes.push_back({std::string(to_string(Stage::Assess)), e.code(), e.what()});
    }

    if (!after)
        return;
    state.strategy = recommend_strategy(config.strategy_input, config.strategy_cuts);

    try {
        TrendSeries series;
        if (config.trend_file)
            series = load_trend(*config.trend_file, config.trend_file->stem().string());
        if (state.quality_before)
            series = record_trend(series, *state.quality_before);
        if (state.quality_after)
            series = record_trend(series, *state.quality_after);
        state.trend = trend_of(series);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NonMonotoneTimestamp)
            throw;
        state.notes.push_back({std::string(to_string(Stage::Assess)), e.code(), e.what()});
    }
}

std::vector<std::string> extras_header(const PipelineConfig& config, const FieldRoles& roles)
{
    std::vector<std::string> out;
    for (const auto& f : config.schema.fields())
        if (f.name != roles.author_id && f.name != roles.name && f.name != roles.id && f.name != roles.birth_date &&
            f.name != roles.address)
            out.push_back(f.name);
    return out;
}

Table layout_table(const std::vector<CleansedRecord>& records, const PipelineConfig& config, bool split_zip)
{
    const auto roles = FieldRoles::from_schema(config.schema);
    const auto extras = extras_header(config, roles);
    Table table;
    auto& h = table.header;
    if (!roles.author_id.empty())
        h.push_back(roles.author_id);
    if (!roles.name.empty()) {
        h.push_back(config.layout.first);
        h.push_back(config.layout.last);
    }
    for (const auto* f : {&roles.id, &roles.birth_date, &roles.address})
        if (!f->empty())
            h.push_back(*f);
    if (split_zip && !roles.address.empty())
        h.push_back(config.layout.zip);
    h.insert(h.end(), extras.begin(), extras.end());

    for (const auto& r : records) {
        std::vector<std::string> row;
        if (!roles.author_id.empty())
            row.push_back(r.author_id.value_or(""));
        if (!roles.name.empty()) {
            row.push_back(r.name && r.name->first ? r.name->first_display() : "");
            row.push_back(r.name ? r.name->last : "");
        }
        if (!roles.id.empty())
            row.push_back(r.id ? r.id->str() : "");
        if (!roles.birth_date.empty())
            row.push_back(r.birth_date ? r.birth_date->iso() : "");
        if (!roles.address.empty()) {
            if (!r.address)
                row.emplace_back();
            else
                row.push_back(split_zip ? r.address->render_without_zip() : r.address->render());
            if (split_zip) {
                auto zip = r.zip ? r.zip : (r.address ? r.address->zip : std::nullopt);
                row.push_back(zip.value_or(""));
            }
        }
        for (const auto& name : extras) {
            std::string value;
            for (const auto& cell : r.extras)
                if (cell.field == name)
                    value = cell.value.value_or("");
            row.push_back(value);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content) || !out.flush())
        throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
}

std::string table_text(const Table& table)
{
    std::ostringstream out;
    write_table(out, table);
    return out.str();
}

nlohmann::json notes_json(const StageArtifacts& state)
{
    nlohmann::json j;
    j["malformed_rows"] = nlohmann::json::array();
    for (const auto& m : state.malformed)
        j["malformed_rows"].push_back({{"row", m.row_number}, {"message", m.message}});
    j["enrichment"] = nlohmann::json::array();
    for (const auto& n : state.enrichment_notes)
        j["enrichment"].push_back(
            {{"record", to_string(n.ref)}, {"code", std::string(to_string(n.code))}, {"detail", n.detail}});
    j["stages"] = nlohmann::json::array();
    for (const auto& n : state.notes)
        j["stages"].push_back({{"stage", n.stage}, {"code", std::string(to_string(n.code))}, {"detail", n.detail}});
    return j;
}

nlohmann::json quality_file(const std::optional<QualityReport>& report, const StageArtifacts& state, bool after)
{
    nlohmann::json j;
    if (report) {
        j = to_json(*report);
    } else {
        j["notes"] = nlohmann::json::array();
        for (const auto& n : state.notes)
            if (n.code == ErrorCode::EmptyDataset)
                j["notes"].push_back(std::string(to_string(n.code)) + ": " + n.detail);
    }
    if (after) {
        if (state.strategy)
            j["strategy"] = std::string(to_string(*state.strategy));
        if (state.trend)
            j["trend"] = std::string(to_string(*state.trend));
    }
    return j;
}

} // namespace

std::string_view to_string(Stage stage)
{
    switch (stage) {
    case Stage::Profile: return "PROFILE";
    case Stage::Assess: return "ASSESS";
    case Stage::Cleanse: return "CLEANSE";
    case Stage::Enrich: return "ENRICH";
    case Stage::Match: return "MATCH";
    case Stage::Consolidate: return "CONSOLIDATE";
    }
    return "?";
}

std::optional<Stage> parse_stage(std::string_view name)
{
    for (auto s : {Stage::Profile, Stage::Assess, Stage::Cleanse, Stage::Enrich, Stage::Match, Stage::Consolidate})
        if (text::iequals(to_string(s), name))
            return s;
    return std::nullopt;
}

std::int64_t system_clock_ms()
{
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

StageArtifacts load_input(const fs::path& input, const PipelineConfig& config)
{
    if (!fs::exists(input))
        throw Error(ErrorCode::IoFailure, "input not found: " + input.string());
    auto loaded = load_dataset(input, config.schema, config.input_format.value_or(format_for_path(input)));
    StageArtifacts state;
    state.raw = std::move(loaded.records);
    state.malformed = std::move(loaded.malformed);
    return state;
}

StageArtifacts run_stage(Stage stage, StageArtifacts state, const PipelineConfig& config, const Clock& clock)
{
    switch (stage) {
    case Stage::Profile: profile(state, config); break;
    case Stage::Assess: assess_stage(state, config, clock); break;
    case Stage::Cleanse: cleanse(state, config); break;
    case Stage::Enrich: enrich(state, config); break;
    case Stage::Match: match(state, config); break;
    case Stage::Consolidate: consolidate_stage(state, config); break;
    }
    return state;
}

StageArtifacts run_pipeline(const fs::path& input, const PipelineConfig& config, const Clock& clock)
{
    auto state = load_input(input, config);
    for (auto stage : {Stage::Profile, Stage::Assess, Stage::Cleanse, Stage::Enrich, Stage::Match,
                       Stage::Consolidate, Stage::Assess})
        state = run_stage(stage, std::move(state), config, clock);
    return state;
}

Table cleansed_table(const std::vector<CleansedRecord>& records, const PipelineConfig& config)
{
    return layout_table(records, config, false);
}

Table enriched_table(const std::vector<CleansedRecord>& records, const PipelineConfig& config)
{
    return layout_table(records, config, true);
}

Table golden_table(const std::vector<GoldenRecord>& golden, const PipelineConfig& config)
{
    std::vector<CleansedRecord> records;
    for (const auto& g : golden)
        records.push_back(g.record);
    return layout_table(records, config, false);
}

void write_table(std::ostream& out, const Table& table)
{
    delimited::write_row(out, table.header, ',');
    for (const auto& row : table.rows)
        delimited::write_row(out, row, ',');
}

std::vector<std::string> write_outputs(const StageArtifacts& state, const PipelineConfig& config, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        write_file(dir / name, content);
        written.push_back(name);
    };
    auto emit_json = [&](const std::string& name, const nlohmann::json& j) { emit(name, j.dump(2) + "\n"); };

    if (state.profiles)
        emit_json("profile.json", to_json(*state.profiles));
    const bool empty_noted = std::any_of(state.notes.begin(), state.notes.end(),
                                         [](const StageNote& n) { return n.code == ErrorCode::EmptyDataset; });
    if (state.quality_before || empty_noted)
        emit_json("quality_before.json", quality_file(state.quality_before, state, false));
    if (state.cleansed)
        emit("cleansed.csv", table_text(cleansed_table(*state.cleansed, config)));
    if (state.enriched)
        emit("enriched.csv", table_text(enriched_table(*state.enriched, config)));
    if (state.matches)
        emit_json("matches.json", to_json(*state.matches));
    if (state.cleansed_final)
        emit("cleansed_final.csv", table_text(cleansed_table(*state.cleansed_final, config)));
    if (state.consolidated)
        emit("consolidated.csv", table_text(cleansed_table(*state.consolidated, config)));
    if (state.golden) {
        emit("golden.csv", table_text(golden_table(*state.golden, config)));
        emit_json("lineage.json", lineage_json(*state.golden));
    }
    if (state.quality_after || state.strategy)
        emit_json("quality_after.json", quality_file(state.quality_after, state, true));
    if (state.raw)
        emit_json("notes.json", notes_json(state));

    if (config.trend_file && state.quality_after) {
        auto series = load_trend(*config.trend_file, config.trend_file->stem().string());
        for (const auto* report : {&state.quality_before, &state.quality_after}) {
            if (!*report)
                continue;
            if (!series.points.empty() && (*report)->run_timestamp <= series.points.back().run_timestamp)
                continue;
            series = record_trend(series, **report);
            append_trend(*config.trend_file, series.points.back());
        }
    }
    return written;
}

} // namespace rdq
