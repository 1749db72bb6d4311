#include "rdq/artifacts_io.hpp"

#include "rdq/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rdq {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json opt(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::string> opt_str(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    return it->get<std::string>();
}

json ref_json(const RecordRef& ref) { return {{"source", ref.source_id}, {"row", ref.row_number}}; }

RecordRef ref_from(const json& j) { return {j.at("source").get<std::string>(), j.at("row").get<int>()}; }

json refs_json(const std::vector<RecordRef>& refs)
{
    json out = json::array();
    for (const auto& r : refs)
        out.push_back(ref_json(r));
    return out;
}

std::vector<RecordRef> refs_from(const json& j)
{
    std::vector<RecordRef> out;
    for (const auto& r : j)
        out.push_back(ref_from(r));
    return out;
}

template <typename Enum, typename Parse>
Enum enum_from(const json& j, Parse parse, const char* what)
{
    auto v = parse(j.get<std::string>());
    if (!v)
        throw Error(ErrorCode::ConfigInvalid, std::string("state dump has an unknown ") + what);
    return *v;
}

std::optional<ErrorCode> parse_error_code(std::string_view name)
{
    for (int i = 0; i <= static_cast<int>(ErrorCode::MissingPrerequisite); ++i)
        if (to_string(static_cast<ErrorCode>(i)) == name)
            return static_cast<ErrorCode>(i);
    return std::nullopt;
}

json raw_json(const RawRecord& r)
{
    json cells = json::array();
    for (const auto& c : r.cells)
        cells.push_back({{"field", c.field}, {"value", opt(c.value)}});
    return {{"source", r.source_id}, {"row", r.row_number}, {"cells", cells}};
}

RawRecord raw_from(const json& j)
{
    RawRecord r{j.at("source").get<std::string>(), j.at("row").get<int>(), {}};
    for (const auto& c : j.at("cells"))
        r.cells.push_back({c.at("field").get<std::string>(), opt_str(c, "value")});
    return r;
}

json cleansed_json(const CleansedRecord& r)
{
    json j;
    j["ref"] = ref_json(r.ref);
    j["author_id"] = opt(r.author_id);
    if (r.name)
        j["name"] = {{"first", opt(r.name->first)},
                     {"middle", opt(r.name->middle)},
                     {"last", r.name->last},
                     {"first_is_initial", r.name->first_is_initial},
                     {"title", opt(r.name->title)}};
    else
        j["name"] = nullptr;
    j["id"] = r.id ? json(r.id->str()) : json(nullptr);
    j["birth_date"] = r.birth_date ? json(r.birth_date->iso()) : json(nullptr);
    if (r.address)
        j["address"] = {{"street", opt(r.address->street)},
                        {"city", opt(r.address->city)},
                        {"state", opt(r.address->state)},
                        {"zip", opt(r.address->zip)}};
    else
        j["address"] = nullptr;
    j["zip"] = opt(r.zip);
    j["extras"] = json::array();
    for (const auto& c : r.extras)
        j["extras"].push_back({{"field", c.field}, {"value", opt(c.value)}});
    j["field_status"] = json::object();
    for (const auto& [field, status] : r.field_status) {
        json codes = json::array();
        for (auto c : status.violation_codes)
            codes.push_back(std::string(to_string(c)));
        j["field_status"][field] = {{"state", std::string(to_string(status.state))}, {"codes", codes}};
    }
    return j;
}

CleansedRecord cleansed_from(const json& j)
{
    CleansedRecord r;
    r.ref = ref_from(j.at("ref"));
    r.author_id = opt_str(j, "author_id");
    if (const auto& n = j.at("name"); !n.is_null()) {
        PersonName name;
        name.first = opt_str(n, "first");
        name.middle = opt_str(n, "middle");
        name.last = n.at("last").get<std::string>();
        name.first_is_initial = n.at("first_is_initial").get<bool>();
        name.title = opt_str(n, "title");
        r.name = name;
    }
    if (auto id = opt_str(j, "id")) {
        r.id = CanonicalId::from_canonical(*id);
        if (!r.id)
            throw Error(ErrorCode::ConfigInvalid, "state dump holds a non-canonical id '" + *id + "'");
    }
    if (auto d = opt_str(j, "birth_date")) {
        CanonicalDate date;
        if (std::sscanf(d->c_str(), "%d-%d-%d", &date.year, &date.month, &date.day) != 3 || !date.valid())
            throw Error(ErrorCode::ConfigInvalid, "state dump holds a non-canonical date '" + *d + "'");
        r.birth_date = date;
    }
    if (const auto& a = j.at("address"); !a.is_null())
        r.address = StructuredAddress{opt_str(a, "street"), opt_str(a, "city"), opt_str(a, "state"), opt_str(a, "zip")};
    r.zip = opt_str(j, "zip");
    for (const auto& c : j.at("extras"))
        r.extras.push_back({c.at("field").get<std::string>(), opt_str(c, "value")});
    for (const auto& [field, s] : j.at("field_status").items()) {
        FieldStatus status;
        status.state = enum_from<FieldState>(s.at("state"), parse_field_state, "field state");
        for (const auto& c : s.at("codes"))
            status.violation_codes.push_back(enum_from<DefectCode>(c, parse_defect_code, "defect code"));
        r.field_status[field] = status;
    }
    return r;
}

json records_json(const std::vector<CleansedRecord>& records)
{
    json out = json::array();
    for (const auto& r : records)
        out.push_back(cleansed_json(r));
    return out;
}

std::vector<CleansedRecord> records_from(const json& j)
{
    std::vector<CleansedRecord> out;
    for (const auto& r : j)
        out.push_back(cleansed_from(r));
    return out;
}

json pair_json(const MatchPair& p)
{
    return {{"left", ref_json(p.left)}, {"right", ref_json(p.right)}, {"score", p.score}, {"evidence", p.evidence}};
}

MatchPair pair_from(const json& j)
{
    return {ref_from(j.at("left")), ref_from(j.at("right")), j.at("score").get<double>(),
            j.at("evidence").get<std::map<std::string, double>>()};
}

QualityReport report_from(const json& j)
{
    QualityReport r;
    for (const auto& [k, v] : j.at("per_dimension").items())
        r.per_dimension[enum_from<Dimension>(json(k), parse_dimension, "dimension")] = v.get<double>();
    for (const auto& [k, v] : j.at("weights").items())
        r.weights[enum_from<Dimension>(json(k), parse_dimension, "dimension")] = v.get<double>();
    r.per_rule = j.at("per_rule").get<std::map<std::string, double>>();
    r.aggregate = j.at("aggregate").get<double>();
    r.threshold = j.at("threshold").get<double>();
    r.acceptable = j.at("acceptable").get<bool>();
    r.record_count = j.at("record_count").get<std::size_t>();
    r.run_timestamp = j.at("metadata").at("run_timestamp").get<std::int64_t>();
    for (const auto& v : j.at("violations"))
        r.violations.push_back({ref_from(v.at("record")), v.at("field").get<std::string>(),
                                enum_from<DefectCode>(v.at("code"), parse_defect_code, "defect code"),
                                enum_from<Dimension>(v.at("dimension"), parse_dimension, "dimension")});
    return r;
}

json golden_json(const GoldenRecord& g)
{
    json lineage = json::object();
    for (const auto& [column, refs] : g.lineage)
        lineage[column] = refs_json(refs);
    return {{"record", cleansed_json(g.record)}, {"members", refs_json(g.members)}, {"lineage", lineage}};
}

GoldenRecord golden_from(const json& j)
{
    GoldenRecord g;
    g.record = cleansed_from(j.at("record"));
    g.members = refs_from(j.at("members"));
    for (const auto& [column, refs] : j.at("lineage").items())
        g.lineage[column] = refs_from(refs);
    return g;
}

json dims_json(const std::map<Dimension, double>& m)
{
    json out = json::object();
    for (const auto& [d, v] : m)
        out[std::string(to_string(d))] = v;
    return out;
}

} // namespace

json to_json(const QualityReport& report)
{
    json violations = json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"record", ref_json(v.ref)},
                              {"field", v.field},
                              {"code", std::string(to_string(v.code))},
                              {"dimension", std::string(to_string(v.dimension))}});
    return {{"metadata", {{"run_timestamp", report.run_timestamp}}},
            {"record_count", report.record_count},
            {"per_dimension", dims_json(report.per_dimension)},
            {"weights", dims_json(report.weights)},
            {"per_rule", report.per_rule},
            {"aggregate", report.aggregate},
            {"threshold", report.threshold},
            {"acceptable", report.acceptable},
            {"violations", violations}};
}

json to_json(const std::vector<FieldProfile>& profiles)
{
    json out = json::array();
    for (const auto& p : profiles)
        out.push_back({{"field", p.field},
                       {"patterns", p.pattern_histogram},
                       {"distinct_count", p.distinct_count},
                       {"missing_count", p.missing_count},
                       {"total", p.total()}});
    return out;
}

json to_json(const MatchResult& matches)
{
    json scored = json::array();
    for (const auto& p : matches.scored)
        scored.push_back(pair_json(p));
    json clusters = json::array();
    for (const auto& c : matches.clusters) {
        json pairs = json::array();
        for (const auto& p : c.pairs)
            pairs.push_back(pair_json(p));
        clusters.push_back({{"members", refs_json(c.members)}, {"pairs", pairs}});
    }
    return {{"scored", scored}, {"clusters", clusters}};
}

json lineage_json(const std::vector<GoldenRecord>& golden)
{
    json out = json::array();
    for (const auto& g : golden) {
        json lineage = json::object();
        for (const auto& [column, refs] : g.lineage) {
            json names = json::array();
            for (const auto& r : refs)
                names.push_back(to_string(r));
            lineage[column] = names;
        }
        json members = json::array();
        for (const auto& r : g.members)
            members.push_back(to_string(r));
        out.push_back({{"members", members}, {"lineage", lineage}});
    }
    return out;
}

json to_json(const StageArtifacts& s)
{
    json j = json::object();
    if (s.raw) {
        j["raw"] = json::array();
        for (const auto& r : *s.raw)
            j["raw"].push_back(raw_json(r));
    }
    j["malformed"] = json::array();
    for (const auto& m : s.malformed)
        j["malformed"].push_back({{"row", m.row_number}, {"message", m.message}});
    if (s.profiles)
        j["profiles"] = to_json(*s.profiles);
    if (s.quality_before)
        j["quality_before"] = to_json(*s.quality_before);
    if (s.cleansed)
        j["cleansed"] = records_json(*s.cleansed);
    if (s.enriched)
        j["enriched"] = records_json(*s.enriched);
    j["enrichment_notes"] = json::array();
    for (const auto& n : s.enrichment_notes)
        j["enrichment_notes"].push_back(
            {{"ref", ref_json(n.ref)}, {"code", std::string(to_string(n.code))}, {"detail", n.detail}});
    if (s.matches)
        j["matches"] = to_json(*s.matches);
    if (s.cleansed_final)
        j["cleansed_final"] = records_json(*s.cleansed_final);
    if (s.consolidated)
        j["consolidated"] = records_json(*s.consolidated);
    if (s.golden) {
        j["golden"] = json::array();
        for (const auto& g : *s.golden)
            j["golden"].push_back(golden_json(g));
    }
    if (s.quality_after)
        j["quality_after"] = to_json(*s.quality_after);
    if (s.strategy)
        j["strategy"] = std::string(to_string(*s.strategy));
    if (s.trend)
        j["trend"] = std::string(to_string(*s.trend));
    j["notes"] = json::array();
    for (const auto& n : s.notes)
        j["notes"].push_back({{"stage", n.stage}, {"code", std::string(to_string(n.code))}, {"detail", n.detail}});
    return j;
}

StageArtifacts artifacts_from_json(const json& j)
{
    StageArtifacts s;
    try {
        if (j.contains("raw")) {
            s.raw.emplace();
            for (const auto& r : j.at("raw"))
                s.raw->push_back(raw_from(r));
        }
        for (const auto& m : j.value("malformed", json::array()))
            s.malformed.push_back({m.at("row").get<int>(), m.at("message").get<std::string>()});
        if (j.contains("profiles")) {
            s.profiles.emplace();
            for (const auto& p : j.at("profiles"))
                s.profiles->push_back({p.at("field").get<std::string>(),
                                       p.at("patterns").get<std::map<std::string, int>>(),
                                       p.at("distinct_count").get<int>(), p.at("missing_count").get<int>()});
        }
        if (j.contains("quality_before"))
            s.quality_before = report_from(j.at("quality_before"));
        if (j.contains("cleansed"))
            s.cleansed = records_from(j.at("cleansed"));
        if (j.contains("enriched"))
            s.enriched = records_from(j.at("enriched"));
        for (const auto& n : j.value("enrichment_notes", json::array()))
            s.enrichment_notes.push_back({ref_from(n.at("ref")),
                                          enum_from<ErrorCode>(n.at("code"), parse_error_code, "error code"),
                                          n.at("detail").get<std::string>()});
        if (j.contains("matches")) {
            MatchResult m;
            for (const auto& p : j.at("matches").at("scored"))
                m.scored.push_back(pair_from(p));
            for (const auto& c : j.at("matches").at("clusters")) {
                MatchCluster cluster;
                cluster.members = refs_from(c.at("members"));
                for (const auto& p : c.at("pairs"))
                    cluster.pairs.push_back(pair_from(p));
                m.clusters.push_back(std::move(cluster));
            }
            s.matches = std::move(m);
        }
        if (j.contains("cleansed_final"))
            s.cleansed_final = records_from(j.at("cleansed_final"));
        if (j.contains("consolidated"))
            s.consolidated = records_from(j.at("consolidated"));
        if (j.contains("golden")) {
            s.golden.emplace();
            for (const auto& g : j.at("golden"))
                s.golden->push_back(golden_from(g));
        }
        if (j.contains("quality_after"))
            s.quality_after = report_from(j.at("quality_after"));
        if (j.contains("strategy")) {
            auto name = j.at("strategy").get<std::string>();
            for (auto st : {Strategy::LaissezFaire, Strategy::Reactive, Strategy::Proactive})
                if (to_string(st) == name)
                    s.strategy = st;
        }
        if (j.contains("trend")) {
            auto name = j.at("trend").get<std::string>();
            for (auto t : {Trend::Improving, Trend::Declining, Trend::Stable})
                if (to_string(t) == name)
                    s.trend = t;
        }
        for (const auto& n : j.value("notes", json::array()))
            s.notes.push_back({n.at("stage").get<std::string>(),
                               enum_from<ErrorCode>(n.at("code"), parse_error_code, "error code"),
                               n.at("detail").get<std::string>()});
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("malformed state dump: ") + e.what());
    }
    return s;
}

void save_state(const fs::path& path, const StageArtifacts& state)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << to_json(state).dump(1) << '\n') || !out.flush())
        throw Error(ErrorCode::IoFailure, "cannot write state dump " + path.string());
}

StageArtifacts load_state(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot read state dump " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("state dump is not valid JSON: ") + e.what());
    }
    return artifacts_from_json(j);
}

TrendSeries load_trend(const fs::path& path, const std::string& dataset_id)
{
    TrendSeries series{dataset_id, {}};
    if (!fs::exists(path))
        return series;
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot read trend file " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        QualityReport point;
        try {
            auto j = json::parse(line);
            point.run_timestamp = j.at("run_timestamp").get<std::int64_t>();
            point.aggregate = j.at("aggregate").get<double>();
            for (const auto& [k, v] : j.at("per_dimension").items())
                point.per_dimension[enum_from<Dimension>(json(k), parse_dimension, "dimension")] = v.get<double>();
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ConfigInvalid, "malformed trend line in " + path.string() + ": " + e.what());
        }
        series = record_trend(series, point);
    }
    return series;
}

void append_trend(const fs::path& path, const TrendPoint& point)
{
    std::ofstream out(path, std::ios::binary | std::ios::app);
    json j = {{"run_timestamp", point.run_timestamp},
              {"aggregate", point.aggregate},
              {"per_dimension", dims_json(point.per_dimension)}};
    if (!out || !(out << j.dump() << '\n') || !out.flush())
        throw Error(ErrorCode::IoFailure, "cannot append to trend file " + path.string());
}

} // namespace rdq
