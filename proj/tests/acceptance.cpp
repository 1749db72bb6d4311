// Runs acceptance criteria 1-8 and prints one PASS/FAIL line per criterion.
// Usage: rdq_acceptance <path-to-rdq-cli>

#include "support.hpp"

#include "rdq/consolidator.hpp"
#include "rdq/errors.hpp"
#include "rdq/matcher.hpp"
#include "rdq/quality.hpp"
#include "rdq/standardizer.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <regex>
#include <set>

using namespace rdq;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::vector<std::string> failures;

    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
};

std::string cli;

int run_cli(const fs::path& out_dir)
{
    const std::string cmd = "\"" + cli + "\" run --config \"" + fixture::config_path().string() + "\" --input \"" +
                            fixture::table1().string() + "\" --out-dir \"" + out_dir.string() + "\" > \"" +
                            (out_dir.parent_path() / (out_dir.filename().string() + ".log")).string() + "\" 2>&1";
    return std::system(cmd.c_str());
}

std::string cell_name(std::size_t row, std::size_t col, const std::vector<std::string>& header)
{
    return "row " + std::to_string(row) + " " + (col < header.size() ? header[col] : "?");
}

Outcome golden_reproduction()
{
    Outcome o;
    auto dir = fixture::scratch("accept_c1") / "out";
    auto start = std::chrono::steady_clock::now();
    int rc = run_cli(dir);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.expect(rc == 0, "cli exit status " + std::to_string(rc));
    o.expect(secs < 1.0, "runtime " + std::to_string(secs) + " s");
    auto got = fixture::read_csv(dir / "golden.csv");
    const std::vector<std::vector<std::string>> want{
        {"Author ID", "First", "Last", "ORCID", "Birth Date", "Address"},
        {"12345", "John", "Smit", "0000-0123-1345-3487", "1987-12-23", "32904; FL; Melbourne; 123 6 th Street"},
        {"19875", "Lena", "Scott", "0001-0254-4118-F006", "1984-01-14", "60185; IL; West Chicago; 44 Shirley Ave."}};
    o.expect(got.size() == 3, std::to_string(got.size() ? got.size() - 1 : 0) + " golden records");
    for (std::size_t r = 0; r < std::min(got.size(), want.size()); ++r)
        for (std::size_t c = 0; c < want[r].size(); ++c)
            o.expect(c < got[r].size() && got[r][c] == want[r][c],
                     cell_name(r, c, want[0]) + ": got '" + (c < got[r].size() ? got[r][c] : "") + "'");
    return o;
}

Outcome stage_tables()
{
    Outcome o;
    auto dir = fixture::scratch("accept_c2") / "out";
    o.expect(run_cli(dir) == 0, "cli failed");
    const auto expected = fixture::read_csv(fixture::expected("cleansed.csv"));
    const auto final_rows = fixture::read_csv(dir / "cleansed_final.csv");
    const auto pre = fixture::read_csv(dir / "cleansed.csv");
    o.expect(final_rows.size() == expected.size(), "cleansed row count");
    o.expect(pre.size() == expected.size(), "pre-match row count");
    if (final_rows.size() != expected.size() || pre.size() != expected.size())
        return o;

    for (std::size_t r = 0; r < expected.size(); ++r)
        for (std::size_t c = 0; c < expected[r].size(); ++c)
            o.expect(final_rows[r][c] == expected[r][c], "after back-propagation, " + cell_name(r, c, expected[0]) +
                                                             ": got '" + final_rows[r][c] + "', table has '" +
                                                             expected[r][c] + "'");

    // Cells repaired only by back-propagation: differ before matching, agree after.
    const std::size_t first = 1, address = 5;
    o.expect(pre[3][address] != expected[3][address], "row 3 address already repaired before matching");
    o.expect(pre[4][first] != expected[4][first], "row 4 first name already expanded before matching");
    o.expect(final_rows[3][address] == expected[3][address], "row 3 address after consolidation");
    o.expect(final_rows[4][first] == expected[4][first], "row 4 first name after consolidation");

    const auto enriched = fixture::read_csv(dir / "enriched.csv");
    o.expect(enriched.size() == 9 && enriched[0].back() == "Zip", "enriched layout");
    std::map<std::string, int> zips;
    for (std::size_t r = 1; r < enriched.size(); ++r)
        zips[enriched[r].back()]++;
    o.expect(zips == std::map<std::string, int>{{"32904", 5}, {"60185", 2}, {"", 1}}, "enriched Zip column counts");
    o.expect(enriched.size() > 5 && enriched[5].back().empty(), "row 5 Zip blank");
    return o;
}

Outcome standardizer_oracle()
{
    Outcome o;
    const std::vector<std::pair<std::string, std::string>> dates{
        {"12/23/1987", "1987-12-23"}, {"23.12. 1987", "1987-12-23"}, {"09/23/78", "1978-09-23"},
        {"14-1-1984", "1984-01-14"},  {"872312", ""},                {"1984", ""}};
    for (const auto& [raw, want] : dates) {
        auto r = standardize_date(raw);
        o.expect((r.value ? r.value->iso() : "") == want, "date " + raw);
    }
    const std::vector<std::pair<std::string, std::string>> ids{{"0000012313453487", "0000-0123-1345-3487"},
                                                               {"0000-0000-0000-0000", ""},
                                                               {"000102544118F006", "0001-0254-4118-F006"},
                                                               {"0000-0123-1345-3487", "0000-0123-1345-3487"}};
    for (const auto& [raw, want] : ids) {
        auto r = standardize_id(raw);
        o.expect((r.value ? r.value->str() : "") == want, "id " + raw);
    }
    const auto& c = fixture::config();
    const std::vector<std::pair<std::string, StructuredAddress>> addresses{
        {"123 6 th Street, Melbourne, 32904", {"123 6 th Street", "Melbourne", "FL", "32904"}},
        {"71 Pilgrim Ave. 32904", {"71 Pilgrim Ave.", "Melbourne", "FL", "32904"}},
        {"44 Shirley Ave. West Chicago 60185", {"44 Shirley Ave.", "West Chicago", "IL", "60185"}},
        {"6 th Street, 32904 123", {"123 6 th Street", "Melbourne", "FL", "32904"}}};
    for (const auto& [raw, want] : addresses) {
        auto r = standardize_address(raw, tokenize(raw, FieldKind::Address, c.lexicons, &c.gazetteer), c.gazetteer,
                                     c.lexicons);
        o.expect(r.value && *r.value == want, "address " + raw);
    }

    std::mt19937_64 rng(2718);
    const std::regex shape("[0-9A-F]{4}-[0-9A-F]{4}-[0-9A-F]{4}-[0-9A-F]{4}");
    int bad_dates = 0, bad_ids = 0;
    for (int i = 0; i < 10000; ++i) {
        auto s = fixture::random_bytes(rng, 20);
        auto d = standardize_date(s);
        if (d.value) {
            using namespace std::chrono;
            bool ok = year_month_day{year{d.value->year}, month{static_cast<unsigned>(d.value->month)},
                                     day{static_cast<unsigned>(d.value->day)}}
                          .ok();
            bad_dates += ok ? 0 : 1;
        }
        auto id = standardize_id(s);
        if (id.value)
            bad_ids += std::regex_match(id.value->str(), shape) ? 0 : 1;
        else if (id.error && *id.error != ErrorCode::InvalidId)
            ++bad_ids;
    }
    o.expect(bad_dates == 0, std::to_string(bad_dates) + " invalid dates from random bytes");
    o.expect(bad_ids == 0, std::to_string(bad_ids) + " malformed ids from random bytes");
    return o;
}

std::set<std::set<RecordRef>> partition_of(const std::vector<CleansedRecord>& recs, const MatchConfig& m)
{
    std::set<std::set<RecordRef>> out;
    for (const auto& cl : cluster(score_pairs(recs, block(recs, m), m), recs, m))
        out.insert({cl.members.begin(), cl.members.end()});
    return out;
}

Outcome matching_properties()
{
    Outcome o;
    const auto recs = fixture::enriched();
    const auto& m = fixture::config().match;
    for (const auto& a : recs) {
        for (const auto& b : recs)
            o.expect(std::abs(compare(a, b, m).score - compare(b, a, m).score) < 1e-12,
                     "symmetry " + to_string(a.ref) + " / " + to_string(b.ref));
        if (a.name && a.name->first && a.id && a.birth_date && a.address)
            o.expect(std::abs(compare(a, a, m).score - 1.0) < 1e-12, "reflexivity " + to_string(a.ref));
    }
    MatchConfig exhaustive = m;
    exhaustive.blocking_key = BlockingKey::None;
    o.expect(block(recs, exhaustive).size() == 28, "exhaustive pair count");
    o.expect(partition_of(recs, m) == partition_of(recs, exhaustive), "blocked clusters differ from exhaustive");

    int previous_merges = std::numeric_limits<int>::max();
    for (int step = 0; step <= 100; ++step) {
        MatchConfig t = exhaustive;
        t.match_threshold = step / 100.0;
        int merges = static_cast<int>(recs.size() - partition_of(recs, t).size());
        o.expect(merges <= previous_merges, "merge count rises at threshold " + std::to_string(t.match_threshold));
        previous_merges = merges;
    }
    return o;
}

Outcome survivorship()
{
    Outcome o;
    const auto& c = fixture::config();
    const auto roles = FieldRoles::from_schema(c.schema);
    const auto all = fixture::enriched();
    std::vector<CleansedRecord> smit(all.begin(), all.begin() + 6);

    std::set<std::string> full_firsts;
    for (const auto& m : smit)
        if (m.name && m.name->first && !m.name->first_is_initial)
            full_firsts.insert(*m.name->first);
    auto first_of = [&](const PersonName& n) -> std::string {
        if (!n.first_is_initial)
            return *n.first;
        std::vector<std::string> hits;
        for (const auto& f : full_firsts)
            if (f[0] == (*n.first)[0])
                hits.push_back(f);
        return hits.size() == 1 ? hits[0] : *n.first;
    };

    std::map<std::string, std::function<std::optional<std::string>(const CleansedRecord&)>> fields{
        {"Author ID", [](const CleansedRecord& r) { return r.author_id; }},
        {"First",
         [&](const CleansedRecord& r) {
             return r.name && r.name->first ? std::optional<std::string>(first_of(*r.name)) : std::nullopt;
         }},
        {"Last", [](const CleansedRecord& r) { return r.name ? std::optional<std::string>(r.name->last) : std::nullopt; }},
        {"ORCID", [](const CleansedRecord& r) { return r.id ? std::optional<std::string>(r.id->str()) : std::nullopt; }},
        {"Birth Date",
         [](const CleansedRecord& r) {
             return r.birth_date ? std::optional<std::string>(r.birth_date->iso()) : std::nullopt;
         }},
        {"Address",
         [](const CleansedRecord& r) {
             return r.address ? std::optional<std::string>(r.address->render()) : std::nullopt;
         }},
    };

    const auto golden = consolidate(smit, c.survivorship, roles);
    for (const auto& [field, get] : fields) {
        std::map<std::string, int> counts;
        for (const auto& m : smit)
            if (auto v = get(m))
                counts[*v]++;
        int top = 0;
        for (const auto& [v, n] : counts)
            top = std::max(top, n);
        std::vector<std::string> winners;
        for (const auto& [v, n] : counts)
            if (n == top)
                winners.push_back(v);
        auto got = get(golden.record);
        o.expect(winners.size() == 1 && got == winners[0],
                 field + ": golden '" + got.value_or("") + "' vs majority '" + (winners.empty() ? "" : winners[0]) + "'");
    }
    o.expect(golden.record.birth_date && golden.record.birth_date->iso() == "1987-12-23", "birth date survivor");

    std::vector<std::size_t> order(smit.size());
    std::iota(order.begin(), order.end(), 0);
    int permutations = 0;
    do {
        std::vector<CleansedRecord> shuffled;
        for (auto i : order)
            shuffled.push_back(smit[i]);
        auto g = consolidate(shuffled, c.survivorship, roles);
        o.expect(g.record == golden.record && g.lineage == golden.lineage,
                 "permutation " + std::to_string(permutations) + " changes the golden record");
        ++permutations;
    } while (std::next_permutation(order.begin(), order.end()));
    o.expect(permutations == 720, "permutation count");
    return o;
}

Outcome quality_scores()
{
    Outcome o;
    const auto& c = fixture::config();
    const auto ctx = c.assessment_context();
    auto before = assess(fixture::raw(), c.dimensions, c.quality_threshold, ctx, 1);
    o.expect(std::abs(before.per_rule.at("COMPLETENESS:ORCID:PRESENT") - 0.75) < 1e-12, "COMPLETENESS(ORCID)");
    o.expect(std::abs(before.per_rule.at("CORRECTNESS:Birth Date:PARSES") - 0.75) < 1e-12, "CORRECTNESS(Birth Date)");

    auto state = run_pipeline(fixture::table1(), c);
    o.expect(state.quality_before && state.quality_after, "pipeline reports");
    if (!state.quality_before || !state.quality_after)
        return o;
    o.expect(state.quality_after->aggregate >= state.quality_before->aggregate, "aggregate after < before");
    for (const auto* r : {&*state.quality_before, &*state.quality_after}) {
        double sum = 0;
        for (const auto& [d, s] : r->per_dimension)
            sum += r->weights.at(d) * s;
        o.expect(std::abs(sum - r->aggregate) <= 1e-9, "aggregate differs from weighted sum");
    }
    return o;
}

Outcome strategy()
{
    Outcome o;
    const StrategyCuts cuts;
    o.expect(recommend_strategy({0.2, 0.1}, cuts) == Strategy::LaissezFaire, "(0.2, 0.1)");
    o.expect(recommend_strategy({0.9, 0.1}, cuts) == Strategy::Reactive, "(0.9, 0.1)");
    o.expect(recommend_strategy({0.9, 0.9}, cuts) == Strategy::Proactive, "(0.9, 0.9)");
    auto rank = [](Strategy s) { return s == Strategy::LaissezFaire ? 0 : s == Strategy::Reactive ? 1 : 2; };
    for (int i = 0; i <= 20; ++i)
        for (int f = 0; f <= 20; ++f) {
            auto here = recommend_strategy({i / 20.0, f / 20.0}, cuts);
            if (i < 20)
                o.expect(rank(recommend_strategy({(i + 1) / 20.0, f / 20.0}, cuts)) >= rank(here),
                         "importance step at " + std::to_string(i) + "," + std::to_string(f));
            if (f < 20 && here == Strategy::Proactive)
                o.expect(recommend_strategy({i / 20.0, (f + 1) / 20.0}, cuts) == Strategy::Proactive,
                         "frequency step at " + std::to_string(i) + "," + std::to_string(f));
        }
    return o;
}

Outcome determinism()
{
    Outcome o;
    auto root = fixture::scratch("accept_c8");
    o.expect(run_cli(root / "a") == 0, "first run failed");
    o.expect(run_cli(root / "b") == 0, "second run failed");
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        const auto name = entry.path().filename().string();
        const auto a = fixture::slurp(root / "a" / name);
        const auto b = fixture::slurp(root / "b" / name);
        if (name.rfind("quality_", 0) == 0) {
            auto ja = nlohmann::json::parse(a), jb = nlohmann::json::parse(b);
            ja.erase("metadata");
            jb.erase("metadata");
            o.expect(ja == jb, name + " differs outside metadata");
        } else {
            o.expect(a == b, name + " differs");
        }
        ++compared;
    }
    o.expect(compared >= 10, "only " + std::to_string(compared) + " files written");
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: rdq_acceptance <rdq-cli>\n";
        return 2;
    }
    cli = argv[1];

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"golden-record reproduction", golden_reproduction},
        {"stage-table reproduction", stage_tables},
        {"standardizer unit oracle", standardizer_oracle},
        {"matching properties", matching_properties},
        {"survivorship oracle", survivorship},
        {"quality scores", quality_scores},
        {"strategy recommender", strategy},
        {"determinism", determinism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first << '\n';
        for (const auto& f : o.failures)
            std::cout << "      " << f << '\n';
        failed += o.ok ? 0 : 1;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
