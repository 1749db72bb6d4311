#include "doctest.h"
#include "support.hpp"

#include "rdq/errors.hpp"
#include "rdq/matcher.hpp"
#include "rdq/similarity.hpp"

#include <set>

using namespace rdq;

namespace {

const MatchConfig& cfg() { return fixture::config().match; }

const std::vector<CleansedRecord>& records()
{
    static const auto r = fixture::enriched();
    return r;
}

std::vector<MatchCluster> clusters_for(const std::vector<CleansedRecord>& recs, const MatchConfig& c)
{
    return cluster(score_pairs(recs, block(recs, c), c), recs, c);
}

std::set<std::set<RecordRef>> partition(const std::vector<MatchCluster>& clusters)
{
    std::set<std::set<RecordRef>> out;
    for (const auto& c : clusters)
        out.insert(std::set<RecordRef>(c.members.begin(), c.members.end()));
    return out;
}

// Plain recursive edit distance with memoization.
std::size_t lev_oracle(const std::string& a, const std::string& b)
{
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
        if (i == a.size())
            return b.size() - j;
        if (j == b.size())
            return a.size() - i;
        auto key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        std::size_t best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
        best = std::min({best, go(i + 1, j) + 1, go(i, j + 1) + 1});
        return memo[key] = best;
    };
    return go(0, 0);
}

CleansedRecord random_record(std::mt19937_64& rng, int row)
{
    auto coin = [&] { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; };
    auto pick = [&](const auto& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
    static const std::vector<std::string> lasts{"Smit", "Smith", "Scott", "Schmidt"};
    static const std::vector<std::string> firsts{"John", "J", "Lena", "Jon"};
    static const std::vector<std::string> ids{"0000-0123-1345-3487", "0001-0254-4118-F006"};
    static const std::vector<std::string> streets{"123 6 th Street", "6 th Street", "44 Shirley Ave."};
    static const std::vector<std::string> zips{"32904", "60185"};

    CleansedRecord r;
    r.ref = {"gen", row};
    PersonName n;
    n.last = pick(lasts);
    if (coin()) {
        n.first = pick(firsts);
        n.first_is_initial = n.first->size() == 1;
    }
    r.name = n;
    if (coin())
        r.id = CanonicalId::from_canonical(pick(ids));
    if (coin())
        r.birth_date = CanonicalDate{std::uniform_int_distribution<int>(1980, 1982)(rng),
                                     std::uniform_int_distribution<int>(1, 3)(rng), 10};
    if (coin()) {
        StructuredAddress a;
        a.street = pick(streets);
        if (coin())
            a.zip = pick(zips);
        r.address = a;
    }
    return r;
}

} // namespace

TEST_SUITE("matcher")
{
    TEST_CASE("row 1 against the blank-id row 6")
    {
        auto p = compare(records()[0], records()[5], cfg());
        CHECK(p.evidence.at(kIdExact) == 1.0);
        CHECK(p.evidence.at(kNameSim) == 1.0);
        CHECK(p.evidence.at(kDateSim) == 1.0);
        // Row 6 carries no house number before consolidation.
        CHECK(p.evidence.at(kAddressSim) == doctest::Approx(5.0 / 6.0));
        CHECK(p.score >= cfg().match_threshold);
    }

    TEST_CASE("row 1 against 14587 row 5")
    {
        auto p = compare(records()[0], records()[4], cfg());
        CHECK(p.evidence.at(kIdExact) == 1.0);
        CHECK(p.evidence.at(kNameSim) == 1.0);
        CHECK(p.evidence.at(kDateSim) < 1.0);
        CHECK_FALSE(p.evidence.count(kAddressSim));
        CHECK(p.score >= cfg().match_threshold);
    }

    TEST_CASE("John Smit and Lena Scott differ on every comparator")
    {
        for (std::size_t i : {0u, 1u, 2u, 3u, 4u, 5u})
            for (std::size_t j : {6u, 7u}) {
                auto p = compare(records()[i], records()[j], cfg());
                for (const auto& [name, sub] : p.evidence)
                    CHECK(sub < 0.3);
                CHECK(p.score < cfg().match_threshold);
            }
    }

    TEST_CASE("weighted score by hand")
    {
        // Row 1 vs row 5: id 1 (0.4), name 1 (0.3), date one transposed component 0.5 (0.15); address abstains.
        auto p = compare(records()[0], records()[4], cfg());
        CHECK(p.score == doctest::Approx((0.4 + 0.3 + 0.15 * 0.5) / 0.85));
    }

    TEST_CASE("entirely different records score near zero")
    {
        CleansedRecord a;
        a.ref = {"x", 1};
        a.name = PersonName{"Anna", std::nullopt, "Berg", false, std::nullopt};
        a.id = CanonicalId::from_canonical("1111-2222-3333-4444");
        a.birth_date = CanonicalDate{1950, 1, 1};
        a.address = StructuredAddress{"9 Elm Road", "Melbourne", "FL", "32904"};
        CleansedRecord b;
        b.ref = {"x", 2};
        b.name = PersonName{"Otto", std::nullopt, "Quix", false, std::nullopt};
        b.id = CanonicalId::from_canonical("5555-6666-7777-8888");
        b.birth_date = CanonicalDate{1999, 8, 27};
        b.address = StructuredAddress{"44 Shirley Ave.", "West Chicago", "IL", "60185"};
        CHECK(compare(a, b, cfg()).score < 0.1);
    }

    TEST_CASE("initials are compatible with full names sharing the letter")
    {
        CleansedRecord a, b, c;
        a.name = PersonName{"J", std::nullopt, "Smit", true, std::nullopt};
        b.name = PersonName{"John", std::nullopt, "Smit", false, std::nullopt};
        c.name = PersonName{"Lena", std::nullopt, "Smit", false, std::nullopt};
        CHECK(name_similarity(a, b) == 1.0);
        CHECK(*name_similarity(a, c) < 1.0);
    }

    TEST_CASE("blocking pair counts")
    {
        auto blocked = block(records(), cfg());
        CHECK(blocked.size() == 16);
        MatchConfig none = cfg();
        none.blocking_key = BlockingKey::None;
        CHECK(block(records(), none).size() == 28);
        std::vector<CleansedRecord> one{records()[0]};
        CHECK(block(one, cfg()).empty());
        CHECK(block(one, none).empty());
        for (const auto& c : blocked) {
            CHECK(c.left < c.right);
            CHECK(blocking_key_of(records()[c.left], BlockingKey::LastName) ==
                  blocking_key_of(records()[c.right], BlockingKey::LastName));
        }
    }

    TEST_CASE("fixture clusters")
    {
        auto clusters = clusters_for(records(), cfg());
        REQUIRE(clusters.size() == 2);
        CHECK(clusters[0].members.size() == 6);
        CHECK(clusters[1].members.size() == 2);
        for (int row = 1; row <= 6; ++row)
            CHECK(clusters[0].members[row - 1] == fixture::row(row));
        CHECK(clusters[1].members[0] == fixture::row(7));
        CHECK(clusters[1].members[1] == fixture::row(8));
    }

    TEST_CASE("unreachable threshold leaves singletons")
    {
        MatchConfig strict = cfg();
        strict.match_threshold = 1.01;
        auto clusters = cluster(score_pairs(records(), block(records(), strict), strict), records(), strict);
        CHECK(clusters.size() == 8);
        for (const auto& c : clusters)
            CHECK(c.members.size() == 1);
        CHECK_THROWS_AS(strict.validate(), Error);
    }

    TEST_CASE("transitive closure")
    {
        std::vector<CleansedRecord> recs(3);
        for (int i = 0; i < 3; ++i)
            recs[i].ref = {"t", i + 1};
        std::vector<MatchPair> pairs{{recs[0].ref, recs[1].ref, 0.9, {}},
                                     {recs[1].ref, recs[2].ref, 0.9, {}},
                                     {recs[0].ref, recs[2].ref, 0.1, {}}};
        auto clusters = cluster(pairs, recs, cfg());
        REQUIRE(clusters.size() == 1);
        CHECK(clusters[0].members.size() == 3);
        CHECK(clusters[0].pairs.size() == 2);
    }

    TEST_CASE("cluster order ignores pair order")
    {
        std::mt19937_64 rng(3);
        auto pairs = score_pairs(records(), block(records(), cfg()), cfg());
        const auto base = partition(cluster(pairs, records(), cfg()));
        for (int i = 0; i < 20; ++i) {
            std::shuffle(pairs.begin(), pairs.end(), rng);
            auto clusters = cluster(pairs, records(), cfg());
            CHECK(partition(clusters) == base);
            for (const auto& c : clusters)
                CHECK(std::is_sorted(c.members.begin(), c.members.end()));
        }
    }

    TEST_CASE("symmetry and reflexivity")
    {
        std::mt19937_64 rng(21);
        for (int i = 0; i < 500; ++i) {
            auto a = random_record(rng, 1);
            auto b = random_record(rng, 2);
            auto ab = compare(a, b, cfg());
            auto ba = compare(b, a, cfg());
            CHECK(ab.score == doctest::Approx(ba.score));
            CHECK(ab.evidence == ba.evidence);
            CHECK(ab.score >= 0.0);
            CHECK(ab.score <= 1.0);
        }
        for (const auto& r : records())
            if (r.name && r.name->first && r.id && r.birth_date && r.address)
                CHECK(compare(r, r, cfg()).score == doctest::Approx(1.0));
    }

    TEST_CASE("score is the weighted mean of the evidence")
    {
        std::mt19937_64 rng(22);
        for (int i = 0; i < 500; ++i) {
            auto p = compare(random_record(rng, 1), random_record(rng, 2), cfg());
            double num = 0, den = 0;
            for (const auto& [name, sub] : p.evidence) {
                num += cfg().weights.at(name) * sub;
                den += cfg().weights.at(name);
            }
            CHECK(p.score == doctest::Approx(den > 0 ? num / den : 0.0));
        }
    }

    TEST_CASE("last-name blocking finds the same clusters as no blocking")
    {
        MatchConfig none = cfg();
        none.blocking_key = BlockingKey::None;
        CHECK(partition(clusters_for(records(), cfg())) == partition(clusters_for(records(), none)));
    }

    TEST_CASE("clusters partition random datasets and split as the threshold rises")
    {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<CleansedRecord> recs;
            const int n = std::uniform_int_distribution<int>(1, 10)(rng);
            for (int i = 1; i <= n; ++i)
                recs.push_back(random_record(rng, i));
            std::vector<std::vector<MatchCluster>> by_threshold;
            for (double t : {0.0, 0.3, 0.6, 0.75, 0.9, 1.0}) {
                MatchConfig c = cfg();
                c.blocking_key = BlockingKey::None;
                c.match_threshold = t;
                auto clusters = clusters_for(recs, c);
                std::set<RecordRef> seen;
                std::size_t total = 0;
                for (const auto& cl : clusters) {
                    CHECK_FALSE(cl.members.empty());
                    total += cl.members.size();
                    seen.insert(cl.members.begin(), cl.members.end());
                    for (const auto& p : cl.pairs)
                        CHECK(p.score >= t);
                }
                CHECK(total == recs.size());
                CHECK(seen.size() == recs.size());
                by_threshold.push_back(clusters);
            }
            for (std::size_t k = 1; k < by_threshold.size(); ++k)
                for (const auto& fine : by_threshold[k]) {
                    bool contained = false;
                    for (const auto& coarse : by_threshold[k - 1])
                        contained = contained || std::includes(coarse.members.begin(), coarse.members.end(),
                                                               fine.members.begin(), fine.members.end());
                    CHECK(contained);
                }
        }
    }

    TEST_CASE("match config validation")
    {
        MatchConfig c;
        CHECK_NOTHROW(c.validate());
        c.weights["shoe_size"] = 0.1;
        CHECK_THROWS_AS(c.validate(), Error);
        c = MatchConfig{};
        c.weights[kIdExact] = -0.1;
        CHECK_THROWS_AS(c.validate(), Error);
        c = MatchConfig{};
        for (auto& [k, w] : c.weights)
            w = 0;
        CHECK_THROWS_AS(c.validate(), Error);
        c = MatchConfig{};
        c.match_threshold = -0.01;
        CHECK_THROWS_AS(c.validate(), Error);
    }

    TEST_CASE("edit distance against a recursive oracle")
    {
        std::mt19937_64 rng(31);
        for (int i = 0; i < 2000; ++i) {
            auto a = fixture::random_from(rng, "abcst", 7);
            auto b = fixture::random_from(rng, "abcst", 7);
            CHECK(levenshtein_distance(a, b) == lev_oracle(a, b));
            CHECK(levenshtein_distance(a, b) == levenshtein_distance(b, a));
            double sim = edit_similarity(a, b);
            CHECK(sim >= 0.0);
            CHECK(sim <= 1.0);
        }
        CHECK(levenshtein_distance("kitten", "sitting") == 3);
        CHECK(edit_similarity("", "") == 1.0);
        CHECK(edit_similarity("Smit", "Scott") == doctest::Approx(1.0 - 3.0 / 5.0));
    }

    TEST_CASE("fused street tokens")
    {
        CHECK(fused_street_tokens("123 6 th Street") == std::vector<std::string>{"123", "6th", "st"});
        CHECK(fused_street_tokens("71 Pilgrim Ave.") == std::vector<std::string>{"71", "pilgrim", "ave"});
        CHECK(fused_street_tokens("44 Shirley Avenue") == fused_street_tokens("44 shirley ave."));
        CHECK(jaccard({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3.0));
    }
}
