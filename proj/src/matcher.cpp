#include "rdq/matcher.hpp"

#include "rdq/similarity.hpp"
#include "rdq/text.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>
#include <numeric>
#include <unordered_map>

namespace rdq {

namespace {

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n)
        : parent_(n)
        , rank_(n, 0)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (rank_[a] < rank_[b])
            std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b])
            ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> rank_;
};

double first_name_compatibility(const PersonName& a, const PersonName& b)
{
    if (!a.first && !b.first)
        return 1.0;
    if (!a.first || !b.first)
        return 0.5;
    if (a.first_is_initial || b.first_is_initial)
        return std::tolower(static_cast<unsigned char>(a.first->front())) ==
                       std::tolower(static_cast<unsigned char>(b.first->front()))
                   ? 1.0
                   : 0.0;
    return edit_similarity(text::to_lower(*a.first), text::to_lower(*b.first));
}

std::set<std::string> street_set(const std::string& street)
{
    auto tokens = fused_street_tokens(street);
    return {tokens.begin(), tokens.end()};
}

} // namespace

std::string_view to_string(BlockingKey key) { return key == BlockingKey::LastName ? "LAST_NAME" : "NONE"; }

std::optional<BlockingKey> parse_blocking_key(std::string_view name)
{
    if (text::iequals(name, "LAST_NAME"))
        return BlockingKey::LastName;
    if (text::iequals(name, "NONE"))
        return BlockingKey::None;
    return std::nullopt;
}

void MatchConfig::validate() const
{
    double sum = 0.0;
    for (const auto& [name, w] : weights) {
        if (name != kIdExact && name != kNameSim && name != kDateSim && name != kAddressSim)
            throw Error(ErrorCode::ConfigInvalid, "unknown comparator '" + name + "'");
        if (!(w >= 0.0))
            throw Error(ErrorCode::ConfigInvalid, "comparator weight for '" + name + "' is negative");
        sum += w;
    }
    if (!(sum > 0.0))
        throw Error(ErrorCode::ConfigInvalid, "comparator weights sum to zero");
    if (!(match_threshold >= 0.0 && match_threshold <= 1.0))
        throw Error(ErrorCode::ConfigInvalid, "match threshold outside [0, 1]");
}

std::optional<double> id_similarity(const CleansedRecord& a, const CleansedRecord& b)
{
    if (!a.id || !b.id)
        return std::nullopt;
    return *a.id == *b.id ? 1.0 : 0.0;
}

std::optional<double> name_similarity(const CleansedRecord& a, const CleansedRecord& b)
{
    if (!a.name || !b.name)
        return std::nullopt;
    double last = edit_similarity(text::to_lower(a.name->last), text::to_lower(b.name->last));
    return last * first_name_compatibility(*a.name, *b.name);
}

std::optional<double> date_similarity(const CleansedRecord& a, const CleansedRecord& b)
{
    if (!a.birth_date || !b.birth_date)
        return std::nullopt;
    const auto& x = *a.birth_date;
    const auto& y = *b.birth_date;
    if (x == y)
        return 1.0;
    int differing = int(x.year != y.year) + int(x.month != y.month) + int(x.day != y.day);
    bool swapped = x.year == y.year && x.month == y.day && x.day == y.month;
    return differing == 1 || swapped ? 0.5 : 0.0;
}

std::optional<double> address_similarity(const CleansedRecord& a, const CleansedRecord& b)
{
    if (!a.address || !b.address)
        return std::nullopt;
    const auto& x = *a.address;
    const auto& y = *b.address;
    double sum = 0.0;
    int parts = 0;
    if (x.street && y.street) {
        sum += jaccard(street_set(*x.street), street_set(*y.street));
        ++parts;
    }
    if (x.zip && y.zip) {
        sum += *x.zip == *y.zip ? 1.0 : 0.0;
        ++parts;
    }
    if (parts == 0 && x.city && y.city) {
        sum += text::iequals(*x.city, *y.city) ? 1.0 : 0.0;
        ++parts;
    }
    if (parts == 0)
        return std::nullopt;
    return sum / parts;
}

MatchPair compare(const CleansedRecord& a, const CleansedRecord& b, const MatchConfig& config)
{
    MatchPair pair{a.ref, b.ref, 0.0, {}};
    const std::pair<const char*, std::optional<double> (*)(const CleansedRecord&, const CleansedRecord&)> comparators[] = {
        {kIdExact, id_similarity},
        {kNameSim, name_similarity},
        {kDateSim, date_similarity},
        {kAddressSim, address_similarity},
    };
    double weighted = 0.0;
    double total_weight = 0.0;
    for (const auto& [name, fn] : comparators) {
        auto w = config.weights.find(name);
        if (w == config.weights.end() || w->second <= 0.0)
            continue;
        if (auto sub = fn(a, b)) {
            pair.evidence[name] = *sub;
            weighted += w->second * *sub;
            total_weight += w->second;
        }
    }
    pair.score = total_weight > 0.0 ? weighted / total_weight : 0.0;
    return pair;
}

std::string blocking_key_of(const CleansedRecord& record, BlockingKey key)
{
    if (key == BlockingKey::None)
        return {};
    return record.name ? text::to_lower(record.name->last) : std::string();
}

std::vector<CandidatePair> block(const std::vector<CleansedRecord>& records, const MatchConfig& config)
{
    std::vector<CandidatePair> out;
    if (config.blocking_key == BlockingKey::None) {
        for (std::size_t i = 0; i < records.size(); ++i)
            for (std::size_t j = i + 1; j < records.size(); ++j)
                out.push_back({i, j});
        return out;
    }
    std::map<std::string, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto key = blocking_key_of(records[i], config.blocking_key);
        if (!key.empty())
            blocks[key].push_back(i);
    }
    for (const auto& [key, members] : blocks)
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                out.push_back({members[i], members[j]});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MatchPair> score_pairs(const std::vector<CleansedRecord>& records,
                                   const std::vector<CandidatePair>& candidates, const MatchConfig& config)
{
    std::vector<MatchPair> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates)
        out.push_back(compare(records[c.left], records[c.right], config));
    return out;
}

std::vector<MatchCluster> cluster(const std::vector<MatchPair>& pairs, const std::vector<CleansedRecord>& records,
                                  const MatchConfig& config)
{
    std::vector<RecordRef> refs;
    for (const auto& r : records)
        refs.push_back(r.ref);
    std::sort(refs.begin(), refs.end());
    refs.erase(std::unique(refs.begin(), refs.end()), refs.end());

    auto index_of = [&](const RecordRef& ref) -> std::optional<std::size_t> {
        auto it = std::lower_bound(refs.begin(), refs.end(), ref);
        if (it == refs.end() || *it != ref)
            return std::nullopt;
        return static_cast<std::size_t>(it - refs.begin());
    };

    DisjointSet sets(refs.size());
    std::vector<const MatchPair*> accepted;
    for (const auto& p : pairs) {
        if (p.score < config.match_threshold)
            continue;
        auto l = index_of(p.left);
        auto r = index_of(p.right);
        if (!l || !r)
            continue;
        sets.unite(*l, *r);
        accepted.push_back(&p);
    }

    // Roots visited in ref order give clusters ordered by first member.
    std::vector<MatchCluster> clusters;
    std::unordered_map<std::size_t, std::size_t> root_to_cluster;
    std::vector<std::size_t> cluster_of(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        auto root = sets.find(i);
        auto [it, inserted] = root_to_cluster.emplace(root, clusters.size());
        if (inserted)
            clusters.emplace_back();
        clusters[it->second].members.push_back(refs[i]);
        cluster_of[i] = it->second;
    }
    for (const auto* p : accepted)
        clusters[cluster_of[*index_of(p->left)]].pairs.push_back(*p);
    for (auto& c : clusters) {
        std::sort(c.pairs.begin(), c.pairs.end(), [](const MatchPair& x, const MatchPair& y) {
            return std::tie(x.left, x.right) < std::tie(y.left, y.right);
        });
    }
    return clusters;
}

} // namespace rdq
