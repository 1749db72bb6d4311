#include "rdq/consolidator.hpp"

#include "rdq/similarity.hpp"
#include "rdq/text.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>
#include <set>

namespace rdq {

namespace {

using Groups = std::map<std::string, std::vector<std::size_t>>;

// Narrows `alive` group labels by each rule in turn.
std::string pick_group(const Groups& groups, const std::vector<SurvivorCandidate>& candidates,
                       const SurvivorshipPolicy& policy)
{
    std::vector<std::string> alive;
    for (const auto& [label, members] : groups)
        alive.push_back(label);

    for (auto rule : policy.rule_order) {
        if (alive.size() <= 1)
            break;
        auto metric = [&](const std::string& label) -> long {
            const auto& idx = groups.at(label);
            long best = 0;
            switch (rule) {
            case SurvivorshipRule::Majority:
                return static_cast<long>(idx.size());
            case SurvivorshipRule::MostComplete:
                for (auto i : idx)
                    best = std::max<long>(best, candidates[i].completeness);
                return best;
            case SurvivorshipRule::Longest:
                for (auto i : idx)
                    best = std::max<long>(best, static_cast<long>(candidates[i].display.size()));
                return best;
            case SurvivorshipRule::FirstSeen:
                return 0; // handled below
            }
            return 0;
        };

        std::vector<std::string> next;
        if (rule == SurvivorshipRule::FirstSeen) {
            auto first_ref = [&](const std::string& label) {
                RecordRef best = candidates[groups.at(label).front()].ref;
                for (auto i : groups.at(label))
                    best = std::min(best, candidates[i].ref);
                return best;
            };
            auto winner = *std::min_element(alive.begin(), alive.end(), [&](const auto& a, const auto& b) {
                return first_ref(a) < first_ref(b);
            });
            next.push_back(winner);
        } else {
            long best = metric(alive.front());
            for (const auto& label : alive)
                best = std::max(best, metric(label));
            for (const auto& label : alive)
                if (metric(label) == best)
                    next.push_back(label);
        }
        alive = std::move(next);
    }
    return alive.front();
}

std::string first_name_key(const PersonName& name) { return text::to_lower(*name.first); }

template <typename T>
struct Pick {
    std::optional<T> value;
    std::vector<RecordRef> lineage;
};

// Gathers one candidate per member, chooses the survivor and records
// every member whose value shares the winning key.
template <typename T, typename Extract>
Pick<T> survive(const std::vector<CleansedRecord>& members, const SurvivorshipPolicy& policy, Extract extract)
{
    std::vector<SurvivorCandidate> candidates;
    std::vector<T> values;
    for (const auto& m : members) {
        if (auto got = extract(m)) {
            auto& [value, key, display] = *got;
            candidates.push_back({key, display, m.ref, populated_fields(m)});
            values.push_back(value);
        }
    }
    Pick<T> pick;
    auto winner = choose_survivor(candidates, policy);
    if (!winner)
        return pick;
    pick.value = values[*winner];
    for (const auto& c : candidates)
        if (c.key == candidates[*winner].key)
            pick.lineage.push_back(c.ref);
    std::sort(pick.lineage.begin(), pick.lineage.end());
    return pick;
}

template <typename T>
using Offer = std::optional<std::tuple<T, std::string, std::string>>;

// Full first names in the cluster, keyed by lower-case spelling.
std::map<std::string, std::string> full_first_names(const std::vector<CleansedRecord>& members)
{
    std::map<std::string, std::string> out;
    for (const auto& m : members)
        if (m.name && m.name->first && !m.name->first_is_initial)
            out.emplace(text::to_lower(*m.name->first), *m.name->first);
    return out;
}

// The single full first name starting with `initial`, if unambiguous.
std::optional<std::string> expand_initial(char initial, const std::map<std::string, std::string>& full_names)
{
    std::optional<std::string> found;
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(initial)));
    for (const auto& [key, spelling] : full_names) {
        if (key.front() != lower)
            continue;
        if (found)
            return std::nullopt;
        found = spelling;
    }
    return found;
}

} // namespace

std::string_view to_string(SurvivorshipRule rule)
{
    switch (rule) {
    case SurvivorshipRule::Majority: return "MAJORITY";
    case SurvivorshipRule::MostComplete: return "MOST_COMPLETE";
    case SurvivorshipRule::Longest: return "LONGEST";
    case SurvivorshipRule::FirstSeen: return "FIRST_SEEN";
    }
    return "?";
}

std::optional<SurvivorshipRule> parse_survivorship_rule(std::string_view name)
{
    for (auto r : {SurvivorshipRule::Majority, SurvivorshipRule::MostComplete, SurvivorshipRule::Longest,
                   SurvivorshipRule::FirstSeen})
        if (text::iequals(to_string(r), name))
            return r;
    return std::nullopt;
}

void SurvivorshipPolicy::validate() const
{
    if (rule_order.empty())
        throw Error(ErrorCode::ConfigInvalid, "survivorship rule order is empty");
    if (rule_order.back() != SurvivorshipRule::FirstSeen)
        throw Error(ErrorCode::ConfigInvalid, "survivorship rule order must end with FIRST_SEEN");
}

std::optional<std::size_t> choose_survivor(const std::vector<SurvivorCandidate>& candidates,
                                           const SurvivorshipPolicy& policy)
{
    if (candidates.empty())
        return std::nullopt;

    Groups by_key;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        by_key[candidates[i].key].push_back(i);
    const auto& key = pick_group(by_key, candidates, policy);

    Groups by_display;
    for (auto i : by_key.at(key))
        by_display[candidates[i].display].push_back(i);
    const auto& display = pick_group(by_display, candidates, policy);

    const auto& holders = by_display.at(display);
    return *std::min_element(holders.begin(), holders.end(),
                             [&](std::size_t a, std::size_t b) { return candidates[a].ref < candidates[b].ref; });
}

int populated_fields(const CleansedRecord& r)
{
    return int(r.author_id.has_value()) + int(r.name.has_value()) + int(r.id.has_value()) +
           int(r.birth_date.has_value()) + int(r.address.has_value());
}

std::string address_key(const StructuredAddress& address)
{
    std::set<std::string> words;
    if (address.street)
        for (auto& t : fused_street_tokens(*address.street))
            if (!text::all_digits(t))
                words.insert(t);
    std::vector<std::string> parts{address.zip.value_or(""), text::to_lower(address.city.value_or("")),
                                   text::to_lower(address.state.value_or(""))};
    parts.insert(parts.end(), words.begin(), words.end());
    return text::join(parts, "|");
}

std::vector<CleansedRecord> cluster_members(const MatchCluster& cluster, const std::vector<CleansedRecord>& records)
{
    std::vector<CleansedRecord> out;
    for (const auto& ref : cluster.members)
        for (const auto& r : records)
            if (r.ref == ref) {
                out.push_back(r);
                break;
            }
    return out;
}

GoldenRecord consolidate(const std::vector<CleansedRecord>& members, const SurvivorshipPolicy& policy,
                         const FieldRoles& roles)
{
    GoldenRecord golden;
    for (const auto& m : members)
        golden.members.push_back(m.ref);
    std::sort(golden.members.begin(), golden.members.end());
    if (!golden.members.empty())
        golden.record.ref = golden.members.front();

    auto record_lineage = [&](const std::string& column, const auto& pick) {
        if (pick.value && !column.empty())
            golden.lineage[column] = pick.lineage;
    };

    auto author = survive<std::string>(members, policy, [](const CleansedRecord& m) -> Offer<std::string> {
        if (!m.author_id)
            return std::nullopt;
        return std::tuple{*m.author_id, *m.author_id, *m.author_id};
    });
    golden.record.author_id = author.value;
    record_lineage(roles.author_id, author);

    const auto full_names = full_first_names(members);
    auto first = survive<std::pair<std::string, bool>>(
        members, policy, [&](const CleansedRecord& m) -> Offer<std::pair<std::string, bool>> {
            if (!m.name || !m.name->first)
                return std::nullopt;
            if (m.name->first_is_initial) {
                if (auto full = expand_initial(m.name->first->front(), full_names))
                    return std::tuple{std::pair{*full, false}, text::to_lower(*full), *full};
                return std::tuple{std::pair{*m.name->first, true}, "initial:" + *m.name->first,
                                  m.name->first_display()};
            }
            return std::tuple{std::pair{*m.name->first, false}, first_name_key(*m.name), *m.name->first};
        });
    auto middle = survive<std::string>(members, policy, [](const CleansedRecord& m) -> Offer<std::string> {
        if (!m.name || !m.name->middle)
            return std::nullopt;
        return std::tuple{*m.name->middle, text::to_lower(*m.name->middle), *m.name->middle};
    });
    auto last = survive<std::string>(members, policy, [](const CleansedRecord& m) -> Offer<std::string> {
        if (!m.name)
            return std::nullopt;
        return std::tuple{m.name->last, text::to_lower(m.name->last), m.name->last};
    });
    if (last.value) {
        PersonName name;
        name.last = *last.value;
        if (first.value) {
            name.first = first.value->first;
            name.first_is_initial = first.value->second;
        }
        name.middle = middle.value;
        golden.record.name = name;
        record_lineage("First", first);
        record_lineage("Middle", middle);
        record_lineage("Last", last);
    }

    auto id = survive<CanonicalId>(members, policy, [](const CleansedRecord& m) -> Offer<CanonicalId> {
        if (!m.id)
            return std::nullopt;
        return std::tuple{*m.id, m.id->str(), m.id->str()};
    });
    golden.record.id = id.value;
    record_lineage(roles.id, id);

    auto date = survive<CanonicalDate>(members, policy, [](const CleansedRecord& m) -> Offer<CanonicalDate> {
        if (!m.birth_date)
            return std::nullopt;
        return std::tuple{*m.birth_date, m.birth_date->iso(), m.birth_date->iso()};
    });
    golden.record.birth_date = date.value;
    record_lineage(roles.birth_date, date);

    auto address = survive<StructuredAddress>(members, policy, [](const CleansedRecord& m) -> Offer<StructuredAddress> {
        if (!m.address)
            return std::nullopt;
        return std::tuple{*m.address, address_key(*m.address), m.address->render()};
    });
    golden.record.address = address.value;
    if (address.value)
        golden.record.zip = address.value->zip;
    record_lineage(roles.address, address);

    auto settle = [&](const std::string& field, bool present) {
        if (!field.empty())
            golden.record.field_status[field] =
                present ? FieldStatus{FieldState::Valid, {}} : FieldStatus{FieldState::Missing, {DefectCode::MissingInfo}};
    };
    settle(roles.author_id, golden.record.author_id.has_value());
    settle(roles.name, golden.record.name.has_value());
    settle(roles.id, golden.record.id.has_value());
    settle(roles.birth_date, golden.record.birth_date.has_value());
    settle(roles.address, golden.record.address.has_value());
    return golden;
}

std::vector<CleansedRecord> backpropagate(const std::vector<CleansedRecord>& members, const GoldenRecord& golden,
                                          const FieldRoles& roles)
{
    std::vector<CleansedRecord> out = members;
    const auto& g = golden.record;
    for (auto& m : out) {
        if (m.name && m.name->first_is_initial && g.name && g.name->first && !g.name->first_is_initial &&
            std::tolower(static_cast<unsigned char>(m.name->first->front())) ==
                std::tolower(static_cast<unsigned char>(g.name->first->front()))) {
            m.name->first = g.name->first;
            m.name->first_is_initial = false;
            auto& status = m.field_status[roles.name];
            status.state = FieldState::Corrected;
            status.flag(DefectCode::Incomplete);
        }
        if (m.address && g.address && *m.address != *g.address && address_key(*m.address) == address_key(*g.address)) {
            m.address = g.address;
            if (m.zip || g.zip)
                m.zip = g.address->zip;
            auto& status = m.field_status[roles.address];
            status.state = FieldState::Corrected;
            status.flag(DefectCode::Incomplete);
        }
    }
    return out;
}

std::vector<CleansedRecord> majority_identity_members(const std::vector<CleansedRecord>& members,
                                                      const GoldenRecord& golden)
{
    if (!golden.record.author_id)
        return members;
    std::vector<CleansedRecord> out;
    for (const auto& m : members)
        if (m.author_id == golden.record.author_id)
            out.push_back(m);
    return out;
}

} // namespace rdq
