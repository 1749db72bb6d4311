#pragma once

#include "rdq/matcher.hpp"
#include "rdq/standardizer.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rdq {

enum class SurvivorshipRule { Majority, MostComplete, Longest, FirstSeen };

std::string_view to_string(SurvivorshipRule rule);
std::optional<SurvivorshipRule> parse_survivorship_rule(std::string_view name);

struct SurvivorshipPolicy {
    std::vector<SurvivorshipRule> rule_order{SurvivorshipRule::Majority, SurvivorshipRule::MostComplete,
                                             SurvivorshipRule::Longest, SurvivorshipRule::FirstSeen};

    // Non-empty and ending in FIRST_SEEN, otherwise CONFIG_INVALID.
    void validate() const;
};

/// One non-MISSING value offered by a cluster member. Candidates sharing a
/// `key` are the same value after canonicalization; `display` is the
/// rendered form the member actually holds.
struct SurvivorCandidate {
    std::string key;
    std::string display;
    RecordRef ref;
    int completeness = 0; // populated fields of the contributing member
};

/// Applies the rule order first across keys, then across the displays of the
/// winning key. Returns the index of a candidate holding the survivor, or
/// nullopt when there are no candidates.
std::optional<std::size_t> choose_survivor(const std::vector<SurvivorCandidate>& candidates,
                                           const SurvivorshipPolicy& policy);

struct GoldenRecord {
    CleansedRecord record;                              // ref is the first member
    std::vector<RecordRef> members;                     // sorted
    std::map<std::string, std::vector<RecordRef>> lineage; // column -> contributing members
};

int populated_fields(const CleansedRecord& record);

/// Grouping key for address variants: zip, city and the non-numeric street
/// tokens, so "6 th Street" and "123 6 th Street" at one zip coincide.
std::string address_key(const StructuredAddress& address);

/// Merges cluster members into one record. Lineage columns: the author id
/// field, "First", "Middle", "Last", and the id, date and address fields.
GoldenRecord consolidate(const std::vector<CleansedRecord>& members, const SurvivorshipPolicy& policy,
                         const FieldRoles& roles);

/// Members of `cluster` looked up in `records` by ref.
std::vector<CleansedRecord> cluster_members(const MatchCluster& cluster, const std::vector<CleansedRecord>& records);

/// Pushes canonical values back to members: initials expand to the golden
/// first name, and addresses that are house-number variants of the golden
/// address take the golden value. Changed fields become CORRECTED.
std::vector<CleansedRecord> backpropagate(const std::vector<CleansedRecord>& members, const GoldenRecord& golden,
                                          const FieldRoles& roles);

/// Members carrying the golden author id; the rest are folded into the golden
/// record. All members are kept when the golden author id is MISSING.
std::vector<CleansedRecord> majority_identity_members(const std::vector<CleansedRecord>& members,
                                                      const GoldenRecord& golden);

} // namespace rdq
