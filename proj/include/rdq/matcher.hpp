#pragma once

#include "rdq/standardizer.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rdq {

enum class BlockingKey { LastName, None };

std::string_view to_string(BlockingKey key);
std::optional<BlockingKey> parse_blocking_key(std::string_view name);

inline constexpr const char* kIdExact = "id_exact";
inline constexpr const char* kNameSim = "name_sim";
inline constexpr const char* kDateSim = "date_sim";
inline constexpr const char* kAddressSim = "address_sim";

struct MatchConfig {
    std::map<std::string, double> weights{
        {kIdExact, 0.4}, {kNameSim, 0.3}, {kDateSim, 0.15}, {kAddressSim, 0.15}};
    double match_threshold = 0.75;
    BlockingKey blocking_key = BlockingKey::LastName;

    // Throws CONFIG_INVALID on unknown comparators, negative weights, a zero
    // weight sum or a threshold outside [0, 1].
    void validate() const;
};

struct MatchPair {
    RecordRef left;
    RecordRef right;
    double score = 0.0;
    std::map<std::string, double> evidence; // abstaining comparators are absent

    bool operator==(const MatchPair&) const = default;
};

struct MatchCluster {
    std::vector<RecordRef> members; // sorted
    std::vector<MatchPair> pairs;   // pairs at or above threshold inside the cluster
};

// Comparators. std::nullopt means the comparator abstains.
std::optional<double> id_similarity(const CleansedRecord& a, const CleansedRecord& b);
std::optional<double> name_similarity(const CleansedRecord& a, const CleansedRecord& b);
std::optional<double> date_similarity(const CleansedRecord& a, const CleansedRecord& b);
std::optional<double> address_similarity(const CleansedRecord& a, const CleansedRecord& b);

/// Weighted mean of the non-abstaining comparators. With nothing to compare
/// the score is 0.
MatchPair compare(const CleansedRecord& a, const CleansedRecord& b, const MatchConfig& config);

struct CandidatePair {
    std::size_t left = 0; // indices into the record list, left < right
    std::size_t right = 0;

    auto operator<=>(const CandidatePair&) const = default;
};

std::string blocking_key_of(const CleansedRecord& record, BlockingKey key);

/// Candidate pairs in (left, right) index order. LAST_NAME emits only pairs
/// sharing a normalized last name; records without a name are never paired.
std::vector<CandidatePair> block(const std::vector<CleansedRecord>& records, const MatchConfig& config);

std::vector<MatchPair> score_pairs(const std::vector<CleansedRecord>& records,
                                   const std::vector<CandidatePair>& candidates, const MatchConfig& config);

/// Transitive closure over pairs scoring at least the threshold. Every record
/// lands in exactly one cluster; clusters are ordered by their first member.
std::vector<MatchCluster> cluster(const std::vector<MatchPair>& pairs, const std::vector<CleansedRecord>& records,
                                  const MatchConfig& config);

} // namespace rdq
