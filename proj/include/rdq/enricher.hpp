#pragma once

#include "rdq/gazetteer.hpp"
#include "rdq/standardizer.hpp"

#include <string>
#include <vector>

namespace rdq {

struct EnrichmentNote {
    RecordRef ref;
    ErrorCode code = ErrorCode::GazetteerMiss;
    std::string detail;
};

struct Enriched {
    CleansedRecord record;
    std::vector<EnrichmentNote> notes;
    std::vector<DefectCode> conflicts; // CONTRADICTORY when the record disagrees with the gazetteer
};

/// Geographic enrichment from the gazetteer. Fills missing city, state and
/// zip (reverse lookup only when (city, state) has exactly one zip) and
/// promotes the zip to its own column. Present values are never overwritten.
Enriched enrich_record(const CleansedRecord& record, const Gazetteer& gazetteer,
                       const std::string& address_field = "Address");

} // namespace rdq
