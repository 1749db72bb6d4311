#include "rdq/enricher.hpp"

#include "rdq/text.hpp"

namespace rdq {

Enriched enrich_record(const CleansedRecord& record, const Gazetteer& gazetteer, const std::string& address_field)
{
    Enriched out{record, {}, {}};
    if (!out.record.address)
        return out;

    auto& address = *out.record.address;
    bool filled = false;

    if (!address.zip && address.city && address.state) {
        if (auto zip = gazetteer.unique_zip_for(*address.city, *address.state)) {
            address.zip = *zip;
            filled = true;
        } else {
            out.notes.push_back({record.ref, ErrorCode::GazetteerMiss,
                                 "no unique zip for " + *address.city + ", " + *address.state});
        }
    }

    if (address.zip) {
        if (const Place* place = gazetteer.lookup(*address.zip)) {
            if (!address.city) {
                address.city = place->city;
                filled = true;
            } else if (!text::iequals(*address.city, place->city)) {
                out.conflicts.push_back(DefectCode::Contradictory);
            }
            if (!address.state) {
                address.state = place->state;
                filled = true;
            } else if (!text::iequals(*address.state, place->state)) {
                out.conflicts.push_back(DefectCode::Contradictory);
            }
        } else {
            out.notes.push_back({record.ref, ErrorCode::GazetteerMiss, "zip " + *address.zip + " not in gazetteer"});
        }
    } else if (out.notes.empty()) {
        out.notes.push_back({record.ref, ErrorCode::GazetteerMiss, "address has no zip and no (city, state) pair"});
    }

    if (!out.record.zip && address.zip)
        out.record.zip = address.zip;

    auto it = out.record.field_status.find(address_field);
    if (it != out.record.field_status.end()) {
        if (filled) {
            it->second.state = FieldState::Corrected;
            it->second.flag(DefectCode::Incomplete);
        }
        for (auto code : out.conflicts)
            it->second.flag(code);
    }
    return out;
}

} // namespace rdq
