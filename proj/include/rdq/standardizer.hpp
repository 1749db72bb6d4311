#pragma once

#include "rdq/errors.hpp"
#include "rdq/gazetteer.hpp"
#include "rdq/lexicons.hpp"
#include "rdq/parser.hpp"
#include "rdq/record_model.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rdq {

struct PersonName {
    std::optional<std::string> first;
    std::optional<std::string> middle;
    std::string last;
    bool first_is_initial = false;
    std::optional<std::string> title;

    // "Title First Middle Last" with an initial rendered as "J.".
    std::string display() const;
    // First-name column value: "J." for an initial.
    std::string first_display() const;

    bool operator==(const PersonName&) const = default;
};

/// 16 characters of [0-9A-F] rendered as XXXX-XXXX-XXXX-XXXX, never all zero.
class CanonicalId {
public:
    // Accepts only the already-canonical rendering.
    static std::optional<CanonicalId> from_canonical(std::string_view s);

    const std::string& str() const noexcept { return value_; }

    bool operator==(const CanonicalId&) const = default;

private:
    explicit CanonicalId(std::string v)
        : value_(std::move(v))
    {
    }
    std::string value_;
};

struct CanonicalDate {
    int year = 0;
    int month = 0;
    int day = 0;

    std::string iso() const; // YYYY-MM-DD
    bool valid() const;

    auto operator<=>(const CanonicalDate&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

struct StructuredAddress {
    std::optional<std::string> street;
    std::optional<std::string> city;
    std::optional<std::string> state;
    std::optional<std::string> zip;

    // "zip; state; city; street", present parts only.
    std::string render() const;
    // "state; city; street", used once the zip has its own column.
    std::string render_without_zip() const;
    int populated() const;

    bool operator==(const StructuredAddress&) const = default;
};

/// Value produced by one standardizer. `defects` explains what was wrong
/// with the raw input, whether or not a value could be recovered. `error`
/// is set when the raw value was rejected outright.
template <typename T>
struct Standardized {
    std::optional<T> value;
    std::vector<DefectCode> defects;
    std::optional<ErrorCode> error;
};

struct StandardizerOptions {
    int two_digit_year_pivot = 30;
    bool compact_dates = false; // YYMMDD / YYDDMM guessing
    // Sentinel identifiers treated as absent, compared without dashes.
    std::vector<std::string> placeholder_ids{"0000000000000000"};
};

/// Evidence for name-order repair: the given-name lexicon plus surnames
/// observed in the dataset (last word of names that start with a known given
/// name).
class NameContext {
public:
    NameContext() = default;
    explicit NameContext(const Lexicon& given_names)
        : given_names_(&given_names)
    {
    }

    void observe(const std::vector<Token>& name_tokens);

    bool is_given_name(std::string_view word) const;
    int surname_count(std::string_view word) const;

private:
    const Lexicon* given_names_ = nullptr;
    std::map<std::string, int> surnames_;
};

NameContext build_name_context(const std::vector<RawRecord>& records, const Schema& schema,
                               const Lexicons& lexicons);

Standardized<PersonName> standardize_name(const std::vector<Token>& tokens, const NameContext& context);
Standardized<CanonicalId> standardize_id(std::string_view raw, const StandardizerOptions& options = {});
Standardized<CanonicalDate> standardize_date(std::string_view raw, const StandardizerOptions& options = {});
Standardized<StructuredAddress> standardize_address(std::string_view raw, const std::vector<Token>& tokens,
                                                    const Gazetteer& gazetteer, const Lexicons& lexicons);

/// Schema fields bound to the typed slots of a CleansedRecord: the first
/// field of each kind, with the first FREE_TEXT field as the author id.
/// Empty names mean the schema has no such field.
struct FieldRoles {
    std::string author_id;
    std::string name;
    std::string id;
    std::string birth_date;
    std::string address;

    static FieldRoles from_schema(const Schema& schema);
};

struct CleansedRecord {
    RecordRef ref;
    std::optional<std::string> author_id;
    std::optional<PersonName> name;
    std::optional<CanonicalId> id;
    std::optional<CanonicalDate> birth_date;
    std::optional<StructuredAddress> address;
    std::optional<std::string> zip; // dedicated column, set by enrichment
    std::vector<Cell> extras;       // schema fields without a typed slot, passed through
    std::map<std::string, FieldStatus> field_status;

    bool operator==(const CleansedRecord&) const = default;
};

struct CleansingContext {
    const Schema& schema;
    const Lexicons& lexicons;
    const Gazetteer& gazetteer;
    const NameContext& names;
    StandardizerOptions options;
};

/// Runs every standardizer over one record. Never throws on dirty data:
/// failures become REJECTED field statuses.
CleansedRecord cleanse_record(const RawRecord& record, const CleansingContext& context);

/// Renders a cleansed record back into raw cells using canonical formats.
RawRecord render(const CleansedRecord& record, const Schema& schema);

} // namespace rdq
