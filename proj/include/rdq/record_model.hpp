#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rdq {

/// Defect taxonomy covering collection, transfer and integration faults.
enum class DefectCode {
    Typo,
    MissingInfo,
    Contradictory,
    Redundant,
    Obsolete,
    Incomplete,
    Irrelevant,
    TransferFault,
    TransformFault,
};

std::string_view to_string(DefectCode code);
std::optional<DefectCode> parse_defect_code(std::string_view name);

enum class FieldState { Raw, Valid, Corrected, Missing, Rejected };

std::string_view to_string(FieldState state);
std::optional<FieldState> parse_field_state(std::string_view name);

struct FieldStatus {
    FieldState state = FieldState::Raw;
    std::vector<DefectCode> violation_codes;

    // Appends `code` unless already present.
    void flag(DefectCode code);

    bool operator==(const FieldStatus&) const = default;
};

enum class FieldKind { PersonName, Identifier, Date, Address, FreeText };

std::string_view to_string(FieldKind kind);
std::optional<FieldKind> parse_field_kind(std::string_view name);

struct FieldSchema {
    std::string name;
    FieldKind kind = FieldKind::FreeText;
    bool required = false;
};

/// Ordered, non-empty list of uniquely named fields. Name lookups are
/// case-insensitive.
class Schema {
public:
    explicit Schema(std::vector<FieldSchema> fields);

    const std::vector<FieldSchema>& fields() const noexcept { return fields_; }
    std::size_t size() const noexcept { return fields_.size(); }

    std::optional<std::size_t> index_of(std::string_view name) const;
    const FieldSchema* find(std::string_view name) const;
    const FieldSchema* first_of_kind(FieldKind kind) const;

private:
    std::vector<FieldSchema> fields_;
};

struct RecordRef {
    std::string source_id;
    int row_number = 0;

    auto operator<=>(const RecordRef&) const = default;
    bool operator==(const RecordRef&) const = default;
};

std::string to_string(const RecordRef& ref);

struct Cell {
    std::string field;
    std::optional<std::string> value; // nullopt is MISSING

    bool operator==(const Cell&) const = default;
};

/// One ingested row. `cells` follow schema order and hold every schema field
/// exactly once; blank values are stored as MISSING.
struct RawRecord {
    std::string source_id;
    int row_number = 0;
    std::vector<Cell> cells;

    RecordRef ref() const { return {source_id, row_number}; }
    const std::optional<std::string>& value(std::string_view field) const;
    void set(std::string_view field, std::optional<std::string> value);

    bool operator==(const RawRecord&) const = default;
};

/// Trims `raw` and maps an empty result to MISSING.
std::optional<std::string> normalize_cell(std::string_view raw);

enum class DataFormat { Delimited, Object };

std::optional<DataFormat> parse_data_format(std::string_view name);
DataFormat format_for_path(const std::filesystem::path& path);

struct MalformedRow {
    int row_number = 0;
    std::string message;
};

struct LoadResult {
    std::vector<RawRecord> records;
    std::vector<MalformedRow> malformed;
};

LoadResult load_dataset(const std::filesystem::path& path, const Schema& schema, DataFormat format);
LoadResult load_dataset(std::istream& in, std::string source_id, const Schema& schema,
                        DataFormat format);

/// Writes records as delimited text with a header; MISSING becomes "".
void write_dataset(std::ostream& out, const std::vector<RawRecord>& records, const Schema& schema,
                   char delimiter = ',');

struct SchemaViolation {
    std::string field;
    DefectCode code = DefectCode::MissingInfo;

    bool operator==(const SchemaViolation&) const = default;
};

std::vector<SchemaViolation> validate_against_schema(const RawRecord& record, const Schema& schema);

} // namespace rdq
