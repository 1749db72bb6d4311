#include "rdq/record_model.hpp"

#include "rdq/delimited.hpp"
#include "rdq/errors.hpp"
#include "rdq/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace rdq {

namespace {

constexpr std::array kDefectNames = {
    std::pair{DefectCode::Typo, "TYPO"},
    std::pair{DefectCode::MissingInfo, "MISSING_INFO"},
    std::pair{DefectCode::Contradictory, "CONTRADICTORY"},
    std::pair{DefectCode::Redundant, "REDUNDANT"},
    std::pair{DefectCode::Obsolete, "OBSOLETE"},
    std::pair{DefectCode::Incomplete, "INCOMPLETE"},
    std::pair{DefectCode::Irrelevant, "IRRELEVANT"},
    std::pair{DefectCode::TransferFault, "TRANSFER_FAULT"},
    std::pair{DefectCode::TransformFault, "TRANSFORM_FAULT"},
};

constexpr std::array kStateNames = {
    std::pair{FieldState::Raw, "RAW"},
    std::pair{FieldState::Valid, "VALID"},
    std::pair{FieldState::Corrected, "CORRECTED"},
    std::pair{FieldState::Missing, "MISSING"},
    std::pair{FieldState::Rejected, "REJECTED"},
};

constexpr std::array kKindNames = {
    std::pair{FieldKind::PersonName, "PERSON_NAME"},
    std::pair{FieldKind::Identifier, "IDENTIFIER"},
    std::pair{FieldKind::Date, "DATE"},
    std::pair{FieldKind::Address, "ADDRESS"},
    std::pair{FieldKind::FreeText, "FREE_TEXT"},
};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, const char*>, N>& table, Enum value)
{
    for (const auto& [v, name] : table)
        if (v == value)
            return name;
    return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum> value_of(const std::array<std::pair<Enum, const char*>, N>& table,
                             std::string_view name)
{
    for (const auto& [v, n] : table)
        if (text::iequals(n, name))
            return v;
    return std::nullopt;
}

const std::optional<std::string> kMissing;

std::string cell_text(const nlohmann::json& value)
{
    if (value.is_string())
        return value.get<std::string>();
    return value.dump();
}

LoadResult load_delimited(std::istream& in, const std::string& source_id, const Schema& schema)
{
    LoadResult result;
    std::string header_line;
    if (!std::getline(in, header_line))
        return result;
    if (header_line.rfind("\xEF\xBB\xBF", 0) == 0)
        header_line.erase(0, 3);
    if (!header_line.empty() && header_line.back() == '\r')
        header_line.pop_back();

    char delimiter = delimited::detect_delimiter(header_line);
    std::istringstream header_stream(header_line);
    std::vector<std::string> header;
    delimited::Reader(header_stream, delimiter).next(header);

    std::vector<std::size_t> column_to_field;
    std::vector<bool> seen(schema.size(), false);
    for (const auto& raw_name : header) {
        auto name = text::trim(raw_name);
        auto index = schema.index_of(name);
        if (!index)
            throw Error(ErrorCode::UnknownField, "column '" + std::string(name) + "' is not in the schema");
        if (seen[*index])
            throw Error(ErrorCode::UnknownField, "column '" + std::string(name) + "' appears twice");
        seen[*index] = true;
        column_to_field.push_back(*index);
    }
    for (std::size_t i = 0; i < schema.size(); ++i)
        if (!seen[i])
            throw Error(ErrorCode::UnknownField, "schema field '" + schema.fields()[i].name + "' has no column");

    delimited::Reader reader(in, delimiter);
    std::vector<std::string> fields;
    int row_number = 0;
    while (reader.next(fields)) {
        ++row_number;
        if (reader.last_row_unterminated()) {
            result.malformed.push_back({row_number, "unterminated quoted field"});
            continue;
        }
        if (fields.size() != header.size()) {
            result.malformed.push_back({row_number, "expected " + std::to_string(header.size()) +
                                                        " columns, found " + std::to_string(fields.size())});
            continue;
        }
        RawRecord record{source_id, row_number, {}};
        record.cells.resize(schema.size());
        for (std::size_t i = 0; i < schema.size(); ++i)
            record.cells[i].field = schema.fields()[i].name;
        for (std::size_t c = 0; c < fields.size(); ++c)
            record.cells[column_to_field[c]].value = normalize_cell(fields[c]);
        result.records.push_back(std::move(record));
    }
    return result;
}

LoadResult load_objects(std::istream& in, const std::string& source_id, const Schema& schema)
{
    LoadResult result;
    std::string line;
    int row_number = 0;
    while (std::getline(in, line)) {
        if (text::trim(line).empty())
            continue;
        ++row_number;
        auto parsed = nlohmann::json::parse(line, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object()) {
            result.malformed.push_back({row_number, "line is not a JSON object"});
            continue;
        }
        RawRecord record{source_id, row_number, {}};
        for (const auto& field : schema.fields())
            record.cells.push_back({field.name, std::nullopt});
        for (const auto& [key, value] : parsed.items()) {
            auto index = schema.index_of(text::trim(key));
            if (!index)
                throw Error(ErrorCode::UnknownField, "key '" + key + "' is not in the schema");
            if (!value.is_null())
                record.cells[*index].value = normalize_cell(cell_text(value));
        }
        result.records.push_back(std::move(record));
    }
    return result;
}

} // namespace

std::string_view to_string(DefectCode code) { return name_of(kDefectNames, code); }
std::optional<DefectCode> parse_defect_code(std::string_view name) { return value_of(kDefectNames, name); }
std::string_view to_string(FieldState state) { return name_of(kStateNames, state); }
std::optional<FieldState> parse_field_state(std::string_view name) { return value_of(kStateNames, name); }
std::string_view to_string(FieldKind kind) { return name_of(kKindNames, kind); }
std::optional<FieldKind> parse_field_kind(std::string_view name) { return value_of(kKindNames, name); }

void FieldStatus::flag(DefectCode code)
{
    if (std::find(violation_codes.begin(), violation_codes.end(), code) == violation_codes.end())
        violation_codes.push_back(code);
}

Schema::Schema(std::vector<FieldSchema> fields)
    : fields_(std::move(fields))
{
    if (fields_.empty())
        throw Error(ErrorCode::ConfigInvalid, "schema has no fields");
    std::unordered_set<std::string> names;
    for (const auto& f : fields_) {
        if (text::trim(f.name).empty())
            throw Error(ErrorCode::ConfigInvalid, "schema field with empty name");
        if (!names.insert(text::to_lower(f.name)).second)
            throw Error(ErrorCode::ConfigInvalid, "duplicate schema field '" + f.name + "'");
    }
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < fields_.size(); ++i)
        if (text::iequals(fields_[i].name, name))
            return i;
    return std::nullopt;
}

const FieldSchema* Schema::find(std::string_view name) const
{
    auto i = index_of(name);
    return i ? &fields_[*i] : nullptr;
}

const FieldSchema* Schema::first_of_kind(FieldKind kind) const
{
    for (const auto& f : fields_)
        if (f.kind == kind)
            return &f;
    return nullptr;
}

std::string to_string(const RecordRef& ref) { return ref.source_id + "#" + std::to_string(ref.row_number); }

const std::optional<std::string>& RawRecord::value(std::string_view field) const
{
    for (const auto& cell : cells)
        if (text::iequals(cell.field, field))
            return cell.value;
    return kMissing;
}

void RawRecord::set(std::string_view field, std::optional<std::string> value)
{
    for (auto& cell : cells) {
        if (text::iequals(cell.field, field)) {
            cell.value = std::move(value);
            return;
        }
    }
    cells.push_back({std::string(field), std::move(value)});
}

std::optional<std::string> normalize_cell(std::string_view raw)
{
    auto trimmed = text::trim(raw);
    if (trimmed.empty())
        return std::nullopt;
    return std::string(trimmed);
}

std::optional<DataFormat> parse_data_format(std::string_view name)
{
    if (text::iequals(name, "delimited") || text::iequals(name, "csv"))
        return DataFormat::Delimited;
    if (text::iequals(name, "object") || text::iequals(name, "jsonl"))
        return DataFormat::Object;
    return std::nullopt;
}

DataFormat format_for_path(const std::filesystem::path& path)
{
    auto ext = text::to_lower(path.extension().string());
    return ext == ".jsonl" || ext == ".ndjson" ? DataFormat::Object : DataFormat::Delimited;
}

LoadResult load_dataset(const std::filesystem::path& path, const Schema& schema, DataFormat format)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    return load_dataset(in, path.filename().string(), schema, format);
}

LoadResult load_dataset(std::istream& in, std::string source_id, const Schema& schema, DataFormat format)
{
    return format == DataFormat::Delimited ? load_delimited(in, source_id, schema)
                                           : load_objects(in, source_id, schema);
}

void write_dataset(std::ostream& out, const std::vector<RawRecord>& records, const Schema& schema,
                   char delimiter)
{
    std::vector<std::string> row;
    for (const auto& f : schema.fields())
        row.push_back(f.name);
    delimited::write_row(out, row, delimiter);
    for (const auto& record : records) {
        row.clear();
        for (const auto& f : schema.fields())
            row.push_back(record.value(f.name).value_or(""));
        delimited::write_row(out, row, delimiter);
    }
}

std::vector<SchemaViolation> validate_against_schema(const RawRecord& record, const Schema& schema)
{
    std::vector<SchemaViolation> out;
    for (const auto& f : schema.fields())
        if (f.required && !record.value(f.name))
            out.push_back({f.name, DefectCode::MissingInfo});
    return out;
}

} // namespace rdq
