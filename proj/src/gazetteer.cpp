#include "rdq/gazetteer.hpp"

#include "rdq/delimited.hpp"
#include "rdq/errors.hpp"
#include "rdq/text.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace rdq {

bool is_zip_code(std::string_view s) { return s.size() == 5 && text::all_digits(s); }

void Gazetteer::add(std::string zip, Place place)
{
    if (!is_zip_code(zip))
        throw Error(ErrorCode::ConfigInvalid, "gazetteer zip '" + zip + "' is not a 5-digit code");
    if (place.city.empty() || place.state.empty())
        throw Error(ErrorCode::ConfigInvalid, "gazetteer entry " + zip + " has empty city or state");
    auto [it, inserted] = entries_.emplace(zip, place);
    if (!inserted && !(text::iequals(it->second.city, place.city) && text::iequals(it->second.state, place.state)))
        throw Error(ErrorCode::DuplicateZip, zip + " maps to both " + it->second.city + " and " + place.city);
}

const Place* Gazetteer::lookup(std::string_view zip) const
{
    auto it = entries_.find(zip);
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> Gazetteer::unique_zip_for(std::string_view city, std::string_view state) const
{
    std::optional<std::string> found;
    for (const auto& [zip, place] : entries_) {
        if (text::iequals(place.city, city) && text::iequals(place.state, state)) {
            if (found)
                return std::nullopt;
            found = zip;
        }
    }
    return found;
}

bool Gazetteer::knows_city(std::string_view city) const
{
    for (const auto& [zip, place] : entries_)
        if (text::iequals(place.city, city))
            return true;
    return false;
}

Gazetteer parse_gazetteer(std::istream& in)
{
    Gazetteer gazetteer;
    std::string header_line;
    if (!std::getline(in, header_line))
        return gazetteer;
    char delimiter = delimited::detect_delimiter(header_line);
    delimited::Reader reader(in, delimiter);
    std::vector<std::string> fields;
    int line = 1;
    while (reader.next(fields)) {
        ++line;
        if (fields.size() != 3)
            throw Error(ErrorCode::ConfigInvalid, "gazetteer line " + std::to_string(line) + " needs 3 columns");
        gazetteer.add(std::string(text::trim(fields[0])),
                      {std::string(text::trim(fields[1])), text::to_upper(text::trim(fields[2]))});
    }
    return gazetteer;
}

Gazetteer load_gazetteer(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open gazetteer " + path.string());
    return parse_gazetteer(in);
}

} // namespace rdq
