#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace rdq {

struct Place {
    std::string city;
    std::string state;

    bool operator==(const Place&) const = default;
};

/// Postal reference data: 5-digit zip -> (city, state).
class Gazetteer {
public:
    // Throws DUPLICATE_ZIP when `zip` is already mapped to a different place.
    void add(std::string zip, Place place);

    const Place* lookup(std::string_view zip) const;
    // The zip for (city, state) if exactly one entry matches, case-insensitively.
    std::optional<std::string> unique_zip_for(std::string_view city, std::string_view state) const;
    bool knows_city(std::string_view city) const;

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::map<std::string, Place, std::less<>>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, Place, std::less<>> entries_;
};

bool is_zip_code(std::string_view s);

/// Reads delimited "zip,city,state" rows with a header line.
Gazetteer parse_gazetteer(std::istream& in);
Gazetteer load_gazetteer(const std::filesystem::path& path);

} // namespace rdq
