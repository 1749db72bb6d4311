#pragma once

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>

namespace rdq {

/// Case-insensitive word list. File format: one entry per line, '#' starts a
/// comment, blank lines ignored.
class Lexicon {
public:
    Lexicon() = default;
    Lexicon(std::initializer_list<std::string_view> entries);

    void add(std::string_view entry);
    bool contains(std::string_view word) const;
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

private:
    std::set<std::string> entries_; // lower-cased
};

Lexicon parse_lexicon(std::istream& in);
Lexicon load_lexicon(const std::filesystem::path& path);

struct Lexicons {
    Lexicon titles;
    Lexicon street_types;
    Lexicon state_codes;
    Lexicon given_names;
    Lexicon countries;
};

} // namespace rdq
