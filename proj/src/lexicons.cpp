#include "rdq/lexicons.hpp"

#include "rdq/errors.hpp"
#include "rdq/text.hpp"

#include <fstream>

namespace rdq {

Lexicon::Lexicon(std::initializer_list<std::string_view> entries)
{
    for (auto e : entries)
        add(e);
}

void Lexicon::add(std::string_view entry)
{
    auto trimmed = text::trim(entry);
    if (!trimmed.empty())
        entries_.insert(text::to_lower(trimmed));
}

bool Lexicon::contains(std::string_view word) const { return entries_.count(text::to_lower(word)) > 0; }

Lexicon parse_lexicon(std::istream& in)
{
    Lexicon lexicon;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        lexicon.add(line);
    }
    return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open lexicon " + path.string());
    return parse_lexicon(in);
}

} // namespace rdq
