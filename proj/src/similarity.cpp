#include "rdq/similarity.hpp"

#include "rdq/text.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace rdq {

std::size_t levenshtein_distance(std::string_view a, std::string_view b)
{
    if (a.size() < b.size())
        std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t up = row[j];
            std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
            diag = up;
        }
    }
    return row[b.size()];
}

double edit_similarity(std::string_view a, std::string_view b)
{
    std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0)
        return 1.0;
    return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b)
{
    if (a.empty() && b.empty())
        return 1.0;
    std::size_t common = 0;
    for (const auto& x : a)
        common += b.count(x);
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

std::vector<std::string> fused_street_tokens(std::string_view street)
{
    static const std::map<std::string, std::string, std::less<>> kAbbrev = {
        {"street", "st"}, {"avenue", "ave"}, {"av", "ave"}, {"road", "rd"}, {"boulevard", "blvd"},
        {"drive", "dr"},  {"lane", "ln"},    {"place", "pl"}, {"court", "ct"},
    };

    std::vector<std::string> words;
    std::string current;
    auto flush = [&] {
        if (!current.empty())
            words.push_back(text::to_lower(current));
        current.clear();
    };
    for (char c : street) {
        if (text::is_alpha(c) || text::is_digit(c)) {
            if (!current.empty() && text::is_digit(current.back()) != text::is_digit(c))
                flush();
            current += c;
        } else {
            flush();
        }
    }
    flush();

    std::vector<std::string> out;
    for (const auto& w : words) {
        bool ordinal = (w == "st" || w == "nd" || w == "rd" || w == "th") && !out.empty() && text::all_digits(out.back());
        if (ordinal) {
            out.back() += w;
            continue;
        }
        auto it = kAbbrev.find(w);
        out.push_back(it == kAbbrev.end() ? w : it->second);
    }
    return out;
}

} // namespace rdq
