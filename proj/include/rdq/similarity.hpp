#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace rdq {

std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - distance / max(|a|, |b|); two empty strings are identical.
double edit_similarity(std::string_view a, std::string_view b);

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Comparison key for a street string: lower-cased words without
/// punctuation, "6 th" fused to "6th", common street types abbreviated
/// ("Street" -> "st", "Avenue" -> "ave").
std::vector<std::string> fused_street_tokens(std::string_view street);

} // namespace rdq
