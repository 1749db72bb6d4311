#pragma once

#include "rdq/gazetteer.hpp"
#include "rdq/lexicons.hpp"
#include "rdq/record_model.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rdq {

enum class TokenClass {
    Word,
    Initial,
    Title,
    Number,
    OrdinalSuffix,
    DatePart,
    Zip,
    StateCode,
    StreetType,
    Separator,
    Unknown,
};

std::string_view to_string(TokenClass cls);

struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const Span&) const = default;
};

struct Token {
    std::string text;
    TokenClass cls = TokenClass::Unknown;
    Span span;

    bool operator==(const Token&) const = default;
};

/// Splits a raw value into classified tokens. Spans are ordered and
/// non-overlapping; the bytes between consecutive spans are whitespace only,
/// so the raw value can be rebuilt exactly from the tokens.
///
/// A 5-digit number in an address is a ZIP only when `gazetteer` knows it.
std::vector<Token> tokenize(std::string_view value, FieldKind kind, const Lexicons& lexicons,
                            const Gazetteer* gazetteer = nullptr);

/// Format signature of a tokenized value, e.g. "NN/NN/NNNN" for "12/23/1987".
/// Digit-bearing tokens map per character (digit N, letter A); other tokens
/// map to one class symbol; separators are kept literally and whitespace gaps
/// collapse to one space.
std::string token_pattern(const std::vector<Token>& tokens);

/// Rebuilds the raw value from `tokens`, restoring the original gaps.
std::string reassemble(std::string_view value, const std::vector<Token>& tokens);

struct FieldProfile {
    std::string field;
    std::map<std::string, int> pattern_histogram;
    int distinct_count = 0; // distinct non-MISSING raw values
    int missing_count = 0;

    int total() const;
};

FieldProfile profile_field(const std::vector<RawRecord>& records, const FieldSchema& field,
                           const Lexicons& lexicons, const Gazetteer* gazetteer = nullptr);

} // namespace rdq
