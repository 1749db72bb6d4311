#include "rdq/parser.hpp"

#include "rdq/text.hpp"

#include <set>

namespace rdq {

namespace {

bool is_ordinal_suffix(std::string_view word)
{
    return text::iequals(word, "st") || text::iequals(word, "nd") || text::iequals(word, "rd") ||
           text::iequals(word, "th");
}

bool is_upper_word(std::string_view word)
{
    for (char c : word)
        if (!(c >= 'A' && c <= 'Z'))
            return false;
    return !word.empty();
}

// Letters, plus apostrophes and hyphens joining two letter runs ("O'Neil").
std::size_t scan_word(std::string_view v, std::size_t i)
{
    std::size_t j = i;
    while (j < v.size()) {
        if (text::is_alpha(v[j])) {
            ++j;
        } else if ((v[j] == '\'' || v[j] == '-') && j + 1 < v.size() && text::is_alpha(v[j + 1])) {
            j += 2;
        } else {
            break;
        }
    }
    return j;
}

std::size_t scan_while(std::string_view v, std::size_t i, bool (*pred)(char))
{
    while (i < v.size() && pred(v[i]))
        ++i;
    return i;
}

bool is_alnum(char c) { return text::is_alpha(c) || text::is_digit(c); }

struct Tokenizer {
    std::string_view v;
    FieldKind kind;
    const Lexicons& lex;
    const Gazetteer* gazetteer;
    std::vector<Token> out;

    void emit(std::size_t start, std::size_t end, TokenClass cls)
    {
        out.push_back({std::string(v.substr(start, end - start)), cls, {start, end}});
    }

    bool previous_is_number() const
    {
        return !out.empty() && (out.back().cls == TokenClass::Number || out.back().cls == TokenClass::Zip);
    }

    void number(std::size_t i)
    {
        std::size_t j = scan_while(v, i, text::is_digit);
        auto digits = v.substr(i, j - i);
        TokenClass cls = TokenClass::Number;
        if (kind == FieldKind::Date)
            cls = TokenClass::DatePart;
        else if (kind == FieldKind::Address && is_zip_code(digits) && gazetteer && gazetteer->lookup(digits))
            cls = TokenClass::Zip;
        emit(i, j, cls);
    }

    // Identifiers are split only on punctuation: "F006" stays one token.
    void identifier_piece(std::size_t i)
    {
        std::size_t j = scan_while(v, i, is_alnum);
        bool has_alpha = false;
        for (std::size_t k = i; k < j; ++k)
            has_alpha = has_alpha || text::is_alpha(v[k]);
        emit(i, j, has_alpha ? TokenClass::Word : TokenClass::Number);
    }

    void word(std::size_t i)
    {
        std::size_t j = scan_word(v, i);
        auto w = v.substr(i, j - i);
        bool dot = j < v.size() && v[j] == '.';
        std::string dotted = std::string(w) + ".";

        switch (kind) {
        case FieldKind::PersonName:
            if (dot && lex.titles.contains(dotted))
                return emit(i, j + 1, TokenClass::Title);
            if (lex.titles.contains(w) || lex.titles.contains(dotted))
                return emit(i, j, TokenClass::Title);
            if (w.size() == 1)
                return emit(i, dot ? j + 1 : j, TokenClass::Initial);
            return emit(i, j, TokenClass::Word);
        case FieldKind::Address:
            if (!dot && is_ordinal_suffix(w) && previous_is_number())
                return emit(i, j, TokenClass::OrdinalSuffix);
            if (dot && lex.street_types.contains(dotted))
                return emit(i, j + 1, TokenClass::StreetType);
            if (lex.street_types.contains(w) || lex.street_types.contains(dotted))
                return emit(i, j, TokenClass::StreetType);
            if (w.size() == 2 && is_upper_word(w) && lex.state_codes.contains(w))
                return emit(i, j, TokenClass::StateCode);
            return emit(i, j, TokenClass::Word);
        default:
            return emit(i, j, TokenClass::Word);
        }
    }

    std::vector<Token> run()
    {
        std::size_t i = 0;
        while (i < v.size()) {
            char c = v[i];
            if (text::is_space(c)) {
                ++i;
            } else if (kind == FieldKind::Identifier && is_alnum(c)) {
                identifier_piece(i);
                i = out.back().span.end;
            } else if (text::is_digit(c)) {
                number(i);
                i = out.back().span.end;
            } else if (text::is_alpha(c)) {
                word(i);
                i = out.back().span.end;
            } else {
                emit(i, i + 1, TokenClass::Separator);
                ++i;
            }
        }
        return std::move(out);
    }
};

char class_symbol(TokenClass cls)
{
    switch (cls) {
    case TokenClass::Word: return 'W';
    case TokenClass::Initial: return 'I';
    case TokenClass::Title: return 'T';
    case TokenClass::Number: return 'N';
    case TokenClass::OrdinalSuffix: return 'o';
    case TokenClass::DatePart: return 'N';
    case TokenClass::Zip: return 'Z';
    case TokenClass::StateCode: return 'S';
    case TokenClass::StreetType: return 'R';
    case TokenClass::Separator: return ',';
    case TokenClass::Unknown: return '?';
    }
    return '?';
}

} // namespace

std::string_view to_string(TokenClass cls)
{
    switch (cls) {
    case TokenClass::Word: return "WORD";
    case TokenClass::Initial: return "INITIAL";
    case TokenClass::Title: return "TITLE";
    case TokenClass::Number: return "NUMBER";
    case TokenClass::OrdinalSuffix: return "ORDINAL_SUFFIX";
    case TokenClass::DatePart: return "DATE_PART";
    case TokenClass::Zip: return "ZIP";
    case TokenClass::StateCode: return "STATE_CODE";
    case TokenClass::StreetType: return "STREET_TYPE";
    case TokenClass::Separator: return "SEPARATOR";
    case TokenClass::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::vector<Token> tokenize(std::string_view value, FieldKind kind, const Lexicons& lexicons,
                            const Gazetteer* gazetteer)
{
    return Tokenizer{value, kind, lexicons, gazetteer, {}}.run();
}

std::string token_pattern(const std::vector<Token>& tokens)
{
    std::string pattern;
    std::size_t cursor = 0;
    for (const auto& token : tokens) {
        if (token.span.start > cursor && cursor > 0)
            pattern += ' ';
        cursor = token.span.end;

        bool has_digit = false;
        for (char c : token.text)
            has_digit = has_digit || text::is_digit(c);
        if (token.cls == TokenClass::Separator) {
            pattern += token.text;
        } else if (token.cls == TokenClass::Zip) {
            pattern += class_symbol(token.cls);
        } else if (has_digit) {
            for (char c : token.text)
                pattern += text::is_digit(c) ? 'N' : 'A';
        } else {
            pattern += class_symbol(token.cls);
        }
    }
    return pattern;
}

std::string reassemble(std::string_view value, const std::vector<Token>& tokens)
{
    std::string out;
    std::size_t cursor = 0;
    for (const auto& token : tokens) {
        out += value.substr(cursor, token.span.start - cursor);
        out += token.text;
        cursor = token.span.end;
    }
    out += value.substr(cursor);
    return out;
}

int FieldProfile::total() const
{
    int sum = missing_count;
    for (const auto& [pattern, count] : pattern_histogram)
        sum += count;
    return sum;
}

FieldProfile profile_field(const std::vector<RawRecord>& records, const FieldSchema& field,
                           const Lexicons& lexicons, const Gazetteer* gazetteer)
{
    FieldProfile profile{field.name, {}, 0, 0};
    std::set<std::string> distinct;
    for (const auto& record : records) {
        const auto& value = record.value(field.name);
        if (!value) {
            ++profile.missing_count;
            continue;
        }
        distinct.insert(*value);
        ++profile.pattern_histogram[token_pattern(tokenize(*value, field.kind, lexicons, gazetteer))];
    }
    profile.distinct_count = static_cast<int>(distinct.size());
    return profile;
}

} // namespace rdq
