#include "rdq/delimited.hpp"

#include <istream>
#include <ostream>

namespace rdq::delimited {

char detect_delimiter(std::string_view header_line)
{
    std::size_t commas = 0;
    std::size_t semicolons = 0;
    bool quoted = false;
    for (char c : header_line) {
        if (c == '"')
            quoted = !quoted;
        else if (!quoted && c == ',')
            ++commas;
        else if (!quoted && c == ';')
            ++semicolons;
    }
    return semicolons > commas ? ';' : ',';
}

Reader::Reader(std::istream& in, char delimiter)
    : in_(in)
    , delimiter_(delimiter)
{
}

bool Reader::next(std::vector<std::string>& fields)
{
    unterminated_ = false;
    for (;;) {
        fields.clear();
        std::string field;
        bool quoted = false;
        bool any = false;
        bool field_started = false;
        int ch;
        while ((ch = in_.get()) != std::char_traits<char>::eof()) {
            any = true;
            char c = static_cast<char>(ch);
            if (quoted) {
                if (c == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field += '"';
                    } else {
                        quoted = false;
                    }
                } else {
                    field += c;
                }
                continue;
            }
            if (c == '"' && !field_started) {
                quoted = true;
                field_started = true;
            } else if (c == delimiter_) {
                fields.push_back(std::move(field));
                field.clear();
                field_started = false;
            } else if (c == '\r') {
                // swallowed; a bare CR inside a line is not meaningful here
            } else if (c == '\n') {
                break;
            } else {
                field += c;
                field_started = true;
            }
        }
        if (!any)
            return false;
        if (quoted)
            unterminated_ = true;
        fields.push_back(std::move(field));
        bool blank = fields.size() == 1 && fields.front().find_first_not_of(" \t") == std::string::npos;
        if (!blank || unterminated_)
            return true;
        if (in_.peek() == std::char_traits<char>::eof())
            return false;
    }
}

std::string quote_if_needed(std::string_view field, char delimiter)
{
    bool needs = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos;
    if (!needs)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out << delimiter;
        out << quote_if_needed(fields[i], delimiter);
    }
    out << '\n';
}

} // namespace rdq::delimited
