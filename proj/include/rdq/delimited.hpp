#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rdq::delimited {

/// Picks ',' or ';' by counting unquoted occurrences in the header line.
/// Ties go to ','.
char detect_delimiter(std::string_view header_line);

/// RFC 4180 style reader: double-quoted fields may hold delimiters, line
/// breaks and doubled quotes. Accepts LF and CRLF line endings.
class Reader {
public:
    Reader(std::istream& in, char delimiter);

    // Reads the next non-blank row. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    // True when the last row ended inside an unterminated quoted field.
    bool last_row_unterminated() const noexcept { return unterminated_; }

private:
    std::istream& in_;
    char delimiter_;
    bool unterminated_ = false;
};

std::string quote_if_needed(std::string_view field, char delimiter);
void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter);

} // namespace rdq::delimited
