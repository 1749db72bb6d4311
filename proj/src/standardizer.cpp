#include "rdq/standardizer.hpp"

#include "rdq/text.hpp"

#include <algorithm>
#include <cstdio>

namespace rdq {

namespace {

bool is_name_part(const Token& t) { return t.cls == TokenClass::Word || t.cls == TokenClass::Initial; }

std::string strip_dot(std::string_view s)
{
    if (!s.empty() && s.back() == '.')
        s.remove_suffix(1);
    return std::string(s);
}

std::optional<std::string> join_range(const std::vector<const Token*>& parts, std::size_t from, std::size_t to)
{
    if (from >= to)
        return std::nullopt;
    std::vector<std::string> words;
    for (std::size_t i = from; i < to; ++i)
        words.push_back(parts[i]->text);
    return text::join(words, " ");
}

void add_defect(std::vector<DefectCode>& defects, DefectCode code)
{
    if (std::find(defects.begin(), defects.end(), code) == defects.end())
        defects.push_back(code);
}

bool is_hex_upper(char c) { return text::is_digit(c) || (c >= 'A' && c <= 'F'); }

int to_int(std::string_view digits)
{
    int v = 0;
    for (char c : digits)
        v = v * 10 + (c - '0');
    return v;
}

std::optional<CanonicalDate> make_date(int y, int m, int d)
{
    CanonicalDate date{y, m, d};
    if (!date.valid())
        return std::nullopt;
    return date;
}

int expand_year(std::string_view digits, int pivot)
{
    int yy = to_int(digits);
    if (digits.size() != 2)
        return yy;
    return yy < pivot ? 2000 + yy : 1900 + yy;
}

bool is_short(std::string_view g) { return g.size() == 1 || g.size() == 2; }

// Address helpers --------------------------------------------------------

bool is_separator(const Token& t, char c) { return t.cls == TokenClass::Separator && t.text.size() == 1 && t.text[0] == c; }

std::string slice(std::string_view raw, const Token& first, const Token& last)
{
    return std::string(raw.substr(first.span.start, last.span.end - first.span.start));
}

bool is_five_digit(const Token& t)
{
    return (t.cls == TokenClass::Zip || t.cls == TokenClass::Number) && is_zip_code(t.text);
}

// "zip; state; city; street" with the zip or state segment present.
std::optional<StructuredAddress> parse_structured(std::string_view raw, const std::vector<Token>& tokens)
{
    std::vector<std::vector<const Token*>> segments(1);
    bool has_semicolon = false;
    for (const auto& t : tokens) {
        if (is_separator(t, ';')) {
            has_semicolon = true;
            segments.emplace_back();
        } else {
            segments.back().push_back(&t);
        }
    }
    if (!has_semicolon || segments.size() > 4)
        return std::nullopt;
    for (const auto& s : segments)
        if (s.empty())
            return std::nullopt;

    auto text_of = [&](const std::vector<const Token*>& s) { return slice(raw, *s.front(), *s.back()); };

    StructuredAddress address;
    std::size_t i = 0;
    if (segments[i].size() == 1 && is_five_digit(*segments[i][0]))
        address.zip = segments[i++][0]->text;
    if (i < segments.size() && segments[i].size() == 1 && segments[i][0]->cls == TokenClass::StateCode)
        address.state = segments[i++][0]->text;
    if (!address.zip && !address.state)
        return std::nullopt;

    std::size_t rest = segments.size() - i;
    if (rest == 2) {
        address.city = text_of(segments[i]);
        address.street = text_of(segments[i + 1]);
    } else if (rest == 1) {
        bool street_like = std::any_of(segments[i].begin(), segments[i].end(), [](const Token* t) {
            return t->cls == TokenClass::StreetType || t->cls == TokenClass::Number;
        });
        (street_like ? address.street : address.city) = text_of(segments[i]);
    } else if (rest != 0) {
        return std::nullopt;
    }
    return address;
}

} // namespace

// --- value types ----------------------------------------------------------

std::string PersonName::first_display() const
{
    if (!first)
        return {};
    return first_is_initial ? *first + "." : *first;
}

std::string PersonName::display() const
{
    std::vector<std::string> parts;
    if (title)
        parts.push_back(*title);
    if (first)
        parts.push_back(first_display());
    if (middle)
        parts.push_back(*middle);
    parts.push_back(last);
    return text::join(parts, " ");
}

std::optional<CanonicalId> CanonicalId::from_canonical(std::string_view s)
{
    if (s.size() != 19)
        return std::nullopt;
    for (std::size_t i = 0; i < s.size(); ++i) {
        bool dash_slot = i % 5 == 4;
        if (dash_slot ? s[i] != '-' : !is_hex_upper(s[i]))
            return std::nullopt;
    }
    if (s == "0000-0000-0000-0000")
        return std::nullopt;
    return CanonicalId(std::string(s));
}

bool is_leap_year(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int days_in_month(int year, int month)
{
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12)
        return 0;
    return month == 2 && is_leap_year(year) ? 29 : kDays[month - 1];
}

bool CanonicalDate::valid() const
{
    return year >= 1 && year <= 9999 && month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

std::string CanonicalDate::iso() const
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::string StructuredAddress::render() const
{
    std::vector<std::string> parts;
    for (const auto* p : {&zip, &state, &city, &street})
        if (*p)
            parts.push_back(**p);
    return text::join(parts, "; ");
}

std::string StructuredAddress::render_without_zip() const
{
    std::vector<std::string> parts;
    for (const auto* p : {&state, &city, &street})
        if (*p)
            parts.push_back(**p);
    return text::join(parts, "; ");
}

int StructuredAddress::populated() const
{
    return int(street.has_value()) + int(city.has_value()) + int(state.has_value()) + int(zip.has_value());
}

// --- names ------------------------------------------------------------------

void NameContext::observe(const std::vector<Token>& name_tokens)
{
    std::vector<const Token*> parts;
    for (const auto& t : name_tokens)
        if (is_name_part(t))
            parts.push_back(&t);
    if (parts.size() >= 2 && parts.front()->cls == TokenClass::Word && is_given_name(parts.front()->text))
        ++surnames_[text::to_lower(parts.back()->text)];
}

bool NameContext::is_given_name(std::string_view word) const
{
    return given_names_ && given_names_->contains(word);
}

int NameContext::surname_count(std::string_view word) const
{
    auto it = surnames_.find(text::to_lower(word));
    return it == surnames_.end() ? 0 : it->second;
}

NameContext build_name_context(const std::vector<RawRecord>& records, const Schema& schema,
                               const Lexicons& lexicons)
{
    NameContext context(lexicons.given_names);
    const auto* field = schema.first_of_kind(FieldKind::PersonName);
    if (!field)
        return context;
    for (const auto& r : records)
        if (const auto& v = r.value(field->name))
            context.observe(tokenize(*v, FieldKind::PersonName, lexicons));
    return context;
}

Standardized<PersonName> standardize_name(const std::vector<Token>& tokens, const NameContext& context)
{
    Standardized<PersonName> result;
    PersonName name;

    std::vector<const Token*> parts;
    std::optional<std::size_t> comma_at; // parts before a "Last, First" comma
    for (const auto& t : tokens) {
        if (t.cls == TokenClass::Title && !name.title && parts.empty()) {
            name.title = t.text;
            add_defect(result.defects, DefectCode::Irrelevant);
        } else if (is_name_part(t)) {
            parts.push_back(&t);
        } else if (is_separator(t, ',') && !comma_at && !parts.empty()) {
            comma_at = parts.size();
        }
    }
    if (parts.empty()) {
        result.error = ErrorCode::UnparseableName;
        add_defect(result.defects, DefectCode::Incomplete);
        return result;
    }

    std::vector<const Token*> ordered;
    if (comma_at && *comma_at < parts.size()) {
        // "Smit, John William"
        ordered.assign(parts.begin() + *comma_at, parts.end());
        ordered.insert(ordered.end(), parts.begin(), parts.begin() + *comma_at);
        add_defect(result.defects, DefectCode::TransformFault);
    } else if (parts.size() >= 2 && !context.is_given_name(parts[0]->text) &&
               context.surname_count(parts[0]->text) > 0 && context.is_given_name(parts[1]->text)) {
        // "Smit John William" -> John William Smit
        ordered.assign(parts.begin() + 1, parts.end());
        ordered.push_back(parts[0]);
        add_defect(result.defects, DefectCode::TransformFault);
    } else {
        ordered = parts;
    }

    if (ordered.size() == 1) {
        name.last = strip_dot(ordered[0]->text);
    } else {
        const Token& first = *ordered.front();
        if (first.cls == TokenClass::Initial) {
            name.first = text::to_upper(strip_dot(first.text));
            name.first_is_initial = true;
        } else {
            name.first = first.text;
        }
        name.middle = join_range(ordered, 1, ordered.size() - 1);
        name.last = ordered.back()->text;
    }
    result.value = std::move(name);
    return result;
}

// --- identifiers --------------------------------------------------------------

Standardized<CanonicalId> standardize_id(std::string_view raw, const StandardizerOptions& options)
{
    Standardized<CanonicalId> result;
    std::string compact;
    for (char c : raw)
        if (c != '-' && !text::is_space(c))
            compact += c;
    compact = text::to_upper(compact);

    if (compact.size() != 16) {
        result.error = ErrorCode::InvalidId;
        add_defect(result.defects, DefectCode::Incomplete);
        return result;
    }
    if (!std::all_of(compact.begin(), compact.end(), is_hex_upper)) {
        result.error = ErrorCode::InvalidId;
        add_defect(result.defects, DefectCode::Typo);
        return result;
    }
    for (const auto& placeholder : options.placeholder_ids) {
        std::string p;
        for (char c : placeholder)
            if (c != '-')
                p += c;
        if (text::iequals(p, compact)) {
            add_defect(result.defects, DefectCode::Incomplete);
            return result;
        }
    }
    std::string canonical;
    for (std::size_t i = 0; i < 16; ++i) {
        if (i && i % 4 == 0)
            canonical += '-';
        canonical += compact[i];
    }
    result.value = CanonicalId::from_canonical(canonical);
    return result;
}

// --- dates --------------------------------------------------------------------

Standardized<CanonicalDate> standardize_date(std::string_view raw, const StandardizerOptions& options)
{
    Standardized<CanonicalDate> result;
    auto reject = [&](DefectCode code) {
        add_defect(result.defects, code);
        return result;
    };

    std::vector<std::string> groups;
    std::vector<char> seps;
    std::string current;
    auto flush = [&] {
        if (!current.empty())
            groups.push_back(std::move(current));
        current.clear();
    };
    for (char c : text::trim(raw)) {
        if (text::is_digit(c)) {
            if (current.empty() && groups.size() != seps.size())
                return reject(DefectCode::Typo); // two digit groups with no separator
            current += c;
        } else if (c == '/' || c == '.' || c == '-') {
            flush();
            if (groups.size() != seps.size() + 1)
                return reject(DefectCode::Typo);
            seps.push_back(c);
        } else if (text::is_space(c)) {
            flush();
        } else {
            return reject(DefectCode::Typo);
        }
    }
    flush();

    std::optional<CanonicalDate> date;
    if (groups.size() == 1 && seps.empty()) {
        const auto& g = groups[0];
        if (g.size() == 4)
            return reject(DefectCode::Incomplete); // year only
        if (g.size() == 6 && options.compact_dates) {
            int y = expand_year(g.substr(0, 2), options.two_digit_year_pivot);
            int a = to_int(g.substr(2, 2));
            int b = to_int(g.substr(4, 2));
            date = make_date(y, a, b);
            if (!date)
                date = make_date(y, b, a);
        }
    } else if (groups.size() == 3 && seps.size() == 2 && seps[0] == seps[1]) {
        const auto &a = groups[0], &b = groups[1], &c = groups[2];
        switch (seps[0]) {
        case '/': // MM/DD/YYYY or MM/DD/YY
            if (is_short(a) && is_short(b) && (c.size() == 4 || c.size() == 2))
                date = make_date(expand_year(c, options.two_digit_year_pivot), to_int(a), to_int(b));
            break;
        case '.': // DD.MM.YYYY
            if (is_short(a) && is_short(b) && c.size() == 4)
                date = make_date(to_int(c), to_int(b), to_int(a));
            break;
        case '-': // YYYY-MM-DD or D-M-YYYY
            if (a.size() == 4 && is_short(b) && is_short(c))
                date = make_date(to_int(a), to_int(b), to_int(c));
            else if (is_short(a) && is_short(b) && c.size() == 4)
                date = make_date(to_int(c), to_int(b), to_int(a));
            break;
        default:
            break;
        }
    }
    if (!date)
        return reject(DefectCode::Typo);
    result.value = date;
    return result;
}

// --- addresses ------------------------------------------------------------------

Standardized<StructuredAddress> standardize_address(std::string_view raw, const std::vector<Token>& tokens,
                                                    const Gazetteer& gazetteer, const Lexicons& lexicons)
{
    Standardized<StructuredAddress> result;
    StructuredAddress address;

    if (auto structured = parse_structured(raw, tokens)) {
        address = *structured;
    } else {
        const std::size_t n = tokens.size();
        std::vector<bool> used(n, false);

        std::optional<std::size_t> street_type;
        std::optional<std::size_t> zip_at;
        for (std::size_t i = 0; i < n; ++i) {
            if (!street_type && tokens[i].cls == TokenClass::StreetType)
                street_type = i;
            if (!zip_at && tokens[i].cls == TokenClass::Zip)
                zip_at = i;
            if (!address.state && tokens[i].cls == TokenClass::StateCode) {
                address.state = tokens[i].text;
                used[i] = true;
            }
        }

        // Street head: [NUMBER|ORDINAL]* WORD* STREET_TYPE, walking backwards.
        std::optional<std::string> main_street;
        if (street_type) {
            std::size_t head = *street_type;
            bool numeric = false;
            for (std::size_t k = *street_type; k-- > 0;) {
                const auto& t = tokens[k];
                bool wordish = t.cls == TokenClass::Word || t.cls == TokenClass::Initial;
                bool numberish = t.cls == TokenClass::Number || t.cls == TokenClass::OrdinalSuffix;
                if (wordish && !numeric && !lexicons.countries.contains(t.text)) {
                    head = k;
                } else if (numberish) {
                    numeric = true;
                    head = k;
                } else {
                    break;
                }
            }
            for (std::size_t k = head; k <= *street_type; ++k)
                used[k] = true;
            main_street = slice(raw, tokens[head], tokens[*street_type]);
        }

        if (!zip_at) {
            // A trailing 5-digit number the gazetteer does not know.
            for (std::size_t k = n; k-- > 0;) {
                if (!used[k] && tokens[k].cls == TokenClass::Number && is_zip_code(tokens[k].text)) {
                    zip_at = k;
                    break;
                }
            }
        }

        // House numbers displaced behind the zip ("6 th Street, 32904 123").
        std::optional<std::string> displaced;
        if (zip_at) {
            used[*zip_at] = true;
            address.zip = tokens[*zip_at].text;
            std::size_t k = *zip_at + 1;
            while (k < n && (tokens[k].cls == TokenClass::Number || tokens[k].cls == TokenClass::OrdinalSuffix))
                used[k++] = true;
            if (k > *zip_at + 1 && main_street) {
                displaced = slice(raw, tokens[*zip_at + 1], tokens[k - 1]);
                add_defect(result.defects, DefectCode::TransferFault);
            }
        }
        if (main_street)
            address.street = displaced ? *displaced + " " + *main_street : *main_street;

        // City: first contiguous run of unused words.
        std::vector<std::string> city_words;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& t = tokens[k];
            bool candidate = !used[k] && (t.cls == TokenClass::Word || t.cls == TokenClass::Initial) &&
                             !lexicons.countries.contains(t.text);
            if (candidate) {
                city_words.push_back(t.text);
            } else if (!city_words.empty()) {
                break;
            }
        }
        if (!city_words.empty())
            address.city = text::join(city_words, " ");

        bool anchored = zip_at && tokens[*zip_at].cls == TokenClass::Zip;
        if (!anchored && !street_type && !(address.city && gazetteer.knows_city(*address.city))) {
            result.error = ErrorCode::UnparseableAddress;
            add_defect(result.defects, DefectCode::Typo);
            return result;
        }
    }

    if (address.zip) {
        if (const Place* place = gazetteer.lookup(*address.zip)) {
            if (!address.city) {
                address.city = place->city;
                add_defect(result.defects, DefectCode::Incomplete);
            } else if (!text::iequals(*address.city, place->city)) {
                add_defect(result.defects, DefectCode::Contradictory);
            }
            if (!address.state) {
                add_defect(result.defects, DefectCode::Incomplete);
            } else if (!text::iequals(*address.state, place->state)) {
                add_defect(result.defects, DefectCode::Contradictory);
            }
            address.state = place->state;
        }
    }
    if (address.state && !lexicons.state_codes.contains(*address.state))
        address.state.reset();
    if (address.populated() == 0) {
        result.error = ErrorCode::UnparseableAddress;
        add_defect(result.defects, DefectCode::Typo);
        return result;
    }
    result.value = std::move(address);
    return result;
}

// --- records --------------------------------------------------------------------

FieldRoles FieldRoles::from_schema(const Schema& schema)
{
    FieldRoles roles;
    auto name_of = [&](FieldKind kind) {
        const auto* f = schema.first_of_kind(kind);
        return f ? f->name : std::string();
    };
    roles.author_id = name_of(FieldKind::FreeText);
    roles.name = name_of(FieldKind::PersonName);
    roles.id = name_of(FieldKind::Identifier);
    roles.birth_date = name_of(FieldKind::Date);
    roles.address = name_of(FieldKind::Address);
    return roles;
}

namespace {

template <typename T, typename Render>
void settle(CleansedRecord& out, const std::string& field, const std::string& raw, Standardized<T>&& result,
            std::optional<T>& slot, Render render)
{
    FieldStatus status;
    for (auto code : result.defects)
        status.flag(code);
    if (result.value) {
        if (render(*result.value) == raw) {
            status.state = FieldState::Valid;
        } else {
            status.state = FieldState::Corrected;
            if (status.violation_codes.empty())
                status.flag(DefectCode::TransformFault);
        }
        slot = std::move(result.value);
    } else {
        status.state = FieldState::Rejected;
        if (status.violation_codes.empty())
            status.flag(DefectCode::Typo);
    }
    out.field_status[field] = std::move(status);
}

FieldStatus missing_status()
{
    FieldStatus status{FieldState::Missing, {}};
    status.flag(DefectCode::MissingInfo);
    return status;
}

} // namespace

CleansedRecord cleanse_record(const RawRecord& record, const CleansingContext& context)
{
    const auto roles = FieldRoles::from_schema(context.schema);
    CleansedRecord out;
    out.ref = record.ref();

    for (const auto& field : context.schema.fields()) {
        const auto& raw = record.value(field.name);
        const std::string& name = field.name;
        if (!raw) {
            out.field_status[name] = missing_status();
            if (name != roles.author_id && name != roles.name && name != roles.id && name != roles.birth_date &&
                name != roles.address)
                out.extras.push_back({name, std::nullopt});
            continue;
        }

        if (name == roles.name) {
            auto tokens = tokenize(*raw, FieldKind::PersonName, context.lexicons);
            settle(out, name, *raw, standardize_name(tokens, context.names), out.name,
                   [](const PersonName& n) { return n.display(); });
        } else if (name == roles.id) {
            settle(out, name, *raw, standardize_id(*raw, context.options), out.id,
                   [](const CanonicalId& id) { return id.str(); });
        } else if (name == roles.birth_date) {
            settle(out, name, *raw, standardize_date(*raw, context.options), out.birth_date,
                   [](const CanonicalDate& d) { return d.iso(); });
        } else if (name == roles.address) {
            auto tokens = tokenize(*raw, FieldKind::Address, context.lexicons, &context.gazetteer);
            settle(out, name, *raw, standardize_address(*raw, tokens, context.gazetteer, context.lexicons),
                   out.address, [](const StructuredAddress& a) { return a.render(); });
        } else {
            if (name == roles.author_id)
                out.author_id = raw;
            else
                out.extras.push_back({name, raw});
            out.field_status[name] = FieldStatus{FieldState::Valid, {}};
        }
    }
    return out;
}

RawRecord render(const CleansedRecord& record, const Schema& schema)
{
    const auto roles = FieldRoles::from_schema(schema);
    RawRecord out{record.ref.source_id, record.ref.row_number, {}};
    for (const auto& field : schema.fields()) {
        const std::string& name = field.name;
        std::optional<std::string> value;
        if (name == roles.author_id)
            value = record.author_id;
        else if (name == roles.name && record.name)
            value = record.name->display();
        else if (name == roles.id && record.id)
            value = record.id->str();
        else if (name == roles.birth_date && record.birth_date)
            value = record.birth_date->iso();
        else if (name == roles.address && record.address)
            value = record.address->render();
        else
            for (const auto& cell : record.extras)
                if (cell.field == name)
                    value = cell.value;
        out.cells.push_back({name, std::move(value)});
    }
    return out;
}

} // namespace rdq
