#pragma once

#include "rdq/config.hpp"
#include "rdq/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fixture {

inline std::filesystem::path data_dir() { return RDQ_DATA_DIR; }
inline std::filesystem::path table1() { return data_dir() / "table1.csv"; }
inline std::filesystem::path config_path() { return data_dir() / "config.json"; }
inline std::filesystem::path expected(const std::string& name) { return data_dir() / "expected" / name; }

inline const rdq::PipelineConfig& config()
{
    static const rdq::PipelineConfig c = rdq::load_config(config_path());
    return c;
}

inline std::vector<rdq::RawRecord> raw()
{
    return rdq::load_dataset(table1(), config().schema, rdq::DataFormat::Delimited).records;
}

inline std::vector<rdq::CleansedRecord> cleansed()
{
    const auto& c = config();
    const auto records = raw();
    const auto names = rdq::build_name_context(records, c.schema, c.lexicons);
    const rdq::CleansingContext ctx{c.schema, c.lexicons, c.gazetteer, names, c.standardizer};
    std::vector<rdq::CleansedRecord> out;
    for (const auto& r : records)
        out.push_back(rdq::cleanse_record(r, ctx));
    return out;
}

inline std::vector<rdq::CleansedRecord> enriched()
{
    auto out = cleansed();
    for (auto& r : out)
        r = rdq::enrich_record(r, config().gazetteer).record;
    return out;
}

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"')
                quoted = !quoted;
            else if (ch == ',' && !quoted) {
                cells.push_back(cell);
                cell.clear();
            } else
                cell += ch;
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

inline std::vector<std::vector<std::string>> table_rows(const rdq::Table& t)
{
    std::vector<std::vector<std::string>> rows{t.header};
    rows.insert(rows.end(), t.rows.begin(), t.rows.end());
    return rows;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("rdq_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::int64_t fixed_clock()
{
    static std::int64_t t = 1'700'000'000'000;
    return ++t;
}

inline rdq::RecordRef row(int n) { return {"table1.csv", n}; }

inline std::string random_bytes(std::mt19937_64& rng, std::size_t max_len)
{
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<int> byte(0, 255);
    std::string s(len(rng), '\0');
    for (auto& c : s)
        c = static_cast<char>(byte(rng));
    return s;
}

// Strings over an alphabet that exercises the date and id grammars.
inline std::string random_from(std::mt19937_64& rng, std::string_view alphabet, std::size_t max_len)
{
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::string s(len(rng), '\0');
    for (auto& c : s)
        c = alphabet[pick(rng)];
    return s;
}

} // namespace fixture
