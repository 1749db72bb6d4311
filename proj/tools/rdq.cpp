#include "rdq/artifacts_io.hpp"
#include "rdq/config.hpp"
#include "rdq/errors.hpp"
#include "rdq/pipeline.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfigInvalid = 1, kIoFailure = 2, kMissingPrerequisite = 3 };

struct Options {
    std::string config;
    std::string input;
    std::string out_dir;
    std::string stage_dump;
    std::string format;
};

rdq::PipelineConfig load(const Options& o)
{
    auto config = rdq::load_config(o.config);
    if (!o.format.empty()) {
        auto format = rdq::parse_data_format(o.format);
        if (!format)
            throw rdq::Error(rdq::ErrorCode::ConfigInvalid, "unknown --format '" + o.format + "'");
        config.input_format = format;
    }
    return config;
}

fs::path out_dir(const Options& o, const rdq::PipelineConfig& config)
{
    return o.out_dir.empty() ? config.output_dir : fs::path(o.out_dir);
}

void report(const std::vector<std::string>& files, const fs::path& dir, const rdq::StageArtifacts& state)
{
    for (const auto& f : files)
        std::cout << "wrote " << (dir / f).string() << '\n';
    if (state.quality_before)
        std::cout << "quality before: " << state.quality_before->aggregate << '\n';
    if (state.quality_after)
        std::cout << "quality after:  " << state.quality_after->aggregate
                  << (state.quality_after->acceptable ? " (acceptable)" : " (not acceptable)") << '\n';
    if (state.strategy)
        std::cout << "strategy: " << rdq::to_string(*state.strategy) << '\n';
    for (const auto& n : state.notes)
        std::cout << "note: " << n.detail << '\n';
}

int run_single(rdq::Stage stage, const Options& o)
{
    auto config = load(o);
    rdq::StageArtifacts state;
    if (!o.stage_dump.empty() && fs::exists(o.stage_dump))
        state = rdq::load_state(o.stage_dump);
    if (!state.raw && !o.input.empty())
        state = rdq::load_input(o.input, config);
    state = rdq::run_stage(stage, std::move(state), config);
    auto dir = out_dir(o, config);
    auto files = rdq::write_outputs(state, config, dir);
    if (!o.stage_dump.empty())
        rdq::save_state(o.stage_dump, state);
    report(files, dir, state);
    return kOk;
}

int run_all(const Options& o)
{
    auto config = load(o);
    if (o.input.empty())
        throw rdq::Error(rdq::ErrorCode::ConfigInvalid, "run needs --input");
    auto state = rdq::run_pipeline(o.input, config);
    auto dir = out_dir(o, config);
    auto files = rdq::write_outputs(state, config, dir);
    if (!o.stage_dump.empty())
        rdq::save_state(o.stage_dump, state);
    report(files, dir, state);
    return kOk;
}

int exit_code(const rdq::Error& e)
{
    switch (e.code()) {
    case rdq::ErrorCode::IoFailure: return kIoFailure;
    case rdq::ErrorCode::MissingPrerequisite: return kMissingPrerequisite;
    default: return kConfigInvalid;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rule-driven cleansing and quality assessment for research-information records"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        cmd->add_option("--config", o.config, "Pipeline config (JSON)")->required()->check(CLI::ExistingFile);
        auto* input = cmd->add_option("--input", o.input, "Input dataset (CSV or JSONL)");
        if (needs_input)
            input->required();
        cmd->add_option("--out-dir", o.out_dir, "Output directory (default: config output_dir)");
        cmd->add_option("--stage-dump", o.stage_dump, "State file read before and written after the stage");
        cmd->add_option("--format", o.format, "Input format override: DELIMITED or OBJECT");
    };

    struct StageCommand {
        const char* name;
        rdq::Stage stage;
        const char* help;
    };
    const StageCommand stages[] = {
        {"profile", rdq::Stage::Profile, "Pattern profile of every field"},
        {"assess", rdq::Stage::Assess, "Quality report for the current data"},
        {"cleanse", rdq::Stage::Cleanse, "Correct and standardize fields"},
        {"enrich", rdq::Stage::Enrich, "Fill geographic gaps from the gazetteer"},
        {"match", rdq::Stage::Match, "Score candidate pairs and cluster duplicates"},
        {"consolidate", rdq::Stage::Consolidate, "Build golden records and back-propagate"},
    };
    std::optional<rdq::Stage> chosen;
    for (const auto& s : stages) {
        auto* cmd = app.add_subcommand(s.name, s.help);
        add_common(cmd, false);
        cmd->callback([&chosen, stage = s.stage] { chosen = stage; });
    }

    auto* run = app.add_subcommand("run", "Run every stage and write all outputs");
    add_common(run, true);

    auto* recommend = app.add_subcommand("recommend", "Recommend a cleansing strategy");
    rdq::StrategyInput input;
    rdq::StrategyCuts cuts;
    std::string recommend_config;
    auto* importance = recommend->add_option("--importance", input.importance, "Importance score in [0, 1]");
    auto* frequency = recommend->add_option("--frequency", input.change_frequency, "Change frequency in [0, 1]");
    recommend->add_option("--importance-cut", cuts.importance_cut, "Importance cut in (0, 1)");
    recommend->add_option("--frequency-cut", cuts.frequency_cut, "Frequency cut in (0, 1)");
    recommend->add_option("--config", recommend_config, "Take inputs and cuts from a config")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigInvalid;
    }

    try {
        if (chosen)
            return run_single(*chosen, o);
        if (run->parsed())
            return run_all(o);
        if (recommend->parsed()) {
            if (!recommend_config.empty()) {
                auto config = rdq::load_config(recommend_config);
                if (importance->count() == 0)
                    input.importance = config.strategy_input.importance;
                if (frequency->count() == 0)
                    input.change_frequency = config.strategy_input.change_frequency;
                cuts = config.strategy_cuts;
            }
            std::cout << rdq::to_string(rdq::recommend_strategy(input, cuts)) << '\n';
            return kOk;
        }
    } catch (const rdq::Error& e) {
        std::cerr << "rdq: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "rdq: " << e.what() << '\n';
        return kIoFailure;
    }
    return kOk;
}
