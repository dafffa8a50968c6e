#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skillcap/exports.hpp"
#include "skillcap/forest.hpp"
#include "skillcap/rating.hpp"
#include "skillcap/synth.hpp"

namespace skillcap::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_numeric = 3 };

struct PipelineConfig {
    std::vector<std::string> inputs; // log files or directories
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 0;
    std::vector<double> windows = {1, 2, 5, 10, 15, 20, 30, 45, 60, 90, 120, 180};
    rating::TrueSkillParams trueskill;
    forest::ForestParams forest_params;
    int folds = 5;
    forest::FoldMode fold_mode = forest::FoldMode::game;
    std::optional<std::pair<features::Scheme, std::string>> group_filter;
    forest::PredictionTask task = forest::PredictionTask::groups4;
    bool select_study = false; // apply the 8-game / 16-game study filter
    synth::SynthConfig synth_config;
};

/// Reads a JSON config document into cfg (missing keys keep their values).
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

/// Resolves input paths (directories expand to their log files).
std::vector<std::filesystem::path> resolve_inputs(const PipelineConfig& cfg);

/// Loads all inputs; parse failures go to `out` as warnings. Throws DataError
/// if every file fails.
telemetry::Dataset load_inputs(const PipelineConfig& cfg, std::ostream& out);

// Each command returns a process exit code and writes its outputs under
// cfg.out_dir (and a human summary to `out`).
int cmd_ingest(const PipelineConfig& cfg, std::ostream& out);
int cmd_validate(const PipelineConfig& cfg, std::ostream& out);
int cmd_metrics(const PipelineConfig& cfg, std::ostream& out);
int cmd_rate(const PipelineConfig& cfg, std::ostream& out);
int cmd_features(const PipelineConfig& cfg, std::ostream& out);
int cmd_train(const PipelineConfig& cfg, std::ostream& out);
int cmd_curve(const PipelineConfig& cfg, std::ostream& out);
int cmd_synth(const PipelineConfig& cfg, std::ostream& out);
int cmd_report(const PipelineConfig& cfg, std::ostream& out);

} // namespace skillcap::cli
