#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skillcap/pipeline.hpp"

using skillcap::cli::PipelineConfig;

namespace {

struct CommonOptions {
    CLI::Option* inputs = nullptr;
    CLI::Option* config = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* windows = nullptr;
    CLI::Option* group = nullptr;
    CLI::Option* task = nullptr;
    CLI::Option* folds = nullptr;
    CLI::Option* fold_mode = nullptr;
    CLI::Option* select_study = nullptr;
};

struct Flags {
    std::vector<std::string> inputs;
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::vector<double> windows;
    std::string group;
    std::string task;
    int folds = 5;
    std::string fold_mode;
    bool select_study = false;
    // synth sizing
    int players_per_archetype = 0;
    int games_per_player = 0;
    double duration_s = 0.0;
    int bots_per_game = 0;
};

CommonOptions add_common(CLI::App* sub, Flags& flags, bool with_inputs) {
    CommonOptions opts;
    if (with_inputs)
        opts.inputs = sub->add_option("inputs", flags.inputs,
                                      "log files or directories of *.json logs");
    opts.config = sub->add_option("--config", flags.config, "JSON config file");
    opts.out = sub->add_option("--out", flags.out, "output directory (default: out)");
    opts.seed = sub->add_option("--seed", flags.seed, "master random seed");
    opts.windows =
        sub->add_option("--windows", flags.windows, "window lengths in seconds, ascending");
    opts.group = sub->add_option("--group", flags.group,
                                 "feature group filter, e.g. hardware:Keyboard");
    opts.task = sub->add_option("--task", flags.task,
                                "prediction task: groups4|binary_novice|regress_sbar");
    opts.folds = sub->add_option("--folds", flags.folds, "cross-validation folds");
    opts.fold_mode =
        sub->add_option("--fold-mode", flags.fold_mode, "fold construction: game|player");
    opts.select_study = sub->add_flag("--select-study", flags.select_study,
                                      "apply the 8-game minimum / first-16-games filter");
    return opts;
}

PipelineConfig build_config(const Flags& flags, const CommonOptions& opts) {
    PipelineConfig cfg;
    if (opts.config && opts.config->count() > 0)
        skillcap::cli::apply_config_file(cfg, flags.config);
    // flags win over the config file
    if (opts.inputs && opts.inputs->count() > 0) cfg.inputs = flags.inputs;
    if (opts.out->count() > 0) cfg.out_dir = flags.out;
    if (opts.seed->count() > 0) cfg.seed = flags.seed;
    if (opts.windows->count() > 0) cfg.windows = flags.windows;
    if (opts.group->count() > 0)
        cfg.group_filter = skillcap::features::parse_group_spec(flags.group);
    if (opts.task->count() > 0) {
        if (flags.task == "groups4") cfg.task = skillcap::forest::PredictionTask::groups4;
        else if (flags.task == "binary_novice")
            cfg.task = skillcap::forest::PredictionTask::binary_novice;
        else if (flags.task == "regress_sbar")
            cfg.task = skillcap::forest::PredictionTask::regress_sbar;
        else throw CLI::ValidationError("--task", "unknown task " + flags.task);
    }
    if (opts.folds->count() > 0) cfg.folds = flags.folds;
    if (opts.fold_mode->count() > 0) {
        if (flags.fold_mode == "game") cfg.fold_mode = skillcap::forest::FoldMode::game;
        else if (flags.fold_mode == "player")
            cfg.fold_mode = skillcap::forest::FoldMode::player;
        else throw CLI::ValidationError("--fold-mode", "expected game or player");
    }
    if (opts.select_study->count() > 0) cfg.select_study = flags.select_study;
    if (flags.players_per_archetype > 0)
        cfg.synth_config.players_per_archetype = flags.players_per_archetype;
    if (flags.games_per_player > 0)
        cfg.synth_config.games_per_player = flags.games_per_player;
    if (flags.duration_s > 0) cfg.synth_config.game_duration_s = flags.duration_s;
    if (flags.bots_per_game > 0) cfg.synth_config.bots_per_game = flags.bots_per_game;
    if (!std::is_sorted(cfg.windows.begin(), cfg.windows.end()))
        throw CLI::ValidationError("--windows", "must be ascending");
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"skillcap: skill metrics, TrueSkill calibration, input features and "
                 "skill prediction from FPS game logs"};
    app.require_subcommand(1);
    Flags flags;

    struct Command {
        const char* name;
        const char* help;
        bool with_inputs;
        int (*run)(const PipelineConfig&, std::ostream&);
    };
    const Command commands[] = {
        {"ingest", "parse logs and print dataset counts", true, skillcap::cli::cmd_ingest},
        {"validate", "check logs against the schema invariants", true,
         skillcap::cli::cmd_validate},
        {"metrics", "per-game and per-player skill metrics with correlations", true,
         skillcap::cli::cmd_metrics},
        {"rate", "bot-range calibration and player TrueSkill estimates", true,
         skillcap::cli::cmd_rate},
        {"features", "input-feature matrix and correlation-to-skill report", true,
         skillcap::cli::cmd_features},
        {"train", "train and cross-validate a skill prediction model", true,
         skillcap::cli::cmd_train},
        {"curve", "prediction quality as a function of the observation window", true,
         skillcap::cli::cmd_curve},
        {"synth", "generate a synthetic dataset of game logs", false,
         skillcap::cli::cmd_synth},
        {"report", "ingest + metrics + rate + features in one pass", true,
         skillcap::cli::cmd_report},
    };

    std::vector<std::pair<const Command*, CommonOptions>> wired;
    for (const auto& command : commands) {
        auto* sub = app.add_subcommand(command.name, command.help);
        auto opts = add_common(sub, flags, command.with_inputs);
        if (std::string(command.name) == "synth") {
            sub->add_option("--players-per-archetype", flags.players_per_archetype,
                            "synthetic players per archetype");
            sub->add_option("--games-per-player", flags.games_per_player,
                            "games generated per player");
            sub->add_option("--duration", flags.duration_s, "game length in seconds");
            sub->add_option("--bots", flags.bots_per_game, "bots per game");
        }
        wired.emplace_back(&command, opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : skillcap::cli::exit_usage;
    }

    try {
        for (const auto& [command, opts] : wired) {
            if (app.got_subcommand(command->name)) {
                const PipelineConfig cfg = build_config(flags, opts);
                return command->run(cfg, std::cout);
            }
        }
        std::cerr << "no subcommand given\n";
        return skillcap::cli::exit_usage;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return skillcap::cli::exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return skillcap::cli::exit_usage;
    } catch (const skillcap::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return skillcap::cli::exit_numeric;
    } catch (const std::exception& e) {
        // parse, schema, and data errors all indicate bad input data
        std::cerr << "error: " << e.what() << "\n";
        return skillcap::cli::exit_data;
    }
}
