#include "skillcap/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "skillcap/metrics.hpp"
#include "skillcap/stats.hpp"

namespace skillcap::cli {

using telemetry::Dataset;
using telemetry::GameLog;

namespace {

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open config file: " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what(), e.byte);
    }
}

// per-player skill plus group labels used by several commands
struct PlayerTable {
    std::map<std::int64_t, metrics::PlayerSkill> skill;
    std::map<std::int64_t, metrics::ScoreGroup> group;
    std::map<std::int64_t, std::vector<metrics::GamePerformance>> perfs;
};

PlayerTable player_table(const Dataset& data) {
    PlayerTable table;
    for (const auto& g : data.games)
        table.perfs[g.meta.player_id].push_back(metrics::game_performance(g));
    for (const auto& [pid, perfs] : table.perfs) {
        telemetry::PlayerLabels labels;
        if (const auto it = data.players.find(pid); it != data.players.end())
            labels = it->second;
        table.skill[pid] = metrics::player_skill(perfs, labels);
        table.group[pid] = metrics::score_group(table.skill[pid].mean_score);
    }
    return table;
}

int ordinal(telemetry::FpsPlayed f) { return static_cast<int>(f); }
int ordinal(telemetry::HoursPerWeek h) { return static_cast<int>(h); }

forest::PredictionTask task_from_string(const std::string& s) {
    if (s == "groups4") return forest::PredictionTask::groups4;
    if (s == "binary_novice") return forest::PredictionTask::binary_novice;
    if (s == "regress_sbar") return forest::PredictionTask::regress_sbar;
    throw std::invalid_argument("unknown task: " + s +
                                " (expected groups4|binary_novice|regress_sbar)");
}

// labels/targets for the prediction tasks
struct Targets {
    std::vector<int> y_class;
    Eigen::VectorXd y_real;
    std::vector<std::int64_t> player_ids;
    std::vector<std::string> class_names;
    forest::Task forest_task = forest::Task::classification;
};

Targets make_targets(const Dataset& data, const PlayerTable& table,
                     forest::PredictionTask task) {
    Targets t;
    const auto n = data.games.size();
    t.y_class.resize(n, 0);
    t.y_real.resize(static_cast<Eigen::Index>(n));
    if (task == forest::PredictionTask::groups4)
        t.class_names = {"Novice", "Intermediate", "Skilled", "Expert"};
    else if (task == forest::PredictionTask::binary_novice)
        t.class_names = {"Novice", "Experienced"};
    t.forest_task = task == forest::PredictionTask::regress_sbar
                        ? forest::Task::regression
                        : forest::Task::classification;
    for (std::size_t i = 0; i < n; ++i) {
        const auto pid = data.games[i].meta.player_id;
        t.player_ids.push_back(pid);
        t.y_real(static_cast<Eigen::Index>(i)) = table.skill.at(pid).mean_score;
        const auto group = table.group.at(pid);
        t.y_class[i] = task == forest::PredictionTask::binary_novice
                           ? (group == metrics::ScoreGroup::novice ? 0 : 1)
                           : static_cast<int>(group);
    }
    return t;
}

} // namespace

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
    const auto doc = read_json_file(path);
    if (!doc.is_object()) throw SchemaError("config root must be an object", "(config)");
    if (doc.contains("inputs")) cfg.inputs = doc["inputs"].get<std::vector<std::string>>();
    if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("windows")) cfg.windows = doc["windows"].get<std::vector<double>>();
    if (doc.contains("folds")) cfg.folds = doc["folds"].get<int>();
    if (doc.contains("fold_mode")) {
        const auto mode = doc["fold_mode"].get<std::string>();
        if (mode == "game") cfg.fold_mode = forest::FoldMode::game;
        else if (mode == "player") cfg.fold_mode = forest::FoldMode::player;
        else throw SchemaError("fold_mode must be game or player", "fold_mode");
    }
    if (doc.contains("group"))
        cfg.group_filter = features::parse_group_spec(doc["group"].get<std::string>());
    if (doc.contains("task")) cfg.task = task_from_string(doc["task"].get<std::string>());
    if (doc.contains("select_study")) cfg.select_study = doc["select_study"].get<bool>();
    if (doc.contains("trueskill")) {
        const auto& ts = doc["trueskill"];
        if (ts.contains("beta")) cfg.trueskill.beta = ts["beta"].get<double>();
        if (ts.contains("eps")) cfg.trueskill.eps = ts["eps"].get<double>();
        if (ts.contains("mu0")) cfg.trueskill.mu0 = ts["mu0"].get<double>();
        if (ts.contains("sigma0")) cfg.trueskill.sigma0 = ts["sigma0"].get<double>();
        if (ts.contains("k_conservative"))
            cfg.trueskill.k_conservative = ts["k_conservative"].get<double>();
    }
    if (doc.contains("forest")) {
        const auto& f = doc["forest"];
        if (f.contains("ntree")) cfg.forest_params.ntree = f["ntree"].get<int>();
        if (f.contains("mtry")) cfg.forest_params.mtry = f["mtry"].get<int>();
        if (f.contains("min_leaf")) cfg.forest_params.min_leaf = f["min_leaf"].get<int>();
    }
    if (doc.contains("synth")) {
        const auto& s = doc["synth"];
        if (s.contains("players_per_archetype"))
            cfg.synth_config.players_per_archetype = s["players_per_archetype"].get<int>();
        if (s.contains("games_per_player"))
            cfg.synth_config.games_per_player = s["games_per_player"].get<int>();
        if (s.contains("duration_s"))
            cfg.synth_config.game_duration_s = s["duration_s"].get<double>();
        if (s.contains("bots_per_game"))
            cfg.synth_config.bots_per_game = s["bots_per_game"].get<int>();
    }
    if (!std::is_sorted(cfg.windows.begin(), cfg.windows.end()))
        throw SchemaError("windows must be sorted ascending", "windows");
}

std::vector<std::filesystem::path> resolve_inputs(const PipelineConfig& cfg) {
    std::vector<std::filesystem::path> files;
    for (const auto& input : cfg.inputs) {
        const std::filesystem::path p(input);
        if (std::filesystem::is_directory(p)) {
            const auto found = telemetry::find_log_files(p);
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

Dataset load_inputs(const PipelineConfig& cfg, std::ostream& out) {
    if (cfg.inputs.empty()) throw DataError("no inputs given");
    const auto files = resolve_inputs(cfg);
    if (files.empty()) throw DataError("no log files found under the given inputs");

    std::optional<std::filesystem::path> players_json;
    for (const auto& input : cfg.inputs) {
        const std::filesystem::path p(input);
        if (std::filesystem::is_directory(p) &&
            std::filesystem::exists(p / "players.json")) {
            players_json = p / "players.json";
            break;
        }
    }

    std::vector<telemetry::LoadIssue> issues;
    Dataset data = telemetry::load_dataset(files, players_json, &issues);
    for (const auto& issue : issues)
        out << "warning: " << issue.file.string() << ": " << issue.message << "\n";
    if (data.games.empty())
        throw DataError("all " + std::to_string(files.size()) + " input files failed to parse");
    if (cfg.select_study) data = telemetry::select_study_games(std::move(data));
    return data;
}

int cmd_ingest(const PipelineConfig& cfg, std::ostream& out) {
    const Dataset data = load_inputs(cfg, out);

    std::map<std::string, int> by_map;
    std::map<std::string, int> by_range;
    std::set<std::int64_t> players;
    std::set<std::int64_t> game_ids;
    int duplicate_ids = 0;
    for (const auto& g : data.games) {
        by_map[g.meta.map_name]++;
        by_range[std::to_string(g.meta.bot_min) + "-" + std::to_string(g.meta.bot_max)]++;
        players.insert(g.meta.player_id);
        if (!game_ids.insert(g.meta.game_id).second) ++duplicate_ids;
    }
    if (duplicate_ids > 0)
        out << "warning: " << duplicate_ids << " duplicate game_id value(s)\n";

    out << "games: " << data.games.size() << "\n";
    out << "players: " << players.size() << "\n";
    out << "maps:\n";
    for (const auto& [map, count] : by_map) out << "  " << map << ": " << count << "\n";
    out << "bot ranges:\n";
    for (const auto& [range, count] : by_range)
        out << "  " << range << ": " << count << "\n";

    nlohmann::json summary{{"games", data.games.size()},
                           {"players", players.size()},
                           {"maps", by_map},
                           {"bot_ranges", by_range},
                           {"duplicate_game_ids", duplicate_ids}};
    exports::write_text_file(cfg.out_dir / "ingest_summary.json", summary.dump(2) + "\n");
    return exit_ok;
}

int cmd_validate(const PipelineConfig& cfg, std::ostream& out) {
    if (cfg.inputs.empty()) throw DataError("no inputs given");
    const auto files = resolve_inputs(cfg);
    if (files.empty()) throw DataError("no log files found under the given inputs");

    int files_with_errors = 0;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            const auto log = telemetry::parse_game_log(buf.str());
            const auto report = telemetry::validate(log);
            for (const auto& issue : report)
                out << file.filename().string() << ": "
                    << (issue.severity == telemetry::ValidationIssue::Severity::error
                            ? "error: "
                            : "warn: ")
                    << issue.message << "\n";
            if (telemetry::has_errors(report)) ++files_with_errors;
        } catch (const std::exception& e) {
            out << file.filename().string() << ": error: " << e.what() << "\n";
            ++files_with_errors;
        }
    }
    out << "checked " << files.size() << " file(s), " << files_with_errors
        << " with errors\n";
    return files_with_errors == 0 ? exit_ok : exit_data;
}

namespace {

struct RatedPlayers {
    std::map<rating::BotRange, rating::Rating> bots;
    std::map<std::int64_t, rating::Rating> players;
    std::vector<rating::RatingTrace> trace;
};

RatedPlayers run_rating(const Dataset& data, const PipelineConfig& cfg) {
    RatedPlayers rated;
    rated.bots = rating::calibrate_bot_ranges(data, cfg.trueskill, cfg.seed);
    rated.players = rating::rate_players(data, rated.bots, cfg.trueskill, &rated.trace);
    return rated;
}

stats::CorrelationMatrix skill_metric_matrix(const PlayerTable& table,
                                             const std::map<std::int64_t, rating::Rating>& ratings,
                                             double k_conservative) {
    std::vector<double> sbar, rbar, kbar, abar, tvals, dbar;
    std::vector<double> fvals, hvals;
    bool all_f = true, all_h = true, all_k = true, all_a = true, all_d = true;
    for (const auto& [pid, skill] : table.skill) {
        sbar.push_back(skill.mean_score);
        rbar.push_back(skill.mean_rank);
        tvals.push_back(
            rating::conservative_estimate(ratings.at(pid), k_conservative));
        if (skill.mean_kdr) kbar.push_back(*skill.mean_kdr);
        else all_k = false;
        if (skill.mean_accuracy) abar.push_back(*skill.mean_accuracy);
        else all_a = false;
        if (skill.mean_deaths) dbar.push_back(*skill.mean_deaths);
        else all_d = false;
        if (skill.fps_played) fvals.push_back(ordinal(*skill.fps_played));
        else all_f = false;
        if (skill.hours) hvals.push_back(ordinal(*skill.hours));
        else all_h = false;
    }
    std::vector<std::pair<std::string, std::vector<double>>> metrics_list;
    metrics_list.push_back({"s_bar", sbar});
    metrics_list.push_back({"r_bar", rbar});
    if (all_k) metrics_list.push_back({"k_bar", kbar});
    if (all_a) metrics_list.push_back({"a_bar", abar});
    metrics_list.push_back({"T", tvals});
    if (all_d) metrics_list.push_back({"d_bar", dbar});
    if (all_f) metrics_list.push_back({"f", fvals});
    if (all_h) metrics_list.push_back({"h", hvals});
    return stats::correlation_matrix(metrics_list);
}

} // namespace

int cmd_metrics(const PipelineConfig& cfg, std::ostream& out) {
    const Dataset data = load_inputs(cfg, out);
    const auto table = player_table(data);
    const auto rated = run_rating(data, cfg);

    std::vector<exports::GameMetricsRow> game_rows;
    for (const auto& g : data.games)
        game_rows.push_back({g.meta.game_id, g.meta.player_id, g.meta.game_number,
                             g.meta.map_name, g.meta.bot_min, g.meta.bot_max,
                             metrics::game_performance(g)});
    std::vector<exports::PlayerMetricsRow> player_rows;
    for (const auto& [pid, skill] : table.skill) {
        exports::PlayerMetricsRow row;
        row.player_id = pid;
        row.skill = skill;
        row.group = table.group.at(pid);
        const auto& r = rated.players.at(pid);
        row.trueskill_mu = r.mu;
        row.trueskill_sigma = r.sigma;
        row.trueskill_t =
            rating::conservative_estimate(r, cfg.trueskill.k_conservative);
        player_rows.push_back(row);
    }

    const auto matrix =
        skill_metric_matrix(table, rated.players, cfg.trueskill.k_conservative);

    exports::write_game_metrics_csv(cfg.out_dir / "game_metrics.csv", game_rows);
    exports::write_player_metrics_csv(cfg.out_dir / "player_metrics.csv", player_rows);
    exports::write_correlation_csv(cfg.out_dir / "metric_correlation.csv", matrix);

    // cumulative average score over successive games, per player
    {
        std::map<std::int64_t, std::vector<std::pair<int, double>>> series;
        for (const auto& g : data.games)
            series[g.meta.player_id].push_back(
                {g.meta.game_number,
                 static_cast<double>(g.meta.scoreboard.at(g.meta.client_number).points)});
        std::ostringstream curve;
        curve << "player_id,game_number,score,cumulative_mean_score\n";
        for (auto& [pid, games] : series) {
            std::sort(games.begin(), games.end());
            std::vector<double> scores;
            for (const auto& [num, s] : games) scores.push_back(s);
            const auto cumulative = metrics::cumulative_average(scores);
            for (std::size_t i = 0; i < games.size(); ++i)
                curve << pid << ',' << games[i].first << ','
                      << exports::format_double(games[i].second) << ','
                      << exports::format_double(cumulative[i]) << '\n';
        }
        exports::write_text_file(cfg.out_dir / "learning_curves.csv", curve.str());
    }

    out << "players: " << player_rows.size() << ", games: " << game_rows.size() << "\n";
    for (const auto& row : player_rows)
        out << "  player " << row.player_id << ": s_bar="
            << exports::format_double(row.skill.mean_score)
            << " group=" << metrics::to_string(row.group)
            << " T=" << exports::format_double(*row.trueskill_t) << "\n";
    return exit_ok;
}

int cmd_rate(const PipelineConfig& cfg, std::ostream& out) {
    const Dataset data = load_inputs(cfg, out);
    const auto rated = run_rating(data, cfg);
    exports::write_ratings_json(cfg.out_dir / "ratings.json", rated.bots, rated.players,
                                cfg.trueskill.k_conservative);
    exports::write_rating_trace_csv(cfg.out_dir / "trueskill_trace.csv", rated.trace,
                                    cfg.trueskill.k_conservative);
    out << "bot ranges:\n";
    for (const auto& [range, r] : rated.bots)
        out << "  " << range.first << "-" << range.second
            << ": mu=" << exports::format_double(r.mu)
            << " sigma=" << exports::format_double(r.sigma) << "\n";
    out << "players rated: " << rated.players.size() << "\n";
    return exit_ok;
}

int cmd_features(const PipelineConfig& cfg, std::ostream& out) {
    const Dataset data = load_inputs(cfg, out);
    const auto& cat = features::FeatureCatalog::standard();
    const auto table = player_table(data);

    std::vector<features::FeatureMatrix> matrices;
    for (double t : cfg.windows)
        matrices.push_back(features::build_feature_matrix(data, cat, t, cfg.group_filter));

    exports::write_feature_matrix_csv(cfg.out_dir / "features.csv", matrices);
    exports::write_catalog_json(cfg.out_dir / "feature_catalog.json", cat);

    // per-feature Pearson against player score, on the widest window
    const auto& full = matrices.back();
    std::vector<double> sbar;
    for (const auto pid : full.player_ids) sbar.push_back(table.skill.at(pid).mean_score);
    std::vector<exports::FeatureCorrelationRow> rows;
    std::map<std::string, int> strong_by_hw;
    for (std::size_t c = 0; c < full.names.size(); ++c) {
        exports::FeatureCorrelationRow row;
        row.name = full.names[c];
        row.groups = cat.find(row.name)->groups;
        std::vector<double> values(static_cast<std::size_t>(full.X.rows()));
        for (Eigen::Index r = 0; r < full.X.rows(); ++r)
            values[static_cast<std::size_t>(r)] = full.X(r, static_cast<Eigen::Index>(c));
        try {
            row.pearson_r = stats::pearson(values, sbar).coefficient;
            row.defined = true;
            if (std::abs(row.pearson_r) >= stats::kStrongCorrelation)
                strong_by_hw[std::string(features::to_string(row.groups.hardware))]++;
        } catch (const std::exception&) {
            row.defined = false;
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) {
                         return std::abs(a.pearson_r) > std::abs(b.pearson_r);
                     });
    exports::write_feature_correlation_csv(cfg.out_dir / "feature_correlation.csv", rows);

    out << "feature rows: " << matrices.size() * data.games.size() << " ("
        << data.games.size() << " games x " << matrices.size() << " windows), columns: "
        << full.names.size() << "\n";
    out << "strongly correlated to s_bar (|r| >= "
        << exports::format_double(stats::kStrongCorrelation) << "):\n";
    for (const auto& [hw, count] : strong_by_hw) out << "  " << hw << ": " << count << "\n";
    return exit_ok;
}

int cmd_train(const PipelineConfig& cfg, std::ostream& out) {
    const Dataset data = load_inputs(cfg, out);
    const auto& cat = features::FeatureCatalog::standard();
    const auto table = player_table(data);
    const auto targets = make_targets(data, table, cfg.task);

    const double full_window = cfg.windows.empty() ? 180.0 : cfg.windows.back();
    const auto matrix =
        features::build_feature_matrix(data, cat, full_window, cfg.group_filter);
    const auto report = forest::cross_validate(
        matrix.X, targets.y_class, targets.y_real, targets.forest_task, cfg.forest_params,
        cfg.folds, cfg.fold_mode, cfg.seed, targets.player_ids, targets.class_names,
        matrix.names);

    exports::write_eval_report_json(cfg.out_dir / "eval_report.json", report);
    if (targets.forest_task == forest::Task::classification)
        exports::write_confusion_csv(cfg.out_dir / "confusion.csv", report);

    for (const auto& warning : report.warnings) out << "warning: " << warning << "\n";
    out << (targets.forest_task == forest::Task::classification ? "accuracy" : "rho")
        << " mean=" << exports::format_double(report.mean_metric)
        << " pooled=" << exports::format_double(report.pooled_metric) << "\n";

    if (cfg.windows.size() > 1) return cmd_curve(cfg, out);
    return exit_ok;
}

int cmd_curve(const PipelineConfig& cfg, std::ostream& out) {
    const Dataset data = load_inputs(cfg, out);
    const auto& cat = features::FeatureCatalog::standard();
    const auto curve =
        forest::windowed_evaluation(data, cat, cfg.windows, cfg.task, cfg.forest_params,
                                    cfg.folds, cfg.fold_mode, cfg.seed, cfg.group_filter);
    exports::write_curve_csv(cfg.out_dir / "curve.csv", curve);
    for (const auto& p : curve.points)
        out << "t=" << exports::format_double(p.t_s)
            << " metric=" << exports::format_double(p.metric)
            << " baseline=" << exports::format_double(p.baseline) << "\n";
    return exit_ok;
}

int cmd_synth(const PipelineConfig& cfg, std::ostream& out) {
    synth::SynthConfig synth_cfg = cfg.synth_config;
    synth_cfg.master_seed = cfg.seed;
    std::filesystem::create_directories(cfg.out_dir);

    std::size_t games = 0;
    synth::for_each_game(synth_cfg, [&](GameLog&& log) {
        char name[64];
        std::snprintf(name, sizeof(name), "game_%06lld.json",
                      static_cast<long long>(log.meta.game_id));
        exports::write_text_file(cfg.out_dir / name,
                                 telemetry::serialize_game_log(log) + "\n");
        ++games;
    });
    const auto data_players = synth::generate_dataset([&] {
        synth::SynthConfig tiny = synth_cfg;
        tiny.games_per_player = 1; // only the label table is needed here
        return tiny;
    }());
    exports::write_text_file(
        cfg.out_dir / "players.json",
        telemetry::player_labels_to_json(data_players.players).dump(2) + "\n");

    nlohmann::json echo{{"players_per_archetype", synth_cfg.players_per_archetype},
                        {"games_per_player", synth_cfg.games_per_player},
                        {"duration_s", synth_cfg.game_duration_s},
                        {"bots_per_game", synth_cfg.bots_per_game},
                        {"seed", synth_cfg.master_seed},
                        {"maps", synth_cfg.map_pool}};
    exports::write_text_file(cfg.out_dir / "config.json", echo.dump(2) + "\n");
    out << "wrote " << games << " game logs to " << cfg.out_dir.string() << "\n";
    return exit_ok;
}

int cmd_report(const PipelineConfig& cfg, std::ostream& out) {
    const int a = cmd_ingest(cfg, out);
    const int b = cmd_metrics(cfg, out);
    const int c = cmd_rate(cfg, out);
    const int d = cmd_features(cfg, out);
    return std::max({a, b, c, d});
}

} // namespace skillcap::cli
