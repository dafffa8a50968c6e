#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "skillcap/pipeline.hpp"
#include "skillcap/stats.hpp"

using namespace skillcap;
using namespace skillcap::cli;

namespace {

std::filesystem::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("skillcap_" + tag + "_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// small synthetic dataset on disk, shared by the command tests
struct DiskDataset {
    std::filesystem::path dir;
    PipelineConfig synth_cfg;

    DiskDataset() {
        dir = fresh_dir("data");
        synth_cfg.out_dir = dir;
        synth_cfg.seed = 77;
        synth_cfg.synth_config.players_per_archetype = 2;
        synth_cfg.synth_config.games_per_player = 4;
        synth_cfg.synth_config.game_duration_s = 30.0;
        std::ostringstream sink;
        REQUIRE(cmd_synth(synth_cfg, sink) == exit_ok);
    }

    PipelineConfig reader_config(const std::string& tag) const {
        PipelineConfig cfg;
        cfg.inputs = {dir.string()};
        cfg.out_dir = fresh_dir(tag);
        cfg.seed = 5;
        return cfg;
    }
};

const DiskDataset& disk_dataset() {
    static const DiskDataset instance;
    return instance;
}

} // namespace

TEST_CASE("cmd_synth writes logs, players.json, and a config echo") {
    const auto& ds = disk_dataset();
    const auto files = telemetry::find_log_files(ds.dir);
    CHECK(files.size() == 32); // 4 archetypes x 2 players x 4 games
    CHECK(std::filesystem::exists(ds.dir / "players.json"));
    CHECK(std::filesystem::exists(ds.dir / "config.json"));
}

TEST_CASE("cmd_synth is byte-identical for the same seed") {
    PipelineConfig a = disk_dataset().synth_cfg;
    a.out_dir = fresh_dir("synth_a");
    PipelineConfig b = disk_dataset().synth_cfg;
    b.out_dir = fresh_dir("synth_b");
    std::ostringstream sink;
    REQUIRE(cmd_synth(a, sink) == exit_ok);
    REQUIRE(cmd_synth(b, sink) == exit_ok);
    const auto fa = telemetry::find_log_files(a.out_dir);
    const auto fb = telemetry::find_log_files(b.out_dir);
    REQUIRE(fa.size() == fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) CHECK(slurp(fa[i]) == slurp(fb[i]));
}

TEST_CASE("cmd_ingest: counts match a hand tally; empty dir errors") {
    const auto& ds = disk_dataset();
    auto cfg = ds.reader_config("ingest");
    std::ostringstream out;
    REQUIRE(cmd_ingest(cfg, out) == exit_ok);

    // hand tally from the log files themselves
    std::map<std::string, int> by_map;
    std::set<std::int64_t> players;
    for (const auto& file : telemetry::find_log_files(ds.dir)) {
        const auto log = telemetry::parse_game_log(slurp(file));
        by_map[log.meta.map_name]++;
        players.insert(log.meta.player_id);
    }
    const auto summary =
        nlohmann::json::parse(slurp(cfg.out_dir / "ingest_summary.json"));
    CHECK(summary.at("games").get<int>() == 32);
    CHECK(summary.at("players").get<std::size_t>() == players.size());
    for (const auto& [map, count] : by_map)
        CHECK(summary.at("maps").at(map).get<int>() == count);

    PipelineConfig empty;
    empty.inputs = {fresh_dir("empty").string()};
    std::ostringstream sink;
    CHECK_THROWS_AS(cmd_ingest(empty, sink), DataError);
}

TEST_CASE("cmd_ingest warns on duplicate game ids") {
    const auto& ds = disk_dataset();
    const auto dup_dir = fresh_dir("dup");
    int i = 0;
    for (const auto& file : telemetry::find_log_files(ds.dir)) {
        auto log = telemetry::parse_game_log(slurp(file));
        log.meta.game_id = 42; // force duplicates
        std::ofstream(dup_dir / ("g" + std::to_string(i++) + ".json"))
            << telemetry::serialize_game_log(log);
        if (i >= 3) break;
    }
    PipelineConfig cfg;
    cfg.inputs = {dup_dir.string()};
    cfg.out_dir = fresh_dir("dup_out");
    std::ostringstream out;
    REQUIRE(cmd_ingest(cfg, out) == exit_ok);
    CHECK(out.str().find("duplicate game_id") != std::string::npos);
}

TEST_CASE("cmd_metrics: rows match direct module calls; matrix symmetric") {
    const auto& ds = disk_dataset();
    auto cfg = ds.reader_config("metrics");
    std::ostringstream out;
    REQUIRE(cmd_metrics(cfg, out) == exit_ok);

    const auto csv = slurp(cfg.out_dir / "player_metrics.csv");
    std::istringstream lines(csv);
    std::string header, line;
    std::getline(lines, header);
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 8); // 4 archetypes x 2 players

    // spot-check one player's s_bar against direct computation
    std::ostringstream sink;
    const auto data = load_inputs(cfg, sink);
    std::map<std::int64_t, std::vector<metrics::GamePerformance>> perfs;
    for (const auto& g : data.games)
        perfs[g.meta.player_id].push_back(metrics::game_performance(g));
    const auto skill = metrics::player_skill(perfs.at(1));
    std::istringstream reread(csv);
    std::getline(reread, header);
    std::getline(reread, line); // player 1 row
    std::istringstream fields(line);
    std::string cell;
    std::getline(fields, cell, ','); // player_id
    CHECK(cell == "1");
    std::getline(fields, cell, ','); // n_games
    CHECK(cell == std::to_string(skill.n_games));
    std::getline(fields, cell, ','); // mean_rank
    CHECK(std::stod(cell) == doctest::Approx(skill.mean_rank));
    std::getline(fields, cell, ','); // mean_score
    CHECK(std::stod(cell) == doctest::Approx(skill.mean_score));

    // correlation matrix is symmetric with unit diagonal
    const auto corr = slurp(cfg.out_dir / "metric_correlation.csv");
    std::istringstream corr_lines(corr);
    std::getline(corr_lines, header);
    std::vector<std::vector<std::string>> cells;
    while (std::getline(corr_lines, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        cells.push_back(row);
    }
    for (std::size_t r = 0; r < cells.size(); ++r) {
        CHECK(cells[r][r + 1] == "1");
        for (std::size_t c = 0; c < cells.size(); ++c)
            CHECK(cells[r][c + 1] == cells[c][r + 1]);
    }

    // learning curve: the last cumulative value for player 1 equals s_bar
    const auto curves = slurp(cfg.out_dir / "learning_curves.csv");
    std::istringstream curve_lines(curves);
    std::getline(curve_lines, header);
    double last_cumulative = 0.0;
    while (std::getline(curve_lines, line)) {
        if (line.rfind("1,", 0) != 0) continue;
        last_cumulative = std::stod(line.substr(line.rfind(',') + 1));
    }
    CHECK(last_cumulative == doctest::Approx(skill.mean_score));
}

TEST_CASE("cmd_metrics on a single player yields one row") {
    const auto dir = fresh_dir("single");
    PipelineConfig synth_cfg;
    synth_cfg.out_dir = dir;
    synth_cfg.seed = 3;
    synth_cfg.synth_config.players_per_archetype = 1;
    synth_cfg.synth_config.games_per_player = 3;
    synth_cfg.synth_config.game_duration_s = 20.0;
    synth_cfg.synth_config.archetypes = {synth::default_archetypes()[2]};
    std::ostringstream sink;
    REQUIRE(cmd_synth(synth_cfg, sink) == exit_ok);

    PipelineConfig cfg;
    cfg.inputs = {dir.string()};
    cfg.out_dir = fresh_dir("single_out");
    std::ostringstream out;
    REQUIRE(cmd_metrics(cfg, out) == exit_ok);
    const auto csv = slurp(cfg.out_dir / "player_metrics.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2); // header + one row
}

TEST_CASE("cmd_rate: deterministic outputs for a fixed seed") {
    const auto& ds = disk_dataset();
    auto cfg1 = ds.reader_config("rate1");
    auto cfg2 = ds.reader_config("rate2");
    std::ostringstream sink;
    REQUIRE(cmd_rate(cfg1, sink) == exit_ok);
    REQUIRE(cmd_rate(cfg2, sink) == exit_ok);
    CHECK(slurp(cfg1.out_dir / "ratings.json") == slurp(cfg2.out_dir / "ratings.json"));
    CHECK(slurp(cfg1.out_dir / "trueskill_trace.csv") ==
          slurp(cfg2.out_dir / "trueskill_trace.csv"));
    // re-running into the same directory overwrites bit-identically
    REQUIRE(cmd_rate(cfg1, sink) == exit_ok);
    CHECK(slurp(cfg1.out_dir / "ratings.json") == slurp(cfg2.out_dir / "ratings.json"));
}

TEST_CASE("cmd_features: sidecar carries the grouping schemes; pearson matches stats") {
    const auto& ds = disk_dataset();
    auto cfg = ds.reader_config("features");
    cfg.windows = {10.0, 30.0};
    std::ostringstream out;
    REQUIRE(cmd_features(cfg, out) == exit_ok);

    const auto sidecar =
        nlohmann::json::parse(slurp(cfg.out_dir / "feature_catalog.json"));
    CHECK(sidecar.at("count").get<int>() == 174);
    std::set<std::string> hw_names, type_names, ctx_names;
    for (const auto& f : sidecar.at("features")) {
        hw_names.insert(f.at("hardware").get<std::string>());
        type_names.insert(f.at("type").get<std::string>());
        ctx_names.insert(f.at("context").get<std::string>());
    }
    CHECK(hw_names == std::set<std::string>{"Keyboard", "Mouse", "Clicks", "Ungrouped"});
    CHECK(type_names ==
          std::set<std::string>{"EventFrequency", "Complexity", "Kinetics", "Ungrouped"});
    CHECK(ctx_names == std::set<std::string>{"ContextFree", "Dependent"});

    // recompute one feature's correlation through the stats module
    std::ostringstream sink;
    const auto data = load_inputs(cfg, sink);
    const auto matrix = features::build_feature_matrix(
        data, features::FeatureCatalog::standard(), 30.0);
    std::map<std::int64_t, std::vector<metrics::GamePerformance>> perfs;
    for (const auto& g : data.games)
        perfs[g.meta.player_id].push_back(metrics::game_performance(g));
    std::vector<double> presses, sbar;
    const auto col = static_cast<Eigen::Index>(
        std::find(matrix.names.begin(), matrix.names.end(), "kb_presses_per_s") -
        matrix.names.begin());
    for (Eigen::Index r = 0; r < matrix.X.rows(); ++r) {
        presses.push_back(matrix.X(r, col));
        sbar.push_back(
            metrics::player_skill(perfs.at(matrix.player_ids[static_cast<std::size_t>(r)]))
                .mean_score);
    }
    const double want = stats::pearson(presses, sbar).coefficient;

    const auto csv = slurp(cfg.out_dir / "feature_correlation.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line); // header
    bool found = false;
    while (std::getline(lines, line)) {
        if (line.rfind("kb_presses_per_s,", 0) == 0) {
            std::vector<std::string> cells;
            std::istringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            REQUIRE(cells.size() >= 5);
            CHECK(std::stod(cells[4]) == doctest::Approx(want).epsilon(1e-9));
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("cmd_train: one-class binary task warns and still completes") {
    const auto dir = fresh_dir("oneclass");
    PipelineConfig synth_cfg;
    synth_cfg.out_dir = dir;
    synth_cfg.seed = 9;
    synth_cfg.synth_config.players_per_archetype = 6;
    synth_cfg.synth_config.games_per_player = 2;
    synth_cfg.synth_config.game_duration_s = 15.0;
    synth_cfg.synth_config.archetypes = {synth::default_archetypes()[3]}; // experts only
    std::ostringstream sink;
    REQUIRE(cmd_synth(synth_cfg, sink) == exit_ok);

    PipelineConfig cfg;
    cfg.inputs = {dir.string()};
    cfg.out_dir = fresh_dir("oneclass_out");
    cfg.task = forest::PredictionTask::binary_novice;
    cfg.forest_params.ntree = 20;
    cfg.windows = {15.0};
    std::ostringstream out;
    REQUIRE(cmd_train(cfg, out) == exit_ok);
    const auto report = nlohmann::json::parse(slurp(cfg.out_dir / "eval_report.json"));
    CHECK(!report.at("warnings").empty());
    CHECK(report.at("mean_metric").get<double>() == 1.0); // constant, correct everywhere
}

TEST_CASE("cmd_curve writes one row per window") {
    const auto& ds = disk_dataset();
    auto cfg = ds.reader_config("curve");
    cfg.windows = {5.0, 15.0, 30.0};
    cfg.task = forest::PredictionTask::regress_sbar;
    cfg.forest_params.ntree = 20;
    std::ostringstream out;
    REQUIRE(cmd_curve(cfg, out) == exit_ok);
    const auto csv = slurp(cfg.out_dir / "curve.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4); // header + 3 windows
}

TEST_CASE("config file applies and flags win") {
    const auto dir = fresh_dir("config");
    const auto config_path = dir / "pipeline.json";
    std::ofstream(config_path) << R"({
        "seed": 123,
        "windows": [1, 2, 3],
        "folds": 4,
        "fold_mode": "player",
        "group": "hardware:Mouse",
        "task": "regress_sbar",
        "trueskill": {"beta": 5.0},
        "forest": {"ntree": 42}
    })";
    PipelineConfig cfg;
    apply_config_file(cfg, config_path);
    CHECK(cfg.seed == 123);
    CHECK(cfg.windows == std::vector<double>{1, 2, 3});
    CHECK(cfg.folds == 4);
    CHECK(cfg.fold_mode == forest::FoldMode::player);
    REQUIRE(cfg.group_filter.has_value());
    CHECK(cfg.group_filter->second == "Mouse");
    CHECK(cfg.task == forest::PredictionTask::regress_sbar);
    CHECK(cfg.trueskill.beta == 5.0);
    CHECK(cfg.forest_params.ntree == 42);

    std::ofstream(config_path) << R"({"fold_mode": "sideways"})";
    PipelineConfig bad;
    CHECK_THROWS_AS(apply_config_file(bad, config_path), SchemaError);
}

#ifdef SKILLCAP_CLI_PATH
TEST_CASE("CLI binary: exit codes and end-to-end run") {
    const auto& ds = disk_dataset();
    const std::string cli = SKILLCAP_CLI_PATH;
    const auto out_dir = fresh_dir("cli_out");

    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };
    CHECK(run("") == exit_usage);                       // missing subcommand
    CHECK(run("frobnicate") == exit_usage);             // unknown subcommand
    CHECK(run("ingest " + fresh_dir("cli_empty").string()) == exit_data);
    CHECK(run("ingest " + ds.dir.string() + " --out " + out_dir.string()) == exit_ok);
    CHECK(run("metrics " + ds.dir.string() + " --out " + out_dir.string() + " --seed 4") ==
          exit_ok);
}
#endif
