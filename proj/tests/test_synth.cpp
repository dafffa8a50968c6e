#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "skillcap/features.hpp"
#include "skillcap/metrics.hpp"
#include "skillcap/stats.hpp"
#include "skillcap/synth.hpp"

using namespace skillcap;
using namespace skillcap::synth;
using telemetry::ButtonState;
using telemetry::KeyPress;

namespace {

SynthConfig small_config(std::uint64_t seed = 17) {
    SynthConfig cfg;
    cfg.players_per_archetype = 2;
    cfg.games_per_player = 3;
    cfg.game_duration_s = 30.0;
    cfg.master_seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("generate_dataset: deterministic and byte-identical per seed") {
    const auto cfg = small_config();
    const auto a = generate_dataset(cfg);
    const auto b = generate_dataset(cfg);
    REQUIRE(a.games.size() == b.games.size());
    REQUIRE(a.games.size() == 24);
    for (std::size_t i = 0; i < a.games.size(); ++i) {
        CHECK(a.games[i] == b.games[i]);
        CHECK(telemetry::serialize_game_log(a.games[i]) ==
              telemetry::serialize_game_log(b.games[i]));
    }
    auto other_cfg = cfg;
    other_cfg.master_seed = 18;
    const auto c = generate_dataset(other_cfg);
    CHECK(c.games[0].events.size() != a.games[0].events.size());
}

TEST_CASE("for_each_game streams the exact dataset games") {
    const auto cfg = small_config(5);
    const auto data = generate_dataset(cfg);
    std::size_t i = 0;
    for_each_game(cfg, [&](telemetry::GameLog&& log) {
        REQUIRE(i < data.games.size());
        CHECK(log == data.games[i]);
        ++i;
    });
    CHECK(i == data.games.size());
}

TEST_CASE("every generated log validates cleanly and round-trips") {
    const auto data = generate_dataset(small_config(7));
    for (const auto& log : data.games) {
        const auto report = telemetry::validate(log);
        CHECK(!telemetry::has_errors(report));
        const auto text = telemetry::serialize_game_log(log);
        CHECK(telemetry::parse_game_log(text) == log);
    }
}

TEST_CASE("generated timestamps stay inside the game window") {
    auto cfg = small_config(9);
    cfg.game_duration_s = 20.0;
    for_each_game(cfg, [&](telemetry::GameLog&& log) {
        for (const auto& e : log.events) {
            CHECK(e.t_ms >= 0);
            CHECK(e.t_ms <= 20'000);
        }
    });
}

TEST_CASE("zero key-press archetype emits no utility-key events") {
    Archetype quiet = default_archetypes()[0];
    quiet.press_rate_hz = 0.0;
    quiet.movement_switch_hz = 0.0;
    const auto log = generate_game_log(quiet, "wet", {40, 50}, 30.0, 42);
    for (const auto& e : log.events)
        CHECK(!std::holds_alternative<KeyPress>(e.body));
}

TEST_CASE("press/release pairing is stack-disciplined per key") {
    const auto data = generate_dataset(small_config(11));
    for (const auto& log : data.games) {
        std::map<std::int32_t, int> depth;
        for (const auto& e : log.events) {
            const auto* k = std::get_if<KeyPress>(&e.body);
            if (!k) continue;
            if (k->state == ButtonState::pressed) {
                CHECK(depth[k->key_id] == 0); // no double-press of a held key
                depth[k->key_id]++;
            } else {
                CHECK(depth[k->key_id] == 1);
                depth[k->key_id]--;
            }
        }
        for (const auto& [key, d] : depth) CHECK(d == 0);
    }
}

TEST_CASE("expert outscores novice across enough games") {
    SynthConfig cfg;
    cfg.players_per_archetype = 3;
    cfg.games_per_player = 8; // 24 games per archetype
    cfg.game_duration_s = 30.0;
    cfg.master_seed = 13;
    const auto data = generate_dataset(cfg);

    std::map<int, std::vector<double>> scores_by_archetype;
    for (const auto& g : data.games)
        scores_by_archetype[archetype_of_player(cfg, g.meta.player_id)].push_back(
            static_cast<double>(g.meta.scoreboard.at(0).points));
    double novice_mean = 0, expert_mean = 0;
    for (double s : scores_by_archetype.at(0)) novice_mean += s;
    for (double s : scores_by_archetype.at(3)) expert_mean += s;
    novice_mean /= static_cast<double>(scores_by_archetype.at(0).size());
    expert_mean /= static_cast<double>(scores_by_archetype.at(3).size());
    CHECK(expert_mean > novice_mean);
}

TEST_CASE("mean simultaneous keys increases with archetype rank") {
    // one-sided Mann-Whitney on the per-game feature between adjacent ranks
    SynthConfig cfg;
    cfg.players_per_archetype = 4;
    cfg.games_per_player = 13; // 52 games per archetype
    cfg.game_duration_s = 20.0;
    cfg.master_seed = 21;

    std::map<int, std::vector<double>> feature_by_rank;
    for_each_game(cfg, [&](telemetry::GameLog&& log) {
        const auto ch = features::build_channels(log, cfg.game_duration_s);
        feature_by_rank[archetype_of_player(cfg, log.meta.player_id)].push_back(
            ch.mean_simul_movement_keys);
    });
    for (int rank = 0; rank < 3; ++rank) {
        CAPTURE(rank);
        const auto res = stats::mann_whitney_u(feature_by_rank.at(rank + 1),
                                               feature_by_rank.at(rank),
                                               stats::Direction::greater);
        CHECK(res.p_value < 0.01);
    }
}

TEST_CASE("labels cover every player") {
    const auto cfg = small_config(23);
    const auto data = generate_dataset(cfg);
    CHECK(data.players.size() == 8);
    for (const auto& g : data.games) CHECK(data.players.contains(g.meta.player_id));
}

TEST_CASE("performance metrics are computable on generated games") {
    const auto data = generate_dataset(small_config(29));
    for (const auto& log : data.games) {
        const auto perf = metrics::game_performance(log);
        CHECK(perf.rank >= 1);
        CHECK(perf.rank <= 5);
        REQUIRE(perf.deaths.has_value());
        REQUIRE(perf.kdr.has_value());
        REQUIRE(perf.accuracy.has_value());
        CHECK(*perf.accuracy >= 0.0);
        CHECK(*perf.accuracy <= 1.0);
    }
}
