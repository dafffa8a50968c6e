#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "skillcap/telemetry.hpp"

using namespace skillcap;
using namespace skillcap::telemetry;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(SKILLCAP_FIXTURES_DIR) + "/conformance/" + name);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

GameLog make_log(std::int64_t duration_ms = 180'000) {
    GameLog log;
    log.meta.game_id = 42;
    log.meta.player_id = 9;
    log.meta.client_number = 0;
    log.meta.game_number = 0;
    log.meta.map_name = "wet";
    log.meta.bot_min = 60;
    log.meta.bot_max = 70;
    log.meta.connect_ms = 0;
    log.meta.disconnect_ms = duration_ms;
    log.meta.date_time = "2013-02-26 14:40:54";
    log.meta.scoreboard[0] = {8, 3, {}};
    log.meta.scoreboard[1] = {5, 2, {}};
    return log;
}

Event key_event(std::int64_t t, std::int32_t key, ButtonState s, Action a = Action::none) {
    return {t, KeyPress{key, s, a, {}, {}}};
}

} // namespace

TEST_CASE("parse: scoreboard example from the log format") {
    const auto log = parse_game_log(read_fixture("full_events.json"));
    REQUIRE(log.meta.scoreboard.contains(0));
    CHECK(log.meta.scoreboard.at(0).points == 8);
    CHECK(log.meta.scoreboard.at(0).kills == 3);
    CHECK(log.meta.game_id == 127);
    CHECK(log.meta.map_name == "wet");
}

TEST_CASE("parse: zero events is a valid log") {
    const auto log = parse_game_log(read_fixture("minimal.json"));
    CHECK(log.events.empty());
    CHECK(!has_errors(validate(log)));
}

TEST_CASE("parse: events sorted by timestamp, stable for ties") {
    const auto log = parse_game_log(read_fixture("full_events.json"));
    REQUIRE(log.events.size() == 12);
    for (std::size_t i = 1; i < log.events.size(); ++i)
        CHECK(log.events[i - 1].t_ms <= log.events[i].t_ms);
    // the two t=2100 events keep file order: death before damage_taken
    const auto* first = std::get_if<GameEvent>(&log.events[8].body);
    const auto* second = std::get_if<GameEvent>(&log.events[9].body);
    REQUIRE(first);
    REQUIRE(second);
    CHECK(first->kind == GameKind::death);
    CHECK(second->kind == GameKind::damage_taken);
}

TEST_CASE("parse: timestamps normalized to game-relative ms") {
    const auto log = parse_game_log(read_fixture("full_events.json"));
    CHECK(log.events.front().t_ms == 500); // file t=501, connect_ms=1
}

TEST_CASE("parse: unknown event kinds preserved as GameEvent other") {
    const auto log = parse_game_log(read_fixture("full_events.json"));
    const auto* g = std::get_if<GameEvent>(&log.events[10].body);
    REQUIRE(g);
    CHECK(g->kind == GameKind::other);
    CHECK(g->raw_kind == "explosion");
    CHECK(g->attributes.at("radius") == 5);
}

TEST_CASE("parse: unknown fields preserved") {
    const auto log = parse_game_log(read_fixture("full_events.json"));
    REQUIRE(log.meta.extra.is_object());
    CHECK(log.meta.extra.at("questionnaire").at("fun") == 3);
    CHECK(log.meta.scoreboard.at(2).extra.at("team") == "omega");
    const auto* k = std::get_if<KeyPress>(&log.events.back().body);
    REQUIRE(k);
    CHECK(k->extra.at("pressure") == 0.8);
}

TEST_CASE("parse: error cases") {
    CHECK_THROWS_AS(parse_game_log(read_fixture("bad_malformed.json")), ParseError);
    try {
        parse_game_log(read_fixture("bad_malformed.json"));
    } catch (const ParseError& e) {
        CHECK(e.byte_offset() > 0);
    }
    CHECK_THROWS_AS(parse_game_log(read_fixture("bad_missing_field.json")), SchemaError);
    try {
        parse_game_log(read_fixture("bad_missing_field.json"));
    } catch (const SchemaError& e) {
        CHECK(e.field() == "map_name");
    }
    CHECK_THROWS_AS(parse_game_log(read_fixture("bad_bot_range.json")), SchemaError);
    CHECK_THROWS_AS(parse_game_log("[1,2,3]"), SchemaError);
}

TEST_CASE("parse: adapter aliases accepted") {
    const auto aliased = parse_game_log(read_fixture("aliased_keys.json"));
    const auto canonical = parse_game_log(read_fixture("minimal.json"));
    CHECK(aliased == canonical);
}

TEST_CASE("serialize: round trip parses to an equal GameLog") {
    for (const char* name : {"minimal.json", "full_events.json", "gap_warning.json",
                             "out_of_range_event.json"}) {
        CAPTURE(name);
        const auto log = parse_game_log(read_fixture(name));
        const auto text = serialize_game_log(log);
        const auto reparsed = parse_game_log(text);
        CHECK(reparsed == log);
        // canonical form is byte-stable
        CHECK(serialize_game_log(reparsed) == text);
    }
}

TEST_CASE("validate: well-formed log gives an empty report") {
    auto log = make_log(10'000);
    log.events.push_back(key_event(100, 119, ButtonState::pressed, Action::forward));
    log.events.push_back(key_event(9'000, 119, ButtonState::released, Action::forward));
    CHECK(validate(log).empty());
}

TEST_CASE("validate: 20 s silent interval yields one warning") {
    const auto log = parse_game_log(read_fixture("gap_warning.json"));
    const auto report = validate(log);
    int warns = 0;
    for (const auto& issue : report)
        if (issue.severity == ValidationIssue::Severity::warn) ++warns;
    CHECK(warns == 1);
    CHECK(!has_errors(report));
}

TEST_CASE("validate: timestamp beyond game duration is an error") {
    const auto log = parse_game_log(read_fixture("out_of_range_event.json"));
    CHECK(has_errors(validate(log)));
}

TEST_CASE("validate: structural invariants") {
    auto log = make_log();
    log.meta.bot_min = 90;
    log.meta.bot_max = 50;
    CHECK(has_errors(validate(log)));

    auto log2 = make_log();
    log2.meta.scoreboard.clear();
    CHECK(has_errors(validate(log2)));

    auto log3 = make_log();
    log3.meta.client_number = 5; // not in scoreboard
    CHECK(has_errors(validate(log3)));

    auto log4 = make_log();
    log4.meta.disconnect_ms = log4.meta.connect_ms;
    CHECK(has_errors(validate(log4)));
}

TEST_CASE("slice_window: full-window identity") {
    auto log = make_log(180'000);
    for (int i = 0; i < 50; ++i)
        log.events.push_back(key_event(i * 3'600, 10 + i % 3, ButtonState::pressed));
    const auto sliced = slice_window(log, 180.0);
    CHECK(sliced.events == log.events);
    CHECK(sliced.meta.effective_duration_s == 180.0);
}

TEST_CASE("slice_window: zero keeps only t=0 events") {
    auto log = make_log();
    log.events.push_back(key_event(0, 1, ButtonState::pressed));
    log.events.push_back(key_event(0, 2, ButtonState::pressed));
    log.events.push_back(key_event(1, 3, ButtonState::pressed));
    const auto sliced = slice_window(log, 0.0);
    CHECK(sliced.events.size() == 2);
}

TEST_CASE("slice_window: prefix monotonicity and idempotence") {
    auto log = make_log();
    for (int i = 0; i < 200; ++i)
        log.events.push_back(key_event(i * 173 % 40'000, 1, ButtonState::pressed));
    std::stable_sort(log.events.begin(), log.events.end(),
                     [](const Event& a, const Event& b) { return a.t_ms < b.t_ms; });

    const auto a = slice_window(log, 10.0);
    const auto b = slice_window(log, 30.0);
    REQUIRE(a.events.size() <= b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) CHECK(a.events[i] == b.events[i]);

    const auto aa = slice_window(a, 10.0);
    CHECK(aa.events == a.events);
    CHECK(aa.meta.effective_duration_s == a.meta.effective_duration_s);

    CHECK_THROWS_AS(slice_window(log, -1.0), std::invalid_argument);
}

TEST_CASE("select_study_games: paper-style selection") {
    Dataset data;
    auto add_games = [&](std::int64_t player, int n) {
        for (int i = 0; i < n; ++i) {
            auto log = make_log();
            log.meta.player_id = player;
            log.meta.game_id = player * 100 + i;
            log.meta.game_number = i;
            data.games.push_back(std::move(log));
        }
    };
    add_games(1, 4);  // too few: dropped entirely
    add_games(2, 22); // capped at 16
    add_games(3, 8);  // kept as-is
    data.players[1] = {};
    data.players[2] = {};
    data.players[3] = {};

    const auto out = select_study_games(std::move(data));
    int player1 = 0, player2 = 0, player3 = 0;
    for (const auto& g : out.games) {
        if (g.meta.player_id == 1) ++player1;
        if (g.meta.player_id == 2) ++player2;
        if (g.meta.player_id == 3) ++player3;
        CHECK(g.meta.game_number < 16);
    }
    CHECK(player1 == 0);
    CHECK(player2 == 16);
    CHECK(player3 == 8);
    CHECK(!out.players.contains(1));
    CHECK(out.players.contains(2));
}

TEST_CASE("select_study_games: min_games 0 and unbounded game number is identity") {
    Dataset data;
    for (int i = 0; i < 3; ++i) {
        auto log = make_log();
        log.meta.game_number = i * 10;
        data.games.push_back(std::move(log));
    }
    const auto out = select_study_games(std::move(data), 0,
                                        std::numeric_limits<int>::max());
    CHECK(out.games.size() == 3);
}

TEST_CASE("player labels: parse and re-serialize") {
    json doc = {{"26", {{"fps_played", "5-10"}, {"hours", "<2"}}},
                {"27", {{"fps_played", "Never"}}}};
    const auto players = parse_player_labels(doc);
    REQUIRE(players.size() == 2);
    CHECK(players.at(26).fps_played == FpsPlayed::five_to_ten);
    CHECK(players.at(26).hours == HoursPerWeek::under_two);
    CHECK(players.at(27).fps_played == FpsPlayed::never);
    CHECK(!players.at(27).hours.has_value());
    CHECK(parse_player_labels(player_labels_to_json(players)) == players);
}
