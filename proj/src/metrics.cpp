#include "skillcap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skillcap::metrics {

using telemetry::Action;
using telemetry::ButtonState;
using telemetry::GameEvent;
using telemetry::GameKind;
using telemetry::MouseButton;

std::string_view to_string(ScoreGroup g) {
    switch (g) {
        case ScoreGroup::novice: return "Novice";
        case ScoreGroup::intermediate: return "Intermediate";
        case ScoreGroup::skilled: return "Skilled";
        case ScoreGroup::expert: return "Expert";
    }
    return "Novice";
}

int rank_from_scoreboard(const telemetry::GameMeta& meta) {
    auto it = meta.scoreboard.find(meta.client_number);
    if (it == meta.scoreboard.end())
        throw DataError("scoreboard has no entry for client_number " +
                        std::to_string(meta.client_number));
    const std::int64_t mine = it->second.points;
    int rank = 1;
    for (const auto& [client, entry] : meta.scoreboard)
        if (entry.points > mine) ++rank;
    return rank;
}

GamePerformance game_performance(const telemetry::GameLog& log) {
    GamePerformance perf;
    perf.rank = rank_from_scoreboard(log.meta);
    const auto& entry = log.meta.scoreboard.at(log.meta.client_number);
    perf.score = entry.points;

    int death_events = 0, kill_events = 0, hits = 0, shots = 0;
    bool any_game_event = false;
    for (const auto& e : log.events) {
        if (const auto* g = std::get_if<GameEvent>(&e.body)) {
            any_game_event = true;
            switch (g->kind) {
                case GameKind::death: ++death_events; break;
                case GameKind::kill: ++kill_events; break;
                case GameKind::damage_dealt: ++hits; break;
                default: break;
            }
        } else if (const auto* b = std::get_if<MouseButton>(&e.body)) {
            if (b->state == ButtonState::pressed && b->action == Action::shoot) ++shots;
        }
    }

    std::optional<std::int64_t> kills;
    if (entry.kills) kills = *entry.kills;
    else if (any_game_event) kills = kill_events;

    if (any_game_event) perf.deaths = death_events;
    if (kills && perf.deaths)
        perf.kdr = static_cast<double>(*kills) /
                   static_cast<double>(std::max(*perf.deaths, 1));
    if (shots == 0) perf.accuracy = 0.0;
    else if (any_game_event)
        perf.accuracy = std::min(1.0, static_cast<double>(hits) / shots);
    return perf;
}

PlayerSkill player_skill(std::span<const GamePerformance> games,
                         const telemetry::PlayerLabels& labels) {
    if (games.empty())
        throw std::invalid_argument("player_skill: no games");
    PlayerSkill s;
    s.n_games = static_cast<int>(games.size());
    s.fps_played = labels.fps_played;
    s.hours = labels.hours;

    double rank_sum = 0.0, score_sum = 0.0;
    double kdr_sum = 0.0, acc_sum = 0.0, death_sum = 0.0;
    int kdr_n = 0, acc_n = 0, death_n = 0;
    for (const auto& g : games) {
        rank_sum += g.rank;
        score_sum += static_cast<double>(g.score);
        if (g.kdr) { kdr_sum += *g.kdr; ++kdr_n; }
        if (g.accuracy) { acc_sum += *g.accuracy; ++acc_n; }
        if (g.deaths) { death_sum += *g.deaths; ++death_n; }
    }
    s.mean_rank = rank_sum / s.n_games;
    s.mean_score = score_sum / s.n_games;
    if (kdr_n > 0) s.mean_kdr = kdr_sum / kdr_n;
    if (acc_n > 0) s.mean_accuracy = acc_sum / acc_n;
    if (death_n > 0) s.mean_deaths = death_sum / death_n;
    return s;
}

ScoreGroup score_group(double mean_score) {
    if (mean_score < 14.0) return ScoreGroup::novice;
    if (mean_score < 22.0) return ScoreGroup::intermediate;
    if (mean_score < 27.0) return ScoreGroup::skilled;
    return ScoreGroup::expert;
}

std::vector<double> cumulative_average(std::span<const double> series) {
    if (series.empty())
        throw std::invalid_argument("cumulative_average: empty series");
    std::vector<double> out(series.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        sum += series[i];
        out[i] = sum / static_cast<double>(i + 1);
    }
    return out;
}

double score_at_time(const telemetry::GameLog& log, double t_s) {
    const auto& entry = log.meta.scoreboard.at(log.meta.client_number);
    const double score = static_cast<double>(entry.points);
    const double duration = log.meta.duration_s();
    if (t_s >= duration) return score;

    const auto cutoff = static_cast<std::int64_t>(std::llround(t_s * 1000.0));
    int total_kills = 0, kills_by_t = 0;
    for (const auto& e : log.events) {
        if (const auto* g = std::get_if<GameEvent>(&e.body)) {
            if (g->kind == GameKind::kill) {
                ++total_kills;
                if (e.t_ms <= cutoff) ++kills_by_t;
            }
        }
    }
    if (total_kills == 0)
        return duration > 0 ? score * (t_s / duration) : score;
    return score * (static_cast<double>(kills_by_t) / total_kills);
}

} // namespace skillcap::metrics
