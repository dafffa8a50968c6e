#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "skillcap/telemetry.hpp"

namespace skillcap::metrics {

/// Per-game performance. kdr/accuracy/deaths are absent (not zero) when the
/// log carries no usable event channel for them.
struct GamePerformance {
    int rank = 1;            // r, 1 = winner
    std::int64_t score = 0;  // s, scoreboard points
    std::optional<double> kdr;      // k = kills / max(deaths, 1)
    std::optional<double> accuracy; // a = hits / shots, in [0, 1]
    std::optional<int> deaths;      // d, death-event count
};

struct PlayerSkill {
    double mean_rank = 0.0;  // r-bar
    double mean_score = 0.0; // s-bar
    std::optional<double> mean_kdr;
    std::optional<double> mean_accuracy;
    std::optional<double> mean_deaths;
    int n_games = 0;
    std::optional<telemetry::FpsPlayed> fps_played;
    std::optional<telemetry::HoursPerWeek> hours;
};

enum class ScoreGroup : int { novice = 0, intermediate = 1, skilled = 2, expert = 3 };

std::string_view to_string(ScoreGroup g);

/// Standard competition ranking ("1224") by descending points; ties share the
/// smaller rank. Throws DataError when client_number has no scoreboard entry.
int rank_from_scoreboard(const telemetry::GameMeta& meta);

GamePerformance game_performance(const telemetry::GameLog& log);

PlayerSkill player_skill(std::span<const GamePerformance> games,
                         const telemetry::PlayerLabels& labels = {});

/// Score-group bins: [_, 14) novice, [14, 22) intermediate, [22, 27) skilled,
/// [27, _) expert.
ScoreGroup score_group(double mean_score);

/// output[i] = mean(series[0..i])
std::vector<double> cumulative_average(std::span<const double> series);

/// Fraction of kill events up to t, scaled to the final score (linear ramp
/// when the game has no kill events). Equals the final score at full duration.
double score_at_time(const telemetry::GameLog& log, double t_s);

} // namespace skillcap::metrics
