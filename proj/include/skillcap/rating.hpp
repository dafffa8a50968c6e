#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "skillcap/telemetry.hpp"

namespace skillcap::rating {

/// Normal belief over a player's skill: estimate mu, confidence sigma.
struct Rating {
    double mu = 25.0;
    double sigma = 25.0 / 3.0;
    bool operator==(const Rating&) const = default;
};

struct TrueSkillParams {
    double beta = 25.0 / 6.0;       // performance standard deviation
    double eps = 0.1 * (25.0 / 6.0); // draw margin
    double k_conservative = 3.0;
    double mu0 = 25.0;
    double sigma0 = 25.0 / 3.0;
    double calibration_tol = 1e-3; // stop when max |d mu_b| drops below
    int max_sweeps = 100;

    Rating initial() const { return {mu0, sigma0}; }
};

enum class Outcome { win, draw };

struct VW {
    double v = 0.0;
    double w = 0.0;
};

/// Truncated-Gaussian mean/variance corrections for the rating update.
/// Win: v = phi(t-eps)/Phi(t-eps), w = v*(v + t - eps). Draw uses the
/// two-sided truncation to [-eps, eps]. Deep tails fall back to the
/// asymptotic expansion instead of dividing by an underflowed Phi.
VW vw(double t, double eps, Outcome outcome);

/// One two-player update. For a draw the first argument is just "first";
/// both sigmas still shrink. Throws NumericError on non-finite intermediates.
std::pair<Rating, Rating> trueskill_update(const Rating& winner, const Rating& loser,
                                           const TrueSkillParams& p,
                                           Outcome outcome = Outcome::win);

enum class PairResult { win, draw, loss };

/// One player-vs-bot outcome, from the player's point of view.
struct PairOutcome {
    PairResult result = PairResult::win;
    std::int32_t bot_client = 0;
    std::int64_t bot_points = 0;
};

/// Splits a 1-vs-N scoreboard into independent pairwise outcomes, one per
/// bot, ordered by descending bot points (ties by client number).
std::vector<PairOutcome> decompose_game(const telemetry::GameLog& log);

using BotRange = std::pair<int, int>; // (bot_min, bot_max)

/// Sweeps randomly ordered games, updating each range's rating with the mean
/// posterior of its bots per game, until max |d mu_b| < tol or max_sweeps.
/// Deterministic for a fixed seed.
std::map<BotRange, Rating> calibrate_bot_ranges(const telemetry::Dataset& data,
                                                const TrueSkillParams& p,
                                                std::uint64_t seed);

/// One row per processed game: the player's rating after that game.
struct RatingTrace {
    std::int64_t player_id = 0;
    std::int32_t game_number = 0;
    std::int64_t game_id = 0;
    Rating after;
};

/// Rates every player against frozen bot-range ratings, processing each
/// player's games in game_number order. Throws DataError on an uncovered
/// bot range.
std::map<std::int64_t, Rating> rate_players(const telemetry::Dataset& data,
                                            const std::map<BotRange, Rating>& bot_ratings,
                                            const TrueSkillParams& p,
                                            std::vector<RatingTrace>* trace = nullptr);

/// T = mu - k * sigma
double conservative_estimate(const Rating& r, double k = 3.0);

} // namespace skillcap::rating
