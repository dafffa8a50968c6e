#include "skillcap/rating.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skillcap/rng.hpp"

namespace skillcap::rating {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kTiny = 1e-290; // below this, Phi is too small to divide by

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

} // namespace

VW vw(double t, double eps, Outcome outcome) {
    if (!std::isfinite(t) || !std::isfinite(eps))
        throw NumericError("vw: non-finite input");

    if (outcome == Outcome::win) {
        const double x = t - eps;
        const double denom = normal_cdf(x);
        double v, w;
        if (denom < kTiny) {
            // asymptotic Mills-ratio expansion for the deep left tail
            v = -x - 1.0 / x - 2.0 / (x * x * x);
            w = v * (v + x);
        } else {
            v = normal_pdf(x) / denom;
            w = v * (v + x);
        }
        return {v, std::clamp(w, 0.0, 1.0)};
    }

    // draw: performance difference truncated to [-eps, eps]
    const double alpha = -eps - t;
    const double beta = eps - t;
    const double z = normal_cdf(beta) - normal_cdf(alpha);
    if (z < kTiny) {
        // interval mass vanished; the posterior collapses onto the nearer edge
        const double v = t > 0.0 ? eps - t : -eps - t;
        return {v, 1.0};
    }
    const double pa = normal_pdf(alpha);
    const double pb = normal_pdf(beta);
    const double v = (pa - pb) / z;
    const double w = v * v + (beta * pb - alpha * pa) / z;
    return {v, std::clamp(w, 0.0, 1.0)};
}

std::pair<Rating, Rating> trueskill_update(const Rating& winner, const Rating& loser,
                                           const TrueSkillParams& p, Outcome outcome) {
    const double var_w = winner.sigma * winner.sigma;
    const double var_l = loser.sigma * loser.sigma;
    const double c2 = 2.0 * p.beta * p.beta + var_w + var_l;
    const double c = std::sqrt(c2);
    const auto [v, w] = vw((winner.mu - loser.mu) / c, p.eps / c, outcome);

    Rating new_w{winner.mu + (var_w / c) * v,
                 std::sqrt(std::max(0.0, var_w * (1.0 - (var_w / c2) * w)))};
    Rating new_l{loser.mu - (var_l / c) * v,
                 std::sqrt(std::max(0.0, var_l * (1.0 - (var_l / c2) * w)))};
    if (!std::isfinite(new_w.mu) || !std::isfinite(new_w.sigma) ||
        !std::isfinite(new_l.mu) || !std::isfinite(new_l.sigma))
        throw NumericError("trueskill_update: non-finite posterior (mu_w=" +
                           std::to_string(winner.mu) + ", mu_l=" +
                           std::to_string(loser.mu) + ")");
    return {new_w, new_l};
}

std::vector<PairOutcome> decompose_game(const telemetry::GameLog& log) {
    const auto& meta = log.meta;
    const auto self = meta.scoreboard.find(meta.client_number);
    if (self == meta.scoreboard.end())
        throw DataError("decompose_game: scoreboard has no entry for client " +
                        std::to_string(meta.client_number));
    const std::int64_t own_points = self->second.points;

    std::vector<PairOutcome> outcomes;
    for (const auto& [client, entry] : meta.scoreboard) {
        if (client == meta.client_number) continue;
        PairOutcome oc;
        oc.bot_client = client;
        oc.bot_points = entry.points;
        if (own_points > entry.points) oc.result = PairResult::win;
        else if (own_points == entry.points) oc.result = PairResult::draw;
        else oc.result = PairResult::loss;
        outcomes.push_back(oc);
    }
    std::sort(outcomes.begin(), outcomes.end(), [](const PairOutcome& a, const PairOutcome& b) {
        if (a.bot_points != b.bot_points) return a.bot_points > b.bot_points;
        return a.bot_client < b.bot_client;
    });
    return outcomes;
}

namespace {

// Runs one game's pairwise updates. Bots start from the range rating; the
// returned rating is the bots' mean posterior (nullopt when the game has no
// bots). `player` is updated in place.
std::optional<Rating> play_game(const telemetry::GameLog& game, Rating& player,
                                const Rating& range_rating, const TrueSkillParams& p) {
    const auto outcomes = decompose_game(game);
    if (outcomes.empty()) return std::nullopt;
    double mu_sum = 0.0, sigma_sum = 0.0;
    for (const auto& oc : outcomes) {
        Rating bot = range_rating;
        switch (oc.result) {
            case PairResult::win:
                std::tie(player, bot) = trueskill_update(player, bot, p, Outcome::win);
                break;
            case PairResult::loss:
                std::tie(bot, player) = trueskill_update(bot, player, p, Outcome::win);
                break;
            case PairResult::draw:
                std::tie(player, bot) = trueskill_update(player, bot, p, Outcome::draw);
                break;
        }
        mu_sum += bot.mu;
        sigma_sum += bot.sigma;
    }
    const double n = static_cast<double>(outcomes.size());
    return Rating{mu_sum / n, sigma_sum / n};
}

} // namespace

std::map<BotRange, Rating> calibrate_bot_ranges(const telemetry::Dataset& data,
                                                const TrueSkillParams& p,
                                                std::uint64_t seed) {
    if (data.games.empty())
        throw std::invalid_argument("calibrate_bot_ranges: empty dataset");

    std::map<BotRange, Rating> bot_ratings;
    for (const auto& g : data.games)
        bot_ratings.emplace(BotRange{g.meta.bot_min, g.meta.bot_max}, p.initial());

    rng::Rng gen(seed);
    std::vector<std::size_t> order(data.games.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int sweep = 0; sweep < p.max_sweeps; ++sweep) {
        const auto previous = bot_ratings;
        // players restart from the prior each sweep; only range beliefs persist
        std::map<std::int64_t, Rating> players;
        gen.shuffle(order);
        for (std::size_t gi : order) {
            const auto& game = data.games[gi];
            const BotRange range{game.meta.bot_min, game.meta.bot_max};
            auto [it, inserted] = players.emplace(game.meta.player_id, p.initial());
            const auto posterior = play_game(game, it->second, bot_ratings.at(range), p);
            if (posterior) bot_ratings[range] = *posterior;
        }
        double delta = 0.0;
        for (const auto& [range, r] : bot_ratings)
            delta = std::max(delta, std::abs(r.mu - previous.at(range).mu));
        if (delta < p.calibration_tol) break;
    }
    return bot_ratings;
}

std::map<std::int64_t, Rating> rate_players(const telemetry::Dataset& data,
                                            const std::map<BotRange, Rating>& bot_ratings,
                                            const TrueSkillParams& p,
                                            std::vector<RatingTrace>* trace) {
    std::map<std::int64_t, std::vector<const telemetry::GameLog*>> by_player;
    for (const auto& g : data.games) by_player[g.meta.player_id].push_back(&g);

    std::map<std::int64_t, Rating> out;
    for (auto& [pid, games] : by_player) {
        std::stable_sort(games.begin(), games.end(),
                         [](const telemetry::GameLog* a, const telemetry::GameLog* b) {
                             return a->meta.game_number < b->meta.game_number;
                         });
        Rating player = p.initial();
        for (const auto* game : games) {
            const BotRange range{game->meta.bot_min, game->meta.bot_max};
            const auto it = bot_ratings.find(range);
            if (it == bot_ratings.end())
                throw DataError("rate_players: no calibrated rating for bot range " +
                                std::to_string(range.first) + "-" +
                                std::to_string(range.second));
            play_game(*game, player, it->second, p); // bot posterior discarded
            if (trace)
                trace->push_back({pid, game->meta.game_number, game->meta.game_id, player});
        }
        out[pid] = player;
    }
    return out;
}

double conservative_estimate(const Rating& r, double k) { return r.mu - k * r.sigma; }

} // namespace skillcap::rating
