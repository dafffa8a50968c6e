#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "skillcap/rating.hpp"
#include "skillcap/rng.hpp"

using namespace skillcap;
using namespace skillcap::rating;

namespace {

telemetry::GameLog versus_game(std::int64_t player_id, int game_number,
                               std::int64_t player_pts, std::vector<std::int64_t> bot_pts,
                               int bot_min = 60, int bot_max = 70) {
    telemetry::GameLog log;
    log.meta.game_id = player_id * 1000 + game_number;
    log.meta.player_id = player_id;
    log.meta.client_number = 0;
    log.meta.game_number = game_number;
    log.meta.map_name = "wet";
    log.meta.bot_min = bot_min;
    log.meta.bot_max = bot_max;
    log.meta.connect_ms = 0;
    log.meta.disconnect_ms = 180'000;
    log.meta.date_time = "2013-02-26 14:40:54";
    log.meta.scoreboard[0] = {player_pts, std::nullopt, {}};
    for (std::size_t i = 0; i < bot_pts.size(); ++i)
        log.meta.scoreboard[static_cast<int>(i) + 1] = {bot_pts[i], std::nullopt, {}};
    return log;
}

} // namespace

TEST_CASE("vw: certain win updates nothing") {
    const auto [v, w] = vw(40.0, 0.0, Outcome::win);
    CHECK(v < 1e-8);
    CHECK(w < 1e-8);
}

TEST_CASE("vw: analytic value at t=0, eps=0") {
    const auto [v, w] = vw(0.0, 0.0, Outcome::win);
    const double expected = 2.0 * 0.3989422804014327; // phi(0)/Phi(0)
    CHECK(v == doctest::Approx(expected).epsilon(1e-12));
    CHECK(w == doctest::Approx(expected * expected).epsilon(1e-12));
}

TEST_CASE("vw: win grid matches the quadrature oracle within 1e-6") {
    for (double t = -6.0; t <= 6.0; t += 0.61) {
        for (double eps : {0.0, 0.05, 0.3, 1.0, 2.0}) {
            CAPTURE(t);
            CAPTURE(eps);
            const auto got = vw(t, eps, Outcome::win);
            const auto [v, w] = oracle::vw_by_quadrature(t, eps, false);
            CHECK(std::abs(got.v - v) < 1e-6);
            CHECK(std::abs(got.w - w) < 1e-6);
        }
    }
}

TEST_CASE("vw: draw grid matches the quadrature oracle within 1e-6") {
    for (double t = -4.0; t <= 4.0; t += 0.41) {
        for (double eps : {0.05, 0.3, 1.0, 1.5}) {
            CAPTURE(t);
            CAPTURE(eps);
            const auto got = vw(t, eps, Outcome::draw);
            const auto [v, w] = oracle::vw_by_quadrature(t, eps, true);
            CHECK(std::abs(got.v - v) < 1e-6);
            CHECK(std::abs(got.w - w) < 1e-6);
        }
    }
}

TEST_CASE("vw: deep tails stay finite and sane") {
    for (double t : {-50.0, -200.0, -1000.0}) {
        const auto got = vw(t, 0.0, Outcome::win);
        CHECK(std::isfinite(got.v));
        CHECK(got.v > 0.0);
        CHECK(got.w >= 0.0);
        CHECK(got.w <= 1.0);
        // v approaches -t for a hugely surprising win
        CHECK(got.v == doctest::Approx(-t).epsilon(1e-3));
    }
}

TEST_CASE("trueskill_update: canonical two-player example") {
    TrueSkillParams p;
    p.beta = 25.0 / 6.0;
    p.eps = 0.0;
    const Rating prior{25.0, 25.0 / 3.0};
    const auto [winner, loser] = trueskill_update(prior, prior, p, Outcome::win);

    // independent recomputation: quadrature V/W pushed through the update
    const double var = prior.sigma * prior.sigma;
    const double c2 = 2.0 * p.beta * p.beta + 2.0 * var;
    const double c = std::sqrt(c2);
    const auto [v, w] = oracle::vw_by_quadrature(0.0, 0.0, false);
    const double mu_w = 25.0 + var / c * v;
    const double sigma_w = std::sqrt(var * (1.0 - var / c2 * w));

    CHECK(winner.mu == doctest::Approx(mu_w).epsilon(1e-9));
    CHECK(loser.mu == doctest::Approx(50.0 - mu_w).epsilon(1e-9));
    CHECK(winner.sigma == doctest::Approx(sigma_w).epsilon(1e-9));
    CHECK(loser.sigma == doctest::Approx(sigma_w).epsilon(1e-9));
    // reference values for (25, 25/3, beta 25/6): delta mu = (sigma^2/c) * V
    CHECK(winner.mu == doctest::Approx(29.20525).epsilon(1e-5));
    CHECK(loser.mu == doctest::Approx(20.79475).epsilon(1e-5));
    CHECK(winner.sigma == doctest::Approx(7.19448).epsilon(1e-4));
}

TEST_CASE("trueskill_update: symmetric priors move symmetrically") {
    TrueSkillParams p;
    const Rating prior{25.0, 25.0 / 3.0};
    const auto [winner, loser] = trueskill_update(prior, prior, p, Outcome::win);
    CHECK(winner.mu > prior.mu);
    CHECK(loser.mu < prior.mu);
    CHECK(winner.mu - prior.mu == doctest::Approx(prior.mu - loser.mu).epsilon(1e-12));
    CHECK(winner.sigma < prior.sigma);
    CHECK(loser.sigma < prior.sigma);
}

TEST_CASE("trueskill_update: frozen ratings do not move") {
    TrueSkillParams p;
    const Rating frozen_a{30.0, 0.0};
    const Rating frozen_b{20.0, 0.0};
    const auto [w, l] = trueskill_update(frozen_a, frozen_b, p, Outcome::win);
    CHECK(w == frozen_a);
    CHECK(l == frozen_b);
}

TEST_CASE("trueskill_update: monotone and contraction properties") {
    rng::Rng gen(31);
    for (int trial = 0; trial < 500; ++trial) {
        TrueSkillParams p;
        p.beta = 1.0 + 9.0 * gen.next_double();
        p.eps = gen.next_double() * p.beta;
        const Rating a{gen.next_normal(25, 15), 0.5 + 12.0 * gen.next_double()};
        const Rating b{gen.next_normal(25, 15), 0.5 + 12.0 * gen.next_double()};
        const auto [w, l] = trueskill_update(a, b, p, Outcome::win);
        CHECK(w.mu >= a.mu);
        CHECK(l.mu <= b.mu);
        CHECK(w.sigma <= a.sigma);
        CHECK(l.sigma <= b.sigma);
        // c^2 >= 2 beta^2 by construction
        CHECK(2.0 * p.beta * p.beta + a.sigma * a.sigma + b.sigma * b.sigma >=
              2.0 * p.beta * p.beta);
    }
}

TEST_CASE("trueskill_update: translation equivariance") {
    rng::Rng gen(32);
    TrueSkillParams p;
    for (int trial = 0; trial < 100; ++trial) {
        const Rating a{gen.next_normal(20, 10), 2.0 + 5.0 * gen.next_double()};
        const Rating b{gen.next_normal(20, 10), 2.0 + 5.0 * gen.next_double()};
        const double shift = gen.next_normal(0, 40);
        const auto [w1, l1] = trueskill_update(a, b, p, Outcome::win);
        const auto [w2, l2] =
            trueskill_update({a.mu + shift, a.sigma}, {b.mu + shift, b.sigma}, p, Outcome::win);
        CHECK(w2.mu - shift == doctest::Approx(w1.mu).epsilon(1e-9));
        CHECK(l2.mu - shift == doctest::Approx(l1.mu).epsilon(1e-9));
        CHECK(w2.sigma == doctest::Approx(w1.sigma).epsilon(1e-12));
        CHECK(l2.sigma == doctest::Approx(l1.sigma).epsilon(1e-12));
    }
}

TEST_CASE("decompose_game: ordering and outcomes") {
    const auto wins = decompose_game(versus_game(1, 0, 12, {8, 5}));
    REQUIRE(wins.size() == 2);
    CHECK(wins[0].result == PairResult::win);
    CHECK(wins[1].result == PairResult::win);
    CHECK(wins[0].bot_points == 8);
    CHECK(wins[1].bot_points == 5);

    const auto draw = decompose_game(versus_game(1, 0, 8, {8}));
    REQUIRE(draw.size() == 1);
    CHECK(draw[0].result == PairResult::draw);

    // hand enumeration: player 8 vs bots 12, 8, 5, 8
    const auto mixed = decompose_game(versus_game(1, 0, 8, {12, 8, 5, 8}));
    REQUIRE(mixed.size() == 4);
    CHECK(mixed[0].result == PairResult::loss);
    CHECK(mixed[0].bot_points == 12);
    CHECK(mixed[1].result == PairResult::draw);
    CHECK(mixed[1].bot_client == 2);
    CHECK(mixed[2].result == PairResult::draw);
    CHECK(mixed[2].bot_client == 4);
    CHECK(mixed[3].result == PairResult::win);
    CHECK(mixed[3].bot_points == 5);
}

TEST_CASE("calibrate_bot_ranges: all-draw fixed point keeps mu at the prior") {
    telemetry::Dataset data;
    for (int i = 0; i < 6; ++i)
        data.games.push_back(versus_game(1, i, 10, {10, 10}));
    TrueSkillParams p;
    const auto ratings = calibrate_bot_ranges(data, p, 7);
    REQUIRE(ratings.size() == 1);
    CHECK(ratings.begin()->second.mu == doctest::Approx(p.mu0).epsilon(1e-9));
    CHECK(ratings.begin()->second.sigma < p.sigma0);
}

TEST_CASE("calibrate_bot_ranges: dominant range ends above the dominated one") {
    telemetry::Dataset data;
    int game_number = 0;
    for (int i = 0; i < 12; ++i) {
        // hard bots (80-90) always beat the player; easy bots (40-50) always lose
        data.games.push_back(versus_game(1, game_number++, 3, {15, 14, 13}, 80, 90));
        data.games.push_back(versus_game(1, game_number++, 15, {4, 3, 2}, 40, 50));
        data.games.push_back(versus_game(2, game_number++, 2, {16, 15, 12}, 80, 90));
        data.games.push_back(versus_game(2, game_number++, 14, {5, 4, 1}, 40, 50));
    }
    TrueSkillParams p;
    const auto ratings = calibrate_bot_ranges(data, p, 3);
    REQUIRE(ratings.size() == 2);
    const auto easy = ratings.at({40, 50});
    const auto hard = ratings.at({80, 90});
    CHECK(hard.mu > easy.mu);
}

TEST_CASE("calibrate_bot_ranges: deterministic for a fixed seed") {
    telemetry::Dataset data;
    rng::Rng gen(33);
    for (int i = 0; i < 30; ++i) {
        const int range = static_cast<int>(gen.next_below(3));
        data.games.push_back(versus_game(1 + static_cast<int>(gen.next_below(4)), i,
                                         gen.next_int(0, 20),
                                         {gen.next_int(0, 20), gen.next_int(0, 20)},
                                         40 + range * 10, 50 + range * 10));
    }
    TrueSkillParams p;
    const auto a = calibrate_bot_ranges(data, p, 42);
    const auto b = calibrate_bot_ranges(data, p, 42);
    CHECK(a == b);
    CHECK_THROWS_AS(calibrate_bot_ranges({}, p, 0), std::invalid_argument);
}

TEST_CASE("rate_players: winner's mu climbs, sigma never grows") {
    telemetry::Dataset data;
    for (int i = 0; i < 8; ++i)
        data.games.push_back(versus_game(5, i, 20, {5, 4, 3}));
    TrueSkillParams p;
    std::map<BotRange, Rating> bots{{{60, 70}, p.initial()}};
    std::vector<RatingTrace> trace;
    const auto ratings = rate_players(data, bots, p, &trace);
    REQUIRE(ratings.contains(5));
    REQUIRE(trace.size() == 8);
    for (std::size_t i = 1; i < trace.size(); ++i) {
        CHECK(trace[i].after.mu > trace[i - 1].after.mu);
        CHECK(trace[i].after.sigma <= trace[i - 1].after.sigma);
    }
    CHECK(ratings.at(5).mu > p.mu0);
    // no games for player 6 -> absent from the output
    CHECK(!ratings.contains(6));
}

TEST_CASE("rate_players: uncovered bot range is a data error") {
    telemetry::Dataset data;
    data.games.push_back(versus_game(5, 0, 20, {5}, 90, 100));
    TrueSkillParams p;
    std::map<BotRange, Rating> bots{{{60, 70}, p.initial()}};
    CHECK_THROWS_AS(rate_players(data, bots, p), DataError);
}

TEST_CASE("conservative_estimate") {
    CHECK(conservative_estimate({25.0, 25.0 / 3.0}, 3.0) == doctest::Approx(0.0));
    CHECK(conservative_estimate({31.4, 2.0}, 0.0) == 31.4);
    CHECK(conservative_estimate({10.0, 1.5}, 2.0) == doctest::Approx(7.0));
}
