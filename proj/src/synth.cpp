#include "skillcap/synth.hpp"

#include <algorithm>
#include <cmath>

#include "skillcap/rng.hpp"

namespace skillcap::synth {

using telemetry::Action;
using telemetry::ButtonState;
using telemetry::Event;
using telemetry::GameEvent;
using telemetry::GameKind;
using telemetry::GameLog;
using telemetry::KeyPress;
using telemetry::MouseButton;
using telemetry::MouseMotion;

namespace {

constexpr std::int64_t kMotionStepMs = 3;
constexpr double kScoreDifficultySlope = 0.09; // points lost per difficulty unit
constexpr double kBotBasePoints = 3.0;
constexpr double kBotDifficultySlope = 0.16;
constexpr double kDeathDifficultySlope = 0.05;

// key ids for the synthetic keymap
constexpr std::int32_t kMovementKeys[4] = {119, 115, 97, 100}; // w s a d
constexpr Action kMovementActions[4] = {Action::forward, Action::backward, Action::left,
                                        Action::right};
struct UtilityKey {
    std::int32_t key_id;
    Action action;
    double weight;
};
constexpr UtilityKey kUtilityKeys[6] = {
    {32, Action::jump, 0.40},      {99, Action::crouch, 0.20},
    {101, Action::interact, 0.10}, {114, Action::reload, 0.12},
    {113, Action::weapon_next, 0.08}, {108, Action::dash, 0.10},
};

double range_mid(std::pair<int, int> range) {
    return 0.5 * (static_cast<double>(range.first) + static_cast<double>(range.second));
}

void push_key(GameLog& log, std::int64_t t, std::int32_t key, ButtonState state, Action a) {
    log.events.push_back({t, KeyPress{key, state, a, {}, {}}});
}

void sort_events(GameLog& log) {
    std::stable_sort(log.events.begin(), log.events.end(),
                     [](const Event& a, const Event& b) { return a.t_ms < b.t_ms; });
}

} // namespace

std::vector<Archetype> default_archetypes() {
    std::vector<Archetype> out(4);
    out[0] = {"Novice", 0.8, 0.22, 0.8, 0.10, 320.0, 120.0, 1.0, 0.5, 0.22, 0.14, 10.0,
              9.3, 3.2};
    out[1] = {"Intermediate", 1.4, 0.30, 1.3, 0.25, 500.0, 160.0, 1.8, 0.9, 0.30, 0.24,
              8.0, 20.3, 3.2};
    out[2] = {"Skilled", 2.1, 0.38, 1.9, 0.42, 700.0, 210.0, 2.8, 1.3, 0.38, 0.34, 6.0,
              26.8, 3.2};
    out[3] = {"Expert", 2.9, 0.46, 2.6, 0.60, 950.0, 260.0, 4.0, 1.8, 0.46, 0.45, 4.5,
              31.8, 3.2};
    return out;
}

GameLog generate_game_log(const Archetype& a, const std::string& map,
                          std::pair<int, int> bot_range, double duration_s,
                          std::uint64_t seed, const GameSlot& slot, int bots) {
    const auto duration_ms = static_cast<std::int64_t>(std::llround(duration_s * 1000.0));
    const double difficulty = range_mid(bot_range) - 45.0;

    GameLog log;
    log.meta.game_id = slot.game_id;
    log.meta.player_id = slot.player_id;
    log.meta.client_number = 0;
    log.meta.game_number = slot.game_number;
    log.meta.map_name = map;
    log.meta.bot_min = bot_range.first;
    log.meta.bot_max = bot_range.second;
    log.meta.connect_ms = 0;
    log.meta.disconnect_ms = duration_ms;
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "2013-03-%02d %02d:%02d:00",
                      1 + static_cast<int>(slot.player_id % 28),
                      9 + static_cast<int>(slot.game_number % 12),
                      static_cast<int>(slot.game_id % 60));
        log.meta.date_time = buf;
    }

    // --- scoreboard -----------------------------------------------------------
    rng::Rng score_gen = rng::Rng::child(seed, 1);
    const double player_mean =
        std::max(0.0, a.score_base_mean - kScoreDifficultySlope * difficulty);
    const auto player_points = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::llround(score_gen.next_normal(player_mean,
                                                                        a.score_sd))));
    log.meta.scoreboard[0] = {player_points, player_points, {}};
    const double bot_mean = kBotBasePoints + kBotDifficultySlope * difficulty;
    for (int b = 1; b <= bots; ++b) {
        const auto pts = std::max<std::int64_t>(
            0, static_cast<std::int64_t>(std::llround(score_gen.next_normal(bot_mean, 2.5))));
        log.meta.scoreboard[b] = {pts, pts, {}};
    }
    const int deaths = score_gen.next_poisson(
        std::max(0.5, a.deaths_base + kDeathDifficultySlope * difficulty));

    // --- movement keys: state machine over held key sets ------------------------
    if (a.movement_switch_hz > 0.0) {
        rng::Rng gen = rng::Rng::child(seed, 2);
        std::vector<int> held; // movement indices currently down
        std::int64_t t = static_cast<std::int64_t>(gen.next_exponential(2.0) * 1000.0);
        while (t < duration_ms) {
            // choose next state: one primary key, sometimes a chord
            std::vector<int> next{static_cast<int>(gen.next_below(4))};
            if (gen.next_double() < a.simultaneous_prob) {
                int second = static_cast<int>(gen.next_below(4));
                while (second == next[0]) second = static_cast<int>(gen.next_below(4));
                next.push_back(second);
            }
            std::sort(next.begin(), next.end());
            for (int idx : held)
                if (!std::binary_search(next.begin(), next.end(), idx))
                    push_key(log, t, kMovementKeys[idx], ButtonState::released,
                             kMovementActions[idx]);
            for (int idx : next)
                if (!std::binary_search(held.begin(), held.end(), idx))
                    push_key(log, t, kMovementKeys[idx], ButtonState::pressed,
                             kMovementActions[idx]);
            held = next;
            t += std::max<std::int64_t>(
                40, static_cast<std::int64_t>(
                        gen.next_exponential(a.movement_switch_hz) * 1000.0));
        }
        for (int idx : held)
            push_key(log, duration_ms, kMovementKeys[idx], ButtonState::released,
                     kMovementActions[idx]);
    }

    // --- utility keys: Poisson presses with sampled hold durations ----------------
    if (a.press_rate_hz > 0.0) {
        rng::Rng gen = rng::Rng::child(seed, 3);
        std::int64_t t = 0;
        std::vector<std::int64_t> busy_until(6, -1);
        for (;;) {
            t += static_cast<std::int64_t>(gen.next_exponential(a.press_rate_hz) * 1000.0);
            if (t >= duration_ms) break;
            double pick = gen.next_double();
            std::size_t ki = 0;
            for (; ki < 5; ++ki) {
                if (pick < kUtilityKeys[ki].weight) break;
                pick -= kUtilityKeys[ki].weight;
            }
            if (busy_until[ki] > t) continue; // key still held
            const auto hold = std::max<std::int64_t>(
                30, static_cast<std::int64_t>(
                        gen.next_normal(a.hold_mean_s, 0.3 * a.hold_mean_s) * 1000.0));
            const auto t1 = std::min<std::int64_t>(t + hold, duration_ms);
            push_key(log, t, kUtilityKeys[ki].key_id, ButtonState::pressed,
                     kUtilityKeys[ki].action);
            push_key(log, t1, kUtilityKeys[ki].key_id, ButtonState::released,
                     kUtilityKeys[ki].action);
            busy_until[ki] = t1;
        }
    }

    // --- mouse: correlated random walk in moving phases ----------------------------
    if (a.moving_fraction > 0.0 && a.mouse_speed_px_s > 0.0) {
        rng::Rng gen = rng::Rng::child(seed, 4);
        const double phase_mean_s = 1.2;
        const double idle_mean_s =
            a.moving_fraction > 0 ? phase_mean_s * (1.0 - a.moving_fraction) / a.moving_fraction
                                  : duration_s;
        double heading = gen.next_double() * 2.0 * M_PI;
        double carry_x = 0.0, carry_y = 0.0;
        std::int64_t t =
            static_cast<std::int64_t>(gen.next_exponential(1.0 / idle_mean_s) * 1000.0);
        while (t < duration_ms) {
            const auto phase_end = std::min<std::int64_t>(
                duration_ms,
                t + static_cast<std::int64_t>(gen.next_exponential(1.0 / phase_mean_s) *
                                              1000.0));
            while (t < phase_end) {
                heading += gen.next_normal(0.0, 0.25);
                if (gen.next_double() < a.direction_change_hz * 0.003)
                    heading = M_PI - heading; // horizontal flick the other way
                const double speed =
                    std::abs(gen.next_normal(a.mouse_speed_px_s, a.mouse_speed_sd));
                const double step = speed * 0.003;
                carry_x += std::cos(heading) * step;
                carry_y += std::sin(heading) * step * 0.45; // pitch moves less than yaw
                const int dx = static_cast<int>(std::trunc(carry_x));
                const int dy = static_cast<int>(std::trunc(carry_y));
                carry_x -= dx;
                carry_y -= dy;
                if (dx != 0 || dy != 0) log.events.push_back({t, MouseMotion{dx, dy, {}}});
                t += kMotionStepMs;
            }
            t = phase_end +
                static_cast<std::int64_t>(gen.next_exponential(1.0 / idle_mean_s) * 1000.0);
        }
    }

    // --- clicks ----------------------------------------------------------------
    std::vector<std::int64_t> shot_times;
    if (a.click_rate_hz > 0.0) {
        rng::Rng gen = rng::Rng::child(seed, 5);
        std::int64_t t = 0;
        for (;;) {
            t += static_cast<std::int64_t>(gen.next_exponential(a.click_rate_hz) * 1000.0);
            if (t >= duration_ms) break;
            const bool zoom = gen.next_double() < 0.1;
            const std::int32_t button = zoom ? 3 : 1;
            const Action action = zoom ? Action::zoom : Action::shoot;
            const auto hold = 40 + static_cast<std::int64_t>(gen.next_below(80));
            log.events.push_back({t, MouseButton{button, ButtonState::pressed, action, {}, {}}});
            log.events.push_back(
                {std::min<std::int64_t>(t + hold, duration_ms),
                 MouseButton{button, ButtonState::released, action, {}, {}}});
            if (!zoom) shot_times.push_back(t);
        }
    }

    // --- game events consistent with the scoreboard --------------------------------
    {
        rng::Rng gen = rng::Rng::child(seed, 6);
        auto random_times = [&](int count, std::int64_t lo) {
            std::vector<std::int64_t> times;
            for (int i = 0; i < count; ++i)
                times.push_back(lo + static_cast<std::int64_t>(gen.next_below(
                                         static_cast<std::uint64_t>(
                                             std::max<std::int64_t>(1, duration_ms - lo)))));
            std::sort(times.begin(), times.end());
            return times;
        };
        const int hits = static_cast<int>(
            std::llround(a.accuracy_mean * static_cast<double>(shot_times.size())));
        std::vector<std::size_t> shot_order(shot_times.size());
        std::iota(shot_order.begin(), shot_order.end(), std::size_t{0});
        gen.shuffle(shot_order);
        for (int h = 0; h < hits && h < static_cast<int>(shot_order.size()); ++h) {
            nlohmann::json attrs{{"amount", 10 + static_cast<int>(gen.next_below(30))}};
            log.events.push_back(
                {std::min<std::int64_t>(shot_times[shot_order[static_cast<std::size_t>(h)]] + 30,
                                        duration_ms),
                 GameEvent{GameKind::damage_dealt, "damage_dealt", std::move(attrs)}});
        }
        for (std::int64_t t : random_times(static_cast<int>(player_points), 500))
            log.events.push_back({t, GameEvent{GameKind::kill, "kill", {}}});
        for (std::int64_t t : random_times(deaths, 1'000)) {
            log.events.push_back(
                {std::max<std::int64_t>(0, t - 150),
                 GameEvent{GameKind::damage_taken, "damage_taken",
                           nlohmann::json{{"amount", 40 + static_cast<int>(gen.next_below(60))}}}});
            log.events.push_back({t, GameEvent{GameKind::death, "death", {}}});
        }
    }

    sort_events(log);
    return log;
}

void for_each_game(const SynthConfig& cfg,
                   const std::function<void(GameLog&&)>& fn) {
    const auto n_arch = cfg.archetypes.size();
    std::int64_t player_id = 0;
    for (std::size_t ai = 0; ai < n_arch; ++ai) {
        for (int p = 0; p < cfg.players_per_archetype; ++p) {
            ++player_id;
            const auto player_seed =
                rng::derive_seed(cfg.master_seed, static_cast<std::uint64_t>(player_id));
            for (int g = 0; g < cfg.games_per_player; ++g) {
                const auto game_seed =
                    rng::derive_seed(player_seed, static_cast<std::uint64_t>(g));
                rng::Rng pick = rng::Rng::child(game_seed, 0);
                const auto& map = cfg.map_pool[pick.next_below(cfg.map_pool.size())];
                const auto range = cfg.bot_ranges[pick.next_below(cfg.bot_ranges.size())];
                GameSlot slot{player_id * 1000 + g, player_id, g};
                fn(generate_game_log(cfg.archetypes[ai], map, range, cfg.game_duration_s,
                                     game_seed, slot, cfg.bots_per_game));
            }
        }
    }
}

telemetry::Dataset generate_dataset(const SynthConfig& cfg) {
    telemetry::Dataset data;
    data.games.reserve(static_cast<std::size_t>(cfg.players_per_archetype) *
                       cfg.archetypes.size() * static_cast<std::size_t>(cfg.games_per_player));
    for_each_game(cfg, [&](GameLog&& log) { data.games.push_back(std::move(log)); });

    // demographics loosely tied to archetype rank (stored labels only)
    using telemetry::FpsPlayed;
    using telemetry::HoursPerWeek;
    constexpr FpsPlayed fps_by_rank[4] = {FpsPlayed::never, FpsPlayed::two_to_five,
                                          FpsPlayed::five_to_ten, FpsPlayed::ten_plus};
    constexpr HoursPerWeek hours_by_rank[4] = {HoursPerWeek::under_two,
                                               HoursPerWeek::two_to_five,
                                               HoursPerWeek::five_to_ten,
                                               HoursPerWeek::ten_plus};
    std::int64_t player_id = 0;
    for (std::size_t ai = 0; ai < cfg.archetypes.size(); ++ai)
        for (int p = 0; p < cfg.players_per_archetype; ++p) {
            ++player_id;
            const auto rank = std::min<std::size_t>(ai, 3);
            data.players[player_id] = {fps_by_rank[rank], hours_by_rank[rank]};
        }
    return data;
}

int archetype_of_player(const SynthConfig& cfg, std::int64_t player_id) {
    if (player_id < 1) return -1;
    const auto idx = (player_id - 1) / cfg.players_per_archetype;
    return idx < static_cast<std::int64_t>(cfg.archetypes.size()) ? static_cast<int>(idx)
                                                                   : -1;
}

} // namespace skillcap::synth
