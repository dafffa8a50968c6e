#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "skillcap/telemetry.hpp"

namespace skillcap::synth {

/// Parameterized player profile used to realize synthetic input streams.
/// Values are test fixtures tuned for qualitative separation, not claims
/// about real players.
struct Archetype {
    std::string name;
    double press_rate_hz = 1.0;        // non-movement key presses per second
    double hold_mean_s = 0.3;          // mean key hold duration
    double movement_switch_hz = 1.0;   // movement-pattern state changes per second
    double simultaneous_prob = 0.2;    // chance a movement state holds 2+ keys
    double mouse_speed_px_s = 400.0;   // mean motion speed while moving
    double mouse_speed_sd = 150.0;
    double direction_change_hz = 1.5;  // random-walk heading reversals per second
    double click_rate_hz = 0.8;        // mouse-button presses per second
    double moving_fraction = 0.3;      // fraction of time the mouse is in motion
    double accuracy_mean = 0.25;       // hits / shots target
    double deaths_base = 9.0;          // mean deaths at the easiest range
    double score_base_mean = 15.0;     // scoreboard points at the easiest range
    double score_sd = 3.2;
};

/// Novice / Intermediate / Skilled / Expert, ordered by rank.
std::vector<Archetype> default_archetypes();

struct SynthConfig {
    int players_per_archetype = 10;
    int games_per_player = 10;
    std::vector<std::string> map_pool = {"albatross", "bath",   "canals", "foundation",
                                         "keystone",  "suspended", "ubik", "wet"};
    std::vector<std::pair<int, int>> bot_ranges = {{40, 50}, {50, 60}, {60, 70},
                                                   {70, 80}, {80, 90}, {90, 100}};
    double game_duration_s = 180.0;
    int bots_per_game = 4;
    std::uint64_t master_seed = 0;
    std::vector<Archetype> archetypes = default_archetypes();
};

struct GameSlot {
    std::int64_t game_id = 0;
    std::int64_t player_id = 0;
    std::int32_t game_number = 0;
};

/// One synthetic log: Poisson key presses with stack-disciplined holds,
/// correlated-random-walk mouse motion at ~3 ms intervals while moving, and
/// kill/death/damage events consistent with the sampled scoreboard.
/// Deterministic given the seed.
telemetry::GameLog generate_game_log(const Archetype& a, const std::string& map,
                                     std::pair<int, int> bot_range, double duration_s,
                                     std::uint64_t seed, const GameSlot& slot = {},
                                     int bots = 4);

/// Streaming generation in deterministic (player, game) order; every log is
/// identical to the one generate_dataset would place at the same slot.
void for_each_game(const SynthConfig& cfg,
                   const std::function<void(telemetry::GameLog&&)>& fn);

/// Materialized dataset (players.json labels included). Deterministic given
/// cfg.master_seed.
telemetry::Dataset generate_dataset(const SynthConfig& cfg);

/// Archetype index for a generated player id (players are numbered
/// archetype-major).
int archetype_of_player(const SynthConfig& cfg, std::int64_t player_id);

} // namespace skillcap::synth
