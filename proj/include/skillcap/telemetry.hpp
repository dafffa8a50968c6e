#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillcap/errors.hpp"

namespace skillcap::telemetry {

using json = nlohmann::json;

enum class ButtonState : std::uint8_t { pressed, released };

/// In-game action bound to a key or mouse button. Anything outside this
/// vocabulary parses as `other` with the raw text kept alongside.
enum class Action : std::uint8_t {
    none,
    forward,
    backward,
    left,
    right,
    jump,
    crouch,
    dash,
    interact,
    reload,
    weapon_next,
    shoot,
    zoom,
    other,
};

enum class GameKind : std::uint8_t { kill, death, damage_dealt, damage_taken, other };

std::string_view to_string(Action a);
std::string_view to_string(GameKind k);
Action action_from_string(std::string_view s);   // unknown -> Action::other
GameKind game_kind_from_string(std::string_view s);

struct KeyPress {
    std::int32_t key_id = 0;
    ButtonState state = ButtonState::pressed;
    Action action = Action::none;
    std::string raw_action; // only set when action == other
    json extra;             // unmodeled fields, preserved verbatim
    bool operator==(const KeyPress&) const = default;
};

struct MouseButton {
    std::int32_t button_id = 0;
    ButtonState state = ButtonState::pressed;
    Action action = Action::none;
    std::string raw_action;
    json extra;
    bool operator==(const MouseButton&) const = default;
};

struct MouseMotion {
    std::int32_t dx = 0;
    std::int32_t dy = 0;
    json extra;
    bool operator==(const MouseMotion&) const = default;
};

struct GameEvent {
    GameKind kind = GameKind::other;
    std::string raw_kind;  // as written in the log; round-trips unknown kinds
    json attributes;       // opaque payload, preserved verbatim
    bool operator==(const GameEvent&) const = default;
};

using EventBody = std::variant<KeyPress, MouseButton, MouseMotion, GameEvent>;

/// One timestamped log entry. Timestamps are game-relative milliseconds
/// (t - connect_ms), normalized at parse time.
struct Event {
    std::int64_t t_ms = 0;
    EventBody body;
    bool operator==(const Event&) const = default;
};

struct ScoreEntry {
    std::int64_t points = 0;
    std::optional<std::int64_t> kills;
    json extra; // unmodeled per-entry fields
    bool operator==(const ScoreEntry&) const = default;
};

struct GameMeta {
    std::int64_t game_id = 0;
    std::int64_t player_id = 0;
    std::int32_t client_number = 0;
    std::int32_t game_number = 0; // 0-based position within one player's games
    std::string map_name;
    std::int32_t bot_min = 0; // bot difficulty range, 0..101
    std::int32_t bot_max = 0;
    std::int64_t connect_ms = 0;
    std::int64_t disconnect_ms = 0;
    std::map<std::int32_t, ScoreEntry> scoreboard; // client_number -> entry
    std::string date_time;
    std::optional<double> effective_duration_s; // set by slice_window
    json extra; // unmodeled metadata fields, preserved on reserialize

    std::int64_t duration_ms() const { return disconnect_ms - connect_ms; }
    double duration_s() const {
        return effective_duration_s ? *effective_duration_s
                                    : static_cast<double>(duration_ms()) / 1000.0;
    }
    bool operator==(const GameMeta&) const = default;
};

struct GameLog {
    GameMeta meta;
    std::vector<Event> events;
    bool operator==(const GameLog&) const = default;
};

enum class FpsPlayed : std::uint8_t { never, one_or_two, two_to_five, five_to_ten, ten_plus };
enum class HoursPerWeek : std::uint8_t { under_two, two_to_five, five_to_ten, ten_plus };

std::string_view to_string(FpsPlayed f);
std::string_view to_string(HoursPerWeek h);
std::optional<FpsPlayed> fps_played_from_string(std::string_view s);
std::optional<HoursPerWeek> hours_from_string(std::string_view s);

struct PlayerLabels {
    std::optional<FpsPlayed> fps_played;
    std::optional<HoursPerWeek> hours;
    bool operator==(const PlayerLabels&) const = default;
};

struct Dataset {
    std::vector<GameLog> games;
    std::map<std::int64_t, PlayerLabels> players;
};

/// Parses one game-log JSON document (schema in docs/log_schema.md).
/// Events come back sorted by timestamp (stable for equal timestamps) and
/// normalized to game-relative milliseconds. Unknown metadata fields and
/// event attributes are preserved. Throws ParseError / SchemaError.
GameLog parse_game_log(std::string_view text);

/// Canonical re-serialization: keys sorted, timestamps written back in the
/// on-disk convention (t + connect_ms). Byte-stable for a given GameLog.
std::string serialize_game_log(const GameLog& log);

struct ValidationIssue {
    enum class Severity { warn, error };
    Severity severity = Severity::warn;
    std::string message;
};
using ValidationReport = std::vector<ValidationIssue>;

/// Report-only invariant check; also warns on silent gaps > 15 s.
ValidationReport validate(const GameLog& log);

inline bool has_errors(const ValidationReport& r) {
    for (const auto& i : r)
        if (i.severity == ValidationIssue::Severity::error) return true;
    return false;
}

/// Events with timestamp <= t_end seconds; meta unchanged except the
/// effective-duration annotation min(t_end, full duration).
GameLog slice_window(const GameLog& log, double t_end_s);

/// Drops players with fewer than min_games games, then keeps only games with
/// game_number < max_game_number for the survivors.
Dataset select_study_games(Dataset data, int min_games = 8, int max_game_number = 16);

/// players.json payload: {"<player_id>": {"fps_played": "...", "hours": "..."}}
std::map<std::int64_t, PlayerLabels> parse_player_labels(const json& doc);
json player_labels_to_json(const std::map<std::int64_t, PlayerLabels>& players);

struct LoadIssue {
    std::filesystem::path file;
    std::string message;
};

/// Reads every log file plus an optional players.json. Per-file failures are
/// collected, not thrown.
Dataset load_dataset(const std::vector<std::filesystem::path>& log_files,
                     const std::optional<std::filesystem::path>& players_json,
                     std::vector<LoadIssue>* issues = nullptr);

/// Log files under a directory (files named *.json, players.json excluded),
/// sorted for determinism.
std::vector<std::filesystem::path> find_log_files(const std::filesystem::path& dir);

} // namespace skillcap::telemetry
