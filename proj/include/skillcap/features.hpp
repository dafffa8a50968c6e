#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "skillcap/complexity.hpp"
#include "skillcap/telemetry.hpp"

namespace skillcap::features {

// -------------------------------------------------------------------------
// Grouping schemes

enum class Hardware : int { keyboard, mouse, clicks, ungrouped };
enum class FeatureType : int { event_frequency, complexity, kinetics, ungrouped };
enum class Context : int { context_free, dependent };
enum class Scheme : int { hardware, type, context };

struct GroupTags {
    Hardware hardware = Hardware::ungrouped;
    FeatureType type = FeatureType::ungrouped;
    Context context = Context::context_free;
};

std::string_view to_string(Hardware g);
std::string_view to_string(FeatureType g);
std::string_view to_string(Context g);
std::string_view to_string(Scheme s);

// -------------------------------------------------------------------------
// Per-window primitives shared by the extractors. Built once per
// (log, window) and handed to every catalog entry.

struct HoldInterval {
    std::int64_t t0_ms = 0;
    std::int64_t t1_ms = 0;
    std::int32_t key_id = 0;
    telemetry::Action action = telemetry::Action::none;
    double seconds() const { return static_cast<double>(t1_ms - t0_ms) / 1000.0; }
};

struct MotionSample {
    std::int64_t t_ms = 0;
    std::int32_t dx = 0;
    std::int32_t dy = 0;
};

struct ClickSample {
    std::int64_t t_ms = 0;
    std::int32_t button_id = 0;
    telemetry::Action action = telemetry::Action::none;
};

struct ChannelCache {
    double window_s = 0.0;
    std::int64_t window_ms = 0;
    std::int64_t game_id = 0;

    // keyboard
    std::vector<std::int64_t> press_times_ms; // all key presses, in order
    std::vector<telemetry::Action> press_actions;
    std::vector<std::int32_t> press_keys;
    int release_count = 0;
    std::vector<HoldInterval> holds;          // clipped to the window
    std::vector<double> interpress_s;         // gaps between consecutive presses
    std::vector<double> movement_interpress_s;
    std::vector<double> hold_durations_s;     // aligned with holds
    std::vector<int> held_set_symbols;        // 50 ms ticks, all keys
    std::vector<int> movement_set_symbols;    // 50 ms ticks, movement keys only
    std::vector<std::vector<int>> movement_key_streams; // forward/backward/left/right
    std::vector<double> held_count_series;    // 50 ms ticks
    std::vector<double> movement_held_count_series;
    std::vector<int> key_id_sequence;         // press order
    std::vector<int> action_sequence;         // press order, action ids
    double time_2plus_s = 0.0;                // total time >= 2 keys held
    double mean_keys_held = 0.0;              // time-weighted
    int max_keys_held = 0;
    int chord_onsets = 0;                     // transitions 1 -> 2 keys held
    int distinct_keys = 0;
    // movement kinetics
    int strafe_reversals = 0;                 // left <-> right transitions
    int forward_back_reversals = 0;
    double time_moving_s = 0.0;               // >= 1 movement key held
    double diagonal_time_s = 0.0;             // >= 2 movement keys held
    std::vector<double> move_burst_s;         // contiguous moving intervals
    double mean_simul_movement_keys = 0.0;    // time-weighted over the window
    std::map<telemetry::Action, int> action_press_counts;
    std::map<telemetry::Action, double> action_hold_mean_s;

    // mouse motion
    std::vector<MotionSample> motions;
    std::vector<double> speed_series;   // 100 Hz resample, px/s
    std::vector<double> vx_series;      // signed yaw rate, px/s
    std::vector<double> vy_series;      // signed pitch rate, px/s
    std::vector<int> sign_dx_symbols;   // per event: -1/0/+1 -> 0/1/2
    std::vector<int> sign_dy_symbols;
    std::vector<int> octant_symbols;    // per nonzero event, view-direction octant
    std::vector<int> magnitude_symbols; // per event, log2-bucketed |d|
    std::vector<double> angle_changes;  // radians between successive vectors
    std::vector<double> event_speeds;   // within-burst per-event speeds, px/s
    std::vector<double> interevent_ms;
    std::vector<double> burst_s;        // motion-burst lengths
    std::vector<double> burst_path_px;
    std::vector<double> pause_s;        // gaps > burst threshold
    int x_dir_changes = 0;
    int y_dir_changes = 0;
    double path_length_px = 0.0;
    double net_yaw_px = 0.0;  // sum dx
    double net_pitch_px = 0.0; // sum dy
    int micro_moves = 0;      // |dx|+|dy| == 1
    int large_jumps = 0;      // |d| > 20 px
    int turn_reversals = 0;   // same as x_dir_changes (view semantics)
    int pitch_reversals = 0;
    int flick_turns = 0;      // event speed > 5000 px/s
    // fire-context motion
    double speed_while_firing = 0.0; // mean px/s while fire button held
    double path_while_firing_frac = 0.0;
    double pre_fire_turn_angle_mean = 0.0; // 200 ms before each fire click
    double pre_fire_speed_mean = 0.0;
    double post_fire_pause_ms = 0.0;
    double aim_settle_ms_mean = 0.0; // last direction change -> fire click

    // clicks
    std::vector<ClickSample> clicks; // press edges only
    int click_count = 0;
    std::vector<double> interclick_ms;
    std::vector<double> click_hold_ms;
    std::vector<int> button_symbols;
    std::vector<double> interfire_s;
    int fire_clicks = 0;
    int left_clicks = 0;
    int right_clicks = 0;
    int double_clicks = 0;    // any-button re-click within 300 ms
    int fire_double_taps = 0; // fire re-click within 300 ms
    std::vector<double> fire_burst_len; // consecutive fire clicks < 300 ms apart

    // mixed keyboard + mouse
    std::vector<int> device_symbols; // key=0, click=1, motion-burst=2
    double keys_per_click = 0.0;
    double key_to_fire_latency_ms = 0.0; // movement press -> next fire click
    int clicks_while_moving = 0;         // movement key held
    int clicks_while_still = 0;
    int presses_while_fire_held = 0;
    int movement_reversals_while_firing = 0;
    double move_fire_overlap_frac = 0.0;
    double speed_while_movement_keys = 0.0;
    double speed_keys_idle = 0.0;
};

/// Slices the log to [0, t_end] and computes every shared channel.
ChannelCache build_channels(const telemetry::GameLog& log, double t_end_s);

// -------------------------------------------------------------------------
// Catalog

struct CatalogEntry {
    std::string name;
    GroupTags groups;
    double default_value = 0.0;
    std::function<std::optional<double>(const ChannelCache&)> extract;
};

/// Immutable feature catalog; names are unique and every entry carries one
/// group per scheme.
class FeatureCatalog {
public:
    explicit FeatureCatalog(std::vector<CatalogEntry> entries);

    /// The default catalog: 174 features, Keyboard 83 / Mouse 66 / Clicks 14 /
    /// Ungrouped 11; EventFrequency 31 / Complexity 75 / Kinetics 19 /
    /// Ungrouped 49; ContextFree 78 / Dependent 96.
    static const FeatureCatalog& standard();

    std::span<const CatalogEntry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const CatalogEntry* find(std::string_view name) const;

private:
    std::vector<CatalogEntry> entries_;
};

struct FeatureVector {
    std::map<std::string, double> values;
    double window_s = 0.0;
    std::int64_t game_id = 0;
};

/// Applies slice_window then every catalog extractor; failed extractors take
/// the entry's default instead of propagating.
FeatureVector extract_features(const telemetry::GameLog& log, const FeatureCatalog& cat,
                               double t_end_s);

/// Keeps exactly the features tagged with `group_name` under `scheme`.
/// Throws std::invalid_argument for a group that does not belong to the
/// scheme.
FeatureVector group_filter(const FeatureVector& v, const FeatureCatalog& cat,
                           Scheme scheme, std::string_view group_name);

/// Parses "hardware:Keyboard" / "type:Complexity" / "context:Dependent".
std::pair<Scheme, std::string> parse_group_spec(std::string_view spec);

// -------------------------------------------------------------------------
// Standalone extractor families

/// Direction changes, angle statistics, speed and path length of a raw
/// motion trace. Empty input gives all-zero features.
std::map<std::string, double> kinetics_features(std::span<const MotionSample> motion);

/// Press/click/motion rates, hold-duration and key-simultaneity statistics
/// over a window of `window_s` seconds (must be positive).
std::map<std::string, double> event_frequency_features(
    std::span<const telemetry::Event> events, double window_s);

// -------------------------------------------------------------------------
// Feature matrices

struct FeatureMatrix {
    Eigen::MatrixXd X; // one row per game, catalog (or filtered) order
    std::vector<std::string> names;
    std::vector<std::int64_t> game_ids;
    std::vector<std::int64_t> player_ids;
    double window_s = 0.0;
};

FeatureMatrix build_feature_matrix(
    const telemetry::Dataset& data, const FeatureCatalog& cat, double window_s,
    const std::optional<std::pair<Scheme, std::string>>& filter = std::nullopt);

} // namespace skillcap::features
