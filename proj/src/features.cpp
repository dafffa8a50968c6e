#include "skillcap/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace skillcap::features {

using telemetry::Action;
using telemetry::ButtonState;
using telemetry::Event;
using telemetry::GameLog;
using telemetry::KeyPress;
using telemetry::MouseButton;
using telemetry::MouseMotion;

namespace {

constexpr std::int64_t kTickMs = 50;          // keyboard state sampling
constexpr double kResampleHz = 100.0;         // mouse series sampling
constexpr std::int64_t kMotionBurstGapMs = 100;
constexpr std::int64_t kDoubleClickMs = 300;
constexpr std::int64_t kPreFireWindowMs = 200;
constexpr std::int64_t kPostFirePauseCapMs = 1000;
constexpr std::int64_t kAimSettleCapMs = 2000;
constexpr double kFlickSpeedPxS = 5000.0;
constexpr std::size_t kSampEnCap = 512; // decimation cap for catalog entries

constexpr Action kRateActions[10] = {Action::forward, Action::backward,   Action::left,
                                     Action::right,   Action::jump,       Action::crouch,
                                     Action::dash,    Action::interact,   Action::reload,
                                     Action::weapon_next};

bool is_movement(Action a) {
    return a == Action::forward || a == Action::backward || a == Action::left ||
           a == Action::right;
}

int movement_index(Action a) {
    switch (a) {
        case Action::forward: return 0;
        case Action::backward: return 1;
        case Action::left: return 2;
        case Action::right: return 3;
        default: return -1;
    }
}

double mean_of(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stdev_of(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

double max_of(std::span<const double> v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double min_of(std::span<const double> v) {
    return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double median_of(std::span<const double> v) {
    if (v.empty()) return 0.0;
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

std::vector<double> decimate(std::span<const double> v, std::size_t cap) {
    if (v.size() <= cap) return {v.begin(), v.end()};
    const std::size_t stride = (v.size() + cap - 1) / cap;
    std::vector<double> out;
    out.reserve(cap);
    for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(v[i]);
    return out;
}

// press/release pairing with stack discipline per key; open holds close at
// the window end
std::vector<HoldInterval> collect_holds(std::span<const Event> events,
                                        std::int64_t window_ms) {
    std::vector<HoldInterval> holds;
    std::map<std::int32_t, std::pair<std::int64_t, Action>> open;
    for (const Event& e : events) {
        const auto* k = std::get_if<KeyPress>(&e.body);
        if (!k) continue;
        if (k->state == ButtonState::pressed) {
            open.emplace(k->key_id, std::pair{e.t_ms, k->action});
        } else {
            auto it = open.find(k->key_id);
            if (it == open.end()) continue; // release without press
            holds.push_back({it->second.first, e.t_ms, k->key_id, it->second.second});
            open.erase(it);
        }
    }
    for (const auto& [key, start] : open)
        holds.push_back({start.first, window_ms, key, start.second});
    std::sort(holds.begin(), holds.end(), [](const HoldInterval& a, const HoldInterval& b) {
        return a.t0_ms != b.t0_ms ? a.t0_ms < b.t0_ms : a.key_id < b.key_id;
    });
    return holds;
}

struct Simultaneity {
    double time_2plus_s = 0.0;
    double mean_held = 0.0; // time-weighted over the window
    int max_held = 0;
    int chord_onsets = 0;
};

Simultaneity sweep_simultaneity(std::span<const HoldInterval> holds,
                                std::int64_t window_ms) {
    Simultaneity out;
    if (window_ms <= 0) return out;
    std::vector<std::pair<std::int64_t, int>> edges;
    edges.reserve(holds.size() * 2);
    for (const auto& h : holds) {
        edges.push_back({h.t0_ms, +1});
        edges.push_back({h.t1_ms, -1});
    }
    std::sort(edges.begin(), edges.end());
    int active = 0;
    std::int64_t prev = 0;
    double weighted = 0.0;
    for (const auto& [t, delta] : edges) {
        const auto clipped = std::clamp<std::int64_t>(t, 0, window_ms);
        if (clipped > prev) {
            weighted += static_cast<double>(active) * static_cast<double>(clipped - prev);
            if (active >= 2)
                out.time_2plus_s += static_cast<double>(clipped - prev) / 1000.0;
            prev = clipped;
        }
        active += delta;
        out.max_held = std::max(out.max_held, active);
        if (delta > 0 && active == 2) ++out.chord_onsets;
    }
    out.mean_held = weighted / static_cast<double>(window_ms);
    return out;
}

// merged intervals where >= 1 of the given holds is active
std::vector<std::pair<std::int64_t, std::int64_t>> merge_active(
    std::span<const HoldInterval> holds) {
    std::vector<std::pair<std::int64_t, std::int64_t>> spans;
    for (const auto& h : holds)
        if (h.t1_ms > h.t0_ms) spans.push_back({h.t0_ms, h.t1_ms});
    std::sort(spans.begin(), spans.end());
    std::vector<std::pair<std::int64_t, std::int64_t>> merged;
    for (const auto& s : spans) {
        if (!merged.empty() && s.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, s.second);
        else
            merged.push_back(s);
    }
    return merged;
}

bool inside(const std::vector<std::pair<std::int64_t, std::int64_t>>& spans,
            std::int64_t t) {
    for (const auto& [a, b] : spans)
        if (t >= a && t < b) return true;
    return false;
}

struct KineticAggregates {
    int x_dir_changes = 0;
    int y_dir_changes = 0;
    std::vector<double> angle_changes;
    std::vector<double> event_speeds;
    double path_length = 0.0;
};

KineticAggregates motion_kinetics(std::span<const MotionSample> motion) {
    KineticAggregates agg;
    int last_sign_x = 0, last_sign_y = 0;
    double prev_dx = 0.0, prev_dy = 0.0;
    bool have_prev_vec = false;
    for (std::size_t i = 0; i < motion.size(); ++i) {
        const auto& m = motion[i];
        const int sx = m.dx > 0 ? 1 : (m.dx < 0 ? -1 : 0);
        const int sy = m.dy > 0 ? 1 : (m.dy < 0 ? -1 : 0);
        if (sx != 0) {
            if (last_sign_x != 0 && sx != last_sign_x) ++agg.x_dir_changes;
            last_sign_x = sx;
        }
        if (sy != 0) {
            if (last_sign_y != 0 && sy != last_sign_y) ++agg.y_dir_changes;
            last_sign_y = sy;
        }
        const double norm = std::sqrt(static_cast<double>(m.dx) * m.dx +
                                      static_cast<double>(m.dy) * m.dy);
        agg.path_length += norm;
        if (m.dx != 0 || m.dy != 0) {
            if (have_prev_vec) {
                const double cross = prev_dx * m.dy - prev_dy * m.dx;
                const double dot = prev_dx * m.dx + prev_dy * m.dy;
                agg.angle_changes.push_back(std::abs(std::atan2(cross, dot)));
            }
            prev_dx = m.dx;
            prev_dy = m.dy;
            have_prev_vec = true;
        }
        if (i > 0) {
            const auto gap = m.t_ms - motion[i - 1].t_ms;
            if (gap > 0 && gap <= kMotionBurstGapMs)
                agg.event_speeds.push_back(norm * 1000.0 / static_cast<double>(gap));
        }
    }
    return agg;
}

std::vector<double> moving_average(std::span<const double> v, std::size_t w) {
    if (v.size() < w || w == 0) return {v.begin(), v.end()};
    std::vector<double> out(v.size() - w + 1);
    double acc = std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(w), 0.0);
    out[0] = acc / static_cast<double>(w);
    for (std::size_t i = w; i < v.size(); ++i) {
        acc += v[i] - v[i - w];
        out[i - w + 1] = acc / static_cast<double>(w);
    }
    return out;
}

int sign_changes(std::span<const double> v) {
    int changes = 0, last = 0;
    for (double x : v) {
        const int s = x > 0 ? 1 : (x < 0 ? -1 : 0);
        if (s != 0) {
            if (last != 0 && s != last) ++changes;
            last = s;
        }
    }
    return changes;
}

} // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Hardware g) {
    switch (g) {
        case Hardware::keyboard: return "Keyboard";
        case Hardware::mouse: return "Mouse";
        case Hardware::clicks: return "Clicks";
        case Hardware::ungrouped: return "Ungrouped";
    }
    return "Ungrouped";
}

std::string_view to_string(FeatureType g) {
    switch (g) {
        case FeatureType::event_frequency: return "EventFrequency";
        case FeatureType::complexity: return "Complexity";
        case FeatureType::kinetics: return "Kinetics";
        case FeatureType::ungrouped: return "Ungrouped";
    }
    return "Ungrouped";
}

std::string_view to_string(Context g) {
    return g == Context::context_free ? "ContextFree" : "Dependent";
}

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::hardware: return "hardware";
        case Scheme::type: return "type";
        case Scheme::context: return "context";
    }
    return "hardware";
}

ChannelCache build_channels(const GameLog& log, double t_end_s) {
    const GameLog sliced = telemetry::slice_window(log, t_end_s);
    ChannelCache ch;
    ch.window_s = *sliced.meta.effective_duration_s;
    ch.window_ms = static_cast<std::int64_t>(std::llround(ch.window_s * 1000.0));
    ch.game_id = sliced.meta.game_id;

    // ---- event partition ---------------------------------------------------
    std::vector<Event> key_events;
    std::vector<std::pair<std::int64_t, MouseButton>> button_events;
    for (const Event& e : sliced.events) {
        if (const auto* k = std::get_if<KeyPress>(&e.body)) {
            key_events.push_back(e);
            if (k->state == ButtonState::pressed) {
                ch.press_times_ms.push_back(e.t_ms);
                ch.press_actions.push_back(k->action);
                ch.press_keys.push_back(k->key_id);
            } else {
                ++ch.release_count;
            }
        } else if (const auto* m = std::get_if<MouseMotion>(&e.body)) {
            ch.motions.push_back({e.t_ms, m->dx, m->dy});
        } else if (const auto* btn = std::get_if<MouseButton>(&e.body)) {
            button_events.push_back({e.t_ms, *btn});
        }
    }

    // ---- keyboard holds and derived series ----------------------------------
    ch.holds = collect_holds(key_events, ch.window_ms);
    for (const auto& h : ch.holds) ch.hold_durations_s.push_back(h.seconds());
    for (std::size_t i = 1; i < ch.press_times_ms.size(); ++i)
        ch.interpress_s.push_back(
            static_cast<double>(ch.press_times_ms[i] - ch.press_times_ms[i - 1]) / 1000.0);

    std::vector<std::int64_t> movement_press_times;
    for (std::size_t i = 0; i < ch.press_times_ms.size(); ++i)
        if (is_movement(ch.press_actions[i]))
            movement_press_times.push_back(ch.press_times_ms[i]);
    for (std::size_t i = 1; i < movement_press_times.size(); ++i)
        ch.movement_interpress_s.push_back(
            static_cast<double>(movement_press_times[i] - movement_press_times[i - 1]) /
            1000.0);

    ch.key_id_sequence.assign(ch.press_keys.begin(), ch.press_keys.end());
    for (Action a : ch.press_actions) ch.action_sequence.push_back(static_cast<int>(a));
    ch.distinct_keys = static_cast<int>(
        std::set<std::int32_t>(ch.press_keys.begin(), ch.press_keys.end()).size());

    const Simultaneity sim = sweep_simultaneity(ch.holds, ch.window_ms);
    ch.time_2plus_s = sim.time_2plus_s;
    ch.mean_keys_held = sim.mean_held;
    ch.max_keys_held = sim.max_held;
    ch.chord_onsets = sim.chord_onsets;

    // tick-sampled key state
    if (ch.window_ms > 0) {
        const auto ticks = ch.window_ms / kTickMs + 1;
        std::map<std::vector<std::int32_t>, int> interned;
        ch.movement_key_streams.assign(4, {});
        struct Edge {
            std::int64_t t;
            std::int32_t key;
            Action action;
            int delta;
        };
        std::vector<Edge> edges;
        for (const auto& h : ch.holds) {
            edges.push_back({h.t0_ms, h.key_id, h.action, +1});
            edges.push_back({h.t1_ms, h.key_id, h.action, -1});
        }
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return a.t != b.t ? a.t < b.t : a.delta < b.delta;
        });
        std::multiset<std::int32_t> active_keys;
        std::multiset<int> active_movement; // movement index instances
        std::size_t ei = 0;
        for (std::int64_t k = 0; k < ticks; ++k) {
            const std::int64_t tau = k * kTickMs;
            while (ei < edges.size() && edges[ei].t <= tau) {
                const Edge& e = edges[ei];
                const int mi = movement_index(e.action);
                if (e.delta > 0) {
                    active_keys.insert(e.key);
                    if (mi >= 0) active_movement.insert(mi);
                } else {
                    if (auto it = active_keys.find(e.key); it != active_keys.end())
                        active_keys.erase(it);
                    if (mi >= 0)
                        if (auto it = active_movement.find(mi); it != active_movement.end())
                            active_movement.erase(it);
                }
                ++ei;
            }
            std::vector<std::int32_t> held(active_keys.begin(), active_keys.end());
            held.erase(std::unique(held.begin(), held.end()), held.end());
            const auto [it, inserted] =
                interned.emplace(held, static_cast<int>(interned.size()));
            ch.held_set_symbols.push_back(it->second);
            ch.held_count_series.push_back(static_cast<double>(held.size()));

            int mask = 0;
            int mcount = 0;
            for (int mi = 0; mi < 4; ++mi) {
                const bool on = active_movement.count(mi) > 0;
                mask |= on ? (1 << mi) : 0;
                mcount += on ? 1 : 0;
                ch.movement_key_streams[static_cast<std::size_t>(mi)].push_back(on ? 1 : 0);
            }
            ch.movement_set_symbols.push_back(mask);
            ch.movement_held_count_series.push_back(static_cast<double>(mcount));
        }
    }

    // movement kinetics from the keyboard
    std::vector<HoldInterval> movement_holds;
    for (const auto& h : ch.holds)
        if (is_movement(h.action)) movement_holds.push_back(h);
    const auto moving_spans = merge_active(movement_holds);
    for (const auto& [a, b] : moving_spans) {
        ch.time_moving_s += static_cast<double>(b - a) / 1000.0;
        ch.move_burst_s.push_back(static_cast<double>(b - a) / 1000.0);
    }
    const Simultaneity msim = sweep_simultaneity(movement_holds, ch.window_ms);
    ch.diagonal_time_s = msim.time_2plus_s;
    ch.mean_simul_movement_keys = msim.mean_held;

    std::vector<std::int64_t> strafe_reversal_times, fb_reversal_times;
    {
        Action last_strafe = Action::none, last_fb = Action::none;
        for (std::size_t i = 0; i < ch.press_times_ms.size(); ++i) {
            const Action a = ch.press_actions[i];
            if (a == Action::left || a == Action::right) {
                if (last_strafe != Action::none && a != last_strafe)
                    strafe_reversal_times.push_back(ch.press_times_ms[i]);
                last_strafe = a;
            } else if (a == Action::forward || a == Action::backward) {
                if (last_fb != Action::none && a != last_fb)
                    fb_reversal_times.push_back(ch.press_times_ms[i]);
                last_fb = a;
            }
        }
    }
    ch.strafe_reversals = static_cast<int>(strafe_reversal_times.size());
    ch.forward_back_reversals = static_cast<int>(fb_reversal_times.size());

    for (Action a : ch.press_actions) ch.action_press_counts[a]++;
    {
        std::map<Action, std::pair<double, int>> acc;
        for (const auto& h : ch.holds) {
            auto& [sum, count] = acc[h.action];
            sum += h.seconds();
            ++count;
        }
        for (const auto& [action, sc] : acc)
            ch.action_hold_mean_s[action] = sc.first / sc.second;
    }

    // ---- mouse motion channels ----------------------------------------------
    const KineticAggregates agg = motion_kinetics(ch.motions);
    ch.x_dir_changes = agg.x_dir_changes;
    ch.y_dir_changes = agg.y_dir_changes;
    ch.angle_changes = agg.angle_changes;
    ch.event_speeds = agg.event_speeds;
    ch.path_length_px = agg.path_length;

    for (std::size_t i = 0; i < ch.motions.size(); ++i) {
        const auto& m = ch.motions[i];
        ch.net_yaw_px += m.dx;
        ch.net_pitch_px += m.dy;
        ch.sign_dx_symbols.push_back(m.dx > 0 ? 2 : (m.dx < 0 ? 0 : 1));
        ch.sign_dy_symbols.push_back(m.dy > 0 ? 2 : (m.dy < 0 ? 0 : 1));
        const double l1 = std::abs(m.dx) + std::abs(m.dy);
        ch.magnitude_symbols.push_back(
            std::min(6, static_cast<int>(std::floor(std::log2(l1 + 1.0)))));
        if (m.dx != 0 || m.dy != 0) {
            const double angle =
                std::atan2(static_cast<double>(m.dy), static_cast<double>(m.dx));
            ch.octant_symbols.push_back(
                std::clamp(static_cast<int>(std::floor((angle + M_PI) / (M_PI / 4.0))), 0, 7));
        }
        if (l1 == 1.0) ++ch.micro_moves;
        if (std::sqrt(static_cast<double>(m.dx) * m.dx + static_cast<double>(m.dy) * m.dy) >
            20.0)
            ++ch.large_jumps;
        if (i > 0)
            ch.interevent_ms.push_back(static_cast<double>(m.t_ms - ch.motions[i - 1].t_ms));
    }

    // bursts and pauses
    std::vector<std::pair<std::size_t, std::size_t>> burst_ranges; // [first, last]
    {
        std::size_t start = 0;
        for (std::size_t i = 1; i <= ch.motions.size(); ++i) {
            const bool boundary =
                i == ch.motions.size() ||
                ch.motions[i].t_ms - ch.motions[i - 1].t_ms > kMotionBurstGapMs;
            if (boundary && i > start) {
                burst_ranges.push_back({start, i - 1});
                if (i < ch.motions.size())
                    ch.pause_s.push_back(
                        static_cast<double>(ch.motions[i].t_ms - ch.motions[i - 1].t_ms) /
                        1000.0);
                start = i;
            }
        }
    }
    for (const auto& [first, last] : burst_ranges) {
        ch.burst_s.push_back(
            static_cast<double>(ch.motions[last].t_ms - ch.motions[first].t_ms) / 1000.0);
        double path = 0.0;
        for (std::size_t i = first; i <= last; ++i)
            path += std::sqrt(static_cast<double>(ch.motions[i].dx) * ch.motions[i].dx +
                              static_cast<double>(ch.motions[i].dy) * ch.motions[i].dy);
        ch.burst_path_px.push_back(path);
    }

    // uniform resample of cumulative displacement
    if (ch.window_ms > 0 && !ch.motions.empty()) {
        const auto grid = static_cast<std::size_t>(ch.window_s * kResampleHz) + 1;
        std::vector<double> cumx(ch.motions.size()), cumy(ch.motions.size());
        double ax = 0.0, ay = 0.0;
        for (std::size_t i = 0; i < ch.motions.size(); ++i) {
            ax += ch.motions[i].dx;
            ay += ch.motions[i].dy;
            cumx[i] = ax;
            cumy[i] = ay;
        }
        auto sample = [&](const std::vector<double>& cum, double t_ms) {
            if (t_ms <= static_cast<double>(ch.motions.front().t_ms)) return 0.0;
            if (t_ms >= static_cast<double>(ch.motions.back().t_ms)) return cum.back();
            const auto key = static_cast<std::int64_t>(t_ms);
            auto it = std::upper_bound(
                ch.motions.begin(), ch.motions.end(), key,
                [](std::int64_t t, const MotionSample& m) { return t < m.t_ms; });
            const auto hi = static_cast<std::size_t>(it - ch.motions.begin());
            const auto lo = hi - 1;
            const double t0 = static_cast<double>(ch.motions[lo].t_ms);
            const double t1 = static_cast<double>(ch.motions[hi].t_ms);
            const double frac = t1 > t0 ? (t_ms - t0) / (t1 - t0) : 1.0;
            return cum[lo] + frac * (cum[hi] - cum[lo]);
        };
        const double step_ms = 1000.0 / kResampleHz;
        std::vector<double> gx(grid), gy(grid);
        for (std::size_t k = 0; k < grid; ++k) {
            gx[k] = sample(cumx, static_cast<double>(k) * step_ms);
            gy[k] = sample(cumy, static_cast<double>(k) * step_ms);
        }
        if (grid > 1) {
            ch.vx_series.resize(grid - 1);
            ch.vy_series.resize(grid - 1);
            ch.speed_series.resize(grid - 1);
            for (std::size_t k = 0; k + 1 < grid; ++k) {
                ch.vx_series[k] = (gx[k + 1] - gx[k]) * kResampleHz;
                ch.vy_series[k] = (gy[k + 1] - gy[k]) * kResampleHz;
                ch.speed_series[k] = std::sqrt(ch.vx_series[k] * ch.vx_series[k] +
                                               ch.vy_series[k] * ch.vy_series[k]);
            }
        }
    }

    for (double s : ch.event_speeds)
        if (s > kFlickSpeedPxS) ++ch.flick_turns;

    // ---- clicks --------------------------------------------------------------
    std::map<std::int32_t, std::int64_t> open_buttons;
    std::vector<std::int64_t> fire_press_times;
    std::vector<std::pair<std::int64_t, std::int64_t>> fire_spans;
    std::map<std::int32_t, std::int64_t> open_fire;
    for (const auto& [t, b] : button_events) {
        if (b.state == ButtonState::pressed) {
            ch.clicks.push_back({t, b.button_id, b.action});
            open_buttons[b.button_id] = t;
            if (b.action == Action::shoot) {
                ++ch.fire_clicks;
                fire_press_times.push_back(t);
                open_fire[b.button_id] = t;
            }
            if (b.button_id == 1) ++ch.left_clicks;
            if (b.button_id == 3) ++ch.right_clicks;
        } else {
            if (auto it = open_buttons.find(b.button_id); it != open_buttons.end()) {
                ch.click_hold_ms.push_back(static_cast<double>(t - it->second));
                open_buttons.erase(it);
            }
            if (auto it = open_fire.find(b.button_id); it != open_fire.end()) {
                fire_spans.push_back({it->second, t});
                open_fire.erase(it);
            }
        }
    }
    for (const auto& [button, t0] : open_fire) fire_spans.push_back({t0, ch.window_ms});
    std::sort(fire_spans.begin(), fire_spans.end());
    ch.click_count = static_cast<int>(ch.clicks.size());
    for (std::size_t i = 1; i < ch.clicks.size(); ++i) {
        const auto gap = ch.clicks[i].t_ms - ch.clicks[i - 1].t_ms;
        ch.interclick_ms.push_back(static_cast<double>(gap));
        if (gap <= kDoubleClickMs) ++ch.double_clicks;
    }
    for (const auto& c : ch.clicks) ch.button_symbols.push_back(c.button_id);
    for (std::size_t i = 1; i < fire_press_times.size(); ++i) {
        const auto gap = fire_press_times[i] - fire_press_times[i - 1];
        ch.interfire_s.push_back(static_cast<double>(gap) / 1000.0);
        if (gap <= kDoubleClickMs) ++ch.fire_double_taps;
    }
    {
        int run = fire_press_times.empty() ? 0 : 1;
        for (std::size_t i = 1; i < fire_press_times.size(); ++i) {
            if (fire_press_times[i] - fire_press_times[i - 1] < kDoubleClickMs) {
                ++run;
            } else {
                ch.fire_burst_len.push_back(static_cast<double>(run));
                run = 1;
            }
        }
        if (run > 0) ch.fire_burst_len.push_back(static_cast<double>(run));
    }

    // ---- fire-context motion --------------------------------------------------
    {
        double speed_sum = 0.0;
        int speed_n = 0;
        double fire_path = 0.0;
        const double step_ms = 1000.0 / kResampleHz;
        for (std::size_t k = 0; k < ch.speed_series.size(); ++k) {
            const auto t = static_cast<std::int64_t>(static_cast<double>(k) * step_ms);
            if (inside(fire_spans, t)) {
                speed_sum += ch.speed_series[k];
                ++speed_n;
            }
        }
        ch.speed_while_firing = speed_n > 0 ? speed_sum / speed_n : 0.0;
        for (const auto& m : ch.motions)
            if (inside(fire_spans, m.t_ms))
                fire_path += std::sqrt(static_cast<double>(m.dx) * m.dx +
                                       static_cast<double>(m.dy) * m.dy);
        ch.path_while_firing_frac =
            ch.path_length_px > 0 ? fire_path / ch.path_length_px : 0.0;

        std::vector<double> pre_angles, pre_speeds, settles, post_pauses;
        // per-motion-pair lookups: angle_changes[j] pairs nonzero vectors j, j+1;
        // event_speeds accrues per qualifying gap. For the pre-fire windows a
        // coarse time-indexed view is enough.
        std::vector<std::pair<std::int64_t, double>> timed_angles, timed_speeds;
        {
            std::size_t ai = 0;
            double pdx = 0.0, pdy = 0.0;
            bool have_prev = false;
            for (const auto& m : ch.motions) {
                if (m.dx == 0 && m.dy == 0) continue;
                if (have_prev && ai < ch.angle_changes.size())
                    timed_angles.push_back({m.t_ms, ch.angle_changes[ai++]});
                pdx = m.dx;
                pdy = m.dy;
                have_prev = true;
            }
            std::size_t si = 0;
            for (std::size_t i = 1; i < ch.motions.size() && si < ch.event_speeds.size();
                 ++i) {
                const auto gap = ch.motions[i].t_ms - ch.motions[i - 1].t_ms;
                if (gap > 0 && gap <= kMotionBurstGapMs)
                    timed_speeds.push_back({ch.motions[i].t_ms, ch.event_speeds[si++]});
            }
            (void)pdx;
            (void)pdy;
        }
        std::vector<std::int64_t> xchange_times;
        {
            int last_sign = 0;
            for (const auto& m : ch.motions) {
                const int sx = m.dx > 0 ? 1 : (m.dx < 0 ? -1 : 0);
                if (sx != 0) {
                    if (last_sign != 0 && sx != last_sign) xchange_times.push_back(m.t_ms);
                    last_sign = sx;
                }
            }
        }
        auto window_mean = [](const std::vector<std::pair<std::int64_t, double>>& timed,
                              std::int64_t lo, std::int64_t hi) -> std::optional<double> {
            auto it = std::lower_bound(
                timed.begin(), timed.end(), lo,
                [](const auto& p, std::int64_t t) { return p.first < t; });
            double sum = 0.0;
            int n = 0;
            for (; it != timed.end() && it->first < hi; ++it) {
                sum += it->second;
                ++n;
            }
            if (n == 0) return std::nullopt;
            return sum / n;
        };
        for (std::int64_t tf : fire_press_times) {
            if (const auto a = window_mean(timed_angles, tf - kPreFireWindowMs, tf))
                pre_angles.push_back(*a);
            if (const auto s = window_mean(timed_speeds, tf - kPreFireWindowMs, tf))
                pre_speeds.push_back(*s);
            auto next_motion = std::upper_bound(
                ch.motions.begin(), ch.motions.end(), tf,
                [](std::int64_t t, const MotionSample& m) { return t < m.t_ms; });
            if (next_motion != ch.motions.end())
                post_pauses.push_back(
                    std::min<double>(static_cast<double>(next_motion->t_ms - tf),
                                     static_cast<double>(kPostFirePauseCapMs)));
            auto last_change =
                std::lower_bound(xchange_times.begin(), xchange_times.end(), tf);
            if (last_change != xchange_times.begin()) {
                --last_change;
                settles.push_back(std::min<double>(static_cast<double>(tf - *last_change),
                                                   static_cast<double>(kAimSettleCapMs)));
            }
        }
        ch.pre_fire_turn_angle_mean = mean_of(pre_angles);
        ch.pre_fire_speed_mean = mean_of(pre_speeds);
        ch.post_fire_pause_ms = mean_of(post_pauses);
        ch.aim_settle_ms_mean = mean_of(settles);
    }

    // ---- mixed keyboard + mouse ------------------------------------------------
    {
        struct Tagged {
            std::int64_t t;
            int symbol;
        };
        std::vector<Tagged> tagged;
        for (std::int64_t t : ch.press_times_ms) tagged.push_back({t, 0});
        for (const auto& c : ch.clicks) tagged.push_back({c.t_ms, 1});
        for (const auto& [first, last] : burst_ranges)
            tagged.push_back({ch.motions[first].t_ms, 2});
        std::stable_sort(tagged.begin(), tagged.end(),
                         [](const Tagged& a, const Tagged& b) { return a.t < b.t; });
        for (const auto& tg : tagged) ch.device_symbols.push_back(tg.symbol);
    }
    ch.keys_per_click =
        static_cast<double>(ch.press_times_ms.size()) / std::max(1, ch.click_count);

    {
        std::vector<double> latencies;
        for (std::int64_t t : movement_press_times) {
            auto it = std::lower_bound(fire_press_times.begin(), fire_press_times.end(), t);
            if (it != fire_press_times.end() && *it - t <= 2000)
                latencies.push_back(static_cast<double>(*it - t));
        }
        ch.key_to_fire_latency_ms = mean_of(latencies);
    }

    int fire_clicks_while_moving = 0;
    for (const auto& c : ch.clicks) {
        if (inside(moving_spans, c.t_ms)) ++ch.clicks_while_moving;
        else ++ch.clicks_while_still;
        if (c.action == Action::shoot && inside(moving_spans, c.t_ms))
            ++fire_clicks_while_moving;
    }
    ch.move_fire_overlap_frac =
        ch.fire_clicks > 0 ? static_cast<double>(fire_clicks_while_moving) / ch.fire_clicks
                           : 0.0;
    for (std::int64_t t : ch.press_times_ms)
        if (inside(fire_spans, t)) ++ch.presses_while_fire_held;
    for (std::int64_t t : strafe_reversal_times)
        if (inside(fire_spans, t)) ++ch.movement_reversals_while_firing;
    for (std::int64_t t : fb_reversal_times)
        if (inside(fire_spans, t)) ++ch.movement_reversals_while_firing;

    {
        double in_sum = 0.0, out_sum = 0.0;
        int in_n = 0, out_n = 0;
        const double step_ms = 1000.0 / kResampleHz;
        for (std::size_t k = 0; k < ch.speed_series.size(); ++k) {
            const auto t = static_cast<std::int64_t>(static_cast<double>(k) * step_ms);
            if (inside(moving_spans, t)) {
                in_sum += ch.speed_series[k];
                ++in_n;
            } else {
                out_sum += ch.speed_series[k];
                ++out_n;
            }
        }
        ch.speed_while_movement_keys = in_n > 0 ? in_sum / in_n : 0.0;
        ch.speed_keys_idle = out_n > 0 ? out_sum / out_n : 0.0;
    }

    return ch;
}

// ---------------------------------------------------------------------------
// Catalog construction

namespace {

using Extract = std::function<std::optional<double>(const ChannelCache&)>;

std::optional<double> opt(double v) {
    return std::isfinite(v) ? std::optional(v) : std::nullopt;
}

Extract symbols_lzw(std::vector<int> ChannelCache::* member) {
    return [member](const ChannelCache& ch) -> std::optional<double> {
        const auto& seq = ch.*member;
        if (seq.empty()) return std::nullopt;
        return static_cast<double>(lzw_code_count(seq));
    };
}

Extract symbols_huffman(std::vector<int> ChannelCache::* member) {
    return [member](const ChannelCache& ch) -> std::optional<double> {
        const auto& seq = ch.*member;
        if (seq.empty()) return std::nullopt;
        return static_cast<double>(huffman_bits(seq)) / static_cast<double>(seq.size());
    };
}

Extract symbols_shannon(std::vector<int> ChannelCache::* member) {
    return [member](const ChannelCache& ch) -> std::optional<double> {
        const auto& seq = ch.*member;
        if (seq.empty()) return std::nullopt;
        return shannon_entropy(seq);
    };
}

Extract series_sampen(std::vector<double> ChannelCache::* member) {
    return [member](const ChannelCache& ch) -> std::optional<double> {
        const auto capped = decimate(ch.*member, kSampEnCap);
        if (capped.size() < 4) return std::nullopt;
        return sample_entropy(capped);
    };
}

template <typename Getter>
Extract per_second(Getter getter) {
    return [getter](const ChannelCache& ch) -> std::optional<double> {
        if (ch.window_s <= 0.0) return std::nullopt;
        return static_cast<double>(getter(ch)) / ch.window_s;
    };
}

struct CatalogBuilder {
    std::vector<CatalogEntry> entries;

    void add(std::string name, Hardware hw, FeatureType type, Context ctx, Extract fn,
             double default_value = 0.0) {
        entries.push_back(
            {std::move(name), GroupTags{hw, type, ctx}, default_value, std::move(fn)});
    }

    void add_symbol_triplet(const std::string& prefix,
                            std::vector<int> ChannelCache::* member, Hardware hw,
                            Context ctx) {
        add(prefix + "_lzw", hw, FeatureType::complexity, ctx, symbols_lzw(member));
        add(prefix + "_huffman_bits_per_sym", hw, FeatureType::complexity, ctx,
            symbols_huffman(member));
        add(prefix + "_shannon", hw, FeatureType::complexity, ctx, symbols_shannon(member));
    }
};

const std::vector<Band>& keyboard_bands() {
    static const std::vector<Band> bands{{0.25, 0.5}, {0.5, 1.0}, {1.0, 2.0},
                                         {2.0, 5.0},  {5.0, 10.0}};
    return bands;
}

const std::vector<Band>& speed_bands() {
    static const std::vector<Band> bands{{0.5, 2.0}, {2.0, 5.0}, {5.0, 10.0}, {10.0, 25.0}};
    return bands;
}

const std::vector<Band>& look_bands() {
    static const std::vector<Band> bands{{0.25, 1.0}, {1.0, 2.0}, {2.0, 5.0},
                                         {5.0, 10.0}, {10.0, 25.0}};
    return bands;
}

Extract band_fraction(std::vector<double> ChannelCache::* member, double hz,
                      const std::vector<Band>& bands, std::size_t index, bool smooth) {
    return [member, hz, &bands, index, smooth](const ChannelCache& ch)
               -> std::optional<double> {
        const auto& raw = ch.*member;
        if (raw.size() < 8) return std::nullopt;
        if (!smooth) return dft_band_fractions(raw, hz, bands)[index];
        const auto smoothed = moving_average(raw, 5);
        if (smoothed.size() < 8) return std::nullopt;
        return dft_band_fractions(smoothed, hz, bands)[index];
    };
}

std::vector<CatalogEntry> build_standard_entries() {
    CatalogBuilder b;
    const auto CF = Context::context_free;
    const auto DEP = Context::dependent;
    const char* action_names[10] = {"forward", "backward", "left",     "right",  "jump",
                                    "crouch",  "dash",     "interact", "reload",
                                    "weapon_next"};

    // ------------------------------------------------------------------ keyboard
    // complexity, context-free (14)
    b.add_symbol_triplet("kb_held_set", &ChannelCache::held_set_symbols, Hardware::keyboard,
                         CF);
    b.add_symbol_triplet("kb_key_seq", &ChannelCache::key_id_sequence, Hardware::keyboard,
                         CF);
    b.add("kb_sampen_interpress", Hardware::keyboard, FeatureType::complexity, CF,
          series_sampen(&ChannelCache::interpress_s));
    b.add("kb_sampen_holds", Hardware::keyboard, FeatureType::complexity, CF,
          series_sampen(&ChannelCache::hold_durations_s));
    b.add("kb_sampen_held_count", Hardware::keyboard, FeatureType::complexity, CF,
          series_sampen(&ChannelCache::held_count_series));
    for (std::size_t i = 0; i < keyboard_bands().size(); ++i)
        b.add("kb_dft_held_count_b" + std::to_string(i + 1), Hardware::keyboard,
              FeatureType::complexity, CF,
              band_fraction(&ChannelCache::held_count_series, 1000.0 / kTickMs,
                            keyboard_bands(), i, false));

    // complexity, dependent (24)
    b.add_symbol_triplet("kb_movement_set", &ChannelCache::movement_set_symbols,
                         Hardware::keyboard, DEP);
    for (int mi = 0; mi < 4; ++mi) {
        const std::string base = std::string("kb_key_") + action_names[mi];
        const auto idx = static_cast<std::size_t>(mi);
        b.add(base + "_lzw", Hardware::keyboard, FeatureType::complexity, DEP,
              [idx](const ChannelCache& ch) -> std::optional<double> {
                  if (ch.movement_key_streams.size() <= idx ||
                      ch.movement_key_streams[idx].empty())
                      return std::nullopt;
                  return static_cast<double>(lzw_code_count(ch.movement_key_streams[idx]));
              });
        b.add(base + "_huffman_bits_per_sym", Hardware::keyboard, FeatureType::complexity,
              DEP, [idx](const ChannelCache& ch) -> std::optional<double> {
                  if (ch.movement_key_streams.size() <= idx ||
                      ch.movement_key_streams[idx].empty())
                      return std::nullopt;
                  const auto& s = ch.movement_key_streams[idx];
                  return static_cast<double>(huffman_bits(s)) / static_cast<double>(s.size());
              });
        b.add(base + "_shannon", Hardware::keyboard, FeatureType::complexity, DEP,
              [idx](const ChannelCache& ch) -> std::optional<double> {
                  if (ch.movement_key_streams.size() <= idx ||
                      ch.movement_key_streams[idx].empty())
                      return std::nullopt;
                  return shannon_entropy(ch.movement_key_streams[idx]);
              });
    }
    b.add_symbol_triplet("kb_action_seq", &ChannelCache::action_sequence, Hardware::keyboard,
                         DEP);
    b.add("kb_sampen_movement_interpress", Hardware::keyboard, FeatureType::complexity, DEP,
          series_sampen(&ChannelCache::movement_interpress_s));
    for (std::size_t i = 0; i < keyboard_bands().size(); ++i)
        b.add("kb_dft_movement_held_b" + std::to_string(i + 1), Hardware::keyboard,
              FeatureType::complexity, DEP,
              band_fraction(&ChannelCache::movement_held_count_series, 1000.0 / kTickMs,
                            keyboard_bands(), i, false));

    // event frequency (3 CF + 11 D)
    b.add("kb_presses_per_s", Hardware::keyboard, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.press_times_ms.size(); }));
    b.add("kb_releases_per_s", Hardware::keyboard, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.release_count; }));
    b.add("kb_chord_onsets_per_s", Hardware::keyboard, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.chord_onsets; }));
    b.add("kb_movement_presses_per_s", Hardware::keyboard, FeatureType::event_frequency, DEP,
          per_second([](const ChannelCache& ch) {
              int n = 0;
              for (Action a : ch.press_actions)
                  if (is_movement(a)) ++n;
              return n;
          }));
    for (int ai = 0; ai < 10; ++ai) {
        const Action action = kRateActions[ai];
        b.add(std::string("kb_presses_") + action_names[ai] + "_per_s", Hardware::keyboard,
              FeatureType::event_frequency, DEP,
              per_second([action](const ChannelCache& ch) {
                  const auto it = ch.action_press_counts.find(action);
                  return it == ch.action_press_counts.end() ? 0 : it->second;
              }));
    }

    // kinetics, dependent (8)
    b.add("kb_strafe_reversals", Hardware::keyboard, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) { return opt(ch.strafe_reversals); });
    b.add("kb_forward_back_reversals", Hardware::keyboard, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) { return opt(ch.forward_back_reversals); });
    b.add("kb_time_moving_frac", Hardware::keyboard, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.window_s <= 0) return std::nullopt;
              return ch.time_moving_s / ch.window_s;
          });
    b.add("kb_move_burst_mean_s", Hardware::keyboard, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.move_burst_s.empty()) return std::nullopt;
              return mean_of(ch.move_burst_s);
          });
    b.add("kb_move_burst_count", Hardware::keyboard, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) {
              return opt(static_cast<double>(ch.move_burst_s.size()));
          });
    b.add("kb_mean_simul_movement_keys", Hardware::keyboard, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) { return opt(ch.mean_simul_movement_keys); });
    b.add("kb_diagonal_time_frac", Hardware::keyboard, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.window_s <= 0) return std::nullopt;
              return ch.diagonal_time_s / ch.window_s;
          });
    b.add("kb_max_move_burst_s", Hardware::keyboard, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) { return opt(max_of(ch.move_burst_s)); });

    // distribution stats, context-free (11)
    b.add("kb_hold_mean_s", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.hold_durations_s.empty()) return std::nullopt;
              return mean_of(ch.hold_durations_s);
          });
    b.add("kb_hold_std_s", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(stdev_of(ch.hold_durations_s)); });
    b.add("kb_hold_max_s", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(max_of(ch.hold_durations_s)); });
    b.add("kb_interpress_mean_s", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.interpress_s.empty()) return std::nullopt;
              return mean_of(ch.interpress_s);
          });
    b.add("kb_interpress_std_s", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(stdev_of(ch.interpress_s)); });
    b.add("kb_interpress_min_s", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(min_of(ch.interpress_s)); });
    b.add("kb_keys_held_mean", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(ch.mean_keys_held); });
    b.add("kb_keys_held_max", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(static_cast<double>(ch.max_keys_held)); });
    b.add("kb_time_2plus_s", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(ch.time_2plus_s); });
    b.add("kb_press_count", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) {
              return opt(static_cast<double>(ch.press_times_ms.size()));
          });
    b.add("kb_distinct_keys", Hardware::keyboard, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(static_cast<double>(ch.distinct_keys)); });

    // distribution stats, dependent (12)
    b.add("kb_movement_hold_mean_s", Hardware::keyboard, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              std::vector<double> v;
              for (const auto& h : ch.holds)
                  if (is_movement(h.action)) v.push_back(h.seconds());
              if (v.empty()) return std::nullopt;
              return mean_of(v);
          });
    b.add("kb_movement_hold_std_s", Hardware::keyboard, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              std::vector<double> v;
              for (const auto& h : ch.holds)
                  if (is_movement(h.action)) v.push_back(h.seconds());
              if (v.size() < 2) return std::nullopt;
              return stdev_of(v);
          });
    for (int ai = 0; ai < 10; ++ai) {
        const Action action = kRateActions[ai];
        b.add(std::string("kb_hold_") + action_names[ai] + "_mean_s", Hardware::keyboard,
              FeatureType::ungrouped, DEP,
              [action](const ChannelCache& ch) -> std::optional<double> {
                  const auto it = ch.action_hold_mean_s.find(action);
                  if (it == ch.action_hold_mean_s.end()) return std::nullopt;
                  return it->second;
              });
    }

    // ------------------------------------------------------------------ mouse
    // complexity, context-free (16)
    b.add_symbol_triplet("ms_sign_dx", &ChannelCache::sign_dx_symbols, Hardware::mouse, CF);
    b.add_symbol_triplet("ms_sign_dy", &ChannelCache::sign_dy_symbols, Hardware::mouse, CF);
    b.add_symbol_triplet("ms_magnitude", &ChannelCache::magnitude_symbols, Hardware::mouse,
                         CF);
    b.add("ms_sampen_speed", Hardware::mouse, FeatureType::complexity, CF,
          series_sampen(&ChannelCache::speed_series));
    b.add("ms_sampen_vx", Hardware::mouse, FeatureType::complexity, CF,
          series_sampen(&ChannelCache::vx_series));
    b.add("ms_sampen_vy", Hardware::mouse, FeatureType::complexity, CF,
          series_sampen(&ChannelCache::vy_series));
    for (std::size_t i = 0; i < speed_bands().size(); ++i)
        b.add("ms_dft_speed_b" + std::to_string(i + 1), Hardware::mouse,
              FeatureType::complexity, CF,
              band_fraction(&ChannelCache::speed_series, kResampleHz, speed_bands(), i,
                            false));

    // complexity, dependent (15): view-rotation semantics
    b.add_symbol_triplet("ms_look_octant", &ChannelCache::octant_symbols, Hardware::mouse,
                         DEP);
    b.add("ms_sampen_yaw_rate", Hardware::mouse, FeatureType::complexity, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              const auto capped = decimate(moving_average(ch.vx_series, 5), kSampEnCap);
              if (capped.size() < 4) return std::nullopt;
              return sample_entropy(capped);
          });
    b.add("ms_sampen_pitch_rate", Hardware::mouse, FeatureType::complexity, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              const auto capped = decimate(moving_average(ch.vy_series, 5), kSampEnCap);
              if (capped.size() < 4) return std::nullopt;
              return sample_entropy(capped);
          });
    for (std::size_t i = 0; i < look_bands().size(); ++i)
        b.add("ms_dft_yaw_b" + std::to_string(i + 1), Hardware::mouse,
              FeatureType::complexity, DEP,
              band_fraction(&ChannelCache::vx_series, kResampleHz, look_bands(), i, true));
    for (std::size_t i = 0; i < look_bands().size(); ++i)
        b.add("ms_dft_pitch_b" + std::to_string(i + 1), Hardware::mouse,
              FeatureType::complexity, DEP,
              band_fraction(&ChannelCache::vy_series, kResampleHz, look_bands(), i, true));

    // event frequency (5 CF + 3 D)
    b.add("ms_motion_events_per_s", Hardware::mouse, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.motions.size(); }));
    b.add("ms_bursts_per_s", Hardware::mouse, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.burst_s.size(); }));
    b.add("ms_pauses_per_s", Hardware::mouse, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.pause_s.size(); }));
    b.add("ms_micro_moves_per_s", Hardware::mouse, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.micro_moves; }));
    b.add("ms_large_jumps_per_s", Hardware::mouse, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.large_jumps; }));
    b.add("ms_turn_reversals_per_s", Hardware::mouse, FeatureType::event_frequency, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.window_s <= 0) return std::nullopt;
              return sign_changes(moving_average(ch.vx_series, 5)) / ch.window_s;
          });
    b.add("ms_pitch_reversals_per_s", Hardware::mouse, FeatureType::event_frequency, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.window_s <= 0) return std::nullopt;
              return sign_changes(moving_average(ch.vy_series, 5)) / ch.window_s;
          });
    b.add("ms_flick_turns_per_s", Hardware::mouse, FeatureType::event_frequency, DEP,
          per_second([](const ChannelCache& ch) { return ch.flick_turns; }));

    // kinetics (5 CF + 6 D)
    b.add("ms_x_dir_changes", Hardware::mouse, FeatureType::kinetics, CF,
          [](const ChannelCache& ch) { return opt(static_cast<double>(ch.x_dir_changes)); });
    b.add("ms_y_dir_changes", Hardware::mouse, FeatureType::kinetics, CF,
          [](const ChannelCache& ch) { return opt(static_cast<double>(ch.y_dir_changes)); });
    b.add("ms_mean_angle_change", Hardware::mouse, FeatureType::kinetics, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.angle_changes.empty()) return std::nullopt;
              return mean_of(ch.angle_changes);
          });
    b.add("ms_path_length_px", Hardware::mouse, FeatureType::kinetics, CF,
          [](const ChannelCache& ch) { return opt(ch.path_length_px); });
    b.add("ms_mean_speed", Hardware::mouse, FeatureType::kinetics, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.event_speeds.empty()) return std::nullopt;
              return mean_of(ch.event_speeds);
          });
    b.add("ms_mean_yaw_speed", Hardware::mouse, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.vx_series.empty()) return std::nullopt;
              double acc = 0.0;
              for (double v : ch.vx_series) acc += std::abs(v);
              return acc / static_cast<double>(ch.vx_series.size());
          });
    b.add("ms_max_yaw_speed", Hardware::mouse, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.vx_series.empty()) return std::nullopt;
              double best = 0.0;
              for (double v : ch.vx_series) best = std::max(best, std::abs(v));
              return best;
          });
    b.add("ms_net_yaw_px", Hardware::mouse, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) { return opt(ch.net_yaw_px); });
    b.add("ms_net_pitch_px", Hardware::mouse, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) { return opt(ch.net_pitch_px); });
    b.add("ms_speed_while_firing", Hardware::mouse, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) { return opt(ch.speed_while_firing); });
    b.add("ms_path_while_firing_frac", Hardware::mouse, FeatureType::kinetics, DEP,
          [](const ChannelCache& ch) { return opt(ch.path_while_firing_frac); });

    // distribution stats (11 CF + 5 D)
    b.add("ms_mean_abs_dx", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.motions.empty()) return std::nullopt;
              double acc = 0.0;
              for (const auto& m : ch.motions) acc += std::abs(m.dx);
              return acc / static_cast<double>(ch.motions.size());
          });
    b.add("ms_mean_abs_dy", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.motions.empty()) return std::nullopt;
              double acc = 0.0;
              for (const auto& m : ch.motions) acc += std::abs(m.dy);
              return acc / static_cast<double>(ch.motions.size());
          });
    b.add("ms_std_dx", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.motions.size() < 2) return std::nullopt;
              std::vector<double> v;
              v.reserve(ch.motions.size());
              for (const auto& m : ch.motions) v.push_back(m.dx);
              return stdev_of(v);
          });
    b.add("ms_std_dy", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.motions.size() < 2) return std::nullopt;
              std::vector<double> v;
              v.reserve(ch.motions.size());
              for (const auto& m : ch.motions) v.push_back(m.dy);
              return stdev_of(v);
          });
    b.add("ms_max_speed", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(max_of(ch.event_speeds)); });
    b.add("ms_std_speed", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(stdev_of(ch.event_speeds)); });
    b.add("ms_median_speed", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(median_of(ch.event_speeds)); });
    b.add("ms_burst_mean_s", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.burst_s.empty()) return std::nullopt;
              return mean_of(ch.burst_s);
          });
    b.add("ms_pause_mean_s", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.pause_s.empty()) return std::nullopt;
              return mean_of(ch.pause_s);
          });
    b.add("ms_interevent_mean_ms", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.interevent_ms.empty()) return std::nullopt;
              return mean_of(ch.interevent_ms);
          });
    b.add("ms_interevent_std_ms", Hardware::mouse, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(stdev_of(ch.interevent_ms)); });
    b.add("ms_pre_fire_turn_angle_mean", Hardware::mouse, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) { return opt(ch.pre_fire_turn_angle_mean); });
    b.add("ms_pre_fire_speed_mean", Hardware::mouse, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) { return opt(ch.pre_fire_speed_mean); });
    b.add("ms_post_fire_pause_ms", Hardware::mouse, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) { return opt(ch.post_fire_pause_ms); });
    b.add("ms_aim_settle_ms_mean", Hardware::mouse, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) { return opt(ch.aim_settle_ms_mean); });
    b.add("ms_yaw_pitch_ratio", Hardware::mouse, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.motions.empty()) return std::nullopt;
              double ax = 0.0, ay = 0.0;
              for (const auto& m : ch.motions) {
                  ax += std::abs(m.dx);
                  ay += std::abs(m.dy);
              }
              return ax / std::max(1.0, ay);
          });

    // ------------------------------------------------------------------ clicks
    b.add_symbol_triplet("ck_buttons", &ChannelCache::button_symbols, Hardware::clicks, CF);
    b.add("ck_sampen_interfire", Hardware::clicks, FeatureType::complexity, DEP,
          series_sampen(&ChannelCache::interfire_s));
    b.add("ck_clicks_per_s", Hardware::clicks, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.click_count; }));
    b.add("ck_left_clicks_per_s", Hardware::clicks, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.left_clicks; }));
    b.add("ck_right_clicks_per_s", Hardware::clicks, FeatureType::event_frequency, CF,
          per_second([](const ChannelCache& ch) { return ch.right_clicks; }));
    b.add("ck_fire_clicks_per_s", Hardware::clicks, FeatureType::event_frequency, DEP,
          per_second([](const ChannelCache& ch) { return ch.fire_clicks; }));
    b.add("ck_fire_double_taps_per_s", Hardware::clicks, FeatureType::event_frequency, DEP,
          per_second([](const ChannelCache& ch) { return ch.fire_double_taps; }));
    b.add("ck_interclick_mean_ms", Hardware::clicks, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.interclick_ms.empty()) return std::nullopt;
              return mean_of(ch.interclick_ms);
          });
    b.add("ck_interclick_std_ms", Hardware::clicks, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(stdev_of(ch.interclick_ms)); });
    b.add("ck_hold_mean_ms", Hardware::clicks, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.click_hold_ms.empty()) return std::nullopt;
              return mean_of(ch.click_hold_ms);
          });
    b.add("ck_hold_max_ms", Hardware::clicks, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(max_of(ch.click_hold_ms)); });
    b.add("ck_fire_burst_len_mean", Hardware::clicks, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) -> std::optional<double> {
              if (ch.fire_burst_len.empty()) return std::nullopt;
              return mean_of(ch.fire_burst_len);
          });

    // --------------------------------------------------- mixed (hardware-ungrouped)
    b.add("mx_device_seq_lzw", Hardware::ungrouped, FeatureType::complexity, CF,
          symbols_lzw(&ChannelCache::device_symbols));
    b.add("mx_device_seq_shannon", Hardware::ungrouped, FeatureType::complexity, CF,
          symbols_shannon(&ChannelCache::device_symbols));
    b.add("mx_clicks_while_moving_per_s", Hardware::ungrouped, FeatureType::event_frequency,
          DEP, per_second([](const ChannelCache& ch) { return ch.clicks_while_moving; }));
    b.add("mx_clicks_while_still_per_s", Hardware::ungrouped, FeatureType::event_frequency,
          DEP, per_second([](const ChannelCache& ch) { return ch.clicks_while_still; }));
    b.add("mx_presses_while_fire_held_per_s", Hardware::ungrouped,
          FeatureType::event_frequency, DEP,
          per_second([](const ChannelCache& ch) { return ch.presses_while_fire_held; }));
    b.add("mx_movement_reversals_while_firing_per_s", Hardware::ungrouped,
          FeatureType::event_frequency, DEP, per_second([](const ChannelCache& ch) {
              return ch.movement_reversals_while_firing;
          }));
    b.add("mx_keys_per_click", Hardware::ungrouped, FeatureType::ungrouped, CF,
          [](const ChannelCache& ch) { return opt(ch.keys_per_click); });
    b.add("mx_move_fire_overlap_frac", Hardware::ungrouped, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) { return opt(ch.move_fire_overlap_frac); });
    b.add("mx_speed_while_movement_keys", Hardware::ungrouped, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) { return opt(ch.speed_while_movement_keys); });
    b.add("mx_speed_keys_idle", Hardware::ungrouped, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) { return opt(ch.speed_keys_idle); });
    b.add("mx_key_to_fire_latency_ms", Hardware::ungrouped, FeatureType::ungrouped, DEP,
          [](const ChannelCache& ch) { return opt(ch.key_to_fire_latency_ms); });

    return b.entries;
}

} // namespace

FeatureCatalog::FeatureCatalog(std::vector<CatalogEntry> entries)
    : entries_(std::move(entries)) {
    std::set<std::string> names;
    for (const auto& e : entries_) {
        if (!e.extract)
            throw std::invalid_argument("catalog entry without extractor: " + e.name);
        if (!names.insert(e.name).second)
            throw std::invalid_argument("duplicate catalog entry: " + e.name);
    }
}

const FeatureCatalog& FeatureCatalog::standard() {
    static const FeatureCatalog catalog(build_standard_entries());
    return catalog;
}

const CatalogEntry* FeatureCatalog::find(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

FeatureVector extract_features(const GameLog& log, const FeatureCatalog& cat,
                               double t_end_s) {
    const ChannelCache ch = build_channels(log, t_end_s);
    FeatureVector out;
    out.window_s = ch.window_s;
    out.game_id = ch.game_id;
    for (const auto& entry : cat.entries()) {
        double value = entry.default_value;
        try {
            if (const auto v = entry.extract(ch); v && std::isfinite(*v)) value = *v;
        } catch (const std::exception&) {
            // degenerate input: keep the declared default
        }
        out.values[entry.name] = value;
    }
    return out;
}

namespace {

bool group_matches(const GroupTags& tags, Scheme scheme, std::string_view group) {
    switch (scheme) {
        case Scheme::hardware: return to_string(tags.hardware) == group;
        case Scheme::type: return to_string(tags.type) == group;
        case Scheme::context: return to_string(tags.context) == group;
    }
    return false;
}

bool group_known(Scheme scheme, std::string_view group) {
    switch (scheme) {
        case Scheme::hardware:
            return group == "Keyboard" || group == "Mouse" || group == "Clicks" ||
                   group == "Ungrouped";
        case Scheme::type:
            return group == "EventFrequency" || group == "Complexity" ||
                   group == "Kinetics" || group == "Ungrouped";
        case Scheme::context:
            return group == "ContextFree" || group == "Dependent";
    }
    return false;
}

} // namespace

FeatureVector group_filter(const FeatureVector& v, const FeatureCatalog& cat, Scheme scheme,
                           std::string_view group_name) {
    if (!group_known(scheme, group_name))
        throw std::invalid_argument("group_filter: unknown group '" +
                                    std::string(group_name) + "' for scheme " +
                                    std::string(to_string(scheme)));
    FeatureVector out;
    out.window_s = v.window_s;
    out.game_id = v.game_id;
    for (const auto& entry : cat.entries()) {
        if (!group_matches(entry.groups, scheme, group_name)) continue;
        if (const auto it = v.values.find(entry.name); it != v.values.end())
            out.values[entry.name] = it->second;
    }
    return out;
}

std::pair<Scheme, std::string> parse_group_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("group spec must look like scheme:Group, got '" +
                                    std::string(spec) + "'");
    const auto scheme_name = spec.substr(0, colon);
    const auto group = std::string(spec.substr(colon + 1));
    Scheme scheme;
    if (scheme_name == "hardware") scheme = Scheme::hardware;
    else if (scheme_name == "type") scheme = Scheme::type;
    else if (scheme_name == "context") scheme = Scheme::context;
    else
        throw std::invalid_argument("unknown grouping scheme '" +
                                    std::string(scheme_name) + "'");
    if (!group_known(scheme, group))
        throw std::invalid_argument("unknown group '" + group + "' for scheme " +
                                    std::string(scheme_name));
    return {scheme, group};
}

std::map<std::string, double> kinetics_features(std::span<const MotionSample> motion) {
    const KineticAggregates agg = motion_kinetics(motion);
    std::map<std::string, double> out;
    out["x_dir_changes"] = agg.x_dir_changes;
    out["y_dir_changes"] = agg.y_dir_changes;
    out["mean_angle_change"] = mean_of(agg.angle_changes);
    out["mean_speed"] = mean_of(agg.event_speeds);
    out["max_speed"] = max_of(agg.event_speeds);
    out["path_length"] = agg.path_length;
    return out;
}

std::map<std::string, double> event_frequency_features(std::span<const Event> events,
                                                       double window_s) {
    if (window_s <= 0.0)
        throw std::invalid_argument("event_frequency_features: window must be positive");
    const auto window_ms = static_cast<std::int64_t>(std::llround(window_s * 1000.0));

    int presses = 0, clicks = 0, motions = 0;
    std::vector<Event> key_events;
    for (const Event& e : events) {
        if (const auto* k = std::get_if<KeyPress>(&e.body)) {
            key_events.push_back(e);
            if (k->state == ButtonState::pressed) ++presses;
        } else if (const auto* btn = std::get_if<MouseButton>(&e.body)) {
            if (btn->state == ButtonState::pressed) ++clicks;
        } else if (std::holds_alternative<MouseMotion>(e.body)) {
            ++motions;
        }
    }
    const auto holds = collect_holds(key_events, window_ms);
    const auto sim = sweep_simultaneity(holds, window_ms);
    std::vector<double> hold_s;
    for (const auto& h : holds) hold_s.push_back(h.seconds());

    std::map<std::string, double> out;
    out["key_presses_per_s"] = presses / window_s;
    out["clicks_per_s"] = clicks / window_s;
    out["motion_events_per_s"] = motions / window_s;
    out["mean_key_hold_s"] = mean_of(hold_s);
    out["mean_keys_held"] = sim.mean_held;
    out["time_2plus_keys_s"] = sim.time_2plus_s;
    return out;
}

FeatureMatrix build_feature_matrix(
    const telemetry::Dataset& data, const FeatureCatalog& cat, double window_s,
    const std::optional<std::pair<Scheme, std::string>>& filter) {
    if (filter && !group_known(filter->first, filter->second))
        throw std::invalid_argument("build_feature_matrix: unknown group");
    std::vector<const CatalogEntry*> selected;
    for (const auto& entry : cat.entries()) {
        if (filter && !group_matches(entry.groups, filter->first, filter->second)) continue;
        selected.push_back(&entry);
    }

    FeatureMatrix out;
    out.window_s = window_s;
    for (const auto* e : selected) out.names.push_back(e->name);
    out.X.resize(static_cast<Eigen::Index>(data.games.size()),
                 static_cast<Eigen::Index>(selected.size()));
    for (std::size_t gi = 0; gi < data.games.size(); ++gi) {
        const auto& game = data.games[gi];
        const auto fv = extract_features(game, cat, window_s);
        for (std::size_t ci = 0; ci < selected.size(); ++ci)
            out.X(static_cast<Eigen::Index>(gi), static_cast<Eigen::Index>(ci)) =
                fv.values.at(selected[ci]->name);
        out.game_ids.push_back(game.meta.game_id);
        out.player_ids.push_back(game.meta.player_id);
    }
    return out;
}

} // namespace skillcap::features
