#include "skillcap/telemetry.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace skillcap::telemetry {

namespace {

struct ActionName {
    Action action;
    std::string_view name;
};

constexpr std::array<ActionName, 13> kActionNames{{
    {Action::none, "none"},
    {Action::forward, "forward"},
    {Action::backward, "backward"},
    {Action::left, "left"},
    {Action::right, "right"},
    {Action::jump, "jump"},
    {Action::crouch, "crouch"},
    {Action::dash, "dash"},
    {Action::interact, "interact"},
    {Action::reload, "reload"},
    {Action::weapon_next, "weapon_next"},
    {Action::shoot, "shoot"},
    {Action::zoom, "zoom"},
}};

constexpr std::array<std::pair<GameKind, std::string_view>, 4> kGameKinds{{
    {GameKind::kill, "kill"},
    {GameKind::death, "death"},
    {GameKind::damage_dealt, "damage_dealt"},
    {GameKind::damage_taken, "damage_taken"},
}};

// Adapter hook for externally produced logs: accepted spellings per
// canonical metadata key. First spelling is the canonical one.
const std::map<std::string_view, std::vector<std::string_view>>& meta_aliases() {
    static const std::map<std::string_view, std::vector<std::string_view>> table{
        {"game_id", {"game_id", "gameID", "gameId", "Game ID"}},
        {"player_id", {"player_id", "playerID", "playerId", "Player ID"}},
        {"client_number", {"client_number", "clientNum", "clientNumber", "Client Number"}},
        {"game_number", {"game_number", "gameNum", "gameNumber", "Game Number"}},
        {"map_name", {"map_name", "map", "mapName", "Map Name"}},
        {"bot_min", {"bot_min", "botmin", "botMin", "Bot Min"}},
        {"bot_max", {"bot_max", "botmax", "botMax", "Bot Max"}},
        {"connect_ms", {"connect_ms", "connect", "connectTime", "Connect time"}},
        {"disconnect_ms", {"disconnect_ms", "disconnect", "disconnectTime", "Disconnect time"}},
        {"scoreboard", {"scoreboard", "scores", "Scoreboard"}},
        {"date_time", {"date_time", "datetime", "dateTime", "Date & time"}},
        {"events", {"events", "log", "event_list"}},
    };
    return table;
}

const json* find_aliased(const json& obj, std::string_view canonical) {
    for (std::string_view alias : meta_aliases().at(canonical)) {
        if (auto it = obj.find(alias); it != obj.end()) return &*it;
    }
    return nullptr;
}

bool is_aliased_key(const std::string& key) {
    for (const auto& [canonical, aliases] : meta_aliases())
        for (std::string_view alias : aliases)
            if (key == alias) return true;
    return false;
}

std::int64_t require_int(const json& obj, std::string_view canonical) {
    const json* v = find_aliased(obj, canonical);
    if (!v) throw SchemaError("missing required metadata field: " + std::string(canonical),
                              std::string(canonical));
    if (v->is_number_integer() || v->is_number_unsigned()) return v->get<std::int64_t>();
    if (v->is_number_float()) return static_cast<std::int64_t>(v->get<double>());
    throw SchemaError("metadata field is not a number: " + std::string(canonical),
                      std::string(canonical));
}

std::string require_string(const json& obj, std::string_view canonical) {
    const json* v = find_aliased(obj, canonical);
    if (!v) throw SchemaError("missing required metadata field: " + std::string(canonical),
                              std::string(canonical));
    if (!v->is_string())
        throw SchemaError("metadata field is not a string: " + std::string(canonical),
                          std::string(canonical));
    return v->get<std::string>();
}

std::int64_t event_int(const json& ev, std::size_t index, const char* key,
                       std::optional<std::int64_t> fallback = std::nullopt) {
    auto it = ev.find(key);
    if (it == ev.end()) {
        if (fallback) return *fallback;
        throw SchemaError("event " + std::to_string(index) + " missing field: " + key,
                          "events[" + std::to_string(index) + "]." + key);
    }
    if (!it->is_number())
        throw SchemaError("event " + std::to_string(index) + " field is not a number: " + key,
                          "events[" + std::to_string(index) + "]." + key);
    return it->is_number_float() ? static_cast<std::int64_t>(it->get<double>())
                                 : it->get<std::int64_t>();
}

ButtonState state_from_json(const json& ev, std::size_t index) {
    auto it = ev.find("state");
    if (it == ev.end()) return ButtonState::pressed;
    if (it->is_string()) {
        const auto s = it->get<std::string>();
        if (s == "pressed" || s == "down" || s == "1") return ButtonState::pressed;
        if (s == "released" || s == "up" || s == "0") return ButtonState::released;
    } else if (it->is_boolean()) {
        return it->get<bool>() ? ButtonState::pressed : ButtonState::released;
    } else if (it->is_number()) {
        return it->get<std::int64_t>() != 0 ? ButtonState::pressed : ButtonState::released;
    }
    throw SchemaError("event " + std::to_string(index) + " has unrecognized state",
                      "events[" + std::to_string(index) + "].state");
}

std::pair<Action, std::string> action_from_json(const json& ev) {
    auto it = ev.find("action");
    if (it == ev.end()) it = ev.find("game_action");
    if (it == ev.end() || it->is_null()) return {Action::none, {}};
    if (!it->is_string()) return {Action::other, it->dump()};
    const auto s = it->get<std::string>();
    const Action a = action_from_string(s);
    return {a, a == Action::other ? s : std::string{}};
}

// Fields other than the structural ones fold into an attributes object.
json collect_extras(const json& ev, std::initializer_list<std::string_view> structural) {
    json extra = json::object();
    for (auto it = ev.begin(); it != ev.end(); ++it) {
        bool known = false;
        for (std::string_view s : structural)
            if (it.key() == s) { known = true; break; }
        if (!known) extra[it.key()] = it.value();
    }
    return extra.empty() ? json() : extra;
}

std::int32_t checked_int32(std::int64_t v, std::size_t index, const char* key) {
    if (v < std::numeric_limits<std::int32_t>::min() ||
        v > std::numeric_limits<std::int32_t>::max())
        throw SchemaError("event " + std::to_string(index) + " field out of range: " + key,
                          "events[" + std::to_string(index) + "]." + key);
    return static_cast<std::int32_t>(v);
}

Event parse_event(const json& ev, std::size_t index, std::int64_t connect_ms) {
    if (!ev.is_object())
        throw SchemaError("event " + std::to_string(index) + " is not an object",
                          "events[" + std::to_string(index) + "]");
    std::int64_t t = 0;
    if (ev.contains("t")) t = event_int(ev, index, "t");
    else if (ev.contains("time")) t = event_int(ev, index, "time");
    else if (ev.contains("timestamp")) t = event_int(ev, index, "timestamp");
    else
        throw SchemaError("event " + std::to_string(index) + " missing field: t",
                          "events[" + std::to_string(index) + "].t");

    std::string type = "game";
    if (auto it = ev.find("type"); it != ev.end() && it->is_string())
        type = it->get<std::string>();

    Event out;
    out.t_ms = t - connect_ms;

    if (type == "key" || type == "keyboard" || type == "keypress") {
        KeyPress k;
        k.key_id = checked_int32(event_int(ev, index, "key_id",
                                           ev.contains("key") ? std::optional<std::int64_t>(
                                                                    event_int(ev, index, "key"))
                                                              : std::nullopt),
                                 index, "key_id");
        k.state = state_from_json(ev, index);
        std::tie(k.action, k.raw_action) = action_from_json(ev);
        k.extra = collect_extras(ev, {"t", "time", "timestamp", "type", "key_id", "key",
                                      "state", "action", "game_action"});
        out.body = std::move(k);
    } else if (type == "button" || type == "mouse_button" || type == "mousebutton" ||
               type == "click") {
        MouseButton b;
        b.button_id = checked_int32(
            event_int(ev, index, "button_id",
                      ev.contains("button")
                          ? std::optional<std::int64_t>(event_int(ev, index, "button"))
                          : std::nullopt),
            index, "button_id");
        b.state = state_from_json(ev, index);
        std::tie(b.action, b.raw_action) = action_from_json(ev);
        b.extra = collect_extras(ev, {"t", "time", "timestamp", "type", "button_id", "button",
                                      "state", "action", "game_action"});
        out.body = std::move(b);
    } else if (type == "motion" || type == "mouse_motion" || type == "mousemotion" ||
               type == "move") {
        MouseMotion m;
        m.dx = checked_int32(event_int(ev, index, "dx",
                                       ev.contains("x") ? std::optional<std::int64_t>(
                                                              event_int(ev, index, "x"))
                                                        : std::nullopt),
                             index, "dx");
        m.dy = checked_int32(event_int(ev, index, "dy",
                                       ev.contains("y") ? std::optional<std::int64_t>(
                                                              event_int(ev, index, "y"))
                                                        : std::nullopt),
                             index, "dy");
        m.extra = collect_extras(ev, {"t", "time", "timestamp", "type", "dx", "dy", "x", "y"});
        out.body = std::move(m);
    } else {
        GameEvent g;
        std::string kind = type;
        if (type == "game" || type == "game_event" || type == "gameevent") {
            auto it = ev.find("kind");
            if (it == ev.end()) it = ev.find("event");
            kind = (it != ev.end() && it->is_string()) ? it->get<std::string>() : "other";
        }
        g.kind = game_kind_from_string(kind);
        g.raw_kind = kind;
        json attrs = collect_extras(ev, {"t", "time", "timestamp", "type", "kind", "event",
                                         "attributes"});
        if (auto it = ev.find("attributes"); it != ev.end() && it->is_object()) {
            if (attrs.is_null()) attrs = *it;
            else
                for (auto a = it->begin(); a != it->end(); ++a) attrs[a.key()] = a.value();
        }
        g.attributes = std::move(attrs);
        out.body = std::move(g);
    }
    return out;
}

ScoreEntry parse_score_entry(const json& v, const std::string& key) {
    ScoreEntry e;
    if (v.is_number()) { // shorthand: bare points value
        e.points = v.is_number_float() ? static_cast<std::int64_t>(v.get<double>())
                                       : v.get<std::int64_t>();
        return e;
    }
    if (!v.is_object())
        throw SchemaError("scoreboard entry is not an object: " + key,
                          "scoreboard." + key);
    auto p = v.find("points");
    if (p == v.end() || !p->is_number())
        throw SchemaError("scoreboard entry missing points: " + key,
                          "scoreboard." + key + ".points");
    e.points = p->is_number_float() ? static_cast<std::int64_t>(p->get<double>())
                                    : p->get<std::int64_t>();
    if (auto k = v.find("kills"); k != v.end() && k->is_number())
        e.kills = k->is_number_float() ? static_cast<std::int64_t>(k->get<double>())
                                       : k->get<std::int64_t>();
    json extra = json::object();
    for (auto it = v.begin(); it != v.end(); ++it)
        if (it.key() != "points" && it.key() != "kills") extra[it.key()] = it.value();
    if (!extra.empty()) e.extra = std::move(extra);
    return e;
}

json event_to_json(const Event& e, std::int64_t connect_ms) {
    json out;
    out["t"] = e.t_ms + connect_ms;
    std::visit(
        [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, KeyPress>) {
                out["type"] = "key";
                out["key_id"] = body.key_id;
                out["state"] = body.state == ButtonState::pressed ? "pressed" : "released";
                if (body.action == Action::other) out["action"] = body.raw_action;
                else if (body.action != Action::none) out["action"] = to_string(body.action);
                if (body.extra.is_object())
                    for (auto it = body.extra.begin(); it != body.extra.end(); ++it)
                        out[it.key()] = it.value();
            } else if constexpr (std::is_same_v<T, MouseButton>) {
                out["type"] = "button";
                out["button_id"] = body.button_id;
                out["state"] = body.state == ButtonState::pressed ? "pressed" : "released";
                if (body.action == Action::other) out["action"] = body.raw_action;
                else if (body.action != Action::none) out["action"] = to_string(body.action);
                if (body.extra.is_object())
                    for (auto it = body.extra.begin(); it != body.extra.end(); ++it)
                        out[it.key()] = it.value();
            } else if constexpr (std::is_same_v<T, MouseMotion>) {
                out["type"] = "motion";
                out["dx"] = body.dx;
                out["dy"] = body.dy;
                if (body.extra.is_object())
                    for (auto it = body.extra.begin(); it != body.extra.end(); ++it)
                        out[it.key()] = it.value();
            } else {
                out["type"] = "game";
                out["kind"] = body.raw_kind.empty() ? std::string(to_string(body.kind))
                                                    : body.raw_kind;
                if (!body.attributes.is_null()) out["attributes"] = body.attributes;
            }
        },
        e.body);
    return out;
}

} // namespace

std::string_view to_string(Action a) {
    for (const auto& [action, name] : kActionNames)
        if (action == a) return name;
    return "other";
}

std::string_view to_string(GameKind k) {
    for (const auto& [kind, name] : kGameKinds)
        if (kind == k) return name;
    return "other";
}

Action action_from_string(std::string_view s) {
    for (const auto& [action, name] : kActionNames)
        if (name == s) return action;
    if (s == "back") return Action::backward;
    if (s == "fire" || s == "attack") return Action::shoot;
    if (s == "use") return Action::interact;
    return Action::other;
}

GameKind game_kind_from_string(std::string_view s) {
    for (const auto& [kind, name] : kGameKinds)
        if (name == s) return kind;
    if (s == "damage") return GameKind::damage_dealt;
    return GameKind::other;
}

std::string_view to_string(FpsPlayed f) {
    switch (f) {
        case FpsPlayed::never: return "Never";
        case FpsPlayed::one_or_two: return "1 or 2";
        case FpsPlayed::two_to_five: return "2-5";
        case FpsPlayed::five_to_ten: return "5-10";
        case FpsPlayed::ten_plus: return "10+";
    }
    return "Never";
}

std::string_view to_string(HoursPerWeek h) {
    switch (h) {
        case HoursPerWeek::under_two: return "<2";
        case HoursPerWeek::two_to_five: return "2-5";
        case HoursPerWeek::five_to_ten: return "5-10";
        case HoursPerWeek::ten_plus: return "10+";
    }
    return "<2";
}

std::optional<FpsPlayed> fps_played_from_string(std::string_view s) {
    if (s == "Never" || s == "never" || s == "0") return FpsPlayed::never;
    if (s == "1 or 2" || s == "1-2") return FpsPlayed::one_or_two;
    if (s == "2-5") return FpsPlayed::two_to_five;
    if (s == "5-10") return FpsPlayed::five_to_ten;
    if (s == "10+") return FpsPlayed::ten_plus;
    return std::nullopt;
}

std::optional<HoursPerWeek> hours_from_string(std::string_view s) {
    if (s == "<2" || s == "0-2") return HoursPerWeek::under_two;
    if (s == "2-5") return HoursPerWeek::two_to_five;
    if (s == "5-10") return HoursPerWeek::five_to_ten;
    if (s == "10+") return HoursPerWeek::ten_plus;
    return std::nullopt;
}

GameLog parse_game_log(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    if (!doc.is_object())
        throw SchemaError("top-level JSON value must be an object", "(document)");

    GameLog log;
    GameMeta& m = log.meta;
    m.game_id = require_int(doc, "game_id");
    m.player_id = require_int(doc, "player_id");
    m.client_number = static_cast<std::int32_t>(require_int(doc, "client_number"));
    m.game_number = static_cast<std::int32_t>(require_int(doc, "game_number"));
    m.map_name = require_string(doc, "map_name");
    m.bot_min = static_cast<std::int32_t>(require_int(doc, "bot_min"));
    m.bot_max = static_cast<std::int32_t>(require_int(doc, "bot_max"));
    m.connect_ms = require_int(doc, "connect_ms");
    m.disconnect_ms = require_int(doc, "disconnect_ms");
    m.date_time = require_string(doc, "date_time");
    if (m.bot_min > m.bot_max)
        throw SchemaError("bot_min exceeds bot_max", "bot_min");

    const json* sb = find_aliased(doc, "scoreboard");
    if (!sb) throw SchemaError("missing required metadata field: scoreboard", "scoreboard");
    if (!sb->is_object()) throw SchemaError("scoreboard is not an object", "scoreboard");
    for (auto it = sb->begin(); it != sb->end(); ++it) {
        std::int32_t client = 0;
        const auto& key = it.key();
        auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), client);
        if (ec != std::errc() || p != key.data() + key.size())
            throw SchemaError("scoreboard key is not an integer: " + key, "scoreboard." + key);
        log.meta.scoreboard[client] = parse_score_entry(it.value(), key);
    }

    if (const json* evs = find_aliased(doc, "events")) {
        if (!evs->is_array()) throw SchemaError("events is not an array", "events");
        log.events.reserve(evs->size());
        for (std::size_t i = 0; i < evs->size(); ++i)
            log.events.push_back(parse_event((*evs)[i], i, m.connect_ms));
    }

    json extra = json::object();
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!is_aliased_key(it.key())) extra[it.key()] = it.value();
    if (!extra.empty()) m.extra = std::move(extra);

    std::stable_sort(log.events.begin(), log.events.end(),
                     [](const Event& a, const Event& b) { return a.t_ms < b.t_ms; });
    return log;
}

std::string serialize_game_log(const GameLog& log) {
    const GameMeta& m = log.meta;
    json doc;
    doc["game_id"] = m.game_id;
    doc["player_id"] = m.player_id;
    doc["client_number"] = m.client_number;
    doc["game_number"] = m.game_number;
    doc["map_name"] = m.map_name;
    doc["bot_min"] = m.bot_min;
    doc["bot_max"] = m.bot_max;
    doc["connect_ms"] = m.connect_ms;
    doc["disconnect_ms"] = m.disconnect_ms;
    doc["date_time"] = m.date_time;
    json sb = json::object();
    for (const auto& [client, entry] : m.scoreboard) {
        json e;
        e["points"] = entry.points;
        if (entry.kills) e["kills"] = *entry.kills;
        if (entry.extra.is_object())
            for (auto it = entry.extra.begin(); it != entry.extra.end(); ++it)
                e[it.key()] = it.value();
        sb[std::to_string(client)] = std::move(e);
    }
    doc["scoreboard"] = std::move(sb);
    json evs = json::array();
    for (const Event& e : log.events) evs.push_back(event_to_json(e, m.connect_ms));
    doc["events"] = std::move(evs);
    if (m.extra.is_object())
        for (auto it = m.extra.begin(); it != m.extra.end(); ++it)
            if (!doc.contains(it.key())) doc[it.key()] = it.value();
    return doc.dump();
}

ValidationReport validate(const GameLog& log) {
    ValidationReport report;
    const GameMeta& m = log.meta;
    auto error = [&](std::string msg) {
        report.push_back({ValidationIssue::Severity::error, std::move(msg)});
    };
    auto warn = [&](std::string msg) {
        report.push_back({ValidationIssue::Severity::warn, std::move(msg)});
    };

    if (m.bot_min > m.bot_max)
        error("bot_min " + std::to_string(m.bot_min) + " exceeds bot_max " +
              std::to_string(m.bot_max));
    if (m.bot_min < 0 || m.bot_max > 101)
        warn("bot difficulty range outside 0..101");
    if (m.connect_ms >= m.disconnect_ms)
        error("connect_ms is not before disconnect_ms");
    if (m.scoreboard.empty())
        error("scoreboard is empty");
    else if (!m.scoreboard.contains(m.client_number))
        error("scoreboard has no entry for client_number " + std::to_string(m.client_number));

    const std::int64_t duration = m.duration_ms();
    constexpr std::int64_t kGapWarnMs = 15'000;
    std::int64_t prev = 0; // game start counts as the first gap boundary
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const std::int64_t t = log.events[i].t_ms;
        if (t < 0 || (duration > 0 && t > duration))
            error("event " + std::to_string(i) + " timestamp " + std::to_string(t) +
                  " outside [0, " + std::to_string(duration) + "]");
        if (i > 0 && t < log.events[i - 1].t_ms)
            error("event " + std::to_string(i) + " out of timestamp order");
        if (t - prev > kGapWarnMs)
            warn("data gap of " + std::to_string((t - prev) / 1000) + " s before event " +
                 std::to_string(i) + " (t=" + std::to_string(t) + " ms)");
        prev = std::max(prev, t);
    }
    if (duration > 0 && duration - prev > kGapWarnMs)
        warn("data gap of " + std::to_string((duration - prev) / 1000) +
             " s at end of game");
    return report;
}

GameLog slice_window(const GameLog& log, double t_end_s) {
    if (t_end_s < 0.0 || !std::isfinite(t_end_s))
        throw std::invalid_argument("slice_window: t_end must be non-negative");
    const auto cutoff =
        static_cast<std::int64_t>(std::llround(t_end_s * 1000.0));
    GameLog out;
    out.meta = log.meta;
    out.meta.effective_duration_s = std::min(t_end_s, log.meta.duration_s());
    out.events.reserve(log.events.size());
    for (const Event& e : log.events)
        if (e.t_ms <= cutoff) out.events.push_back(e);
    return out;
}

Dataset select_study_games(Dataset data, int min_games, int max_game_number) {
    std::map<std::int64_t, int> counts;
    for (const auto& g : data.games) counts[g.meta.player_id]++;

    std::vector<GameLog> kept;
    kept.reserve(data.games.size());
    for (auto& g : data.games) {
        if (counts[g.meta.player_id] < min_games) continue;
        if (g.meta.game_number >= max_game_number) continue;
        kept.push_back(std::move(g));
    }
    data.games = std::move(kept);

    std::map<std::int64_t, PlayerLabels> players;
    for (const auto& g : data.games) {
        if (auto it = data.players.find(g.meta.player_id); it != data.players.end())
            players[g.meta.player_id] = it->second;
    }
    data.players = std::move(players);
    return data;
}

std::map<std::int64_t, PlayerLabels> parse_player_labels(const json& doc) {
    std::map<std::int64_t, PlayerLabels> out;
    if (!doc.is_object()) throw SchemaError("players document must be an object", "(players)");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        std::int64_t id = 0;
        const auto& key = it.key();
        auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
        if (ec != std::errc() || p != key.data() + key.size())
            throw SchemaError("player key is not an integer: " + key, "players." + key);
        PlayerLabels labels;
        if (it->is_object()) {
            if (auto f = it->find("fps_played"); f != it->end() && f->is_string())
                labels.fps_played = fps_played_from_string(f->get<std::string>());
            if (auto h = it->find("hours"); h != it->end() && h->is_string())
                labels.hours = hours_from_string(h->get<std::string>());
        }
        out[id] = labels;
    }
    return out;
}

json player_labels_to_json(const std::map<std::int64_t, PlayerLabels>& players) {
    json doc = json::object();
    for (const auto& [id, labels] : players) {
        json entry = json::object();
        if (labels.fps_played) entry["fps_played"] = to_string(*labels.fps_played);
        if (labels.hours) entry["hours"] = to_string(*labels.hours);
        doc[std::to_string(id)] = std::move(entry);
    }
    return doc;
}

Dataset load_dataset(const std::vector<std::filesystem::path>& log_files,
                     const std::optional<std::filesystem::path>& players_json,
                     std::vector<LoadIssue>* issues) {
    Dataset data;
    for (const auto& path : log_files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            if (issues) issues->push_back({path, "cannot open file"});
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            data.games.push_back(parse_game_log(buf.str()));
        } catch (const std::exception& e) {
            if (issues) issues->push_back({path, e.what()});
        }
    }
    if (players_json) {
        std::ifstream in(*players_json, std::ios::binary);
        if (in) {
            try {
                data.players = parse_player_labels(json::parse(in));
            } catch (const std::exception& e) {
                if (issues) issues->push_back({*players_json, e.what()});
            }
        } else if (issues) {
            issues->push_back({*players_json, "cannot open file"});
        }
    }
    return data;
}

std::vector<std::filesystem::path> find_log_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) return files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto& p = entry.path();
        if (p.extension() == ".json" && p.filename() != "players.json" &&
            p.filename() != "config.json")
            files.push_back(p);
    }
    std::sort(files.begin(), files.end());
    return files;
}

} // namespace skillcap::telemetry
