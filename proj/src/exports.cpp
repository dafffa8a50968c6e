#include "skillcap/exports.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace skillcap::exports {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << content;
}

std::string opt_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

std::string range_key(const rating::BotRange& range) {
    return std::to_string(range.first) + "-" + std::to_string(range.second);
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_game_metrics_csv(const std::filesystem::path& path,
                            const std::vector<GameMetricsRow>& rows) {
    std::ostringstream out;
    out << "game_id,player_id,game_number,map_name,bot_min,bot_max,rank,score,kdr,"
           "accuracy,deaths\n";
    for (const auto& r : rows) {
        out << r.game_id << ',' << r.player_id << ',' << r.game_number << ',' << r.map_name
            << ',' << r.bot_min << ',' << r.bot_max << ',' << r.perf.rank << ','
            << r.perf.score << ',' << opt_cell(r.perf.kdr) << ',' << opt_cell(r.perf.accuracy)
            << ',';
        if (r.perf.deaths) out << *r.perf.deaths;
        out << '\n';
    }
    write_file(path, out.str());
}

void write_player_metrics_csv(const std::filesystem::path& path,
                              const std::vector<PlayerMetricsRow>& rows) {
    std::ostringstream out;
    out << "player_id,n_games,mean_rank,mean_score,mean_kdr,mean_accuracy,mean_deaths,"
           "score_group,fps_played,hours,trueskill_mu,trueskill_sigma,trueskill_t\n";
    for (const auto& r : rows) {
        out << r.player_id << ',' << r.skill.n_games << ','
            << format_double(r.skill.mean_rank) << ',' << format_double(r.skill.mean_score)
            << ',' << opt_cell(r.skill.mean_kdr) << ',' << opt_cell(r.skill.mean_accuracy)
            << ',' << opt_cell(r.skill.mean_deaths) << ',' << metrics::to_string(r.group)
            << ',';
        if (r.skill.fps_played) out << telemetry::to_string(*r.skill.fps_played);
        out << ',';
        if (r.skill.hours) out << telemetry::to_string(*r.skill.hours);
        out << ',' << opt_cell(r.trueskill_mu) << ',' << opt_cell(r.trueskill_sigma) << ','
            << opt_cell(r.trueskill_t) << '\n';
    }
    write_file(path, out.str());
}

void write_correlation_csv(const std::filesystem::path& path,
                           const stats::CorrelationMatrix& m) {
    std::ostringstream out;
    out << "metric";
    for (const auto& name : m.names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < m.names.size(); ++i) {
        out << m.names[i];
        for (std::size_t j = 0; j < m.names.size(); ++j)
            out << ','
                << format_double(m.rho(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(j)));
        out << '\n';
    }
    write_file(path, out.str());
}

void write_feature_matrix_csv(const std::filesystem::path& path,
                              const std::vector<features::FeatureMatrix>& windows) {
    std::ostringstream out;
    out << "game_id,player_id,window_s";
    if (!windows.empty())
        for (const auto& name : windows.front().names) out << ',' << name;
    out << '\n';
    for (const auto& m : windows) {
        for (Eigen::Index row = 0; row < m.X.rows(); ++row) {
            out << m.game_ids[static_cast<std::size_t>(row)] << ','
                << m.player_ids[static_cast<std::size_t>(row)] << ','
                << format_double(m.window_s);
            for (Eigen::Index col = 0; col < m.X.cols(); ++col)
                out << ',' << format_double(m.X(row, col));
            out << '\n';
        }
    }
    write_file(path, out.str());
}

nlohmann::json catalog_to_json(const features::FeatureCatalog& cat) {
    nlohmann::json features_json = nlohmann::json::array();
    for (const auto& e : cat.entries()) {
        features_json.push_back({{"name", e.name},
                                 {"hardware", features::to_string(e.groups.hardware)},
                                 {"type", features::to_string(e.groups.type)},
                                 {"context", features::to_string(e.groups.context)},
                                 {"default", e.default_value}});
    }
    return nlohmann::json{{"format", "skillcap-catalog"},
                          {"version", 1},
                          {"count", cat.size()},
                          {"features", std::move(features_json)}};
}

void write_catalog_json(const std::filesystem::path& path,
                        const features::FeatureCatalog& cat) {
    write_file(path, catalog_to_json(cat).dump(2) + "\n");
}

void write_ratings_json(const std::filesystem::path& path,
                        const std::map<rating::BotRange, rating::Rating>& bot_ratings,
                        const std::map<std::int64_t, rating::Rating>& player_ratings,
                        double k_conservative) {
    nlohmann::json bots = nlohmann::json::object();
    for (const auto& [range, r] : bot_ratings)
        bots[range_key(range)] = {{"mu", r.mu},
                                  {"sigma", r.sigma},
                                  {"t", rating::conservative_estimate(r, k_conservative)}};
    nlohmann::json players = nlohmann::json::object();
    for (const auto& [pid, r] : player_ratings)
        players[std::to_string(pid)] = {
            {"mu", r.mu},
            {"sigma", r.sigma},
            {"t", rating::conservative_estimate(r, k_conservative)}};
    const nlohmann::json doc{{"k_conservative", k_conservative},
                             {"bot_ranges", std::move(bots)},
                             {"players", std::move(players)}};
    write_file(path, doc.dump(2) + "\n");
}

void write_rating_trace_csv(const std::filesystem::path& path,
                            const std::vector<rating::RatingTrace>& trace,
                            double k_conservative) {
    std::ostringstream out;
    out << "player_id,game_number,game_id,mu,sigma,t\n";
    for (const auto& row : trace)
        out << row.player_id << ',' << row.game_number << ',' << row.game_id << ','
            << format_double(row.after.mu) << ',' << format_double(row.after.sigma) << ','
            << format_double(rating::conservative_estimate(row.after, k_conservative))
            << '\n';
    write_file(path, out.str());
}

nlohmann::json eval_report_to_json(const forest::EvalReport& report) {
    nlohmann::json j;
    j["task"] =
        report.task == forest::Task::classification ? "classification" : "regression";
    j["fold_metric"] = report.fold_metric;
    j["mean_metric"] = report.mean_metric;
    j["pooled_metric"] = report.pooled_metric;
    j["class_names"] = report.class_names;
    if (report.confusion.size() > 0) {
        nlohmann::json confusion = nlohmann::json::array();
        for (Eigen::Index i = 0; i < report.confusion.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index k = 0; k < report.confusion.cols(); ++k)
                row.push_back(report.confusion(i, k));
            confusion.push_back(std::move(row));
        }
        j["confusion"] = std::move(confusion);
    }
    nlohmann::json importances = nlohmann::json::array();
    for (const auto& [name, value] : report.importances)
        importances.push_back({{"feature", name}, {"importance", value}});
    j["importances"] = std::move(importances);
    j["warnings"] = report.warnings;
    return j;
}

void write_eval_report_json(const std::filesystem::path& path,
                            const forest::EvalReport& report) {
    write_file(path, eval_report_to_json(report).dump(2) + "\n");
}

void write_confusion_csv(const std::filesystem::path& path,
                         const forest::EvalReport& report) {
    std::ostringstream out;
    out << "true\\predicted";
    for (const auto& name : report.class_names) out << ',' << name;
    out << ",total\n";
    for (Eigen::Index i = 0; i < report.confusion.rows(); ++i) {
        out << report.class_names[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 0; k < report.confusion.cols(); ++k)
            out << ',' << report.confusion(i, k);
        out << ',' << report.confusion.row(i).sum() << '\n';
    }
    write_file(path, out.str());
}

void write_curve_csv(const std::filesystem::path& path, const forest::WindowedCurve& curve) {
    std::ostringstream out;
    out << "t_s,metric,baseline\n";
    for (const auto& p : curve.points)
        out << format_double(p.t_s) << ',' << format_double(p.metric) << ','
            << format_double(p.baseline) << '\n';
    write_file(path, out.str());
}

void write_feature_correlation_csv(const std::filesystem::path& path,
                                   const std::vector<FeatureCorrelationRow>& rows) {
    std::ostringstream out;
    out << "feature,hardware,type,context,pearson_r,strong\n";
    for (const auto& r : rows) {
        out << r.name << ',' << features::to_string(r.groups.hardware) << ','
            << features::to_string(r.groups.type) << ','
            << features::to_string(r.groups.context) << ',';
        if (r.defined)
            out << format_double(r.pearson_r) << ','
                << (std::abs(r.pearson_r) >= stats::kStrongCorrelation ? 1 : 0);
        else
            out << ',';
        out << '\n';
    }
    write_file(path, out.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    write_file(path, content);
}

} // namespace skillcap::exports
