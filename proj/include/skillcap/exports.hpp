#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skillcap/features.hpp"
#include "skillcap/forest.hpp"
#include "skillcap/metrics.hpp"
#include "skillcap/rating.hpp"
#include "skillcap/stats.hpp"

namespace skillcap::exports {

/// Deterministic shortest-round-trip float formatting shared by all CSV
/// writers.
std::string format_double(double v);

struct GameMetricsRow {
    std::int64_t game_id = 0;
    std::int64_t player_id = 0;
    std::int32_t game_number = 0;
    std::string map_name;
    int bot_min = 0;
    int bot_max = 0;
    metrics::GamePerformance perf;
};

struct PlayerMetricsRow {
    std::int64_t player_id = 0;
    metrics::PlayerSkill skill;
    metrics::ScoreGroup group = metrics::ScoreGroup::novice;
    std::optional<double> trueskill_mu;
    std::optional<double> trueskill_sigma;
    std::optional<double> trueskill_t;
};

void write_game_metrics_csv(const std::filesystem::path& path,
                            const std::vector<GameMetricsRow>& rows);
void write_player_metrics_csv(const std::filesystem::path& path,
                              const std::vector<PlayerMetricsRow>& rows);

void write_correlation_csv(const std::filesystem::path& path,
                           const stats::CorrelationMatrix& m);

void write_feature_matrix_csv(const std::filesystem::path& path,
                              const std::vector<features::FeatureMatrix>& windows);

/// Catalog sidecar: every entry with its three group tags.
nlohmann::json catalog_to_json(const features::FeatureCatalog& cat);
void write_catalog_json(const std::filesystem::path& path,
                        const features::FeatureCatalog& cat);

void write_ratings_json(const std::filesystem::path& path,
                        const std::map<rating::BotRange, rating::Rating>& bot_ratings,
                        const std::map<std::int64_t, rating::Rating>& player_ratings,
                        double k_conservative);
void write_rating_trace_csv(const std::filesystem::path& path,
                            const std::vector<rating::RatingTrace>& trace,
                            double k_conservative);

nlohmann::json eval_report_to_json(const forest::EvalReport& report);
void write_eval_report_json(const std::filesystem::path& path,
                            const forest::EvalReport& report);
void write_confusion_csv(const std::filesystem::path& path,
                         const forest::EvalReport& report);

void write_curve_csv(const std::filesystem::path& path, const forest::WindowedCurve& curve);

/// Per-feature correlation to the skill target, with the strong-correlation
/// flag (|r| >= 0.6) and group tags.
struct FeatureCorrelationRow {
    std::string name;
    features::GroupTags groups;
    double pearson_r = 0.0;
    bool defined = false;
};
void write_feature_correlation_csv(const std::filesystem::path& path,
                                   const std::vector<FeatureCorrelationRow>& rows);

void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace skillcap::exports
