#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skillcap/features.hpp"
#include "skillcap/telemetry.hpp"

namespace skillcap::forest {

enum class Task { classification, regression };

struct ForestParams {
    int ntree = 500;
    int mtry = 0;     // 0 -> floor(sqrt(D))
    int min_leaf = 0; // 0 -> 1 for classification, 5 for regression
    std::uint64_t seed = 0;
    bool bootstrap = true; // false: every tree trains on all rows

    int resolved_mtry(int n_features) const;
    int resolved_min_leaf(Task task) const;
};

/// Axis-aligned split node. Leaves have feature == -1 and carry the
/// prediction in `value` (class index or mean target).
struct SplitNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
};

struct Tree {
    std::vector<SplitNode> nodes; // nodes[0] is the root
};

struct ForestModel {
    Task task = Task::classification;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names; // classification only
    ForestParams params;
    std::vector<Tree> trees;
    std::vector<double> importance_raw; // summed impurity decrease per feature
};

/// Bootstrap-bagged trees; mtry features sampled without replacement per
/// split; Gini impurity (classification) / variance reduction (regression).
/// Deterministic given the seed. A single-class target trains a constant
/// model and appends a warning.
ForestModel train_classifier(const Eigen::MatrixXd& X, std::span<const int> y,
                             const ForestParams& params,
                             std::vector<std::string> class_names,
                             std::vector<std::string> feature_names = {},
                             std::vector<std::string>* warnings = nullptr);

ForestModel train_regressor(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const ForestParams& params,
                            std::vector<std::string> feature_names = {});

/// Majority vote (ties -> smaller class index).
int predict_class(const ForestModel& m, const Eigen::RowVectorXd& x);
/// Mean of tree outputs.
double predict_value(const ForestModel& m, const Eigen::RowVectorXd& x);

/// Mean impurity decrease, normalized to sum to 1, descending.
std::vector<std::pair<std::string, double>> feature_importance(const ForestModel& m);

enum class FoldMode { game, player };

/// Fold construction used by cross_validate. Game mode stratifies
/// classification rows by class; player mode assigns whole players to folds.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::span<const int> y_class,
                                                 Task task, int k, FoldMode mode,
                                                 std::uint64_t seed,
                                                 std::span<const std::int64_t> player_ids);

struct EvalReport {
    Task task = Task::classification;
    std::vector<double> fold_metric; // accuracy or Spearman rho per fold
    double mean_metric = 0.0;        // mean over folds
    double pooled_metric = 0.0;      // pooled over all out-of-fold predictions
    Eigen::MatrixXi confusion;       // classification: row = true, col = predicted
    std::vector<std::string> class_names;
    std::vector<std::pair<std::string, double>> importances; // fold-mean
    std::vector<std::string> warnings;
    std::vector<double> oof_predictions; // out-of-fold, row order
};

/// k-fold cross-validation. Game mode stratifies by class (regression:
/// plain shuffled folds); player mode keeps each player's games in one fold.
EvalReport cross_validate(const Eigen::MatrixXd& X, std::span<const int> y_class,
                          const Eigen::VectorXd& y_real, Task task,
                          const ForestParams& params, int k, FoldMode mode,
                          std::uint64_t seed, std::span<const std::int64_t> player_ids,
                          std::vector<std::string> class_names,
                          std::vector<std::string> feature_names = {});

// -------------------------------------------------------------------------
// Windowed convergence (features from the first t seconds)

enum class PredictionTask { groups4, binary_novice, regress_sbar };

struct WindowPoint {
    double t_s = 0.0;
    double metric = 0.0;   // accuracy or rho, mean over folds
    double baseline = 0.0; // score-at-t model accuracy / rho(score_at_t, s-bar)
};

struct WindowedCurve {
    PredictionTask task = PredictionTask::regress_sbar;
    std::vector<WindowPoint> points;
};

/// For each window t: extract features on slice_window(., t), cross-validate,
/// and record the metric next to the current-score baseline.
WindowedCurve windowed_evaluation(
    const telemetry::Dataset& data, const features::FeatureCatalog& cat,
    std::span<const double> windows, PredictionTask task, const ForestParams& params,
    int k = 5, FoldMode mode = FoldMode::game, std::uint64_t seed = 0,
    const std::optional<std::pair<features::Scheme, std::string>>& filter = std::nullopt);

// -------------------------------------------------------------------------
// Serialization (versioned JSON; format documented in docs/model_format.md)

nlohmann::json model_to_json(const ForestModel& m);
ForestModel model_from_json(const nlohmann::json& j);

} // namespace skillcap::forest
