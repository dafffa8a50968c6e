#include "skillcap/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "skillcap/metrics.hpp"
#include "skillcap/rng.hpp"
#include "skillcap/stats.hpp"

namespace skillcap::forest {

int ForestParams::resolved_mtry(int n_features) const {
    if (mtry > 0) return std::min(mtry, n_features);
    return std::max(1, static_cast<int>(std::floor(std::sqrt(n_features))));
}

int ForestParams::resolved_min_leaf(Task task) const {
    if (min_leaf > 0) return min_leaf;
    return task == Task::classification ? 1 : 5;
}

namespace {

struct GrowSetup {
    const Eigen::MatrixXd& X;
    std::span<const int> y_class;
    const Eigen::VectorXd& y_real;
    Task task;
    int n_classes;
    int mtry;
    int min_leaf;
};

double gini(std::span<const int> counts, int total) {
    if (total == 0) return 0.0;
    double acc = 0.0;
    for (int c : counts) {
        const double p = static_cast<double>(c) / total;
        acc += p * p;
    }
    return 1.0 - acc;
}

int majority_class(std::span<const int> counts) {
    int best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return best; // ties keep the smaller index
}

struct Grower {
    const GrowSetup& setup;
    rng::Rng& gen;
    Tree& tree;
    std::vector<double>& importance; // per-feature impurity decrease
    std::size_t n_total;

    // scratch buffers reused across nodes
    std::vector<int> feature_pool;
    std::vector<std::pair<double, std::size_t>> sorted; // (value, position in samples)

    int grow(std::vector<std::size_t>& samples) {
        const auto node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        const auto n = samples.size();
        std::vector<int> counts;
        double sum = 0.0, sumsq = 0.0;
        double node_impurity = 0.0;
        if (setup.task == Task::classification) {
            counts.assign(static_cast<std::size_t>(setup.n_classes), 0);
            for (std::size_t i : samples) counts[static_cast<std::size_t>(setup.y_class[i])]++;
            node_impurity = gini(counts, static_cast<int>(n));
        } else {
            for (std::size_t i : samples) {
                const double v = setup.y_real(static_cast<Eigen::Index>(i));
                sum += v;
                sumsq += v * v;
            }
            node_impurity = std::max(0.0, sumsq / n - (sum / n) * (sum / n));
        }

        auto make_leaf = [&]() {
            SplitNode& leaf = tree.nodes[static_cast<std::size_t>(node_index)];
            leaf.feature = -1;
            leaf.value = setup.task == Task::classification
                             ? static_cast<double>(majority_class(counts))
                             : sum / static_cast<double>(n);
            return node_index;
        };

        if (n < 2 * static_cast<std::size_t>(setup.min_leaf) || node_impurity <= 1e-12)
            return make_leaf();

        // sample mtry distinct features, then scan them in ascending order
        const int d = static_cast<int>(setup.X.cols());
        feature_pool.resize(static_cast<std::size_t>(d));
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
        for (int i = 0; i < setup.mtry; ++i) {
            const auto j =
                i + static_cast<int>(gen.next_below(static_cast<std::uint64_t>(d - i)));
            std::swap(feature_pool[static_cast<std::size_t>(i)],
                      feature_pool[static_cast<std::size_t>(j)]);
        }
        std::sort(feature_pool.begin(), feature_pool.begin() + setup.mtry);

        double best_gain = 0.0;
        int best_feature = -1;
        double best_threshold = 0.0;
        for (int fi = 0; fi < setup.mtry; ++fi) {
            const int f = feature_pool[static_cast<std::size_t>(fi)];
            sorted.clear();
            for (std::size_t i : samples)
                sorted.push_back({setup.X(static_cast<Eigen::Index>(i), f), i});
            std::sort(sorted.begin(), sorted.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            if (setup.task == Task::classification) {
                std::vector<int> left_counts(static_cast<std::size_t>(setup.n_classes), 0);
                std::vector<int> right_counts = counts;
                int nl = 0;
                for (std::size_t k = 0; k + 1 < n; ++k) {
                    const int cls = setup.y_class[sorted[k].second];
                    left_counts[static_cast<std::size_t>(cls)]++;
                    right_counts[static_cast<std::size_t>(cls)]--;
                    ++nl;
                    if (sorted[k].first == sorted[k + 1].first) continue;
                    const int nr = static_cast<int>(n) - nl;
                    if (nl < setup.min_leaf || nr < setup.min_leaf) continue;
                    const double weighted =
                        (nl * gini(left_counts, nl) + nr * gini(right_counts, nr)) /
                        static_cast<double>(n);
                    const double gain = node_impurity - weighted;
                    if (gain > best_gain + 1e-15) {
                        best_gain = gain;
                        best_feature = f;
                        best_threshold = 0.5 * (sorted[k].first + sorted[k + 1].first);
                    }
                }
            } else {
                double lsum = 0.0, lsumsq = 0.0;
                int nl = 0;
                for (std::size_t k = 0; k + 1 < n; ++k) {
                    const double v = setup.y_real(static_cast<Eigen::Index>(sorted[k].second));
                    lsum += v;
                    lsumsq += v * v;
                    ++nl;
                    if (sorted[k].first == sorted[k + 1].first) continue;
                    const int nr = static_cast<int>(n) - nl;
                    if (nl < setup.min_leaf || nr < setup.min_leaf) continue;
                    const double rsum = sum - lsum;
                    const double rsumsq = sumsq - lsumsq;
                    const double sse_l = lsumsq - lsum * lsum / nl;
                    const double sse_r = rsumsq - rsum * rsum / nr;
                    const double weighted = (sse_l + sse_r) / static_cast<double>(n);
                    const double gain = node_impurity - weighted;
                    if (gain > best_gain + 1e-15) {
                        best_gain = gain;
                        best_feature = f;
                        best_threshold = 0.5 * (sorted[k].first + sorted[k + 1].first);
                    }
                }
            }
        }

        if (best_feature < 0) return make_leaf();

        importance[static_cast<std::size_t>(best_feature)] +=
            best_gain * static_cast<double>(n) / static_cast<double>(n_total);

        std::vector<std::size_t> left, right;
        left.reserve(n);
        right.reserve(n);
        for (std::size_t i : samples) {
            if (setup.X(static_cast<Eigen::Index>(i), best_feature) <= best_threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }
        samples.clear();
        samples.shrink_to_fit();

        const int left_index = grow(left);
        const int right_index = grow(right);
        SplitNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left_index;
        node.right = right_index;
        return node_index;
    }
};

ForestModel train_impl(const Eigen::MatrixXd& X, std::span<const int> y_class,
                       const Eigen::VectorXd& y_real, Task task, int n_classes,
                       const ForestParams& params, std::vector<std::string> class_names,
                       std::vector<std::string> feature_names) {
    const auto n = static_cast<std::size_t>(X.rows());
    const auto d = static_cast<int>(X.cols());
    if (n == 0 || d == 0)
        throw std::invalid_argument("train: empty feature matrix");
    if (!X.allFinite())
        throw std::invalid_argument("train: feature matrix has missing values");

    ForestModel model;
    model.task = task;
    model.params = params;
    model.class_names = std::move(class_names);
    if (feature_names.empty())
        for (int f = 0; f < d; ++f) feature_names.push_back("f" + std::to_string(f));
    if (static_cast<int>(feature_names.size()) != d)
        throw std::invalid_argument("train: feature name count mismatch");
    model.feature_names = std::move(feature_names);
    model.importance_raw.assign(static_cast<std::size_t>(d), 0.0);

    const GrowSetup setup{X,    y_class,
                          y_real, task,
                          n_classes, params.resolved_mtry(d),
                          params.resolved_min_leaf(task)};
    model.trees.resize(static_cast<std::size_t>(params.ntree));
    for (int t = 0; t < params.ntree; ++t) {
        rng::Rng tree_gen = rng::Rng::child(params.seed, static_cast<std::uint64_t>(t));
        std::vector<std::size_t> bootstrap(n);
        if (params.bootstrap)
            for (auto& idx : bootstrap) idx = tree_gen.next_below(n);
        else
            std::iota(bootstrap.begin(), bootstrap.end(), std::size_t{0});
        Tree& tree = model.trees[static_cast<std::size_t>(t)];
        Grower grower{setup, tree_gen, tree, model.importance_raw, n, {}, {}};
        grower.grow(bootstrap);
    }
    return model;
}

double tree_predict(const Tree& tree, const Eigen::RowVectorXd& x) {
    int idx = 0;
    for (;;) {
        const SplitNode& node = tree.nodes[static_cast<std::size_t>(idx)];
        if (node.feature < 0) return node.value;
        idx = x(node.feature) <= node.threshold ? node.left : node.right;
    }
}

} // namespace

ForestModel train_classifier(const Eigen::MatrixXd& X, std::span<const int> y,
                             const ForestParams& params,
                             std::vector<std::string> class_names,
                             std::vector<std::string> feature_names,
                             std::vector<std::string>* warnings) {
    if (static_cast<Eigen::Index>(y.size()) != X.rows())
        throw std::invalid_argument("train_classifier: label count mismatch");
    int n_classes = 0;
    for (int cls : y) {
        if (cls < 0) throw std::invalid_argument("train_classifier: negative class");
        n_classes = std::max(n_classes, cls + 1);
    }
    if (!class_names.empty()) n_classes = std::max(n_classes, static_cast<int>(class_names.size()));
    if (class_names.empty())
        for (int c = 0; c < n_classes; ++c) class_names.push_back("class_" + std::to_string(c));

    const std::set<int> distinct(y.begin(), y.end());
    if (distinct.size() <= 1 && warnings)
        warnings->push_back("training labels contain a single class; model is constant");

    return train_impl(X, y, Eigen::VectorXd(), Task::classification, n_classes, params,
                      std::move(class_names), std::move(feature_names));
}

ForestModel train_regressor(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const ForestParams& params,
                            std::vector<std::string> feature_names) {
    if (y.size() != X.rows())
        throw std::invalid_argument("train_regressor: target count mismatch");
    return train_impl(X, {}, y, Task::regression, 0, params, {}, std::move(feature_names));
}

int predict_class(const ForestModel& m, const Eigen::RowVectorXd& x) {
    if (m.task != Task::classification)
        throw std::invalid_argument("predict_class: not a classification model");
    if (x.size() != static_cast<Eigen::Index>(m.feature_names.size()))
        throw std::invalid_argument("predict_class: feature count mismatch");
    std::vector<int> votes(m.class_names.size(), 0);
    for (const Tree& tree : m.trees)
        votes[static_cast<std::size_t>(tree_predict(tree, x))]++;
    int best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c)
        if (votes[c] > votes[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return best;
}

double predict_value(const ForestModel& m, const Eigen::RowVectorXd& x) {
    if (m.task != Task::regression)
        throw std::invalid_argument("predict_value: not a regression model");
    if (x.size() != static_cast<Eigen::Index>(m.feature_names.size()))
        throw std::invalid_argument("predict_value: feature count mismatch");
    double acc = 0.0;
    for (const Tree& tree : m.trees) acc += tree_predict(tree, x);
    return acc / static_cast<double>(m.trees.size());
}

std::vector<std::pair<std::string, double>> feature_importance(const ForestModel& m) {
    const double total =
        std::accumulate(m.importance_raw.begin(), m.importance_raw.end(), 0.0);
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t f = 0; f < m.importance_raw.size(); ++f)
        out.push_back({m.feature_names[f], total > 0 ? m.importance_raw[f] / total : 0.0});
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::span<const int> y_class,
                                                 Task task, int k, FoldMode mode,
                                                 std::uint64_t seed,
                                                 std::span<const std::int64_t> player_ids) {
    rng::Rng gen = rng::Rng::child(seed, 0x666f6c64); // "fold"
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    if (mode == FoldMode::player) {
        if (player_ids.size() != n)
            throw std::invalid_argument("cross_validate: player ids required for player folds");
        std::vector<std::int64_t> players(player_ids.begin(), player_ids.end());
        std::sort(players.begin(), players.end());
        players.erase(std::unique(players.begin(), players.end()), players.end());
        gen.shuffle(players);
        std::map<std::int64_t, int> fold_of;
        for (std::size_t i = 0; i < players.size(); ++i)
            fold_of[players[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < n; ++i)
            folds[static_cast<std::size_t>(fold_of[player_ids[i]])].push_back(i);
        return folds;
    }
    if (task == Task::classification) {
        // stratified game-level folds
        std::map<int, std::vector<std::size_t>> by_class;
        for (std::size_t i = 0; i < n; ++i) by_class[y_class[i]].push_back(i);
        for (auto& [cls, rows] : by_class) {
            gen.shuffle(rows);
            for (std::size_t j = 0; j < rows.size(); ++j)
                folds[j % static_cast<std::size_t>(k)].push_back(rows[j]);
        }
    } else {
        std::vector<std::size_t> rows(n);
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        gen.shuffle(rows);
        for (std::size_t j = 0; j < n; ++j)
            folds[j % static_cast<std::size_t>(k)].push_back(rows[j]);
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

EvalReport cross_validate(const Eigen::MatrixXd& X, std::span<const int> y_class,
                          const Eigen::VectorXd& y_real, Task task,
                          const ForestParams& params, int k, FoldMode mode,
                          std::uint64_t seed, std::span<const std::int64_t> player_ids,
                          std::vector<std::string> class_names,
                          std::vector<std::string> feature_names) {
    const auto n = static_cast<std::size_t>(X.rows());
    if (k < 2) throw std::invalid_argument("cross_validate: k must be >= 2");
    if (n < static_cast<std::size_t>(k))
        throw std::invalid_argument("cross_validate: fewer rows than folds");

    int n_classes = static_cast<int>(class_names.size());
    if (task == Task::classification) {
        for (int cls : y_class) n_classes = std::max(n_classes, cls + 1);
        if (class_names.empty())
            for (int c = 0; c < n_classes; ++c)
                class_names.push_back("class_" + std::to_string(c));
    }

    EvalReport report;
    report.task = task;
    report.class_names = class_names;
    report.oof_predictions.assign(n, 0.0);
    if (task == Task::classification)
        report.confusion = Eigen::MatrixXi::Zero(n_classes, n_classes);

    const auto folds = make_folds(n, y_class, task, k, mode, seed, player_ids);
    std::vector<double> importance_sum(static_cast<std::size_t>(X.cols()), 0.0);

    for (int fold = 0; fold < k; ++fold) {
        const auto& test = folds[static_cast<std::size_t>(fold)];
        if (test.empty()) {
            report.warnings.push_back("fold " + std::to_string(fold) + " is empty; skipped");
            continue;
        }
        std::vector<std::size_t> train_rows;
        for (int other = 0; other < k; ++other)
            if (other != fold)
                train_rows.insert(train_rows.end(), folds[static_cast<std::size_t>(other)].begin(),
                                  folds[static_cast<std::size_t>(other)].end());

        Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(train_rows.size()), X.cols());
        std::vector<int> ytr_class(train_rows.size());
        Eigen::VectorXd ytr_real(static_cast<Eigen::Index>(train_rows.size()));
        for (std::size_t i = 0; i < train_rows.size(); ++i) {
            Xtr.row(static_cast<Eigen::Index>(i)) =
                X.row(static_cast<Eigen::Index>(train_rows[i]));
            if (task == Task::classification) ytr_class[i] = y_class[train_rows[i]];
            else ytr_real(static_cast<Eigen::Index>(i)) =
                y_real(static_cast<Eigen::Index>(train_rows[i]));
        }

        ForestParams fold_params = params;
        fold_params.seed = rng::derive_seed(params.seed, static_cast<std::uint64_t>(fold) + 1);

        if (task == Task::classification) {
            const std::set<int> present(ytr_class.begin(), ytr_class.end());
            if (static_cast<int>(present.size()) < n_classes)
                report.warnings.push_back("fold " + std::to_string(fold) +
                                          ": some classes absent from training data");
            const auto model = train_classifier(Xtr, ytr_class, fold_params, class_names,
                                                feature_names);
            int correct = 0;
            for (std::size_t row : test) {
                const int pred =
                    predict_class(model, X.row(static_cast<Eigen::Index>(row)));
                report.oof_predictions[row] = static_cast<double>(pred);
                report.confusion(y_class[row], pred)++;
                if (pred == y_class[row]) ++correct;
            }
            report.fold_metric.push_back(static_cast<double>(correct) /
                                         static_cast<double>(test.size()));
            for (std::size_t f = 0; f < importance_sum.size(); ++f)
                importance_sum[f] += model.importance_raw[f];
        } else {
            const auto model = train_regressor(Xtr, ytr_real, fold_params, feature_names);
            std::vector<double> pred, truth;
            for (std::size_t row : test) {
                const double p = predict_value(model, X.row(static_cast<Eigen::Index>(row)));
                report.oof_predictions[row] = p;
                pred.push_back(p);
                truth.push_back(y_real(static_cast<Eigen::Index>(row)));
            }
            try {
                report.fold_metric.push_back(stats::spearman(pred, truth).coefficient);
            } catch (const std::exception&) {
                report.warnings.push_back("fold " + std::to_string(fold) +
                                          ": correlation undefined; fold skipped in mean");
            }
            for (std::size_t f = 0; f < importance_sum.size(); ++f)
                importance_sum[f] += model.importance_raw[f];
        }
    }

    if (!report.fold_metric.empty())
        report.mean_metric =
            std::accumulate(report.fold_metric.begin(), report.fold_metric.end(), 0.0) /
            static_cast<double>(report.fold_metric.size());

    if (task == Task::classification) {
        const double correct = report.confusion.diagonal().sum();
        const double total = report.confusion.sum();
        report.pooled_metric = total > 0 ? correct / total : 0.0;
    } else {
        std::vector<double> truth(n);
        for (std::size_t i = 0; i < n; ++i) truth[i] = y_real(static_cast<Eigen::Index>(i));
        try {
            report.pooled_metric =
                stats::spearman(report.oof_predictions, truth).coefficient;
        } catch (const std::exception&) {
            report.pooled_metric = 0.0;
            report.warnings.push_back("pooled correlation undefined");
        }
    }

    const double total_importance =
        std::accumulate(importance_sum.begin(), importance_sum.end(), 0.0);
    std::vector<std::string> names = feature_names;
    if (names.empty())
        for (Eigen::Index f = 0; f < X.cols(); ++f)
            names.push_back("f" + std::to_string(f));
    for (std::size_t f = 0; f < importance_sum.size(); ++f)
        report.importances.push_back(
            {names[f], total_importance > 0 ? importance_sum[f] / total_importance : 0.0});
    std::stable_sort(report.importances.begin(), report.importances.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return report;
}

WindowedCurve windowed_evaluation(
    const telemetry::Dataset& data, const features::FeatureCatalog& cat,
    std::span<const double> windows, PredictionTask task, const ForestParams& params,
    int k, FoldMode mode, std::uint64_t seed,
    const std::optional<std::pair<features::Scheme, std::string>>& filter) {
    if (windows.empty())
        throw std::invalid_argument("windowed_evaluation: no windows given");

    // per-player skill from full games
    std::map<std::int64_t, std::vector<metrics::GamePerformance>> perf_by_player;
    for (const auto& g : data.games)
        perf_by_player[g.meta.player_id].push_back(metrics::game_performance(g));
    std::map<std::int64_t, double> sbar;
    for (const auto& [pid, perfs] : perf_by_player)
        sbar[pid] = metrics::player_skill(perfs).mean_score;

    const auto n = data.games.size();
    std::vector<int> y_class(n, 0);
    Eigen::VectorXd y_real(static_cast<Eigen::Index>(n));
    std::vector<std::int64_t> player_ids;
    std::vector<std::string> class_names;
    if (task == PredictionTask::groups4)
        class_names = {"Novice", "Intermediate", "Skilled", "Expert"};
    else if (task == PredictionTask::binary_novice)
        class_names = {"Novice", "Experienced"};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& g = data.games[i];
        player_ids.push_back(g.meta.player_id);
        const double s = sbar.at(g.meta.player_id);
        y_real(static_cast<Eigen::Index>(i)) = s;
        const auto group = metrics::score_group(s);
        y_class[i] = task == PredictionTask::binary_novice
                         ? (group == metrics::ScoreGroup::novice ? 0 : 1)
                         : static_cast<int>(group);
    }
    const Task forest_task =
        task == PredictionTask::regress_sbar ? Task::regression : Task::classification;

    WindowedCurve curve;
    curve.task = task;
    for (double t : windows) {
        const auto matrix = features::build_feature_matrix(data, cat, t, filter);
        const auto report = cross_validate(matrix.X, y_class, y_real, forest_task, params, k,
                                           mode, seed, player_ids, class_names, matrix.names);

        // baseline: the score observed by time t
        std::vector<double> score_t(n);
        for (std::size_t i = 0; i < n; ++i)
            score_t[i] = metrics::score_at_time(data.games[i], t);

        double baseline = 0.0;
        if (forest_task == Task::regression) {
            std::vector<double> truth(n);
            for (std::size_t i = 0; i < n; ++i)
                truth[i] = y_real(static_cast<Eigen::Index>(i));
            try {
                baseline = stats::spearman(score_t, truth).coefficient;
            } catch (const std::exception&) {
                baseline = 0.0;
            }
        } else {
            Eigen::MatrixXd Xs(static_cast<Eigen::Index>(n), 1);
            for (std::size_t i = 0; i < n; ++i)
                Xs(static_cast<Eigen::Index>(i), 0) = score_t[i];
            const auto score_report =
                cross_validate(Xs, y_class, y_real, forest_task, params, k, mode, seed,
                               player_ids, class_names, {"score_at_t"});
            baseline = score_report.mean_metric;
        }
        curve.points.push_back({t, report.mean_metric, baseline});
    }
    return curve;
}

nlohmann::json model_to_json(const ForestModel& m) {
    nlohmann::json j;
    j["format"] = "skillcap-forest";
    j["version"] = 1;
    j["task"] = m.task == Task::classification ? "classification" : "regression";
    j["feature_names"] = m.feature_names;
    j["class_names"] = m.class_names;
    j["params"] = {{"ntree", m.params.ntree},
                   {"mtry", m.params.mtry},
                   {"min_leaf", m.params.min_leaf},
                   {"seed", m.params.seed},
                   {"bootstrap", m.params.bootstrap}};
    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& tree : m.trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const SplitNode& node : tree.nodes)
            nodes.push_back({node.feature, node.threshold, node.left, node.right, node.value});
        trees.push_back(std::move(nodes));
    }
    j["trees"] = std::move(trees);
    j["importance_raw"] = m.importance_raw;
    return j;
}

ForestModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != "skillcap-forest")
        throw DataError("model_from_json: not a skillcap-forest document");
    if (j.value("version", 0) != 1)
        throw DataError("model_from_json: unsupported version");
    ForestModel m;
    m.task = j.at("task").get<std::string>() == "classification" ? Task::classification
                                                                  : Task::regression;
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.params.ntree = j.at("params").at("ntree").get<int>();
    m.params.mtry = j.at("params").at("mtry").get<int>();
    m.params.min_leaf = j.at("params").at("min_leaf").get<int>();
    m.params.seed = j.at("params").at("seed").get<std::uint64_t>();
    m.params.bootstrap = j.at("params").value("bootstrap", true);
    for (const auto& nodes : j.at("trees")) {
        Tree tree;
        for (const auto& node : nodes) {
            SplitNode sn;
            sn.feature = node.at(0).get<std::int32_t>();
            sn.threshold = node.at(1).get<double>();
            sn.left = node.at(2).get<std::int32_t>();
            sn.right = node.at(3).get<std::int32_t>();
            sn.value = node.at(4).get<double>();
            tree.nodes.push_back(sn);
        }
        m.trees.push_back(std::move(tree));
    }
    if (j.contains("importance_raw"))
        m.importance_raw = j.at("importance_raw").get<std::vector<double>>();
    return m;
}

} // namespace skillcap::forest
