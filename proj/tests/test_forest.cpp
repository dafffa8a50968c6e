#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "skillcap/forest.hpp"
#include "skillcap/rng.hpp"
#include "skillcap/stats.hpp"

using namespace skillcap;
using namespace skillcap::forest;

namespace {

// two visibly separable classes along feature 0, one noise feature
std::pair<Eigen::MatrixXd, std::vector<int>> separable_data(int n, std::uint64_t seed) {
    rng::Rng gen(seed);
    Eigen::MatrixXd X(n, 2);
    std::vector<int> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int cls = i % 2;
        X(i, 0) = cls == 0 ? gen.next_normal(-2.0, 0.4) : gen.next_normal(2.0, 0.4);
        X(i, 1) = gen.next_normal(0.0, 1.0);
        y[static_cast<std::size_t>(i)] = cls;
    }
    return {X, y};
}

} // namespace

TEST_CASE("mtry default is floor(sqrt(D))") {
    ForestParams p;
    CHECK(p.resolved_mtry(174) == 13);
    CHECK(p.resolved_mtry(4) == 2);
    CHECK(p.resolved_mtry(1) == 1);
    p.mtry = 40;
    CHECK(p.resolved_mtry(10) == 10); // clamped to D
    ForestParams q;
    CHECK(q.resolved_min_leaf(Task::classification) == 1);
    CHECK(q.resolved_min_leaf(Task::regression) == 5);
}

TEST_CASE("train_classifier: single-class target gives a constant model") {
    Eigen::MatrixXd X(6, 2);
    X.setRandom();
    const std::vector<int> y(6, 0);
    std::vector<std::string> warnings;
    ForestParams p;
    p.ntree = 10;
    const auto model = train_classifier(X, y, p, {"only", "other"}, {}, &warnings);
    REQUIRE(!warnings.empty());
    for (int i = 0; i < 6; ++i) CHECK(predict_class(model, X.row(i)) == 0);
}

TEST_CASE("deterministic under a fixed seed") {
    const auto [X, y] = separable_data(80, 3);
    ForestParams p;
    p.ntree = 60;
    p.seed = 1234;
    const auto a = train_classifier(X, y, p, {"a", "b"});
    const auto b = train_classifier(X, y, p, {"a", "b"});
    const auto c = train_classifier(X, y, p, {"a", "b"});
    rng::Rng gen(9);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::RowVectorXd x(2);
        x << gen.next_normal(0, 3), gen.next_normal(0, 3);
        const int pa = predict_class(a, x);
        CHECK(pa == predict_class(b, x));
        CHECK(pa == predict_class(c, x));
    }
}

TEST_CASE("separable classes: vote agreement on the training set") {
    const auto [X, y] = separable_data(200, 5);
    ForestParams p;
    p.ntree = 500;
    p.seed = 7;
    const auto model = train_classifier(X, y, p, {"a", "b"});
    int agree = 0;
    for (int i = 0; i < X.rows(); ++i)
        if (predict_class(model, X.row(i)) == y[static_cast<std::size_t>(i)]) ++agree;
    CHECK(static_cast<double>(agree) / static_cast<double>(X.rows()) >= 0.95);
}

TEST_CASE("single tree on full data fits unique rows exactly") {
    rng::Rng gen(11);
    Eigen::MatrixXd X(40, 3);
    std::vector<int> y(40);
    for (int i = 0; i < 40; ++i) {
        for (int f = 0; f < 3; ++f) X(i, f) = gen.next_normal(0, 5);
        y[static_cast<std::size_t>(i)] = static_cast<int>(gen.next_below(3));
    }
    ForestParams p;
    p.ntree = 1;
    p.min_leaf = 1;
    p.bootstrap = false;
    const auto model = train_classifier(X, y, p, {"c0", "c1", "c2"});
    for (int i = 0; i < 40; ++i)
        CHECK(predict_class(model, X.row(i)) == y[static_cast<std::size_t>(i)]);
}

TEST_CASE("regression: constant target predicted exactly, range respected") {
    Eigen::MatrixXd X(30, 2);
    X.setRandom();
    Eigen::VectorXd yc = Eigen::VectorXd::Constant(30, 4.25);
    ForestParams p;
    p.ntree = 25;
    const auto constant = train_regressor(X, yc, p);
    CHECK(predict_value(constant, X.row(3)) == 4.25);

    rng::Rng gen(13);
    Eigen::VectorXd y(30);
    for (int i = 0; i < 30; ++i) y(i) = gen.next_normal(10, 4);
    const auto model = train_regressor(X, y, p);
    for (int i = 0; i < 30; ++i) {
        const double v = predict_value(model, X.row(i));
        CHECK(v >= y.minCoeff() - 1e-12);
        CHECK(v <= y.maxCoeff() + 1e-12);
    }
}

TEST_CASE("feature_importance: informative feature first, sums to one") {
    rng::Rng gen(17);
    Eigen::MatrixXd X(150, 5);
    std::vector<int> y(150);
    for (int i = 0; i < 150; ++i) {
        const int cls = i % 2;
        y[static_cast<std::size_t>(i)] = cls;
        X(i, 0) = gen.next_normal(0, 1);
        X(i, 1) = gen.next_normal(0, 1);
        X(i, 2) = cls == 0 ? gen.next_normal(-1.5, 0.5) : gen.next_normal(1.5, 0.5);
        X(i, 3) = gen.next_normal(0, 1);
        X(i, 4) = 3.14; // constant: never used by any split
    }
    ForestParams p;
    p.ntree = 120;
    p.seed = 3;
    const auto model =
        train_classifier(X, y, p, {"n0", "n1"}, {"noise_a", "noise_b", "signal", "noise_c",
                                                 "flat"});
    const auto ranked = feature_importance(model);
    CHECK(ranked.front().first == "signal");
    double total = 0.0;
    double flat = -1.0;
    for (const auto& [name, value] : ranked) {
        total += value;
        if (name == "flat") flat = value;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(flat == 0.0);
}

TEST_CASE("make_folds: partition, stratification, player disjointness") {
    std::vector<int> y;
    std::vector<std::int64_t> players;
    for (int i = 0; i < 60; ++i) {
        y.push_back(i % 3);
        players.push_back(i / 4); // 4 rows per player
    }
    const auto folds = make_folds(60, y, Task::classification, 5, FoldMode::game, 11, players);
    std::set<std::size_t> seen;
    for (const auto& fold : folds) {
        // stratified: each fold carries ~4 rows of each class
        for (int cls = 0; cls < 3; ++cls) {
            int count = 0;
            for (std::size_t row : fold)
                if (y[row] == cls) ++count;
            CHECK(count == 4);
        }
        for (std::size_t row : fold) CHECK(seen.insert(row).second);
    }
    CHECK(seen.size() == 60);

    const auto pfolds = make_folds(60, y, Task::classification, 5, FoldMode::player, 11,
                                   players);
    std::map<std::int64_t, std::set<int>> player_folds;
    for (int fi = 0; fi < 5; ++fi)
        for (std::size_t row : pfolds[static_cast<std::size_t>(fi)])
            player_folds[players[row]].insert(fi);
    for (const auto& [pid, in_folds] : player_folds) CHECK(in_folds.size() == 1);
}

TEST_CASE("cross_validate: perfect feature, chance level, reproducibility") {
    rng::Rng gen(23);
    const int n = 120;
    Eigen::MatrixXd X(n, 3);
    std::vector<int> y(static_cast<std::size_t>(n));
    std::vector<std::int64_t> players;
    for (int i = 0; i < n; ++i) {
        const int cls = i % 4;
        y[static_cast<std::size_t>(i)] = cls;
        X(i, 0) = cls * 10.0 + gen.next_normal(0, 0.5); // perfectly separable
        X(i, 1) = gen.next_normal(0, 1);
        X(i, 2) = gen.next_normal(0, 1);
        players.push_back(i);
    }
    ForestParams p;
    p.ntree = 80;
    p.seed = 5;
    const auto report = cross_validate(X, y, Eigen::VectorXd(), Task::classification, p, 5,
                                       FoldMode::game, 42, players,
                                       {"a", "b", "c", "d"});
    CHECK(report.mean_metric >= 0.95);
    CHECK(report.fold_metric.size() == 5);
    // confusion row sums equal the per-class test counts (30 each)
    for (int cls = 0; cls < 4; ++cls) CHECK(report.confusion.row(cls).sum() == 30);

    // shuffled labels on balanced classes sit near chance
    std::vector<int> shuffled = y;
    rng::Rng shuffler(99);
    shuffler.shuffle(shuffled);
    Eigen::MatrixXd noise(n, 3);
    for (int i = 0; i < n; ++i)
        for (int f = 0; f < 3; ++f) noise(i, f) = gen.next_normal(0, 1);
    const auto chance = cross_validate(noise, shuffled, Eigen::VectorXd(),
                                       Task::classification, p, 5, FoldMode::game, 42,
                                       players, {"a", "b", "c", "d"});
    CHECK(chance.mean_metric == doctest::Approx(0.25).epsilon(0.45)); // 0.25 +- ~0.11

    const auto again = cross_validate(X, y, Eigen::VectorXd(), Task::classification, p, 5,
                                      FoldMode::game, 42, players, {"a", "b", "c", "d"});
    CHECK(again.mean_metric == report.mean_metric);
    CHECK(again.confusion == report.confusion);
}

TEST_CASE("cross_validate: regression reports per-fold and pooled rho") {
    rng::Rng gen(29);
    const int n = 100;
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd y(n);
    std::vector<std::int64_t> players;
    for (int i = 0; i < n; ++i) {
        X(i, 0) = gen.next_normal(0, 2);
        X(i, 1) = gen.next_normal(0, 1);
        y(i) = 3.0 * X(i, 0) + gen.next_normal(0, 0.5);
        players.push_back(i);
    }
    ForestParams p;
    p.ntree = 80;
    p.seed = 6;
    const auto report = cross_validate(X, {}, y, Task::regression, p, 5, FoldMode::game, 1,
                                       players, {});
    CHECK(report.mean_metric > 0.9);
    CHECK(report.pooled_metric > 0.9);
    CHECK(report.fold_metric.size() == 5);
}

TEST_CASE("model serialization round trip") {
    const auto [X, y] = separable_data(60, 31);
    ForestParams p;
    p.ntree = 30;
    p.seed = 8;
    const auto model = train_classifier(X, y, p, {"a", "b"}, {"x0", "x1"});
    const auto j = model_to_json(model);
    const auto restored = model_from_json(j);
    CHECK(restored.feature_names == model.feature_names);
    CHECK(restored.trees.size() == model.trees.size());
    rng::Rng gen(37);
    for (int trial = 0; trial < 40; ++trial) {
        Eigen::RowVectorXd x(2);
        x << gen.next_normal(0, 3), gen.next_normal(0, 3);
        CHECK(predict_class(restored, x) == predict_class(model, x));
    }
    nlohmann::json bad = j;
    bad["version"] = 99;
    CHECK_THROWS_AS(model_from_json(bad), DataError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json{{"format", "zip"}}), DataError);
}

TEST_CASE("predict: feature count mismatch is an argument error") {
    const auto [X, y] = separable_data(40, 41);
    ForestParams p;
    p.ntree = 10;
    const auto model = train_classifier(X, y, p, {"a", "b"});
    Eigen::RowVectorXd wrong(3);
    wrong.setZero();
    CHECK_THROWS_AS(predict_class(model, wrong), std::invalid_argument);
}
