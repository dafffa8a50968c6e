#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace skillcap::stats {

/// Pearson/Spearman result. |coefficient| <= 1.
struct CorrelationResult {
    double coefficient = 0.0;
    int n = 0;
};

enum class Direction { greater, less, two_sided };

struct UTestResult {
    double u = 0.0;       // U statistic of the first sample (ties count 1/2)
    double p_value = 1.0;
    Direction direction = Direction::two_sided;
    bool exact = false;   // enumeration (n1+n2 <= 12) vs normal approximation
};

/// Correlation threshold used by the feature-to-skill reports.
inline constexpr double kStrongCorrelation = 0.6;

/// Product-moment coefficient. Throws NumericError on zero variance,
/// std::invalid_argument on length mismatch or n < 2.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// Mean ranks (ties averaged), 1-based.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson of the mean-ranked data.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

/// U by pair counting; exact p by enumeration when n1+n2 <= 12, otherwise
/// normal approximation with tie correction and continuity correction.
UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                           Direction direction);

struct CorrelationMatrix {
    std::vector<std::string> names;
    Eigen::MatrixXd rho; // symmetric, unit diagonal; NaN where undefined
};

CorrelationMatrix correlation_matrix(
    const std::vector<std::pair<std::string, std::vector<double>>>& metrics);

} // namespace skillcap::stats
