#include "skillcap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "skillcap/errors.hpp"

namespace skillcap::stats {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double u_statistic(std::span<const double> a, std::span<const double> b) {
    double u = 0.0;
    for (double x : a)
        for (double y : b) {
            if (x > y) u += 1.0;
            else if (x == y) u += 0.5;
        }
    return u;
}

// Enumerates every way to assign n1 of the pooled values to the first group
// and accumulates the U distribution tails around u_obs.
void enumerate_assignments(const std::vector<double>& pooled, std::size_t n1,
                           double u_obs, long& ge, long& le, long& total) {
    const std::size_t n = pooled.size();
    std::vector<bool> in_a(n, false);
    std::fill(in_a.begin(), in_a.begin() + static_cast<std::ptrdiff_t>(n1), true);
    // iterate combinations via prev_permutation on the selection mask
    do {
        double u = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_a[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (in_a[j]) continue;
                if (pooled[i] > pooled[j]) u += 1.0;
                else if (pooled[i] == pooled[j]) u += 0.5;
            }
        }
        if (u >= u_obs - 1e-12) ++ge;
        if (u <= u_obs + 1e-12) ++le;
        ++total;
    } while (std::prev_permutation(in_a.begin(), in_a.end()));
}

} // namespace

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson: length mismatch");
    const auto n = x.size();
    if (n < 2)
        throw std::invalid_argument("pearson: need at least 2 samples");

    Eigen::Map<const Eigen::VectorXd> vx(x.data(), static_cast<Eigen::Index>(n));
    Eigen::Map<const Eigen::VectorXd> vy(y.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd cx = vx.array() - vx.mean();
    const Eigen::VectorXd cy = vy.array() - vy.mean();
    const double sxx = cx.squaredNorm();
    const double syy = cy.squaredNorm();
    if (sxx == 0.0 || syy == 0.0)
        throw NumericError("pearson: zero variance");
    double r = cx.dot(cy) / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);
    return {r, static_cast<int>(n)};
}

std::vector<double> average_ranks(std::span<const double> x) {
    const auto n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("spearman: length mismatch");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                           Direction direction) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("mann_whitney_u: empty sample");
    const auto n1 = a.size();
    const auto n2 = b.size();
    UTestResult res;
    res.direction = direction;
    res.u = u_statistic(a, b);

    if (n1 + n2 <= 12) {
        res.exact = true;
        std::vector<double> pooled(a.begin(), a.end());
        pooled.insert(pooled.end(), b.begin(), b.end());
        std::sort(pooled.begin(), pooled.end());
        long ge = 0, le = 0, total = 0;
        enumerate_assignments(pooled, n1, res.u, ge, le, total);
        const double pg = static_cast<double>(ge) / total;
        const double pl = static_cast<double>(le) / total;
        switch (direction) {
            case Direction::greater: res.p_value = pg; break;
            case Direction::less: res.p_value = pl; break;
            case Direction::two_sided: res.p_value = std::min(1.0, 2.0 * std::min(pg, pl));
        }
        return res;
    }

    // normal approximation with tie correction
    const double n1d = static_cast<double>(n1), n2d = static_cast<double>(n2);
    const double nd = n1d + n2d;
    std::map<double, int> tie_counts;
    for (double v : a) tie_counts[v]++;
    for (double v : b) tie_counts[v]++;
    double tie_term = 0.0;
    for (const auto& [v, t] : tie_counts) {
        const double td = t;
        tie_term += td * td * td - td;
    }
    const double mean = n1d * n2d / 2.0;
    const double var =
        (n1d * n2d / 12.0) * ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));
    if (var <= 0.0) { // every observation tied
        res.p_value = 1.0;
        return res;
    }
    const double sd = std::sqrt(var);
    const double pg = 1.0 - normal_cdf((res.u - mean - 0.5) / sd);
    const double pl = normal_cdf((res.u - mean + 0.5) / sd);
    switch (direction) {
        case Direction::greater: res.p_value = pg; break;
        case Direction::less: res.p_value = pl; break;
        case Direction::two_sided: res.p_value = std::min(1.0, 2.0 * std::min(pg, pl));
    }
    return res;
}

CorrelationMatrix correlation_matrix(
    const std::vector<std::pair<std::string, std::vector<double>>>& metrics) {
    const auto k = metrics.size();
    for (std::size_t i = 1; i < k; ++i)
        if (metrics[i].second.size() != metrics[0].second.size())
            throw std::invalid_argument("correlation_matrix: misaligned metric lengths");

    CorrelationMatrix m;
    m.names.reserve(k);
    for (const auto& [name, values] : metrics) m.names.push_back(name);
    m.rho = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k),
                                      static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double rho;
            try {
                rho = spearman(metrics[i].second, metrics[j].second).coefficient;
            } catch (const std::exception&) {
                rho = std::numeric_limits<double>::quiet_NaN();
            }
            m.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho;
            m.rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rho;
        }
    return m;
}

} // namespace skillcap::stats
