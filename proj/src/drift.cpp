#include "taudit/drift.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace taudit {

DriftResult fit_drift(std::span<const double> y, std::span<const double> t_days, int lag) {
    const std::size_t n = y.size();
    if (n <= 2) {
        throw std::invalid_argument("drift fit needs more than two points");
    }
    if (t_days.size() != n) {
        throw std::invalid_argument("time column length differs from y");
    }
    if (lag < 0) {
        throw std::invalid_argument("HAC lag must be non-negative");
    }

    DriftResult r;
    r.lag = lag;
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
        r.intercept = y[0];  // exactly flat: no slope, nothing to test
        return r;
    }

    Eigen::Matrix2d xtx = Eigen::Matrix2d::Zero();
    Eigen::Vector2d xty = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d x(1.0, t_days[i]);
        xtx += x * x.transpose();
        xty += x * y[i];
    }
    // Degenerate when the time column has (numerically) no spread.
    const double t_var = xtx(1, 1) / n - (xtx(0, 1) / n) * (xtx(0, 1) / n);
    if (!(t_var > 1e-12 * (1.0 + xtx(1, 1) / n))) {
        throw std::invalid_argument("degenerate design: constant time column");
    }
    const Eigen::Matrix2d bread = xtx.inverse();
    const Eigen::Vector2d beta = bread * xty;

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = y[i] - beta(0) - beta(1) * t_days[i];
    }

    Eigen::Matrix2d meat = Eigen::Matrix2d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d x(1.0, t_days[i]);
        meat += u[i] * u[i] * (x * x.transpose());
    }
    const int max_lag = std::min<int>(lag, static_cast<int>(n) - 1);
    for (int l = 1; l <= max_lag; ++l) {
        const double w = 1.0 - static_cast<double>(l) / (lag + 1.0);
        Eigen::Matrix2d gamma = Eigen::Matrix2d::Zero();
        for (std::size_t i = static_cast<std::size_t>(l); i < n; ++i) {
            const Eigen::Vector2d xi(1.0, t_days[i]);
            const Eigen::Vector2d xj(1.0, t_days[i - l]);
            gamma += (u[i] * u[i - l]) * (xi * xj.transpose());
        }
        meat += w * (gamma + gamma.transpose());
    }
    const Eigen::Matrix2d cov = bread * meat * bread;

    r.slope = beta(1);
    r.intercept = beta(0);
    r.se_slope_hac = std::sqrt(std::max(cov(1, 1), 0.0));
    const double dof = static_cast<double>(n) - 2.0;
    if (r.se_slope_hac > 0.0) {
        r.t_stat = r.slope / r.se_slope_hac;
        const boost::math::students_t dist(dof);
        r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t_stat)));
    } else if (r.slope != 0.0) {
        r.t_stat = std::copysign(std::numeric_limits<double>::infinity(), r.slope);
        r.p_value = 0.0;
    } else {
        r.t_stat = 0.0;
        r.p_value = 1.0;
    }
    return r;
}

DriftResult fit_drift(std::span<const double> y, double fs, double lag_days) {
    if (y.size() < 10) {
        throw std::invalid_argument("drift fit needs at least 10 points");
    }
    if (!(fs > 0.0)) {
        throw std::invalid_argument("sampling rate must be positive");
    }
    if (!(lag_days >= 0.0)) {
        throw std::invalid_argument("lag_days must be non-negative");
    }
    std::vector<double> t(y.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = static_cast<double>(i) / fs;
    }
    return fit_drift(y, t, static_cast<int>(std::lround(lag_days * fs)));
}

}  // namespace taudit
