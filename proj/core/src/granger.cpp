#include "relaq/error.hpp"
#include "relaq/relations.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace relaq {

namespace {

struct Fit {
    double ssr = 0.0;
    bool full_rank = true;
};

Fit least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
{
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    Fit fit;
    fit.full_rank = qr.rank() == x.cols();
    if (!fit.full_rank) {
        return fit;
    }
    const Eigen::VectorXd beta = qr.solve(y);
    fit.ssr = (y - x * beta).squaredNorm();
    return fit;
}

} // namespace

double GrangerResult::strength() const noexcept
{
    if (singular) {
        return 0.0;
    }
    return std::clamp(1.0 - p_value, 0.0, 1.0);
}

int supported_granger_lag(std::size_t length, int max_lag) noexcept
{
    if (length < 5 || max_lag < 1) {
        return 0;
    }
    return std::min(max_lag, static_cast<int>((length - 2) / 3));
}

GrangerResult granger_test(std::span<const double> cause, std::span<const double> effect, int lag)
{
    if (cause.size() != effect.size()) {
        throw Error(Errc::LengthMismatch, std::to_string(cause.size()) + " vs " + std::to_string(effect.size()));
    }
    if (lag < 1) {
        throw Error(Errc::InvalidParams, "granger lag must be positive");
    }
    const auto m = static_cast<std::size_t>(lag);
    const std::size_t n = effect.size();
    if (n < 3 * m + 2) {
        throw Error(Errc::TooShort, "granger test with lag " + std::to_string(lag) + " needs at least "
            + std::to_string(3 * m + 2) + " points, got " + std::to_string(n));
    }

    const auto nobs = static_cast<Eigen::Index>(n - m);
    const auto k = static_cast<Eigen::Index>(m);
    Eigen::VectorXd y(nobs);
    Eigen::MatrixXd restricted(nobs, 1 + k);
    Eigen::MatrixXd unrestricted(nobs, 1 + 2 * k);
    for (Eigen::Index row = 0; row < nobs; ++row) {
        const auto t = static_cast<std::size_t>(row) + m;
        y(row) = effect[t];
        restricted(row, 0) = 1.0;
        unrestricted(row, 0) = 1.0;
        for (Eigen::Index j = 1; j <= k; ++j) {
            const auto past = t - static_cast<std::size_t>(j);
            restricted(row, j) = effect[past];
            unrestricted(row, j) = effect[past];
            unrestricted(row, k + j) = cause[past];
        }
    }

    GrangerResult result;
    result.lag = lag;
    result.df_num = lag;
    result.df_denom = static_cast<int>(nobs - 1 - 2 * k);

    const Fit r = least_squares(restricted, y);
    const Fit u = least_squares(unrestricted, y);
    if (!r.full_rank || !u.full_rank) {
        result.singular = true;
        return result;
    }
    const double centered = (y.array() - y.mean()).matrix().squaredNorm();
    if (r.ssr <= 1e-15 * centered) {
        // own lags already explain the effect exactly; nothing left to test
        result.singular = true;
        return result;
    }
    const double gain = std::max(0.0, r.ssr - u.ssr);
    if (u.ssr <= 1e-15 * r.ssr) {
        // the cause lags explain the effect exactly
        result.f_stat = std::numeric_limits<double>::infinity();
        result.p_value = 0.0;
        return result;
    }
    result.f_stat = (gain / result.df_num) / (u.ssr / result.df_denom);
    const boost::math::fisher_f dist(result.df_num, result.df_denom);
    result.p_value = boost::math::cdf(boost::math::complement(dist, result.f_stat));
    return result;
}

} // namespace relaq
