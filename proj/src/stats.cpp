#include "loclab/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>

#include "loclab/errors.hpp"

namespace loclab {

std::pair<double, double> clopper_pearson(long long k, long long n, double confidence) {
    if (n <= 0 || k < 0 || k > n) throw InvalidDomain("bad binomial counts");
    const double alpha = 1.0 - confidence;
    using boost::math::binomial_distribution;
    const double lo = binomial_distribution<double>::find_lower_bound_on_p(
        static_cast<double>(n), static_cast<double>(k), alpha / 2.0);
    const double hi = binomial_distribution<double>::find_upper_bound_on_p(
        static_cast<double>(n), static_cast<double>(k), alpha / 2.0);
    return {lo, hi};
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw InvalidDomain("mean of empty sample");
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double median_of(std::vector<double> xs) {
    if (xs.empty()) throw InvalidDomain("median of empty sample");
    std::sort(xs.begin(), xs.end());
    const size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidDomain("least squares needs >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw InvalidDomain("degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.slope * x[i] + fit.intercept;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

} // namespace loclab
