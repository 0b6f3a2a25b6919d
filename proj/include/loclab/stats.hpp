// stats.hpp - small statistical helpers shared by the estimators.
#pragma once

#include <utility>
#include <vector>

namespace loclab {

// Exact (Clopper-Pearson) two-sided binomial confidence interval for k
// successes in n trials at the given confidence level.
std::pair<double, double> clopper_pearson(long long k, long long n, double confidence = 0.95);

double mean_of(const std::vector<double>& xs);
double median_of(std::vector<double> xs); // by value: sorts a copy

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

} // namespace loclab
