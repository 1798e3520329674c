#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace regen {

/// Neumaier-compensated running sum. Used for renewal epochs so that S_n
/// tracks the exact sum of cycle lengths to within an ulp per term.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            compensation_ += (sum_ - t) + x;
        else
            compensation_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

double mean(std::span<const double> xs);
/// Unbiased sample variance; zero for fewer than two values.
double sample_variance(std::span<const double> xs);
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// Average ranks (ties share the mean rank), 1-based.
std::vector<double> ranks(std::span<const double> xs);
double spearman_correlation(std::span<const double> xs, std::span<const double> ys);

/// Empirical quantile: the smallest sample x with ECDF(x) >= p.
double empirical_quantile(std::span<const double> sorted, double p);

/// sup_x |ECDF(x) - cdf(x)| for a continuous reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Half the L1 distance between two probability vectors of equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace regen
