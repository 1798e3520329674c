#pragma once

// Test-side oracles and a small property-test generator. Nothing here calls
// into the library under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

/// Hand-rolled generator for property tests: mt19937_64 with a fixed seed,
/// independent of the Philox streams under test.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_); }
    std::uint64_t u64() { return eng_(); }
    bool coin() { return index(0, 1) == 1; }

private:
    std::mt19937_64 eng_;
};

inline double gk(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-12);
}

/// sup |ECDF - F| for a continuous F, computed directly.
inline double ks(std::vector<double> xs, const std::function<double(double)>& F) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double f = F(xs[k]);
        d = std::max({d, std::abs((k + 1) / n - f), std::abs(f - k / n)});
    }
    return d;
}

/// Gamma CDF by quadrature of the density, independent of special functions.
inline double gamma_cdf(double shape, double rate, double x) {
    if (x <= 0.0) return 0.0;
    const double c = shape * std::log(rate) - std::lgamma(shape);
    auto density = [&](double u) { return u <= 0.0 ? 0.0 : std::exp(c + (shape - 1.0) * std::log(u) - rate * u); };
    return gk(density, 0.0, x);
}

/// Erlang CDF in closed form: 1 - e^{-rx} sum_{j<k} (rx)^j / j!.
inline double erlang_cdf(int k, double rate, double x) {
    if (x <= 0.0) return 0.0;
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < k; ++j) sum += (term *= rate * x / j);
    return 1.0 - std::exp(-rate * x) * sum;
}

/// F_e(x) = mu^{-1} int_0^x survival(u) du by Gauss-Kronrod.
inline double equilibrium(const std::function<double(double)>& survival, double mu, double x) {
    return x <= 0.0 ? 0.0 : gk(survival, 0.0, x) / mu;
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

inline double correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
        syy += (y[k] - my) * (y[k] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
