#include <doctest.h>

#include <cmath>
#include <map>

#include "regen/error.hpp"
#include "regen/models.hpp"
#include "regen/stats.hpp"
#include "support.hpp"

using namespace regen;

namespace {

std::vector<CyclePath> draw(const RegenModel& model, RngStream& rng) {
    std::vector<CyclePath> tuple(model.dimension());
    model.generate(rng, tuple);
    return tuple;
}

JacksonSpec tandem() {
    JacksonSpec s;
    s.arrival_rates = {0.5, 0.0};
    s.service_rates = {1.0, 1.0};
    s.routing = {{0.0, 1.0}, {0.0, 0.0}};
    s.observations = {{2.0, 0.0}, {3.0, 1.0}};
    return s;
}

}  // namespace

TEST_CASE("Levy queue examples") {
    SUBCASE("no jumps and U = 1 drains in exactly one time unit") {
        LevyQueueSpec spec;
        spec.coordinates = {LevyQueueCoordinate{0.0, Exponential{1.0}, Deterministic{1.0}}};
        const auto model = build_levy_queue(spec);
        RngStream rng(1, 0);
        for (int k = 0; k < 100; ++k) {
            const auto t = draw(*model, rng);
            CHECK(t[0].length() == 1.0);
            CHECK(t[0].segments() == 1);
            CHECK(t[0].eval(0.0)[0] == 1.0);
            CHECK(t[0].eval(0.5)[0] == 0.5);
        }
    }
    SUBCASE("comonotone restarts with identical dynamics give identical cycle lengths") {
        LevyQueueSpec spec;
        spec.coordinates.assign(2, LevyQueueCoordinate{0.0, Exponential{1.0}, Gamma{2.0, 1.5}});
        spec.dependence = Comonotone{};
        const auto model = build_levy_queue(spec);
        RngStream rng(2, 0);
        for (int k = 0; k < 1000; ++k) {
            const auto t = draw(*model, rng);
            CHECK(t[0].length() == t[1].length());
        }
    }
    SUBCASE("unstable and invalid specs are rejected") {
        LevyQueueSpec spec;
        spec.coordinates = {LevyQueueCoordinate{1.2, Exponential{1.0}, Exponential{1.0}}};
        CHECK_THROWS_AS(build_levy_queue(spec), ConfigError);
        spec.coordinates[0].jump_rate = 1.0;
        CHECK_THROWS_AS(build_levy_queue(spec), ConfigError);
        spec.coordinates[0].jump_rate = -0.1;
        CHECK_THROWS_AS(build_levy_queue(spec), ConfigError);
        CHECK_THROWS_AS(build_levy_queue(LevyQueueSpec{}), ConfigError);
    }
    SUBCASE("arithmetic restart levels and jump sizes warn") {
        LevyQueueSpec spec;
        spec.coordinates = {LevyQueueCoordinate{0.5, Lattice{1.0, {1.0}}, Lattice{1.0, {0.5, 0.5}}},
                            LevyQueueCoordinate{0.5, Exponential{1.0}, Lattice{1.0, {0.5, 0.5}}}};
        const auto w = build_levy_queue(spec)->warnings();
        REQUIRE(w.size() == 1);
        CHECK(w[0].find("arithmetic cycle-length distribution for coordinate 0") != std::string::npos);
    }
}

TEST_CASE("property: Levy workload paths and cycle means") {
    oracle::Gen gen(11);
    for (int trial = 0; trial < 8; ++trial) {
        const double lambda = gen.real(0.0, 0.8);
        const double b = gen.real(0.2, 0.9 / std::max(lambda, 0.9));
        LevyQueueSpec spec;
        spec.coordinates = {LevyQueueCoordinate{lambda, Exponential{1.0 / b}, Gamma{2.0, gen.real(0.5, 3.0)}}};
        const auto model = build_levy_queue(spec);
        RngStream rng(trial, 0);
        std::vector<double> lengths(20'000);
        for (auto& len : lengths) {
            const auto t = draw(*model, rng);
            const CyclePath& p = t[0];
            len = p.length();
            for (std::size_t k = 0; k < p.segments(); ++k) {
                CHECK(p.value(k)[0] > 0.0);
                CHECK(p.slope(k)[0] == -1.0);
                const double end_level = p.value(k)[0] - (p.end(k) - p.start(k));
                CHECK(end_level >= -1e-12 * p.length());
                if (k + 1 < p.segments()) CHECK(p.value(k + 1)[0] > end_level);
            }
            const auto last = p.segments() - 1;
            CHECK(p.value(last)[0] - (p.length() - p.start(last)) == doctest::Approx(0.0).scale(p.length()));
        }
        const double mu = levy_cycle_means(spec)[0];
        const double se = std::sqrt(oracle::variance(lengths) / lengths.size());
        CHECK(std::abs(oracle::mean(lengths) - mu) <= 3 * se);
    }
}

TEST_CASE("clearing examples") {
    SUBCASE("pure drift over unit cycles is a sawtooth") {
        ClearingSpec spec;
        spec.coordinates = {ClearingCoordinate{1.0, 0.0, Exponential{1.0}, Deterministic{1.0}}};
        Realization r(build_clearing(spec), RngStream(1, 0));
        for (double t : {0.0, 0.3, 1.0, 4.75, 17.5})
            CHECK(r.evaluate_at(0, t)[0] == doctest::Approx(t - std::floor(t)).epsilon(1e-12));
    }
    SUBCASE("stationary mean of pure drift is the mean age") {
        ClearingSpec spec;
        spec.coordinates = {ClearingCoordinate{1.0, 0.0, Exponential{1.0}, Exponential{1.0}}};
        RngStream rng(2, 0);
        const auto e = renewal_reward_estimate(*build_clearing(spec), 0, IdentityFn{0}, 100'000, rng);
        CHECK(std::abs(e.estimate - 1.0) <= 3 * e.standard_error);
    }
    SUBCASE("stationary mean of pure jumps is lambda E[B] E[age]") {
        ClearingSpec spec;
        spec.coordinates = {ClearingCoordinate{0.0, 1.0, Deterministic{1.0}, Exponential{1.0}}};
        RngStream rng(3, 0);
        const auto e = renewal_reward_estimate(*build_clearing(spec), 0, IdentityFn{0}, 100'000, rng);
        CHECK(std::abs(e.estimate - 1.0) <= 3 * e.standard_error);
    }
    SUBCASE("degenerate content and lattice cycles") {
        ClearingSpec spec;
        spec.coordinates = {ClearingCoordinate{0.0, 0.0, Exponential{1.0}, Exponential{1.0}}};
        CHECK_THROWS_AS(build_clearing(spec), ConfigError);
        spec.coordinates = {ClearingCoordinate{1.0, 0.0, Exponential{1.0}, Lattice{0.5, {0.5, 0.5}}}};
        CHECK(build_clearing(spec)->warnings().size() == 1);
    }
}

TEST_CASE("property: clearing paths are nondecreasing and restart at zero") {
    oracle::Gen gen(12);
    for (int trial = 0; trial < 20; ++trial) {
        ClearingSpec spec;
        spec.coordinates = {ClearingCoordinate{gen.real(0.0, 2.0), gen.real(0.1, 3.0), Gamma{gen.real(0.5, 2.0), 1.0},
                                               Exponential{gen.real(0.2, 2.0)}}};
        const auto model = build_clearing(spec);
        RngStream rng(trial, 1);
        for (int n = 0; n < 200; ++n) {
            const auto t = draw(*model, rng);
            const CyclePath& p = t[0];
            CHECK(p.eval(0.0)[0] == 0.0);
            double prev = 0.0;
            for (int k = 0; k <= 20; ++k) {
                const double x = p.eval(p.length() * k / 21.0)[0];
                CHECK(x >= prev);
                prev = x;
            }
        }
    }
}

TEST_CASE("status examples") {
    SUBCASE("huge capacity is almost always updated") {
        StatusSpec spec;
        spec.coordinates = {StatusCoordinate{Exponential{1.0}, ShiftedUniform{0.0, 1.0}, 1e9}};
        const auto model = build_status(spec);
        std::size_t updated = 0;
        for (std::size_t r = 0; r < 2000; ++r) {
            RngStream rng(4, r);
            updated += evaluate(status_updated(), sample_stationary(*model, 0, 1000.0, rng)) > 0.5;
        }
        CHECK(updated >= 1998);
    }
    SUBCASE("capacity must be positive") {
        StatusSpec spec;
        spec.coordinates = {StatusCoordinate{Exponential{1.0}, Deterministic{1.0}, 0.0}};
        CHECK_THROWS_AS(build_status(spec), ConfigError);
    }
}

TEST_CASE("property: updated indicator is monotone in capacity under shared randomness") {
    oracle::Gen gen(13);
    for (int trial = 0; trial < 30; ++trial) {
        const double c = gen.real(0.1, 3.0);
        StatusSpec lo, hi;
        lo.coordinates = {StatusCoordinate{Gamma{2.0, 1.0}, Exponential{1.0}, c},
                          StatusCoordinate{Exponential{0.7}, Deterministic{1.0}, 1.0}};
        hi = lo;
        hi.coordinates[gen.index(0, 1)].capacity *= gen.real(1.0, 4.0);
        const auto a = build_status(lo), b = build_status(hi);
        const double t = gen.real(0.0, 100.0);
        for (std::size_t r = 0; r < 50; ++r) {
            const std::vector<double> times{t, t};
            RngStream ra(trial, r), rb(trial, r);
            const auto sa = evaluate_at_times(*a, ra, times);
            const auto sb = evaluate_at_times(*b, rb, times);
            for (std::size_t i = 0; i < 2; ++i)
                CHECK(evaluate(status_updated(), sa[i]) <= evaluate(status_updated(), sb[i]));
        }
    }
}

TEST_CASE("pi_closed_form examples") {
    StatusSpec spec;
    spec.coordinates = {StatusCoordinate{Exponential{1.0}, Deterministic{0.5}, 1.0},
                        StatusCoordinate{Exponential{0.7}, Deterministic{1.0}, 1.0}};
    // Oracle: prod_i mu_i^{-1} int_{y_i}^inf P(T_i > u) du by quadrature.
    double oracle_pi = 1.0;
    for (double lambda : {1.0, 0.7}) {
        const double y = lambda == 1.0 ? 0.5 : 1.0;
        oracle_pi *= 1.0 - oracle::equilibrium([lambda](double u) { return std::exp(-lambda * u); }, 1.0 / lambda, y);
    }
    CHECK(pi_closed_form(spec) == doctest::Approx(oracle_pi).epsilon(1e-10));
    CHECK(pi_closed_form(spec) == doctest::Approx(0.301194).epsilon(1e-6));

    StatusSpec one;
    one.coordinates = {StatusCoordinate{Deterministic{1.0}, Deterministic{0.25}, 1.0}};
    CHECK(pi_closed_form(one) == doctest::Approx(0.75).epsilon(1e-12));
    one.coordinates[0].capacity = 1e12;
    CHECK(pi_closed_form(one) == doctest::Approx(1.0).epsilon(1e-9));
    one.coordinates[0].capacity = 1.0;
    one.coordinates[0].update_size = Deterministic{2.0};
    CHECK(pi_closed_form(one) == 0.0);
}

TEST_CASE("traffic_solve examples") {
    CHECK(traffic_solve(tandem()) == std::vector<double>{0.5, 0.5});
    JacksonSpec fb;
    fb.arrival_rates = {0.25};
    fb.service_rates = {1.0};
    fb.routing = {{0.5}};
    fb.observations = {{}};
    CHECK(traffic_solve(fb)[0] == doctest::Approx(0.25 / (1.0 - 0.5)).epsilon(1e-14));
    JacksonSpec zero = tandem();
    zero.routing = {{0.0, 0.0}, {0.0, 0.0}};
    const auto r = traffic_solve(zero);
    CHECK(r[0] == 0.5);
    CHECK(r[1] == 0.0);
}

TEST_CASE("Jackson validation") {
    JacksonSpec s = tandem();
    s.arrival_rates = {0.0, 0.0};
    CHECK_THROWS_AS(build_jackson(s), ConfigError);
    s = tandem();
    s.service_rates = {1.0, 0.4};
    CHECK_THROWS_AS(build_jackson(s), ConfigError);
    s = tandem();
    s.routing = {{0.6, 0.6}, {0.0, 0.0}};
    CHECK_THROWS_AS(build_jackson(s), ConfigError);
    s = tandem();
    s.observations = {{-1.0, 0.0}};
    CHECK_THROWS_AS(build_jackson(s), ConfigError);
}

TEST_CASE("single M/M/1 marginal at t = 1000 is geometric") {
    JacksonSpec s;
    s.arrival_rates = {0.5};
    s.service_rates = {1.0};
    s.routing = {{0.0}};
    s.observations = {{}};
    const auto model = build_jackson(s);
    const std::size_t n = 100'000, cap = 30;
    std::vector<double> counts(cap + 1, 0.0), target(cap + 1, 0.0);
    const std::vector<double> times{1000.0};
    for (std::size_t r = 0; r < n; ++r) {
        RngStream rng(5, r);
        const auto x = static_cast<std::size_t>(evaluate_at_times(*model, rng, times)[0][0]);
        counts[std::min(x, cap)] += 1.0 / n;
    }
    double tail = 1.0;
    for (std::size_t k = 0; k < cap; ++k) {
        target[k] = 0.5 * std::pow(0.5, static_cast<double>(k));
        tail -= target[k];
    }
    target[cap] = tail;
    CHECK(total_variation(counts, target) < 0.02);
    // Mean cycle length 1 / (lambda P(empty)) = 4.
    CHECK(jackson_cycle_mean(s) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("Jackson cycles are stationary across the cycle index") {
    const auto model = build_jackson(tandem());
    RngStream rng(6, 0);
    const std::size_t n = 100'000;
    std::vector<double> first, second, sizes_a, sizes_b;
    for (std::size_t k = 0; k < n; ++k) {
        const auto t = draw(*model, rng);
        (k < n / 2 ? first : second).push_back(t[0].length());
        (k < n / 2 ? sizes_a : sizes_b).push_back(static_cast<double>(t[0].segments()));
        CHECK(t[0].eval(0.0) == State{0.0, 0.0});
        CHECK(t[1].length() == t[0].length());
    }
    CHECK(ks_two_sample(first, second) < 0.02);
    CHECK(ks_two_sample(sizes_a, sizes_b) < 0.02);
    const double se = std::sqrt(oracle::variance(first) / first.size());
    CHECK(std::abs(oracle::mean(first) - jackson_cycle_mean(tandem())) <= 3 * se);
}
