#include <doctest.h>

#include <cmath>

#include "regen/engine.hpp"
#include "regen/error.hpp"
#include "regen/models.hpp"
#include "support.hpp"

using namespace regen;

namespace {

ModelPtr drift_clearing(MarginalSpec cycle, std::size_t m = 1, DependenceSpec dep = Independent{}) {
    ClearingSpec spec;
    spec.coordinates.assign(m, ClearingCoordinate{1.0, 0.0, Exponential{1.0}, cycle});
    spec.dependence = dep;
    return build_clearing(spec);
}

ModelPtr ages(MarginalSpec cycle, std::size_t m = 1, DependenceSpec dep = Independent{}) {
    AgeResidualSpec spec;
    spec.cycles.assign(m, cycle);
    spec.dependence = dep;
    return build_age_residual(spec);
}

}  // namespace

TEST_CASE("evaluate_at examples") {
    SUBCASE("pure-drift clearing with unit cycles is t mod 1") {
        Realization r(drift_clearing(Deterministic{1.0}), RngStream(1, 0));
        CHECK(r.evaluate_at(0, 2.5)[0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(r.evaluate_at(0, 2.0)[0] == 0.0);
    }
    SUBCASE("Levy queue from U = 1 without jumps drains linearly") {
        LevyQueueSpec spec;
        spec.coordinates = {LevyQueueCoordinate{0.0, Exponential{1.0}, Deterministic{1.0}}};
        Realization r(build_levy_queue(spec), RngStream(1, 0));
        CHECK(r.evaluate_at(0, 0.75)[0] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(r.evaluate_at(0, 0.0)[0] == 1.0);
    }
    SUBCASE("bad arguments") {
        Realization r(drift_clearing(Exponential{1.0}), RngStream(1, 0));
        CHECK_THROWS_AS(r.evaluate_at(1, 1.0), DomainError);
        CHECK_THROWS_AS(r.evaluate_at(0, -1.0), DomainError);
        CHECK_THROWS_AS(r.evaluate_at(0, std::nan("")), DomainError);
    }
}

TEST_CASE("property: right continuity at epochs and bit-identical re-evaluation") {
    oracle::Gen gen(4);
    const ModelPtr models[] = {drift_clearing(Exponential{1.5}, 2, Comonotone{}), ages(Gamma{2.0, 1.0}, 2),
                               ages(ShiftedUniform{0.2, 1.0}, 3, CommonShock{Exponential{2.0}})};
    for (const auto& model : models)
        for (int trial = 0; trial < 10; ++trial) {
            Realization r(model, RngStream(gen.u64(), 0));
            const std::size_t i = gen.index(0, model->dimension() - 1);
            const auto path = r.renewal_path(i, 50.0);
            for (int k = 0; k < 20; ++k) {
                const std::size_t n = gen.index(0, path.epochs().size() - 2);
                const double s = path.epochs()[n];
                CHECK(r.evaluate_at(i, s) == r.cycle(n, i).eval(0.0));
                const double t = gen.real(0.0, 50.0);
                const State first = r.evaluate_at(i, t);
                CHECK(r.evaluate_at(i, t) == first);
            }
        }
}

TEST_CASE("property: streaming evaluation matches a cached realisation on the same stream") {
    oracle::Gen gen(5);
    const auto model = ages(Exponential{1.0}, 3, GaussianCopula{{{1.0, 0.5, 0.2}, {0.5, 1.0, 0.3}, {0.2, 0.3, 1.0}}});
    for (int trial = 0; trial < 20; ++trial) {
        const std::uint64_t seed = gen.u64();
        const std::vector<double> times{gen.real(0.0, 30.0), gen.real(0.0, 30.0), gen.real(0.0, 30.0)};
        RngStream a(seed, 3);
        const auto streamed = evaluate_at_times(*model, a, times);
        Realization r(model, RngStream(seed, 3));
        for (std::size_t i = 0; i < 3; ++i) CHECK(streamed[i] == r.evaluate_at(i, times[i]));
    }
}

TEST_CASE("cycle budget is enforced") {
    RngStream rng(1, 0);
    const std::vector<double> times{1e6};
    CHECK_THROWS_AS(evaluate_at_times(*drift_clearing(Deterministic{1.0}), rng, times, 1000), BudgetError);
    Realization r(drift_clearing(Deterministic{1.0}), RngStream(1, 0), 10);
    CHECK_THROWS_AS(r.evaluate_at(0, 20.0), BudgetError);
}

TEST_CASE("renewal_reward_estimate examples") {
    RngStream rng(21, 0);
    const auto clearing = drift_clearing(Exponential{1.0});
    SUBCASE("pure-drift clearing mean is the mean age") {
        // Oracle: E T^2 / (2 E T) = 1 for exponential(1).
        const auto e = renewal_reward_estimate(*clearing, 0, IdentityFn{0}, 100'000, rng);
        CHECK(std::abs(e.estimate - 1.0) <= 3 * e.standard_error);
        CHECK(e.standard_error > 0.0);
        CHECK(e.standard_error < 0.02);
    }
    SUBCASE("constant g gives 1 exactly") {
        const auto e = renewal_reward_estimate(*clearing, 0, ConstantFn{1.0}, 1000, rng);
        CHECK(e.estimate == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("age indicator at ln 2 is F_e(ln 2) = 1/2") {
        const auto e = renewal_reward_estimate(*ages(Exponential{1.0}), 0, IndicatorFn{0, std::log(2.0)}, 100'000, rng);
        CHECK(std::abs(e.estimate - equilibrium_cdf(Exponential{1.0}, std::log(2.0))) <= 3 * e.standard_error);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(renewal_reward_estimate(*clearing, 0, ConstantFn{1.0}, 99, rng), DomainError);
        CHECK_THROWS_AS(renewal_reward_estimate(*clearing, 0, IdentityFn{1}, 1000, rng), DomainError);
    }
}

TEST_CASE("time_average_estimate examples") {
    RngStream rng(22, 0);
    SUBCASE("constant g") {
        CHECK(time_average_estimate(*drift_clearing(Exponential{1.0}), 0, ConstantFn{1.0}, 1e3, rng).estimate == 1.0);
    }
    SUBCASE("pure-drift clearing over 1e5") {
        const auto e = time_average_estimate(*drift_clearing(Exponential{1.0}), 0, IdentityFn{0}, 1e5, rng);
        CHECK(std::abs(e.estimate - 1.0) < 0.02);
    }
    SUBCASE("unit sawtooth over an integer horizon") {
        for (double k : {100.0, 1000.0, 12345.0}) {
            const auto e = time_average_estimate(*ages(Deterministic{1.0}), 0, IdentityFn{0}, k, rng);
            CHECK(e.estimate == doctest::Approx(0.5).epsilon(1e-12));
        }
    }
    SUBCASE("horizon must cover 100 cycles") {
        CHECK_THROWS_AS(time_average_estimate(*ages(Deterministic{1.0}), 0, IdentityFn{0}, 99.0, rng), DomainError);
    }
}

TEST_CASE("sample_stationary examples") {
    SUBCASE("deterministic cycles at an epoch have age 0") {
        RngStream rng(1, 0);
        CHECK(sample_stationary(*ages(Deterministic{2.0}), 0, 1000.0, rng)[0] == 0.0);
    }
    SUBCASE("exponential age at 1e3 follows F_e") {
        const auto model = ages(Exponential{1.0});
        std::vector<double> xs(100'000);
        for (std::size_t r = 0; r < xs.size(); ++r) {
            RngStream rng(31, r);
            xs[r] = sample_stationary(*model, 0, 1000.0, rng)[0];
        }
        CHECK(oracle::ks(xs, [](double x) {
                  return oracle::equilibrium([](double u) { return std::exp(-u); }, 1.0, x);
              }) < 0.01);
    }
    SUBCASE("comonotone identical coordinates give identical draws") {
        const auto model = ages(Gamma{2.0, 1.0}, 2, Comonotone{});
        const std::vector<double> times{1000.0, 1000.0};
        for (std::size_t r = 0; r < 1000; ++r) {
            RngStream rng(32, r);
            const auto s = evaluate_at_times(*model, rng, times);
            CHECK(s[0] == s[1]);
        }
    }
    SUBCASE("burn-in precondition and default") {
        RngStream rng(1, 0);
        CHECK_THROWS_AS(sample_stationary(*ages(Deterministic{20.0}), 0, 1000.0, rng), DomainError);
        const std::vector<double> small{1.0, 2.0}, big{1.0, 50.0};
        CHECK(default_burn_in(small) == 1000.0);
        CHECK(default_burn_in(big) == 5000.0);
    }
}

TEST_CASE("property: renewal-reward and time-average estimates agree") {
    const ModelPtr models[] = {drift_clearing(Gamma{2.0, 2.0}), ages(ShiftedUniform{0.5, 1.5}),
                               ages(Exponential{1.0}, 2, Comonotone{})};
    const TestFunction bank[] = {IdentityFn{0}, IndicatorFn{0, 0.5}, ExponentialFn{0}};
    std::uint64_t seed = 40;
    for (const auto& model : models)
        for (const auto& g : bank) {
            RngStream a(++seed, 0), b(seed, 1);
            const auto rr = renewal_reward_estimate(*model, 0, g, 20'000, a);
            const auto ta = time_average_estimate(*model, 0, g, 2e4, b);
            CHECK(std::abs(rr.estimate - ta.estimate) <= 3 * std::hypot(rr.standard_error, ta.standard_error));
        }
}
