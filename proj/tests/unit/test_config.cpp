#include <doctest.h>

#include <string>

#include "regen/error.hpp"
#include "regen/scenario.hpp"
#include "support.hpp"

using namespace regen;

namespace {

MarginalSpec any_marginal(oracle::Gen& g) {
    switch (g.index(0, 4)) {
        case 0: return Exponential{g.real(0.1, 5.0)};
        case 1: return Gamma{g.real(0.3, 4.0), g.real(0.1, 5.0)};
        case 2: return Deterministic{g.real(0.1, 3.0)};
        case 3: {
            std::vector<double> w(g.index(1, 4));
            double total = 0.0;
            for (auto& x : w) total += (x = g.real(0.1, 1.0));
            for (auto& x : w) x /= total;
            double sum = 0.0;
            for (double x : w) sum += x;
            w.back() += 1.0 - sum;
            return Lattice{g.real(0.1, 2.0), w};
        }
        default: {
            const double lo = g.real(0.0, 1.0);
            return ShiftedUniform{lo, lo + g.real(0.1, 2.0)};
        }
    }
}

DependenceSpec any_dependence(oracle::Gen& g, std::size_t m) {
    switch (g.index(0, 3)) {
        case 0: return Independent{};
        case 1: return Comonotone{};
        case 2: return CommonShock{Exponential{g.real(0.5, 3.0)}};
        default: {
            const double rho = g.real(0.0, 0.9);
            std::vector<std::vector<double>> c(m, std::vector<double>(m, rho));
            for (std::size_t i = 0; i < m; ++i) c[i][i] = 1.0;
            return GaussianCopula{c};
        }
    }
}

ScheduleSpec any_schedule(oracle::Gen& g, std::size_t m) {
    ScheduleSpec s;
    for (std::size_t i = 0; i < m; ++i)
        if (g.coin())
            s.entries.push_back(AffineSchedule{g.real(0.5, 3.0), g.real(0.0, 5.0)});
        else
            s.entries.push_back(PowerSchedule{g.real(0.5, 2.0), g.real(0.5, 3.0)});
    return s;
}

ScenarioConfig any_config(oracle::Gen& g) {
    ScenarioConfig c;
    const std::size_t m = g.index(1, 3);
    switch (g.index(0, 4)) {
        case 0: {
            LevyQueueSpec s;
            for (std::size_t i = 0; i < m; ++i)
                s.coordinates.push_back({g.real(0.0, 0.9), Exponential{g.real(1.0, 3.0)}, any_marginal(g)});
            s.dependence = any_dependence(g, m);
            c.model = s;
            break;
        }
        case 1: {
            ClearingSpec s;
            for (std::size_t i = 0; i < m; ++i)
                s.coordinates.push_back({g.real(0.1, 2.0), g.real(0.0, 2.0), any_marginal(g), any_marginal(g)});
            s.dependence = any_dependence(g, m);
            c.model = s;
            break;
        }
        case 2: {
            StatusSpec s;
            for (std::size_t i = 0; i < m; ++i)
                s.coordinates.push_back({any_marginal(g), any_marginal(g), g.real(0.1, 10.0)});
            s.dependence = any_dependence(g, m);
            c.model = s;
            break;
        }
        case 3: {
            AgeResidualSpec s;
            for (std::size_t i = 0; i < m; ++i) s.cycles.push_back(any_marginal(g));
            s.dependence = any_dependence(g, m);
            c.model = s;
            break;
        }
        default: {
            JacksonSpec s;
            const std::size_t n = g.index(1, 3);
            for (std::size_t j = 0; j < n; ++j) {
                s.arrival_rates.push_back(j == 0 ? g.real(0.1, 0.3) : g.real(0.0, 0.1));
                s.service_rates.push_back(g.real(1.5, 3.0));
            }
            s.routing.assign(n, std::vector<double>(n, 0.0));
            for (std::size_t j = 0; j + 1 < n; ++j) s.routing[j][j + 1] = g.real(0.0, 0.5);
            for (std::size_t k = 0; k < m; ++k) s.observations.push_back({g.real(0.5, 3.0), g.real(0.0, 2.0)});
            c.model = s;
            break;
        }
    }
    if (!std::holds_alternative<JacksonSpec>(c.model)) c.schedule = any_schedule(g, m);
    c.run.seed = g.u64();
    c.run.replications = g.index(1, 1'000'000);
    c.run.t_grid = {g.real(1.0, 10.0), g.real(20.0, 50.0), g.real(100.0, 1000.0)};
    c.run.n_cycles = g.index(100, 100'000);
    c.run.horizon = g.real(1e3, 1e6);
    if (g.coin()) c.run.burn_in = g.real(1e3, 1e4);
    c.run.allow_hypothesis_fail = g.coin();
    c.run.test_functions = g.coin() ? "quantile_indicators" : "exponential";
    if (g.coin()) c.run.components = std::vector<std::size_t>(m, 0);
    if (g.coin()) c.run.stationary = StationaryQuery{g.index(0, m - 1), IndicatorFn{0, g.real(0.0, 2.0)}};
    c.run.bootstrap = g.index(2, 1000);
    c.run.quantile_draws = g.index(1, 100'000);
    c.output.directory = "out/" + std::to_string(g.index(0, 999));
    c.output.formats = g.coin() ? std::vector<std::string>{"csv"} : std::vector<std::string>{"csv", "json"};
    return c;
}

std::string config_error_path(const std::string& json) {
    try {
        parse_config(json);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<no error>";
}

const char* kClearing = R"({
  "model": {"kind": "clearing", "coordinates": [
    {"drift": 1.0, "cycle": {"kind": "exponential", "rate": 1.0}},
    {"drift": 1.0, "cycle": {"kind": "exponential", "rate": 0.5}}]},
  "schedule": [{"family": "affine", "a": 1.0}, {"family": "affine", "a": 1.0}]
})";

}  // namespace

TEST_CASE("property: parse . serialize . parse is the identity") {
    oracle::Gen gen(31);
    for (int trial = 0; trial < 300; ++trial) {
        const ScenarioConfig c = any_config(gen);
        validate(c);
        const std::string text = serialize_config(c);
        const ScenarioConfig back = parse_config(text);
        CHECK(back == c);
        CHECK(serialize_config(back) == text);
    }
}

TEST_CASE("defaults are filled in and echoed") {
    const auto c = parse_config(kClearing);
    CHECK(c.run.seed == 1);
    CHECK(c.run.replications == 100'000);
    CHECK(c.run.t_grid == std::vector<double>{10.0, 100.0, 1000.0});
    CHECK(c.run.bootstrap == 400);
    CHECK(c.output.formats == std::vector<std::string>{"csv", "json"});
    const auto text = serialize_config(c);
    CHECK(text.find("\"replications\": 100000") != std::string::npos);
    CHECK(text.find("\"allow_hypothesis_fail\": false") != std::string::npos);
}

TEST_CASE("validation errors carry a JSON path") {
    CHECK(config_error_path("{") == "");
    CHECK(config_error_path("[]") == "");
    CHECK(config_error_path(R"({"schedule": []})") == "/model");
    CHECK(config_error_path(R"({"model": {"kind": "bogus"}})") == "/model/kind");
    CHECK(config_error_path(R"({"model": {"kind": "levy_queue", "coordinates": [
        {"jump_rate": 1.2, "jump_size": {"kind": "exponential", "rate": 1.0},
         "restart": {"kind": "exponential", "rate": 1.0}}]},
        "schedule": [{"family": "affine", "a": 1}]})") == "/model/coordinates/0/jump_rate");
    CHECK(config_error_path(R"({"model": {"kind": "clearing", "coordinates": [
        {"cycle": {"kind": "gamma", "shape": -1, "rate": 1}}]},
        "schedule": [{"family": "affine", "a": 1}]})") == "/model/coordinates/0/cycle/shape");
    CHECK(config_error_path(R"({"model": {"kind": "clearing", "coordinates": [
        {"cycle": {"kind": "exponential", "rate": 1}}]},
        "schedule": [{"family": "affine", "a": 0}]})") == "/schedule/0/a");
    CHECK(config_error_path(R"({"model": {"kind": "clearing", "coordinates": [
        {"cycle": {"kind": "exponential", "rate": 1}}]},
        "schedule": [{"family": "affine", "a": 1}, {"family": "affine", "a": 1}]})") == "/schedule");
    CHECK(config_error_path(R"({"model": {"kind": "clearing", "coordinates": [
        {"cycle": {"kind": "exponential", "rate": 1}, "colour": 3}]},
        "schedule": [{"family": "affine", "a": 1}]})") == "/model/coordinates/0/colour");
    CHECK(config_error_path(R"({"model": {"kind": "age_residual", "cycles": [
        {"kind": "lattice", "span": 1, "weights": [0.5, 0.4]}]},
        "schedule": [{"family": "affine", "a": 1}]})") == "/model/cycles/0/weights");
}

TEST_CASE("run section validation") {
    auto with_run = [](const std::string& run) {
        std::string s = kClearing;
        s.insert(s.rfind('}'), R"(, "run": )" + run);
        return config_error_path(s);
    };
    CHECK(with_run("{}") == "<no error>");
    CHECK(with_run(R"({"replications": 0})") == "/run/replications");
    CHECK(with_run(R"({"t_grid": [10, 100]})") == "/run/t_grid");
    CHECK(with_run(R"({"t_grid": [10, 10, 100]})") == "/run/t_grid/1");
    CHECK(with_run(R"({"n_cycles": 99})") == "/run/n_cycles");
    CHECK(with_run(R"({"seed": -1})") == "/run/seed");
    CHECK(with_run(R"({"seed": 1.5})") == "/run/seed");
    CHECK(with_run(R"({"test_functions": "cosine"})") == "/run/test_functions");
    CHECK(with_run(R"({"components": [0, 1]})") == "/run/components/1");
    CHECK(with_run(R"({"stationary": {"coordinate": 2, "g": {"kind": "identity"}}})") == "/run/stationary/coordinate");
    CHECK(with_run(R"({"stationary": {"coordinate": 0, "g": {"kind": "sine"}}})") == "/run/stationary/g/kind");
    CHECK(with_run(R"({"bootstrap": 1})") == "/run/bootstrap");
}

TEST_CASE("jackson configs take their schedule from observations") {
    const std::string jackson = R"({"model": {"kind": "jackson", "arrival_rates": [0.5, 0], "service_rates": [1, 1],
        "routing": [[0, 1], [0, 0]], "observations": [{"alpha": 2}, {"alpha": 3, "beta": 1}]}})";
    const auto c = parse_config(jackson);
    const auto s = effective_schedule(c);
    REQUIRE(s.size() == 2);
    CHECK(s.evaluate(1, 10.0) == 31.0);
    CHECK(effective_components(c) == std::vector<std::size_t>{0, 1});
    std::string with_schedule = jackson;
    with_schedule.insert(with_schedule.rfind('}'), R"(, "schedule": [{"family": "affine", "a": 1}])");
    CHECK(config_error_path(with_schedule) == "/schedule");
}

TEST_CASE("load_config reports unreadable files") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
