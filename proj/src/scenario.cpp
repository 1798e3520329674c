#include "regen/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "regen/detail/overloaded.hpp"
#include "regen/error.hpp"

namespace regen {

using detail::overloaded;
using nlohmann::json;

namespace {

std::string child(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    expect_object(j, path);
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(child(path, key), "unknown key");
}

const json& required(const json& j, const std::string& path, std::string_view key) {
    const auto it = j.find(std::string(key));
    if (it == j.end()) throw ConfigError(child(path, key), "required key is missing");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
        throw ConfigError(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array");
    return j;
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
    std::vector<double> out;
    for (std::size_t k = 0; k < as_array(j, path).size(); ++k) out.push_back(as_number(j[k], child(path, k)));
    return out;
}

template <class T, class F>
T optional_field(const json& j, const std::string& path, std::string_view key, T fallback, F&& convert) {
    const auto it = j.find(std::string(key));
    return it == j.end() ? fallback : convert(*it, child(path, key));
}

// ---------------------------------------------------------------------------
// Marginals, dependence, test functions, schedules.

MarginalSpec parse_marginal(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string kind = as_string(required(j, path, "kind"), child(path, "kind"));
    MarginalSpec spec;
    if (kind == "exponential") {
        check_keys(j, path, {"kind", "rate"});
        spec = Exponential{as_number(required(j, path, "rate"), child(path, "rate"))};
    } else if (kind == "gamma") {
        check_keys(j, path, {"kind", "shape", "rate"});
        spec = Gamma{as_number(required(j, path, "shape"), child(path, "shape")),
                     as_number(required(j, path, "rate"), child(path, "rate"))};
    } else if (kind == "deterministic") {
        check_keys(j, path, {"kind", "value"});
        spec = Deterministic{as_number(required(j, path, "value"), child(path, "value"))};
    } else if (kind == "lattice") {
        check_keys(j, path, {"kind", "span", "weights"});
        spec = Lattice{as_number(required(j, path, "span"), child(path, "span")),
                       as_numbers(required(j, path, "weights"), child(path, "weights"))};
    } else if (kind == "shifted_uniform") {
        check_keys(j, path, {"kind", "lo", "hi"});
        spec = ShiftedUniform{as_number(required(j, path, "lo"), child(path, "lo")),
                              as_number(required(j, path, "hi"), child(path, "hi"))};
    } else {
        throw ConfigError(child(path, "kind"), "unknown marginal kind '" + kind + "'");
    }
    try {
        validate_marginal(spec);
    } catch (const ConfigError& e) {
        throw e.under(path);
    }
    return spec;
}

json to_json(const MarginalSpec& spec) {
    return std::visit(overloaded{
                          [](const Exponential& s) { return json{{"kind", "exponential"}, {"rate", s.rate}}; },
                          [](const Gamma& s) { return json{{"kind", "gamma"}, {"shape", s.shape}, {"rate", s.rate}}; },
                          [](const Deterministic& s) { return json{{"kind", "deterministic"}, {"value", s.value}}; },
                          [](const Lattice& s) {
                              return json{{"kind", "lattice"}, {"span", s.span}, {"weights", s.weights}};
                          },
                          [](const ShiftedUniform& s) {
                              return json{{"kind", "shifted_uniform"}, {"lo", s.lo}, {"hi", s.hi}};
                          },
                      },
                      spec);
}

DependenceSpec parse_dependence(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string kind = as_string(required(j, path, "kind"), child(path, "kind"));
    if (kind == "independent") {
        check_keys(j, path, {"kind"});
        return Independent{};
    }
    if (kind == "comonotone") {
        check_keys(j, path, {"kind"});
        return Comonotone{};
    }
    if (kind == "common_shock") {
        check_keys(j, path, {"kind", "shock"});
        return CommonShock{parse_marginal(required(j, path, "shock"), child(path, "shock"))};
    }
    if (kind == "gaussian_copula") {
        check_keys(j, path, {"kind", "correlation"});
        const std::string p = child(path, "correlation");
        const json& rows = as_array(required(j, path, "correlation"), p);
        GaussianCopula c;
        for (std::size_t r = 0; r < rows.size(); ++r) c.correlation.push_back(as_numbers(rows[r], child(p, r)));
        return c;
    }
    throw ConfigError(child(path, "kind"), "unknown dependence kind '" + kind + "'");
}

json to_json(const DependenceSpec& dep) {
    return std::visit(overloaded{
                          [](const Independent&) { return json{{"kind", "independent"}}; },
                          [](const Comonotone&) { return json{{"kind", "comonotone"}}; },
                          [](const CommonShock& s) { return json{{"kind", "common_shock"}, {"shock", to_json(s.shock)}}; },
                          [](const GaussianCopula& s) {
                              return json{{"kind", "gaussian_copula"}, {"correlation", s.correlation}};
                          },
                      },
                      dep);
}

TestFunction parse_function(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string kind = as_string(required(j, path, "kind"), child(path, "kind"));
    auto component = [&] { return optional_field<std::size_t>(j, path, "component", 0, as_count); };
    if (kind == "constant") {
        check_keys(j, path, {"kind", "value"});
        return ConstantFn{optional_field<double>(j, path, "value", 1.0, as_number)};
    }
    if (kind == "identity") {
        check_keys(j, path, {"kind", "component"});
        return IdentityFn{component()};
    }
    if (kind == "indicator") {
        check_keys(j, path, {"kind", "component", "threshold"});
        return IndicatorFn{component(), as_number(required(j, path, "threshold"), child(path, "threshold"))};
    }
    if (kind == "exponential") {
        check_keys(j, path, {"kind", "component"});
        return ExponentialFn{component()};
    }
    if (kind == "updated") {
        check_keys(j, path, {"kind", "age", "requirement"});
        return UpdatedFn{optional_field<std::size_t>(j, path, "age", 0, as_count),
                         optional_field<std::size_t>(j, path, "requirement", 1, as_count)};
    }
    if (kind == "equals") {
        check_keys(j, path, {"kind", "component", "value"});
        return EqualsFn{component(), as_number(required(j, path, "value"), child(path, "value"))};
    }
    throw ConfigError(child(path, "kind"), "unknown test function '" + kind + "'");
}

json to_json(const TestFunction& f) {
    return std::visit(overloaded{
                          [](const ConstantFn& s) { return json{{"kind", "constant"}, {"value", s.value}}; },
                          [](const IdentityFn& s) { return json{{"kind", "identity"}, {"component", s.component}}; },
                          [](const IndicatorFn& s) {
                              return json{{"kind", "indicator"}, {"component", s.component}, {"threshold", s.threshold}};
                          },
                          [](const ExponentialFn& s) {
                              return json{{"kind", "exponential"}, {"component", s.component}};
                          },
                          [](const UpdatedFn& s) {
                              return json{{"kind", "updated"}, {"age", s.age}, {"requirement", s.requirement}};
                          },
                          [](const EqualsFn& s) {
                              return json{{"kind", "equals"}, {"component", s.component}, {"value", s.value}};
                          },
                      },
                      f);
}

ScheduleSpec parse_schedule(const json& j, const std::string& path) {
    ScheduleSpec s;
    for (std::size_t k = 0; k < as_array(j, path).size(); ++k) {
        const std::string p = child(path, k);
        const json& e = j[k];
        expect_object(e, p);
        const std::string family = as_string(required(e, p, "family"), child(p, "family"));
        if (family == "affine") {
            check_keys(e, p, {"family", "a", "b"});
            s.entries.push_back(AffineSchedule{as_number(required(e, p, "a"), child(p, "a")),
                                               optional_field<double>(e, p, "b", 0.0, as_number)});
        } else if (family == "power") {
            check_keys(e, p, {"family", "p", "a"});
            s.entries.push_back(PowerSchedule{as_number(required(e, p, "p"), child(p, "p")),
                                              optional_field<double>(e, p, "a", 1.0, as_number)});
        } else {
            throw ConfigError(child(p, "family"), "unknown schedule family '" + family + "'");
        }
    }
    try {
        validate(s);
    } catch (const ConfigError& e) {
        throw e.under(path);
    }
    return s;
}

json to_json(const ScheduleSpec& s) {
    json out = json::array();
    for (const auto& e : s.entries)
        out.push_back(std::visit(overloaded{
                                     [](const AffineSchedule& a) { return json{{"family", "affine"}, {"a", a.a}, {"b", a.b}}; },
                                     [](const PowerSchedule& p) { return json{{"family", "power"}, {"p", p.p}, {"a", p.a}}; },
                                 },
                                 e));
    return out;
}

// ---------------------------------------------------------------------------
// Models.

template <class Coordinate, class F>
std::vector<Coordinate> parse_coordinates(const json& j, const std::string& path, F&& parse_one) {
    const std::string p = child(path, "coordinates");
    const json& arr = as_array(required(j, path, "coordinates"), p);
    std::vector<Coordinate> out;
    for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(parse_one(arr[k], child(p, k)));
    return out;
}

DependenceSpec parse_dependence_field(const json& j, const std::string& path) {
    const auto it = j.find("dependence");
    return it == j.end() ? DependenceSpec{Independent{}} : parse_dependence(*it, child(path, "dependence"));
}

MarginalSpec optional_marginal(const json& j, const std::string& path, std::string_view key, MarginalSpec fallback) {
    const auto it = j.find(std::string(key));
    return it == j.end() ? fallback : parse_marginal(*it, child(path, key));
}

ModelSpec parse_model(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string kind = as_string(required(j, path, "kind"), child(path, "kind"));
    ModelSpec spec;
    if (kind == "levy_queue") {
        check_keys(j, path, {"kind", "dependence", "coordinates"});
        LevyQueueSpec s;
        s.dependence = parse_dependence_field(j, path);
        s.coordinates = parse_coordinates<LevyQueueCoordinate>(j, path, [](const json& c, const std::string& p) {
            check_keys(c, p, {"jump_rate", "jump_size", "restart"});
            return LevyQueueCoordinate{optional_field<double>(c, p, "jump_rate", 0.0, as_number),
                                       optional_marginal(c, p, "jump_size", Exponential{1.0}),
                                       parse_marginal(required(c, p, "restart"), child(p, "restart"))};
        });
        spec = s;
    } else if (kind == "clearing") {
        check_keys(j, path, {"kind", "dependence", "coordinates"});
        ClearingSpec s;
        s.dependence = parse_dependence_field(j, path);
        s.coordinates = parse_coordinates<ClearingCoordinate>(j, path, [](const json& c, const std::string& p) {
            check_keys(c, p, {"drift", "jump_rate", "jump_size", "cycle"});
            return ClearingCoordinate{optional_field<double>(c, p, "drift", 1.0, as_number),
                                      optional_field<double>(c, p, "jump_rate", 0.0, as_number),
                                      optional_marginal(c, p, "jump_size", Exponential{1.0}),
                                      parse_marginal(required(c, p, "cycle"), child(p, "cycle"))};
        });
        spec = s;
    } else if (kind == "status") {
        check_keys(j, path, {"kind", "dependence", "coordinates"});
        StatusSpec s;
        s.dependence = parse_dependence_field(j, path);
        s.coordinates = parse_coordinates<StatusCoordinate>(j, path, [](const json& c, const std::string& p) {
            check_keys(c, p, {"cycle", "update_size", "capacity"});
            return StatusCoordinate{parse_marginal(required(c, p, "cycle"), child(p, "cycle")),
                                    parse_marginal(required(c, p, "update_size"), child(p, "update_size")),
                                    as_number(required(c, p, "capacity"), child(p, "capacity"))};
        });
        spec = s;
    } else if (kind == "age_residual") {
        check_keys(j, path, {"kind", "dependence", "cycles"});
        AgeResidualSpec s;
        s.dependence = parse_dependence_field(j, path);
        const std::string p = child(path, "cycles");
        const json& arr = as_array(required(j, path, "cycles"), p);
        for (std::size_t k = 0; k < arr.size(); ++k) s.cycles.push_back(parse_marginal(arr[k], child(p, k)));
        spec = s;
    } else if (kind == "jackson") {
        check_keys(j, path, {"kind", "arrival_rates", "service_rates", "routing", "observations"});
        JacksonSpec s;
        s.arrival_rates = as_numbers(required(j, path, "arrival_rates"), child(path, "arrival_rates"));
        s.service_rates = as_numbers(required(j, path, "service_rates"), child(path, "service_rates"));
        const std::string rp = child(path, "routing");
        const auto it = j.find("routing");
        if (it == j.end()) {
            s.routing.assign(s.arrival_rates.size(), std::vector<double>(s.arrival_rates.size(), 0.0));
        } else {
            for (std::size_t r = 0; r < as_array(*it, rp).size(); ++r)
                s.routing.push_back(as_numbers((*it)[r], child(rp, r)));
        }
        const std::string op = child(path, "observations");
        const json& obs = as_array(required(j, path, "observations"), op);
        for (std::size_t k = 0; k < obs.size(); ++k) {
            const std::string p = child(op, k);
            check_keys(obs[k], p, {"alpha", "beta"});
            s.observations.push_back({optional_field<double>(obs[k], p, "alpha", 1.0, as_number),
                                      optional_field<double>(obs[k], p, "beta", 0.0, as_number)});
        }
        spec = s;
    } else {
        throw ConfigError(child(path, "kind"), "unknown model kind '" + kind + "'");
    }
    try {
        std::visit([](const auto& s) { validate(s); }, spec);
    } catch (const ConfigError& e) {
        throw e.under(path);
    }
    return spec;
}

json to_json(const ModelSpec& spec) {
    return std::visit(
        overloaded{
            [](const LevyQueueSpec& s) {
                json coords = json::array();
                for (const auto& c : s.coordinates)
                    coords.push_back({{"jump_rate", c.jump_rate},
                                      {"jump_size", to_json(c.jump_size)},
                                      {"restart", to_json(c.restart)}});
                return json{{"kind", "levy_queue"}, {"dependence", to_json(s.dependence)}, {"coordinates", coords}};
            },
            [](const ClearingSpec& s) {
                json coords = json::array();
                for (const auto& c : s.coordinates)
                    coords.push_back({{"drift", c.drift},
                                      {"jump_rate", c.jump_rate},
                                      {"jump_size", to_json(c.jump_size)},
                                      {"cycle", to_json(c.cycle)}});
                return json{{"kind", "clearing"}, {"dependence", to_json(s.dependence)}, {"coordinates", coords}};
            },
            [](const StatusSpec& s) {
                json coords = json::array();
                for (const auto& c : s.coordinates)
                    coords.push_back({{"cycle", to_json(c.cycle)},
                                      {"update_size", to_json(c.update_size)},
                                      {"capacity", c.capacity}});
                return json{{"kind", "status"}, {"dependence", to_json(s.dependence)}, {"coordinates", coords}};
            },
            [](const AgeResidualSpec& s) {
                json cycles = json::array();
                for (const auto& c : s.cycles) cycles.push_back(to_json(c));
                return json{{"kind", "age_residual"}, {"dependence", to_json(s.dependence)}, {"cycles", cycles}};
            },
            [](const JacksonSpec& s) {
                json obs = json::array();
                for (const auto& o : s.observations) obs.push_back({{"alpha", o.alpha}, {"beta", o.beta}});
                return json{{"kind", "jackson"},
                            {"arrival_rates", s.arrival_rates},
                            {"service_rates", s.service_rates},
                            {"routing", s.routing},
                            {"observations", obs}};
            },
        },
        spec);
}

// ---------------------------------------------------------------------------
// Run and output sections.

RunSpec parse_run(const json& j, const std::string& path) {
    check_keys(j, path,
               {"seed", "replications", "t_grid", "n_cycles", "horizon", "burn_in", "allow_hypothesis_fail",
                "test_functions", "components", "stationary", "bootstrap", "quantile_draws", "cycle_budget"});
    RunSpec r;
    if (const auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned()) throw ConfigError(child(path, "seed"), "seed must be a nonnegative integer");
        r.seed = it->get<std::uint64_t>();
    }
    r.replications = optional_field<std::size_t>(j, path, "replications", r.replications, as_count);
    if (const auto it = j.find("t_grid"); it != j.end()) r.t_grid = as_numbers(*it, child(path, "t_grid"));
    r.n_cycles = optional_field<std::size_t>(j, path, "n_cycles", r.n_cycles, as_count);
    r.horizon = optional_field<double>(j, path, "horizon", r.horizon, as_number);
    if (const auto it = j.find("burn_in"); it != j.end()) r.burn_in = as_number(*it, child(path, "burn_in"));
    r.allow_hypothesis_fail = optional_field<bool>(j, path, "allow_hypothesis_fail", false, as_bool);
    r.test_functions = optional_field<std::string>(j, path, "test_functions", r.test_functions, as_string);
    if (const auto it = j.find("components"); it != j.end()) {
        const std::string p = child(path, "components");
        std::vector<std::size_t> comps;
        for (std::size_t k = 0; k < as_array(*it, p).size(); ++k) comps.push_back(as_count((*it)[k], child(p, k)));
        r.components = comps;
    }
    if (const auto it = j.find("stationary"); it != j.end()) {
        const std::string p = child(path, "stationary");
        check_keys(*it, p, {"coordinate", "g"});
        r.stationary = StationaryQuery{optional_field<std::size_t>(*it, p, "coordinate", 0, as_count),
                                       parse_function(required(*it, p, "g"), child(p, "g"))};
    }
    r.bootstrap = optional_field<std::size_t>(j, path, "bootstrap", r.bootstrap, as_count);
    r.quantile_draws = optional_field<std::size_t>(j, path, "quantile_draws", r.quantile_draws, as_count);
    r.cycle_budget = optional_field<std::size_t>(j, path, "cycle_budget", r.cycle_budget, as_count);
    return r;
}

json to_json(const RunSpec& r) {
    json out{{"seed", r.seed},
             {"replications", r.replications},
             {"t_grid", r.t_grid},
             {"n_cycles", r.n_cycles},
             {"horizon", r.horizon},
             {"allow_hypothesis_fail", r.allow_hypothesis_fail},
             {"test_functions", r.test_functions},
             {"bootstrap", r.bootstrap},
             {"quantile_draws", r.quantile_draws},
             {"cycle_budget", r.cycle_budget}};
    if (r.burn_in) out["burn_in"] = *r.burn_in;
    if (r.components) out["components"] = *r.components;
    if (r.stationary) out["stationary"] = {{"coordinate", r.stationary->coordinate}, {"g", to_json(r.stationary->g)}};
    return out;
}

OutputSpec parse_output(const json& j, const std::string& path) {
    check_keys(j, path, {"directory", "formats"});
    OutputSpec o;
    o.directory = optional_field<std::string>(j, path, "directory", o.directory, as_string);
    if (const auto it = j.find("formats"); it != j.end()) {
        const std::string p = child(path, "formats");
        o.formats.clear();
        for (std::size_t k = 0; k < as_array(*it, p).size(); ++k) {
            const std::string f = as_string((*it)[k], child(p, k));
            if (f != "csv" && f != "json") throw ConfigError(child(p, k), "format must be 'csv' or 'json'");
            o.formats.push_back(f);
        }
    }
    return o;
}

std::size_t model_dimension(const ModelSpec& spec) {
    return std::visit(overloaded{
                          [](const AgeResidualSpec& s) { return s.cycles.size(); },
                          [](const JacksonSpec& s) { return s.observations.size(); },
                          [](const auto& s) { return s.coordinates.size(); },
                      },
                      spec);
}

std::size_t state_dimension(const ModelSpec& spec) {
    return std::visit(overloaded{
                          [](const StatusSpec&) -> std::size_t { return 2; },
                          [](const AgeResidualSpec&) -> std::size_t { return 2; },
                          [](const JacksonSpec& s) { return s.service_rates.size(); },
                          [](const auto&) -> std::size_t { return 1; },
                      },
                      spec);
}

void validate_run(const ScenarioConfig& c) {
    const RunSpec& r = c.run;
    const std::size_t m = model_dimension(c.model);
    const std::size_t d = state_dimension(c.model);
    if (r.replications < 1) throw ConfigError("/run/replications", "at least one replication is required");
    if (r.t_grid.size() < 3) throw ConfigError("/run/t_grid", "t_grid needs at least three horizons");
    for (std::size_t k = 0; k < r.t_grid.size(); ++k) {
        if (!std::isfinite(r.t_grid[k]) || !(r.t_grid[k] > 0.0))
            throw ConfigError("/run/t_grid/" + std::to_string(k), "horizons must be positive");
        if (k > 0 && !(r.t_grid[k] > r.t_grid[k - 1]))
            throw ConfigError("/run/t_grid/" + std::to_string(k), "t_grid must be strictly increasing");
    }
    if (r.n_cycles < 100) throw ConfigError("/run/n_cycles", "n_cycles must be at least 100");
    if (!std::isfinite(r.horizon) || !(r.horizon > 0.0)) throw ConfigError("/run/horizon", "horizon must be positive");
    if (r.burn_in && (!std::isfinite(*r.burn_in) || !(*r.burn_in > 0.0)))
        throw ConfigError("/run/burn_in", "burn_in must be positive");
    if (r.test_functions != "quantile_indicators" && r.test_functions != "exponential")
        throw ConfigError("/run/test_functions", "must be 'quantile_indicators' or 'exponential'");
    if (r.components) {
        if (r.components->size() != m)
            throw ConfigError("/run/components", "one component per coordinate is required");
        for (std::size_t k = 0; k < m; ++k)
            if ((*r.components)[k] >= d)
                throw ConfigError("/run/components/" + std::to_string(k), "component exceeds the state dimension");
    }
    if (r.stationary) {
        if (r.stationary->coordinate >= m)
            throw ConfigError("/run/stationary/coordinate", "coordinate index out of range");
        if (max_component(r.stationary->g) >= d)
            throw ConfigError("/run/stationary/g", "test function reads past the state dimension");
    }
    if (r.bootstrap < 2) throw ConfigError("/run/bootstrap", "at least two bootstrap resamples are required");
    if (r.quantile_draws < 1) throw ConfigError("/run/quantile_draws", "at least one draw is required");
    if (r.cycle_budget < 1) throw ConfigError("/run/cycle_budget", "cycle budget must be positive");
}

}  // namespace

std::string model_kind(const ModelSpec& spec) {
    static constexpr const char* names[] = {"levy_queue", "clearing", "status", "age_residual", "jackson"};
    return names[spec.index()];
}

bool OutputSpec::wants(std::string_view format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void validate(const ScenarioConfig& c) {
    std::visit(
        [](const auto& s) {
            try {
                validate(s);
            } catch (const ConfigError& e) {
                throw e.under("/model");
            }
        },
        c.model);
    const bool jackson = std::holds_alternative<JacksonSpec>(c.model);
    if (jackson && c.schedule)
        throw ConfigError("/schedule", "jackson observations define the schedule; omit this section");
    if (!jackson && !c.schedule) throw ConfigError("/schedule", "required key is missing");
    if (c.schedule) {
        try {
            validate(*c.schedule);
        } catch (const ConfigError& e) {
            throw e.under("/schedule");
        }
        if (c.schedule->size() != model_dimension(c.model))
            throw ConfigError("/schedule", "one schedule entry per model coordinate is required");
    }
    validate_run(c);
}

ScenarioConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    check_keys(j, "", {"model", "schedule", "run", "output"});
    ScenarioConfig c;
    c.model = parse_model(required(j, "", "model"), "/model");
    if (const auto it = j.find("schedule"); it != j.end()) c.schedule = parse_schedule(*it, "/schedule");
    if (const auto it = j.find("run"); it != j.end()) c.run = parse_run(*it, "/run");
    if (const auto it = j.find("output"); it != j.end()) c.output = parse_output(*it, "/output");
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    json out{{"model", to_json(c.model)},
             {"run", to_json(c.run)},
             {"output", {{"directory", c.output.directory}, {"formats", c.output.formats}}}};
    if (c.schedule) out["schedule"] = to_json(*c.schedule);
    return out.dump(2);
}

ModelPtr build_model(const ModelSpec& spec, std::size_t event_budget) {
    return std::visit(overloaded{
                          [&](const LevyQueueSpec& s) { return build_levy_queue(s, event_budget); },
                          [](const ClearingSpec& s) { return build_clearing(s); },
                          [](const StatusSpec& s) { return build_status(s); },
                          [](const AgeResidualSpec& s) { return build_age_residual(s); },
                          [&](const JacksonSpec& s) { return build_jackson(s, event_budget); },
                      },
                      spec);
}

ScheduleSpec effective_schedule(const ScenarioConfig& c) {
    if (c.schedule) return *c.schedule;
    ScheduleSpec s;
    for (const auto& o : std::get<JacksonSpec>(c.model).observations) s.entries.push_back(AffineSchedule{o.alpha, o.beta});
    return s;
}

std::vector<std::size_t> effective_components(const ScenarioConfig& c) {
    if (c.run.components) return *c.run.components;
    const std::size_t m = model_dimension(c.model);
    std::vector<std::size_t> out(m, 0);
    // Jackson observation k reads station k by default.
    if (const auto* j = std::get_if<JacksonSpec>(&c.model))
        for (std::size_t k = 0; k < m; ++k) out[k] = k % j->service_rates.size();
    return out;
}

double effective_burn_in(const ScenarioConfig& c, const RegenModel& model) {
    return c.run.burn_in ? *c.run.burn_in : default_burn_in(model.cycle_means());
}

}  // namespace regen
