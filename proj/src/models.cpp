#include "regen/models.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "regen/error.hpp"
#include "regen/renewal.hpp"

namespace regen {

namespace {

const std::string kArithmeticWarning = "arithmetic cycle-length distribution";

std::string coord_path(std::size_t i) { return "/coordinates/" + std::to_string(i); }

void check_marginal(const MarginalSpec& m, const std::string& path) {
    try {
        validate_marginal(m);
    } catch (const ConfigError& e) {
        throw e.under(path);
    }
}

void check_rate(double rate, const std::string& path) {
    if (!std::isfinite(rate) || rate < 0.0) throw ConfigError(path, "rate must be finite and nonnegative");
}

/// Validates dependence against already-validated marginals.
CycleVectorSampler make_sampler(const DependenceSpec& dep, std::vector<MarginalSpec> marginals) {
    if (marginals.empty()) throw ConfigError("/coordinates", "at least one coordinate is required");
    return CycleVectorSampler(dep, std::move(marginals));
}

std::string arithmetic_warning(std::size_t i, const std::string& detail) {
    return kArithmeticWarning + " for coordinate " + std::to_string(i) + " (" + detail +
           "); convergence results assume nonarithmetic cycles";
}

std::vector<std::string> cycle_law_warnings(const DependenceSpec& dep, const std::vector<MarginalSpec>& cycles) {
    std::vector<std::string> out;
    const auto laws = cycle_laws(dep, cycles);
    for (std::size_t i = 0; i < laws.size(); ++i)
        if (laws[i].arithmetic()) out.push_back(arithmetic_warning(i, std::string(marginal_kind(laws[i].base))));
    return out;
}

// -- Levy queue ------------------------------------------------------------

class LevyQueueModel final : public RegenModel {
public:
    LevyQueueModel(LevyQueueSpec spec, std::size_t event_budget)
        : spec_(std::move(spec)),
          sampler_(make_sampler(spec_.dependence, restarts(spec_))),
          means_(levy_cycle_means(spec_)),
          event_budget_(event_budget) {}

    std::string name() const override { return "levy_queue"; }
    std::size_t dimension() const override { return spec_.coordinates.size(); }
    std::size_t state_dimension(std::size_t) const override { return 1; }
    std::vector<double> cycle_means() const override { return means_; }

    std::vector<std::string> warnings() const override {
        std::vector<std::string> out;
        const auto laws = cycle_laws(spec_.dependence, restarts(spec_));
        for (std::size_t i = 0; i < laws.size(); ++i) {
            const auto& c = spec_.coordinates[i];
            // First-passage times sit on a lattice only when both the restart
            // level and (if there are jumps) the jump sizes do.
            if (laws[i].arithmetic() && (c.jump_rate == 0.0 || is_arithmetic(c.jump_size)))
                out.push_back(arithmetic_warning(i, "lattice restart levels and jump sizes"));
        }
        return out;
    }

    void generate(RngStream& rng, std::span<CyclePath> out) const override {
        const std::size_t m = spec_.coordinates.size();
        double levels[16];
        std::vector<double> heap;
        std::span<double> u(levels, std::min<std::size_t>(m, 16));
        if (m > 16) {
            heap.resize(m);
            u = heap;
        }
        sampler_.sample(rng, u);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = spec_.coordinates[i];
            CyclePath& path = out[i];
            path.reset(1);
            double w = u[i];
            double s = 0.0;
            for (std::size_t events = 0;; ++events) {
                if (events >= event_budget_) throw BudgetError("event budget exceeded within a queue cycle");
                const double gap = c.jump_rate > 0.0 ? rng.exponential() / c.jump_rate
                                                     : std::numeric_limits<double>::infinity();
                path.add_segment(s, w, -1.0);
                if (gap >= w) {
                    // Level hits zero before the next jump.
                    path.set_length(s + w);
                    break;
                }
                s += gap;
                w = w - gap + sample_marginal(c.jump_size, rng);
            }
        }
    }

private:
    static std::vector<MarginalSpec> restarts(const LevyQueueSpec& s) {
        std::vector<MarginalSpec> r;
        for (const auto& c : s.coordinates) r.push_back(c.restart);
        return r;
    }

    LevyQueueSpec spec_;
    CycleVectorSampler sampler_;
    std::vector<double> means_;
    std::size_t event_budget_;
};

// -- Clearing ----------------------------------------------------------------

class ClearingModel final : public RegenModel {
public:
    explicit ClearingModel(ClearingSpec spec)
        : spec_(std::move(spec)), sampler_(make_sampler(spec_.dependence, cycles(spec_))) {
        for (const auto& law : cycle_laws(spec_.dependence, cycles(spec_))) means_.push_back(law.mean());
    }

    std::string name() const override { return "clearing"; }
    std::size_t dimension() const override { return spec_.coordinates.size(); }
    std::size_t state_dimension(std::size_t) const override { return 1; }
    std::vector<double> cycle_means() const override { return means_; }
    std::vector<std::string> warnings() const override {
        return cycle_law_warnings(spec_.dependence, cycles(spec_));
    }

    void generate(RngStream& rng, std::span<CyclePath> out) const override {
        const std::size_t m = spec_.coordinates.size();
        std::vector<double> lengths(m);
        sampler_.sample(rng, lengths);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = spec_.coordinates[i];
            CyclePath& path = out[i];
            path.reset(1);
            path.add_segment(0.0, 0.0, c.drift);
            path.set_length(lengths[i]);
            if (c.jump_rate <= 0.0) continue;
            double s = 0.0, level = 0.0;
            for (;;) {
                const double gap = rng.exponential() / c.jump_rate;
                if (s + gap >= lengths[i]) break;
                level += c.drift * gap + sample_marginal(c.jump_size, rng);
                s += gap;
                path.add_segment(s, level, c.drift);
            }
        }
    }

private:
    static std::vector<MarginalSpec> cycles(const ClearingSpec& s) {
        std::vector<MarginalSpec> r;
        for (const auto& c : s.coordinates) r.push_back(c.cycle);
        return r;
    }

    ClearingSpec spec_;
    CycleVectorSampler sampler_;
    std::vector<double> means_;
};

// -- Status updating -----------------------------------------------------------

class StatusModel final : public RegenModel {
public:
    explicit StatusModel(StatusSpec spec)
        : spec_(std::move(spec)), sampler_(make_sampler(spec_.dependence, cycles(spec_))) {
        for (const auto& law : cycle_laws(spec_.dependence, cycles(spec_))) means_.push_back(law.mean());
    }

    std::string name() const override { return "status"; }
    std::size_t dimension() const override { return spec_.coordinates.size(); }
    std::size_t state_dimension(std::size_t) const override { return 2; }
    std::vector<double> cycle_means() const override { return means_; }
    std::vector<std::string> warnings() const override {
        return cycle_law_warnings(spec_.dependence, cycles(spec_));
    }

    void generate(RngStream& rng, std::span<CyclePath> out) const override {
        const std::size_t m = spec_.coordinates.size();
        std::vector<double> lengths(m);
        sampler_.sample(rng, lengths);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = spec_.coordinates[i];
            // The update generated at this cycle's start is the one in transit.
            const double requirement = sample_marginal(c.update_size, rng) / c.capacity;
            const double value[2] = {0.0, requirement};
            const double slope[2] = {1.0, 0.0};
            out[i].reset(2);
            out[i].add_segment(0.0, value, slope);
            out[i].set_length(lengths[i]);
        }
    }

private:
    static std::vector<MarginalSpec> cycles(const StatusSpec& s) {
        std::vector<MarginalSpec> r;
        for (const auto& c : s.coordinates) r.push_back(c.cycle);
        return r;
    }

    StatusSpec spec_;
    CycleVectorSampler sampler_;
    std::vector<double> means_;
};

// -- Age / residual --------------------------------------------------------------

class AgeResidualModel final : public RegenModel {
public:
    explicit AgeResidualModel(AgeResidualSpec spec)
        : spec_(std::move(spec)), sampler_(make_sampler(spec_.dependence, spec_.cycles)) {
        for (const auto& law : cycle_laws(spec_.dependence, spec_.cycles)) means_.push_back(law.mean());
    }

    std::string name() const override { return "age_residual"; }
    std::size_t dimension() const override { return spec_.cycles.size(); }
    std::size_t state_dimension(std::size_t) const override { return 2; }
    std::vector<double> cycle_means() const override { return means_; }
    std::vector<std::string> warnings() const override {
        return cycle_law_warnings(spec_.dependence, spec_.cycles);
    }

    void generate(RngStream& rng, std::span<CyclePath> out) const override {
        const std::size_t m = spec_.cycles.size();
        std::vector<double> lengths(m);
        sampler_.sample(rng, lengths);
        for (std::size_t i = 0; i < m; ++i) {
            const double value[2] = {0.0, lengths[i]};
            const double slope[2] = {1.0, -1.0};
            out[i].reset(2);
            out[i].add_segment(0.0, value, slope);
            out[i].set_length(lengths[i]);
        }
    }

private:
    AgeResidualSpec spec_;
    CycleVectorSampler sampler_;
    std::vector<double> means_;
};

// -- Jackson network -----------------------------------------------------------

class JacksonModel final : public RegenModel {
public:
    JacksonModel(JacksonSpec spec, std::size_t event_budget)
        : spec_(std::move(spec)), mean_(jackson_cycle_mean(spec_)), event_budget_(event_budget) {
        for (double a : spec_.arrival_rates) external_rate_ += a;
        const std::size_t j = spec_.service_rates.size();
        exit_prob_.resize(j);
        for (std::size_t s = 0; s < j; ++s) {
            double routed = 0.0;
            for (double p : spec_.routing[s]) routed += p;
            exit_prob_[s] = std::max(0.0, 1.0 - routed);
        }
    }

    std::string name() const override { return "jackson"; }
    std::size_t dimension() const override { return spec_.observations.size(); }
    std::size_t state_dimension(std::size_t) const override { return spec_.service_rates.size(); }
    std::vector<double> cycle_means() const override { return std::vector<double>(dimension(), mean_); }

    void generate(RngStream& rng, std::span<CyclePath> out) const override {
        const std::size_t stations = spec_.service_rates.size();
        CyclePath& path = out[0];
        path.reset(stations);
        std::vector<double> state(stations, 0.0);
        const std::vector<double> flat(stations, 0.0);
        std::size_t customers = 0;
        double s = 0.0;
        path.add_segment(0.0, state, flat);
        for (std::size_t events = 0;; ++events) {
            if (events >= event_budget_) throw BudgetError("event budget exceeded before the network emptied");
            double total = external_rate_;
            for (std::size_t j = 0; j < stations; ++j)
                if (state[j] > 0.0) total += spec_.service_rates[j];
            s += rng.exponential() / total;
            double pick = rng.uniform() * total;
            bool arrival = false;
            std::size_t where = stations;
            for (std::size_t j = 0; j < stations && where == stations; ++j) {
                if (pick < spec_.arrival_rates[j]) {
                    arrival = true;
                    where = j;
                }
                pick -= spec_.arrival_rates[j];
            }
            for (std::size_t j = 0; j < stations && where == stations; ++j) {
                if (state[j] <= 0.0) continue;
                if (pick < spec_.service_rates[j]) where = j;
                pick -= spec_.service_rates[j];
            }
            if (where == stations) {
                // Rounding left `pick` past the last bucket; take the last busy station.
                for (std::size_t j = stations; j-- > 0;)
                    if (state[j] > 0.0) {
                        where = j;
                        break;
                    }
                if (where == stations) {
                    arrival = true;
                    where = last_arrival_station();
                }
            }
            if (arrival) {
                state[where] += 1.0;
                ++customers;
            } else {
                state[where] -= 1.0;
                const std::size_t next = route(rng, where);
                if (next < stations)
                    state[next] += 1.0;
                else
                    --customers;
            }
            if (customers == 0) {
                path.set_length(s);
                break;
            }
            path.add_segment(s, state, flat);
        }
        for (std::size_t k = 1; k < out.size(); ++k) out[k] = path;
    }

private:
    std::size_t route(RngStream& rng, std::size_t from) const {
        const auto& row = spec_.routing[from];
        double u = rng.uniform();
        if (u < exit_prob_[from]) return row.size();
        u -= exit_prob_[from];
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (u < row[k]) return k;
            u -= row[k];
        }
        for (std::size_t k = row.size(); k-- > 0;)
            if (row[k] > 0.0) return k;
        return row.size();
    }

    std::size_t last_arrival_station() const {
        for (std::size_t j = spec_.arrival_rates.size(); j-- > 0;)
            if (spec_.arrival_rates[j] > 0.0) return j;
        return 0;
    }

    JacksonSpec spec_;
    double mean_;
    double external_rate_ = 0.0;
    std::vector<double> exit_prob_;
    std::size_t event_budget_;
};

}  // namespace

// -- validation and builders ---------------------------------------------------

void validate(const LevyQueueSpec& spec) {
    if (spec.coordinates.empty()) throw ConfigError("/coordinates", "at least one coordinate is required");
    for (std::size_t i = 0; i < spec.coordinates.size(); ++i) {
        const auto& c = spec.coordinates[i];
        const std::string p = coord_path(i);
        check_rate(c.jump_rate, p + "/jump_rate");
        check_marginal(c.jump_size, p + "/jump_size");
        check_marginal(c.restart, p + "/restart");
        const double load = c.jump_rate * marginal_mean(c.jump_size);
        if (!(load < 1.0))
            throw ConfigError(p + "/jump_rate", "stability requires jump_rate * E[jump_size] < 1 (got " +
                                                    std::to_string(load) + ")");
    }
    std::vector<MarginalSpec> restarts;
    for (const auto& c : spec.coordinates) restarts.push_back(c.restart);
    make_sampler(spec.dependence, restarts);
}

std::vector<double> levy_cycle_means(const LevyQueueSpec& spec) {
    std::vector<MarginalSpec> restarts;
    for (const auto& c : spec.coordinates) restarts.push_back(c.restart);
    const auto laws = cycle_laws(spec.dependence, restarts);
    std::vector<double> means;
    for (std::size_t i = 0; i < laws.size(); ++i) {
        const auto& c = spec.coordinates[i];
        means.push_back(laws[i].mean() / (1.0 - c.jump_rate * marginal_mean(c.jump_size)));
    }
    return means;
}

ModelPtr build_levy_queue(const LevyQueueSpec& spec, std::size_t event_budget) {
    validate(spec);
    return std::make_shared<LevyQueueModel>(spec, event_budget);
}

void validate(const ClearingSpec& spec) {
    if (spec.coordinates.empty()) throw ConfigError("/coordinates", "at least one coordinate is required");
    std::vector<MarginalSpec> cycles;
    for (std::size_t i = 0; i < spec.coordinates.size(); ++i) {
        const auto& c = spec.coordinates[i];
        const std::string p = coord_path(i);
        if (!std::isfinite(c.drift) || c.drift < 0.0) throw ConfigError(p + "/drift", "drift must be nonnegative");
        check_rate(c.jump_rate, p + "/jump_rate");
        check_marginal(c.jump_size, p + "/jump_size");
        check_marginal(c.cycle, p + "/cycle");
        if (!(c.drift + c.jump_rate * marginal_mean(c.jump_size) > 0.0))
            throw ConfigError(p, "content is degenerate: drift + jump_rate * E[jump_size] must be positive");
        cycles.push_back(c.cycle);
    }
    make_sampler(spec.dependence, cycles);
}

ModelPtr build_clearing(const ClearingSpec& spec) {
    validate(spec);
    return std::make_shared<ClearingModel>(spec);
}

void validate(const StatusSpec& spec) {
    if (spec.coordinates.empty()) throw ConfigError("/coordinates", "at least one coordinate is required");
    std::vector<MarginalSpec> cycles;
    for (std::size_t i = 0; i < spec.coordinates.size(); ++i) {
        const auto& c = spec.coordinates[i];
        const std::string p = coord_path(i);
        check_marginal(c.cycle, p + "/cycle");
        check_marginal(c.update_size, p + "/update_size");
        if (!std::isfinite(c.capacity) || !(c.capacity > 0.0))
            throw ConfigError(p + "/capacity", "capacity must be positive and finite");
        cycles.push_back(c.cycle);
    }
    make_sampler(spec.dependence, cycles);
}

ModelPtr build_status(const StatusSpec& spec) {
    validate(spec);
    return std::make_shared<StatusModel>(spec);
}

double pi_closed_form(const StatusSpec& spec) {
    validate(spec);
    std::vector<MarginalSpec> cycles;
    for (const auto& c : spec.coordinates) cycles.push_back(c.cycle);
    const auto laws = cycle_laws(spec.dependence, cycles);
    double pi = 1.0;
    for (std::size_t i = 0; i < laws.size(); ++i) {
        const auto& c = spec.coordinates[i];
        const auto& law = laws[i];
        pi *= marginal_expectation(
            c.update_size, [&](double y) { return 1.0 - equilibrium_cdf(law, y / c.capacity); }, 1e-10);
    }
    return pi;
}

void validate(const AgeResidualSpec& spec) {
    if (spec.cycles.empty()) throw ConfigError("/cycles", "at least one coordinate is required");
    for (std::size_t i = 0; i < spec.cycles.size(); ++i) check_marginal(spec.cycles[i], "/cycles/" + std::to_string(i));
    make_sampler(spec.dependence, spec.cycles);
}

ModelPtr build_age_residual(const AgeResidualSpec& spec) {
    validate(spec);
    return std::make_shared<AgeResidualModel>(spec);
}

std::vector<double> traffic_solve(const JacksonSpec& spec) {
    const std::size_t n = spec.arrival_rates.size();
    if (n == 0) throw ConfigError("/arrival_rates", "at least one station is required");
    if (spec.routing.size() != n) throw ConfigError("/routing", "routing matrix must be stations x stations");
    Eigen::MatrixXd p(n, n);
    Eigen::VectorXd a(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.routing[i].size() != n)
            throw ConfigError("/routing/" + std::to_string(i), "routing matrix must be stations x stations");
        for (std::size_t j = 0; j < n; ++j) p(i, j) = spec.routing[i][j];
        a(i) = spec.arrival_rates[i];
    }
    const double radius = Eigen::EigenSolver<Eigen::MatrixXd>(p, false).eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0 - 1e-12))
        throw ConfigError("/routing", "routing matrix must have spectral radius below 1 (customers must leave)");
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - p.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw ConfigError("/routing", "traffic equations are singular");
    const Eigen::VectorXd r = lu.solve(a);
    return {r.data(), r.data() + n};
}

void validate(const JacksonSpec& spec) {
    const std::size_t n = spec.arrival_rates.size();
    if (n == 0) throw ConfigError("/arrival_rates", "at least one station is required");
    if (spec.service_rates.size() != n)
        throw ConfigError("/service_rates", "one service rate per station is required");
    double external = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        check_rate(spec.arrival_rates[i], "/arrival_rates/" + std::to_string(i));
        external += spec.arrival_rates[i];
        const double mu = spec.service_rates[i];
        if (!std::isfinite(mu) || !(mu > 0.0))
            throw ConfigError("/service_rates/" + std::to_string(i), "service rate must be positive");
    }
    if (!(external > 0.0))
        throw ConfigError("/arrival_rates", "total external arrival rate must be positive (no cycles otherwise)");
    if (spec.routing.size() != n) throw ConfigError("/routing", "routing matrix must be stations x stations");
    for (std::size_t i = 0; i < n; ++i) {
        const std::string row = "/routing/" + std::to_string(i);
        if (spec.routing[i].size() != n) throw ConfigError(row, "routing matrix must be stations x stations");
        double sum = 0.0;
        for (double x : spec.routing[i]) {
            if (!std::isfinite(x) || x < 0.0) throw ConfigError(row, "routing probabilities must be nonnegative");
            sum += x;
        }
        if (sum > 1.0 + 1e-12) throw ConfigError(row, "routing row must sum to at most 1");
    }
    const auto r = traffic_solve(spec);
    for (std::size_t i = 0; i < n; ++i)
        if (!(r[i] < spec.service_rates[i]))
            throw ConfigError("/service_rates/" + std::to_string(i),
                              "stability requires effective arrival rate " + std::to_string(r[i]) +
                                  " below the service rate");
    if (spec.observations.empty()) throw ConfigError("/observations", "at least one observation is required");
    for (std::size_t k = 0; k < spec.observations.size(); ++k) {
        const auto& o = spec.observations[k];
        const std::string p = "/observations/" + std::to_string(k);
        if (!std::isfinite(o.alpha) || !(o.alpha > 0.0)) throw ConfigError(p + "/alpha", "alpha must be positive");
        if (!std::isfinite(o.beta)) throw ConfigError(p + "/beta", "beta must be finite");
    }
}

double jackson_cycle_mean(const JacksonSpec& spec) {
    const auto r = traffic_solve(spec);
    double empty = 1.0, external = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        empty *= 1.0 - r[i] / spec.service_rates[i];
        external += spec.arrival_rates[i];
    }
    return 1.0 / (external * empty);
}

ModelPtr build_jackson(const JacksonSpec& spec, std::size_t event_budget) {
    validate(spec);
    return std::make_shared<JacksonModel>(spec, event_budget);
}

}  // namespace regen
