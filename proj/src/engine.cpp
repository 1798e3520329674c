#include "regen/engine.hpp"

#include <algorithm>
#include <cmath>

#include "regen/error.hpp"
#include "regen/stats.hpp"

namespace regen {

namespace {

void check_coordinate(const RegenModel& model, std::size_t i) {
    if (i >= model.dimension()) throw DomainError("coordinate index out of range");
}

[[noreturn]] void budget_exceeded(std::size_t budget) {
    throw BudgetError("cycle budget of " + std::to_string(budget) + " cycles exceeded");
}

}  // namespace

Realization::Realization(ModelPtr model, RngStream rng, std::size_t cycle_budget)
    : model_(std::move(model)), rng_(rng), budget_(cycle_budget) {
    const std::size_t m = model_->dimension();
    epochs_.assign(m, std::vector<double>{0.0});
    sums_.assign(m, CompensatedSum{});
}

void Realization::extend_past(std::size_t i, double t) {
    const std::size_t m = model_->dimension();
    while (epochs_[i].back() <= t) {
        if (tuples_.size() >= budget_) budget_exceeded(budget_);
        std::vector<CyclePath> tuple(m);
        model_->generate(rng_, tuple);
        for (std::size_t j = 0; j < m; ++j) {
            sums_[j].add(tuple[j].length());
            epochs_[j].push_back(sums_[j].value());
        }
        tuples_.push_back(std::move(tuple));
    }
}

State Realization::evaluate_at(std::size_t i, double t) {
    check_coordinate(*model_, i);
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evaluation time must be finite and nonnegative");
    extend_past(i, t);
    const auto& e = epochs_[i];
    const auto n = static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), t) - e.begin()) - 1;
    return tuples_[n][i].eval(t - e[n]);
}

RenewalPath Realization::renewal_path(std::size_t i, double t) {
    check_coordinate(*model_, i);
    extend_past(i, t);
    return RenewalPath::from_epochs(epochs_[i]);
}

std::vector<State> evaluate_at_times(const RegenModel& model, RngStream& rng, std::span<const double> times,
                                     std::size_t cycle_budget) {
    const std::size_t m = model.dimension();
    if (times.size() != m) throw DomainError("one evaluation time per coordinate is required");
    for (double t : times)
        if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evaluation time must be finite and nonnegative");

    std::vector<CyclePath> tuple(m);
    std::vector<CompensatedSum> sums(m);
    std::vector<State> out(m);
    std::vector<bool> done(m, false);
    std::size_t remaining = m;
    std::size_t cycles = 0;
    while (remaining > 0) {
        if (cycles++ >= cycle_budget) budget_exceeded(cycle_budget);
        model.generate(rng, tuple);
        for (std::size_t i = 0; i < m; ++i) {
            if (done[i]) continue;
            const double start = sums[i].value();
            sums[i].add(tuple[i].length());
            if (times[i] < sums[i].value()) {
                out[i] = tuple[i].eval(times[i] - start);
                done[i] = true;
                --remaining;
            }
        }
    }
    return out;
}

RatioEstimate renewal_reward_estimate(const RegenModel& model, std::size_t i, const TestFunction& g,
                                      std::size_t n_cycles, RngStream& rng) {
    check_coordinate(model, i);
    if (n_cycles < 100) throw DomainError("renewal-reward estimation needs at least 100 cycles");
    if (max_component(g) >= model.state_dimension(i)) throw DomainError("test function reads past the state");

    std::vector<CyclePath> tuple(model.dimension());
    std::vector<double> rewards(n_cycles), lengths(n_cycles);
    for (std::size_t k = 0; k < n_cycles; ++k) {
        model.generate(rng, tuple);
        rewards[k] = integrate_path(g, tuple[i]);
        lengths[k] = tuple[i].length();
        if (!std::isfinite(rewards[k])) throw NumericalError("cycle integral is not finite");
    }
    const double mean_reward = mean(rewards);
    const double mean_length = mean(lengths);
    const double ratio = mean_reward / mean_length;

    std::vector<double> residuals(n_cycles);
    for (std::size_t k = 0; k < n_cycles; ++k) residuals[k] = rewards[k] - ratio * lengths[k];
    const double se = std::sqrt(sample_variance(residuals) / static_cast<double>(n_cycles)) / mean_length;
    return {ratio, se, n_cycles};
}

RatioEstimate time_average_estimate(const RegenModel& model, std::size_t i, const TestFunction& g, double horizon,
                                    RngStream& rng, std::size_t cycle_budget) {
    check_coordinate(model, i);
    if (max_component(g) >= model.state_dimension(i)) throw DomainError("test function reads past the state");
    const double mu = model.cycle_means().at(i);
    if (!(horizon >= 100.0 * mu)) throw DomainError("time-average horizon must be at least 100 mean cycle lengths");
    if (const auto* c = std::get_if<ConstantFn>(&g)) return {c->value, 0.0, 0};

    std::vector<CyclePath> tuple(model.dimension());
    std::vector<double> rewards, lengths;
    CompensatedSum elapsed, total;
    std::size_t cycles = 0;
    for (;;) {
        if (cycles++ >= cycle_budget) budget_exceeded(cycle_budget);
        model.generate(rng, tuple);
        const CyclePath& path = tuple[i];
        const double start = elapsed.value();
        elapsed.add(path.length());
        if (elapsed.value() <= horizon) {
            const double r = integrate_path(g, path);
            if (!std::isfinite(r)) throw NumericalError("cycle integral is not finite");
            rewards.push_back(r);
            lengths.push_back(path.length());
            total.add(r);
        } else {
            total.add(integrate_path(g, path, 0.0, horizon - start));
            break;
        }
    }
    const double estimate = total.value() / horizon;
    double se = 0.0;
    if (rewards.size() >= 2) {
        std::vector<double> residuals(rewards.size());
        for (std::size_t k = 0; k < rewards.size(); ++k) residuals[k] = rewards[k] - estimate * lengths[k];
        se = std::sqrt(sample_variance(residuals) / static_cast<double>(rewards.size())) / mean(lengths);
    }
    return {estimate, se, rewards.size()};
}

State sample_stationary(const RegenModel& model, std::size_t i, double t_burn, RngStream& rng,
                        std::size_t cycle_budget) {
    check_coordinate(model, i);
    const double mu = model.cycle_means().at(i);
    if (!(t_burn >= 100.0 * mu)) throw DomainError("burn-in must be at least 100 mean cycle lengths");
    std::vector<double> times(model.dimension(), 0.0);
    times[i] = t_burn;
    return evaluate_at_times(model, rng, times, cycle_budget)[i];
}

double default_burn_in(std::span<const double> cycle_means) {
    double mx = 0.0;
    for (double mu : cycle_means) mx = std::max(mx, mu);
    return std::max(1e3, 100.0 * mx);
}

}  // namespace regen
