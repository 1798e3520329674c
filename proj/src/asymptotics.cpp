#include "regen/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "regen/detail/overloaded.hpp"
#include "regen/error.hpp"
#include "regen/parallel.hpp"
#include "regen/rng.hpp"
#include "regen/stats.hpp"

namespace regen {

using detail::overloaded;

namespace {

// (exponent, scale) of the leading term of v(t).
std::pair<double, double> growth(const ScheduleEntry& e) {
    return std::visit(overloaded{
                          [](const AffineSchedule& s) { return std::pair{1.0, s.a}; },
                          [](const PowerSchedule& s) { return std::pair{s.p, s.a}; },
                      },
                      e);
}

constexpr std::size_t kGridSize = 32;

// Bin index of each value against a sorted grid: the first grid point >= x,
// or kGridSize when x exceeds them all.
std::vector<std::uint8_t> grid_bins(std::span<const double> xs, const std::vector<double>& grid) {
    std::vector<std::uint8_t> bins(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k)
        bins[k] = static_cast<std::uint8_t>(std::lower_bound(grid.begin(), grid.end(), xs[k]) - grid.begin());
    return bins;
}

double ks2_from_bins(const std::vector<std::uint8_t>& bx, const std::vector<std::uint8_t>& by,
                     const std::vector<std::size_t>& perm) {
    constexpr std::size_t G = kGridSize + 1;
    std::array<std::size_t, G * G> hist{};
    const std::size_t n = bx.size();
    for (std::size_t k = 0; k < n; ++k) ++hist[bx[k] * G + by[perm.empty() ? k : perm[k]]];

    // Cumulative counts over the grid points only (bins 0..kGridSize-1).
    std::array<double, kGridSize * kGridSize> joint{};
    std::array<double, kGridSize> fx{}, fy{};
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t a = 0; a < kGridSize; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < kGridSize; ++b) {
            row += static_cast<double>(hist[a * G + b]);
            joint[a * kGridSize + b] = row * inv + (a > 0 ? joint[(a - 1) * kGridSize + b] : 0.0);
        }
    }
    for (std::size_t a = 0; a < kGridSize; ++a) {
        double sx = 0.0, sy = 0.0;
        for (std::size_t b = 0; b < G; ++b) {
            sx += static_cast<double>(hist[a * G + b]);
            sy += static_cast<double>(hist[b * G + a]);
        }
        fx[a] = sx * inv + (a > 0 ? fx[a - 1] : 0.0);
        fy[a] = sy * inv + (a > 0 ? fy[a - 1] : 0.0);
    }
    double d = 0.0;
    for (std::size_t a = 0; a < kGridSize; ++a)
        for (std::size_t b = 0; b < kGridSize; ++b) d = std::max(d, std::abs(joint[a * kGridSize + b] - fx[a] * fy[b]));
    return d;
}

}  // namespace

double ScheduleSpec::evaluate(std::size_t i, double t) const {
    return std::visit(overloaded{
                          [t](const AffineSchedule& s) { return s.a * t + s.b; },
                          [t](const PowerSchedule& s) { return s.a * std::pow(t, s.p); },
                      },
                      entries.at(i));
}

std::vector<double> ScheduleSpec::evaluate(double t) const {
    std::vector<double> v(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) v[i] = evaluate(i, t);
    return v;
}

double ScheduleSpec::positive_after() const {
    double t0 = 0.0;
    for (const auto& e : entries)
        if (const auto* a = std::get_if<AffineSchedule>(&e); a && a->b < 0.0) t0 = std::max(t0, -a->b / a->a);
    return t0;
}

void validate(const ScheduleSpec& schedule) {
    if (schedule.entries.empty()) throw ConfigError("", "schedule needs at least one entry");
    for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
        const std::string p = "/" + std::to_string(i);
        std::visit(overloaded{
                       [&](const AffineSchedule& s) {
                           if (!std::isfinite(s.a) || !(s.a > 0.0)) throw ConfigError(p + "/a", "scale a must be positive");
                           if (!std::isfinite(s.b)) throw ConfigError(p + "/b", "shift b must be finite");
                       },
                       [&](const PowerSchedule& s) {
                           if (!std::isfinite(s.a) || !(s.a > 0.0)) throw ConfigError(p + "/a", "scale a must be positive");
                           if (!std::isfinite(s.p) || !(s.p > 0.0))
                               throw ConfigError(p + "/p", "exponent p must be positive so v(t) diverges");
                       },
                   },
                   schedule.entries[i]);
    }
}

double liminf_ratio(const ScheduleEntry& vi, const ScheduleEntry& vj) {
    const auto [pi, ai] = growth(vi);
    const auto [pj, aj] = growth(vj);
    if (pi > pj) return std::numeric_limits<double>::infinity();
    if (pi < pj) return 0.0;
    return ai / aj;
}

HypothesisVerdict check_hypotheses(const ScheduleSpec& schedule, std::span<const double> means) {
    validate(schedule);
    const std::size_t m = schedule.size();
    if (means.size() != m) throw DomainError("one mean cycle length per schedule entry is required");
    for (double mu : means)
        if (!std::isfinite(mu) || !(mu > 0.0)) throw DomainError("mean cycle lengths must be positive and finite");

    HypothesisVerdict v;
    v.order.resize(m);
    std::iota(v.order.begin(), v.order.end(), 0);
    // Equal means leave the labelling free; putting faster schedules first is
    // the only order in which the ratio condition can hold.
    std::stable_sort(v.order.begin(), v.order.end(), [&](std::size_t x, std::size_t y) {
        if (means[x] != means[y]) return means[x] < means[y];
        return liminf_ratio(schedule.entries[x], schedule.entries[y]) > 1.0;
    });
    v.pass = true;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const std::size_t i = v.order[k], j = v.order[k + 1];
        const double ratio = liminf_ratio(schedule.entries[i], schedule.entries[j]);
        const double threshold = means[i] / means[j];
        v.ratios.push_back(ratio);
        v.thresholds.push_back(threshold);
        if (!(ratio > threshold) && v.pass) {
            v.pass = false;
            v.witness = std::pair{i, j};
        }
    }
    return v;
}

std::vector<double> SampleMatrix::column(std::size_t c) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = (*this)(r, c);
    return out;
}

std::vector<SampleMatrix> sample_joint(const RegenModel& model, const ScheduleSpec& schedule, double t,
                                       std::span<const FunctionTuple> tuples, const SamplingOptions& options) {
    const std::size_t m = model.dimension();
    if (schedule.size() != m) throw DomainError("schedule size must match model dimension");
    for (const auto& tuple : tuples) {
        if (tuple.size() != m) throw DomainError("each function tuple needs one function per coordinate");
        for (std::size_t i = 0; i < m; ++i)
            if (max_component(tuple[i]) >= model.state_dimension(i))
                throw DomainError("test function reads past the coordinate's state");
    }
    const auto verdict = check_hypotheses(schedule, model.cycle_means());
    if (!verdict.pass && !options.allow_hypothesis_fail)
        throw HypothesisError("schedule violates the liminf ratio condition; negative controls need an override");
    const auto times = schedule.evaluate(t);
    for (double v : times)
        if (!(v > 0.0)) throw DomainError("every scaled time v_i(t) must be positive");

    std::vector<SampleMatrix> out(tuples.size());
    for (auto& s : out) {
        s.rows = options.replications;
        s.cols = m;
        s.data.assign(options.replications * m, 0.0);
    }
    parallel_for(options.replications, options.threads, [&](std::size_t r) {
        RngStream rng(options.seed, r);
        const auto states = evaluate_at_times(model, rng, times, options.cycle_budget);
        for (std::size_t j = 0; j < tuples.size(); ++j)
            for (std::size_t i = 0; i < m; ++i) out[j](r, i) = evaluate(tuples[j][i], states[i]);
    });
    return out;
}

SampleMatrix sample_joint(const RegenModel& model, const ScheduleSpec& schedule, double t, const FunctionTuple& fs,
                          const SamplingOptions& options) {
    const FunctionTuple tuples[] = {fs};
    return std::move(sample_joint(model, schedule, t, tuples, options).front());
}

GapEstimate product_form_gap(const SampleMatrix& s, const BootstrapOptions& options) {
    if (s.rows < 1000) throw DomainError("product-form gap needs at least 1000 replications");
    const std::size_t n = s.rows, m = s.cols;
    GapEstimate g;
    g.n = n;

    bool degenerate = false;
    for (std::size_t c = 0; c < m; ++c) {
        const auto col = s.column(c);
        const double mu = mean(col);
        g.marginal_means.push_back(mu);
        g.marginal_ses.push_back(std::sqrt(sample_variance(col) / static_cast<double>(n)));
        degenerate = degenerate || std::all_of(col.begin(), col.end(), [&](double x) { return x == col.front(); });
    }
    if (degenerate) {
        g.degenerate = true;
        return g;
    }

    auto signed_gap = [&](auto&& row_of) {
        std::vector<double> sums(m, 0.0);
        double joint = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t r = row_of(k);
            double prod = 1.0;
            for (std::size_t c = 0; c < m; ++c) {
                const double x = s(r, c);
                sums[c] += x;
                prod *= x;
            }
            joint += prod;
        }
        const double inv = 1.0 / static_cast<double>(n);
        double marginal_product = 1.0;
        for (double x : sums) marginal_product *= x * inv;
        return joint * inv - marginal_product;
    };
    g.gap = std::abs(signed_gap([](std::size_t k) { return k; }));

    std::vector<double> boots(options.resamples);
    parallel_for(options.resamples, options.threads, [&](std::size_t b) {
        RngStream rng(options.seed, b);
        std::vector<std::uint32_t> rows(n);
        for (auto& r : rows) r = static_cast<std::uint32_t>(rng.below(n));
        boots[b] = signed_gap([&](std::size_t k) { return rows[k]; });
    });
    g.se = std::sqrt(sample_variance(boots));
    return g;
}

SweepResult convergence_sweep(const RegenModel& model, const ScheduleSpec& schedule, std::span<const double> t_grid,
                              std::span<const FunctionTuple> tuples, const SweepOptions& options) {
    if (t_grid.size() < 3) throw DomainError("convergence sweep needs at least three horizons");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1])) throw DomainError("t_grid must be strictly increasing");
    if (options.sampling.replications < 1000) throw DomainError("convergence sweep needs at least 1000 replications");

    SweepResult result;
    result.t_grid.assign(t_grid.begin(), t_grid.end());
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        SamplingOptions so = options.sampling;
        so.seed = derive_seed(options.sampling.seed, k + 1);
        const auto samples = sample_joint(model, schedule, t_grid[k], tuples, so);
        std::vector<GapEstimate> row;
        for (std::size_t j = 0; j < samples.size(); ++j) {
            BootstrapOptions bo{options.bootstrap_resamples,
                                derive_seed(options.sampling.seed, 0x100000 + k * samples.size() + j),
                                options.sampling.threads};
            auto g = product_form_gap(samples[j], bo);
            g.t = t_grid[k];
            g.tuple_id = j;
            row.push_back(std::move(g));
        }
        result.gaps.push_back(std::move(row));
    }
    result.final_pass = true;
    for (std::size_t j = 0; j < tuples.size(); ++j) {
        std::vector<double> gaps;
        for (const auto& row : result.gaps) gaps.push_back(row[j].gap);
        result.trend.push_back(spearman_correlation(result.t_grid, gaps));
        result.final_pass = result.final_pass && gap_passes(result.gaps.back()[j]);
    }
    return result;
}

Ks2Result independence_ks2(std::span<const double> x, std::span<const double> y, std::size_t permutations,
                           std::uint64_t seed) {
    if (x.size() != y.size()) throw DomainError("paired samples must have equal length");
    if (x.size() < 10'000) throw DomainError("independence_ks2 needs at least 10^4 paired samples");
    auto grid_of = [](std::span<const double> v) {
        std::vector<double> sorted(v.begin(), v.end());
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> grid(kGridSize);
        for (std::size_t k = 0; k < kGridSize; ++k)
            grid[k] = empirical_quantile(sorted, (static_cast<double>(k) + 0.5) / static_cast<double>(kGridSize));
        return grid;
    };
    const auto bx = grid_bins(x, grid_of(x));
    const auto by = grid_bins(y, grid_of(y));

    Ks2Result r;
    r.statistic = ks2_from_bins(bx, by, {});
    RngStream rng(seed, 0);
    std::vector<std::size_t> perm(x.size());
    std::size_t at_least = 0;
    for (std::size_t p = 0; p < permutations; ++p) {
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t k = perm.size(); k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
        if (ks2_from_bins(bx, by, perm) >= r.statistic) ++at_least;
    }
    r.p_value = static_cast<double>(1 + at_least) / static_cast<double>(1 + permutations);
    return r;
}

std::vector<std::vector<double>> stationary_quantiles(const RegenModel& model, std::span<const std::size_t> components,
                                                      std::span<const double> probs, std::size_t draws,
                                                      double t_burn, std::uint64_t seed, unsigned threads,
                                                      std::size_t cycle_budget) {
    const std::size_t m = model.dimension();
    if (components.size() != m) throw DomainError("one component per coordinate is required");
    if (draws == 0) throw DomainError("quantile pre-pass needs at least one draw");
    const auto means = model.cycle_means();
    for (std::size_t i = 0; i < m; ++i) {
        if (components[i] >= model.state_dimension(i)) throw DomainError("component index out of range");
        if (!(t_burn >= 100.0 * means[i])) throw DomainError("burn-in must be at least 100 mean cycle lengths");
    }
    const std::vector<double> times(m, t_burn);
    std::vector<double> values(draws * m);
    parallel_for(draws, threads, [&](std::size_t r) {
        RngStream rng(seed, r);
        const auto states = evaluate_at_times(model, rng, times, cycle_budget);
        for (std::size_t i = 0; i < m; ++i) values[r * m + i] = states[i][components[i]];
    });
    std::vector<std::vector<double>> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> col(draws);
        for (std::size_t r = 0; r < draws; ++r) col[r] = values[r * m + i];
        std::sort(col.begin(), col.end());
        for (double p : probs) out[i].push_back(empirical_quantile(col, p));
    }
    return out;
}

}  // namespace regen
