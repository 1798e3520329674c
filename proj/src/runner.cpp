#include "regen/runner.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "regen/error.hpp"
#include "regen/parallel.hpp"

namespace regen {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string metadata_line(std::uint64_t seed) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "# seed=%" PRIu64 ", version=%s\n", seed, kVersion);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

fs::path output_dir(const ScenarioConfig& c) {
    fs::path dir(c.output.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

json number(double x) {
    // JSON has no infinities; they are reported as strings.
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? json("nan") : json(x > 0 ? "inf" : "-inf");
}

json function_json(const TestFunction& f) {
    json j{{"kind", function_name(f)}};
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ConstantFn>) j["value"] = s.value;
            if constexpr (std::is_same_v<T, IdentityFn> || std::is_same_v<T, ExponentialFn>) j["component"] = s.component;
            if constexpr (std::is_same_v<T, IndicatorFn>) {
                j["component"] = s.component;
                j["threshold"] = s.threshold;
            }
            if constexpr (std::is_same_v<T, EqualsFn>) {
                j["component"] = s.component;
                j["value"] = s.value;
            }
        },
        f);
    return j;
}

double z_score(double diff, double se) {
    if (se > 0.0) return diff / se;
    return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
}

void finish(CommandOutcome& out, const ScenarioConfig& c, const json& report, const std::string& json_name) {
    out.report = report.dump(2) + "\n";
    if (c.output.wants("json")) {
        const fs::path p = output_dir(c) / json_name;
        write_file(p, out.report);
        out.files.push_back(p.string());
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CommandOutcome run_verify_independence(const ScenarioConfig& c, unsigned threads) {
    const ModelPtr model = build_model(c.model);
    const ScheduleSpec schedule = effective_schedule(c);
    const auto means = model->cycle_means();
    const auto verdict = check_hypotheses(schedule, means);

    CommandOutcome out;
    json report{{"command", "verify-independence"},
                {"model", model_kind(c.model)},
                {"seed", c.run.seed},
                {"version", kVersion},
                {"replications", c.run.replications},
                {"allow_hypothesis_fail", c.run.allow_hypothesis_fail}};
    json hyp{{"pass", verdict.pass},
             {"cycle_means", means},
             {"order", verdict.order},
             {"liminf_ratios", json::array()},
             {"mean_ratios", verdict.thresholds},
             {"witness", nullptr}};
    for (double r : verdict.ratios) hyp["liminf_ratios"].push_back(number(r));
    if (verdict.witness) hyp["witness"] = {verdict.witness->first, verdict.witness->second};
    report["hypotheses"] = hyp;

    if (!verdict.pass && !c.run.allow_hypothesis_fail) {
        report["status"] = "hypothesis_gate";
        report["pass"] = false;
        out.status = Status::hypothesis_gate;
        finish(out, c, report, "verdict.json");
        return out;
    }

    const std::size_t m = model->dimension();
    const auto components = effective_components(c);
    std::vector<FunctionTuple> tuples;
    if (c.run.test_functions == "exponential") {
        FunctionTuple t;
        for (std::size_t i = 0; i < m; ++i) t.push_back(ExponentialFn{components[i]});
        tuples.push_back(t);
    } else {
        const double burn_in = effective_burn_in(c, *model);
        const std::uint64_t qseed = derive_seed(c.run.seed, 0);
        const double probs[] = {0.25, 0.5, 0.75};
        const auto q = stationary_quantiles(*model, components, probs, c.run.quantile_draws, burn_in, qseed, threads,
                                            c.run.cycle_budget);
        for (std::size_t k = 0; k < std::size(probs); ++k) {
            FunctionTuple t;
            for (std::size_t i = 0; i < m; ++i) t.push_back(IndicatorFn{components[i], q[i][k]});
            tuples.push_back(t);
        }
        report["quantile_prepass"] = {{"burn_in", burn_in},
                                      {"draws", c.run.quantile_draws},
                                      {"probabilities", probs},
                                      {"seed", qseed}};
    }
    json fns = json::array();
    for (std::size_t j = 0; j < tuples.size(); ++j) {
        json row = json::array();
        for (const auto& f : tuples[j]) row.push_back(function_json(f));
        fns.push_back({{"tuple_id", j}, {"functions", row}});
    }
    report["test_functions"] = fns;

    SweepOptions so;
    so.sampling = {c.run.seed, c.run.replications, threads, c.run.allow_hypothesis_fail, c.run.cycle_budget};
    so.bootstrap_resamples = c.run.bootstrap;
    const auto sweep = convergence_sweep(*model, schedule, c.run.t_grid, tuples, so);

    std::string csv = "t,f_tuple_id,gap,se,n\n";
    for (const auto& row : sweep.gaps)
        for (const auto& g : row)
            csv += format_double(g.t) + "," + std::to_string(g.tuple_id) + "," + format_double(g.gap) + "," +
                   format_double(g.se) + "," + std::to_string(g.n) + "\n";
    csv += metadata_line(c.run.seed);

    json seeds = json::array();
    for (std::size_t k = 0; k < c.run.t_grid.size(); ++k) seeds.push_back(derive_seed(c.run.seed, k + 1));
    json final_rows = json::array();
    for (const auto& g : sweep.gaps.back())
        final_rows.push_back({{"tuple_id", g.tuple_id},
                              {"gap", g.gap},
                              {"se", g.se},
                              {"threshold", gap_threshold(g)},
                              {"pass", gap_passes(g)},
                              {"degenerate", g.degenerate},
                              {"marginal_means", g.marginal_means}});
    json trend = json::array();
    for (double r : sweep.trend) trend.push_back(number(r));
    report["t_grid"] = c.run.t_grid;
    report["sampling_seeds"] = seeds;
    report["final_t"] = c.run.t_grid.back();
    report["final"] = final_rows;
    report["trend_spearman"] = trend;
    report["pass"] = sweep.final_pass;
    report["status"] = sweep.final_pass ? "pass" : "fail";
    out.status = sweep.final_pass ? Status::pass : Status::statistical_fail;

    if (c.output.wants("csv")) {
        const fs::path p = output_dir(c) / "gap.csv";
        write_file(p, csv);
        out.files.push_back(p.string());
    }
    finish(out, c, report, "verdict.json");
    return out;
}

CommandOutcome run_status_pi(const ScenarioConfig& c, unsigned threads) {
    const auto* spec = std::get_if<StatusSpec>(&c.model);
    if (!spec) throw ConfigError("/model/kind", "status-pi needs a status model");
    const ModelPtr model = build_model(c.model);
    const double pi = pi_closed_form(*spec);
    const double burn_in = effective_burn_in(c, *model);
    const std::size_t m = model->dimension();
    const std::size_t n = c.run.replications;
    const auto means = model->cycle_means();
    for (std::size_t i = 0; i < m; ++i)
        if (!(burn_in >= 100.0 * means[i])) throw DomainError("burn-in must be at least 100 mean cycle lengths");

    const std::vector<double> times(m, burn_in);
    std::vector<unsigned char> updated(n);
    const TestFunction f = status_updated();
    parallel_for(n, threads, [&](std::size_t r) {
        RngStream rng(c.run.seed, r);
        const auto states = evaluate_at_times(*model, rng, times, c.run.cycle_budget);
        bool all = true;
        for (const auto& s : states) all = all && evaluate(f, s) == 1.0;
        updated[r] = all ? 1 : 0;
    });
    std::size_t hits = 0;
    for (auto u : updated) hits += u;
    const double pi_hat = static_cast<double>(hits) / static_cast<double>(n);
    const double var = std::max(pi_hat * (1.0 - pi_hat), pi * (1.0 - pi));
    const double se = std::sqrt(var / static_cast<double>(n));
    const double z = z_score(pi_hat - pi, se);
    const bool pass = std::abs(z) <= 3.0;

    json report{{"command", "status-pi"},
                {"seed", c.run.seed},
                {"version", kVersion},
                {"replications", n},
                {"burn_in", burn_in},
                {"pi_closed_form", pi},
                {"pi_simulated", pi_hat},
                {"se", se},
                {"z_score", number(z)},
                {"pass", pass}};
    CommandOutcome out;
    out.status = pass ? Status::pass : Status::statistical_fail;
    finish(out, c, report, "status_pi.json");
    return out;
}

CommandOutcome run_stationary(const ScenarioConfig& c) {
    if (!c.run.stationary) throw ConfigError("/run/stationary", "required key is missing");
    const ModelPtr model = build_model(c.model);
    const auto& q = *c.run.stationary;

    RngStream rr_rng(derive_seed(c.run.seed, 1), 0);
    RngStream ta_rng(derive_seed(c.run.seed, 2), 0);
    const auto rr = renewal_reward_estimate(*model, q.coordinate, q.g, c.run.n_cycles, rr_rng);
    const auto ta = time_average_estimate(*model, q.coordinate, q.g, c.run.horizon, ta_rng, c.run.cycle_budget);
    const double z = z_score(rr.estimate - ta.estimate, std::hypot(rr.standard_error, ta.standard_error));
    const bool pass = std::abs(z) <= 3.0;

    CommandOutcome out;
    out.status = pass ? Status::pass : Status::statistical_fail;
    if (c.output.wants("csv")) {
        std::string csv = "coordinate,g,rr,rr_se,ta,ta_se,z\n";
        csv += std::to_string(q.coordinate) + "," + function_name(q.g) + "," + format_double(rr.estimate) + "," +
               format_double(rr.standard_error) + "," + format_double(ta.estimate) + "," +
               format_double(ta.standard_error) + "," + format_double(z) + "\n";
        csv += metadata_line(c.run.seed);
        const fs::path p = output_dir(c) / "stationary.csv";
        write_file(p, csv);
        out.files.push_back(p.string());
    }
    json report{{"command", "stationary"},
                {"seed", c.run.seed},
                {"version", kVersion},
                {"coordinate", q.coordinate},
                {"g", function_json(q.g)},
                {"renewal_reward", {{"estimate", rr.estimate}, {"se", rr.standard_error}, {"cycles", rr.cycles}}},
                {"time_average",
                 {{"estimate", ta.estimate}, {"se", ta.standard_error}, {"horizon", c.run.horizon}}},
                {"z", number(z)},
                {"pass", pass}};
    finish(out, c, report, "stationary.json");
    return out;
}

}  // namespace regen
