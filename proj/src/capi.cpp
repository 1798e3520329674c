#include "regen/regen.h"

#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "regen/error.hpp"
#include "regen/runner.hpp"
#include "regen/scenario.hpp"

struct regen_scenario {
    regen::ScenarioConfig config;
    unsigned threads = 1;
    std::string normalized;
    std::vector<std::string> warnings;
    std::string report;
};

namespace {

thread_local std::string last_error;

regen_status fail(regen_status s, const std::string& message) {
    last_error = message;
    return s;
}

template <class F>
regen_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const regen::ConfigError& e) {
        return fail(REGEN_ERR_CONFIG, e.what());
    } catch (const regen::DomainError& e) {
        return fail(REGEN_ERR_CONFIG, e.what());
    } catch (const regen::HypothesisError& e) {
        return fail(REGEN_HYPOTHESIS_GATE, e.what());
    } catch (const regen::BudgetError& e) {
        return fail(REGEN_ERR_BUDGET, e.what());
    } catch (const std::exception& e) {
        return fail(REGEN_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(REGEN_ERR_INTERNAL, "unknown error");
    }
}

// Re-validates and recomputes everything derived from the config.
void refresh(regen_scenario& s) {
    regen::validate(s.config);
    s.normalized = regen::serialize_config(s.config);
    const auto model = regen::build_model(s.config.model);
    s.warnings = model->warnings();
    const auto verdict = regen::check_hypotheses(regen::effective_schedule(s.config), model->cycle_means());
    if (!verdict.pass && verdict.witness)
        s.warnings.push_back("schedule fails the liminf ratio condition for coordinates (" +
                             std::to_string(verdict.witness->first) + ", " +
                             std::to_string(verdict.witness->second) + ")" +
                             (s.config.run.allow_hypothesis_fail ? "; negative-control override is set"
                                                                 : "; verify-independence will refuse to run"));
    s.report.clear();
}

template <class F>
regen_status with_scenario(regen_scenario* s, F&& body) {
    if (!s) return fail(REGEN_ERR_ARGUMENT, "scenario handle is null");
    return guarded([&] { return body(*s); });
}

regen_status make(regen::ScenarioConfig config, regen_scenario** out) {
    auto s = std::make_unique<regen_scenario>();
    s->config = std::move(config);
    refresh(*s);
    *out = s.release();
    return REGEN_OK;
}

regen_status run(regen_scenario& s, const regen::CommandOutcome& outcome) {
    s.report = outcome.report;
    return static_cast<regen_status>(outcome.status);
}

}  // namespace

extern "C" {

const char* regen_version(void) { return regen::kVersion; }

const char* regen_last_error(void) { return last_error.c_str(); }

regen_status regen_scenario_from_json(const char* json_text, regen_scenario** out) {
    if (!json_text || !out) return fail(REGEN_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { return make(regen::parse_config(json_text), out); });
}

regen_status regen_scenario_from_file(const char* path, regen_scenario** out) {
    if (!path || !out) return fail(REGEN_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { return make(regen::load_config(path), out); });
}

void regen_scenario_free(regen_scenario* scenario) { delete scenario; }

const char* regen_scenario_normalized(const regen_scenario* s) { return s ? s->normalized.c_str() : ""; }

size_t regen_scenario_warning_count(const regen_scenario* s) { return s ? s->warnings.size() : 0; }

const char* regen_scenario_warning(const regen_scenario* s, size_t index) {
    if (!s || index >= s->warnings.size()) return nullptr;
    return s->warnings[index].c_str();
}

regen_status regen_scenario_set_seed(regen_scenario* scenario, uint64_t seed) {
    return with_scenario(scenario, [&](regen_scenario& s) {
        s.config.run.seed = seed;
        refresh(s);
        return REGEN_OK;
    });
}

regen_status regen_scenario_set_replications(regen_scenario* scenario, uint64_t replications) {
    return with_scenario(scenario, [&](regen_scenario& s) {
        const auto saved = s.config.run.replications;
        s.config.run.replications = static_cast<std::size_t>(replications);
        try {
            refresh(s);
        } catch (...) {
            s.config.run.replications = saved;
            throw;
        }
        return REGEN_OK;
    });
}

regen_status regen_scenario_set_output_dir(regen_scenario* scenario, const char* directory) {
    if (!directory) return fail(REGEN_ERR_ARGUMENT, "null argument");
    return with_scenario(scenario, [&](regen_scenario& s) {
        s.config.output.directory = directory;
        refresh(s);
        return REGEN_OK;
    });
}

regen_status regen_scenario_set_threads(regen_scenario* scenario, unsigned threads) {
    return with_scenario(scenario, [&](regen_scenario& s) {
        s.threads = threads == 0 ? 1 : threads;
        return REGEN_OK;
    });
}

regen_status regen_verify_independence(regen_scenario* scenario) {
    return with_scenario(scenario, [](regen_scenario& s) {
        return run(s, regen::run_verify_independence(s.config, s.threads));
    });
}

regen_status regen_status_pi(regen_scenario* scenario) {
    return with_scenario(scenario,
                         [](regen_scenario& s) { return run(s, regen::run_status_pi(s.config, s.threads)); });
}

regen_status regen_stationary(regen_scenario* scenario) {
    return with_scenario(scenario, [](regen_scenario& s) { return run(s, regen::run_stationary(s.config)); });
}

const char* regen_scenario_report(const regen_scenario* s) { return s ? s->report.c_str() : ""; }

}  // extern "C"
