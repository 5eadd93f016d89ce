#include "tatrec/tatrec.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "core/plots.hpp"
#include "core/scenario.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

tat_status fail(tat_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
tat_status guarded(tat_status runtime_code, Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return TAT_OK;
    } catch (const tat::ValidationError& e) {
        return fail(TAT_ERR_VALIDATE, e.what());
    } catch (const std::exception& e) {
        return fail(runtime_code, e.what());
    }
}

}  // namespace

struct tat_scenario {
    tat::ScenarioConfig cfg;
};

extern "C" {

const char* tat_version(void) { return "1.0.0"; }

const char* tat_last_error(void) { return g_last_error.c_str(); }

void tat_string_free(char* s) { std::free(s); }

tat_status tat_scenario_load(const char* config_path, tat_scenario** out) {
    if (!config_path || !out) return fail(TAT_ERR_ARG, "null argument");
    *out = nullptr;
    tat::ScenarioConfig cfg;
    try {
        cfg = tat::parse_config_file(config_path);
    } catch (const std::exception& e) {
        return fail(TAT_ERR_PARSE, e.what());
    }
    *out = new tat_scenario{std::move(cfg)};
    g_last_error.clear();
    return TAT_OK;
}

tat_status tat_scenario_load_text(const char* config_json, tat_scenario** out) {
    if (!config_json || !out) return fail(TAT_ERR_ARG, "null argument");
    *out = nullptr;
    tat::ScenarioConfig cfg;
    try {
        cfg = tat::parse_config_text(config_json);
    } catch (const std::exception& e) {
        return fail(TAT_ERR_PARSE, e.what());
    }
    *out = new tat_scenario{std::move(cfg)};
    g_last_error.clear();
    return TAT_OK;
}

void tat_scenario_free(tat_scenario* s) { delete s; }

tat_status tat_scenario_validate(tat_scenario* s) {
    if (!s) return fail(TAT_ERR_ARG, "null scenario");
    return guarded(TAT_ERR_VALIDATE, [&] { tat::validate_config(s->cfg); });
}

tat_status tat_scenario_set_seed(tat_scenario* s, unsigned long long seed) {
    if (!s) return fail(TAT_ERR_ARG, "null scenario");
    if (seed != 0) s->cfg.seed = seed;
    return TAT_OK;
}

tat_status tat_scenario_set_threads(tat_scenario* s, int n_threads) {
    if (!s) return fail(TAT_ERR_ARG, "null scenario");
    if (n_threads > 0) s->cfg.threads = n_threads;
    return TAT_OK;
}

tat_status tat_scenario_run(tat_scenario* s, const char* out_dir) {
    if (!s || !out_dir) return fail(TAT_ERR_ARG, "null argument");
    return guarded(TAT_ERR_RUNTIME, [&] { tat::run_scenario(s->cfg, out_dir); });
}

tat_status tat_metrics_summary(const char* artifact_dir, char** out_json) {
    if (!artifact_dir || !out_json) return fail(TAT_ERR_ARG, "null argument");
    *out_json = nullptr;
    std::string summary;
    tat_status st = guarded(TAT_ERR_IO, [&] { summary = tat::load_summary(artifact_dir); });
    if (st != TAT_OK) return st;
    *out_json = dup_string(summary);
    return *out_json ? TAT_OK : fail(TAT_ERR_RUNTIME, "allocation failure");
}

tat_status tat_export_plots(const char* artifact_dir, int* n_written, char** out_warnings) {
    if (!artifact_dir) return fail(TAT_ERR_ARG, "null argument");
    tat::PlotOutcome outcome;
    tat_status st = guarded(TAT_ERR_IO, [&] { outcome = tat::export_plots(artifact_dir); });
    if (st != TAT_OK) return st;
    if (n_written) *n_written = outcome.written;
    if (out_warnings) {
        std::string joined;
        for (const auto& w : outcome.warnings) {
            joined += w;
            joined += "\n";
        }
        *out_warnings = dup_string(joined);
    }
    return TAT_OK;
}

}  // extern "C"
