// Command line front end. Links only the C API.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "tatrec/tatrec.h"

namespace {

int report(tat_status st, const char* verb) {
    if (st == TAT_OK) return 0;
    std::fprintf(stderr, "%s failed (%d): %s\n", verb, static_cast<int>(st), tat_last_error());
    return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermoacoustic wavefront reconstruction"};
    app.require_subcommand(1);

    std::string config, out_dir = "out", artifact_dir;
    unsigned long long seed = 0;
    int threads = 0;

    auto* validate = app.add_subcommand("validate", "parse and validate a scenario config");
    validate->add_option("-c,--config", config, "config path")->required();

    auto* run = app.add_subcommand("run", "run a scenario end to end");
    run->add_option("-c,--config", config, "config path")->required();
    run->add_option("-o,--out", out_dir, "artifact directory");
    run->add_option("--seed", seed, "override the configured seed");
    run->add_option("--threads", threads, "worker thread count");

    auto* metrics = app.add_subcommand("metrics", "print the summary of a finished run");
    metrics->add_option("dir", artifact_dir, "artifact directory")->required();

    auto* plot = app.add_subcommand("plot", "render plots from run artifacts");
    plot->add_option("dir", artifact_dir, "artifact directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        tat_scenario* s = nullptr;
        tat_status st = tat_scenario_load(config.c_str(), &s);
        if (st == TAT_OK) st = tat_scenario_validate(s);
        tat_scenario_free(s);
        if (st == TAT_OK) std::printf("ok: %s\n", config.c_str());
        return report(st, "validate");
    }
    if (run->parsed()) {
        tat_scenario* s = nullptr;
        tat_status st = tat_scenario_load(config.c_str(), &s);
        if (st == TAT_OK) st = tat_scenario_set_seed(s, seed);
        if (st == TAT_OK) st = tat_scenario_set_threads(s, threads);
        if (st == TAT_OK) st = tat_scenario_run(s, out_dir.c_str());
        tat_scenario_free(s);
        if (st == TAT_OK) std::printf("artifacts in %s\n", out_dir.c_str());
        return report(st, "run");
    }
    if (metrics->parsed()) {
        char* json = nullptr;
        tat_status st = tat_metrics_summary(artifact_dir.c_str(), &json);
        if (st == TAT_OK) {
            std::printf("%s\n", json);
            tat_string_free(json);
        }
        return report(st, "metrics");
    }
    if (plot->parsed()) {
        int n = 0;
        char* warnings = nullptr;
        tat_status st = tat_export_plots(artifact_dir.c_str(), &n, &warnings);
        if (st == TAT_OK) {
            std::printf("wrote %d image(s)\n", n);
            if (warnings && warnings[0]) std::fprintf(stderr, "%s", warnings);
        }
        tat_string_free(warnings);
        return report(st, "plot");
    }
    return 0;
}
