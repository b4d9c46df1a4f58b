// pmcflow: command-line front end.
//
//   pmcflow run <config.toml> [--out DIR]   execute a scenario config
//   pmcflow verify [--filter PAT]           run the property-check suite
//   pmcflow scenarios                       list built-in presets
//
// Exit status is 0 only when every configured check (run) or selected
// property check (verify) passes.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pmcf/errors.hpp"
#include "pmcf/scenario.hpp"
#include "pmcf/verify.hpp"

namespace {

void apply_thread_cap() {
    const char* env = std::getenv("PMCFLOW_THREADS");
    if (!env || !*env) return;
    const int k = std::atoi(env);
    if (k <= 0) return;
#ifdef _OPENMP
    omp_set_num_threads(k);
#endif
    // Serial builds: the cap is trivially satisfied.
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    const pmcf::ScenarioConfig config = pmcf::parse_config(config_path);
    std::printf("scenario %s: running (out: %s)\n", config.name.c_str(), out_dir.c_str());
    const pmcf::RunSummary summary = pmcf::run_scenario(config, out_dir);
    std::printf("termination: %s\n", summary.termination.c_str());
    std::printf("s_final: %.6g\n", summary.s_final);
    std::printf("sup|H-Hcal| final: %.6g\n", summary.sup_h_minus_h_final);
    if (summary.decay_rate) std::printf("decay rate: %.6g\n", *summary.decay_rate);
    std::printf("wall: %.3gs\n", summary.wall_time_seconds);
    for (const auto& [name, check] : summary.checks)
        std::printf("  check %-24s %s (margin %.4g)\n", name.c_str(),
                    check.pass ? "pass" : "FAIL", check.margin);
    const bool ok = summary.all_checks_pass();
    std::printf("%s\n", ok ? "all checks passed" : "CHECKS FAILED");
    return ok ? 0 : 1;
}

int cmd_verify(const std::string& filter) {
    const auto results = pmcf::verify_suite(filter);
    if (results.empty()) {
        std::printf("no checks match filter '%s'\n", filter.c_str());
        return 1;
    }
    int failed = 0;
    for (const auto& r : results) {
        std::printf("%-36s %s (margin %.4g, %.2fs)%s%s\n", r.name.c_str(),
                    r.pass ? "pass" : "FAIL", r.margin, r.seconds,
                    r.detail.empty() ? "" : " - ", r.detail.c_str());
        if (!r.pass) ++failed;
    }
    std::printf("%zu checks, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}

int cmd_scenarios() {
    for (const auto& name : pmcf::preset_names()) {
        const pmcf::ScenarioConfig c = pmcf::preset(name);
        std::printf("%-28s dim %d  %s\n", name.c_str(), c.dim, c.chart.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pmcflow: prescribed mean curvature flow laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", filter;

    CLI::App* run = app.add_subcommand("run", "execute a scenario config");
    run->add_option("config", config_path, "TOML scenario config")->required();
    run->add_option("--out", out_dir, "output directory (default: out)");

    CLI::App* verify = app.add_subcommand("verify", "run the property-check suite");
    verify->add_option("--filter", filter, "substring filter on check names");

    CLI::App* scenarios = app.add_subcommand("scenarios", "list built-in presets");

    CLI11_PARSE(app, argc, argv);
    apply_thread_cap();

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (verify->parsed()) return cmd_verify(filter);
        if (scenarios->parsed()) return cmd_scenarios();
    } catch (const pmcf::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 3;
    }
    return 0;
}
