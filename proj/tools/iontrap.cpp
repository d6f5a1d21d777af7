// iontrap — batch front-end: `iontrap run <config> [--out DIR] [--threads N]`

#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "iontrap/iontrap.h"

namespace {

int exit_code(iontrap_status status) {
    switch (status) {
        case IONTRAP_OK: return 0;
        case IONTRAP_CONFIG_ERROR:
        case IONTRAP_INVALID_ARGUMENT: return 2;
        case IONTRAP_NUMERICAL:
        case IONTRAP_CLUSTERING_AMBIGUOUS: return 3;
        default: return 1;
    }
}

std::string experiment_list() {
    std::string out;
    for (int i = 0; i < iontrap_experiment_count(); ++i) out += std::string(i ? ", " : "") + iontrap_experiment_name(i);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perturbative analysis of a laser-driven trapped ion without the RWA"};
    app.set_version_flag("--version", std::string(iontrap_version()));
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    int threads = 1;
    CLI::App* run = app.add_subcommand("run", "Run the experiment named in a config file");
    run->add_option("config", config, "INI config with [params], [space], [experiment]")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--threads", threads, "Worker threads for grid sweeps")->check(CLI::PositiveNumber);
    run->footer("Experiments: " + experiment_list());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const iontrap_status status = iontrap_run_config(config.c_str(), out_dir.c_str(), threads);
    if (status != IONTRAP_OK) {
        std::fprintf(stderr, "iontrap: %s: %s\n", iontrap_status_name(status), iontrap_last_error());
        if (status == IONTRAP_CONFIG_ERROR) std::fprintf(stderr, "valid experiments: %s\n", experiment_list().c_str());
    }
    return exit_code(status);
}
