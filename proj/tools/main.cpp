#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "aplab/cli.hpp"
#include "aplab/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"aplab: certified suprema, bound checks and ergodic simulations for "
                 "random almost-periodic sums"};
    app.set_version_flag("--version", std::string("aplab ") + aplab::kVersion);

    aplab::RunOptions opts;
    std::uint64_t seed = 0;
    std::string out;
    app.add_option("--config", opts.config_path, "experiment config (JSON)")->required();
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    auto* out_opt = app.add_option("--out", out, "override the output directory");
    app.add_option("--threads", opts.threads, "worker thread count (results are independent of it)");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) opts.seed_override = seed;
    if (*out_opt) opts.out_override = out;
    return aplab::run_experiment(opts);
}
