#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ifskit/cli.hpp"
#include "ifskit/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ifskit: attractors, Hutchinson measures, Kantorovich distances, "
                 "Cuntz operator families, and fixed positive-operator-valued measures"};
    app.require_subcommand(1);

    ifskit::cli::RunOptions options;
    std::uint64_t seed_value = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", options.config_path, "JSON config file");
        cmd->add_option("--out", options.out_dir, "output directory")->capture_default_str();
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { seed_value = v; seed_set = true; },
            "dictionary seed override");
        cmd->add_flag("--quiet", options.quiet, "suppress per-check output");
    };

    for (const char* name : {"attractor", "measure", "cuntz-check", "povm-fixpoint",
                             "dilation-check"})
        add_common(app.add_subcommand(name));

    auto* dist = app.add_subcommand("dist");
    add_common(dist);
    dist->add_option("--mu", options.mu_path, "first measure CSV")->required();
    dist->add_option("--nu", options.nu_path, "second measure CSV")->required();

    auto* demo = app.add_subcommand("completion-demo");
    add_common(demo);
    demo->add_option("--which", options.which, "kravchenko | truncation");

    CLI11_PARSE(app, argc, argv);

    options.command = app.get_subcommands().front()->get_name();
    if (seed_set) options.seed = seed_value;

    try {
        const auto report = ifskit::cli::run(options);
        return report.all_passed ? 0 : 1;
    } catch (const ifskit::cli::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ifskit::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what()
                  << " (last residual " << e.last_residual() << ")\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
