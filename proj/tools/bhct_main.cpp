#include "bhct/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Beam-hardening streak experiments: simulate, reconstruct and analyse two-basis CT data"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    std::optional<std::string> input;
    bhct::Overrides ov;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Experiment configuration JSON");
        sub->add_option("--out", ov.out, "Output directory");
        sub->add_option("--delta-energy", ov.delta_energy, "Replace the spectrum by a single energy E0");
        sub->add_flag("--paper-scale", ov.paper_scale, "Use the full 10000 x 15001 sinogram grid");
        sub->add_option("--threads", ov.threads, "OpenMP thread count");
        sub->add_option("--wl", ov.wl, "Preview window level");
        sub->add_option("--ww", ov.ww, "Preview window width");
        sub->add_option("--seed", ov.seed, "Seed for randomized checks");
    };

    auto* simulate = app.add_subcommand("simulate", "Polychromatic forward projection");
    auto* reconstruct = app.add_subcommand("reconstruct", "Filtered backprojection with preview");
    reconstruct->add_option("--sinogram", input, "Sinogram file (default <out>/sinogram.bin)");
    auto* tangents = app.add_subcommand("tangents", "Double tangents and streak predictions");
    auto* profiles = app.add_subcommand("profiles", "Extract, fit and compare streak profiles");
    profiles->add_option("--image", input, "Image file (default <out>/image.bin)");
    auto* verify = app.add_subcommand("verify", "Run the numerical self-checks");
    auto* report = app.add_subcommand("report", "Full pipeline with preview images, profiles and the comparison table");
    for (auto* s : {simulate, reconstruct, tangents, profiles, verify, report}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    return bhct::run_command(name, config_path, ov, input, std::cout, std::cerr);
}
