#include <iostream>

#include <CLI11.hpp>

#include "teichstab/experiments.hpp"

using namespace teichstab;

int main(int argc, char** argv) {
    CLI::App app{"Stability experiments for the DN-map to conformal-class correspondence"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "run the epsilon sweep described by a JSON config");
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory")->required();
    auto* selftest = app.add_subcommand("selftest", "run the closed-form example suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*selftest) return run_selftest(std::cout) == 0 ? 0 : 1;
        const ExperimentConfig cfg = ExperimentConfig::from_file(config_path);
        const auto rows = run_stability(cfg);
        for (const auto& r : rows) {
            if (r.failed)
                std::cerr << "epsilon " << r.epsilon << ": " << r.error << "\n";
        }
        const int code = emit_report(rows, out_dir, cfg);
        std::cout << format_csv(rows);
        return code;
    } catch (const Error& e) {
        std::cerr << "teichstab: " << e.what() << "\n";
        return 1;
    }
}
