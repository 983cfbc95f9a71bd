#pragma once

// Configuration-driven stability sweep: for each epsilon, synthesize the
// perturbed DN map, induce E', build alpha and tabulate the distances.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "teichstab/qc_map.hpp"

namespace teichstab {

struct ExperimentConfig {
    SurfaceSpec base;
    std::vector<cplx> direction;  // added to the base series as eps * direction
    std::vector<double> epsilons;
    AlphaOptions alpha;
    SurfaceModelOptions model;
    double rank_tol = 1e-6;
    double trace_tol = 1e-8;
    bool record_timing = false;  // seconds column is 0 unless set, keeping output byte-stable
    std::string csv_name = "stability.csv";
    std::string plot_name = "teich_vs_t.dat";

    /// Parses and validates; every problem is reported as InvalidConfig.
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_file(const std::filesystem::path& path);
    void validate() const;
};

struct ExperimentRow {
    double epsilon = 0.0;
    double t = 0.0;
    double K_minus_1 = 0.0;
    double teich_upper = 0.0;
    double displacement = 0.0;
    double hausdorff = 0.0;
    double seconds = 0.0;
    double beta_c1 = 0.0;  // max_k ||beta_hat eta_k - eta_k||_C1
    bool failed = false;
    std::string error;
    QcMapReport report;
};

/// Worker count: hardware concurrency capped by TEICHSTAB_THREADS and `jobs`.
int worker_count(int jobs);

/// One row per epsilon in config order; a failing row records its error and
/// the sweep continues.
std::vector<ExperimentRow> run_stability(const ExperimentConfig& config);

extern const char* const kCsvHeader;
std::string format_csv(const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> parse_csv(const std::string& text);

/// Writes the CSV, the t vs teich_upper plot data and per-row JSON reports
/// into `dir`. Returns 0 when no row failed, 2 otherwise.
int emit_report(const std::vector<ExperimentRow>& rows, const std::filesystem::path& dir, const ExperimentConfig& config);

/// Runs the closed-form example suite; prints one line per check and
/// returns the number of failures.
int run_selftest(std::ostream& out);

}  // namespace teichstab
