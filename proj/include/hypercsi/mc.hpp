#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypercsi/types.hpp"

namespace hypercsi::mc {

// Flat key = value[, value...] sweep description. Keys: endmembers, pixels,
// bands, purity, snr_db (numbers or "inf"), trials, master_seed, eta,
// no_shift, gamma ("uniform" or a positive scalar applied to every entry).
struct SweepConfig {
    std::vector<int> endmembers;
    std::vector<int> pixels;
    int bands = 224;
    std::vector<double> purity = {1.0};
    std::vector<std::optional<double>> snr_db = {std::nullopt};
    int trials = 1;
    uint64_t master_seed = 0;
    double eta = 0.9;
    bool no_shift = false;
    double gamma_scalar = 0.0;  // 0 means "uniform": gamma_i = 1/N
};

SweepConfig parse_sweep_config(std::istream& in);
SweepConfig parse_sweep_config(const std::filesystem::path& path);

struct ResultRow {
    int n_endmembers = 0;
    int n_pixels = 0;
    std::optional<double> snr_db;
    double purity_rho = 1.0;
    double eta = 0.9;
    uint64_t trial_seed = 0;
    double phi_en_deg = 0.0;
    double phi_ab_deg = 0.0;
    double wall_time_s = 0.0;
};

struct CellMean {
    int n_endmembers = 0;
    int n_pixels = 0;
    std::optional<double> snr_db;
    double purity_rho = 1.0;
    double eta = 0.9;
    double phi_en_deg = 0.0;
    double phi_ab_deg = 0.0;
    double wall_time_s = 0.0;
};

struct SweepResult {
    std::vector<ResultRow> rows;    // cell-major, trial-minor order
    std::vector<CellMean> means;    // one per cell, same cell order
};

// Runs the cross product endmembers x pixels x purity x snr, trials times
// each, with trial seeds master_seed + trial index. Trials are distributed
// over a worker pool of `threads`; row order does not depend on scheduling.
SweepResult run_sweep(const SweepConfig& config, int threads = 1);

// Per-trial rows followed by per-cell mean rows (trial_seed column "mean").
void write_results_csv(std::ostream& out, const SweepResult& result);

}  // namespace hypercsi::mc
