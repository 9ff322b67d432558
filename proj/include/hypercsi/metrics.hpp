#pragma once

#include <vector>

#include "hypercsi/types.hpp"

namespace hypercsi::metrics {

// arccos of the normalized inner product, clamped into [0, pi]; radians.
double spectral_angle(const VectorXd& a, const VectorXd& b);

// Exact minimizer of sum_i cost(i, perm[i]) over permutations (Hungarian
// method on a square cost matrix). perm[i] is the column matched to row i.
std::vector<int> match_permutation(const MatrixXd& cost);

// Permutation-minimized rms spectral angle between matching columns, with the
// matched permutation and the per-column angles; everything in degrees.
struct MatchReport {
    std::vector<int> permutation;
    VectorXd angles_deg;
    double rms_deg = 0.0;
};

// Columns are endmember spectra.
MatchReport match_spectra(const MatrixXd& true_spectra, const MatrixXd& est_spectra);
double phi_en(const MatrixXd& true_spectra, const MatrixXd& est_spectra);

// Columns are abundance maps (one value per pixel).
MatchReport match_maps(const MatrixXd& true_maps, const MatrixXd& est_maps);
double phi_ab(const MatrixXd& true_maps, const MatrixXd& est_maps);

}  // namespace hypercsi::metrics
