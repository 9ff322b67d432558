#pragma once

#include <cstdint>
#include <optional>

#include "hypercsi/rng.hpp"
#include "hypercsi/types.hpp"

namespace hypercsi::synth {

struct SceneSpec {
    int n_bands = 0;
    int n_pixels = 0;
    int n_endmembers = 0;
    VectorXd dirichlet_gamma;           // strictly positive, size N
    double purity_rho = 1.0;            // in (1/sqrt(N), 1]
    std::optional<double> snr_db;       // absent: noiseless
    uint64_t seed = 0;

    // Throws InvalidGamma / InvalidParameter / TooFewPixels / TooFewBands.
    void validate() const;
};

struct GroundTruth {
    MatrixXd spectra;     // M x N
    MatrixXd abundances;  // N x L, columns sum to 1
    MatrixXd noiseless;   // M x L, = spectra * abundances
    MatrixXd observed;    // M x L, nonnegative

    double sigma2 = 0.0;             // per-entry noise variance (0 without noise)
    double noise_energy_ratio = 0.0; // sum(noise^2) / (sigma2 * M * L), before clipping
    double realized_snr_db = std::numeric_limits<double>::infinity();
    double max_purity = 0.0;         // max_n ||s[n]||
};

// i.i.d. columns on the open unit simplex; each sums to 1.
MatrixXd sample_dirichlet(const VectorXd& gamma, int count, Rng& rng);

// Nonnegative piecewise-linear curves (3 to 8 knots), rescaled to [0.01, 1]
// and resampled to n_bands; regenerated until the matrix has full column rank.
MatrixXd random_smooth_spectra(int n_bands, int n_endmembers, Rng& rng);

enum class AbundancePattern { kIidDirichlet, kBlockSparse };

// Scene with i.i.d. Dirichlet abundances filtered to the requested purity
// level, then noise at the requested SNR with negative entries clipped to
// zero. user_spectra, when given, must be nonnegative M x N with full column
// rank; otherwise spectra are generated with random_smooth_spectra.
GroundTruth generate_scene(const SceneSpec& spec,
                           const MatrixXd* user_spectra = nullptr);

// kIidDirichlet matches generate_scene; kBlockSparse tiles a virtual square
// grid into blocks of at most two active materials with smooth mixing ramps
// (purity filtering does not apply there).
GroundTruth generate_abundance_maps(const SceneSpec& spec, AbundancePattern pattern,
                                    const MatrixXd* user_spectra = nullptr);

}  // namespace hypercsi::synth
