#pragma once

#include <string>
#include <vector>

#include "hypercsi/dimred.hpp"
#include "hypercsi/geometry.hpp"

namespace hypercsi {

// Disjoint open balls around the purest pixels. Ball k is centered at purest
// pixel k; the search regions for facet i are all balls except ball i.
struct SearchRegions {
    double radius = 0.0;
    MatrixXd centers;                       // (N-1) x N
    std::vector<std::vector<int>> members;  // per ball, ascending pixel indices

    // Pixels of region k (0-based, k in [0, N-2]) used when estimating facet i.
    const std::vector<int>& region(int i, int k) const {
        return members[static_cast<size_t>(k < i ? k : k + 1)];
    }
};

// One facet per endmember: outward normal, externally tangent inner-product
// constant, and the active pixels the normal was built from.
struct HyperplaneSet {
    MatrixXd normals;    // (N-1) x N, column i holds b_i
    VectorXd constants;  // N
    std::vector<std::vector<int>> active_pixels;  // N lists of N-1 indices

    std::vector<geometry::Hyperplane> facets() const;
};

struct EndmemberEstimate {
    MatrixXd dr_vertices;  // (N-1) x N
    MatrixXd spectra;      // M x N, entrywise >= 0
    double shift_c = 1.0;
    double eta = 1.0;
    int clamped_entries = 0;        // lifted entries raised to zero
    double min_lifted_entry = 0.0;  // most negative entry before clamping
};

SearchRegions build_regions(const dimred::DRDataset& dr, const std::vector<int>& purest,
                            int threads = 1);

struct NormalEstimate {
    VectorXd normal;
    std::vector<int> active;
};

// Facet direction from the purest-pixel simplex, one active pixel per search
// region by maximum inner product (ties to the smallest pixel index), then
// the normal from those pixels and the origin, sign-fixed outward.
NormalEstimate estimate_normal(const dimred::DRDataset& dr, const SearchRegions& regions,
                               const MatrixXd& purest_dr, int i);

// Same, but with the facet direction supplied explicitly.
NormalEstimate estimate_normal_with_direction(const dimred::DRDataset& dr,
                                              const SearchRegions& regions,
                                              const MatrixXd& purest_dr, int i,
                                              const VectorXd& facet_direction);

// Degraded variant: the N-1 active pixels are the joint top inner products
// over the whole data set rather than one per region. Kept for the
// region-search ablation only.
NormalEstimate estimate_normal_naive(const dimred::DRDataset& dr,
                                     const MatrixXd& purest_dr, int i);

// max_n normal.dot(x[n]): the constant of the hyperplane externally tangent
// to the data cloud.
double estimate_constant(const dimred::DRDataset& dr, const VectorXd& normal,
                         int threads = 1);

struct ShiftFactor {
    double c = 1.0;
    double c_prime = 1.0;
    // A band with nonpositive mean coincided with a negative lifted entry;
    // no shift can fix that band, it is clamped at lift time instead.
    bool nonpositive_mean_entry = false;
};

// Smallest c' >= 1 making the lifted endmembers nonnegative, and c = c'/eta.
ShiftFactor shift_factor(const HyperplaneSet& planes, const dimred::AffineSetModel& model,
                         double eta);

// Vertices of the facet arrangement with constants shrunk by c, lifted to the
// band space; negative residuals are clamped to zero and counted.
EndmemberEstimate reconstruct_endmembers(const HyperplaneSet& planes, double c,
                                         const dimred::AffineSetModel& model,
                                         int threads = 1);

// Closed-form abundances against the shrunk facets, clipped at zero;
// n_pixels x N, one row per pixel.
MatrixXd estimate_abundances(const dimred::DRDataset& dr, const HyperplaneSet& planes,
                             const EndmemberEstimate& endmembers, int threads = 1);

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct Diagnostics {
    std::vector<int> purest;
    double radius = 0.0;
    double c_prime = 1.0;
    double c = 1.0;
    std::vector<std::vector<int>> active_pixels;
    int clamped_entries = 0;
    double min_lifted_entry = 0.0;
    std::vector<StageTiming> timings;
    std::vector<std::string> warnings;
};

struct UnmixOptions {
    double eta = 0.9;
    bool no_shift = false;  // keep c = 1
    int threads = 1;
};

struct UnmixResult {
    EndmemberEstimate endmembers;
    MatrixXd abundances;  // n_pixels x N
    Diagnostics diagnostics;
    HyperplaneSet planes;
    dimred::AffineSetModel model;
};

// The full pipeline: affine set fitting, purest-pixel seeding, per-facet
// normal and constant estimation, nonnegativity shift, endmember
// reconstruction, abundance evaluation.
UnmixResult unmix(const SpectralDataset& data, int n_endmembers,
                  const UnmixOptions& options = {});

}  // namespace hypercsi
