#pragma once

#include "hypercsi/types.hpp"

namespace hypercsi {

// M x L observation matrix, one pixel per column. n_truth carries the
// generating endmember count when known (0 otherwise).
struct SpectralDataset {
    MatrixXd pixels;
    int n_truth = 0;

    Eigen::Index n_bands() const { return pixels.rows(); }
    Eigen::Index n_pixels() const { return pixels.cols(); }
};

namespace dimred {

// Affine set fitted to a dataset: x ~ basis * alpha + mean, with basis the
// N-1 principal eigenvectors of the mean-removed scatter matrix, ordered by
// descending eigenvalue and sign-fixed so each column's largest-magnitude
// entry is positive.
struct AffineSetModel {
    MatrixXd basis;  // M x (N-1), orthonormal columns
    VectorXd mean;   // M
    int n_endmembers = 0;
    // Set when fewer than N-1 eigenvalues clear the rank tolerance; the fit
    // still proceeds with the computed basis.
    bool rank_deficient = false;
};

// Pixels expressed in the fitted (N-1)-dimensional coordinates. Their mean is
// the origin by construction.
struct DRDataset {
    MatrixXd pixels;  // (N-1) x L
    AffineSetModel model;

    Eigen::Index n_pixels() const { return pixels.cols(); }
    Eigen::Index dim() const { return pixels.rows(); }
};

AffineSetModel fit_affine_set(const SpectralDataset& data, int n_endmembers);

DRDataset project(const SpectralDataset& data, const AffineSetModel& model,
                  int threads = 1);

// Restores M-band spectra from DR coordinates (one point per column).
MatrixXd lift(const MatrixXd& dr_points, const AffineSetModel& model,
              int threads = 1);

}  // namespace dimred
}  // namespace hypercsi
