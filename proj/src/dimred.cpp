#include "hypercsi/dimred.hpp"

#include <Eigen/Eigenvalues>

#include "hypercsi/geometry.hpp"
#include "hypercsi/kernels.hpp"

namespace hypercsi::dimred {

namespace {

// Mean-removed scatter matrix accumulated in fixed-size column blocks so the
// full mean-removed copy is never materialized.
MatrixXd scatter_matrix(const MatrixXd& x, const VectorXd& mean) {
    constexpr Eigen::Index kBlock = 4096;
    const auto m = x.rows();
    MatrixXd scatter = MatrixXd::Zero(m, m);
    MatrixXd block;
    for (Eigen::Index c0 = 0; c0 < x.cols(); c0 += kBlock) {
        const auto width = std::min(kBlock, x.cols() - c0);
        block = x.middleCols(c0, width);
        block.colwise() -= mean;
        scatter.noalias() += block * block.transpose();
    }
    return scatter;
}

void fix_sign(Eigen::Ref<VectorXd> v) {
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v(at) < 0.0) v = -v;
}

}  // namespace

AffineSetModel fit_affine_set(const SpectralDataset& data, int n_endmembers) {
    const auto m = data.n_bands();
    const auto l = data.n_pixels();
    if (n_endmembers < 2)
        throw InvalidParameter("need at least two endmembers");
    if (l < n_endmembers)
        throw TooFewPixels("pixel count " + std::to_string(l) + " below endmember count " +
                           std::to_string(n_endmembers));
    if (m < n_endmembers)
        throw TooFewBands("band count " + std::to_string(m) + " below endmember count " +
                          std::to_string(n_endmembers));

    AffineSetModel model;
    model.n_endmembers = n_endmembers;
    model.mean = data.pixels.rowwise().mean();

    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(scatter_matrix(data.pixels, model.mean));
    const VectorXd& eigenvalues = solver.eigenvalues();  // ascending

    const int dim = n_endmembers - 1;
    model.basis.resize(m, dim);
    for (int k = 0; k < dim; ++k) {
        model.basis.col(k) = solver.eigenvectors().col(m - 1 - k);
        fix_sign(model.basis.col(k));
    }

    const double top = std::max(eigenvalues(m - 1), 0.0);
    model.rank_deficient = eigenvalues(m - dim) <= geometry::kRankTol * top;
    return model;
}

DRDataset project(const SpectralDataset& data, const AffineSetModel& model,
                  int threads) {
    if (data.n_bands() != model.basis.rows())
        throw DimensionMismatch("dataset band count does not match the fitted model");
    DRDataset dr;
    dr.model = model;
    kernels::project_columns(model.basis, model.mean, data.pixels, dr.pixels, threads);
    return dr;
}

MatrixXd lift(const MatrixXd& dr_points, const AffineSetModel& model, int threads) {
    if (dr_points.rows() != model.basis.cols())
        throw DimensionMismatch("DR dimension does not match the fitted model");
    MatrixXd out;
    kernels::lift_columns(model.basis, model.mean, dr_points, out, threads);
    return out;
}

}  // namespace hypercsi::dimred
