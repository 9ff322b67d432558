#include "hypercsi/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <limits>

namespace hypercsi::kernels {

namespace {

struct Best {
    double value = -std::numeric_limits<double>::infinity();
    long index = -1;

    void consider(double v, long i) {
        if (index < 0 || v > value || (v == value && i < index)) {
            value = v;
            index = i;
        }
    }
    void merge(const Best& other) {
        if (other.index < 0) return;
        if (other.value > value || (other.value == value && (index < 0 || other.index < index))) {
            value = other.value;
            index = other.index;
        }
    }
};

}  // namespace

int resolve_threads(int requested) {
    if (requested >= 1) return requested;
    if (const char* env = std::getenv("HYPERCSI_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return omp_get_max_threads();
}

// --- project ---------------------------------------------------------------

void project_columns_serial(const MatrixXd& basis, const VectorXd& mean,
                            const MatrixXd& x, MatrixXd& out) {
    const auto n = x.cols();
    out.resize(basis.cols(), n);
    for (Eigen::Index c = 0; c < n; ++c)
        out.col(c).noalias() = basis.transpose() * (x.col(c) - mean);
}

void project_columns_parallel(const MatrixXd& basis, const VectorXd& mean,
                              const MatrixXd& x, MatrixXd& out, int threads) {
    const auto n = x.cols();
    out.resize(basis.cols(), n);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (Eigen::Index c = 0; c < n; ++c)
        out.col(c).noalias() = basis.transpose() * (x.col(c) - mean);
}

void project_columns(const MatrixXd& basis, const VectorXd& mean,
                     const MatrixXd& x, MatrixXd& out, int threads) {
    if (threads <= 1)
        project_columns_serial(basis, mean, x, out);
    else
        project_columns_parallel(basis, mean, x, out, threads);
}

// --- lift --------------------------------------------------------------------

void lift_columns_serial(const MatrixXd& basis, const VectorXd& mean,
                         const MatrixXd& alpha, MatrixXd& out) {
    const auto n = alpha.cols();
    out.resize(basis.rows(), n);
    for (Eigen::Index c = 0; c < n; ++c)
        out.col(c).noalias() = basis * alpha.col(c) + mean;
}

void lift_columns_parallel(const MatrixXd& basis, const VectorXd& mean,
                           const MatrixXd& alpha, MatrixXd& out, int threads) {
    const auto n = alpha.cols();
    out.resize(basis.rows(), n);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (Eigen::Index c = 0; c < n; ++c)
        out.col(c).noalias() = basis * alpha.col(c) + mean;
}

void lift_columns(const MatrixXd& basis, const VectorXd& mean,
                  const MatrixXd& alpha, MatrixXd& out, int threads) {
    if (threads <= 1)
        lift_columns_serial(basis, mean, alpha, out);
    else
        lift_columns_parallel(basis, mean, alpha, out, threads);
}

// --- open-ball membership ------------------------------------------------------

namespace {

std::vector<std::vector<int>> gather_members(const std::vector<uint8_t>& flags,
                                             Eigen::Index n_pixels, Eigen::Index n_centers) {
    std::vector<std::vector<int>> members(n_centers);
    for (Eigen::Index c = 0; c < n_centers; ++c)
        for (Eigen::Index n = 0; n < n_pixels; ++n)
            if (flags[c * n_pixels + n]) members[c].push_back(static_cast<int>(n));
    return members;
}

}  // namespace

std::vector<std::vector<int>> ball_members_serial(const MatrixXd& dr,
                                                  const MatrixXd& centers,
                                                  double radius) {
    const auto n_pixels = dr.cols();
    const auto n_centers = centers.cols();
    const double r2 = radius * radius;
    std::vector<uint8_t> flags(static_cast<size_t>(n_pixels * n_centers), 0);
    for (Eigen::Index n = 0; n < n_pixels; ++n)
        for (Eigen::Index c = 0; c < n_centers; ++c)
            flags[c * n_pixels + n] = (dr.col(n) - centers.col(c)).squaredNorm() < r2;
    return gather_members(flags, n_pixels, n_centers);
}

std::vector<std::vector<int>> ball_members_parallel(const MatrixXd& dr,
                                                    const MatrixXd& centers,
                                                    double radius, int threads) {
    const auto n_pixels = dr.cols();
    const auto n_centers = centers.cols();
    const double r2 = radius * radius;
    std::vector<uint8_t> flags(static_cast<size_t>(n_pixels * n_centers), 0);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (Eigen::Index n = 0; n < n_pixels; ++n)
        for (Eigen::Index c = 0; c < n_centers; ++c)
            flags[c * n_pixels + n] = (dr.col(n) - centers.col(c)).squaredNorm() < r2;
    return gather_members(flags, n_pixels, n_centers);
}

std::vector<std::vector<int>> ball_members(const MatrixXd& dr, const MatrixXd& centers,
                                           double radius, int threads) {
    return threads <= 1 ? ball_members_serial(dr, centers, radius)
                        : ball_members_parallel(dr, centers, radius, threads);
}

// --- inner-product reductions ----------------------------------------------------

int argmax_dot_subset(const MatrixXd& dr, const std::vector<int>& subset,
                      const VectorXd& dir) {
    Best best;
    for (int idx : subset) best.consider(dir.dot(dr.col(idx)), idx);
    return static_cast<int>(best.index);
}

double max_dot_serial(const MatrixXd& dr, const VectorXd& dir) {
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index n = 0; n < dr.cols(); ++n)
        best = std::max(best, dir.dot(dr.col(n)));
    return best;
}

double max_dot_parallel(const MatrixXd& dr, const VectorXd& dir, int threads) {
    double best = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) num_threads(threads) reduction(max : best)
    for (Eigen::Index n = 0; n < dr.cols(); ++n)
        best = std::max(best, dir.dot(dr.col(n)));
    return best;
}

double max_dot(const MatrixXd& dr, const VectorXd& dir, int threads) {
    return threads <= 1 ? max_dot_serial(dr, dir) : max_dot_parallel(dr, dir, threads);
}

// --- squared-norm argmax ------------------------------------------------------------

int argmax_sqnorm_serial(const MatrixXd& y) {
    Best best;
    for (Eigen::Index n = 0; n < y.cols(); ++n) best.consider(y.col(n).squaredNorm(), n);
    return static_cast<int>(best.index);
}

int argmax_sqnorm_parallel(const MatrixXd& y, int threads) {
    Best best;
#pragma omp parallel num_threads(threads)
    {
        Best local;
#pragma omp for schedule(static)
        for (Eigen::Index n = 0; n < y.cols(); ++n) local.consider(y.col(n).squaredNorm(), n);
#pragma omp critical
        best.merge(local);
    }
    return static_cast<int>(best.index);
}

int argmax_sqnorm(const MatrixXd& y, int threads) {
    return threads <= 1 ? argmax_sqnorm_serial(y) : argmax_sqnorm_parallel(y, threads);
}

// --- deflation ------------------------------------------------------------------------

void deflate_serial(MatrixXd& y, const VectorXd& u) {
    const double uu = u.squaredNorm();
    if (uu == 0.0) return;
    for (Eigen::Index n = 0; n < y.cols(); ++n)
        y.col(n) -= u * (u.dot(y.col(n)) / uu);
}

void deflate_parallel(MatrixXd& y, const VectorXd& u, int threads) {
    const double uu = u.squaredNorm();
    if (uu == 0.0) return;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (Eigen::Index n = 0; n < y.cols(); ++n)
        y.col(n) -= u * (u.dot(y.col(n)) / uu);
}

void deflate(MatrixXd& y, const VectorXd& u, int threads) {
    if (threads <= 1)
        deflate_serial(y, u);
    else
        deflate_parallel(y, u, threads);
}

// --- abundance map ------------------------------------------------------------------------

void abundance_rows_serial(const MatrixXd& dr, const MatrixXd& normals,
                           const VectorXd& h_eff, const VectorXd& denom,
                           MatrixXd& out) {
    const auto n_pixels = dr.cols();
    const auto n_end = normals.cols();
    out.resize(n_pixels, n_end);
    for (Eigen::Index n = 0; n < n_pixels; ++n)
        for (Eigen::Index i = 0; i < n_end; ++i)
            out(n, i) = std::max(0.0, (h_eff(i) - normals.col(i).dot(dr.col(n))) / denom(i));
}

void abundance_rows_parallel(const MatrixXd& dr, const MatrixXd& normals,
                             const VectorXd& h_eff, const VectorXd& denom,
                             MatrixXd& out, int threads) {
    const auto n_pixels = dr.cols();
    const auto n_end = normals.cols();
    out.resize(n_pixels, n_end);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (Eigen::Index n = 0; n < n_pixels; ++n)
        for (Eigen::Index i = 0; i < n_end; ++i)
            out(n, i) = std::max(0.0, (h_eff(i) - normals.col(i).dot(dr.col(n))) / denom(i));
}

void abundance_rows(const MatrixXd& dr, const MatrixXd& normals, const VectorXd& h_eff,
                    const VectorXd& denom, MatrixXd& out, int threads) {
    if (threads <= 1)
        abundance_rows_serial(dr, normals, h_eff, denom, out);
    else
        abundance_rows_parallel(dr, normals, h_eff, denom, out, threads);
}

}  // namespace hypercsi::kernels
