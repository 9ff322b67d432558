#pragma once

#include <vector>

#include "hypercsi/types.hpp"

namespace hypercsi::kernels {

// Data-parallel primitives over pixel columns. Every kernel exists in a
// serial reference flavor and an OpenMP flavor; the undecorated name
// dispatches on the thread count. The parallel flavors are bit-identical to
// the serial ones for any thread count: each iteration computes one column
// independently and writes disjoint output, and reductions combine with
// order-independent rules (larger value wins, ties go to the smaller index).

// Resolves a requested thread count: values >= 1 pass through, anything else
// falls back to HYPERCSI_THREADS if set, then to omp_get_max_threads().
int resolve_threads(int requested);

// out.col(n) = basis^T (x.col(n) - mean)
void project_columns_serial(const MatrixXd& basis, const VectorXd& mean,
                            const MatrixXd& x, MatrixXd& out);
void project_columns_parallel(const MatrixXd& basis, const VectorXd& mean,
                              const MatrixXd& x, MatrixXd& out, int threads);
void project_columns(const MatrixXd& basis, const VectorXd& mean,
                     const MatrixXd& x, MatrixXd& out, int threads);

// out.col(n) = basis * alpha.col(n) + mean
void lift_columns_serial(const MatrixXd& basis, const VectorXd& mean,
                         const MatrixXd& alpha, MatrixXd& out);
void lift_columns_parallel(const MatrixXd& basis, const VectorXd& mean,
                           const MatrixXd& alpha, MatrixXd& out, int threads);
void lift_columns(const MatrixXd& basis, const VectorXd& mean,
                  const MatrixXd& alpha, MatrixXd& out, int threads);

// Indices of the pixels strictly inside the open ball around each center
// column, ascending per center.
std::vector<std::vector<int>> ball_members_serial(const MatrixXd& dr,
                                                  const MatrixXd& centers,
                                                  double radius);
std::vector<std::vector<int>> ball_members_parallel(const MatrixXd& dr,
                                                    const MatrixXd& centers,
                                                    double radius, int threads);
std::vector<std::vector<int>> ball_members(const MatrixXd& dr, const MatrixXd& centers,
                                           double radius, int threads);

// Pixel index maximizing dir.dot(column) over a subset; ties break to the
// smallest index. The subset is small, so only a serial flavor exists.
int argmax_dot_subset(const MatrixXd& dr, const std::vector<int>& subset,
                      const VectorXd& dir);

// max_n dir.dot(dr.col(n))
double max_dot_serial(const MatrixXd& dr, const VectorXd& dir);
double max_dot_parallel(const MatrixXd& dr, const VectorXd& dir, int threads);
double max_dot(const MatrixXd& dr, const VectorXd& dir, int threads);

// Column with the largest squared norm; ties break to the smallest index.
int argmax_sqnorm_serial(const MatrixXd& y);
int argmax_sqnorm_parallel(const MatrixXd& y, int threads);
int argmax_sqnorm(const MatrixXd& y, int threads);

// y.col(n) -= u * u.dot(y.col(n)) / u.squaredNorm() for every column.
void deflate_serial(MatrixXd& y, const VectorXd& u);
void deflate_parallel(MatrixXd& y, const VectorXd& u, int threads);
void deflate(MatrixXd& y, const VectorXd& u, int threads);

// out(n, i) = max(0, (h_eff(i) - normals.col(i).dot(dr.col(n))) / denom(i)),
// out is n_pixels x N.
void abundance_rows_serial(const MatrixXd& dr, const MatrixXd& normals,
                           const VectorXd& h_eff, const VectorXd& denom,
                           MatrixXd& out);
void abundance_rows_parallel(const MatrixXd& dr, const MatrixXd& normals,
                             const VectorXd& h_eff, const VectorXd& denom,
                             MatrixXd& out, int threads);
void abundance_rows(const MatrixXd& dr, const MatrixXd& normals, const VectorXd& h_eff,
                    const VectorXd& denom, MatrixXd& out, int threads);

}  // namespace hypercsi::kernels
