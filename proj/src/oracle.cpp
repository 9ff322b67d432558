#include "hypercsi/oracle.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace hypercsi::oracle {

namespace {

void require_affinely_independent(const geometry::SimplexVertices& vertices) {
    const auto n = vertices.cols();
    MatrixXd diffs = vertices.leftCols(n - 1);
    diffs.colwise() -= vertices.col(n - 1);
    Eigen::JacobiSVD<MatrixXd> svd(diffs);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= geometry::kRankTol * sv(0)) throw DegenerateSimplex();
}

// Facet slack of the worst pixel: max_i max_n (b_i . x - h_i) / ||b_i||.
double worst_violation(const MatrixXd& pixels, const std::vector<geometry::Hyperplane>& planes) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& plane : planes) {
        const double norm = plane.normal.norm();
        for (Eigen::Index p = 0; p < pixels.cols(); ++p)
            worst = std::max(worst, (plane.normal.dot(pixels.col(p)) - plane.constant) / norm);
    }
    return worst;
}

}  // namespace

VectorXd fcls_solve(const VectorXd& dr_pixel, const geometry::SimplexVertices& dr_vertices) {
    const int n = static_cast<int>(dr_vertices.cols());
    if (n > 12) throw InvalidParameter("support enumeration is limited to N <= 12");
    if (dr_pixel.size() != dr_vertices.rows())
        throw DimensionMismatch("pixel dimension does not match the vertices");
    require_affinely_independent(dr_vertices);

    constexpr double kFeasTol = 1e-10;
    double best_objective = std::numeric_limits<double>::infinity();
    VectorXd best = VectorXd::Zero(n);

    std::vector<int> support;
    support.reserve(n);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        support.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) support.push_back(i);
        const int k = static_cast<int>(support.size());

        // Equality-constrained least squares on the face: KKT system over the
        // support weights and the sum-to-one multiplier.
        MatrixXd a(dr_vertices.rows(), k);
        for (int c = 0; c < k; ++c) a.col(c) = dr_vertices.col(support[c]);
        MatrixXd kkt = MatrixXd::Zero(k + 1, k + 1);
        kkt.topLeftCorner(k, k) = a.transpose() * a;
        kkt.topRightCorner(k, 1).setOnes();
        kkt.bottomLeftCorner(1, k).setOnes();
        VectorXd rhs(k + 1);
        rhs.head(k) = a.transpose() * dr_pixel;
        rhs(k) = 1.0;

        Eigen::FullPivLU<MatrixXd> lu(kkt);
        if (!lu.isInvertible()) continue;
        const VectorXd sol = lu.solve(rhs);

        if ((sol.head(k).array() < -kFeasTol).any()) continue;
        const double objective = (dr_pixel - a * sol.head(k)).squaredNorm();
        if (objective < best_objective) {
            best_objective = objective;
            best.setZero();
            for (int c = 0; c < k; ++c) best(support[c]) = std::max(0.0, sol(c));
        }
    }
    return best;
}

std::vector<int> max_volume_subset(const MatrixXd& dr_pixels, int n_subset) {
    const int l = static_cast<int>(dr_pixels.cols());
    if (l > 25) throw TooManyPixels("subset enumeration is limited to 25 pixels");
    if (n_subset < 1 || n_subset > l) throw InvalidParameter("subset size out of range");

    std::vector<int> combo(static_cast<size_t>(n_subset));
    for (int i = 0; i < n_subset; ++i) combo[static_cast<size_t>(i)] = i;

    std::vector<int> best;
    double best_volume = -1.0;
    geometry::SimplexVertices vertices(dr_pixels.rows(), n_subset);
    for (;;) {
        for (int i = 0; i < n_subset; ++i) vertices.col(i) = dr_pixels.col(combo[static_cast<size_t>(i)]);
        const double volume = geometry::simplex_volume(vertices);
        if (volume > best_volume) {  // lexicographic enumeration keeps the first maximizer
            best_volume = volume;
            best = combo;
        }

        int pos = n_subset - 1;
        while (pos >= 0 && combo[static_cast<size_t>(pos)] == l - n_subset + pos) --pos;
        if (pos < 0) break;
        ++combo[static_cast<size_t>(pos)];
        for (int i = pos + 1; i < n_subset; ++i)
            combo[static_cast<size_t>(i)] = combo[static_cast<size_t>(i - 1)] + 1;
    }
    return best;
}

bool min_volume_check(const MatrixXd& dr_pixels, const geometry::SimplexVertices& candidate,
                      int trials, Rng& rng) {
    const auto planes = geometry::hyperplanes_from_vertices(candidate);
    const double scale = candidate.colwise().norm().maxCoeff();
    if (worst_violation(dr_pixels, planes) > 1e-9 * std::max(scale, 1.0))
        throw NotEnclosing("candidate simplex does not enclose the pixels");

    const double base_volume = geometry::simplex_volume(candidate);
    const int n = static_cast<int>(candidate.cols());

    double mean_edge = 0.0;
    int edges = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b, ++edges)
            mean_edge += (candidate.col(a) - candidate.col(b)).norm();
    mean_edge /= edges;
    const double jitter = 0.02 * mean_edge;

    const VectorXd centroid = dr_pixels.rowwise().mean();
    geometry::SimplexVertices perturbed(candidate.rows(), n);
    for (int t = 0; t < trials; ++t) {
        const double shrink = 0.97 + 0.04 * rng.uniform();
        for (int v = 0; v < n; ++v) {
            perturbed.col(v) = centroid + shrink * (candidate.col(v) - centroid);
            for (Eigen::Index d = 0; d < perturbed.rows(); ++d)
                perturbed(d, v) += jitter * rng.normal();
        }
        const double volume = geometry::simplex_volume(perturbed);
        if (volume >= base_volume * (1.0 - 1e-12)) continue;
        const auto trial_planes = geometry::hyperplanes_from_vertices(perturbed);
        if (worst_violation(dr_pixels, trial_planes) <= 0.0) return false;
    }
    return true;
}

}  // namespace hypercsi::oracle
