#include "hypercsi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hypercsi::metrics {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

MatchReport match_columns(const MatrixXd& truth, const MatrixXd& estimate, bool maps) {
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
        throw ShapeMismatch("matrices being compared have different shapes");
    const int n = static_cast<int>(truth.cols());

    auto check_nonzero = [maps](const MatrixXd& m) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (m.col(c).norm() == 0.0) {
                if (maps) throw ZeroMap();
                throw ZeroVector();
            }
        }
    };
    check_nonzero(truth);
    check_nonzero(estimate);

    MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double a = spectral_angle(truth.col(i), estimate.col(j));
            cost(i, j) = a * a;
        }

    MatchReport report;
    report.permutation = match_permutation(cost);
    report.angles_deg.resize(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double sq = cost(i, report.permutation[i]);
        report.angles_deg(i) = std::sqrt(sq) * kRadToDeg;
        sum += sq;
    }
    report.rms_deg = std::sqrt(sum / n) * kRadToDeg;
    return report;
}

}  // namespace

double spectral_angle(const VectorXd& a, const VectorXd& b) {
    if (a.size() != b.size())
        throw ShapeMismatch("spectral angle needs vectors of equal length");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw ZeroVector();
    // arccos of the normalized inner product, evaluated in half-angle form:
    // acos loses ~1e-8 of resolution right where matched endmembers land.
    const VectorXd ua = a / na;
    const VectorXd ub = b / nb;
    return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

std::vector<int> match_permutation(const MatrixXd& cost) {
    if (cost.rows() != cost.cols())
        throw ShapeMismatch("assignment cost matrix must be square");
    const int n = static_cast<int>(cost.rows());

    // Kuhn-Munkres with row/column potentials, 1-based with a virtual row 0.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> perm(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) perm[p[j] - 1] = j - 1;
    return perm;
}

MatchReport match_spectra(const MatrixXd& true_spectra, const MatrixXd& est_spectra) {
    return match_columns(true_spectra, est_spectra, /*maps=*/false);
}

double phi_en(const MatrixXd& true_spectra, const MatrixXd& est_spectra) {
    return match_spectra(true_spectra, est_spectra).rms_deg;
}

MatchReport match_maps(const MatrixXd& true_maps, const MatrixXd& est_maps) {
    return match_columns(true_maps, est_maps, /*maps=*/true);
}

double phi_ab(const MatrixXd& true_maps, const MatrixXd& est_maps) {
    return match_columns(true_maps, est_maps, /*maps=*/true).rms_deg;
}

}  // namespace hypercsi::metrics
