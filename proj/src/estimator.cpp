#include "hypercsi/estimator.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "hypercsi/kernels.hpp"
#include "hypercsi/spa.hpp"

namespace hypercsi {

namespace {

bool affinely_independent_rel(const MatrixXd& points) {
    const auto k = points.cols();
    if (k <= 1) return true;
    if (k - 1 > points.rows()) return false;
    MatrixXd diffs = points.leftCols(k - 1);
    diffs.colwise() -= points.col(k - 1);
    Eigen::JacobiSVD<MatrixXd> svd(diffs);
    const auto& sv = svd.singularValues();
    return sv(k - 2) > geometry::kRankTol * sv(0);
}

MatrixXd gather_columns(const MatrixXd& m, const std::vector<int>& indices) {
    MatrixXd out(m.rows(), static_cast<Eigen::Index>(indices.size()));
    for (size_t c = 0; c < indices.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = m.col(indices[c]);
    return out;
}

NormalEstimate finish_normal(const dimred::DRDataset& dr, const MatrixXd& purest_dr,
                             int i, std::vector<int> active) {
    MatrixXd points = gather_columns(dr.pixels, active);
    if (!affinely_independent_rel(points)) throw AffinelyDependentActiveSet(i);

    VectorXd normal = geometry::normal_from_points_with_origin(points, i);

    // Outward convention: the purest pixel for vertex i sits strictly on the
    // inner side of the facet the active pixels trace out.
    double max_active = -std::numeric_limits<double>::infinity();
    for (int idx : active) max_active = std::max(max_active, normal.dot(dr.pixels.col(idx)));
    if (normal.dot(purest_dr.col(i)) >= max_active) normal = -normal;

    return {std::move(normal), std::move(active)};
}

}  // namespace

std::vector<geometry::Hyperplane> HyperplaneSet::facets() const {
    std::vector<geometry::Hyperplane> planes;
    planes.reserve(static_cast<size_t>(normals.cols()));
    for (Eigen::Index i = 0; i < normals.cols(); ++i)
        planes.push_back({normals.col(i), constants(i)});
    return planes;
}

SearchRegions build_regions(const dimred::DRDataset& dr, const std::vector<int>& purest,
                            int threads) {
    const int n = static_cast<int>(purest.size());
    SearchRegions regions;
    regions.centers = gather_columns(dr.pixels, purest);

    double min_dist_sq = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            min_dist_sq =
                std::min(min_dist_sq, (regions.centers.col(a) - regions.centers.col(b)).squaredNorm());
    if (min_dist_sq == 0.0) throw DuplicatePurestPixels();

    regions.radius = 0.5 * std::sqrt(min_dist_sq);
    regions.members = kernels::ball_members(dr.pixels, regions.centers, regions.radius, threads);
    return regions;
}

NormalEstimate estimate_normal(const dimred::DRDataset& dr, const SearchRegions& regions,
                               const MatrixXd& purest_dr, int i) {
    const VectorXd direction = geometry::normal_from_vertices(purest_dr, i);
    return estimate_normal_with_direction(dr, regions, purest_dr, i, direction);
}

NormalEstimate estimate_normal_with_direction(const dimred::DRDataset& dr,
                                              const SearchRegions& regions,
                                              const MatrixXd& purest_dr, int i,
                                              const VectorXd& facet_direction) {
    const int n = static_cast<int>(purest_dr.cols());
    std::vector<int> active;
    active.reserve(static_cast<size_t>(n) - 1);
    for (int k = 0; k < n - 1; ++k) {
        const auto& candidates = regions.region(i, k);
        if (candidates.empty()) throw EmptyRegion(i, k);
        active.push_back(kernels::argmax_dot_subset(dr.pixels, candidates, facet_direction));
    }
    return finish_normal(dr, purest_dr, i, std::move(active));
}

NormalEstimate estimate_normal_naive(const dimred::DRDataset& dr,
                                     const MatrixXd& purest_dr, int i) {
    const int n = static_cast<int>(purest_dr.cols());
    const VectorXd direction = geometry::normal_from_vertices(purest_dr, i);

    // Joint selection: the N-1 distinct pixels with the largest inner
    // products over the whole data set, ties to the smaller index.
    const auto l = dr.n_pixels();
    std::vector<int> order(static_cast<size_t>(l));
    for (Eigen::Index p = 0; p < l; ++p) order[static_cast<size_t>(p)] = static_cast<int>(p);
    VectorXd values(l);
    for (Eigen::Index p = 0; p < l; ++p) values(p) = direction.dot(dr.pixels.col(p));
    const auto mid = order.begin() + (n - 1);
    std::partial_sort(order.begin(), mid, order.end(), [&](int a, int b) {
        if (values(a) != values(b)) return values(a) > values(b);
        return a < b;
    });
    std::vector<int> active(order.begin(), mid);
    return finish_normal(dr, purest_dr, i, std::move(active));
}

double estimate_constant(const dimred::DRDataset& dr, const VectorXd& normal, int threads) {
    if (normal.norm() == 0.0) throw ZeroNormal();
    return kernels::max_dot(dr.pixels, normal, threads);
}

ShiftFactor shift_factor(const HyperplaneSet& planes, const dimred::AffineSetModel& model,
                         double eta) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw InvalidParameter("eta must lie in (0, 1], got " + std::to_string(eta));

    const geometry::SimplexVertices unshifted = geometry::reconstruct_vertices(planes.facets());

    ShiftFactor shift;
    for (Eigen::Index i = 0; i < unshifted.cols(); ++i) {
        const VectorXd lifted = model.basis * unshifted.col(i);
        for (Eigen::Index j = 0; j < lifted.size(); ++j) {
            if (model.mean(j) > 0.0)
                shift.c_prime = std::max(shift.c_prime, -lifted(j) / model.mean(j));
            else if (lifted(j) < -1e-12)
                shift.nonpositive_mean_entry = true;
        }
    }
    shift.c = shift.c_prime / eta;
    return shift;
}

EndmemberEstimate reconstruct_endmembers(const HyperplaneSet& planes, double c,
                                         const dimred::AffineSetModel& model, int threads) {
    std::vector<geometry::Hyperplane> shrunk = planes.facets();
    for (auto& plane : shrunk) plane.constant /= c;

    EndmemberEstimate est;
    est.shift_c = c;
    est.dr_vertices = geometry::reconstruct_vertices(shrunk);
    est.spectra = dimred::lift(est.dr_vertices, model, threads);
    est.min_lifted_entry = est.spectra.minCoeff();
    for (Eigen::Index j = 0; j < est.spectra.size(); ++j) {
        if (est.spectra(j) < 0.0) {
            est.spectra(j) = 0.0;
            ++est.clamped_entries;
        }
    }
    return est;
}

MatrixXd estimate_abundances(const dimred::DRDataset& dr, const HyperplaneSet& planes,
                             const EndmemberEstimate& endmembers, int threads) {
    const auto n = planes.normals.cols();
    // The vertices were reconstructed from constants shrunk by c, so the
    // facets of the estimated simplex carry those shrunk constants.
    VectorXd h_eff = planes.constants / endmembers.shift_c;

    const double diameter = 2.0 * dr.pixels.colwise().norm().maxCoeff();
    VectorXd denom(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        denom(i) = h_eff(i) - planes.normals.col(i).dot(endmembers.dr_vertices.col(i));
        const double tol = 1e-12 * planes.normals.col(i).norm() * diameter;
        if (denom(i) <= tol) throw DegenerateDenominator(static_cast<int>(i));
    }

    MatrixXd abundances;
    kernels::abundance_rows(dr.pixels, planes.normals, h_eff, denom, abundances, threads);
    return abundances;
}

UnmixResult unmix(const SpectralDataset& data, int n_endmembers, const UnmixOptions& options) {
    using Clock = std::chrono::steady_clock;
    UnmixResult result;
    auto timed = [&result](const char* stage, auto&& body) {
        const auto start = Clock::now();
        body();
        const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        result.diagnostics.timings.push_back({stage, seconds});
    };

    const int threads = options.threads;
    dimred::DRDataset dr;
    timed("fit", [&] { result.model = dimred::fit_affine_set(data, n_endmembers); });
    if (result.model.rank_deficient)
        result.diagnostics.warnings.push_back(
            "data rank below N-1 within tolerance; proceeding with the computed basis");
    timed("project", [&] { dr = dimred::project(data, result.model, threads); });

    std::vector<int> purest;
    timed("spa", [&] { purest = spa::select_purest(dr, n_endmembers, threads); });
    result.diagnostics.purest = purest;

    SearchRegions regions;
    timed("regions", [&] { regions = build_regions(dr, purest, threads); });
    result.diagnostics.radius = regions.radius;
    const MatrixXd purest_dr = gather_columns(dr.pixels, purest);

    timed("hyperplanes", [&] {
        result.planes.normals.resize(dr.dim(), n_endmembers);
        result.planes.constants.resize(n_endmembers);
        result.planes.active_pixels.resize(static_cast<size_t>(n_endmembers));
        for (int i = 0; i < n_endmembers; ++i) {
            NormalEstimate estimate = estimate_normal(dr, regions, purest_dr, i);
            result.planes.constants(i) = estimate_constant(dr, estimate.normal, threads);
            result.planes.normals.col(i) = estimate.normal;
            result.planes.active_pixels[static_cast<size_t>(i)] = std::move(estimate.active);
        }
    });
    result.diagnostics.active_pixels = result.planes.active_pixels;

    timed("shift", [&] {
        const ShiftFactor shift = shift_factor(result.planes, result.model, options.eta);
        if (shift.nonpositive_mean_entry)
            result.diagnostics.warnings.push_back(
                "negative lifted entry on a band with nonpositive mean; clamped at lift time");
        result.diagnostics.c_prime = shift.c_prime;
        result.diagnostics.c = options.no_shift ? 1.0 : shift.c;
    });

    timed("reconstruct", [&] {
        result.endmembers =
            reconstruct_endmembers(result.planes, result.diagnostics.c, result.model, threads);
        result.endmembers.eta = options.eta;
    });
    result.diagnostics.clamped_entries = result.endmembers.clamped_entries;
    result.diagnostics.min_lifted_entry = result.endmembers.min_lifted_entry;

    timed("abundances", [&] {
        result.abundances = estimate_abundances(dr, result.planes, result.endmembers, threads);
    });
    return result;
}

}  // namespace hypercsi
