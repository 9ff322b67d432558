#include "hypercsi/synth.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace hypercsi::synth {

namespace {

constexpr double kSpectraRankTol = 1e-3;  // full-column-rank threshold
constexpr int kPoolCapFactor = 200;       // candidate draws per requested pixel

bool full_column_rank(const MatrixXd& spectra) {
    Eigen::JacobiSVD<MatrixXd> svd(spectra);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) > kSpectraRankTol * sv(0);
}

VectorXd dirichlet_column(const VectorXd& gamma, Rng& rng) {
    const auto n = gamma.size();
    VectorXd draw(n);
    for (;;) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            draw(i) = rng.gamma(gamma(i));
            sum += draw(i);
        }
        if (sum <= 0.0) continue;
        draw /= sum;
        if ((draw.array() > 0.0).all()) return draw;
    }
}

void add_noise_and_clip(GroundTruth& gt, const SceneSpec& spec, Rng& rng) {
    gt.observed = gt.noiseless;
    if (!spec.snr_db) return;

    const double snr_linear = std::pow(10.0, *spec.snr_db / 10.0);
    const auto m = gt.noiseless.rows();
    const auto l = gt.noiseless.cols();
    gt.sigma2 = gt.noiseless.squaredNorm() / (snr_linear * m * l);

    const double sigma = std::sqrt(gt.sigma2);
    double noise_energy = 0.0;
    for (Eigen::Index n = 0; n < l; ++n) {
        for (Eigen::Index b = 0; b < m; ++b) {
            const double w = sigma * rng.normal();
            noise_energy += w * w;
            gt.observed(b, n) = std::max(0.0, gt.noiseless(b, n) + w);
        }
    }
    gt.noise_energy_ratio = noise_energy / (gt.sigma2 * m * l);
    const double disturbance = (gt.observed - gt.noiseless).squaredNorm();
    gt.realized_snr_db = 10.0 * std::log10(gt.noiseless.squaredNorm() / disturbance);
}

MatrixXd resolve_spectra(const SceneSpec& spec, const MatrixXd* user_spectra, Rng& rng) {
    if (!user_spectra) return random_smooth_spectra(spec.n_bands, spec.n_endmembers, rng);

    if (user_spectra->rows() != spec.n_bands || user_spectra->cols() != spec.n_endmembers)
        throw ShapeMismatch("spectra matrix must be n_bands x n_endmembers");
    if ((user_spectra->array() < 0.0).any())
        throw InvalidParameter("spectra must be nonnegative");
    if (!full_column_rank(*user_spectra))
        throw RankDeficientSpectra("supplied spectra are not full column rank");
    return *user_spectra;
}

MatrixXd purity_filtered_abundances(const SceneSpec& spec, Rng& rng) {
    const int l = spec.n_pixels;
    MatrixXd s(spec.n_endmembers, l);
    if (spec.purity_rho >= 1.0) {
        for (int n = 0; n < l; ++n) s.col(n) = dirichlet_column(spec.dirichlet_gamma, rng);
        return s;
    }
    const long cap = static_cast<long>(kPoolCapFactor) * l;
    int accepted = 0;
    for (long draws = 0; draws < cap && accepted < l; ++draws) {
        VectorXd column = dirichlet_column(spec.dirichlet_gamma, rng);
        if (column.norm() <= spec.purity_rho) s.col(accepted++) = column;
    }
    if (accepted < l)
        throw PurityInfeasible("purity level " + std::to_string(spec.purity_rho) +
                               " accepted only " + std::to_string(accepted) + " of " +
                               std::to_string(l) + " pixels within the candidate cap");
    return s;
}

MatrixXd block_sparse_abundances(const SceneSpec& spec, Rng& rng) {
    const int l = spec.n_pixels;
    const int n = spec.n_endmembers;
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(l))));
    const int block = std::max(4, side / 8);
    const int blocks_per_side = (side + block - 1) / block;

    struct BlockPlan {
        int first = 0;
        int second = 0;   // == first for single-material blocks
        bool horizontal = true;
        double lambda0 = 1.0;
        double lambda1 = 1.0;
    };
    std::vector<BlockPlan> plans(static_cast<size_t>(blocks_per_side) * blocks_per_side);
    for (auto& plan : plans) {
        plan.first = static_cast<int>(rng.below(n));
        if (rng.below(2) == 1) {  // two active materials
            plan.second = static_cast<int>(rng.below(n - 1));
            if (plan.second >= plan.first) ++plan.second;
            plan.horizontal = rng.below(2) == 1;
            plan.lambda0 = rng.uniform();
            plan.lambda1 = rng.uniform();
        } else {
            plan.second = plan.first;
        }
    }

    MatrixXd s = MatrixXd::Zero(n, l);
    for (int p = 0; p < l; ++p) {
        const int row = p / side;
        const int col = p % side;
        const auto& plan =
            plans[static_cast<size_t>(row / block) * blocks_per_side + col / block];
        if (plan.second == plan.first) {
            s(plan.first, p) = 1.0;
            continue;
        }
        const int local = plan.horizontal ? col % block : row % block;
        const double t = block > 1 ? static_cast<double>(local) / (block - 1) : 0.0;
        const double lambda = plan.lambda0 + (plan.lambda1 - plan.lambda0) * t;
        s(plan.first, p) = lambda;
        s(plan.second, p) = 1.0 - lambda;
    }
    return s;
}

}  // namespace

void SceneSpec::validate() const {
    if (n_endmembers < 2) throw InvalidParameter("need at least two endmembers");
    if (n_pixels < n_endmembers)
        throw TooFewPixels("pixel count below endmember count");
    if (n_bands < n_endmembers)
        throw TooFewBands("band count below endmember count");
    if (dirichlet_gamma.size() != n_endmembers || (dirichlet_gamma.array() <= 0.0).any())
        throw InvalidGamma();
    const double lower = 1.0 / std::sqrt(static_cast<double>(n_endmembers));
    if (!(purity_rho > lower && purity_rho <= 1.0))
        throw InvalidParameter("purity level must lie in (1/sqrt(N), 1], got " +
                               std::to_string(purity_rho));
    if (snr_db && !std::isfinite(*snr_db))
        throw InvalidParameter("SNR must be finite; omit it for a noiseless scene");
}

MatrixXd sample_dirichlet(const VectorXd& gamma, int count, Rng& rng) {
    if (gamma.size() < 1 || (gamma.array() <= 0.0).any()) throw InvalidGamma();
    if (count < 0) throw InvalidParameter("sample count must be nonnegative");
    MatrixXd s(gamma.size(), count);
    for (int n = 0; n < count; ++n) s.col(n) = dirichlet_column(gamma, rng);
    return s;
}

namespace {

// Piecewise-linear curve with the given knot count, resampled to n_bands.
VectorXd piecewise_linear(int n_bands, int knots, double lo, double hi, Rng& rng) {
    VectorXd pos(knots);
    VectorXd val(knots);
    pos(0) = 0.0;
    pos(knots - 1) = 1.0;
    for (int k = 1; k < knots - 1; ++k) pos(k) = rng.uniform();
    std::sort(pos.data() + 1, pos.data() + knots - 1);
    for (int k = 0; k < knots; ++k) val(k) = lo + (hi - lo) * rng.uniform();

    VectorXd curve(n_bands);
    for (int b = 0; b < n_bands; ++b) {
        const double u = static_cast<double>(b) / (n_bands - 1);
        int k = 0;
        while (k + 2 < knots && pos(k + 1) < u) ++k;
        const double span = pos(k + 1) - pos(k);
        const double w = span > 0.0 ? (u - pos(k)) / span : 0.0;
        curve(b) = val(k) + (val(k + 1) - val(k)) * w;
    }
    return curve;
}

}  // namespace

MatrixXd random_smooth_spectra(int n_bands, int n_endmembers, Rng& rng) {
    if (n_bands < 2 || n_endmembers < 1)
        throw InvalidParameter("need at least two bands and one endmember");

    // Reflectance-like curves: a shared smooth continuum, a bounded broad
    // feature per endmember, and two narrow absorption dips that pull the
    // curve toward its floor. The dip bands near zero are what lets the
    // nonnegativity shift track noise expansion, as with library spectra.
    MatrixXd spectra(n_bands, n_endmembers);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const VectorXd continuum =
            piecewise_linear(n_bands, 4 + static_cast<int>(rng.below(5)), 0.40, 0.80, rng);
        for (int e = 0; e < n_endmembers; ++e) {
            const int knots = 3 + static_cast<int>(rng.below(6));
            VectorXd curve = continuum + piecewise_linear(n_bands, knots, -0.08, 0.08, rng);
            for (int dip = 0; dip < 2; ++dip) {
                const double center = 0.05 + 0.9 * rng.uniform();
                const double width = 0.02 + 0.05 * rng.uniform();
                const double depth = 0.4 + 0.5 * rng.uniform();
                for (int b = 0; b < n_bands; ++b) {
                    const double u = static_cast<double>(b) / (n_bands - 1);
                    const double t = 1.0 - std::abs(u - center) / width;
                    if (t > 0.0) curve(b) *= 1.0 - depth * t;
                }
            }
            spectra.col(e) = curve.cwiseMax(0.01).cwiseMin(1.0);
        }
        if (full_column_rank(spectra)) return spectra;
    }
    throw RankDeficientSpectra("could not draw full-rank smooth spectra");
}

GroundTruth generate_scene(const SceneSpec& spec, const MatrixXd* user_spectra) {
    return generate_abundance_maps(spec, AbundancePattern::kIidDirichlet, user_spectra);
}

GroundTruth generate_abundance_maps(const SceneSpec& spec, AbundancePattern pattern,
                                    const MatrixXd* user_spectra) {
    spec.validate();
    Rng rng(spec.seed);

    GroundTruth gt;
    gt.spectra = resolve_spectra(spec, user_spectra, rng);
    gt.abundances = pattern == AbundancePattern::kBlockSparse
                        ? block_sparse_abundances(spec, rng)
                        : purity_filtered_abundances(spec, rng);
    gt.noiseless = gt.spectra * gt.abundances;
    gt.max_purity = gt.abundances.colwise().norm().maxCoeff();
    add_noise_and_clip(gt, spec, rng);
    return gt;
}

}  // namespace hypercsi::synth
