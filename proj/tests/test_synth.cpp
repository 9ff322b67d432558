#include <Eigen/SVD>
#include <cmath>
#include <hypercsi/synth.hpp>

#include "doctest.h"

using namespace hypercsi;
using namespace hypercsi::synth;

namespace {

SceneSpec basic_spec(int m, int l, int n, uint64_t seed) {
    SceneSpec spec;
    spec.n_bands = m;
    spec.n_pixels = l;
    spec.n_endmembers = n;
    spec.dirichlet_gamma = VectorXd::Constant(n, 1.0 / n);
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("dirichlet columns live on the open simplex") {
    Rng rng(1);
    const VectorXd gamma = (VectorXd(3) << 0.4, 1.0, 2.5).finished();
    const MatrixXd s = sample_dirichlet(gamma, 500, rng);
    for (int c = 0; c < 500; ++c) {
        CHECK(std::abs(s.col(c).sum() - 1.0) < 1e-12);
        CHECK(s.col(c).minCoeff() > 0.0);
        CHECK(s.col(c).maxCoeff() < 1.0);
    }
    CHECK_THROWS_AS(sample_dirichlet(VectorXd::Zero(3), 5, rng), InvalidGamma);
}

TEST_CASE("dirichlet sample mean matches the analytic mean") {
    Rng rng(2);
    const int n = 4;
    const int count = 100000;
    const VectorXd gamma = VectorXd::Ones(n);
    const MatrixXd s = sample_dirichlet(gamma, count, rng);
    const VectorXd mean = s.rowwise().mean();
    // Var of one coordinate is (1/N)(1-1/N)/(N+1); three sigma of the sample mean.
    const double sigma = std::sqrt((1.0 / n) * (1.0 - 1.0 / n) / (n + 1) / count);
    for (int i = 0; i < n; ++i) CHECK(std::abs(mean(i) - 1.0 / n) < 3.0 * sigma);
}

TEST_CASE("huge concentration parameters pin samples to the centroid") {
    Rng rng(3);
    const VectorXd gamma = VectorXd::Constant(5, 1e6);
    const MatrixXd s = sample_dirichlet(gamma, 200, rng);
    CHECK((s.array() - 0.2).abs().maxCoeff() < 0.01);
}

TEST_CASE("scene generation respects the purity ceiling") {
    SceneSpec spec = basic_spec(30, 400, 6, 11);
    spec.purity_rho = 0.8;
    const GroundTruth gt = generate_scene(spec);
    CHECK(gt.max_purity <= 0.8);
    CHECK(gt.abundances.colwise().sum().isApproxToConstant(1.0, 1e-9));
    CHECK((gt.noiseless - gt.spectra * gt.abundances).cwiseAbs().maxCoeff() == 0.0);
    CHECK(gt.observed.minCoeff() >= 0.0);
}

TEST_CASE("full purity keeps near-pure pixels around") {
    SceneSpec spec = basic_spec(20, 10000, 4, 13);
    const GroundTruth gt = generate_scene(spec);
    CHECK(gt.max_purity <= 1.0);
    CHECK(gt.max_purity > 0.95);
}

TEST_CASE("noise variance follows the SNR definition") {
    SceneSpec spec = basic_spec(10, 200, 3, 17);
    spec.snr_db = 10.0;
    const GroundTruth gt = generate_scene(spec);

    const double snr_linear = std::pow(10.0, 1.0);
    const double expected =
        gt.noiseless.squaredNorm() / (snr_linear * gt.noiseless.rows() * gt.noiseless.cols());
    CHECK(gt.sigma2 == doctest::Approx(expected).epsilon(1e-12));

    // Worked instance of the formula itself.
    CHECK(100.0 / (std::pow(10.0, 1.0) * 10 * 10) == doctest::Approx(0.1));
}

TEST_CASE("realized noise energy stays near its nominal level") {
    SceneSpec spec = basic_spec(50, 2000, 4, 19);  // 1e5 noise draws
    spec.snr_db = 25.0;
    const GroundTruth gt = generate_scene(spec);
    CHECK(gt.noise_energy_ratio > 0.9);
    CHECK(gt.noise_energy_ratio < 1.1);
    CHECK(gt.realized_snr_db == doctest::Approx(25.0).epsilon(0.05));
}

TEST_CASE("generation is reproducible bit for bit") {
    SceneSpec spec = basic_spec(25, 300, 4, 23);
    spec.purity_rho = 0.9;
    spec.snr_db = 30.0;
    const GroundTruth a = generate_scene(spec);
    const GroundTruth b = generate_scene(spec);
    CHECK(a.spectra == b.spectra);
    CHECK(a.abundances == b.abundances);
    CHECK(a.observed == b.observed);
}

TEST_CASE("parameter validation") {
    SceneSpec spec = basic_spec(20, 100, 4, 29);

    spec.purity_rho = 0.3;  // below 1/sqrt(4)
    CHECK_THROWS_AS(generate_scene(spec), InvalidParameter);

    spec.purity_rho = 1.0;
    spec.dirichlet_gamma = VectorXd::Zero(4);
    CHECK_THROWS_AS(generate_scene(spec), InvalidGamma);

    spec = basic_spec(3, 100, 4, 29);
    CHECK_THROWS_AS(generate_scene(spec), TooFewBands);
    spec = basic_spec(20, 3, 4, 29);
    CHECK_THROWS_AS(generate_scene(spec), TooFewPixels);
}

TEST_CASE("infeasible purity level is reported") {
    SceneSpec spec = basic_spec(10, 100, 2, 31);
    spec.dirichlet_gamma = VectorXd::Constant(2, 0.5);
    spec.purity_rho = 1.0 / std::sqrt(2.0) + 1e-6;
    CHECK_THROWS_AS(generate_scene(spec), PurityInfeasible);
}

TEST_CASE("user spectra are validated") {
    SceneSpec spec = basic_spec(5, 50, 2, 37);

    MatrixXd rank1(5, 2);
    rank1.col(0).setConstant(1.0);
    rank1.col(1).setConstant(2.0);
    CHECK_THROWS_AS(generate_scene(spec, &rank1), RankDeficientSpectra);

    MatrixXd negative(5, 2);
    negative.setOnes();
    negative(0, 0) = -0.5;
    CHECK_THROWS_AS(generate_scene(spec, &negative), InvalidParameter);

    MatrixXd good(5, 2);
    good << 1.0, 0.1,
            0.8, 0.2,
            0.6, 0.4,
            0.4, 0.6,
            0.2, 0.9;
    const GroundTruth gt = generate_scene(spec, &good);
    CHECK(gt.spectra == good);
}

TEST_CASE("smooth spectra are bounded, distinct, and full rank") {
    Rng rng(41);
    const MatrixXd spectra = random_smooth_spectra(64, 5, rng);
    CHECK(spectra.minCoeff() >= 0.01);
    CHECK(spectra.maxCoeff() <= 1.0);
    for (int a = 0; a < 5; ++a) {
        CHECK(spectra.col(a).maxCoeff() - spectra.col(a).minCoeff() > 0.01);
        for (int b = a + 1; b < 5; ++b)
            CHECK((spectra.col(a) - spectra.col(b)).norm() > 1e-3);
    }
    Eigen::JacobiSVD<MatrixXd> svd(spectra);
    CHECK(svd.singularValues()(4) > 1e-3 * svd.singularValues()(0));
}

TEST_CASE("block-sparse maps are valid abundances with spatial structure") {
    SceneSpec spec = basic_spec(20, 3600, 5, 43);
    const GroundTruth gt = generate_abundance_maps(spec, AbundancePattern::kBlockSparse);

    CHECK(gt.abundances.colwise().sum().isApproxToConstant(1.0, 1e-12));
    CHECK(gt.abundances.minCoeff() >= 0.0);

    // Pure pixels from single-material blocks show up as exact ones.
    CHECK(gt.abundances.maxCoeff() == 1.0);

    // Lag-1 autocorrelation along grid rows, averaged over the maps.
    const int side = 60;
    double total = 0.0;
    for (int i = 0; i < 5; ++i) {
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        int count = 0;
        for (int p = 0; p + 1 < 3600; ++p) {
            if ((p + 1) % side == 0) continue;  // row boundary
            const double x = gt.abundances(i, p);
            const double y = gt.abundances(i, p + 1);
            sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
            ++count;
        }
        const double cov = sxy / count - (sx / count) * (sy / count);
        const double vx = sxx / count - (sx / count) * (sx / count);
        const double vy = syy / count - (sy / count) * (sy / count);
        total += cov / std::sqrt(vx * vy);
    }
    CHECK(total / 5 > 0.5);
}
