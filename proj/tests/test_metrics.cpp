#include <algorithm>
#include <hypercsi/metrics.hpp>
#include <hypercsi/rng.hpp>
#include <numbers>
#include <numeric>

#include "doctest.h"

using namespace hypercsi;
using namespace hypercsi::metrics;

namespace {

double brute_force_assignment(const MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += cost(i, perm[i]);
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

MatrixXd random_cost(int n, Rng& rng) {
    MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform();
    return cost;
}

}  // namespace

TEST_CASE("spectral angle basics") {
    const VectorXd a = (VectorXd(3) << 1, 2, 3).finished();
    CHECK(spectral_angle(a, a) == doctest::Approx(0.0));
    CHECK(spectral_angle(a, 2 * a) == doctest::Approx(0.0));

    const VectorXd ex = (VectorXd(2) << 1, 0).finished();
    const VectorXd ey = (VectorXd(2) << 0, 1).finished();
    CHECK(spectral_angle(ex, ey) == doctest::Approx(std::numbers::pi / 2));

    CHECK_THROWS_AS(spectral_angle(VectorXd::Zero(3), a), ZeroVector);
}

TEST_CASE("assignment on structured costs") {
    MatrixXd identity_cheap = MatrixXd::Ones(4, 4);
    identity_cheap.diagonal().setZero();
    CHECK(match_permutation(identity_cheap) == std::vector<int>{0, 1, 2, 3});

    MatrixXd reversal_cheap = MatrixXd::Ones(4, 4);
    for (int i = 0; i < 4; ++i) reversal_cheap(i, 3 - i) = 0.0;
    CHECK(match_permutation(reversal_cheap) == std::vector<int>{3, 2, 1, 0});
}

TEST_CASE("assignment equals brute force on random costs") {
    Rng rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const MatrixXd cost = random_cost(5, rng);
        const auto perm = match_permutation(cost);
        double total = 0.0;
        for (int i = 0; i < 5; ++i) total += cost(i, perm[i]);
        CHECK(total == doctest::Approx(brute_force_assignment(cost)).epsilon(1e-12));
    }
    for (int n : {2, 3, 6, 8}) {
        const MatrixXd cost = random_cost(n, rng);
        const auto perm = match_permutation(cost);
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += cost(i, perm[i]);
        CHECK(total == doctest::Approx(brute_force_assignment(cost)).epsilon(1e-12));
    }
}

TEST_CASE("rms spectral angle error with matching") {
    Rng rng(73);
    MatrixXd spectra(6, 4);
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 6; ++r) spectra(r, c) = rng.uniform() + 0.05;

    CHECK(phi_en(spectra, spectra) == doctest::Approx(0.0));

    // Permuted and positively rescaled copies score zero.
    MatrixXd shuffled(6, 4);
    const int perm[4] = {2, 0, 3, 1};
    for (int c = 0; c < 4; ++c) shuffled.col(c) = spectra.col(perm[c]) * (0.5 + rng.uniform());
    CHECK(phi_en(spectra, shuffled) < 1e-10);

    CHECK(phi_en(spectra, shuffled) == doctest::Approx(phi_en(shuffled, spectra)).epsilon(1e-12));

    CHECK_THROWS_AS(phi_en(spectra, MatrixXd::Ones(6, 3)), ShapeMismatch);
}

TEST_CASE("two-endmember matching picks the cheaper permutation") {
    const double ten = 10.0 * std::numbers::pi / 180.0;
    MatrixXd truth(2, 2);
    truth << 1, 0,
             0, 1;
    MatrixXd est(2, 2);
    est << std::cos(ten), std::sin(ten),
           std::sin(ten), std::cos(ten);
    // Identity matching costs 10 degrees per column, the swap costs 80.
    CHECK(phi_en(truth, est) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("abundance map angle error") {
    Rng rng(79);
    MatrixXd maps(50, 3);
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 50; ++r) maps(r, c) = rng.uniform();

    CHECK(phi_ab(maps, maps) == doctest::Approx(0.0));

    MatrixXd swapped = maps;
    swapped.col(0).swap(swapped.col(2));
    CHECK(phi_ab(maps, swapped) < 1e-10);

    MatrixXd with_zero = maps;
    with_zero.col(1).setZero();
    CHECK_THROWS_AS(phi_ab(maps, with_zero), ZeroMap);
}

TEST_CASE("match report carries the permutation and per-column angles") {
    Rng rng(83);
    MatrixXd spectra(8, 3);
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 8; ++r) spectra(r, c) = rng.uniform() + 0.1;
    MatrixXd rolled(8, 3);
    for (int c = 0; c < 3; ++c) rolled.col(c) = spectra.col((c + 1) % 3);

    const MatchReport report = match_spectra(spectra, rolled);
    CHECK(report.permutation == std::vector<int>{2, 0, 1});
    CHECK(report.angles_deg.maxCoeff() < 1e-10);
    CHECK(report.rms_deg < 1e-10);
}
