#include <algorithm>
#include <hypercsi/oracle.hpp>
#include <hypercsi/rng.hpp>
#include <hypercsi/spa.hpp>

#include "doctest.h"
#include "test_support.hpp"

using namespace hypercsi;

namespace {

dimred::DRDataset as_dr(MatrixXd pixels) {
    dimred::DRDataset dr;
    dr.pixels = std::move(pixels);
    return dr;
}

MatrixXd simplex_cloud(const geometry::SimplexVertices& vertices, int interior, Rng& rng) {
    const int n = static_cast<int>(vertices.cols());
    MatrixXd pixels(vertices.rows(), n + interior);
    pixels.leftCols(n) = vertices;
    for (int p = 0; p < interior; ++p)
        pixels.col(n + p) = test_support::interior_point(vertices, rng);
    return pixels;
}

}  // namespace

TEST_CASE("exactly N candidates are all selected") {
    Rng rng(3);
    const auto vertices = test_support::random_simplex(4, rng);
    const auto picks = spa::select_purest(as_dr(vertices), 4);
    std::vector<int> sorted = picks;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("vertices win over interior points") {
    Rng rng(5);
    geometry::SimplexVertices vertices(2, 3);
    vertices << 0, 1, 0,
                0, 0, 1;

    SUBCASE("large cloud") {
        const auto pixels = simplex_cloud(vertices, 100, rng);
        auto picks = spa::select_purest(as_dr(pixels), 3);
        std::sort(picks.begin(), picks.end());
        CHECK(picks == std::vector<int>{0, 1, 2});
    }

    SUBCASE("small cloud agrees with the exhaustive maximum-volume subset") {
        const auto pixels = simplex_cloud(vertices, 20, rng);
        auto picks = spa::select_purest(as_dr(pixels), 3);
        std::sort(picks.begin(), picks.end());
        auto exhaustive = oracle::max_volume_subset(pixels, 3);
        std::sort(exhaustive.begin(), exhaustive.end());
        CHECK(picks == exhaustive);
    }
}

TEST_CASE("duplicated pixels do not change the selected spectra") {
    Rng rng(7);
    const auto vertices = test_support::random_simplex(4, rng);
    const MatrixXd pixels = simplex_cloud(vertices, 40, rng);

    MatrixXd doubled(pixels.rows(), pixels.cols() * 2);
    doubled << pixels, pixels;

    const auto single = spa::select_purest(as_dr(pixels), 4);
    const auto dup = spa::select_purest(as_dr(doubled), 4);
    for (size_t k = 0; k < single.size(); ++k)
        CHECK((pixels.col(single[k]) - doubled.col(dup[k])).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("greedy volume stays within half of the exhaustive optimum") {
    Rng rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(2));
        MatrixXd pixels(n - 1, 20);
        for (int p = 0; p < 20; ++p)
            for (int r = 0; r < n - 1; ++r) pixels(r, p) = rng.normal();

        std::vector<int> greedy;
        try {
            greedy = spa::select_purest(as_dr(pixels), n);
        } catch (const DegenerateData&) {
            continue;
        }
        const auto best = oracle::max_volume_subset(pixels, n);

        auto volume_of = [&](const std::vector<int>& idx) {
            geometry::SimplexVertices v(n - 1, n);
            for (int c = 0; c < n; ++c) v.col(c) = pixels.col(idx[static_cast<size_t>(c)]);
            return geometry::simplex_volume(v);
        };
        CHECK(volume_of(greedy) >= 0.5 * volume_of(best));
    }
}

TEST_CASE("degenerate data is reported") {
    MatrixXd collinear(2, 5);
    collinear << 0, 1, 2, 3, 4,
                 0, 1, 2, 3, 4;
    CHECK_THROWS_AS(spa::select_purest(as_dr(collinear), 3), DegenerateData);

    MatrixXd tiny(2, 2);
    tiny.setZero();
    CHECK_THROWS_AS(spa::select_purest(as_dr(tiny), 3), TooFewPixels);
}

TEST_CASE("selection is deterministic") {
    Rng rng(13);
    const auto vertices = test_support::random_simplex(5, rng);
    const MatrixXd pixels = simplex_cloud(vertices, 200, rng);
    CHECK(spa::select_purest(as_dr(pixels), 5) == spa::select_purest(as_dr(pixels), 5));
    CHECK(spa::select_purest(as_dr(pixels), 5) == spa::select_purest(as_dr(pixels), 5, 4));
}
