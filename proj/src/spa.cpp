#include "hypercsi/spa.hpp"

#include "hypercsi/geometry.hpp"
#include "hypercsi/kernels.hpp"

namespace hypercsi::spa {

std::vector<int> select_purest(const dimred::DRDataset& dr, int n_endmembers,
                               int threads) {
    const auto l = dr.n_pixels();
    if (n_endmembers < 1) throw InvalidParameter("need at least one endmember");
    if (l < n_endmembers)
        throw TooFewPixels("pixel count " + std::to_string(l) + " below endmember count " +
                           std::to_string(n_endmembers));

    // Homogeneous coordinate: linear independence here is affine independence
    // in the DR space, and the first pick stays well defined on mean-centered
    // data.
    MatrixXd y(dr.dim() + 1, l);
    y.topRows(dr.dim()) = dr.pixels;
    y.bottomRows(1).setOnes();

    std::vector<int> picks;
    picks.reserve(n_endmembers);
    double scale = 0.0;
    for (int t = 0; t < n_endmembers; ++t) {
        const int idx = kernels::argmax_sqnorm(y, threads);
        const double sq = y.col(idx).squaredNorm();
        if (t == 0) scale = sq;
        if (sq <= 1e-20 * scale)
            throw DegenerateData("fewer than " + std::to_string(n_endmembers) +
                                 " affinely independent pixels");
        const VectorXd u = y.col(idx);
        picks.push_back(idx);
        kernels::deflate(y, u, threads);
    }
    return picks;
}

}  // namespace hypercsi::spa
