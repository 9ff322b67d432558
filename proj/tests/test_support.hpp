#pragma once

#include <hypercsi/geometry.hpp>
#include <hypercsi/rng.hpp>

namespace test_support {

// Gaussian vertices redrawn until the simplex is comfortably nondegenerate.
inline hypercsi::geometry::SimplexVertices random_simplex(int n, hypercsi::Rng& rng,
                                                          double min_volume = 1e-3) {
    hypercsi::geometry::SimplexVertices vertices(n - 1, n);
    for (;;) {
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n - 1; ++r) vertices(r, c) = rng.normal();
        if (hypercsi::geometry::simplex_volume(vertices) >= min_volume) return vertices;
    }
}

// Strictly interior point with Dirichlet(1,...,1) barycentric weights.
inline hypercsi::VectorXd interior_point(const hypercsi::geometry::SimplexVertices& vertices,
                                         hypercsi::Rng& rng) {
    const int n = static_cast<int>(vertices.cols());
    hypercsi::VectorXd w(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        w(i) = rng.gamma(1.0);
        sum += w(i);
    }
    w /= sum;
    return vertices * w;
}

// Angle between directions, ignoring length; half-angle form stays accurate
// for nearly parallel vectors.
inline double direction_angle(const hypercsi::VectorXd& a, const hypercsi::VectorXd& b) {
    const hypercsi::VectorXd ua = a / a.norm();
    const hypercsi::VectorXd ub = b / b.norm();
    return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

}  // namespace test_support
