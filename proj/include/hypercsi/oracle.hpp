#pragma once

#include <vector>

#include "hypercsi/geometry.hpp"
#include "hypercsi/rng.hpp"

namespace hypercsi::oracle {

// Exact fully-constrained least squares by enumerating the 2^N - 1 supports:
// on each face the equality-constrained problem is solved in closed form and
// the feasible minimum is kept. Intended for N <= 12.
VectorXd fcls_solve(const VectorXd& dr_pixel, const geometry::SimplexVertices& dr_vertices);

// Exact maximizer of simplex_volume over all N-subsets of the pixel columns,
// ties resolved to the lexicographically smallest index set. Combinatorial,
// so at most 25 pixels.
std::vector<int> max_volume_subset(const MatrixXd& dr_pixels, int n_subset);

// Falsification probe for local volume minimality: returns false as soon as a
// random enclosure-preserving perturbation of the candidate has smaller
// volume, true if none of the trials finds one. Not a proof.
bool min_volume_check(const MatrixXd& dr_pixels, const geometry::SimplexVertices& candidate,
                      int trials, Rng& rng);

}  // namespace hypercsi::oracle
