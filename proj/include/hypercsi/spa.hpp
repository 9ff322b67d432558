#pragma once

#include <vector>

#include "hypercsi/dimred.hpp"

namespace hypercsi::spa {

// Successive projection over the DR pixels augmented with a constant 1
// coordinate: repeatedly take the pixel of largest residual norm (ties to the
// smallest index), then project every pixel onto the orthogonal complement of
// the pick. Returns the N picks in selection order; they are affinely
// independent whenever the data's affine hull has dimension >= N-1.
std::vector<int> select_purest(const dimred::DRDataset& dr, int n_endmembers,
                               int threads = 1);

}  // namespace hypercsi::spa
