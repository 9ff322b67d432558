#pragma once

#include <vector>

#include "hypercsi/types.hpp"

namespace hypercsi::geometry {

// Relative singular-value ratio below which a system counts as rank deficient.
inline constexpr double kRankTol = 1e-10;

// The set { x : normal.dot(x) == constant }. The normal must be nonzero; it is
// kept unnormalized, callers divide by its norm where a formula requires it.
struct Hyperplane {
    VectorXd normal;
    double constant = 0.0;
};

// N vertices of a simplest simplex in R^{N-1}, one vertex per column.
using SimplexVertices = MatrixXd;

// Outward normal of the facet opposite vertex i (0-based): the difference
// vector toward the facet is projected onto the orthogonal complement of that
// facet's span. The result satisfies b.dot(v_i) < b.dot(v_k) for all k != i.
// The reference vertex j defaults to the smallest index != i; the direction
// does not depend on that choice.
VectorXd normal_from_vertices(const SimplexVertices& vertices, int i);
VectorXd normal_from_vertices(const SimplexVertices& vertices, int i, int j);

// Same projector applied to N-1 facet points of a simplex whose remaining
// vertex is replaced by the origin (inserted at position i). Recovers the
// facet normal up to positive scale when the points lie on the facet and the
// origin is interior (e.g. the mean of mean-removed data).
VectorXd normal_from_points_with_origin(const MatrixXd& points, int i);

// One hyperplane per facet: normal from normal_from_vertices, constant from
// any vertex on the facet.
std::vector<Hyperplane> hyperplanes_from_vertices(const SimplexVertices& vertices);

// Inverts the facet systems: vertex i solves B_{-i} x = h_{-i}, where B_{-i}
// stacks all normals except the i-th as rows. Throws SingularFacetSystem with
// the offending index if a system is rank deficient.
SimplexVertices reconstruct_vertices(const std::vector<Hyperplane>& planes);

// |det [v_1 ... v_N; 1 ... 1]| / (N-1)!. Zero iff the vertices are affinely
// dependent; degenerate input is not an error.
double simplex_volume(const SimplexVertices& vertices);

// |constant - normal.dot(p)| / ||normal||
double point_to_hyperplane_distance(const VectorXd& p, const Hyperplane& plane);

// True iff the difference matrix of the points (columns, differences taken
// against the last point) has full rank k-1 with smallest singular value
// strictly above tol. A single point is affinely independent.
bool is_affinely_independent(const MatrixXd& points, double tol = kRankTol);

}  // namespace hypercsi::geometry
