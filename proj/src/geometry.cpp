#include "hypercsi/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace hypercsi::geometry {

namespace {

// Drops columns i and j (i != j) from an (N-1) x N matrix.
MatrixXd drop_two_columns(const MatrixXd& m, int i, int j) {
    const auto n = m.cols();
    MatrixXd out(m.rows(), n - 2);
    Eigen::Index c = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        out.col(c++) = m.col(k);
    }
    return out;
}

}  // namespace

VectorXd normal_from_vertices(const SimplexVertices& vertices, int i) {
    const int j = (i == 0) ? 1 : 0;
    return normal_from_vertices(vertices, i, j);
}

VectorXd normal_from_vertices(const SimplexVertices& vertices, int i, int j) {
    const int n = static_cast<int>(vertices.cols());
    if (n < 2 || vertices.rows() != n - 1)
        throw DimensionMismatch("simplex must have N vertices of dimension N-1");
    if (i < 0 || i >= n || j < 0 || j >= n || i == j)
        throw InvalidParameter("vertex indices out of range");

    const VectorXd diff = vertices.col(j) - vertices.col(i);
    if (n == 2) {
        if (diff.norm() == 0.0) throw DegenerateSimplex();
        return diff;  // facet is a single point; no span to remove
    }

    // P holds the in-facet directions relative to vertex j.
    MatrixXd p = drop_two_columns(vertices, i, j);
    p.colwise() -= vertices.col(j);

    Eigen::JacobiSVD<MatrixXd> svd(p, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= kRankTol * sv(0))
        throw DegenerateSimplex();

    const MatrixXd& u = svd.matrixU();
    VectorXd b = diff - u * (u.transpose() * diff);
    // A vanishing projection means the step toward vertex i stays inside the
    // facet span: the vertex set is affinely dependent.
    if (b.norm() <= kRankTol * diff.norm()) throw DegenerateSimplex();
    return b;
}

VectorXd normal_from_points_with_origin(const MatrixXd& points, int i) {
    const int n = static_cast<int>(points.cols()) + 1;
    if (points.rows() != n - 1)
        throw DimensionMismatch("need N-1 points of dimension N-1");
    if (i < 0 || i >= n)
        throw InvalidParameter("insertion index out of range");

    SimplexVertices augmented(n - 1, n);
    augmented.leftCols(i) = points.leftCols(i);
    augmented.col(i).setZero();
    augmented.rightCols(n - 1 - i) = points.rightCols(n - 1 - i);

    VectorXd b = normal_from_vertices(augmented, i);
    const double scale = points.colwise().norm().maxCoeff();
    if (b.norm() <= kRankTol * std::max(scale, 1.0))
        throw DegenerateSimplex("origin lies in the affine hull of the points");
    return b;
}

std::vector<Hyperplane> hyperplanes_from_vertices(const SimplexVertices& vertices) {
    const int n = static_cast<int>(vertices.cols());
    std::vector<Hyperplane> planes;
    planes.reserve(n);
    for (int i = 0; i < n; ++i) {
        VectorXd b = normal_from_vertices(vertices, i);
        const int on_facet = (i == 0) ? 1 : 0;
        planes.push_back({b, b.dot(vertices.col(on_facet))});
    }
    return planes;
}

SimplexVertices reconstruct_vertices(const std::vector<Hyperplane>& planes) {
    const int n = static_cast<int>(planes.size());
    if (n < 2) throw InvalidParameter("need at least two hyperplanes");
    const auto dim = planes[0].normal.size();
    if (dim != n - 1)
        throw DimensionMismatch("need N hyperplanes in dimension N-1");

    SimplexVertices vertices(dim, n);
    MatrixXd system(dim, dim);
    VectorXd rhs(dim);
    for (int i = 0; i < n; ++i) {
        Eigen::Index r = 0;
        for (int k = 0; k < n; ++k) {
            if (k == i) continue;
            if (planes[k].normal.size() != dim)
                throw DimensionMismatch("hyperplane dimensions disagree");
            system.row(r) = planes[k].normal.transpose();
            rhs(r) = planes[k].constant;
            ++r;
        }
        Eigen::JacobiSVD<MatrixXd> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= kRankTol * sv(0))
            throw SingularFacetSystem(i);
        vertices.col(i) = svd.solve(rhs);
    }
    return vertices;
}

double simplex_volume(const SimplexVertices& vertices) {
    const int n = static_cast<int>(vertices.cols());
    if (n < 1 || vertices.rows() != n - 1)
        throw DimensionMismatch("simplex must have N vertices of dimension N-1");
    MatrixXd m(n, n);
    m.topRows(n - 1) = vertices;
    m.bottomRows(1).setOnes();
    double factorial = 1.0;
    for (int k = 2; k < n; ++k) factorial *= k;
    return std::abs(m.determinant()) / factorial;
}

double point_to_hyperplane_distance(const VectorXd& p, const Hyperplane& plane) {
    if (p.size() != plane.normal.size())
        throw DimensionMismatch("point and normal dimensions disagree");
    const double norm = plane.normal.norm();
    if (norm == 0.0) throw ZeroNormal();
    return std::abs(plane.constant - plane.normal.dot(p)) / norm;
}

bool is_affinely_independent(const MatrixXd& points, double tol) {
    const auto k = points.cols();
    if (k < 1) throw InvalidParameter("need at least one point");
    if (k == 1) return true;
    if (k - 1 > points.rows()) return false;

    MatrixXd diffs = points.leftCols(k - 1);
    diffs.colwise() -= points.col(k - 1);
    Eigen::JacobiSVD<MatrixXd> svd(diffs);
    return svd.singularValues()(k - 2) > tol;
}

}  // namespace hypercsi::geometry
