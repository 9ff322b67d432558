#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace hypercsi {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Base class for all library errors. Subclasses exist so callers can
// distinguish failure modes without parsing messages.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- geometry -------------------------------------------------------------

struct DegenerateSimplex : Error {
    DegenerateSimplex() : Error("vertex set is affinely dependent within tolerance") {}
    explicit DegenerateSimplex(const std::string& what) : Error(what) {}
};

struct SingularFacetSystem : Error {
    int facet;
    explicit SingularFacetSystem(int facet_index)
        : Error("facet system B_-" + std::to_string(facet_index + 1) + " is singular"),
          facet(facet_index) {}
};

struct ZeroNormal : Error {
    ZeroNormal() : Error("hyperplane normal has zero norm") {}
};

// --- shapes and sizes -----------------------------------------------------

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct TooFewPixels : Error {
    using Error::Error;
};

struct TooFewBands : Error {
    using Error::Error;
};

struct TooManyPixels : Error {
    using Error::Error;
};

// --- purest-pixel search and hyperplane estimation -------------------------

struct DegenerateData : Error {
    using Error::Error;
};

struct DuplicatePurestPixels : Error {
    DuplicatePurestPixels() : Error("two purest pixels coincide; search radius would be zero") {}
};

struct EmptyRegion : Error {
    int facet;
    int region;
    EmptyRegion(int facet_index, int region_index)
        : Error("search region " + std::to_string(region_index + 1) + " for facet " +
                std::to_string(facet_index + 1) + " contains no pixels"),
          facet(facet_index), region(region_index) {}
};

struct AffinelyDependentActiveSet : Error {
    int facet;
    explicit AffinelyDependentActiveSet(int facet_index)
        : Error("active pixels for facet " + std::to_string(facet_index + 1) +
                " are affinely dependent"),
          facet(facet_index) {}
};

struct DegenerateDenominator : Error {
    int facet;
    explicit DegenerateDenominator(int facet_index)
        : Error("abundance denominator for facet " + std::to_string(facet_index + 1) +
                " is not positive"),
          facet(facet_index) {}
};

// --- synthetic scenes -------------------------------------------------------

struct InvalidGamma : Error {
    InvalidGamma() : Error("Dirichlet parameter vector must be strictly positive") {}
};

struct PurityInfeasible : Error {
    using Error::Error;
};

struct RankDeficientSpectra : Error {
    using Error::Error;
};

// --- metrics and oracle -----------------------------------------------------

struct ZeroVector : Error {
    ZeroVector() : Error("spectral angle undefined for a zero vector") {}
};

struct ZeroMap : Error {
    ZeroMap() : Error("abundance map column is identically zero") {}
};

struct NotEnclosing : Error {
    using Error::Error;
};

// --- parameters --------------------------------------------------------------

struct InvalidParameter : Error {
    using Error::Error;
};

}  // namespace hypercsi
