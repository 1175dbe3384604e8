#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "expframe/matrix_density.hpp"
#include "expframe/point_measure.hpp"

namespace expframe {

/// Union of disjoint closed cubes center +- side/2 (1-D intervals).
class CubeUnion {
public:
    CubeUnion(std::vector<double> centers, double side);
    const std::vector<double>& centers() const { return centers_; }
    double side() const { return side_; }
    double measure() const { return side_ * static_cast<double>(centers_.size()); }

private:
    std::vector<double> centers_;
    double side_;
};

struct FrameBoundEstimate {
    double Aeps = 0.0;  // smallest Rayleigh quotient of the discretized form
    double Beps = 0.0;  // largest
    int gridPerCube = 0;
    double truncRadius = 0.0;
    std::size_t matrixSize = 0;
    std::size_t atomsUsed = 0;
    std::size_t atomsDroppedByBand = 0;  // outside the grid's resolvable band
    Interval band{0.0, 0.0};             // half-open [band.lo, band.hi)
    double hermitianDefect = 0.0;
    double psdDefect = 0.0;
    bool truncBelowDefault = false;  // truncRadius < 50/eps
    bool bandBelowTrunc = false;     // resolvable band narrower than the data
    bool besselOnly = false;
};

struct QuadraticFormResult {
    Eigen::MatrixXcd h;
    std::size_t atomsUsed = 0;
    std::size_t atomsDropped = 0;
    Interval band{0.0, 0.0};
    double hermitianDefect = 0.0;
};

/// Midpoint-collocation discretization of f -> integral |f^(lambda)|^2 dmu on
/// L^2(Omega): grid points are subcell midpoints, H_pq = dt * S(t_p - t_q) with
/// S(tau) = sum_k w_k e^{-2 pi i lambda_k tau}.  Atoms outside the grid's
/// resolvable frequency band (width gridPerCube/side, centered on the extent
/// midpoint) are excluded: collocation cannot represent them and they would
/// alias onto in-band frequencies.
QuadraticFormResult frameQuadraticForm(const PointMeasure& mu, const CubeUnion& omega,
                                       int gridPerCube);

/// Optimal frame/Bessel bounds of the discretized problem: extremal
/// eigenvalues of H.  truncRadius <= 0 selects the default 50/side.
FrameBoundEstimate frameBounds(const PointMeasure& mu, const CubeUnion& omega, int gridPerCube,
                               double truncRadius = 0.0, bool besselOnly = false);

struct EpsSweepRow {
    double eps = 0.0;
    FrameBoundEstimate bounds;
};

struct EpsSweepResult {
    std::vector<EpsSweepRow> rows;
    double DminusN = 0.0;
    double DplusN = 0.0;
    bool pass = false;
    double tolerance = 0.0;
};

/// Frame bounds along a decreasing epsilon ladder, with the matrix-density
/// targets (D-_N, D+_N) computed on the same measure and nodes; PASS when the
/// gaps |B(eps)-D+| and |A(eps)-D-| are non-increasing along the ladder and the
/// final gaps are within the tolerance.
EpsSweepResult epsilonSweep(const PointMeasure& mu, const std::vector<double>& centers,
                            const std::vector<double>& epsLadder, int gridPerCube,
                            double truncRadius = 0.0, double tolerance = 0.0,
                            const std::vector<double>& densityLadder = {});

/// 2-D variant: square cubes, grid x grid midpoints per cube.
class CubeUnion2 {
public:
    CubeUnion2(std::vector<std::array<double, 2>> centers, double side);
    const std::vector<std::array<double, 2>>& centers() const { return centers_; }
    double side() const { return side_; }

private:
    std::vector<std::array<double, 2>> centers_;
    double side_;
};

FrameBoundEstimate frameBounds2(const PointMeasure& mu, const CubeUnion2& omega, int gridPerCube);

}  // namespace expframe
