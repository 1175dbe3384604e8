#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "expframe/density.hpp"
#include "expframe/point_measure.hpp"

namespace expframe {

/// Distinct node positions x_1..x_N; only pairwise differences enter the
/// window matrices.
class NodeSet {
public:
    explicit NodeSet(std::vector<double> nodes);
    const std::vector<double>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    double minGap() const { return minGap_; }

private:
    std::vector<double> nodes_;
    double minGap_ = 0.0;
};

/// The N x N Hermitian window matrix M_ij = sum_{lambda in window} w_lambda
/// e^{-2 pi i (x_i - x_j) lambda} and its extremal eigenvalues.
struct MatrixWindowSpectrum {
    Window window;
    Eigen::MatrixXcd entries;
    double lambdaMin = 0.0;
    double lambdaMax = 0.0;
    std::size_t count = 0;   // atoms in window
    double psdDefect = 0.0;  // max(0, -lambdaMin)
};

MatrixWindowSpectrum gramWindow(const PointMeasure& mu, const NodeSet& nodes, const Window& w);

/// 2-D variant: nodes are points in the plane, the window a closed square.
struct MatrixWindowSpectrum2 {
    Window2 window;
    Eigen::MatrixXcd entries;
    double lambdaMin = 0.0;
    double lambdaMax = 0.0;
    double psdDefect = 0.0;
};

MatrixWindowSpectrum2 gramWindow2(const PointMeasure& mu,
                                  const std::vector<std::array<double, 2>>& nodes,
                                  const Window2& w);

struct MatrixSweepEntry {
    double h = 0.0;
    double supRatio = 0.0;  // sup over corners of lambdaMax / h
    double infRatio = 0.0;  // inf over corners of lambdaMin / h
    double supCorner = 0.0;
    double infCorner = 0.0;
    std::size_t cornersScanned = 0;
};

struct MatrixDensityReport {
    std::vector<MatrixSweepEntry> trace;
    double DplusN = 0.0;   // supRatio at largest h (lower bound for the sup)
    double DminusN = 0.0;  // infRatio at largest h (upper bound for the inf)
    double sweepStep = 0.0;
    double worstPsdDefect = 0.0;
};

/// Extremal-eigenvalue window sweep. Corners are atom positions, the exact
/// scalar inf-sweep candidates, and a uniform grid of step sweepStep
/// (default h/50); the result is a lower bound for the sup and an upper bound
/// for the inf at each h.
MatrixDensityReport matrixDensities(const PointMeasure& mu, const NodeSet& nodes,
                                    const std::vector<double>& ladder, double sweepStep = 0.0);

/// N=2 closed form: per-window eigenvalues mass +- |sum w e^{-2 pi i (x1-x2) l}|,
/// no eigensolver involved.
MatrixDensityReport pairDensityClosedForm(const PointMeasure& mu, double x1, double x2,
                                          const std::vector<double>& ladder,
                                          double sweepStep = 0.0);

/// Extremal eigenvalues of a Hermitian operator given by its matvec, via
/// Lanczos with full reorthogonalization (relative tolerance ~1e-8).
std::pair<double, double> lanczosExtremalEigenvalues(
    std::size_t dim, const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& matvec,
    double relTol = 1e-8, std::size_t maxIter = 400, unsigned seed = 12345);

}  // namespace expframe
