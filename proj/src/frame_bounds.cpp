#include "expframe/frame_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expframe {

CubeUnion::CubeUnion(std::vector<double> centers, double side)
    : centers_(std::move(centers)), side_(side) {
    if (centers_.empty()) throw std::invalid_argument("CubeUnion: at least one cube required");
    if (!(side_ > 0.0)) throw std::invalid_argument("CubeUnion: side must be > 0");
    std::vector<double> sorted = centers_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (!(sorted[i] - sorted[i - 1] > side_))
            throw std::invalid_argument("CubeUnion: cubes overlap; center gap must exceed side");
}

CubeUnion2::CubeUnion2(std::vector<std::array<double, 2>> centers, double side)
    : centers_(std::move(centers)), side_(side) {
    if (centers_.empty()) throw std::invalid_argument("CubeUnion2: at least one cube required");
    if (!(side_ > 0.0)) throw std::invalid_argument("CubeUnion2: side must be > 0");
    for (std::size_t i = 0; i < centers_.size(); ++i)
        for (std::size_t j = i + 1; j < centers_.size(); ++j) {
            double gap = std::max(std::abs(centers_[i][0] - centers_[j][0]),
                                  std::abs(centers_[i][1] - centers_[j][1]));
            if (!(gap > side_))
                throw std::invalid_argument("CubeUnion2: cubes overlap; center gap must exceed side");
        }
}

namespace {

struct BandSelection {
    std::size_t first = 0, last = 0;  // atom index range [first, last)
    Interval band{0.0, 0.0};
};

BandSelection selectBand(const PointMeasure& mu, double bandWidth) {
    Interval e = mu.extent();
    double mid = 0.5 * (e.lo + e.hi);
    BandSelection s;
    s.band = {mid - 0.5 * bandWidth, mid + 0.5 * bandWidth};
    const auto& pos = mu.positions();
    s.first = static_cast<std::size_t>(
        std::lower_bound(pos.begin(), pos.end(), s.band.lo) - pos.begin());
    s.last = static_cast<std::size_t>(
        std::lower_bound(pos.begin(), pos.end(), s.band.hi) - pos.begin());  // half-open top
    return s;
}

// S(tau) = sum_k w_k e^{-2 pi i lambda_k tau}, compensated.
std::complex<double> oscSum(const PointMeasure& mu, std::size_t a, std::size_t b, double tau) {
    CompensatedSum re, im;
    const auto& pos = mu.positions();
    const auto& w = mu.weights();
    for (std::size_t k = a; k < b; ++k) {
        std::complex<double> z = w[k] * cisNeg(pos[k] * tau);
        re.add(z.real());
        im.add(z.imag());
    }
    return {re.value(), im.value()};
}

double hermDefect(const Eigen::MatrixXcd& h) {
    double scale = std::max(1e-300, h.cwiseAbs().maxCoeff());
    return (h - h.adjoint()).cwiseAbs().maxCoeff() / scale;
}

FrameBoundEstimate solveBounds(QuadraticFormResult form, int gridPerCube, double truncRadius,
                               bool besselOnly) {
    FrameBoundEstimate est;
    est.gridPerCube = gridPerCube;
    est.truncRadius = truncRadius;
    est.matrixSize = static_cast<std::size_t>(form.h.rows());
    est.atomsUsed = form.atomsUsed;
    est.atomsDroppedByBand = form.atomsDropped;
    est.band = form.band;
    est.hermitianDefect = form.hermitianDefect;
    est.besselOnly = besselOnly;

    Eigen::MatrixXcd h = 0.5 * (form.h + form.h.adjoint());
    if (est.matrixSize <= 4096) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        est.Aeps = es.eigenvalues().minCoeff();
        est.Beps = es.eigenvalues().maxCoeff();
    } else {
        auto matvec = [&h](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y = h * x; };
        auto [lo, hi] = lanczosExtremalEigenvalues(est.matrixSize, matvec);
        est.Aeps = lo;
        est.Beps = hi;
    }
    est.psdDefect = std::max(0.0, -est.Aeps);
    if (besselOnly) est.Aeps = 0.0;
    return est;
}

}  // namespace

QuadraticFormResult frameQuadraticForm(const PointMeasure& mu, const CubeUnion& omega,
                                       int gridPerCube) {
    if (mu.dimension() != 1) throw std::invalid_argument("frameQuadraticForm: 1-D measure");
    if (gridPerCube < 8) throw std::invalid_argument("frameQuadraticForm: gridPerCube >= 8");
    const double eps = omega.side();
    const double dt = eps / gridPerCube;
    const std::size_t nc = omega.centers().size();
    const std::size_t g = static_cast<std::size_t>(gridPerCube);
    const std::size_t dim = nc * g;

    QuadraticFormResult res;
    BandSelection sel = selectBand(mu, static_cast<double>(gridPerCube) / eps);
    res.band = sel.band;
    res.atomsUsed = sel.last - sel.first;
    res.atomsDropped = mu.size() - res.atomsUsed;

    // Grid midpoints t_p; tau values repeat per cube pair, so tabulate
    // S(tau) once per (cube pair, index offset).
    std::vector<double> grid(dim);
    for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t p = 0; p < g; ++p)
            grid[c * g + p] =
                omega.centers()[c] - 0.5 * eps + (static_cast<double>(p) + 0.5) * dt;

    res.h.resize(dim, dim);
    std::vector<std::complex<double>> table(2 * g - 1);
    for (std::size_t ca = 0; ca < nc; ++ca)
        for (std::size_t cb = 0; cb < nc; ++cb) {
            const double centerDiff = omega.centers()[ca] - omega.centers()[cb];
            for (std::size_t d = 0; d < 2 * g - 1; ++d) {
                double tau = centerDiff +
                             (static_cast<double>(d) - (static_cast<double>(g) - 1.0)) * dt;
                table[d] = dt * oscSum(mu, sel.first, sel.last, tau);
            }
            for (std::size_t p = 0; p < g; ++p)
                for (std::size_t q = 0; q < g; ++q)
                    res.h(ca * g + p, cb * g + q) =
                        table[static_cast<std::size_t>(static_cast<long>(p) -
                                                       static_cast<long>(q)) +
                              g - 1];
        }
    res.hermitianDefect = hermDefect(res.h);
    return res;
}

FrameBoundEstimate frameBounds(const PointMeasure& mu, const CubeUnion& omega, int gridPerCube,
                               double truncRadius, bool besselOnly) {
    const double defaultTrunc = 50.0 / omega.side();
    bool userTrunc = truncRadius > 0.0;
    if (!userTrunc) truncRadius = defaultTrunc;

    // Truncate |lambda| <= truncRadius, then discretize.
    std::vector<double> pos, w;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (std::abs(mu.positions()[i]) <= truncRadius) {
            pos.push_back(mu.positions()[i]);
            w.push_back(mu.weights()[i]);
        }
    if (pos.empty()) throw std::invalid_argument("frameBounds: no atoms within truncRadius");
    PointMeasure Trunc = PointMeasure::fromAtoms(std::move(pos), std::move(w));

    QuadraticFormResult form = frameQuadraticForm(Trunc, omega, gridPerCube);
    FrameBoundEstimate est = solveBounds(std::move(form), gridPerCube, truncRadius, besselOnly);
    est.truncBelowDefault = userTrunc && truncRadius < defaultTrunc;
    est.bandBelowTrunc = est.band.length() < 2.0 * truncRadius;
    return est;
}

EpsSweepResult epsilonSweep(const PointMeasure& mu, const std::vector<double>& centers,
                            const std::vector<double>& epsLadder, int gridPerCube,
                            double truncRadius, double tolerance,
                            const std::vector<double>& densityLadder) {
    if (epsLadder.empty()) throw std::invalid_argument("epsilonSweep: empty epsilon ladder");
    for (std::size_t i = 1; i < epsLadder.size(); ++i)
        if (!(epsLadder[i] < epsLadder[i - 1]))
            throw std::invalid_argument("epsilonSweep: ladder must be strictly decreasing");

    EpsSweepResult result;
    for (double eps : epsLadder)
        result.rows.push_back({eps, frameBounds(mu, CubeUnion(centers, eps), gridPerCube,
                                                truncRadius)});

    std::vector<double> ladder = densityLadder;
    if (ladder.empty()) {
        double len = mu.extent().length();
        ladder = {len / 8.0, len / 4.0, len / 2.0};
    }
    MatrixDensityReport md = matrixDensities(mu, NodeSet(centers), ladder);
    result.DminusN = md.DminusN;
    result.DplusN = md.DplusN;

    result.tolerance = tolerance > 0.0 ? tolerance : 0.1 * std::max(1.0, md.DplusN);
    bool shrinking = true;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        double gA0 = std::abs(result.rows[i - 1].bounds.Aeps - md.DminusN);
        double gA1 = std::abs(result.rows[i].bounds.Aeps - md.DminusN);
        double gB0 = std::abs(result.rows[i - 1].bounds.Beps - md.DplusN);
        double gB1 = std::abs(result.rows[i].bounds.Beps - md.DplusN);
        if (gA1 > gA0 + 1e-9 || gB1 > gB0 + 1e-9) shrinking = false;
    }
    const auto& last = result.rows.back().bounds;
    result.pass = shrinking && std::abs(last.Aeps - md.DminusN) <= result.tolerance &&
                  std::abs(last.Beps - md.DplusN) <= result.tolerance;
    return result;
}

FrameBoundEstimate frameBounds2(const PointMeasure& mu, const CubeUnion2& omega,
                                int gridPerCube) {
    if (mu.dimension() != 2) throw std::invalid_argument("frameBounds2: 2-D measure");
    if (gridPerCube < 4) throw std::invalid_argument("frameBounds2: gridPerCube >= 4");
    const double eps = omega.side();
    const double dt = eps / gridPerCube;
    const std::size_t nc = omega.centers().size();
    const std::size_t g = static_cast<std::size_t>(gridPerCube);
    const std::size_t perCube = g * g;
    const std::size_t dim = nc * perCube;

    // Resolvable band per axis, centered on the extent midpoint of each axis.
    double bw = static_cast<double>(gridPerCube) / eps;
    Interval bx, by;
    {
        Interval ex = mu.extent2(0), ey = mu.extent2(1);
        bx = {0.5 * (ex.lo + ex.hi) - 0.5 * bw, 0.5 * (ex.lo + ex.hi) + 0.5 * bw};
        by = {0.5 * (ey.lo + ey.hi) - 0.5 * bw, 0.5 * (ey.lo + ey.hi) + 0.5 * bw};
    }
    std::vector<std::array<double, 2>> lam;
    std::vector<double> wt;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto& p = mu.positions2()[i];
        if (p[0] >= bx.lo && p[0] < bx.hi && p[1] >= by.lo && p[1] < by.hi) {
            lam.push_back(p);
            wt.push_back(mu.weights()[i]);
        }
    }

    std::vector<std::array<double, 2>> grid(dim);
    for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t px = 0; px < g; ++px)
            for (std::size_t py = 0; py < g; ++py)
                grid[c * perCube + px * g + py] = {
                    omega.centers()[c][0] - 0.5 * eps + (static_cast<double>(px) + 0.5) * dt,
                    omega.centers()[c][1] - 0.5 * eps + (static_cast<double>(py) + 0.5) * dt};

    Eigen::MatrixXcd h(dim, dim);
    const double cellMeasure = dt * dt;
    for (std::size_t p = 0; p < dim; ++p)
        for (std::size_t q = p; q < dim; ++q) {
            CompensatedSum re, im;
            double tx = grid[p][0] - grid[q][0];
            double ty = grid[p][1] - grid[q][1];
            for (std::size_t k = 0; k < lam.size(); ++k) {
                std::complex<double> z = wt[k] * cisNeg(lam[k][0] * tx + lam[k][1] * ty);
                re.add(z.real());
                im.add(z.imag());
            }
            h(p, q) = cellMeasure * std::complex<double>{re.value(), im.value()};
            h(q, p) = std::conj(h(p, q));
        }

    QuadraticFormResult form;
    form.h = std::move(h);
    form.atomsUsed = lam.size();
    form.atomsDropped = mu.size() - lam.size();
    form.band = bx;
    form.hermitianDefect = 0.0;
    return solveBounds(std::move(form), gridPerCube, 0.0, false);
}

}  // namespace expframe
