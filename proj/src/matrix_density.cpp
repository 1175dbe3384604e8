#include "expframe/matrix_density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

namespace expframe {

NodeSet::NodeSet(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("NodeSet: at least one node required");
    std::vector<double> sorted = nodes_;
    std::sort(sorted.begin(), sorted.end());
    minGap_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        double gap = sorted[i] - sorted[i - 1];
        if (gap == 0.0) throw std::invalid_argument("NodeSet: nodes must be pairwise distinct");
        minGap_ = std::min(minGap_, gap);
    }
    if (sorted.size() == 1) minGap_ = 0.0;
}

namespace {

// Window-sum engine: double-double prefix sums of w_k e^{-2 pi i theta lambda_k}
// for each required node difference theta, so each window entry is one
// prefix difference.
class WindowSums {
public:
    WindowSums(const PointMeasure& mu, const std::vector<double>& thetas) : mu_(mu) {
        const auto& pos = mu.positions();
        const auto& w = mu.weights();
        prefixes_.reserve(thetas.size());
        for (double th : thetas) {
            ComplexPrefix p(pos.size());
            for (std::size_t k = 0; k < pos.size(); ++k)
                p.push(w[k] * cisNeg(th * pos[k]));
            prefixes_.push_back(std::move(p));
        }
    }

    std::complex<double> sum(std::size_t thetaIdx, std::size_t first, std::size_t last) const {
        return prefixes_[thetaIdx].get(first, last);
    }
    const PointMeasure& measure() const { return mu_; }

private:
    const PointMeasure& mu_;
    std::vector<ComplexPrefix> prefixes_;
};

std::vector<double> upperDifferences(const NodeSet& nodes) {
    const auto& x = nodes.nodes();
    std::vector<double> th;
    th.reserve(x.size() * (x.size() - 1) / 2);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) th.push_back(x[i] - x[j]);
    return th;
}

void fillWindowMatrix(const WindowSums& sums, const NodeSet& nodes, std::size_t a, std::size_t b,
                      Eigen::MatrixXcd& m) {
    const std::size_t n = nodes.size();
    const double mass = a < b ? sums.measure().massRange(a, b) : 0.0;
    m.resize(n, n);
    std::size_t t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = mass;
        for (std::size_t j = i + 1; j < n; ++j, ++t) {
            std::complex<double> s = a < b ? sums.sum(t, a, b) : std::complex<double>{0.0, 0.0};
            m(i, j) = s;
            m(j, i) = std::conj(s);
        }
    }
}

std::vector<double> sweepCorners(const PointMeasure& mu, double h, double step, Interval range) {
    std::vector<double> corners = infCornerCandidates(mu, h, range);
    for (double t = range.lo; t <= range.hi; t += step) corners.push_back(t);
    std::sort(corners.begin(), corners.end());
    corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
    return corners;
}

std::size_t sweepThreadCount(std::size_t work) {
    const char* env = std::getenv("EXPFRAME_THREADS");
    if (!env) return 1;
    long n = std::strtol(env, nullptr, 10);
    if (n <= 1) return 1;
    n = std::min<long>(n, static_cast<long>(std::thread::hardware_concurrency()));
    return std::min<std::size_t>(static_cast<std::size_t>(std::max<long>(n, 1)),
                                 std::max<std::size_t>(work / 1024, 1));
}

// makeEigs() returns a per-thread evaluator (a, b) -> (lambdaMin, lambdaMax).
template <typename EigFactory>
MatrixDensityReport sweepReport(const PointMeasure& mu, const std::vector<double>& ladder,
                                double sweepStep, EigFactory&& makeEigs) {
    if (ladder.empty()) throw std::invalid_argument("matrixDensities: empty ladder");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] > ladder[i - 1]))
            throw std::invalid_argument("matrixDensities: ladder must be strictly increasing");
    Interval e = mu.extent();

    MatrixDensityReport rep;
    rep.sweepStep = sweepStep;
    for (double h : ladder) {
        Interval range{e.lo, e.hi - h};
        if (range.hi < range.lo)
            throw std::invalid_argument("matrixDensities: h=" + std::to_string(h) +
                                        " does not fit extent");
        double step = sweepStep > 0.0 ? sweepStep : h / 50.0;
        std::vector<double> corners = sweepCorners(mu, h, step, range);

        struct Partial {
            double supRatio = 0.0, infRatio = 0.0, supCorner = 0.0, infCorner = 0.0;
            double psdDefect = 0.0;
            bool any = false;
        };
        auto scan = [&](std::size_t lo, std::size_t hi, Partial& out) {
            auto eigs = makeEigs();
            for (std::size_t c = lo; c < hi; ++c) {
                double t = corners[c];
                auto [a, b] = mu.atomRange(t, t + h);
                auto [lmin, lmax] = eigs(a, b);
                out.psdDefect = std::max(out.psdDefect, std::max(0.0, -lmin));
                if (!out.any || lmax / h > out.supRatio) {
                    out.supRatio = lmax / h;
                    out.supCorner = t;
                }
                if (!out.any || lmin / h < out.infRatio) {
                    out.infRatio = lmin / h;
                    out.infCorner = t;
                }
                out.any = true;
            }
        };

        const std::size_t nThreads = sweepThreadCount(corners.size());
        std::vector<Partial> parts(nThreads);
        if (nThreads <= 1) {
            scan(0, corners.size(), parts[0]);
        } else {
            std::vector<std::thread> pool;
            std::size_t chunk = (corners.size() + nThreads - 1) / nThreads;
            for (std::size_t i = 0; i < nThreads; ++i)
                pool.emplace_back(scan, i * chunk,
                                  std::min(corners.size(), (i + 1) * chunk),
                                  std::ref(parts[i]));
            for (auto& th : pool) th.join();
        }

        // deterministic merge: larger ratio wins, ties to the smaller corner
        MatrixSweepEntry entry;
        entry.h = h;
        entry.cornersScanned = corners.size();
        bool first = true;
        for (const Partial& p : parts) {
            if (!p.any) continue;
            rep.worstPsdDefect = std::max(rep.worstPsdDefect, p.psdDefect);
            if (first || p.supRatio > entry.supRatio ||
                (p.supRatio == entry.supRatio && p.supCorner < entry.supCorner)) {
                entry.supRatio = p.supRatio;
                entry.supCorner = p.supCorner;
            }
            if (first || p.infRatio < entry.infRatio ||
                (p.infRatio == entry.infRatio && p.infCorner < entry.infCorner)) {
                entry.infRatio = p.infRatio;
                entry.infCorner = p.infCorner;
            }
            first = false;
        }
        rep.trace.push_back(entry);
    }
    rep.DplusN = rep.trace.back().supRatio;
    rep.DminusN = rep.trace.back().infRatio;
    return rep;
}

}  // namespace

MatrixWindowSpectrum gramWindow(const PointMeasure& mu, const NodeSet& nodes, const Window& w) {
    if (mu.dimension() != 1) throw std::invalid_argument("gramWindow: 1-D measures only");
    MatrixWindowSpectrum spec;
    spec.window = w;
    auto [a, b] = mu.atomRange(w.lo(), w.hi());
    spec.count = b > a ? b - a : 0;

    const auto& x = nodes.nodes();
    const auto& pos = mu.positions();
    const auto& wt = mu.weights();
    const std::size_t n = x.size();
    spec.entries.resize(n, n);
    // Direct compensated accumulation (i < j, mirror conjugates; diagonal = mass).
    double mass = spec.count ? mu.massRange(a, b) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        spec.entries(i, i) = mass;
        for (std::size_t j = i + 1; j < n; ++j) {
            double theta = x[i] - x[j];
            CompensatedSum re, im;
            for (std::size_t k = a; k < b; ++k) {
                std::complex<double> z = wt[k] * cisNeg(theta * pos[k]);
                re.add(z.real());
                im.add(z.imag());
            }
            std::complex<double> s{re.value(), im.value()};
            spec.entries(i, j) = s;
            spec.entries(j, i) = std::conj(s);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(spec.entries, Eigen::EigenvaluesOnly);
    spec.lambdaMin = es.eigenvalues().minCoeff();
    spec.lambdaMax = es.eigenvalues().maxCoeff();
    spec.psdDefect = std::max(0.0, -spec.lambdaMin);
    return spec;
}

MatrixWindowSpectrum2 gramWindow2(const PointMeasure& mu,
                                  const std::vector<std::array<double, 2>>& nodes,
                                  const Window2& w) {
    if (mu.dimension() != 2) throw std::invalid_argument("gramWindow2: 2-D measures only");
    if (nodes.empty()) throw std::invalid_argument("gramWindow2: at least one node required");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] == nodes[j])
                throw std::invalid_argument("gramWindow2: nodes must be pairwise distinct");
    MatrixWindowSpectrum2 spec;
    spec.window = w;
    const std::size_t n = nodes.size();
    spec.entries.resize(n, n);
    const double xlo = w.corner[0], xhi = w.corner[0] + w.side;
    const double ylo = w.corner[1], yhi = w.corner[1] + w.side;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double dx = nodes[i][0] - nodes[j][0];
            double dy = nodes[i][1] - nodes[j][1];
            CompensatedSum re, im;
            for (std::size_t k = 0; k < mu.size(); ++k) {
                const auto& p = mu.positions2()[k];
                if (p[0] < xlo || p[0] > xhi || p[1] < ylo || p[1] > yhi) continue;
                std::complex<double> z = mu.weights()[k] * cisNeg(dx * p[0] + dy * p[1]);
                re.add(z.real());
                im.add(z.imag());
            }
            spec.entries(i, j) = {re.value(), im.value()};
            spec.entries(j, i) = std::conj(spec.entries(i, j));
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(spec.entries, Eigen::EigenvaluesOnly);
    spec.lambdaMin = es.eigenvalues().minCoeff();
    spec.lambdaMax = es.eigenvalues().maxCoeff();
    spec.psdDefect = std::max(0.0, -spec.lambdaMin);
    return spec;
}

MatrixDensityReport matrixDensities(const PointMeasure& mu, const NodeSet& nodes,
                                    const std::vector<double>& ladder, double sweepStep) {
    if (mu.dimension() != 1) throw std::invalid_argument("matrixDensities: 1-D measures only");
    WindowSums sums(mu, upperDifferences(nodes));
    auto makeEigs = [&sums, &nodes]() {
        return [&sums, &nodes, m = Eigen::MatrixXcd(),
                es = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>()](
                   std::size_t a, std::size_t b) mutable {
            fillWindowMatrix(sums, nodes, a, b, m);
            es.compute(m, Eigen::EigenvaluesOnly);
            return std::pair<double, double>{es.eigenvalues().minCoeff(),
                                             es.eigenvalues().maxCoeff()};
        };
    };
    return sweepReport(mu, ladder, sweepStep, makeEigs);
}

MatrixDensityReport pairDensityClosedForm(const PointMeasure& mu, double x1, double x2,
                                          const std::vector<double>& ladder, double sweepStep) {
    if (x1 == x2) throw std::invalid_argument("pairDensityClosedForm: nodes must be distinct");
    if (mu.dimension() != 1)
        throw std::invalid_argument("pairDensityClosedForm: 1-D measures only");
    WindowSums sums(mu, {x1 - x2});
    auto makeEigs = [&sums]() {
        return [&sums](std::size_t a, std::size_t b) {
            if (a >= b) return std::pair<double, double>{0.0, 0.0};
            double mass = sums.measure().massRange(a, b);
            double off = std::abs(sums.sum(0, a, b));
            return std::pair<double, double>{mass - off, mass + off};
        };
    };
    return sweepReport(mu, ladder, sweepStep, makeEigs);
}

std::pair<double, double> lanczosExtremalEigenvalues(
    std::size_t dim, const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& matvec,
    double relTol, std::size_t maxIter, unsigned seed) {
    if (dim == 0) throw std::invalid_argument("lanczosExtremalEigenvalues: empty operator");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = {u(rng), u(rng)};
    v.normalize();

    std::vector<Eigen::VectorXcd> basis;
    std::vector<double> alpha, beta;
    Eigen::VectorXcd w(dim);
    double lo = 0.0, hi = 0.0;
    const std::size_t iters = std::min(maxIter, dim);
    for (std::size_t it = 0; it < iters; ++it) {
        basis.push_back(v);
        matvec(v, w);
        double a = w.dot(v).real();
        alpha.push_back(a);
        // full reorthogonalization, twice for stability
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) w -= q.dot(w) * q;
        double b = w.norm();
        // Ritz pairs of the tridiagonal section; residual of a Ritz pair is
        // beta * |last component of its T-eigenvector|
        const auto n = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        lo = es.eigenvalues()(0);
        hi = es.eigenvalues()(n - 1);
        double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
        double resLo = b * std::abs(es.eigenvectors()(n - 1, 0));
        double resHi = b * std::abs(es.eigenvectors()(n - 1, n - 1));
        if (std::max(resLo, resHi) <= relTol * scale) break;
        if (b < 1e-14 * scale) break;  // invariant subspace found
        beta.push_back(b);
        v = w / b;
    }
    return {lo, hi};
}

}  // namespace expframe
