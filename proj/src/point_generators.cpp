#include "expframe/point_generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "expframe/density.hpp"

namespace expframe {

PointMeasure lattice(double b, Interval extent) {
    if (!(b > 0.0)) throw std::invalid_argument("lattice: b must be > 0");
    std::vector<double> pos;
    auto kLo = static_cast<long long>(std::ceil(extent.lo / b)) - 1;
    auto kHi = static_cast<long long>(std::floor(extent.hi / b)) + 1;
    for (long long k = kLo; k <= kHi; ++k) {
        double x = b * static_cast<double>(k);
        if (x >= extent.lo && x <= extent.hi) pos.push_back(x);
    }
    return PointMeasure::fromAtoms(pos);
}

PointMeasure perturbedLattice(double b, double jitterAmplitude, std::uint64_t seed,
                              Interval extent) {
    if (!(b > 0.0)) throw std::invalid_argument("perturbedLattice: b must be > 0");
    if (!(jitterAmplitude >= 0.0) || jitterAmplitude >= b / 2.0)
        throw std::invalid_argument("perturbedLattice: jitter must satisfy 0 <= jitter < b/2");
    std::mt19937_64 rng(seed);
    std::vector<double> pos;
    auto kLo = static_cast<long long>(std::ceil(extent.lo / b)) - 1;
    auto kHi = static_cast<long long>(std::floor(extent.hi / b)) + 1;
    for (long long k = kLo; k <= kHi; ++k) {
        // top 53 bits mapped to [0,1); implementation-independent
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double x = b * static_cast<double>(k) + (2.0 * u - 1.0) * jitterAmplitude;
        if (x >= extent.lo && x <= extent.hi) pos.push_back(x);
    }
    return PointMeasure::fromAtoms(pos);
}

namespace {

// Exact test  windowLo <= m + n*(p - q*sqrt(d)) < windowHi  in Q(sqrt(d)).
bool accepted(long long m, long long n, const ModelSetSpec& s) {
    // m + n p - windowLo + (-n q) sqrt(d) >= 0
    Rational a1 = Rational(m) + Rational(n) * s.p - s.windowLo;
    Rational b1 = -(Rational(n) * s.q);
    if (signQuad(a1, b1, s.d) < 0) return false;
    // windowHi - m - n p + (n q) sqrt(d) > 0
    Rational a2 = s.windowHi - Rational(m) - Rational(n) * s.p;
    Rational b2 = Rational(n) * s.q;
    return signQuad(a2, b2, s.d) > 0;
}

}  // namespace

ModelSetResult modelSet(const ModelSetSpec& spec) {
    if (spec.q.isZero()) throw std::invalid_argument("modelSet: q must be nonzero");
    if (spec.d < 2 || isPerfectSquare(spec.d))
        throw std::invalid_argument("modelSet: d must be a nonsquare integer >= 2");
    ModelSetResult result;
    double wLo = spec.windowLo.value(), wHi = spec.windowHi.value();
    if (!(wLo < wHi)) {
        result.emptyWindow = true;
        result.measure = PointMeasure::fromAtoms(std::vector<double>{});
        return result;
    }
    const double sq = std::sqrt(static_cast<double>(spec.d));
    const double theta = spec.p.value() + spec.q.value() * sq;
    const double thetaStar = spec.p.value() - spec.q.value() * sq;
    // physical x = m + n theta, internal x* = m + n theta*;
    // x - x* = n (theta - theta*) bounds n over the extent/window box.
    const double spread = theta - thetaStar;
    double nloF = ((spec.extent.lo - wHi) / spread);
    double nhiF = ((spec.extent.hi - wLo) / spread);
    if (nloF > nhiF) std::swap(nloF, nhiF);
    auto nLo = static_cast<long long>(std::floor(nloF)) - 2;
    auto nHi = static_cast<long long>(std::ceil(nhiF)) + 2;

    std::vector<double> pos;
    for (long long n = nLo; n <= nHi; ++n) {
        // m in [wLo - n theta*, wHi - n theta*)
        double base = -static_cast<double>(n) * thetaStar;
        auto mLo = static_cast<long long>(std::floor(wLo + base)) - 2;
        auto mHi = static_cast<long long>(std::ceil(wHi + base)) + 2;
        for (long long m = mLo; m <= mHi; ++m) {
            if (!accepted(m, n, spec)) continue;
            double x = static_cast<double>(m) + static_cast<double>(n) * theta;
            if (x >= spec.extent.lo && x <= spec.extent.hi) pos.push_back(x);
        }
    }
    result.measure = PointMeasure::fromAtoms(pos);
    const auto& p = result.measure.positions();
    if (p.size() >= 2) {
        result.minGap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < p.size(); ++i) {
            result.minGap = std::min(result.minGap, p[i] - p[i - 1]);
            result.maxGap = std::max(result.maxGap, p[i] - p[i - 1]);
        }
    }
    return result;
}

std::vector<AlmostPeriod> almostPeriodSearch(const PointMeasure& mu, double xLo, double xHi,
                                             double xStep, double epsTarget) {
    if (!(xStep > 0.0)) throw std::invalid_argument("almostPeriodSearch: xStep must be > 0");
    std::vector<AlmostPeriod> found;
    const auto& pos = mu.positions();
    const auto count = static_cast<std::size_t>(std::floor((xHi - xLo) / xStep)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        double x = xLo + static_cast<double>(i) * xStep;
        if (x > xHi) break;
        double worst = 0.0;
        for (double lam : pos) {
            // |e^{-2 pi i lam x} - 1| = 2 |sin(pi lam x)|
            double r = std::remainder(lam * x, 1.0);
            double v = 2.0 * std::abs(std::sin(M_PI * r));
            if (v > worst) {
                worst = v;
                if (worst > epsTarget) break;
            }
        }
        if (worst <= epsTarget) found.push_back({x, worst});
    }
    std::sort(found.begin(), found.end(),
              [](const AlmostPeriod& a, const AlmostPeriod& b) { return a.s < b.s; });
    return found;
}

BesselProbe besselBlowupProbe(const PointMeasure& mu, const std::vector<double>& yNodes,
                              double R) {
    if (yNodes.empty()) throw std::invalid_argument("besselBlowupProbe: no nodes");
    std::vector<TrigPolynomial::Term> terms;
    terms.reserve(yNodes.size());
    for (double y : yNodes) terms.push_back({y, {1.0, 0.0}});
    PointMeasure env = applyEnvelope(mu, TrigPolynomial(std::move(terms)));
    SlidingExtremes ex = slidingExtremes(env, R);
    return {ex.supRatio, ex.supCorner, R};
}

}  // namespace expframe
