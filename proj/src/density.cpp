#include "expframe/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace expframe {

namespace {

Interval defaultCornerRange(const PointMeasure& mu, double h) {
    Interval e = mu.extent();
    return {e.lo, e.hi - h};
}

void requireFits(const PointMeasure& mu, double h, const Interval& r) {
    if (r.hi < r.lo) {
        Interval e = mu.extent();
        throw std::invalid_argument(
            "slidingExtremes: window h=" + std::to_string(h) + " does not fit extent [" +
            std::to_string(e.lo) + ", " + std::to_string(e.hi) + "]; need extent length >= " +
            std::to_string(h));
    }
}

}  // namespace

std::vector<double> infCornerCandidates(const PointMeasure& mu, double h, Interval range) {
    // Mass([t,t+h]) is piecewise constant in t with events where an atom leaves
    // (t passes an atom) or enters (t+h reaches an atom).  Sample each open
    // interval between consecutive events at its midpoint.
    const auto& pos = mu.positions();
    std::vector<double> events;
    events.reserve(2 * pos.size() + 2);
    for (double x : pos) {
        if (x >= range.lo && x <= range.hi) events.push_back(x);
        double t = x - h;
        if (t >= range.lo && t <= range.hi) events.push_back(t);
    }
    events.push_back(range.lo);
    events.push_back(range.hi);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    std::vector<double> cand;
    cand.reserve(2 * events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        cand.push_back(events[i]);
        if (i + 1 < events.size()) cand.push_back(0.5 * (events[i] + events[i + 1]));
    }
    return cand;
}

SlidingExtremes slidingExtremesOnCandidates(const PointMeasure& mu, double h,
                                            const std::vector<double>& corners) {
    if (!(h > 0.0)) throw std::invalid_argument("slidingExtremes: h must be > 0");
    SlidingExtremes r;
    r.h = h;
    bool first = true;
    for (double t : corners) {
        auto [a, b] = mu.atomRange(t, t + h);
        double m = a < b ? mu.massRange(a, b) : 0.0;
        double ratio = m / h;
        if (first || ratio > r.supRatio) {
            r.supRatio = ratio;
            r.supCorner = t;
        }
        if (first || ratio < r.infRatio) {
            r.infRatio = ratio;
            r.infCorner = t;
        }
        first = false;
    }
    if (first) throw std::invalid_argument("slidingExtremes: empty corner candidate set");
    return r;
}

SlidingExtremes slidingExtremes(const PointMeasure& mu, double h,
                                std::optional<Interval> cornerRange) {
    if (!(h > 0.0)) throw std::invalid_argument("slidingExtremes: h must be > 0");
    if (mu.dimension() != 1) throw std::invalid_argument("slidingExtremes: 1-D only");
    Interval range = cornerRange ? *cornerRange : defaultCornerRange(mu, h);
    requireFits(mu, h, range);

    // Sup: attained with the window's left end at an atom (slide right until
    // the left end hits the smallest atom inside; nothing leaves, atoms may enter).
    std::vector<double> supCand;
    const auto& pos = mu.positions();
    supCand.reserve(pos.size() + 2);
    for (double x : pos)
        if (x >= range.lo && x <= range.hi) supCand.push_back(x);
    supCand.push_back(range.lo);
    supCand.push_back(range.hi);
    std::sort(supCand.begin(), supCand.end());
    SlidingExtremes sup = slidingExtremesOnCandidates(mu, h, supCand);

    SlidingExtremes inf = slidingExtremesOnCandidates(mu, h, infCornerCandidates(mu, h, range));

    SlidingExtremes r;
    r.h = h;
    r.supRatio = sup.supRatio;
    r.supCorner = sup.supCorner;
    r.infRatio = inf.infRatio;
    r.infCorner = inf.infCorner;
    return r;
}

DensityReport beurlingDensity(const PointMeasure& mu, const std::vector<double>& ladder,
                              double settleTol) {
    if (ladder.empty()) throw std::invalid_argument("beurlingDensity: empty ladder");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] > ladder[i - 1]))
            throw std::invalid_argument("beurlingDensity: ladder must be strictly increasing");

    DensityReport rep;
    rep.ladder = ladder;
    rep.settleTol = settleTol;
    rep.edgeMargin = ladder.back();
    for (double h : ladder) rep.perH.push_back(slidingExtremes(mu, h));
    rep.Dplus = rep.perH.back().supRatio;
    rep.Dminus = rep.perH.back().infRatio;
    if (rep.perH.size() >= 2) {
        const auto& a = rep.perH[rep.perH.size() - 2];
        const auto& b = rep.perH.back();
        rep.settled = std::abs(b.supRatio - a.supRatio) <= settleTol &&
                      std::abs(b.infRatio - a.infRatio) <= settleTol;
    }
    return rep;
}

SlidingExtremes2 slidingExtremes2(const PointMeasure& mu, double h, double cornerStep) {
    if (mu.dimension() != 2) throw std::invalid_argument("slidingExtremes2: 2-D only");
    if (!(h > 0.0) || !(cornerStep > 0.0))
        throw std::invalid_argument("slidingExtremes2: h and cornerStep must be > 0");
    Interval ex = mu.extent2(0), ey = mu.extent2(1);
    if (ex.length() < h || ey.length() < h)
        throw std::invalid_argument("slidingExtremes2: window does not fit extent");
    SlidingExtremes2 r;
    r.h = h;
    bool first = true;
    for (double tx = ex.lo; tx <= ex.hi - h + cornerStep * 0.5; tx += cornerStep)
        for (double ty = ey.lo; ty <= ey.hi - h + cornerStep * 0.5; ty += cornerStep) {
            double m = mu.mass2(Window2{{tx, ty}, h});
            double ratio = m / (h * h);
            if (first || ratio > r.supRatio) {
                r.supRatio = ratio;
                r.supCorner = {tx, ty};
            }
            if (first || ratio < r.infRatio) {
                r.infRatio = ratio;
                r.infCorner = {tx, ty};
            }
            first = false;
        }
    return r;
}

}  // namespace expframe
