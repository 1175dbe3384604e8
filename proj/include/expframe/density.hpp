#pragma once

#include <optional>
#include <vector>

#include "expframe/point_measure.hpp"

namespace expframe {

struct SlidingExtremes {
    double supRatio = 0.0;   // sup over corners of mass([t,t+h])/h
    double infRatio = 0.0;
    double supCorner = 0.0;  // achieving corners, smallest-t tie break
    double infCorner = 0.0;
    double h = 0.0;
};

/// Exact sliding-window extremes over all real corners t in [tLo, tHi]
/// (default: all windows inside the extent).  Sup candidates are atom
/// positions; inf candidates are the open gaps between atom-entry/exit events.
SlidingExtremes slidingExtremes(const PointMeasure& mu, double h,
                                std::optional<Interval> cornerRange = std::nullopt);

/// Same extremes restricted to a caller-supplied corner candidate set.
SlidingExtremes slidingExtremesOnCandidates(const PointMeasure& mu, double h,
                                            const std::vector<double>& corners);

/// Corner candidates used by the exact inf sweep (events and gap midpoints).
std::vector<double> infCornerCandidates(const PointMeasure& mu, double h, Interval cornerRange);

struct DensityReport {
    std::vector<double> ladder;
    std::vector<SlidingExtremes> perH;
    double Dplus = 0.0;      // supRatio at the largest ladder h
    double Dminus = 0.0;     // infRatio at the largest ladder h
    double edgeMargin = 0.0; // corners excluded within this distance of the extent end
    bool settled = false;    // |last - prev| <= settleTol on both traces
    double settleTol = 0.0;
};

/// Scalar upper/lower Beurling densities via the ladder of window sizes.
/// D+/D- are reported at the largest h; the whole h-trace is exposed.
DensityReport beurlingDensity(const PointMeasure& mu, const std::vector<double>& ladder,
                              double settleTol = 0.05);

/// 2-D variant: corner-grid approximate extremes (labelled approximate).
struct SlidingExtremes2 {
    double supRatio = 0.0;
    double infRatio = 0.0;
    std::array<double, 2> supCorner{0, 0};
    std::array<double, 2> infCorner{0, 0};
    double h = 0.0;
    bool approximate = true;
};

SlidingExtremes2 slidingExtremes2(const PointMeasure& mu, double h, double cornerStep);

}  // namespace expframe
