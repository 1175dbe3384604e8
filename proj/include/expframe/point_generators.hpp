#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "expframe/point_measure.hpp"
#include "expframe/quadratic_field.hpp"

namespace expframe {

/// Unit masses on b*Z intersected with the extent.
PointMeasure lattice(double b, Interval extent);

/// Lattice with deterministic seeded jitter u_k uniform in [-jitter, jitter];
/// requires jitter < b/2 so atoms stay sorted.
PointMeasure perturbedLattice(double b, double jitterAmplitude, std::uint64_t seed,
                              Interval extent);

/// Cut-and-project specification: theta = p + q*sqrt(d) with conjugate
/// theta* = p - q*sqrt(d); accepted points are m + n*theta with
/// m + n*theta* in [windowLo, windowHi).
struct ModelSetSpec {
    Rational p{0};
    Rational q{1};
    long long d = 2;
    Rational windowLo{0};
    Rational windowHi{1};
    Interval extent{0.0, 1000.0};
};

struct ModelSetResult {
    PointMeasure measure;
    bool emptyWindow = false;
    double minGap = 0.0;
    double maxGap = 0.0;
};

/// Enumerates the model set on the extent; the internal-space acceptance test
/// is exact in Z[sqrt(d)] (sign comparisons never trust floats).
ModelSetResult modelSet(const ModelSetSpec& spec);

struct AlmostPeriod {
    double x = 0.0;
    double s = 0.0;  // sup over atoms of |e^{-2 pi i lambda x} - 1|
};

/// Grid scan for epsilon-almost periods: returns all x in [xLo, xHi] (step
/// xStep) with s(x) <= epsTarget, sorted by s.
std::vector<AlmostPeriod> almostPeriodSearch(const PointMeasure& mu, double xLo, double xHi,
                                             double xStep, double epsTarget);

struct BesselProbe {
    double probe = 0.0;       // sup_t (1/R) sum_{[t,t+R]} w |sum_j e^{-2 pi i lambda y_j}|^2
    double supCorner = 0.0;
    double windowLength = 0.0;
};

/// Window average of the squared N-node exponential sum, extremized exactly
/// over window positions (the envelope reweighting plus a sliding sweep).
BesselProbe besselBlowupProbe(const PointMeasure& mu, const std::vector<double>& yNodes,
                              double R);

}  // namespace expframe
