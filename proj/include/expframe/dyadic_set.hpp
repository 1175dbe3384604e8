#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace expframe {

/// Exact dyadic rational m * 2^e (m odd or zero).  All witness arithmetic is
/// exact; operations throw when a result would need more than ~126 mantissa
/// bits, which the witness construction never does for supported shifts.
struct Dyadic {
    __int128 m = 0;
    long long e = 0;

    static Dyadic fromDouble(double x);
    static Dyadic fromPow2(long long exponent) { return Dyadic{1, exponent}; }

    void normalize();
    bool isZero() const { return m == 0; }
    int sign() const { return m > 0 ? 1 : m < 0 ? -1 : 0; }
    Dyadic operator-() const { return Dyadic{-m, e}; }
    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;
    bool operator==(const Dyadic& o) const { return m == o.m && e == o.e; }
    bool operator<(const Dyadic& o) const;
    Dyadic abs() const { return Dyadic{m < 0 ? -m : m, e}; }

    /// floor(value * 2^j)
    __int128 scaledFloor(long long j) const;

    /// 2^floorLog2 <= |value| < 2^(floorLog2+1); value must be nonzero.
    long long floorLog2() const;

    double toDouble() const;
    std::string toString() const;  // exact "m*2^e" rendering
};

std::string int128ToString(__int128 v);

/// Component of the dyadic union set at level j, index k: the open interval
/// (k/2^j - r, k/2^j + r) with r = 2^{-(j+|k|+1)}.
struct DyadicCertificate {
    long long j = 0;
    long long k = 0;
};

struct MembershipResult {
    std::optional<DyadicCertificate> certificate;
    long long searchedUpTo = 0;  // jMax when not found
};

/// Semi-decision of membership: scans levels j = 0..jMax testing the at most
/// two nearest indices; NotFound does not certify non-membership.
MembershipResult dyadicMembership(double x, long long jMax);

/// Exact test that x lies in the open component (j, k).
bool componentContains(long long j, __int128 k, const Dyadic& x);

struct DyadicBound {
    long long num = 0;
    long long den = 1;
    double value = 0.0;
};

/// Partial sums sum_{j<=jMax} 3/2^j, exact rational (jMax <= 60);
/// no argument gives the limit, exactly 6.
DyadicBound dyadicMeasureBound(std::optional<long long> jMax = std::nullopt);

struct WitnessStep {
    double shift = 0.0;
    long long j = 0;
    __int128 k = 0;
    Dyadic center;          // k / 2^j exactly
    __int128 radiusExp = 0; // component radius 2^{-radiusExp}
    bool minimalLevelRule = false;  // chosen by the minimal-level rule
};

/// Certified open interval J = (anchor - 2^-slackExp, anchor + 2^-slackExp)
/// contained in the base component and in every shifted component of the steps.
struct WitnessCertificate {
    std::vector<WitnessStep> steps;
    Dyadic anchor;
    __int128 slackExp = 1;
    double zApprox = 0.0;
    double widthApprox = 0.0;  // 2^{1-slackExp}, 0.0 when it underflows
};

/// Iterative construction of a point in the intersection of the dyadic set
/// with its translates by the given shifts.  Components are picked by the
/// minimal-level rule while its certificate stays small; afterwards the
/// component centered exactly on the current anchor is used (the anchor is a
/// dyadic rational, so it is a component center at every sufficiently deep
/// level).  Shifts must be 0 or have magnitude in [2^-60, 2^60].
WitnessCertificate intersectionWitness(const std::vector<double>& shifts);

/// Exact re-check of a certificate: the certified interval is open, nonempty
/// and contained in each step's shifted component (no membership search).
bool verifyWitness(const WitnessCertificate& cert, const std::vector<double>& shifts);

struct ShiftTransfer {
    double z = 0.0;
    __int128 epsMaxExp = 0;   // guaranteed epsMax >= 2^{-epsMaxExp}
    double epsMaxApprox = 0.0;  // 0.0 when the bound underflows doubles
    WitnessCertificate witness;
};

/// Witness z such that every shifted cube (x_i - z) +- eps/2 stays inside its
/// certified component for all eps below the bound.
ShiftTransfer frameShiftTransfer(const std::vector<double>& shifts);

}  // namespace expframe
