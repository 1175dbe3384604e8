#include "expframe/dyadic_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace expframe {

namespace {

int bitLength(__int128 v) {
    if (v < 0) v = -v;
    auto hi = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v) >> 64);
    auto lo = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v));
    if (hi) return 128 - __builtin_clzll(hi);
    if (lo) return 64 - __builtin_clzll(lo);
    return 0;
}

constexpr int kMaxMantissaBits = 126;

__int128 absInt128(__int128 v) { return v < 0 ? -v : v; }

}  // namespace

std::string int128ToString(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    return neg ? "-" + s : s;
}

Dyadic Dyadic::fromDouble(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("Dyadic: non-finite value");
    if (x == 0.0) return {};
    int exp = 0;
    double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
    auto m = static_cast<long long>(std::ldexp(mant, 53));
    Dyadic d{m, static_cast<long long>(exp) - 53};
    d.normalize();
    return d;
}

void Dyadic::normalize() {
    if (m == 0) {
        e = 0;
        return;
    }
    while ((m & 1) == 0) {
        m >>= 1;
        ++e;
    }
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    if (m == 0) return o;
    if (o.m == 0) return *this;
    long long emin = std::min(e, o.e);
    long long s1 = e - emin, s2 = o.e - emin;
    if (bitLength(m) + s1 > kMaxMantissaBits || bitLength(o.m) + s2 > kMaxMantissaBits)
        throw std::overflow_error("Dyadic: operands too disparate for exact arithmetic");
    Dyadic r{(m << s1) + (o.m << s2), emin};
    r.normalize();
    return r;
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

bool Dyadic::operator<(const Dyadic& o) const {
    int sa = sign(), sb = o.sign();
    if (sa != sb) return sa < sb;
    if (sa == 0) return false;
    // compare magnitudes via floorLog2 first, exact subtraction only when close
    long long fa = abs().floorLog2(), fb = o.abs().floorLog2();
    if (fa != fb) return sa > 0 ? fa < fb : fa > fb;
    return (*this - o).sign() < 0;
}

__int128 Dyadic::scaledFloor(long long j) const {
    if (m == 0) return 0;
    long long shift = e + j;
    if (shift >= 0) {
        if (bitLength(m) + shift > kMaxMantissaBits)
            throw std::overflow_error("Dyadic::scaledFloor overflow");
        return m << shift;
    }
    if (-shift >= 127) return m < 0 ? -1 : 0;
    return m >> (-shift);  // arithmetic shift: floor for negatives
}

long long Dyadic::floorLog2() const {
    if (m == 0) throw std::logic_error("Dyadic::floorLog2 of zero");
    return e + bitLength(m) - 1;
}

double Dyadic::toDouble() const {
    if (m == 0) return 0.0;
    // reduce mantissa to 53 significant bits, then scale
    __int128 mm = m;
    long long ee = e;
    while (bitLength(mm) > 53) {
        mm >>= 1;
        ++ee;
    }
    return std::ldexp(static_cast<double>(static_cast<long long>(mm)),
                      static_cast<int>(std::max<long long>(
                          std::min<long long>(ee, std::numeric_limits<int>::max()),
                          std::numeric_limits<int>::min())));
}

std::string Dyadic::toString() const {
    return int128ToString(m) + "*2^" + std::to_string(e);
}

bool componentContains(long long j, __int128 k, const Dyadic& x) {
    if (j < 0) return false;
    // open interval (k/2^j - r, k/2^j + r), r = 2^{-(j+|k|+1)} > 0 always
    Dyadic center{k, -j};
    center.normalize();
    if (x == center) return true;  // center of an open interval with r > 0
    __int128 radiusExp = static_cast<__int128>(j) + absInt128(k) + 1;
    Dyadic dist = (x - center).abs();
    // With dist = m*2^e (m odd >= 1): dist < 2^-R  iff  floorLog2(dist) < -R.
    // (m == 1: dist == 2^fl; m >= 3: 2^fl < dist < 2^{fl+1}.)
    return static_cast<__int128>(dist.floorLog2()) < -radiusExp;
}

MembershipResult dyadicMembership(double x, long long jMax) {
    if (jMax < 0) throw std::invalid_argument("dyadicMembership: jMax must be >= 0");
    MembershipResult res;
    res.searchedUpTo = jMax;
    Dyadic xd = Dyadic::fromDouble(x);
    for (long long j = 0; j <= jMax; ++j) {
        double scaled = std::ldexp(x, static_cast<int>(j));
        if (std::abs(scaled) > 4.0e18) break;  // any admissible |k| would force radius past an exact hit
        auto kf = static_cast<long long>(std::floor(scaled));
        std::optional<DyadicCertificate> best;
        for (long long k : {kf, kf + 1}) {
            if (!componentContains(j, k, xd)) continue;
            if (!best || std::llabs(k) < std::llabs(best->k) ||
                (std::llabs(k) == std::llabs(best->k) && k > best->k))
                best = DyadicCertificate{j, k};
        }
        if (best) {
            res.certificate = best;
            return res;
        }
    }
    return res;
}

DyadicBound dyadicMeasureBound(std::optional<long long> jMax) {
    if (!jMax) return {6, 1, 6.0};
    long long j = *jMax;
    if (j < 0) throw std::invalid_argument("dyadicMeasureBound: jMax must be >= 0");
    if (j > 60) throw std::invalid_argument("dyadicMeasureBound: jMax > 60 overflows the exact rational");
    // sum_{i<=j} 3/2^i = 6 - 3*2^{-j} = (6*2^j - 3)/2^j
    long long den = 1LL << j;
    long long num = 6 * den - 3;
    long long g = std::gcd(num, den);
    return {num / g, den / g, static_cast<double>(num) / static_cast<double>(den)};
}

namespace {

constexpr long long kLetterBudgetSlack = 32;  // letter-rule only while J is this wide
constexpr long long kLetterMaxIndex = 1LL << 40;

struct State {
    Dyadic anchor;       // certified interior point
    __int128 slackExp;   // (anchor - 2^-slackExp, anchor + 2^-slackExp) is inside everything so far
};

void checkShift(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("intersectionWitness: non-finite shift");
    double ax = std::abs(x);
    if (ax != 0.0 && (ax < 0x1.0p-60 || ax > 0x1.0p60))
        throw std::invalid_argument(
            "intersectionWitness: shift magnitude must be 0 or in [2^-60, 2^60]");
}

// Minimal-level rule: smallest j with 2^-j <= |J|, smallest |k| with
// k/2^j + x strictly inside J; retries with j+1 when no index fits.
std::optional<WitnessStep> letterStep(const State& st, double shift, const Dyadic& shiftD) {
    if (st.slackExp > kLetterBudgetSlack) return std::nullopt;
    auto s = static_cast<long long>(st.slackExp);
    Dyadic lo = st.anchor - Dyadic::fromPow2(-s);
    Dyadic hi = st.anchor + Dyadic::fromPow2(-s);
    for (long long j = std::max<long long>(0, s - 1), tries = 0; tries < 64; ++j, ++tries) {
        Dyadic gLo = lo - shiftD, gHi = hi - shiftD;
        __int128 kLo = gLo.scaledFloor(j);          // candidates k in (gLo*2^j, gHi*2^j)
        __int128 kHi = gHi.scaledFloor(j) + 1;
        std::optional<__int128> bestK;
        for (__int128 k = kLo; k <= kHi; ++k) {
            Dyadic c = Dyadic{k, -j};
            c.normalize();
            Dyadic pos = c + shiftD;
            if (!(lo < pos && pos < hi)) continue;  // strict interior
            if (absInt128(k) > kLetterMaxIndex) continue;
            if (!bestK || absInt128(k) < absInt128(*bestK) ||
                (absInt128(k) == absInt128(*bestK) && k > *bestK))
                bestK = k;
        }
        if (!bestK) continue;
        WitnessStep step;
        step.shift = shift;
        step.j = j;
        step.k = *bestK;
        step.center = Dyadic{*bestK, -j};
        step.center.normalize();
        step.radiusExp = static_cast<__int128>(j) + absInt128(*bestK) + 1;
        step.minimalLevelRule = true;
        return step;
    }
    return std::nullopt;
}

}  // namespace

WitnessCertificate intersectionWitness(const std::vector<double>& shifts) {
    WitnessCertificate cert;
    cert.anchor = Dyadic{};  // J0 = (-1/2, 1/2)
    cert.slackExp = 1;

    State st{cert.anchor, cert.slackExp};
    for (double shift : shifts) {
        checkShift(shift);
        Dyadic shiftD = Dyadic::fromDouble(shift);
        if (auto step = letterStep(st, shift, shiftD)) {
            // new anchor at the chosen center; slack limited by the component
            // radius and the distances to the previous interval's ends
            Dyadic pos = step->center + shiftD;
            Dyadic lo = st.anchor - Dyadic::fromPow2(-static_cast<long long>(st.slackExp));
            Dyadic hi = st.anchor + Dyadic::fromPow2(-static_cast<long long>(st.slackExp));
            Dyadic dLo = pos - lo, dHi = hi - pos;
            __int128 s = step->radiusExp;
            s = std::max(s, static_cast<__int128>(-dLo.floorLog2()));
            s = std::max(s, static_cast<__int128>(-dHi.floorLog2()));
            st.anchor = pos;
            st.slackExp = std::max(st.slackExp, s);
            cert.steps.push_back(std::move(*step));
        } else {
            // anchor mode: the anchor minus the shift is a dyadic rational,
            // hence the exact center of a component at its own level
            Dyadic y = st.anchor - shiftD;
            WitnessStep anchorStep;
            anchorStep.shift = shift;
            if (y.isZero()) {
                anchorStep.j = 0;
                anchorStep.k = 0;
            } else if (y.e >= 0) {
                anchorStep.j = 0;
                if (bitLength(y.m) + y.e > kMaxMantissaBits)
                    throw std::overflow_error("intersectionWitness: shift too large");
                anchorStep.k = y.m << y.e;
            } else {
                anchorStep.j = -y.e;
                anchorStep.k = y.m;
            }
            anchorStep.center = y;
            anchorStep.radiusExp =
                static_cast<__int128>(anchorStep.j) + absInt128(anchorStep.k) + 1;
            anchorStep.minimalLevelRule = false;
            st.slackExp = std::max(st.slackExp, anchorStep.radiusExp);
            cert.steps.push_back(std::move(anchorStep));
        }
    }
    cert.anchor = st.anchor;
    cert.slackExp = st.slackExp;
    cert.zApprox = st.anchor.toDouble();
    cert.widthApprox =
        st.slackExp - 1 < 1074 ? std::ldexp(1.0, -static_cast<int>(st.slackExp - 1)) : 0.0;
    return cert;
}

namespace {

// d >= 2^-E, exact: with d = m*2^e, m odd, 2^fl <= d, so d >= 2^-E iff fl >= -E.
bool geqPow2(const Dyadic& d, __int128 negExp) {
    if (d.sign() <= 0) return false;
    return static_cast<__int128>(d.floorLog2()) >= -negExp;
}

}  // namespace

bool verifyWitness(const WitnessCertificate& cert, const std::vector<double>& shifts) {
    if (cert.steps.size() != shifts.size()) return false;
    if (cert.slackExp < 1) return false;  // must stay inside the base component
    // (anchor +- 2^-slackExp) inside [-1/2, 1/2]: both edge distances >= slack
    Dyadic half = Dyadic::fromPow2(-1);
    if (!geqPow2(cert.anchor + half, cert.slackExp)) return false;
    if (!geqPow2(half - cert.anchor, cert.slackExp)) return false;
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        const WitnessStep& s = cert.steps[i];
        if (s.shift != shifts[i]) return false;
        if (s.radiusExp != static_cast<__int128>(s.j) + absInt128(s.k) + 1) return false;
        Dyadic center{s.k, -s.j};
        center.normalize();
        if (!(center == s.center)) return false;
        Dyadic pos = center + Dyadic::fromDouble(shifts[i]);
        Dyadic d = (cert.anchor - pos).abs();
        if (d.isZero()) {
            if (cert.slackExp < s.radiusExp) return false;
            continue;
        }
        // need d + 2^-slackExp <= 2^-radiusExp (interval inclusion)
        __int128 fl = d.floorLog2();
        if (fl >= -s.radiusExp) return false;            // d >= radius already
        if (cert.slackExp < s.radiusExp + 1) return false;  // positive d forces S > R
        if (fl <= -s.radiusExp - 2) continue;            // d < r/2 and slack <= r/2
        // borderline octave: exact gap fits in the mantissa budget
        auto re = static_cast<long long>(s.radiusExp);
        Dyadic gap = Dyadic::fromPow2(-re) - d;
        if (!geqPow2(gap, cert.slackExp)) return false;
    }
    return true;
}

ShiftTransfer frameShiftTransfer(const std::vector<double>& shifts) {
    ShiftTransfer tr;
    tr.witness = intersectionWitness(shifts);
    tr.z = tr.witness.zApprox;
    tr.epsMaxExp = tr.witness.slackExp - 1;
    tr.epsMaxApprox =
        tr.epsMaxExp < 1074 ? std::ldexp(1.0, -static_cast<int>(tr.epsMaxExp)) : 0.0;
    return tr;
}

}  // namespace expframe
