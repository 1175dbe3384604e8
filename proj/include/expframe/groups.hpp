#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expframe/density.hpp"
#include "expframe/point_measure.hpp"
#include "expframe/quadratic_field.hpp"

namespace expframe {

/// Subgroup generator with a symbolic tag. Q-linear independence is a user
/// assertion; rational dependence is only probed, never verified.
struct Generator {
    enum class Tag { Rational, QuadraticIrrational, Opaque };
    Tag tag = Tag::Opaque;
    double value = 0.0;
    Rational r;            // Rational tag
    Rational p, q;         // QuadraticIrrational: p + q*sqrt(d)
    long long d = 0;
    std::string spelling;
};

/// Accepts "1", "3/2", "0.25", "sqrt2", "2sqrt3", "1+2sqrt5"; anything else
/// parses as an opaque float.
Generator parseGenerator(const std::string& text);

class SubgroupSpec {
public:
    explicit SubgroupSpec(std::vector<Generator> gens);
    static SubgroupSpec parse(const std::string& commaSeparated);

    const std::vector<Generator>& generators() const { return gens_; }
    std::size_t size() const { return gens_.size(); }
    double generatorProduct() const;

    /// Pairwise rational-dependence probe (exact for tagged pairs, continued
    /// fractions within 1e-12 otherwise). Returns human-readable warnings.
    std::vector<std::string> dependencyWarnings() const;

private:
    std::vector<Generator> gens_;
};

/// Residue cells I_k = [lo_k, hi_k) in [0, 1/a_k), one per generator.
struct ResidueCellQuery {
    std::vector<Interval> cells;
    double cellProduct() const;
};

void validateQuery(const SubgroupSpec& g, const ResidueCellQuery& q);

struct ResidueMass {
    double mass = 0.0;
    std::size_t boundaryFlags = 0;  // atoms within 1e-9 of a cell boundary
};

/// Weight of atoms lambda in [t, t+R] with lambda mod a_k^{ -1} in I_k for
/// every k.
ResidueMass residueCellMass(const PointMeasure& mu, const SubgroupSpec& g, double t, double R,
                            const ResidueCellQuery& q);

struct UniformTrace {
    double R = 0.0;
    double supRatio = 0.0;  // sup_t mass/(R*a_1*...*a_s)
    double infRatio = 0.0;
};

struct QueryVerdict {
    ResidueCellQuery query;
    std::vector<UniformTrace> trace;
    double Ahat = 0.0;  // infRatio/(prod |I_k|) at the largest R
    double Bhat = 0.0;
};

struct UniformVerdict {
    std::vector<QueryVerdict> perQuery;
    double Ahat = 0.0;  // min over queries
    double Bhat = 0.0;  // max over queries
    bool aPass = false;
    bool bPass = false;
    bool tightPass = false;
    double targetA = 0.0, targetB = 0.0, tolerance = 0.0;
    std::size_t boundaryFlags = 0;
};

/// Normalized residue-cell window masses over an R ladder; the empirical
/// limiting bounds Ahat/Bhat are read at the largest R. The t probe uses atom
/// positions plus a uniform grid of step R/200 (one-sided bounds).
UniformVerdict uniformGroupTest(const PointMeasure& mu, const SubgroupSpec& g,
                                const std::vector<ResidueCellQuery>& queries,
                                const std::vector<double>& rLadder, double targetA,
                                double targetB, double tolerance = 0.02,
                                double tStepOverride = 0.0);

/// (1/R) sum_{lambda in [t,t+R]} w |P(lambda)|^2, compensated.
double trigPolyWindowAverage(const PointMeasure& mu, const TrigPolynomial& p, double t, double R);

struct TrigSweepEntry {
    double R = 0.0;
    double sup = 0.0;
    double inf = 0.0;
};

/// Exact sup/inf traces of the windowed average over an R ladder (delegates to
/// the envelope measure's sliding sweep).
std::vector<TrigSweepEntry> trigPolyAverageSweep(const PointMeasure& mu, const TrigPolynomial& p,
                                                 const std::vector<double>& rLadder);

/// M(|P|^2) = sum |c_i|^2 for distinct frequencies.
double meanOfSquaredModulus(const TrigPolynomial& p);

struct WellDistTrace {
    std::size_t n = 0;
    double maxFreq = 0.0;
    double minFreq = 0.0;
};

struct WellDistReport {
    std::vector<WellDistTrace> trace;
    double expected = 0.0;  // |I|/b
    bool pass = false;
    double tolerance = 0.0;
};

/// Windowed residue frequencies #{n in [M, M+N-1]: lambda_n mod b in I}/N,
/// extremized over all M, for each N in the ladder. PASS when both traces
/// settle at |I|/b within the tolerance at the largest N.
WellDistReport wellDistributedTest(const std::vector<double>& lambdaSeq, double b, Interval cell,
                                   const std::vector<std::size_t>& nLadder,
                                   double tolerance = 0.01);

}  // namespace expframe
