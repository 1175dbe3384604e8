#include "expframe/groups.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expframe {

namespace {
constexpr double kBoundaryTol = 1e-9;
}

bool parseRational(const std::string& s, Rational& out) {
    if (s.empty()) return false;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        try {
            std::size_t u1 = 0, u2 = 0;
            long long n = std::stoll(s.substr(0, slash), &u1);
            long long d = std::stoll(s.substr(slash + 1), &u2);
            if (u1 != slash || u2 != s.size() - slash - 1 || d == 0) return false;
            out = Rational(n, d);
            return true;
        } catch (const std::exception&) {
            return false;
        }
    }
    // integer or plain decimal
    auto dot = s.find('.');
    std::string digits = s;
    long long den = 1;
    if (dot != std::string::npos) {
        std::string frac = s.substr(dot + 1);
        if (frac.size() > 15) return false;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        digits = s.substr(0, dot) + frac;
    }
    try {
        std::size_t used = 0;
        long long n = std::stoll(digits, &used);
        if (used != digits.size()) return false;
        out = Rational(n, den);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

Generator parseGenerator(const std::string& text) {
    Generator g;
    g.spelling = text;
    auto sq = text.find("sqrt");
    if (sq != std::string::npos) {
        std::string before = text.substr(0, sq);
        std::string after = text.substr(sq + 4);
        Rational p(0), q(1);
        try {
            std::size_t used = 0;
            long long d = std::stoll(after, &used);
            if (used != after.size() || d < 2 || isPerfectSquare(d)) throw std::exception();
            // forms: sqrtD | qsqrtD | p+qsqrtD | p-qsqrtD
            if (!before.empty()) {
                auto split = before.find_last_of("+-");
                if (split == std::string::npos || split == 0) {
                    std::string qs = before;
                    bool neg = false;
                    if (split == 0) {
                        neg = before[0] == '-';
                        qs = before.substr(1);
                    }
                    if (!qs.empty() && !parseRational(qs, q)) throw std::exception();
                    if (qs.empty()) q = Rational(1);
                    if (neg) q = -q;
                } else {
                    if (!parseRational(before.substr(0, split), p)) throw std::exception();
                    std::string qs = before.substr(split + 1);
                    if (qs.empty())
                        q = Rational(1);
                    else if (!parseRational(qs, q))
                        throw std::exception();
                    if (before[split] == '-') q = -q;
                }
            }
            g.tag = Generator::Tag::QuadraticIrrational;
            g.p = p;
            g.q = q;
            g.d = d;
            g.value = p.value() + q.value() * std::sqrt(static_cast<double>(d));
            return g;
        } catch (const std::exception&) {
            // fall through to opaque parsing
        }
    }
    Rational r;
    if (parseRational(text, r)) {
        g.tag = Generator::Tag::Rational;
        g.r = r;
        g.value = r.value();
        return g;
    }
    try {
        std::size_t used = 0;
        g.value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("parseGenerator: cannot parse '" + text + "'");
    }
    g.tag = Generator::Tag::Opaque;
    return g;
}

SubgroupSpec::SubgroupSpec(std::vector<Generator> gens) : gens_(std::move(gens)) {
    if (gens_.empty()) throw std::invalid_argument("SubgroupSpec: at least one generator");
    for (const auto& g : gens_)
        if (!(g.value > 0.0))
            throw std::invalid_argument("SubgroupSpec: generators must be positive");
    for (std::size_t i = 0; i < gens_.size(); ++i)
        for (std::size_t j = i + 1; j < gens_.size(); ++j)
            if (gens_[i].value == gens_[j].value)
                throw std::invalid_argument("SubgroupSpec: generators must be distinct");
}

SubgroupSpec SubgroupSpec::parse(const std::string& commaSeparated) {
    std::vector<Generator> gens;
    std::size_t start = 0;
    while (start <= commaSeparated.size()) {
        auto comma = commaSeparated.find(',', start);
        std::string tok = commaSeparated.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!tok.empty()) gens.push_back(parseGenerator(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return SubgroupSpec(std::move(gens));
}

double SubgroupSpec::generatorProduct() const {
    double p = 1.0;
    for (const auto& g : gens_) p *= g.value;
    return p;
}

namespace {

// Continued-fraction probe: is ratio within 1e-12 of a rational with a small
// denominator?  A generic irrational needs q ~ 1e6 for that accuracy, so the
// denominator cap keeps the probe quiet on honest irrationals.
std::optional<std::pair<long long, long long>> cfRationalProbe(double ratio) {
    double x = ratio;
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(x);
        auto ai = static_cast<long long>(a);
        long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 == 0 || k2 > 10'000) break;
        double approx = static_cast<double>(h2) / static_cast<double>(k2);
        if (std::abs(approx - ratio) <= 1e-12 * std::max(1.0, std::abs(ratio)))
            return std::make_pair(h2, k2);
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    return std::nullopt;
}

}  // namespace

std::vector<std::string> SubgroupSpec::dependencyWarnings() const {
    std::vector<std::string> warnings;
    using Tag = Generator::Tag;
    for (std::size_t i = 0; i < gens_.size(); ++i)
        for (std::size_t j = i + 1; j < gens_.size(); ++j) {
            const Generator& a = gens_[i];
            const Generator& b = gens_[j];
            if (a.tag == Tag::Rational && b.tag == Tag::Rational) {
                warnings.push_back("generators '" + a.spelling + "' and '" + b.spelling +
                                   "' are both rational, hence Q-linearly dependent");
                continue;
            }
            if (a.tag == Tag::QuadraticIrrational && b.tag == Tag::QuadraticIrrational &&
                a.d == b.d) {
                // (p1+q1 s)/(p2+q2 s) rational iff p1 q2 == p2 q1 and then also
                // the rational parts match ratio; detect the proportional case.
                Rational cross1 = a.p * b.q - b.p * a.q;
                if (cross1.isZero() && !(a.q.isZero() && b.q.isZero())) {
                    warnings.push_back("generators '" + a.spelling + "' and '" + b.spelling +
                                       "' are exactly rationally dependent");
                    continue;
                }
            }
            if (auto pq = cfRationalProbe(a.value / b.value)) {
                warnings.push_back("generator ratio " + a.spelling + "/" + b.spelling +
                                   " is within 1e-12 of " + std::to_string(pq->first) + "/" +
                                   std::to_string(pq->second));
            }
        }
    return warnings;
}

double ResidueCellQuery::cellProduct() const {
    double p = 1.0;
    for (const auto& c : cells) p *= c.length();
    return p;
}

void validateQuery(const SubgroupSpec& g, const ResidueCellQuery& q) {
    if (q.cells.size() != g.size())
        throw std::invalid_argument("ResidueCellQuery: one cell per generator required");
    for (std::size_t k = 0; k < q.cells.size(); ++k) {
        double modulus = 1.0 / g.generators()[k].value;
        const Interval& c = q.cells[k];
        if (!(0.0 <= c.lo && c.lo < c.hi && c.hi <= modulus))
            throw std::invalid_argument("ResidueCellQuery: cell " + std::to_string(k) +
                                        " must satisfy 0 <= lo < hi <= 1/a_k");
    }
}

namespace {

struct ResidueIndicator {
    bool inside = false;
    bool nearBoundary = false;
};

ResidueIndicator residueTest(double lambda, const SubgroupSpec& g, const ResidueCellQuery& q) {
    ResidueIndicator r;
    r.inside = true;
    for (std::size_t k = 0; k < g.size(); ++k) {
        double a = g.generators()[k].value;
        double modulus = 1.0 / a;
        double res = lambda - modulus * std::floor(lambda * a);
        // guard against floating carry at cell boundaries
        if (res < 0.0) res += modulus;
        if (res >= modulus) res -= modulus;
        const Interval& cell = q.cells[k];
        double distBoundary = std::min(std::min(std::abs(res - cell.lo), std::abs(res - cell.hi)),
                                       std::min(res, modulus - res));
        if (distBoundary <= kBoundaryTol) r.nearBoundary = true;
        if (!(res >= cell.lo && res < cell.hi)) r.inside = false;
    }
    return r;
}

}  // namespace

ResidueMass residueCellMass(const PointMeasure& mu, const SubgroupSpec& g, double t, double R,
                            const ResidueCellQuery& q) {
    validateQuery(g, q);
    if (!(R > 0.0)) throw std::invalid_argument("residueCellMass: R must be > 0");
    ResidueMass out;
    auto [a, b] = mu.atomRange(t, t + R);
    CompensatedSum s;
    for (std::size_t i = a; i < b; ++i) {
        ResidueIndicator ind = residueTest(mu.positions()[i], g, q);
        if (ind.nearBoundary) ++out.boundaryFlags;
        if (ind.inside) s.add(mu.weights()[i]);
    }
    out.mass = s.value();
    return out;
}

UniformVerdict uniformGroupTest(const PointMeasure& mu, const SubgroupSpec& g,
                                const std::vector<ResidueCellQuery>& queries,
                                const std::vector<double>& rLadder, double targetA,
                                double targetB, double tolerance, double tStepOverride) {
    if (queries.empty()) throw std::invalid_argument("uniformGroupTest: no queries");
    if (rLadder.empty()) throw std::invalid_argument("uniformGroupTest: empty R ladder");
    for (std::size_t i = 1; i < rLadder.size(); ++i)
        if (!(rLadder[i] > rLadder[i - 1]))
            throw std::invalid_argument("uniformGroupTest: R ladder must be increasing");
    Interval e = mu.extent();
    if (e.length() < rLadder.back())
        throw std::invalid_argument("uniformGroupTest: largest R does not fit extent");

    const double prodA = g.generatorProduct();
    UniformVerdict verdict;
    verdict.targetA = targetA;
    verdict.targetB = targetB;
    verdict.tolerance = tolerance;

    for (const auto& q : queries) {
        validateQuery(g, q);
        QueryVerdict qv;
        qv.query = q;
        // masked prefix: one pass over atoms per query
        DDPrefix masked(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) {
            ResidueIndicator ind = residueTest(mu.positions()[i], g, q);
            if (ind.nearBoundary) ++verdict.boundaryFlags;
            masked.push(ind.inside ? mu.weights()[i] : 0.0);
        }
        for (double R : rLadder) {
            UniformTrace tr;
            tr.R = R;
            double step = tStepOverride > 0.0 ? tStepOverride : R / 200.0;
            bool first = true;
            auto probe = [&](double t) {
                auto [a, b] = mu.atomRange(t, t + R);
                double ratio = (a < b ? masked.get(a, b) : 0.0) / (R * prodA);
                if (first || ratio > tr.supRatio) tr.supRatio = ratio;
                if (first || ratio < tr.infRatio) tr.infRatio = ratio;
                first = false;
            };
            for (double t = e.lo; t <= e.hi - R; t += step) probe(t);
            for (double t : mu.positions())
                if (t >= e.lo && t <= e.hi - R) probe(t);
            probe(e.hi - R);
            qv.trace.push_back(tr);
        }
        double cells = q.cellProduct();
        qv.Ahat = qv.trace.back().infRatio / cells;
        qv.Bhat = qv.trace.back().supRatio / cells;
        verdict.perQuery.push_back(std::move(qv));
    }

    verdict.Ahat = verdict.perQuery.front().Ahat;
    verdict.Bhat = verdict.perQuery.front().Bhat;
    for (const auto& qv : verdict.perQuery) {
        verdict.Ahat = std::min(verdict.Ahat, qv.Ahat);
        verdict.Bhat = std::max(verdict.Bhat, qv.Bhat);
    }
    verdict.bPass = verdict.Bhat <= targetB * (1.0 + tolerance);
    verdict.aPass = verdict.Ahat >= targetA * (1.0 - tolerance);
    verdict.tightPass = true;
    for (const auto& qv : verdict.perQuery) {
        double mid = 0.5 * (targetA + targetB);
        if (std::abs(qv.Bhat - qv.Ahat) > tolerance * std::max(1e-300, std::abs(mid)) * 2.0)
            verdict.tightPass = false;
    }
    verdict.tightPass = verdict.tightPass && verdict.aPass && verdict.bPass;
    return verdict;
}

double trigPolyWindowAverage(const PointMeasure& mu, const TrigPolynomial& p, double t,
                             double R) {
    if (!(R > 0.0)) throw std::invalid_argument("trigPolyWindowAverage: R must be > 0");
    auto [a, b] = mu.atomRange(t, t + R);
    CompensatedSum s;
    for (std::size_t i = a; i < b; ++i)
        s.add(mu.weights()[i] * p.squaredModulus(mu.positions()[i]));
    return s.value() / R;
}

std::vector<TrigSweepEntry> trigPolyAverageSweep(const PointMeasure& mu, const TrigPolynomial& p,
                                                 const std::vector<double>& rLadder) {
    PointMeasure env = applyEnvelope(mu, p);
    std::vector<TrigSweepEntry> out;
    for (double R : rLadder) {
        SlidingExtremes ex = slidingExtremes(env, R);
        out.push_back({R, ex.supRatio, ex.infRatio});
    }
    return out;
}

double meanOfSquaredModulus(const TrigPolynomial& p) {
    CompensatedSum s;
    for (const auto& t : p.terms()) s.add(std::norm(t.coefficient));
    return s.value();
}

WellDistReport wellDistributedTest(const std::vector<double>& lambdaSeq, double b, Interval cell,
                                   const std::vector<std::size_t>& nLadder, double tolerance) {
    if (!(b > 0.0)) throw std::invalid_argument("wellDistributedTest: b must be > 0");
    if (!(0.0 <= cell.lo && cell.lo < cell.hi && cell.hi <= b))
        throw std::invalid_argument("wellDistributedTest: interval must satisfy 0 <= lo < hi <= b");
    for (std::size_t i = 1; i < lambdaSeq.size(); ++i)
        if (!(lambdaSeq[i] > lambdaSeq[i - 1]))
            throw std::invalid_argument("wellDistributedTest: sequence must be strictly increasing");
    if (nLadder.empty()) throw std::invalid_argument("wellDistributedTest: empty N ladder");

    std::vector<double> prefix(lambdaSeq.size() + 1, 0.0);
    for (std::size_t i = 0; i < lambdaSeq.size(); ++i) {
        double res = lambdaSeq[i] - b * std::floor(lambdaSeq[i] / b);
        if (res < 0.0) res += b;
        if (res >= b) res -= b;
        bool inside = res >= cell.lo && res < cell.hi;
        prefix[i + 1] = prefix[i] + (inside ? 1.0 : 0.0);
    }

    WellDistReport rep;
    rep.expected = cell.length() / b;
    rep.tolerance = tolerance;
    for (std::size_t n : nLadder) {
        if (n == 0 || n > lambdaSeq.size())
            throw std::invalid_argument("wellDistributedTest: N exceeds sequence length");
        WellDistTrace tr;
        tr.n = n;
        tr.maxFreq = 0.0;
        tr.minFreq = 1.0;
        for (std::size_t m = 0; m + n <= lambdaSeq.size(); ++m) {
            double f = (prefix[m + n] - prefix[m]) / static_cast<double>(n);
            tr.maxFreq = std::max(tr.maxFreq, f);
            tr.minFreq = std::min(tr.minFreq, f);
        }
        rep.trace.push_back(tr);
    }
    const WellDistTrace& last = rep.trace.back();
    rep.pass = std::abs(last.maxFreq - rep.expected) <= tolerance &&
               std::abs(last.minFreq - rep.expected) <= tolerance;
    return rep;
}

}  // namespace expframe
