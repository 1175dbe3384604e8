#include "expframe/point_measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace expframe {

TrigPolynomial::TrigPolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.frequency < b.frequency; });
    for (std::size_t i = 1; i < terms_.size(); ++i)
        if (terms_[i].frequency == terms_[i - 1].frequency)
            throw std::invalid_argument("TrigPolynomial: duplicate frequency " +
                                        std::to_string(terms_[i].frequency));
}

TrigPolynomial TrigPolynomial::constant(std::complex<double> c) {
    return TrigPolynomial({{0.0, c}});
}

std::complex<double> TrigPolynomial::eval(double lambda) const {
    std::complex<double> acc{0.0, 0.0};
    for (const Term& t : terms_) acc += t.coefficient * cisNeg(t.frequency * lambda);
    return acc;
}

double TrigPolynomial::squaredModulus(double lambda) const {
    return std::norm(eval(lambda));
}

TrigPolynomial TrigPolynomial::operator*(const TrigPolynomial& other) const {
    std::vector<Term> prod;
    for (const Term& a : terms_)
        for (const Term& b : other.terms_) {
            double f = a.frequency + b.frequency;
            auto it = std::find_if(prod.begin(), prod.end(),
                                   [f](const Term& t) { return t.frequency == f; });
            if (it == prod.end())
                prod.push_back({f, a.coefficient * b.coefficient});
            else
                it->coefficient += a.coefficient * b.coefficient;
        }
    return TrigPolynomial(std::move(prod));
}

namespace {

void checkWeights(const std::vector<double>& w) {
    for (double x : w)
        if (!(x >= 0.0)) throw std::invalid_argument("PointMeasure: negative or NaN weight");
}

}  // namespace

PointMeasure PointMeasure::fromAtoms(std::vector<double> positions, std::vector<double> weights) {
    if (positions.size() != weights.size())
        throw std::invalid_argument("PointMeasure: positions/weights size mismatch");
    checkWeights(weights);
    std::vector<std::size_t> order(positions.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return positions[a] < positions[b]; });

    PointMeasure m;
    m.dim_ = 1;
    m.pos_.reserve(positions.size());
    m.weights_.reserve(positions.size());
    for (std::size_t idx : order) {
        double p = positions[idx], w = weights[idx];
        if (!m.pos_.empty() && m.pos_.back() == p)
            m.weights_.back() += w;  // duplicate positions merge by weight summation
        else {
            m.pos_.push_back(p);
            m.weights_.push_back(w);
        }
    }
    m.prefix_ = DDPrefix(m.weights_.size());
    for (double w : m.weights_) m.prefix_.push(w);
    return m;
}

PointMeasure PointMeasure::fromAtoms(const std::vector<double>& positions, double weight) {
    return fromAtoms(positions, std::vector<double>(positions.size(), weight));
}

PointMeasure PointMeasure::fromAtoms2(std::vector<std::array<double, 2>> positions,
                                      std::vector<double> weights) {
    if (positions.size() != weights.size())
        throw std::invalid_argument("PointMeasure: positions/weights size mismatch");
    checkWeights(weights);
    std::vector<std::size_t> order(positions.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return positions[a] < positions[b];
    });
    PointMeasure m;
    m.dim_ = 2;
    for (std::size_t idx : order) {
        if (!m.pos2_.empty() && m.pos2_.back() == positions[idx])
            m.weights_.back() += weights[idx];
        else {
            m.pos2_.push_back(positions[idx]);
            m.weights_.push_back(weights[idx]);
        }
    }
    return m;
}

double PointMeasure::totalMass() const {
    if (dim_ == 1) return prefix_.get(0, weights_.size());
    CompensatedSum s;
    for (double w : weights_) s.add(w);
    return s.value();
}

std::size_t PointMeasure::zeroWeightCount() const {
    return static_cast<std::size_t>(std::count(weights_.begin(), weights_.end(), 0.0));
}

Interval PointMeasure::extent() const {
    if (dim_ != 1) throw std::logic_error("extent(): 1-D only, use extent2");
    if (pos_.empty()) return {0.0, 0.0};
    return {pos_.front(), pos_.back()};
}

Interval PointMeasure::extent2(int axis) const {
    if (dim_ != 2) throw std::logic_error("extent2(): 2-D only");
    if (pos2_.empty()) return {0.0, 0.0};
    double lo = pos2_[0][axis], hi = pos2_[0][axis];
    for (const auto& p : pos2_) {
        lo = std::min(lo, p[axis]);
        hi = std::max(hi, p[axis]);
    }
    return {lo, hi};
}

std::pair<std::size_t, std::size_t> PointMeasure::atomRange(double lo, double hi) const {
    auto first = std::lower_bound(pos_.begin(), pos_.end(), lo);
    auto last = std::upper_bound(pos_.begin(), pos_.end(), hi);
    return {static_cast<std::size_t>(first - pos_.begin()),
            static_cast<std::size_t>(last - pos_.begin())};
}

double PointMeasure::mass(const Window& w) const {
    if (dim_ != 1) throw std::logic_error("mass(): 1-D only, use mass2");
    auto [a, b] = atomRange(w.lo(), w.hi());
    if (a >= b) return 0.0;
    return prefix_.get(a, b);
}

double PointMeasure::mass2(const Window2& w) const {
    if (dim_ != 2) throw std::logic_error("mass2(): 2-D only");
    const double xlo = w.corner[0], xhi = w.corner[0] + w.side;
    const double ylo = w.corner[1], yhi = w.corner[1] + w.side;
    auto first = std::lower_bound(pos2_.begin(), pos2_.end(),
                                  std::array<double, 2>{xlo, -std::numeric_limits<double>::infinity()});
    CompensatedSum s;
    for (auto it = first; it != pos2_.end() && (*it)[0] <= xhi; ++it)
        if ((*it)[1] >= ylo && (*it)[1] <= yhi)
            s.add(weights_[static_cast<std::size_t>(it - pos2_.begin())]);
    return s.value();
}

std::size_t PointMeasure::boundaryAtoms(const Window& w) const {
    std::size_t n = 0;
    for (double edge : {w.lo(), w.hi()}) {
        auto [a, b] = atomRange(edge, edge);
        n += b - a;
    }
    return n;
}

LoadResult loadPointSet(const std::string& path, double defaultWeight, int dimension) {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("loadPointSet: dimension must be 1 or 2");
    if (!(defaultWeight >= 0.0))
        throw std::invalid_argument("loadPointSet: default weight must be nonnegative");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("loadPointSet: cannot open " + path);

    std::vector<double> pos, w;
    std::vector<std::array<double, 2>> pos2;
    std::string line;
    std::size_t lineNo = 0, parsed = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> fields;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw std::runtime_error("loadPointSet: parse error at line " +
                                         std::to_string(lineNo) + ": '" + tok + "'");
            }
            if (used != tok.size())
                throw std::runtime_error("loadPointSet: parse error at line " +
                                         std::to_string(lineNo) + ": '" + tok + "'");
            fields.push_back(v);
        }
        if (fields.empty()) continue;
        const std::size_t need = static_cast<std::size_t>(dimension);
        if (fields.size() < need || fields.size() > need + 1)
            throw std::runtime_error("loadPointSet: wrong field count at line " +
                                     std::to_string(lineNo));
        double weight = fields.size() == need + 1 ? fields[need] : defaultWeight;
        if (weight < 0.0)
            throw std::runtime_error("loadPointSet: negative weight at line " +
                                     std::to_string(lineNo));
        if (dimension == 1)
            pos.push_back(fields[0]);
        else
            pos2.push_back({fields[0], fields[1]});
        w.push_back(weight);
        ++parsed;
    }
    LoadResult r;
    r.linesParsed = parsed;
    r.measure = dimension == 1 ? PointMeasure::fromAtoms(std::move(pos), std::move(w))
                               : PointMeasure::fromAtoms2(std::move(pos2), std::move(w));
    r.mergedDuplicates = parsed - r.measure.size();
    return r;
}

void savePointSet(const std::string& path, const PointMeasure& mu) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("savePointSet: cannot open " + path);
    out.precision(17);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu.dimension() == 1)
            out << mu.positions()[i];
        else
            out << mu.positions2()[i][0] << ' ' << mu.positions2()[i][1];
        out << ' ' << mu.weights()[i] << '\n';
    }
}

PointMeasure lebesgueApprox(double spacing, Interval extent) {
    if (!(spacing > 0.0)) throw std::invalid_argument("lebesgueApprox: spacing must be > 0");
    double len = extent.length();
    if (!(len > 0.0)) throw std::invalid_argument("lebesgueApprox: empty extent");
    auto count = static_cast<std::size_t>(std::ceil(len / spacing));
    std::vector<double> pos(count);
    for (std::size_t k = 0; k < count; ++k) pos[k] = extent.lo + static_cast<double>(k) * spacing;
    return PointMeasure::fromAtoms(pos, std::vector<double>(count, spacing));
}

TranslationBound translationBoundedCheck(const PointMeasure& mu, double unit) {
    if (!(unit > 0.0)) throw std::invalid_argument("translationBoundedCheck: unit must be > 0");
    TranslationBound best;
    // Sup over all real corners is attained with the window's left end at an atom.
    const auto& pos = mu.positions();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        auto [a, b] = mu.atomRange(pos[i], pos[i] + unit);
        double m = mu.massRange(a, b);
        if (m > best.supUnitMass) {
            best.supUnitMass = m;
            best.windowCorner = pos[i];
        }
    }
    return best;
}

PointMeasure applyEnvelope(const PointMeasure& mu, const TrigPolynomial& p) {
    if (mu.dimension() != 1) throw std::invalid_argument("applyEnvelope: 1-D measures only");
    std::vector<double> w(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        w[i] = mu.weights()[i] * p.squaredModulus(mu.positions()[i]);
    return PointMeasure::fromAtoms(mu.positions(), std::move(w));
}

}  // namespace expframe
