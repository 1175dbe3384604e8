#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "expframe/summation.hpp"

namespace expframe {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Closed window [corner, corner+side] (1-D) or the corresponding square (2-D).
struct Window {
    double corner = 0.0;
    double side = 1.0;
    double lo() const { return corner; }
    double hi() const { return corner + side; }
};

struct Window2 {
    std::array<double, 2> corner{0.0, 0.0};
    double side = 1.0;
};

/// Finite trigonometric polynomial P(lambda) = sum_i c_i e^{-2 pi i x_i lambda},
/// distinct sorted frequencies.
class TrigPolynomial {
public:
    struct Term {
        double frequency;
        std::complex<double> coefficient;
    };

    TrigPolynomial() = default;
    explicit TrigPolynomial(std::vector<Term> terms);

    static TrigPolynomial constant(std::complex<double> c);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    std::complex<double> eval(double lambda) const;
    double squaredModulus(double lambda) const;

    /// Pointwise product; frequencies add, equal frequencies merge.
    TrigPolynomial operator*(const TrigPolynomial& other) const;

private:
    std::vector<Term> terms_;
};

/// Weighted atomic positive measure with sorted atoms, merged duplicates and
/// double-double prefix weights (1-D).  Immutable after construction.
class PointMeasure {
public:
    PointMeasure() = default;

    /// 1-D constructor. Atoms are sorted, duplicates (bitwise-equal positions)
    /// merged by weight summation. Negative weights are rejected.
    static PointMeasure fromAtoms(std::vector<double> positions, std::vector<double> weights);
    static PointMeasure fromAtoms(const std::vector<double>& positions, double weight = 1.0);

    /// 2-D constructor, atoms sorted lexicographically.
    static PointMeasure fromAtoms2(std::vector<std::array<double, 2>> positions,
                                   std::vector<double> weights);

    int dimension() const { return dim_; }
    std::size_t size() const { return weights_.size(); }
    bool empty() const { return weights_.empty(); }

    const std::vector<double>& positions() const { return pos_; }
    const std::vector<std::array<double, 2>>& positions2() const { return pos2_; }
    const std::vector<double>& weights() const { return weights_; }

    double totalMass() const;
    std::size_t zeroWeightCount() const;

    Interval extent() const;           // 1-D
    Interval extent2(int axis) const;  // 2-D bounding box per axis

    /// Index range [first, last) of atoms with position in [lo, hi] (1-D).
    std::pair<std::size_t, std::size_t> atomRange(double lo, double hi) const;

    /// Exact mass of the closed window.
    double mass(const Window& w) const;
    double mass2(const Window2& w) const;

    /// Atoms sitting exactly on a window endpoint (shared closed boundaries).
    std::size_t boundaryAtoms(const Window& w) const;

    double massRange(std::size_t first, std::size_t last) const { return prefix_.get(first, last); }

private:
    int dim_ = 1;
    std::vector<double> pos_;                     // 1-D positions
    std::vector<std::array<double, 2>> pos2_;     // 2-D positions
    std::vector<double> weights_;
    DDPrefix prefix_;  // 1-D only
};

struct LoadResult {
    PointMeasure measure;
    std::size_t linesParsed = 0;
    std::size_t mergedDuplicates = 0;
};

/// Text point-set loader: UTF-8, '#' comments, one atom per line as
/// "position [weight]" (1-D) or "x y [weight]" (2-D).
LoadResult loadPointSet(const std::string& path, double defaultWeight = 1.0, int dimension = 1);

void savePointSet(const std::string& path, const PointMeasure& mu);

/// Discrete surrogate for Lebesgue measure: atoms on a half-open grid
/// extent.lo + k*spacing (k = 0 .. ceil(len/spacing)-1), each of weight = spacing.
PointMeasure lebesgueApprox(double spacing, Interval extent);

struct TranslationBound {
    double supUnitMass = 0.0;
    double windowCorner = 0.0;
};

/// Exact sup over t of mass([t, t+unit]) within the extent; the translation-
/// boundedness constant of the truncated measure and its achieving window.
TranslationBound translationBoundedCheck(const PointMeasure& mu, double unit = 1.0);

/// Reweight atoms by |P(position)|^2. Zero-weight atoms are retained so that
/// atom counts remain comparable; positions are unchanged.
PointMeasure applyEnvelope(const PointMeasure& mu, const TrigPolynomial& p);

}  // namespace expframe
