#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace expframe {

// Error-free transform: s + err == a + b exactly.
inline void twoSum(double a, double b, double& s, double& err) {
    s = a + b;
    double bv = s - a;
    err = (a - (s - bv)) + (b - bv);
}

/// Double-double value; keeps ~32 significant decimal digits through long
/// accumulations so that differences of prefix sums stay accurate.
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    void add(double x) {
        double s, e;
        twoSum(hi, x, s, e);
        lo += e;
        hi = s;
        // renormalize
        twoSum(hi, lo, s, e);
        hi = s;
        lo = e;
    }
    void add(const DD& o) {
        add(o.hi);
        add(o.lo);
    }
    void sub(const DD& o) {
        add(-o.hi);
        add(-o.lo);
    }
    double value() const { return hi + lo; }
};

/// Neumaier-compensated running sum for one-pass accumulations.
struct CompensatedSum {
    double sum = 0.0;
    double c = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

/// e^{-2*pi*i*x} with argument reduced to [-1/2,1/2] before scaling by 2*pi.
/// remainder() is exact, so integer x gives exactly (1, 0).
inline std::complex<double> cisNeg(double x) {
    static constexpr double twoPi = 6.283185307179586476925286766559;
    double r = std::remainder(x, 1.0);
    double a = twoPi * r;
    return {std::cos(a), -std::sin(a)};
}

/// Prefix sums in double-double form; get(i, j) is the sum of entries [i, j).
class DDPrefix {
public:
    DDPrefix() = default;
    explicit DDPrefix(std::size_t n) {
        hi_.reserve(n + 1);
        lo_.reserve(n + 1);
    }

    void push(double x) {
        DD acc{hi_.back(), lo_.back()};
        acc.add(x);
        hi_.push_back(acc.hi);
        lo_.push_back(acc.lo);
    }
    std::size_t size() const { return hi_.size() - 1; }
    double get(std::size_t i, std::size_t j) const {
        DD a{hi_[j], lo_[j]};
        a.sub(DD{hi_[i], lo_[i]});
        return a.value();
    }

private:
    std::vector<double> hi_{0.0};
    std::vector<double> lo_{0.0};
};

/// Complex prefix sums (pair of DDPrefix).
class ComplexPrefix {
public:
    ComplexPrefix() = default;
    explicit ComplexPrefix(std::size_t n) : re_(n), im_(n) {}

    void push(std::complex<double> z) {
        re_.push(z.real());
        im_.push(z.imag());
    }
    std::size_t size() const { return re_.size(); }
    std::complex<double> get(std::size_t i, std::size_t j) const {
        return {re_.get(i, j), im_.get(i, j)};
    }

private:
    DDPrefix re_;
    DDPrefix im_;
};

}  // namespace expframe
