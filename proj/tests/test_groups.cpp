#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "expframe/groups.hpp"
#include "expframe/point_generators.hpp"

using namespace expframe;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST_CASE("generator parsing and dependency probe") {
    Generator one = parseGenerator("1");
    CHECK(one.tag == Generator::Tag::Rational);
    CHECK(one.value == 1.0);

    Generator half = parseGenerator("3/2");
    CHECK(half.tag == Generator::Tag::Rational);
    CHECK(half.value == 1.5);

    Generator dec = parseGenerator("0.25");
    CHECK(dec.tag == Generator::Tag::Rational);
    CHECK(dec.r == Rational(1, 4));

    Generator s2 = parseGenerator("sqrt2");
    CHECK(s2.tag == Generator::Tag::QuadraticIrrational);
    CHECK(s2.value == doctest::Approx(kSqrt2));

    Generator mixed = parseGenerator("1+2sqrt5");
    CHECK(mixed.tag == Generator::Tag::QuadraticIrrational);
    CHECK(mixed.value == doctest::Approx(1.0 + 2.0 * std::sqrt(5.0)));

    Generator opaque = parseGenerator("3.14159265358979");
    CHECK(opaque.tag == Generator::Tag::Rational);  // plain decimals stay exact rationals

    // two rationals are always dependent; rational vs sqrt2 is not
    CHECK(!SubgroupSpec({one, half}).dependencyWarnings().empty());
    CHECK(SubgroupSpec({one, s2}).dependencyWarnings().empty());
    // 2*sqrt2 vs sqrt2 is exactly dependent
    CHECK(!SubgroupSpec({parseGenerator("2sqrt2"), s2}).dependencyWarnings().empty());
    // continued-fraction probe catches near-rational opaque ratios
    Generator nearHalf = parseGenerator("0.49999999999999994");
    CHECK(!SubgroupSpec({one, nearHalf}).dependencyWarnings().empty());

    CHECK_THROWS_AS(parseGenerator("abc"), std::invalid_argument);
    CHECK_THROWS_AS(SubgroupSpec::parse("1,1"), std::invalid_argument);
    CHECK_THROWS_AS(SubgroupSpec::parse("-1"), std::invalid_argument);
}

TEST_CASE("residueCellMass examples") {
    PointMeasure z = lattice(1.0, {-10.0, 200.0});
    SubgroupSpec g = SubgroupSpec::parse("1");

    // every integer has residue 0
    ResidueMass full = residueCellMass(z, g, 0.0, 100.0, {{Interval{0.0, 0.1}}});
    CHECK(full.mass == 101.0);
    CHECK(full.boundaryFlags == 101);  // all residues sit exactly on the cell edge 0

    ResidueMass shifted = residueCellMass(z, g, 0.0, 100.0, {{Interval{0.4, 0.6}}});
    CHECK(shifted.mass == 0.0);

    // sqrt2 lattice: equidistribution of k sqrt2 mod 1 (direct-count oracle)
    PointMeasure s = lattice(kSqrt2, {0.0, 10000.0});
    ResidueMass quarter = residueCellMass(s, g, 0.0, 10000.0, {{Interval{0.0, 0.25}}});
    double direct = 0.0;
    for (double x : s.positions()) {
        double res = x - std::floor(x);
        if (x <= 10000.0 && res < 0.25) direct += 1.0;
    }
    CHECK(quarter.mass == direct);
    CHECK(quarter.mass == doctest::Approx(10000.0 / kSqrt2 / 4.0).epsilon(0.02));

    CHECK_THROWS_AS(residueCellMass(z, g, 0.0, 10.0, {{Interval{0.5, 1.5}}}),
                    std::invalid_argument);
}

TEST_CASE("residue cells partition the window mass") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 500.0);
    std::vector<double> p;
    for (int i = 0; i < 1200; ++i) p.push_back(u(rng));
    PointMeasure mu = PointMeasure::fromAtoms(p);
    SubgroupSpec g = SubgroupSpec::parse("2");  // modulus 1/2
    double total = 0.0;
    for (double lo = 0.0; lo < 0.5; lo += 0.125)
        total += residueCellMass(mu, g, 10.0, 300.0, {{Interval{lo, lo + 0.125}}}).mass;
    CHECK(total == doctest::Approx(mu.mass({10.0, 300.0})).epsilon(1e-12));
}

TEST_CASE("uniformGroupTest: sqrt2 lattice is tight at 1/sqrt2 over G=<1>") {
    PointMeasure s = lattice(kSqrt2, {0.0, 15000.0});
    SubgroupSpec g = SubgroupSpec::parse("1");
    std::vector<ResidueCellQuery> queries{{{Interval{0.0, 0.5}}},
                                          {{Interval{0.25, 0.75}}},
                                          {{Interval{0.1, 0.9}}},
                                          {{Interval{0.3, 0.55}}}};
    UniformVerdict v = uniformGroupTest(s, g, queries, {1000.0, 3000.0, 10000.0},
                                        1.0 / kSqrt2, 1.0 / kSqrt2, 0.02);
    CHECK(v.aPass);
    CHECK(v.bPass);
    CHECK(v.tightPass);
    CHECK(v.Ahat == doctest::Approx(1.0 / kSqrt2).epsilon(0.02));
    CHECK(v.Bhat == doctest::Approx(1.0 / kSqrt2).epsilon(0.02));
}

TEST_CASE("uniformGroupTest: integer lattice concentrates its residues") {
    PointMeasure z = lattice(1.0, {0.0, 15000.0});
    SubgroupSpec g = SubgroupSpec::parse("1");
    std::vector<ResidueCellQuery> queries{{{Interval{0.0, 0.1}}}};
    UniformVerdict v =
        uniformGroupTest(z, g, queries, {1000.0, 3000.0, 10000.0}, 5.0, 5.0, 0.02);
    CHECK(v.Bhat == doctest::Approx(10.0).epsilon(0.01));  // ratio/|I| = 1/0.1
    CHECK(!v.bPass);                                        // B-FAIL for target 5
    // shrinking the cell doubles the failure ratio: unboundedness signature
    UniformVerdict v2 = uniformGroupTest(z, g, {{{Interval{0.0, 0.05}}}},
                                         {1000.0, 3000.0, 10000.0}, 5.0, 5.0, 0.02);
    CHECK(v2.Bhat == doctest::Approx(20.0).epsilon(0.01));
}

TEST_CASE("uniformGroupTest: Lebesgue surrogate is F(G,1,1)") {
    PointMeasure l = lebesgueApprox(0.01, {0.0, 12000.0});
    SubgroupSpec g = SubgroupSpec::parse("1");
    std::vector<ResidueCellQuery> queries{{{Interval{0.0, 0.5}}}, {{Interval{0.2, 0.9}}}};
    UniformVerdict v =
        uniformGroupTest(l, g, queries, {1000.0, 3000.0, 10000.0}, 1.0, 1.0, 0.02);
    CHECK(v.aPass);
    CHECK(v.bPass);
    CHECK(v.Ahat == doctest::Approx(1.0).epsilon(0.02));
    CHECK(v.Bhat == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("s=1, a=1, I=[0,1): group ratios equal the scalar density sweep") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 4000.0);
    std::vector<double> p;
    for (int i = 0; i < 3000; ++i) p.push_back(u(rng));
    PointMeasure mu = PointMeasure::fromAtoms(p);
    SubgroupSpec g = SubgroupSpec::parse("1");
    std::vector<double> rLadder{500.0, 1000.0};
    UniformVerdict v = uniformGroupTest(mu, g, {{{Interval{0.0, 1.0}}}}, rLadder, 0.5, 1.0, 0.5);

    // same windows: scalar sweep restricted to the identical t candidates
    for (std::size_t ri = 0; ri < rLadder.size(); ++ri) {
        double r = rLadder[ri];
        std::vector<double> corners;
        Interval e = mu.extent();
        for (double t = e.lo; t <= e.hi - r; t += r / 200.0) corners.push_back(t);
        for (double t : mu.positions())
            if (t >= e.lo && t <= e.hi - r) corners.push_back(t);
        corners.push_back(e.hi - r);
        SlidingExtremes ex = slidingExtremesOnCandidates(mu, r, corners);
        CHECK(v.perQuery[0].trace[ri].supRatio == doctest::Approx(ex.supRatio).epsilon(1e-9));
        CHECK(v.perQuery[0].trace[ri].infRatio == doctest::Approx(ex.infRatio).epsilon(1e-9));
    }
}

TEST_CASE("trig polynomial window averages") {
    PointMeasure z = lattice(1.0, {-100.0, 20100.0});

    TrigPolynomial one = TrigPolynomial::constant(1.0);
    CHECK(trigPolyWindowAverage(z, one, 0.0, 100.0) ==
          doctest::Approx(z.mass({0.0, 100.0}) / 100.0).epsilon(1e-12));

    // the incompleteness witness kills every window
    TrigPolynomial killer({{0.0, {1.0, 0.0}}, {1.0, {-1.0, 0.0}}});
    for (double t : {0.0, 13.0, 1000.0}) CHECK(trigPolyWindowAverage(z, killer, t, 50.0) == 0.0);

    // Weyl-sum oracle: cross terms with frequency sqrt2 average out
    TrigPolynomial mixed({{0.0, {0.8, 0.0}}, {kSqrt2, {0.0, 1.1}}});
    double avg = trigPolyWindowAverage(z, mixed, 0.0, 10000.0);
    CHECK(avg == doctest::Approx(0.8 * 0.8 + 1.1 * 1.1).epsilon(0.02));

    auto sweep = trigPolyAverageSweep(z, mixed, {1000.0, 10000.0});
    CHECK(sweep.back().sup == doctest::Approx(0.8 * 0.8 + 1.1 * 1.1).epsilon(0.02));
    CHECK(sweep.back().inf == doctest::Approx(0.8 * 0.8 + 1.1 * 1.1).epsilon(0.02));
}

TEST_CASE("mean of squared modulus") {
    CHECK(meanOfSquaredModulus(TrigPolynomial::constant(1.0)) == 1.0);
    TrigPolynomial killer({{0.0, {1.0, 0.0}}, {1.0, {-1.0, 0.0}}});
    CHECK(meanOfSquaredModulus(killer) == 2.0);
    TrigPolynomial single(std::vector<TrigPolynomial::Term>{{5.0, {3.0, 0.0}}});
    CHECK(meanOfSquaredModulus(single) == 9.0);
}

TEST_CASE("mean bound via the envelope: D+(|P|^2 mu) <= B M(|P|^2) on the lattice") {
    PointMeasure z = lattice(1.0, {-100.0, 10100.0});
    // spectrum {0, sqrt2}: no rational relation with the lattice, B = 1
    TrigPolynomial p({{0.0, {1.0, 0.0}}, {kSqrt2, {0.5, -0.5}}});
    auto sweep = trigPolyAverageSweep(z, p, {1000.0, 5000.0});
    double m = meanOfSquaredModulus(p);
    CHECK(sweep.back().sup <= 1.05 * m);
    CHECK(sweep.back().inf >= 0.95 * m);
}

TEST_CASE("well-distribution tests") {
    std::vector<double> seq;
    for (int n = 0; n <= 30000; ++n) seq.push_back(kSqrt2 * n);
    WellDistReport good = wellDistributedTest(seq, 1.0, {0.0, 0.5}, {100, 1000, 10000});
    CHECK(good.pass);
    CHECK(good.trace.back().maxFreq == doctest::Approx(0.5).epsilon(0.01));
    CHECK(good.trace.back().minFreq == doctest::Approx(0.5).epsilon(0.01));

    std::vector<double> ints;
    for (int n = 0; n <= 30000; ++n) ints.push_back(double(n));
    WellDistReport bad = wellDistributedTest(ints, 1.0, {0.0, 0.1}, {100, 1000, 10000});
    CHECK(!bad.pass);
    CHECK(bad.trace.back().maxFreq == 1.0);

    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<double> golden;
    for (int n = 0; n <= 30000; ++n) golden.push_back(phi * n);
    WellDistReport g = wellDistributedTest(golden, 1.0, {0.2, 0.7}, {100, 1000, 10000});
    CHECK(g.pass);
    CHECK(g.trace.back().maxFreq == doctest::Approx(0.5).epsilon(0.01));

    CHECK_THROWS_AS(wellDistributedTest(seq, 1.0, {0.0, 0.5}, {40000}), std::invalid_argument);
    CHECK_THROWS_AS(wellDistributedTest({0.0, 0.0}, 1.0, {0.0, 0.5}, {1}), std::invalid_argument);
}

TEST_CASE("well-distribution matches the tight group verdict on lattices") {
    // Lambda = sqrt2 Z over G = <1>: tight at 1/sqrt2 and well-distributed mod 1
    PointMeasure s = lattice(kSqrt2, {0.0, 15000.0});
    UniformVerdict tight = uniformGroupTest(s, SubgroupSpec::parse("1"),
                                            {{{Interval{0.0, 0.35}}}, {{Interval{0.5, 0.95}}}},
                                            {1000.0, 10000.0}, 1.0 / kSqrt2, 1.0 / kSqrt2, 0.02);
    WellDistReport wd = wellDistributedTest(s.positions(), 1.0, {0.0, 0.5}, {1000, 10000});
    CHECK(tight.tightPass == wd.pass);

    // Lambda = Z over G = <1>: both sides fail
    PointMeasure z = lattice(1.0, {0.0, 15000.0});
    UniformVerdict ztight = uniformGroupTest(z, SubgroupSpec::parse("1"),
                                             {{{Interval{0.0, 0.1}}}}, {1000.0, 10000.0},
                                             1.0, 1.0, 0.02);
    WellDistReport zwd = wellDistributedTest(z.positions(), 1.0, {0.0, 0.1}, {1000, 10000});
    CHECK(!ztight.tightPass);
    CHECK(!zwd.pass);
}
