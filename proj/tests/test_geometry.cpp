#include <gtest/gtest.h>

#include <random>

#include "covwind/counters.hpp"
#include "covwind/errors.hpp"
#include "covwind/geometry.hpp"
#include "oracles.hpp"

using namespace covwind;

namespace {

RationalBezierSegment seg(std::vector<Point2> pts, std::vector<double> w = {}) {
    return RationalBezierSegment(std::move(pts), std::move(w));
}

void expect_near(Point2 a, Point2 b, double tol) {
    EXPECT_NEAR(a.u, b.u, tol);
    EXPECT_NEAR(a.v, b.v, tol);
}

}  // namespace

TEST(Segment, RejectsBadInput) {
    EXPECT_THROW(seg({{0, 0}}), DomainError);
    EXPECT_THROW(seg({{0, 0}, {1, 0}}, {1.0, 0.0}), DomainError);
    EXPECT_THROW(seg({{0, 0}, {1, 0}}, {1.0}), DomainError);
    EXPECT_THROW(seg({{0, 0}, {NAN, 0}}), DomainError);
    EXPECT_FALSE(seg({{0, 0}, {1, 0}}, {2.0, 2.0}).is_rational());
    EXPECT_TRUE(seg({{0, 0}, {1, 0}}, {1.0, 2.0}).is_rational());
}

TEST(Evaluate, Linear) { expect_near(evaluate(seg({{0, 0}, {1, 0}}), 0.5), {0.5, 0}, 1e-15); }

TEST(Evaluate, EndpointsAreStoredPoints) {
    const auto s = seg({{0.1, 0.7}, {0.3, 0.2}, {0.9, 0.4}}, {1.0, 3.0, 0.5});
    EXPECT_EQ(evaluate(s, 0.0), (Point2{0.1, 0.7}));
    EXPECT_EQ(evaluate(s, 1.0), (Point2{0.9, 0.4}));
}

TEST(Evaluate, CubicMidpoint) {
    expect_near(evaluate(seg({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), 0.5), {0.5, 0.75}, 1e-15);
}

TEST(Evaluate, OutsideUnitIntervalThrows) {
    const auto s = seg({{0, 0}, {1, 0}});
    EXPECT_THROW(evaluate(s, -0.01), DomainError);
    EXPECT_THROW(evaluate(s, 1.01), DomainError);
    EXPECT_THROW(evaluate(s, NAN), DomainError);
}

TEST(Evaluate, MatchesBernsteinSum) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = oracle::random_cubic(rng, trial % 2 == 1);
        const double t = U(rng);
        expect_near(evaluate(s, t), oracle::bernstein_eval(s, t), 1e-13);
    }
}

TEST(Evaluate, QuarterCircleIsExact) {
    const double r = std::sqrt(0.5);
    const auto s = seg({{1, 0}, {1, 1}, {0, 1}}, {1.0, r, 1.0});
    for (double t : {0.1, 0.3, 0.5, 0.77}) EXPECT_NEAR(norm(evaluate(s, t)), 1.0, 1e-14);
}

TEST(Evaluate, ZeroLengthSegment) {
    const auto s = seg({{0.4, 0.4}, {0.4, 0.4}, {0.4, 0.4}});
    expect_near(evaluate(s, 0.3), {0.4, 0.4}, 1e-16);
    EXPECT_EQ(derivative_bound(s), 0.0);
}

TEST(Evaluate, ArithmeticGrowsLinearlyWithDegree) {
    std::vector<double> per_degree;
    for (int n = 3; n <= 50; ++n) {
        std::vector<Point2> pts;
        for (int i = 0; i <= n; ++i) pts.push_back({double(i) / n, std::sin(i)});
        const auto s = seg(pts);
        reset_thread_counters();
        evaluate(s, 0.37);
        per_degree.push_back(static_cast<double>(take_thread_counters().arithmetic) / n);
    }
    const auto [lo, hi] = std::minmax_element(per_degree.begin(), per_degree.end());
    EXPECT_LT(*hi / *lo, 1.2);
}

TEST(DerivativeBound, SpecExamples) {
    EXPECT_NEAR(derivative_bound(seg({{0, 0}, {1.0 / 3, 0}, {2.0 / 3, 0}, {1, 0}})), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(derivative_bound(seg({{0, 0}, {1, 0}, {1, 1}})), 2.0);
    const std::vector<Point2> pts{{0, 0}, {0.3, 0.8}, {1, 0.2}};
    EXPECT_DOUBLE_EQ(derivative_bound(seg(pts, {2.5, 2.5, 2.5})), derivative_bound(seg(pts)));
}

TEST(DerivativeBound, BoundsSampledSpeed) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = oracle::random_cubic(rng, true);
        const double B = derivative_bound(s);
        const double h = 1e-6;
        for (int k = 1; k < 200; ++k) {
            const double t = k / 200.0;
            const double speed = distance(oracle::bernstein_eval(s, t + h), oracle::bernstein_eval(s, t - h)) / (2 * h);
            EXPECT_LE(speed, B * (1 + 1e-6));
        }
    }
}

TEST(EllipseBound, SpecExamples) {
    const auto s = seg({{0, 0}, {1.0 / 3, 0}, {2.0 / 3, 0}, {1, 0}});
    const double B = derivative_bound(s);
    const auto full = ellipse_bound(CurveSpan(s), B);
    expect_near(full.focus_start, {0, 0}, 0);
    expect_near(full.focus_end, {1, 0}, 0);
    EXPECT_NEAR(full.span, 1.0, 1e-15);
    const auto half = ellipse_bound(CurveSpan(s, 0.0, 0.5), B);
    expect_near(half.focus_end, {0.5, 0}, 1e-15);
    EXPECT_NEAR(half.span, 0.5, 1e-15);
}

TEST(EllipseBound, UsesTwoEvaluations) {
    const auto s = seg({{0, 0}, {0.2, 0.9}, {1, 0}});
    reset_thread_counters();
    ellipse_bound(CurveSpan(s, 0.2, 0.6), derivative_bound(s));
    EXPECT_EQ(take_thread_counters().evaluations, 2u);
}

TEST(EllipseBound, ContainsDenseSamples) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = oracle::random_cubic(rng, trial % 2 == 0);
        const double B = derivative_bound(s);
        double a = U(rng), b = U(rng);
        if (a > b) std::swap(a, b);
        const auto e = ellipse_bound(CurveSpan(s, a, b), B);
        for (int k = 0; k < 10000; ++k) {
            const Point2 x = evaluate(s, a + (b - a) * U(rng));
            EXPECT_LE(distance(x, e.focus_start) + distance(x, e.focus_end), e.span + 1e-12);
        }
    }
}

TEST(EllipseBound, ChildrenHalveSpan) {
    const auto s = seg({{0, 0}, {0.5, 1}, {1, 0.2}});
    const double B = derivative_bound(s);
    const auto parent = ellipse_bound(CurveSpan(s, 0.25, 0.75), B);
    EXPECT_DOUBLE_EQ(ellipse_bound(CurveSpan(s, 0.25, 0.5), B).span, parent.span / 2);
    EXPECT_DOUBLE_EQ(ellipse_bound(CurveSpan(s, 0.5, 0.75), B).span, parent.span / 2);
}

TEST(EllipseContains, SpecExamples) {
    const EllipseBound e{{0, 0}, {1, 0}, 1.0};
    EXPECT_TRUE(ellipse_contains(e, {0.5, 0}));
    EXPECT_FALSE(ellipse_contains(e, {0.5, 0.6}));
    EXPECT_TRUE(ellipse_contains(e, {0, 0}));
    EXPECT_TRUE(ellipse_contains(e, {1, 0}));
}

TEST(CurveSpan, RejectsBadInterval) {
    const auto s = seg({{0, 0}, {1, 0}});
    EXPECT_THROW(CurveSpan(s, 0.5, 0.5), DomainError);
    EXPECT_THROW(CurveSpan(s, -0.1, 0.5), DomainError);
    EXPECT_THROW(CurveSpan(s, 0.2, 1.5), DomainError);
}

TEST(ElevateDegree, LineToQuadratic) {
    const auto e = elevate_degree(seg({{0, 0}, {1, 0}}), 2);
    ASSERT_EQ(e.degree(), 2);
    expect_near(e.control_points()[1], {0.5, 0}, 1e-16);
}

TEST(ElevateDegree, PreservesGeometry) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0, 1);
    for (bool rational : {false, true}) {
        const auto s = oracle::random_cubic(rng, rational);
        for (int target : {4, 7, 12, 24, 48}) {
            const auto e = elevate_degree(s, target);
            EXPECT_EQ(e.degree(), target);
            EXPECT_EQ(e.is_rational(), rational);
            for (int k = 0; k < 50; ++k) {
                const double t = U(rng);
                expect_near(evaluate(e, t), evaluate(s, t), 1e-12);
            }
        }
    }
}

TEST(ElevateDegree, IdentityAndLowering) {
    const auto s = seg({{0, 0}, {0.3, 1}, {0.7, 1}, {1, 0}});
    const auto same = elevate_degree(s, 3);
    EXPECT_TRUE(std::equal(same.control_points().begin(), same.control_points().end(), s.control_points().begin()));
    EXPECT_THROW(elevate_degree(s, 2), DomainError);
}

TEST(DecomposeBspline, SingleSpan) {
    const std::vector<double> knots{0, 0, 0, 0, 1, 1, 1, 1};
    const std::vector<Point2> cps{{0, 0}, {0.2, 1}, {0.8, 1}, {1, 0}};
    const auto segs = decompose_bspline(knots, cps, {}, 3);
    ASSERT_EQ(segs.size(), 1u);
    for (int i = 0; i < 4; ++i) expect_near(segs[0].control_points()[i], cps[i], 1e-15);
}

TEST(DecomposeBspline, TwoSpanJunctionMatchesDeBoor) {
    const std::vector<double> knots{0, 0, 0, 0, 0.5, 1, 1, 1, 1};
    const std::vector<Point2> cps{{0, 0}, {0.1, 0.6}, {0.5, 0.9}, {0.9, 0.4}, {1, 0}};
    const auto segs = decompose_bspline(knots, cps, {}, 3);
    ASSERT_EQ(segs.size(), 2u);
    const Point2 junction = oracle::de_boor(knots, {cps.begin(), cps.end()}, {}, 3, 0.5);
    expect_near(segs[0].end(), junction, 1e-14);
    expect_near(segs[1].start(), junction, 1e-14);
}

TEST(DecomposeBspline, RationalAgreesWithDeBoor) {
    const std::vector<double> knots{0, 0, 0, 0.2, 0.45, 0.45, 0.8, 1, 1, 1};
    const std::vector<Point2> cps{{0, 0}, {0.1, 0.5}, {0.3, 0.9}, {0.5, 0.2}, {0.7, 0.8}, {0.9, 0.1}, {1, 0.6}};
    const std::vector<double> w{1.0, 2.0, 0.5, 1.5, 1.0, 3.0, 1.0};
    const auto segs = decompose_bspline(knots, cps, w, 2);
    // Interior breakpoints 0.2, 0.45, 0.8 give four spans.
    ASSERT_EQ(segs.size(), 4u);
    const std::vector<double> breaks{0, 0.2, 0.45, 0.8, 1};
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0, 1);
    for (int k = 0; k < 100; ++k) {
        const double x = U(rng);
        std::size_t s = 0;
        while (s + 1 < segs.size() && x >= breaks[s + 1]) ++s;
        const double t = (x - breaks[s]) / (breaks[s + 1] - breaks[s]);
        expect_near(evaluate(segs[s], t), oracle::de_boor(knots, cps, w, 2, x), 1e-10);
    }
}

TEST(DecomposeBspline, RejectsInvalidKnots) {
    const std::vector<Point2> cps{{0, 0}, {0.2, 1}, {0.8, 1}, {1, 0}};
    EXPECT_THROW(decompose_bspline(std::vector<double>{0, 0, 0, 1, 1, 1, 1}, cps, {}, 3), FormatError);
    EXPECT_THROW(decompose_bspline(std::vector<double>{0, 0, 0, 0.5, 1, 1, 1, 1}, cps, {}, 3), FormatError);
    EXPECT_THROW(decompose_bspline(std::vector<double>{0, 0, 0, 0, 1, 0.5, 1, 1}, cps, {}, 3), FormatError);
    EXPECT_THROW(decompose_bspline(std::vector<double>{1, 1, 1, 1, 1, 1, 1, 1}, cps, {}, 3), FormatError);
}
