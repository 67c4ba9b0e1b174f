#include <gtest/gtest.h>

#include <random>

#include "covwind/counters.hpp"
#include "covwind/errors.hpp"
#include "covwind/winding.hpp"
#include "oracles.hpp"

using namespace covwind;

namespace {

BezierPath unit_square() { return oracle::polyline_path({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}); }

// Random point at least `min_dist` from the path (by the sampling oracle).
Point2 point_away(std::mt19937_64& rng, const BezierPath& path, double min_dist) {
    std::uniform_real_distribution<double> U(-0.2, 1.2);
    for (;;) {
        const Point2 p{U(rng), U(rng)};
        if (oracle::distance_to_path(p, path, 400) >= min_dist) return p;
    }
}

}  // namespace

TEST(SegmentWinding, SpecExamples) {
    // Quarter turn and eighth turn, in turns.
    EXPECT_NEAR(segment_winding({0, 0}, {1, 0}, {0, 1}), 0.25, 1e-16);
    EXPECT_NEAR(segment_winding({0, 0}, {1, 0}, {1, 1}), 0.125, 1e-16);
    EXPECT_EQ(segment_winding({0, 0}, {1, 1}, {1, 1}), 0.0);
    EXPECT_THROW(segment_winding({1, 0}, {1, 0}, {0, 1}), DegenerateInputError);
}

TEST(ComputeWinding, FarPointIsChordWithoutSubdivision) {
    const RationalBezierSegment s({{0, 0}, {0.3, 0.5}, {0.7, 0.5}, {1, 0}});
    const double B = derivative_bound(s);
    reset_thread_counters();
    const auto w = compute_winding({5, 5}, CurveSpan(s), B, 1e-6);
    EXPECT_EQ(take_thread_counters().subdivisions, 0u);
    ASSERT_FALSE(w.on_boundary());
    EXPECT_EQ(w.value, segment_winding({5, 5}, {0, 0}, {1, 0}));
}

TEST(ComputeWinding, NearEndpointIsOnBoundary) {
    const RationalBezierSegment s({{0, 0}, {0.3, 0.5}, {0.7, 0.5}, {1, 0}});
    const auto w = compute_winding({1e-7, 0}, CurveSpan(s), derivative_bound(s), 1e-6, 4);
    ASSERT_TRUE(w.on_boundary());
    EXPECT_EQ(w.hit->segment, 4u);
    EXPECT_EQ(w.hit->t, 0.0);
}

TEST(ComputeWinding, MatchesPolylineOracle) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = oracle::random_cubic(rng, trial % 3 == 0);
        const BezierPath path({s});
        const Point2 p = point_away(rng, path, 0.01);
        const auto w = compute_winding(p, CurveSpan(s), derivative_bound(s), 1e-6);
        ASSERT_FALSE(w.on_boundary());
        EXPECT_NEAR(w.value, oracle::dense_winding(p, path, 100000), 1e-6);
    }
}

TEST(ComputeWinding, Additivity) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = oracle::random_cubic(rng, trial % 2 == 0);
        const BezierPath path({s});
        const Point2 p = point_away(rng, path, 1e-4);
        const double B = derivative_bound(s), m = U(rng);
        const auto whole = compute_winding(p, CurveSpan(s), B, 1e-6);
        const auto left = compute_winding(p, CurveSpan(s, 0, m), B, 1e-6);
        const auto right = compute_winding(p, CurveSpan(s, m, 1), B, 1e-6);
        EXPECT_NEAR(whole.value, left.value + right.value, 1e-12);
    }
}

TEST(ComputeWinding, DepthWithinLemmaBound) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = oracle::random_cubic(rng);
        const BezierPath path({s});
        const double eps = 1e-6;
        const Point2 p = point_away(rng, path, 2e-4);
        const double d = oracle::distance_to_path(p, path);
        const double B = derivative_bound(s);
        reset_thread_counters();
        compute_winding(p, CurveSpan(s), B, eps);
        const auto c = take_thread_counters();
        EXPECT_LE(static_cast<double>(c.max_depth), std::log2(B / std::max(eps, d)) + 2);
    }
}

TEST(ComputeWinding, RejectsNonPositiveEps) {
    const RationalBezierSegment s({{0, 0}, {1, 0}});
    EXPECT_THROW(compute_winding({0.5, 1}, CurveSpan(s), 1.0, 0.0), DomainError);
}

TEST(ComputeWinding, DepthCap) {
    EXPECT_EQ(recursion_depth_cap(1.0, 1e-6), 20 + 8);
    EXPECT_EQ(recursion_depth_cap(0.0, 1e-6), 8);
    EXPECT_EQ(recursion_depth_cap(1e-9, 1e-6), 8);
}

TEST(Path, RecordsGapsWithoutFailing) {
    const BezierPath path({RationalBezierSegment({{0, 0}, {1, 0}}), RationalBezierSegment({{1, 0.1}, {0, 0}})});
    ASSERT_EQ(path.gaps().size(), 1u);
    EXPECT_EQ(path.gaps()[0].after, 0u);
    EXPECT_NEAR(path.gaps()[0].length, 0.1, 1e-15);
    EXPECT_THROW(BezierPath({}), DomainError);
}

TEST(PathWinding, CircleCenterIsOne) {
    const auto circle = oracle::circle_path({0.5, 0.5}, 0.3);
    const auto h = build_hierarchy(circle);
    const auto w = path_winding({0.5, 0.5}, circle, h, 1e-6);
    ASSERT_FALSE(w.on_boundary());
    EXPECT_NEAR(w.value, 1.0, 1e-9);
    EXPECT_NEAR(path_winding({0.5, 0.5}, circle.reversed(), build_hierarchy(circle.reversed()), 1e-6).value, -1.0,
                1e-9);
}

TEST(PathWinding, OutsideRootIsExactZero) {
    const auto circle = oracle::circle_path({0.5, 0.5}, 0.3);
    const auto h = build_hierarchy(circle);
    const Point2 far{9, -4};
    ASSERT_FALSE(ellipse_contains({h.root().start, h.root().end, h.root().span}, far));
    const auto w = path_winding(far, circle, h, 1e-6);
    EXPECT_NEAR(w.value, 0.0, 1e-15);
}

TEST(PathWinding, PrunedEqualsFlat) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-0.3, 1.3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RationalBezierSegment> segs;
        const int n = 1 + trial % 9;
        Point2 prev{U(rng), U(rng)};
        const Point2 first = prev;
        for (int i = 0; i < n; ++i) {
            const Point2 next = i + 1 == n ? first : Point2{U(rng), U(rng)};
            segs.emplace_back(std::vector<Point2>{prev, {U(rng), U(rng)}, {U(rng), U(rng)}, next});
            prev = next;
        }
        const BezierPath path(std::move(segs));
        const auto h = build_hierarchy(path);
        for (int k = 0; k < 5; ++k) {
            const Point2 p{U(rng), U(rng)};
            const auto a = path_winding(p, path, h, 1e-6);
            const auto b = path_winding_flat(p, path, 1e-6);
            ASSERT_EQ(a.on_boundary(), b.on_boundary());
            if (!a.on_boundary()) EXPECT_NEAR(a.value, b.value, 1e-12);
        }
    }
}

TEST(PathWinding, OpenPathWithGapStillAgreesWithFlat) {
    const BezierPath path({RationalBezierSegment({{0, 0}, {0.5, -0.2}, {1, 0}}),
                           RationalBezierSegment({{1, 0.05}, {1.2, 0.5}, {1, 1}}),
                           RationalBezierSegment({{1, 1}, {0.5, 1.2}, {0.1, 1}})});
    const auto h = build_hierarchy(path);
    for (Point2 p : {Point2{5, 5}, Point2{0.5, 0.5}, Point2{-3, 0.2}, Point2{1.5, 0.02}}) {
        EXPECT_NEAR(path_winding(p, path, h, 1e-6).value, path_winding_flat(p, path, 1e-6).value, 1e-12);
    }
}

TEST(PathWinding, ClosedLoopsAreIntegral) {
    std::mt19937_64 rng(14);
    const auto circle = oracle::circle_path({0.4, 0.6}, 0.25);
    const auto h = build_hierarchy(circle);
    for (int k = 0; k < 200; ++k) {
        const Point2 p = point_away(rng, circle, 1e-5);
        const auto w = path_winding(p, circle, h, 1e-6);
        EXPECT_LT(std::abs(w.value - std::round(w.value)), 1e-6);
    }
}

TEST(Hierarchy, SpecExamples) {
    const BezierPath single({RationalBezierSegment({{0, 0}, {1, 0}})});
    const auto h1 = build_hierarchy(single);
    ASSERT_EQ(h1.nodes().size(), 1u);
    EXPECT_TRUE(h1.root().leaf());
    EXPECT_DOUBLE_EQ(h1.root().span, 1.0);

    const BezierPath two({RationalBezierSegment({{0, 0}, {1, 0}}), RationalBezierSegment({{1, 0}, {1, 1}})});
    const auto h2 = build_hierarchy(two);
    EXPECT_DOUBLE_EQ(h2.root().span, 2.0);
    EXPECT_EQ(h2.nodes().size(), 3u);
}

TEST(Hierarchy, NodesContainSampledPoints) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(0, 1);
    std::vector<RationalBezierSegment> segs;
    Point2 prev{0.5, 0.5};
    for (int i = 0; i < 13; ++i) {
        const Point2 next{U(rng), U(rng)};
        segs.emplace_back(std::vector<Point2>{prev, {U(rng), U(rng)}, next}, std::vector<double>{1.0, 0.5 + U(rng), 1.0});
        prev = next;
    }
    const BezierPath path(std::move(segs));
    const auto h = build_hierarchy(path);
    for (const auto& node : h.nodes()) {
        for (int k = 0; k < 1000; ++k) {
            const std::size_t i = node.first + static_cast<std::size_t>(U(rng) * (node.last - node.first + 1));
            const Point2 x = evaluate(path.segment(std::min(i, node.last)), U(rng));
            EXPECT_LE(distance(x, node.start) + distance(x, node.end), node.span + 1e-12);
        }
    }
}

TEST(Oracle, StraightLineMatchesSegmentWinding) {
    const BezierPath line({RationalBezierSegment({{0, 0}, {1, 0.5}})});
    for (int n : {1, 3, 100}) {
        EXPECT_NEAR(polyline_winding_oracle({0.2, 0.7}, line, n), segment_winding({0.2, 0.7}, {0, 0}, {1, 0.5}), 1e-15);
    }
}

TEST(Oracle, ConvergesAndIsExactOnCircle) {
    const auto circle = oracle::circle_path({0.5, 0.5}, 0.3);
    EXPECT_NEAR(polyline_winding_oracle({0.5, 0.5}, circle, 100000), 1.0, 1e-8);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const BezierPath path({oracle::random_cubic(rng)});
        const Point2 p = point_away(rng, path, 0.01);
        EXPECT_LT(std::abs(polyline_winding_oracle(p, path, 10000) - polyline_winding_oracle(p, path, 100000)), 1e-6);
    }
    EXPECT_THROW(polyline_winding_oracle({0.8, 0.5}, circle, 10), DegenerateInputError);
}

TEST(Baseline, AgreesWithEllipseRecursion) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = oracle::random_cubic(rng, trial % 2 == 0);
        const BezierPath path({s});
        const Point2 p = point_away(rng, path, 1e-4);
        const auto a = compute_winding(p, CurveSpan(s), derivative_bound(s), 1e-6);
        const auto b = control_polygon_winding_baseline(p, CurveSpan(s), 1e-6);
        EXPECT_NEAR(a.value, b.value, 1e-9);
    }
}

TEST(Baseline, SubSpanAgrees) {
    const RationalBezierSegment s({{0, 0}, {0.2, 0.8}, {0.9, 0.9}, {1, 0}}, {1, 2, 0.7, 1});
    const auto a = compute_winding({0.5, 0.3}, CurveSpan(s, 0.2, 0.7), derivative_bound(s), 1e-6);
    const auto b = control_polygon_winding_baseline({0.5, 0.3}, CurveSpan(s, 0.2, 0.7), 1e-6);
    EXPECT_NEAR(a.value, b.value, 1e-9);
}

TEST(Baseline, FarPointGivesSameChord) {
    const RationalBezierSegment s({{0, 0}, {0.3, 0.5}, {0.7, 0.5}, {1, 0}});
    EXPECT_EQ(control_polygon_winding_baseline({4, 4}, CurveSpan(s), 1e-6).value,
              compute_winding({4, 4}, CurveSpan(s), derivative_bound(s), 1e-6).value);
}

TEST(Baseline, ArithmeticGrowsFasterWithDegree) {
    auto cost = [](int degree, bool baseline) {
        RationalBezierSegment s({{0, 0}, {0.3, 0.9}, {0.7, -0.4}, {1, 0}});
        s = elevate_degree(s, degree);
        reset_thread_counters();
        for (int k = 1; k < 50; ++k) {
            const Point2 p = evaluate(s, k / 50.0) + Point2{0, 1e-3};
            if (baseline) control_polygon_winding_baseline(p, CurveSpan(s), 1e-6);
            else compute_winding(p, CurveSpan(s), derivative_bound(s), 1e-6);
        }
        return static_cast<double>(take_thread_counters().arithmetic);
    };
    const double ellipse_ratio = cost(48, false) / cost(6, false);
    const double baseline_ratio = cost(48, true) / cost(6, true);
    EXPECT_GT(baseline_ratio, 2.0 * ellipse_ratio);
}

TEST(CrossingCount, SquareExamples) {
    const auto square = unit_square();
    const auto inside = crossing_count({0.5, 0.5}, {1, 0}, square, 1);
    EXPECT_EQ(inside.crossings, 1);
    EXPECT_EQ(inside.signed_count, 1);
    const auto outside = crossing_count({-0.5, 0.5}, {1, 0}, square, 1);
    EXPECT_EQ(outside.crossings, 2);
    EXPECT_EQ(outside.signed_count, 0);
}

TEST(CrossingCount, GrazingVertexIsPerturbed) {
    const auto square = unit_square();
    const auto c = crossing_count({-1, -1}, {1, 1}, square, 1);
    EXPECT_EQ(c.crossings % 2, 0);
}

TEST(CrossingCount, ParityMatchesWinding) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> A(0, 2 * std::numbers::pi);
    const auto circle = oracle::circle_path({0.5, 0.5}, 0.3);
    const auto h = build_hierarchy(circle);
    for (int k = 0; k < 100; ++k) {
        const Point2 p = point_away(rng, circle, 1e-3);
        const double a = A(rng);
        const auto c = crossing_count(p, {std::cos(a), std::sin(a)}, circle, 2000);
        const long w = std::lround(path_winding(p, circle, h, 1e-6).value);
        EXPECT_EQ(c.crossings % 2, std::abs(w) % 2);
        EXPECT_EQ(c.signed_count, w);
    }
}
