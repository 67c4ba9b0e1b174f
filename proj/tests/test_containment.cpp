#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <queue>
#include <random>

#include "covwind/containment.hpp"
#include "covwind/errors.hpp"
#include "covwind/field.hpp"
#include "covwind/synthetic.hpp"
#include "oracles.hpp"

using namespace covwind;

namespace {

BezierPath square(double lo, double hi, bool ccw = true) {
    std::vector<Point2> pts{{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}, {lo, lo}};
    if (!ccw) std::reverse(pts.begin(), pts.end());
    return oracle::polyline_path(pts);
}

TrimmedRegion square_region(FillRule rule = FillRule::NonZero, bool ccw = true) {
    return TrimmedRegion({square(0.2, 0.8, ccw)}, DomainTopology::none(), 1e-6, rule);
}

bool same(const BatchResult& a, const BatchResult& b) {
    if (a.ok() != b.ok() || a.error != b.error) return false;
    if (!a.ok()) return true;
    const auto& x = *a.value;
    const auto& y = *b.value;
    const bool same_winding = x.winding.has_value() == y.winding.has_value() &&
                              (!x.winding || std::memcmp(&*x.winding, &*y.winding, sizeof(double)) == 0);
    return x.verdict == y.verdict && same_winding && x.residual == y.residual;
}

std::vector<Point2> grid_points(int n) {
    std::vector<Point2> pts;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) pts.push_back({(x + 0.5) / n, (y + 0.5) / n});
    return pts;
}

// 4-connected components of cells flagged inside.
int components(const std::vector<char>& inside, int n) {
    std::vector<char> seen(inside.size(), 0);
    int count = 0;
    for (int start = 0; start < n * n; ++start) {
        if (!inside[start] || seen[start]) continue;
        ++count;
        std::queue<int> q;
        q.push(start);
        seen[start] = 1;
        while (!q.empty()) {
            const int c = q.front();
            q.pop();
            const int x = c % n, y = c / n;
            const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
            for (auto [a, b] : nb) {
                if (a < 0 || b < 0 || a >= n || b >= n) continue;
                const int k = b * n + a;
                if (inside[k] && !seen[k]) {
                    seen[k] = 1;
                    q.push(k);
                }
            }
        }
    }
    return count;
}

}  // namespace

TEST(Classify, SquareExamples) {
    const TrimmedRegion region = square_region();
    const Classification in = classify(region, {0.5, 0.5});
    EXPECT_EQ(in.verdict, Verdict::Inside);
    EXPECT_NEAR(*in.winding, 1.0, 1e-12);
    const Classification out = classify(region, {1.5, -0.3});
    EXPECT_EQ(out.verdict, Verdict::Outside);
    EXPECT_NEAR(*out.winding, 0.0, 1e-12);
    const Classification edge = classify(region, {0.5, 0.2 + 1e-9});
    EXPECT_EQ(edge.verdict, Verdict::OnBoundary);
    EXPECT_FALSE(edge.winding.has_value());
}

TEST(Classify, ResidualAndFlags) {
    const Classification c = classify(square_region(), {0.5, 0.5});
    EXPECT_LT(c.residual, 1e-12);
    EXPECT_FALSE(c.suspicious);
    const Classification half = classify_winding(WindingOutcome::of(0.5), FillRule::NonZero);
    EXPECT_TRUE(half.suspicious);
    EXPECT_EQ(half.verdict, Verdict::Inside);  // ties away from zero
    EXPECT_EQ(classify_winding(WindingOutcome::of(-0.5), FillRule::Positive).verdict, Verdict::Outside);
    EXPECT_EQ(classify_winding(WindingOutcome::of(2.0), FillRule::Positive).verdict, Verdict::Inside);
}

TEST(Classify, FillRules) {
    const TrimmedRegion cw_nonzero = square_region(FillRule::NonZero, false);
    const TrimmedRegion cw_positive = square_region(FillRule::Positive, false);
    EXPECT_EQ(classify(cw_nonzero, {0.5, 0.5}).verdict, Verdict::Inside);
    EXPECT_EQ(classify(cw_positive, {0.5, 0.5}).verdict, Verdict::Outside);
    EXPECT_NEAR(*classify(cw_positive, {0.5, 0.5}).winding, -1.0, 1e-12);
}

TEST(Classify, NonZeroIgnoresOrientation) {
    SplitMix64 rng(17);
    std::mt19937_64 mt(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int shape = 0; shape < 5; ++shape) {
        const BezierPath loop = star_loop(rng, {0.5, 0.5}, 0.3);
        const TrimmedRegion fwd({loop}, DomainTopology::none());
        const TrimmedRegion rev({loop.reversed()}, DomainTopology::none());
        for (int k = 0; k < 200; ++k) {
            const Point2 p{U(mt), U(mt)};
            EXPECT_EQ(classify(fwd, p).verdict, classify(rev, p).verdict);
        }
    }
}

TEST(Classify, ReducesIntoBaseTile) {
    SplitMix64 rng(5);
    const PeriodicDataset ds = bi_periodic_dataset(rng, {2, 3}, 1);
    const TrimmedRegion region(ds.loops, ds.topology);
    std::mt19937_64 mt(8);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const Point2 p{U(mt), U(mt)};
        const Classification a = classify(region, p);
        const Classification b = classify(region, p + Point2{3.0, -2.0});
        EXPECT_EQ(a.verdict, b.verdict);
        if (a.winding && b.winding) EXPECT_NEAR(*a.winding, *b.winding, 1e-9);
    }
}

TEST(Classify, InvalidLoopSetRejected) {
    SplitMix64 rng(1);
    const BezierPath line = wavy_period(rng, {0.0, 0.3}, {1, 0}, 0.05);
    EXPECT_THROW(TrimmedRegion({line}, DomainTopology::bi()), ValidationError);
    EXPECT_THROW(TrimmedRegion({square(0.2, 0.8)}, DomainTopology::none(), 0.0), DomainError);
}

TEST(ClassifyBatch, MatchesSingleCalls) {
    const TrimmedRegion region = square_region();
    const std::vector<Point2> pts{{0.5, 0.5}, {0.9, 0.1}, {0.5, 0.2}};
    const auto batch = classify_batch(region, pts);
    ASSERT_EQ(batch.size(), 3u);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_TRUE(same(batch[i], BatchResult{classify(region, pts[i]), {}}));
    }
}

TEST(ClassifyBatch, PermutationAndParallelEquivalence) {
    SplitMix64 rng(99);
    const PeriodicDataset ds = bi_periodic_dataset(rng, {3, 4}, 2);
    const TrimmedRegion region(ds.loops, ds.topology);
    std::vector<Point2> pts = grid_points(40);
    const auto serial = classify_batch_serial(region, pts);
    const auto parallel = classify_batch(region, pts);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_TRUE(same(serial[i], parallel[i])) << i;

    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(4));
    std::vector<Point2> shuffled;
    for (std::size_t i : perm) shuffled.push_back(pts[i]);
    const auto permuted = classify_batch(region, shuffled);
    for (std::size_t k = 0; k < perm.size(); ++k) EXPECT_TRUE(same(permuted[k], serial[perm[k]]));
}

TEST(ClassifyBatch, ErrorsStayPerElement) {
    const TrimmedRegion region = square_region();
    const std::vector<Point2> pts{{0.5, 0.5}, {std::nan(""), 0.5}, {0.1, 0.1}};
    for (const auto& batch : {classify_batch(region, pts), classify_batch_serial(region, pts)}) {
        ASSERT_EQ(batch.size(), 3u);
        EXPECT_TRUE(batch[0].ok());
        EXPECT_FALSE(batch[1].ok());
        EXPECT_FALSE(batch[1].error.empty());
        EXPECT_TRUE(batch[2].ok());
        EXPECT_EQ(batch[2].value->verdict, Verdict::Outside);
    }
}

TEST(ClassifyBatch, NoisyOpenLoopKeepsComponentCount) {
    SplitMix64 rng(2024);
    const int n = 256;
    const std::vector<Point2> pts = grid_points(n);
    for (int shape = 0; shape < 3; ++shape) {
        const BezierPath clean = star_loop(rng, {0.5, 0.5}, 0.3, 10);
        const BezierPath noisy = perturb(clean, rng, 1e-3);
        ASSERT_FALSE(noisy.gaps().empty());
        auto inside = [&](const BezierPath& loop) {
            const TrimmedRegion region({loop}, DomainTopology::none());
            const auto res = classify_batch(region, pts);
            std::vector<char> flags;
            for (const auto& r : res) flags.push_back(r.ok() && r.value->verdict != Verdict::Outside);
            return flags;
        };
        EXPECT_EQ(components(inside(clean), n), components(inside(noisy), n));
    }
}

TEST(ClassifyBatch, OnBoundaryFractionShrinksWithEps) {
    SplitMix64 rng(7);
    const BezierPath loop = random_cubic_loop(rng, 3);
    const std::vector<Point2> pts = grid_points(200);
    double previous = 1.0;
    for (double eps : {1e-3, 1e-4, 1e-6, 1e-8, 1e-10}) {
        const TrimmedRegion region({loop}, DomainTopology::none(), eps);
        const auto res = classify_batch(region, pts);
        const double frac = static_cast<double>(std::count_if(res.begin(), res.end(), [](const BatchResult& r) {
                                return r.value->verdict == Verdict::OnBoundary;
                            })) / static_cast<double>(res.size());
        EXPECT_LE(frac, previous);
        previous = frac;
    }
    EXPECT_EQ(previous, 0.0);
}

TEST(Field, SampleCentersAndLayout) {
    const TrimmedRegion region = square_region();
    const FieldRaster r = rasterize(region, 4, 2, FieldMode::Verdict);
    EXPECT_EQ(r.values.size(), 8u);
    EXPECT_EQ(r.sample(0, 0), (Point2{0.125, 0.75}));
    EXPECT_EQ(r.sample(3, 1), (Point2{0.875, 0.25}));
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 4; ++x)
            EXPECT_EQ(r.values[y * 4 + x], static_cast<double>(classify(region, r.sample(x, y)).verdict));
}

TEST(Field, SingleCenterPixel) {
    const FieldRaster r = rasterize(square_region(), 1, 1, FieldMode::Verdict);
    ASSERT_EQ(r.values.size(), 1u);
    EXPECT_EQ(r.values[0], static_cast<double>(Verdict::Inside));
}

TEST(Field, SmallLoopMissesPixelCenters) {
    const TrimmedRegion region({square(0.4, 0.6)}, DomainTopology::none());
    const FieldRaster r = rasterize(region, 2, 2, FieldMode::Verdict);
    for (double v : r.values) EXPECT_EQ(v, static_cast<double>(Verdict::Outside));
}

TEST(Field, ParallelMatchesSerial) {
    SplitMix64 rng(31);
    for (const PeriodicDataset& ds : standard_periodic_datasets(11)) {
        const TrimmedRegion region(ds.loops, ds.topology);
        for (FieldMode mode : {FieldMode::Winding, FieldMode::Verdict}) {
            const FieldRaster a = rasterize(region, 33, 17, mode);
            const FieldRaster b = rasterize_serial(region, 33, 17, mode);
            ASSERT_EQ(a.values.size(), b.values.size());
            EXPECT_EQ(0, std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double))) << ds.name;
            EXPECT_EQ(a.on_boundary, b.on_boundary);
        }
    }
}

TEST(Field, RejectsEmptyGrid) {
    EXPECT_THROW(rasterize(square_region(), 0, 3, FieldMode::Winding), DomainError);
    EXPECT_THROW(rasterize_serial(square_region(), 3, 0, FieldMode::Winding), DomainError);
}
