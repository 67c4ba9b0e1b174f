#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covwind/periodic.hpp"
#include "covwind/winding.hpp"

namespace covwind {

// SplitMix64 (Steele, Lea, Flood 2014): 64-bit state, increment
// 0x9e3779b97f4a7c15, output mix 30/27/31. uniform() takes the top 53 bits;
// normal() is Box-Muller without caching. Fixed here rather than taken from
// <random> so seeded datasets are identical on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept;
    double uniform() noexcept;                        // [0, 1)
    double uniform(double lo, double hi) noexcept;    // [lo, hi)
    double normal() noexcept;                         // standard normal
    int integer(int lo, int hi) noexcept;             // [lo, hi]

private:
    std::uint64_t state_;
};

// Closed loop of `segments` cubics with random control points in [0, 1]^2.
BezierPath random_cubic_loop(SplitMix64& rng, int segments = 2);

// Closed star-shaped loop r(theta) = radius (1 + sum of small harmonics),
// CCW, as C1 cubic Hermite segments.
BezierPath star_loop(SplitMix64& rng, Point2 center, double radius, int segments = 8);

// Circle of four rational quadratics (exact), CCW unless `ccw` is false.
BezierPath circle_loop(Point2 center, double radius, bool ccw = true);

// Gaussian noise of deviation sigma on every control point. Each segment is
// perturbed independently, so junctions open up.
BezierPath perturb(const BezierPath& path, SplitMix64& rng, double sigma);

// Oriented path from `start` over one period of class `cls`: a graph over
// the direction (p, q) with a periodic normal offset of at most `amplitude`
// (in normal distance). The last point is exactly start + (p, q).
BezierPath wavy_period(SplitMix64& rng, Point2 start, HomologyClass cls, double amplitude, int segments = 12);

struct PeriodicDataset {
    std::string name;
    DomainTopology topology;
    std::vector<BezierPath> loops;
};

// `pairs` bands of class +-cls, evenly spaced in the normal direction.
PeriodicDataset bi_periodic_dataset(SplitMix64& rng, HomologyClass cls, int pairs);

// Contractible circles on the torus, some crossing tile edges.
PeriodicDataset bi_contractible_dataset(SplitMix64& rng);

// Cylinder: rightward wavy line near v = 0.3, leftward near v = 0.7, a CW
// hole inside the band and a CCW island outside it.
PeriodicDataset uni_periodic_dataset(SplitMix64& rng);

// The periodic datasets used by the acceptance suite and the bench.
std::vector<PeriodicDataset> standard_periodic_datasets(std::uint64_t seed);

}  // namespace covwind
