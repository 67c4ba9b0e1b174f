#include "covwind/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "covwind/errors.hpp"

namespace covwind {

std::uint64_t SplitMix64::next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

double SplitMix64::normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int SplitMix64::integer(int lo, int hi) noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next() % span);
}

namespace {

// Periodic offset sum_h a_h sin(2 pi h s + phi_h) and its derivative.
struct Harmonics {
    std::vector<double> amp, phase;

    Harmonics(SplitMix64& rng, int count, double amplitude) {
        for (int h = 1; h <= count; ++h) {
            amp.push_back(amplitude / count * rng.uniform(0.3, 1.0));
            phase.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
        }
    }

    double value(double s) const {
        double f = 0.0;
        for (std::size_t h = 0; h < amp.size(); ++h) {
            f += amp[h] * std::sin(2.0 * std::numbers::pi * static_cast<double>(h + 1) * s + phase[h]);
        }
        return f;
    }

    double slope(double s) const {
        double f = 0.0;
        for (std::size_t h = 0; h < amp.size(); ++h) {
            const double w = 2.0 * std::numbers::pi * static_cast<double>(h + 1);
            f += amp[h] * w * std::cos(w * s + phase[h]);
        }
        return f;
    }
};

// Cubic Hermite segments through x(s_k) with tangents x'(s_k), s_k = k/n.
template <class Curve, class Tangent>
BezierPath hermite(Curve x, Tangent dx, int n, Point2 last) {
    std::vector<RationalBezierSegment> segs;
    const double h = 1.0 / n;
    Point2 p0 = x(0.0);
    for (int k = 0; k < n; ++k) {
        const double s0 = k * h, s1 = (k + 1) * h;
        const Point2 p3 = k + 1 == n ? last : x(s1);
        segs.emplace_back(std::vector<Point2>{p0, p0 + (h / 3.0) * dx(s0), p3 - (h / 3.0) * dx(s1), p3});
        p0 = p3;
    }
    return BezierPath(std::move(segs));
}

}  // namespace

BezierPath random_cubic_loop(SplitMix64& rng, int segments) {
    if (segments < 1) throw DomainError("a loop needs at least one segment");
    auto pt = [&] { return Point2{rng.uniform(), rng.uniform()}; };
    const Point2 first = pt();
    Point2 prev = first;
    std::vector<RationalBezierSegment> segs;
    for (int i = 0; i < segments; ++i) {
        const Point2 next = i + 1 == segments ? first : pt();
        const Point2 c1 = pt();
        const Point2 c2 = pt();
        segs.emplace_back(std::vector<Point2>{prev, c1, c2, next});
        prev = next;
    }
    return BezierPath(std::move(segs));
}

BezierPath star_loop(SplitMix64& rng, Point2 center, double radius, int segments) {
    const Harmonics wobble(rng, 4, 0.35);
    const double tau = 2.0 * std::numbers::pi;
    auto r = [&](double s) { return radius * (1.0 + wobble.value(s)); };
    auto x = [&](double s) { return center + r(s) * Point2{std::cos(tau * s), std::sin(tau * s)}; };
    auto dx = [&](double s) {
        const double dr = radius * wobble.slope(s);
        const Point2 dir{std::cos(tau * s), std::sin(tau * s)};
        const Point2 normal{-dir.v, dir.u};
        return dr * dir + (tau * r(s)) * normal;
    };
    return hermite(x, dx, segments, x(0.0));
}

BezierPath circle_loop(Point2 center, double radius, bool ccw) {
    const double w = std::sqrt(0.5);
    std::vector<RationalBezierSegment> segs;
    const Point2 corners[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}};
    for (int q = 0; q < 4; ++q) {
        std::vector<Point2> pts;
        for (int i = 0; i < 3; ++i) pts.push_back(center + radius * corners[2 * q + i]);
        segs.emplace_back(std::move(pts), std::vector<double>{1.0, w, 1.0});
    }
    BezierPath path(std::move(segs));
    return ccw ? path : path.reversed();
}

BezierPath perturb(const BezierPath& path, SplitMix64& rng, double sigma) {
    std::vector<RationalBezierSegment> segs;
    for (const auto& seg : path.segments()) {
        std::vector<Point2> pts;
        for (Point2 q : seg.control_points()) pts.push_back(q + sigma * Point2{rng.normal(), rng.normal()});
        std::vector<double> w;
        if (seg.has_weights()) w.assign(seg.weights().begin(), seg.weights().end());
        segs.emplace_back(std::move(pts), std::move(w));
    }
    return BezierPath(std::move(segs), path.continuity_tolerance());
}

BezierPath wavy_period(SplitMix64& rng, Point2 start, HomologyClass cls, double amplitude, int segments) {
    if (cls.contractible()) throw DomainError("wavy_period needs a non-contractible class");
    const Point2 d = cls.lattice().vec();
    const Point2 n = (1.0 / norm(d)) * Point2{-d.v, d.u};
    const Harmonics f(rng, 3, amplitude);
    const double f0 = f.value(0.0);
    // Shift the offset so the curve starts exactly at `start`.
    auto x = [&](double s) { return start + s * d + (f.value(s) - f0) * n; };
    auto dx = [&](double s) { return d + f.slope(s) * n; };
    return hermite(x, dx, segments, start + d);
}

PeriodicDataset bi_periodic_dataset(SplitMix64& rng, HomologyClass cls, int pairs) {
    PeriodicDataset out;
    out.name = "bi" + std::to_string(cls.p) + "x" + std::to_string(cls.q) + "_pairs" + std::to_string(pairs);
    out.topology = DomainTopology::bi();
    const Point2 d = cls.lattice().vec();
    const double L = norm(d);
    const Point2 n = (1.0 / L) * Point2{-d.v, d.u};
    // Consecutive translates of one curve are 1/L apart along n; 2 * pairs
    // curves share that gap.
    const double gap = 1.0 / (L * 2.0 * pairs);
    const double amplitude = 0.2 * gap;
    const Point2 origin{rng.uniform(), rng.uniform()};
    for (int k = 0; k < pairs; ++k) {
        const Point2 a0 = origin + (2.0 * k * gap) * n;
        out.loops.push_back(wavy_period(rng, a0, cls, amplitude));
        const Point2 b0 = origin + ((2.0 * k + 1.0) * gap) * n + d;
        out.loops.push_back(wavy_period(rng, b0, -cls, amplitude));
    }
    return out;
}

PeriodicDataset bi_contractible_dataset(SplitMix64& rng) {
    PeriodicDataset out{"bi_contractible", DomainTopology::bi(), {}};
    out.loops.push_back(star_loop(rng, {0.3, 0.3}, 0.15));
    out.loops.push_back(circle_loop({0.95, 0.7}, 0.12, true));
    out.loops.push_back(circle_loop({0.55, 0.02}, 0.08, false));
    return out;
}

PeriodicDataset uni_periodic_dataset(SplitMix64& rng) {
    PeriodicDataset out{"uni_cylinder", DomainTopology::uni(), {}};
    out.loops.push_back(wavy_period(rng, {rng.uniform(), 0.3}, {1, 0}, 0.05));
    out.loops.push_back(wavy_period(rng, {rng.uniform() + 1.0, 0.7}, {-1, 0}, 0.05));
    out.loops.push_back(circle_loop({rng.uniform(), 0.5}, 0.07, false));
    out.loops.push_back(circle_loop({rng.uniform(), 0.88}, 0.05, true));
    return out;
}

std::vector<PeriodicDataset> standard_periodic_datasets(std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<PeriodicDataset> out;
    out.push_back(uni_periodic_dataset(rng));
    out.push_back(bi_contractible_dataset(rng));
    out.push_back(bi_periodic_dataset(rng, {0, 1}, 1));
    out.push_back(bi_periodic_dataset(rng, {2, 3}, 1));
    out.push_back(bi_periodic_dataset(rng, {3, 4}, 2));
    out.push_back(bi_periodic_dataset(rng, {5, 2}, 1));
    out.push_back(bi_periodic_dataset(rng, {4, -5}, 1));
    return out;
}

}  // namespace covwind
