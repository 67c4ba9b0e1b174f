#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covwind/periodic.hpp"
#include "covwind/winding.hpp"

namespace covwind {

enum class Verdict { Outside = 0, Inside = 1, OnBoundary = 2 };

// NonZero: inside iff round(w) != 0. Positive: inside iff round(w) >= 1.
// Rounding is to nearest, ties away from zero.
enum class FillRule { NonZero, Positive };

const char* to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Outside;
    std::optional<double> winding;  // absent for OnBoundary
    double residual = 0.0;          // |w - round(w)|
    bool suspicious = false;        // residual within 1e-9 of 1/2
    std::optional<BoundaryHit> hit;
};

// A validated loop set plus tolerance and fill rule. Immutable.
class TrimmedRegion {
public:
    // Throws ValidationError when the loop set violates its topology.
    explicit TrimmedRegion(LoopSet loops, double eps = kDefaultEps, FillRule rule = FillRule::NonZero);
    TrimmedRegion(std::vector<BezierPath> loops, DomainTopology topology, double eps = kDefaultEps,
                  FillRule rule = FillRule::NonZero);

    DomainTopology topology() const noexcept { return loops_.topology(); }
    const LoopSet& loop_set() const noexcept { return loops_; }
    double eps() const noexcept { return eps_; }
    FillRule rule() const noexcept { return rule_; }

    // Winding number at p after reducing it into the base tile on periodic axes.
    WindingOutcome winding(Point2 p) const;

private:
    LoopSet loops_;
    double eps_;
    FillRule rule_;
};

Classification classify(const TrimmedRegion& region, Point2 p);

Classification classify_winding(const WindingOutcome& w, FillRule rule);

struct BatchResult {
    std::optional<Classification> value;
    std::string error;  // set when value is empty

    bool ok() const noexcept { return value.has_value(); }
};

// Element-wise classify; errors are recorded per element. The parallel
// version (OpenMP) and the serial reference return identical results.
std::vector<BatchResult> classify_batch(const TrimmedRegion& region, std::span<const Point2> points);
std::vector<BatchResult> classify_batch_serial(const TrimmedRegion& region, std::span<const Point2> points);

}  // namespace covwind
