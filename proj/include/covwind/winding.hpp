#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "covwind/geometry.hpp"

namespace covwind {

inline constexpr double kDefaultEps = 1e-6;

// Where a query touched the boundary: segment index within its path and the
// curve parameter of the endpoint that fell inside the tolerance.
struct BoundaryHit {
    std::size_t segment = 0;
    double t = 0.0;
};

// Either a real winding value or an on-boundary verdict.
struct WindingOutcome {
    enum class Kind { Value, OnBoundary };

    Kind kind = Kind::Value;
    double value = 0.0;
    std::optional<BoundaryHit> hit;

    static WindingOutcome of(double w) { return {Kind::Value, w, std::nullopt}; }
    static WindingOutcome boundary(BoundaryHit h) { return {Kind::OnBoundary, 0.0, h}; }
    bool on_boundary() const noexcept { return kind == Kind::OnBoundary; }
};

// A discontinuity between consecutive segments (end of `after` to start of
// `after + 1`).
struct PathGap {
    std::size_t after = 0;
    Point2 from{};
    Point2 to{};
    double length = 0.0;
};

// A chain of Bezier segments. Breaks in continuity are recorded, not fatal.
class BezierPath {
public:
    explicit BezierPath(std::vector<RationalBezierSegment> segments, double continuity_tolerance = 1e-9);

    std::span<const RationalBezierSegment> segments() const noexcept { return segments_; }
    std::size_t size() const noexcept { return segments_.size(); }
    const RationalBezierSegment& segment(std::size_t i) const { return segments_[i]; }
    double bound(std::size_t i) const { return bounds_[i]; }
    std::span<const double> bounds() const noexcept { return bounds_; }
    std::span<const PathGap> gaps() const noexcept { return gaps_; }
    double continuity_tolerance() const noexcept { return tolerance_; }

    Point2 start() const { return segments_.front().start(); }
    Point2 end() const { return segments_.back().end(); }
    Box control_box() const;

    // Point at global parameter s in [0, 1]; segment i covers [i/N, (i+1)/N].
    Point2 at(double s) const;

    BezierPath translated(Point2 offset) const;
    BezierPath reversed() const;

private:
    std::vector<RationalBezierSegment> segments_;
    std::vector<double> bounds_;
    std::vector<PathGap> gaps_;
    double tolerance_;
};

// Balanced binary tree of ellipse bounds over segment ranges [first, last].
class PathHierarchy {
public:
    struct Node {
        std::size_t first = 0;
        std::size_t last = 0;
        Point2 start{};
        Point2 end{};
        double span = 0.0;
        int left = -1;
        int right = -1;
        // Half-open range into BezierPath::gaps() of gaps inside this node.
        std::size_t gap_begin = 0;
        std::size_t gap_end = 0;

        bool leaf() const noexcept { return left < 0; }
    };

    std::span<const Node> nodes() const noexcept { return nodes_; }
    const Node& root() const { return nodes_.front(); }
    bool empty() const noexcept { return nodes_.empty(); }

private:
    friend PathHierarchy build_hierarchy(const BezierPath& path);
    std::vector<Node> nodes_;
};

// Signed angle subtended by segment ab at p, divided by 2 pi.
double segment_winding(Point2 p, Point2 a, Point2 b);

// Recursive ellipse-bound winding number of one curve span.
WindingOutcome compute_winding(Point2 p, const CurveSpan& span, double bound, double eps,
                               std::size_t segment_id = 0);

PathHierarchy build_hierarchy(const BezierPath& path);

WindingOutcome path_winding(Point2 p, const BezierPath& path, const PathHierarchy& hierarchy, double eps);

// Sum of compute_winding over every segment, no hierarchy pruning.
WindingOutcome path_winding_flat(Point2 p, const BezierPath& path, double eps);

// Reference value: winding of the uniform-parameter polyline with
// `subdivisions` pieces per segment.
double polyline_winding_oracle(Point2 p, const BezierPath& path, int subdivisions);

// Same recursion as compute_winding, but each span is bounded by the convex
// hull of its de Casteljau-subdivided control points.
WindingOutcome control_polygon_winding_baseline(Point2 p, const CurveSpan& span, double eps,
                                                std::size_t segment_id = 0);

WindingOutcome path_winding_baseline(Point2 p, const BezierPath& path, double eps);

struct CrossingCount {
    int crossings = 0;     // every crossing of the ray
    int signed_count = 0;  // +1 where the boundary passes counter-clockwise around p
};

// Ray casting against the polyline discretization of `path`.
CrossingCount crossing_count(Point2 p, Point2 direction, const BezierPath& path, int subdivisions);

// Depth cap ceil(log2(bound / eps)) + 8 used by both recursions.
int recursion_depth_cap(double bound, double eps);

}  // namespace covwind
