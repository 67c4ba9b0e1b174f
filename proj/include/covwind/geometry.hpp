#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace covwind {

// A point (or vector) of the normalized parameter domain.
struct Point2 {
    double u = 0.0;
    double v = 0.0;

    constexpr Point2& operator+=(Point2 o) noexcept { u += o.u; v += o.v; return *this; }
    constexpr Point2& operator-=(Point2 o) noexcept { u -= o.u; v -= o.v; return *this; }
    friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr Point2 operator+(Point2 a, Point2 b) noexcept { return {a.u + b.u, a.v + b.v}; }
constexpr Point2 operator-(Point2 a, Point2 b) noexcept { return {a.u - b.u, a.v - b.v}; }
constexpr Point2 operator-(Point2 a) noexcept { return {-a.u, -a.v}; }
constexpr Point2 operator*(double s, Point2 a) noexcept { return {s * a.u, s * a.v}; }
constexpr Point2 operator*(Point2 a, double s) noexcept { return {s * a.u, s * a.v}; }

constexpr double dot(Point2 a, Point2 b) noexcept { return a.u * b.u + a.v * b.v; }
constexpr double cross(Point2 a, Point2 b) noexcept { return a.u * b.v - a.v * b.u; }
inline double norm(Point2 a) noexcept { return std::hypot(a.u, a.v); }
inline double distance(Point2 a, Point2 b) noexcept { return norm(a - b); }
inline bool is_finite(Point2 a) noexcept { return std::isfinite(a.u) && std::isfinite(a.v); }

// Axis-aligned box; used for control-point extents.
struct Box {
    Point2 lo{};
    Point2 hi{};

    static Box of(std::span<const Point2> points);
    void expand(Point2 p) noexcept;
    void expand(const Box& b) noexcept;
    double width() const noexcept { return hi.u - lo.u; }
    double height() const noexcept { return hi.v - lo.v; }
};

// A (rational) Bezier segment with control points P_0..P_n and positive
// weights w_0..w_n. Weights default to all ones (the polynomial case).
class RationalBezierSegment {
public:
    explicit RationalBezierSegment(std::vector<Point2> control_points,
                                   std::vector<double> weights = {});

    int degree() const noexcept { return static_cast<int>(points_.size()) - 1; }
    std::span<const Point2> control_points() const noexcept { return points_; }
    std::span<const double> weights() const noexcept { return weights_; }

    // True when the weights are not all equal.
    bool is_rational() const noexcept { return rational_; }
    // True when weights were given explicitly (even if equal).
    bool has_weights() const noexcept { return explicit_weights_; }

    Point2 start() const noexcept { return points_.front(); }
    Point2 end() const noexcept { return points_.back(); }
    Box control_box() const { return Box::of(points_); }

private:
    std::vector<Point2> points_;
    std::vector<double> weights_;
    bool rational_ = false;
    bool explicit_weights_ = false;
};

// Sub-interval [a, b] of a segment's parameter range.
struct CurveSpan {
    const RationalBezierSegment* segment = nullptr;
    double a = 0.0;
    double b = 1.0;

    CurveSpan(const RationalBezierSegment& seg, double a = 0.0, double b = 1.0);
};

// The region d(x, focus_start) + d(x, focus_end) <= span.
struct EllipseBound {
    Point2 focus_start{};
    Point2 focus_end{};
    double span = 0.0;
};

// Evaluates the segment at t in O(n) without temporary storage. Exactly
// t = 0 and t = 1 return the stored end control points.
Point2 evaluate(const RationalBezierSegment& segment, double t);

// Upper bound on |gamma'(t)| over [0, 1].
double derivative_bound(const RationalBezierSegment& segment);

EllipseBound ellipse_bound(const CurveSpan& span, double bound);

bool ellipse_contains(const EllipseBound& bound, Point2 p);

RationalBezierSegment elevate_degree(const RationalBezierSegment& segment, int target_degree);

// Splits a clamped (rational) B-spline into Bezier segments by knot
// insertion. Each segment is reparameterized over [0, 1].
std::vector<RationalBezierSegment> decompose_bspline(std::span<const double> knots,
                                                     std::span<const Point2> control_points,
                                                     std::span<const double> weights,
                                                     int degree);

}  // namespace covwind
