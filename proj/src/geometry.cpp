#include "covwind/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "covwind/counters.hpp"
#include "covwind/errors.hpp"

namespace covwind {

Box Box::of(std::span<const Point2> points) {
    Box box{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
            {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
    for (Point2 p : points) box.expand(p);
    return box;
}

void Box::expand(Point2 p) noexcept {
    lo.u = std::min(lo.u, p.u);
    lo.v = std::min(lo.v, p.v);
    hi.u = std::max(hi.u, p.u);
    hi.v = std::max(hi.v, p.v);
}

void Box::expand(const Box& b) noexcept {
    expand(b.lo);
    expand(b.hi);
}

RationalBezierSegment::RationalBezierSegment(std::vector<Point2> control_points,
                                             std::vector<double> weights)
    : points_(std::move(control_points)), weights_(std::move(weights)) {
    if (points_.size() < 2) {
        throw DomainError("Bezier segment needs at least 2 control points");
    }
    for (Point2 p : points_) {
        if (!is_finite(p)) throw DomainError("Bezier control point is not finite");
    }
    if (weights_.empty()) {
        weights_.assign(points_.size(), 1.0);
        return;
    }
    explicit_weights_ = true;
    if (weights_.size() != points_.size()) {
        throw DomainError("weight count " + std::to_string(weights_.size()) +
                          " does not match control point count " + std::to_string(points_.size()));
    }
    for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("Bezier weights must be positive and finite");
    }
    rational_ = std::any_of(weights_.begin(), weights_.end(),
                            [&](double w) { return w != weights_.front(); });
}

CurveSpan::CurveSpan(const RationalBezierSegment& seg, double a_, double b_)
    : segment(&seg), a(a_), b(b_) {
    if (!(0.0 <= a && a < b && b <= 1.0)) {
        throw DomainError("curve span must satisfy 0 <= a < b <= 1");
    }
}

Point2 evaluate(const RationalBezierSegment& segment, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("evaluation parameter outside [0, 1]");

    OpCounters& counters = thread_counters();
    ++counters.evaluations;
    if (t == 0.0) return segment.start();
    if (t == 1.0) return segment.end();

    // Linear-time geometric scheme: the running point is always a convex
    // combination Q_k of P_0..P_k, updated with ratio h_k of consecutive
    // weighted Bernstein terms.
    const auto pts = segment.control_points();
    const auto w = segment.weights();
    const int n = segment.degree();
    const double s = 1.0 - t;
    double h = 1.0;
    Point2 q = pts[0];
    for (int k = 1; k <= n; ++k) {
        const double up = h * t * static_cast<double>(n - k + 1) * w[k];
        h = up / (static_cast<double>(k) * s * w[k - 1] + up);
        q = (1.0 - h) * q + h * pts[k];
    }
    counters.arithmetic += 14 * static_cast<std::uint64_t>(n) + 1;
    return q;
}

double derivative_bound(const RationalBezierSegment& segment) {
    const auto pts = segment.control_points();
    const double n = segment.degree();
    double max_step = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) max_step = std::max(max_step, distance(pts[i], pts[i - 1]));
    if (!segment.is_rational()) return n * max_step;

    const auto w = segment.weights();
    const auto [wmin, wmax] = std::minmax_element(w.begin(), w.end());
    const double ratio = *wmax / *wmin;
    double diameter = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) diameter = std::max(diameter, distance(pts[i], pts[j]));
    }
    return std::min(n * ratio * diameter, n * ratio * ratio * max_step);
}

EllipseBound ellipse_bound(const CurveSpan& span, double bound) {
    return {evaluate(*span.segment, span.a), evaluate(*span.segment, span.b), bound * (span.b - span.a)};
}

bool ellipse_contains(const EllipseBound& bound, Point2 p) {
    OpCounters& counters = thread_counters();
    ++counters.ellipse_tests;
    counters.arithmetic += 11;
    return distance(p, bound.focus_start) + distance(p, bound.focus_end) <= bound.span;
}

namespace {

struct Homogeneous {
    double x, y, w;
};

Homogeneous lift(Point2 p, double w) { return {p.u * w, p.v * w, w}; }
Point2 project(const Homogeneous& h) { return {h.x / h.w, h.y / h.w}; }
Homogeneous lerp(const Homogeneous& a, const Homogeneous& b, double t) {
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.w + t * (b.w - a.w)};
}

RationalBezierSegment from_homogeneous(const std::vector<Homogeneous>& h, bool keep_weights) {
    std::vector<Point2> pts;
    std::vector<double> w;
    pts.reserve(h.size());
    for (const auto& q : h) {
        pts.push_back(project(q));
        if (keep_weights) w.push_back(q.w);
    }
    return RationalBezierSegment(std::move(pts), std::move(w));
}

}  // namespace

RationalBezierSegment elevate_degree(const RationalBezierSegment& segment, int target_degree) {
    const int degree = segment.degree();
    if (target_degree < degree) {
        throw DomainError("cannot elevate degree " + std::to_string(degree) + " to " + std::to_string(target_degree));
    }
    if (target_degree == degree) return segment;

    std::vector<Homogeneous> h;
    const auto pts = segment.control_points();
    const auto w = segment.weights();
    for (std::size_t i = 0; i < pts.size(); ++i) h.push_back(lift(pts[i], w[i]));

    for (int n = degree; n < target_degree; ++n) {
        std::vector<Homogeneous> next(static_cast<std::size_t>(n) + 2);
        next.front() = h.front();
        next.back() = h.back();
        for (int i = 1; i <= n; ++i) {
            const double a = static_cast<double>(i) / static_cast<double>(n + 1);
            next[static_cast<std::size_t>(i)] = lerp(h[static_cast<std::size_t>(i)], h[static_cast<std::size_t>(i) - 1], a);
        }
        h = std::move(next);
    }
    return from_homogeneous(h, segment.has_weights());
}

std::vector<RationalBezierSegment> decompose_bspline(std::span<const double> knots,
                                                     std::span<const Point2> control_points,
                                                     std::span<const double> weights,
                                                     int degree) {
    const std::size_t p = static_cast<std::size_t>(degree);
    if (degree < 1) throw FormatError("B-spline degree must be at least 1");
    if (control_points.size() < p + 1) throw FormatError("B-spline needs at least degree + 1 control points");
    if (knots.size() != control_points.size() + p + 1) {
        throw FormatError("knot count " + std::to_string(knots.size()) + " does not equal control points + degree + 1");
    }
    if (!weights.empty() && weights.size() != control_points.size()) {
        throw FormatError("B-spline weight count does not match control points");
    }
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i])) throw FormatError("non-finite knot");
        if (i > 0 && knots[i] < knots[i - 1]) throw FormatError("knot vector is decreasing at index " + std::to_string(i));
    }
    const std::size_t m = knots.size() - 1;
    for (std::size_t i = 1; i <= p; ++i) {
        if (knots[i] != knots[0] || knots[m - i] != knots[m]) throw FormatError("knot vector is not clamped");
    }
    if (!(knots[0] < knots[m])) throw FormatError("knot vector has zero length");

    std::vector<double> u(knots.begin(), knots.end());
    std::vector<Homogeneous> q;
    for (std::size_t i = 0; i < control_points.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        if (!(w > 0.0)) throw FormatError("B-spline weights must be positive");
        q.push_back(lift(control_points[i], w));
    }

    // Raise every interior knot to multiplicity p (Boehm insertion).
    std::size_t i = p + 1;
    while (i < u.size() - p - 1) {
        const double value = u[i];
        std::size_t last = i;
        while (last + 1 < u.size() - p - 1 && u[last + 1] == value) ++last;
        std::size_t mult = last - i + 1;
        if (mult > p) throw FormatError("interior knot multiplicity exceeds degree");
        while (mult < p) {
            const std::size_t k = last;  // u[k] <= value < u[k+1]
            const std::size_t s = mult;
            std::vector<Homogeneous> next(q.size() + 1);
            for (std::size_t j = 0; j <= k - p; ++j) next[j] = q[j];
            for (std::size_t j = k - s + 1; j < next.size(); ++j) next[j] = q[j - 1];
            for (std::size_t j = k - p + 1; j <= k - s; ++j) {
                const double alpha = (value - u[j]) / (u[j + p] - u[j]);
                next[j] = lerp(q[j - 1], q[j], alpha);
            }
            q = std::move(next);
            u.insert(u.begin() + static_cast<std::ptrdiff_t>(k) + 1, value);
            ++last;
            ++mult;
        }
        i = last + 1;
    }

    std::vector<RationalBezierSegment> out;
    const bool keep_weights = !weights.empty();
    const std::size_t spans = (q.size() - 1) / p;
    for (std::size_t s = 0; s < spans; ++s) {
        std::vector<Homogeneous> piece(q.begin() + static_cast<std::ptrdiff_t>(s * p),
                                       q.begin() + static_cast<std::ptrdiff_t>(s * p + p + 1));
        out.push_back(from_homogeneous(piece, keep_weights));
    }
    return out;
}

}  // namespace covwind
