#include "covwind/winding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "covwind/counters.hpp"
#include "covwind/errors.hpp"

namespace covwind {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

// ---------------------------------------------------------------------------
// BezierPath

BezierPath::BezierPath(std::vector<RationalBezierSegment> segments, double continuity_tolerance)
    : segments_(std::move(segments)), tolerance_(continuity_tolerance) {
    if (segments_.empty()) throw DomainError("a path needs at least one segment");
    bounds_.reserve(segments_.size());
    for (const auto& seg : segments_) bounds_.push_back(derivative_bound(seg));
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        const Point2 from = segments_[i].end();
        const Point2 to = segments_[i + 1].start();
        const double gap = distance(from, to);
        if (gap > tolerance_) gaps_.push_back({i, from, to, gap});
    }
}

Box BezierPath::control_box() const {
    Box box = segments_.front().control_box();
    for (const auto& seg : segments_) box.expand(seg.control_box());
    return box;
}

Point2 BezierPath::at(double s) const {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("path parameter outside [0, 1]");
    const double scaled = s * static_cast<double>(segments_.size());
    const std::size_t i = std::min(static_cast<std::size_t>(scaled), segments_.size() - 1);
    const double local = std::clamp(scaled - static_cast<double>(i), 0.0, 1.0);
    return evaluate(segments_[i], local);
}

BezierPath BezierPath::translated(Point2 offset) const {
    std::vector<RationalBezierSegment> out;
    out.reserve(segments_.size());
    for (const auto& seg : segments_) {
        std::vector<Point2> pts(seg.control_points().begin(), seg.control_points().end());
        for (auto& p : pts) p += offset;
        std::vector<double> w;
        if (seg.has_weights()) w.assign(seg.weights().begin(), seg.weights().end());
        out.emplace_back(std::move(pts), std::move(w));
    }
    return BezierPath(std::move(out), tolerance_);
}

BezierPath BezierPath::reversed() const {
    std::vector<RationalBezierSegment> out;
    out.reserve(segments_.size());
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
        std::vector<Point2> pts(it->control_points().rbegin(), it->control_points().rend());
        std::vector<double> w;
        if (it->has_weights()) w.assign(it->weights().rbegin(), it->weights().rend());
        out.emplace_back(std::move(pts), std::move(w));
    }
    return BezierPath(std::move(out), tolerance_);
}

// ---------------------------------------------------------------------------
// Primitives

double segment_winding(Point2 p, Point2 a, Point2 b) {
    if (p == a || p == b) throw DegenerateInputError("query point coincides with a segment endpoint");
    const Point2 da = a - p;
    const Point2 db = b - p;
    return std::atan2(cross(da, db), dot(da, db)) / kTwoPi;
}

int recursion_depth_cap(double bound, double eps) {
    if (!(bound > 0.0)) return 8;
    const double levels = std::ceil(std::log2(bound / eps));
    return static_cast<int>(std::max(0.0, levels)) + 8;
}

namespace {

class EllipseRecursion {
public:
    EllipseRecursion(Point2 p, const RationalBezierSegment& seg, double bound, double eps, std::size_t id)
        : p_(p), seg_(seg), bound_(bound), eps_(eps), id_(id), cap_(recursion_depth_cap(bound, eps)) {}

    WindingOutcome run(double a, Point2 pa, double b, Point2 pb, int depth) {
        OpCounters& counters = thread_counters();
        counters.max_depth = std::max<std::uint64_t>(counters.max_depth, static_cast<std::uint64_t>(depth));
        if (depth > cap_) {
            throw InternalError("winding recursion exceeded depth cap " + std::to_string(cap_));
        }
        if (distance(p_, pa) < eps_) return WindingOutcome::boundary({id_, a});
        if (distance(p_, pb) < eps_) return WindingOutcome::boundary({id_, b});
        if (!ellipse_contains({pa, pb, bound_ * (b - a)}, p_)) {
            counters.arithmetic += 10;
            return WindingOutcome::of(segment_winding(p_, pa, pb));
        }
        ++counters.subdivisions;
        const double m = 0.5 * (a + b);
        const Point2 pm = evaluate(seg_, m);
        WindingOutcome left = run(a, pa, m, pm, depth + 1);
        if (left.on_boundary()) return left;
        WindingOutcome right = run(m, pm, b, pb, depth + 1);
        if (right.on_boundary()) return right;
        return WindingOutcome::of(left.value + right.value);
    }

private:
    Point2 p_;
    const RationalBezierSegment& seg_;
    double bound_;
    double eps_;
    std::size_t id_;
    int cap_;
};

}  // namespace

WindingOutcome compute_winding(Point2 p, const CurveSpan& span, double bound, double eps, std::size_t segment_id) {
    if (!(eps > 0.0)) throw DomainError("tolerance must be positive");
    EllipseRecursion rec(p, *span.segment, bound, eps, segment_id);
    const Point2 pa = evaluate(*span.segment, span.a);
    const Point2 pb = evaluate(*span.segment, span.b);
    return rec.run(span.a, pa, span.b, pb, 0);
}

// ---------------------------------------------------------------------------
// Hierarchy

namespace {

struct HierarchyBuilder {
    const BezierPath& path;
    std::vector<PathHierarchy::Node>& nodes;
    std::vector<double> prefix;  // prefix[i] = sum of bounds and junction distances before segment i

    int build(std::size_t first, std::size_t last) {
        const int index = static_cast<int>(nodes.size());
        nodes.emplace_back();
        PathHierarchy::Node node;
        node.first = first;
        node.last = last;
        node.start = path.segment(first).start();
        node.end = path.segment(last).end();
        // Bounds of segments first..last plus every junction between them.
        node.span = prefix[last + 1] - prefix[first] - junction(last);
        const auto gaps = path.gaps();
        const auto lower = std::lower_bound(gaps.begin(), gaps.end(), first,
                                            [](const PathGap& g, std::size_t i) { return g.after < i; });
        const auto upper = std::lower_bound(gaps.begin(), gaps.end(), last,
                                            [](const PathGap& g, std::size_t i) { return g.after < i; });
        node.gap_begin = static_cast<std::size_t>(lower - gaps.begin());
        node.gap_end = static_cast<std::size_t>(upper - gaps.begin());
        if (first != last) {
            const std::size_t mid = first + (last - first) / 2;
            node.left = build(first, mid);
            node.right = build(mid + 1, last);
        }
        nodes[static_cast<std::size_t>(index)] = node;
        return index;
    }

    // Distance from the end of segment i to the start of segment i + 1.
    double junction(std::size_t i) const {
        if (i + 1 >= path.size()) return 0.0;
        return distance(path.segment(i).end(), path.segment(i + 1).start());
    }
};

}  // namespace

PathHierarchy build_hierarchy(const BezierPath& path) {
    PathHierarchy h;
    h.nodes_.reserve(2 * path.size());
    HierarchyBuilder builder{path, h.nodes_, {}};
    builder.prefix.resize(path.size() + 1, 0.0);
    for (std::size_t i = 0; i < path.size(); ++i) {
        builder.prefix[i + 1] = builder.prefix[i] + path.bound(i) + builder.junction(i);
    }
    builder.build(0, path.size() - 1);
    return h;
}

namespace {

WindingOutcome descend(Point2 p, const BezierPath& path, std::span<const PathHierarchy::Node> nodes,
                       const PathHierarchy::Node& node, double eps) {
    if (node.leaf()) {
        return compute_winding(p, CurveSpan(path.segment(node.first)), path.bound(node.first), eps, node.first);
    }
    if (distance(p, node.start) < eps) return WindingOutcome::boundary({node.first, 0.0});
    if (distance(p, node.end) < eps) return WindingOutcome::boundary({node.last, 1.0});
    if (!ellipse_contains({node.start, node.end, node.span}, p)) {
        double w = segment_winding(p, node.start, node.end);
        const auto gaps = path.gaps();
        for (std::size_t g = node.gap_begin; g < node.gap_end; ++g) w -= segment_winding(p, gaps[g].from, gaps[g].to);
        return WindingOutcome::of(w);
    }
    WindingOutcome left = descend(p, path, nodes, nodes[static_cast<std::size_t>(node.left)], eps);
    if (left.on_boundary()) return left;
    WindingOutcome right = descend(p, path, nodes, nodes[static_cast<std::size_t>(node.right)], eps);
    if (right.on_boundary()) return right;
    return WindingOutcome::of(left.value + right.value);
}

}  // namespace

WindingOutcome path_winding(Point2 p, const BezierPath& path, const PathHierarchy& hierarchy, double eps) {
    if (!(eps > 0.0)) throw DomainError("tolerance must be positive");
    if (hierarchy.empty()) throw DomainError("hierarchy was not built for this path");
    return descend(p, path, hierarchy.nodes(), hierarchy.root(), eps);
}

WindingOutcome path_winding_flat(Point2 p, const BezierPath& path, double eps) {
    double total = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        WindingOutcome w = compute_winding(p, CurveSpan(path.segment(i)), path.bound(i), eps, i);
        if (w.on_boundary()) return w;
        total += w.value;
    }
    return WindingOutcome::of(total);
}

// ---------------------------------------------------------------------------
// Oracles and baselines

namespace {

std::vector<Point2> polyline_of(const RationalBezierSegment& seg, int subdivisions) {
    std::vector<Point2> pts(static_cast<std::size_t>(subdivisions) + 1);
    for (int i = 0; i <= subdivisions; ++i) {
        pts[static_cast<std::size_t>(i)] = evaluate(seg, static_cast<double>(i) / subdivisions);
    }
    return pts;
}

}  // namespace

double polyline_winding_oracle(Point2 p, const BezierPath& path, int subdivisions) {
    if (subdivisions < 1) throw DomainError("subdivision count must be at least 1");
    double total = 0.0;
    for (const auto& seg : path.segments()) {
        const auto pts = polyline_of(seg, subdivisions);
        for (Point2 x : pts) {
            if (distance(p, x) < 1e-12) throw DegenerateInputError("query point lies on a polyline vertex");
        }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += segment_winding(p, pts[i], pts[i + 1]);
    }
    return total;
}

namespace {

struct Homogeneous {
    double x, y, w;
};

Point2 project(const Homogeneous& h) { return {h.x / h.w, h.y / h.w}; }

// Splits `h` at parameter t; `left` and `right` receive the two halves.
void de_casteljau_split(const std::vector<Homogeneous>& h, double t, std::vector<Homogeneous>& left,
                        std::vector<Homogeneous>& right) {
    const std::size_t n = h.size();
    std::vector<Homogeneous> work = h;
    left.resize(n);
    right.resize(n);
    left[0] = work[0];
    right[n - 1] = work[n - 1];
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t i = 0; i + r < n; ++i) {
            work[i] = {work[i].x + t * (work[i + 1].x - work[i].x), work[i].y + t * (work[i + 1].y - work[i].y),
                       work[i].w + t * (work[i + 1].w - work[i].w)};
        }
        left[r] = work[0];
        right[n - 1 - r] = work[n - 1 - r];
    }
    const std::uint64_t deg = n - 1;
    thread_counters().arithmetic += 9 * deg * (deg + 1) / 2;
}

// Closed convex hull of `pts` contains p. O(n): p is outside exactly when
// all directions pts[i] - p fit in an open half-plane.
bool hull_contains(const std::vector<Point2>& pts, Point2 p) {
    OpCounters& counters = thread_counters();
    ++counters.hull_tests;
    counters.arithmetic += 12 * pts.size();
    const Point2 ref = pts.front() - p;
    if (ref == Point2{}) return true;
    double lo = 0.0;
    double hi = 0.0;
    for (Point2 x : pts) {
        const Point2 d = x - p;
        if (d == Point2{}) return true;
        const double angle = std::atan2(cross(ref, d), dot(ref, d));
        if (angle == std::numbers::pi) return true;
        lo = std::min(lo, angle);
        hi = std::max(hi, angle);
    }
    return hi - lo >= std::numbers::pi;
}

class HullRecursion {
public:
    HullRecursion(Point2 p, double eps, std::size_t id, int cap) : p_(p), eps_(eps), id_(id), cap_(cap) {}

    WindingOutcome run(const std::vector<Homogeneous>& h, double a, double b, int depth) {
        OpCounters& counters = thread_counters();
        counters.max_depth = std::max<std::uint64_t>(counters.max_depth, static_cast<std::uint64_t>(depth));
        if (depth > cap_) throw InternalError("baseline recursion exceeded depth cap " + std::to_string(cap_));
        std::vector<Point2> pts(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) pts[i] = project(h[i]);
        counters.arithmetic += 2 * h.size();
        if (distance(p_, pts.front()) < eps_) return WindingOutcome::boundary({id_, a});
        if (distance(p_, pts.back()) < eps_) return WindingOutcome::boundary({id_, b});
        if (!hull_contains(pts, p_)) return WindingOutcome::of(segment_winding(p_, pts.front(), pts.back()));
        ++counters.subdivisions;
        std::vector<Homogeneous> left;
        std::vector<Homogeneous> right;
        de_casteljau_split(h, 0.5, left, right);
        const double m = 0.5 * (a + b);
        WindingOutcome wl = run(left, a, m, depth + 1);
        if (wl.on_boundary()) return wl;
        WindingOutcome wr = run(right, m, b, depth + 1);
        if (wr.on_boundary()) return wr;
        return WindingOutcome::of(wl.value + wr.value);
    }

private:
    Point2 p_;
    double eps_;
    std::size_t id_;
    int cap_;
};

}  // namespace

WindingOutcome control_polygon_winding_baseline(Point2 p, const CurveSpan& span, double eps, std::size_t segment_id) {
    if (!(eps > 0.0)) throw DomainError("tolerance must be positive");
    const auto& seg = *span.segment;
    std::vector<Homogeneous> h;
    h.reserve(seg.control_points().size());
    for (std::size_t i = 0; i < seg.control_points().size(); ++i) {
        const Point2 c = seg.control_points()[i];
        const double w = seg.weights()[i];
        h.push_back({c.u * w, c.v * w, w});
    }
    std::vector<Homogeneous> left;
    std::vector<Homogeneous> right;
    if (span.a > 0.0) {
        de_casteljau_split(h, span.a, left, right);
        h = right;
    }
    if (span.b < 1.0) {
        de_casteljau_split(h, (span.b - span.a) / (1.0 - span.a), left, right);
        h = left;
    }
    HullRecursion rec(p, eps, segment_id, recursion_depth_cap(derivative_bound(seg), eps));
    return rec.run(h, span.a, span.b, 0);
}

WindingOutcome path_winding_baseline(Point2 p, const BezierPath& path, double eps) {
    double total = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        WindingOutcome w = control_polygon_winding_baseline(p, CurveSpan(path.segment(i)), eps, i);
        if (w.on_boundary()) return w;
        total += w.value;
    }
    return WindingOutcome::of(total);
}

CrossingCount crossing_count(Point2 p, Point2 direction, const BezierPath& path, int subdivisions) {
    if (subdivisions < 1) throw DomainError("subdivision count must be at least 1");
    const double len = norm(direction);
    if (!(len > 0.0)) throw DomainError("ray direction must be nonzero");

    std::vector<std::vector<Point2>> polylines;
    polylines.reserve(path.size());
    for (const auto& seg : path.segments()) polylines.push_back(polyline_of(seg, subdivisions));

    const double base_angle = std::atan2(direction.v, direction.u);
    constexpr int kMaxRetries = 8;
    for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
        const double angle = base_angle + 1e-7 * attempt;
        const Point2 d{std::cos(angle), std::sin(angle)};
        bool grazes = false;
        for (const auto& line : polylines) {
            for (Point2 x : line) {
                const Point2 w = x - p;
                if (dot(w, d) >= -1e-12 && std::abs(cross(d, w)) < 1e-12) {
                    grazes = true;
                    break;
                }
            }
            if (grazes) break;
        }
        if (grazes) continue;

        CrossingCount out;
        for (const auto& line : polylines) {
            for (std::size_t i = 0; i + 1 < line.size(); ++i) {
                const Point2 e = line[i + 1] - line[i];
                const double denom = cross(d, e);
                if (denom == 0.0) continue;
                const Point2 ap = line[i] - p;
                const double s = cross(ap, e) / denom;
                const double t = cross(ap, d) / denom;
                if (s > 0.0 && t >= 0.0 && t < 1.0) {
                    ++out.crossings;
                    out.signed_count += denom > 0.0 ? 1 : -1;
                }
            }
        }
        return out;
    }
    throw DegenerateInputError("ray grazes a polyline vertex after perturbation retries");
}

}  // namespace covwind
