#include "covwind/containment.hpp"

#include <cmath>

#include "covwind/errors.hpp"

namespace covwind {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Outside: return "outside";
        case Verdict::Inside: return "inside";
        case Verdict::OnBoundary: return "boundary";
    }
    return "unknown";
}

namespace {

LoopSet&& require_valid(LoopSet&& set) {
    if (!set.valid()) {
        std::string msg = "invalid loop set";
        for (const auto& v : set.report().violations) msg += "; " + to_string(v.kind) + ": " + v.message;
        throw ValidationError(msg);
    }
    return std::move(set);
}

BatchResult classify_one(const TrimmedRegion& region, Point2 p) {
    try {
        return {classify(region, p), {}};
    } catch (const std::exception& e) {
        return {std::nullopt, e.what()};
    }
}

}  // namespace

TrimmedRegion::TrimmedRegion(LoopSet loops, double eps, FillRule rule)
    : loops_(require_valid(std::move(loops))), eps_(eps), rule_(rule) {
    if (!(eps_ > 0.0)) throw DomainError("tolerance must be positive");
}

TrimmedRegion::TrimmedRegion(std::vector<BezierPath> loops, DomainTopology topology, double eps, FillRule rule)
    : TrimmedRegion(LoopSet(std::move(loops), topology, eps), eps, rule) {}

WindingOutcome TrimmedRegion::winding(Point2 p) const {
    if (!is_finite(p)) throw DomainError("query point is not finite");
    const DomainTopology topo = topology();
    if (topo.periodic_u()) p.u -= std::floor(p.u);
    if (topo.periodic_v()) p.v -= std::floor(p.v);
    return loop_set_winding(p, loops_, eps_);
}

Classification classify_winding(const WindingOutcome& w, FillRule rule) {
    Classification out;
    if (w.on_boundary()) {
        out.verdict = Verdict::OnBoundary;
        out.hit = w.hit;
        return out;
    }
    const double r = std::round(w.value);
    out.winding = w.value;
    out.residual = std::abs(w.value - r);
    out.suspicious = out.residual >= 0.5 - 1e-9;
    const bool inside = rule == FillRule::NonZero ? r != 0.0 : r >= 1.0;
    out.verdict = inside ? Verdict::Inside : Verdict::Outside;
    return out;
}

Classification classify(const TrimmedRegion& region, Point2 p) {
    return classify_winding(region.winding(p), region.rule());
}

std::vector<BatchResult> classify_batch(const TrimmedRegion& region, std::span<const Point2> points) {
    std::vector<BatchResult> out(points.size());
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = classify_one(region, points[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<BatchResult> classify_batch_serial(const TrimmedRegion& region, std::span<const Point2> points) {
    std::vector<BatchResult> out;
    out.reserve(points.size());
    for (Point2 p : points) out.push_back(classify_one(region, p));
    return out;
}

}  // namespace covwind
