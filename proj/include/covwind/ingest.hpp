#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covwind/containment.hpp"
#include "covwind/periodic.hpp"

namespace covwind {

// Native loop-set format:
//   {"topology": "none"|"uni"|"bi",
//    "name": "..."?,
//    "loops": [{"segments": [{"points": [[u,v],...], "weights": [w,...]?}],
//               "homology": [p,q]?}]}
struct SegmentRecord {
    std::vector<Point2> points;
    std::vector<double> weights;  // empty when absent
};

struct LoopRecord {
    std::vector<SegmentRecord> segments;
    std::optional<HomologyClass> homology;
};

struct LoopSetDocument {
    DomainTopology topology = DomainTopology::none();
    std::optional<std::string> name;
    std::vector<LoopRecord> loops;
};

// Throws FormatError on schema violations.
LoopSetDocument parse_loopset_document(std::string_view json);

// Doubles are written in shortest round-trip form, so parse(serialize(d))
// reproduces every coordinate and weight bit for bit.
std::string serialize_loopset_document(const LoopSetDocument& doc, int indent = -1);

// Makes each loop continuous in covering space: when consecutive segment
// endpoints jump by >= 1/2 along a periodic axis, the remainder of the loop
// is shifted by the nearest lattice vector. No-op on continuous input.
LoopSetDocument unwrap(const LoopSetDocument& doc);

std::vector<BezierPath> to_paths(const LoopSetDocument& doc);

// Unwraps, builds and analyzes the loops. The result may be invalid; use
// LoopSet::report() for diagnostics.
LoopSet build_loop_set(const LoopSetDocument& doc, double eps = kDefaultEps);

// Parse + unwrap + validate. Throws FormatError or ValidationError.
TrimmedRegion load_loopset(std::string_view json, double eps = kDefaultEps, FillRule rule = FillRule::NonZero);

struct SvgParseResult {
    std::vector<BezierPath> paths;
    std::size_t skipped_elements = 0;  // elements other than svg, g and path
};

// Path-data subset MmLlHhVvCcSsQqTtZzAa. Lines stay degree 1, quadratics are
// elevated to cubics and arcs become cubics of at most 90 degrees each.
// Coordinates are left in SVG orientation (y down); `offset` is added to
// the byte offsets reported in FormatError.
std::vector<std::vector<RationalBezierSegment>> parse_path_data(std::string_view d, std::size_t offset = 0);

// Collects every subpath of every <path>, applies transform attributes
// (including those of enclosing <g> elements) and flips y.
SvgParseResult parse_svg(std::string_view svg);

// Uniform scale + translation.
struct Similarity {
    double scale = 1.0;
    Point2 offset{};

    Point2 apply(Point2 p) const noexcept { return scale * p + offset; }
};

// Maps the tight control-point box into [0,1]^2 keeping the aspect ratio,
// centered along the shorter axis. Throws DomainError on zero extent.
Similarity unit_square_transform(const std::vector<BezierPath>& paths);
std::vector<BezierPath> normalize_unit_square(const std::vector<BezierPath>& paths);

BezierPath map_path(const BezierPath& path, const Similarity& s);

// Loads .svg (normalized, non-periodic) or loop-set JSON by file content.
TrimmedRegion load_region_file(const std::string& path, double eps = kDefaultEps,
                               FillRule rule = FillRule::NonZero);

std::string read_file(const std::string& path);

}  // namespace covwind
