#include "covwind/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "covwind/errors.hpp"

namespace covwind {

using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- JSON

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw FormatError("loop-set schema: " + where + ": " + what);
}

double read_number(const ojson& j, const std::string& where) {
    if (!j.is_number()) schema_error(where, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) schema_error(where, "number is not finite");
    return x;
}

void check_keys(const ojson& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            schema_error(where, "unknown key \"" + key + "\"");
        }
    }
}

SegmentRecord parse_segment(const ojson& j, const std::string& where) {
    if (!j.is_object()) schema_error(where, "segment must be an object");
    check_keys(j, {"points", "weights"}, where);
    auto it = j.find("points");
    if (it == j.end() || !it->is_array()) schema_error(where, "missing \"points\" array");
    if (it->size() < 2) schema_error(where, "a segment needs at least 2 control points");
    SegmentRecord seg;
    for (std::size_t k = 0; k < it->size(); ++k) {
        const ojson& pt = (*it)[k];
        const std::string at = where + ".points[" + std::to_string(k) + "]";
        if (!pt.is_array() || pt.size() != 2) schema_error(at, "point must be [u, v]");
        seg.points.push_back({read_number(pt[0], at), read_number(pt[1], at)});
    }
    if (auto w = j.find("weights"); w != j.end()) {
        if (!w->is_array()) schema_error(where, "\"weights\" must be an array");
        if (w->size() != seg.points.size()) schema_error(where, "weight count differs from point count");
        for (std::size_t k = 0; k < w->size(); ++k) {
            const double x = read_number((*w)[k], where + ".weights[" + std::to_string(k) + "]");
            if (!(x > 0.0)) schema_error(where, "weights must be positive");
            seg.weights.push_back(x);
        }
    }
    return seg;
}

LoopRecord parse_loop(const ojson& j, const std::string& where) {
    if (!j.is_object()) schema_error(where, "loop must be an object");
    check_keys(j, {"segments", "homology"}, where);
    auto it = j.find("segments");
    if (it == j.end() || !it->is_array()) schema_error(where, "missing \"segments\" array");
    if (it->empty()) schema_error(where, "a loop needs at least one segment");
    LoopRecord loop;
    for (std::size_t k = 0; k < it->size(); ++k) {
        loop.segments.push_back(parse_segment((*it)[k], where + ".segments[" + std::to_string(k) + "]"));
    }
    if (auto h = j.find("homology"); h != j.end()) {
        if (!h->is_array() || h->size() != 2 || !(*h)[0].is_number_integer() || !(*h)[1].is_number_integer()) {
            schema_error(where, "\"homology\" must be [p, q] with integer entries");
        }
        loop.homology = HomologyClass{(*h)[0].get<long>(), (*h)[1].get<long>()};
    }
    return loop;
}

const char* topology_name(DomainTopology t) {
    switch (t.kind) {
        case TopologyKind::NonPeriodic: return "none";
        case TopologyKind::UniPeriodic: return "uni";
        case TopologyKind::BiPeriodic: return "bi";
    }
    return "none";
}

// ---------------------------------------------------------------- SVG

struct Affine {
    // x' = a x + c y + e, y' = b x + d y + f
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    Point2 operator()(Point2 p) const noexcept { return {a * p.u + c * p.v + e, b * p.u + d * p.v + f}; }
    Affine then_inner(const Affine& m) const noexcept {  // this * m
        return {a * m.a + c * m.b, b * m.a + d * m.b, a * m.c + c * m.d, b * m.c + d * m.d,
                a * m.e + c * m.f + e, b * m.e + d * m.f + f};
    }
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

class PathDataParser {
public:
    PathDataParser(std::string_view s, std::size_t base) : s_(s), base_(base) {}

    std::vector<std::vector<RationalBezierSegment>> run() {
        skip_separators();
        if (i_ < s_.size() && s_[i_] != 'M' && s_[i_] != 'm') fail("path data must start with a moveto");
        while (true) {
            skip_separators();
            if (i_ >= s_.size()) break;
            const char cmd = s_[i_];
            if (std::string_view("MmLlHhVvCcSsQqTtZzAa").find(cmd) == std::string_view::npos) {
                fail(std::string("unexpected character '") + cmd + "'");
            }
            ++i_;
            if (cmd == 'Z' || cmd == 'z') {
                close_subpath();
                continue;
            }
            char active = cmd;
            do {
                step(active);
                if (active == 'M') active = 'L';
                if (active == 'm') active = 'l';
                skip_separators();
            } while (at_number());
        }
        flush();
        return std::move(out_);
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("SVG path data: " + what + " at byte " + std::to_string(base_ + i_), base_ + i_);
    }

    void skip_separators() {
        while (i_ < s_.size() && (is_space(s_[i_]) || s_[i_] == ',')) ++i_;
    }

    bool at_number() const {
        if (i_ >= s_.size()) return false;
        const char c = s_[i_];
        return (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+';
    }

    double number() {
        skip_separators();
        const std::size_t begin = i_;
        std::size_t j = i_;
        if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
        const std::size_t digits_begin = j;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        bool any = j > digits_begin;
        if (j < s_.size() && s_[j] == '.') {
            ++j;
            const std::size_t frac = j;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            any = any || j > frac;
        }
        if (!any) fail("expected a number");
        if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
            std::size_t k = j + 1;
            if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
            const std::size_t exp_digits = k;
            while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
            if (k > exp_digits) j = k;
        }
        std::size_t from = begin;
        if (s_[from] == '+') ++from;
        double x = 0.0;
        const auto res = std::from_chars(s_.data() + from, s_.data() + j, x);
        if (res.ec != std::errc() || !std::isfinite(x)) fail("number out of range");
        i_ = j;
        return x;
    }

    double flag() {
        skip_separators();
        if (i_ < s_.size() && (s_[i_] == '0' || s_[i_] == '1')) return s_[i_++] == '1' ? 1.0 : 0.0;
        fail("expected an arc flag (0 or 1)");
    }

    Point2 point(bool relative) {
        const double x = number();
        const double y = number();
        return relative ? Point2{cur_.u + x, cur_.v + y} : Point2{x, y};
    }

    void step(char cmd) {
        const bool rel = std::islower(static_cast<unsigned char>(cmd)) != 0;
        std::optional<Point2> cubic_ctrl, quad_ctrl;
        switch (std::toupper(static_cast<unsigned char>(cmd))) {
            case 'M': {
                flush();
                cur_ = start_ = point(rel);
                break;
            }
            case 'L': line(point(rel)); break;
            case 'H': {
                const double x = number();
                line({rel ? cur_.u + x : x, cur_.v});
                break;
            }
            case 'V': {
                const double y = number();
                line({cur_.u, rel ? cur_.v + y : y});
                break;
            }
            case 'C': {
                const Point2 c1 = point(rel), c2 = point(rel), p = point(rel);
                cubic(c1, c2, p);
                cubic_ctrl = c2;
                break;
            }
            case 'S': {
                const Point2 c1 = last_cubic_ ? 2.0 * cur_ - *last_cubic_ : cur_;
                const Point2 c2 = point(rel), p = point(rel);
                cubic(c1, c2, p);
                cubic_ctrl = c2;
                break;
            }
            case 'Q': {
                const Point2 q = point(rel), p = point(rel);
                quadratic(q, p);
                quad_ctrl = q;
                break;
            }
            case 'T': {
                const Point2 q = last_quad_ ? 2.0 * cur_ - *last_quad_ : cur_;
                quadratic(q, point(rel));
                quad_ctrl = q;
                break;
            }
            case 'A': {
                const double rx = number(), ry = number(), phi = number();
                const bool large = flag() != 0.0;
                const bool sweep = flag() != 0.0;
                arc(rx, ry, phi, large, sweep, point(rel));
                break;
            }
        }
        last_cubic_ = cubic_ctrl;
        last_quad_ = quad_ctrl;
    }

    void line(Point2 p) {
        if (p != cur_) segs_.emplace_back(std::vector<Point2>{cur_, p});
        cur_ = p;
    }

    void cubic(Point2 c1, Point2 c2, Point2 p) {
        segs_.emplace_back(std::vector<Point2>{cur_, c1, c2, p});
        cur_ = p;
    }

    void quadratic(Point2 q, Point2 p) {
        cubic(cur_ + (2.0 / 3.0) * (q - cur_), p + (2.0 / 3.0) * (q - p), p);
    }

    // Endpoint to center parameterization as in the SVG implementation notes.
    void arc(double rx, double ry, double phi_deg, bool large, bool sweep, Point2 p) {
        if (p == cur_) return;
        rx = std::abs(rx);
        ry = std::abs(ry);
        if (rx == 0.0 || ry == 0.0) {
            line(p);
            return;
        }
        const double phi = phi_deg * std::numbers::pi / 180.0;
        const double cs = std::cos(phi), sn = std::sin(phi);
        const Point2 h = 0.5 * (cur_ - p);
        const double x1 = cs * h.u + sn * h.v;
        const double y1 = -sn * h.u + cs * h.v;
        const double lambda = (x1 * x1) / (rx * rx) + (y1 * y1) / (ry * ry);
        if (lambda > 1.0) {
            rx *= std::sqrt(lambda);
            ry *= std::sqrt(lambda);
        }
        const double num = rx * rx * ry * ry - rx * rx * y1 * y1 - ry * ry * x1 * x1;
        const double den = rx * rx * y1 * y1 + ry * ry * x1 * x1;
        double coef = std::sqrt(std::max(0.0, num / den));
        if (large == sweep) coef = -coef;
        const double cxp = coef * rx * y1 / ry;
        const double cyp = -coef * ry * x1 / rx;
        const Point2 mid = 0.5 * (cur_ + p);
        const Point2 center{cs * cxp - sn * cyp + mid.u, sn * cxp + cs * cyp + mid.v};

        auto angle = [](Point2 a, Point2 b) { return std::atan2(cross(a, b), dot(a, b)); };
        const Point2 ua{(x1 - cxp) / rx, (y1 - cyp) / ry};
        const Point2 ub{(-x1 - cxp) / rx, (-y1 - cyp) / ry};
        const double theta = angle({1.0, 0.0}, ua);
        double delta = angle(ua, ub);
        if (!sweep && delta > 0) delta -= 2 * std::numbers::pi;
        if (sweep && delta < 0) delta += 2 * std::numbers::pi;

        // 45 degree pieces keep the radial error near 4e-6 of the radius.
        const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(delta) / (std::numbers::pi / 4) - 1e-12)));
        const double d = delta / pieces;
        const double k = 4.0 / 3.0 * std::tan(d / 4.0);
        auto on = [&](double a) {
            const double x = rx * std::cos(a), y = ry * std::sin(a);
            return center + Point2{cs * x - sn * y, sn * x + cs * y};
        };
        auto tangent = [&](double a) {
            const double x = -rx * std::sin(a), y = ry * std::cos(a);
            return Point2{cs * x - sn * y, sn * x + cs * y};
        };
        for (int n = 0; n < pieces; ++n) {
            const double a0 = theta + n * d, a1 = theta + (n + 1) * d;
            const Point2 end = n + 1 == pieces ? p : on(a1);
            cubic(cur_ + k * tangent(a0), end - k * tangent(a1), end);
        }
    }

    void close_subpath() {
        line(start_);
        flush();
        cur_ = start_;
        last_cubic_.reset();
        last_quad_.reset();
    }

    void flush() {
        if (!segs_.empty()) out_.push_back(std::move(segs_));
        segs_.clear();
    }

    std::string_view s_;
    std::size_t base_;
    std::size_t i_ = 0;
    Point2 cur_{}, start_{};
    std::optional<Point2> last_cubic_, last_quad_;
    std::vector<RationalBezierSegment> segs_;
    std::vector<std::vector<RationalBezierSegment>> out_;
};

std::vector<double> transform_args(std::string_view s, std::size_t& i) {
    std::vector<double> args;
    while (true) {
        while (i < s.size() && (is_space(s[i]) || s[i] == ',')) ++i;
        if (i >= s.size()) throw FormatError("SVG transform: missing ')'");
        if (s[i] == ')') {
            ++i;
            return args;
        }
        std::size_t j = i;
        if (s[j] == '+') ++i, ++j;
        if (j < s.size() && s[j] == '-') ++j;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
        if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
            ++j;
            if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
        double x = 0.0;
        const auto res = std::from_chars(s.data() + i, s.data() + j, x);
        if (res.ec != std::errc() || res.ptr != s.data() + j) throw FormatError("SVG transform: bad number");
        args.push_back(x);
        i = j;
    }
}

Affine parse_transform(std::string_view s) {
    Affine m;
    std::size_t i = 0;
    while (true) {
        while (i < s.size() && (is_space(s[i]) || s[i] == ',')) ++i;
        if (i >= s.size()) return m;
        const std::size_t name_begin = i;
        while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
        const std::string_view name = s.substr(name_begin, i - name_begin);
        while (i < s.size() && is_space(s[i])) ++i;
        if (i >= s.size() || s[i] != '(') throw FormatError("SVG transform: expected '('");
        ++i;
        const std::vector<double> a = transform_args(s, i);
        auto need = [&](std::size_t lo, std::size_t hi) {
            if (a.size() < lo || a.size() > hi) throw FormatError("SVG transform: wrong argument count for " + std::string(name));
        };
        Affine t;
        const double deg = std::numbers::pi / 180.0;
        if (name == "matrix") {
            need(6, 6);
            t = {a[0], a[1], a[2], a[3], a[4], a[5]};
        } else if (name == "translate") {
            need(1, 2);
            t.e = a[0];
            t.f = a.size() > 1 ? a[1] : 0.0;
        } else if (name == "scale") {
            need(1, 2);
            t.a = a[0];
            t.d = a.size() > 1 ? a[1] : a[0];
        } else if (name == "rotate") {
            if (a.size() != 1 && a.size() != 3) throw FormatError("SVG transform: wrong argument count for rotate");
            const double c = std::cos(a[0] * deg), s_ = std::sin(a[0] * deg);
            t = {c, s_, -s_, c, 0, 0};
            if (a.size() == 3) {
                const Affine to{1, 0, 0, 1, a[1], a[2]}, back{1, 0, 0, 1, -a[1], -a[2]};
                t = to.then_inner(t).then_inner(back);
            }
        } else if (name == "skewX") {
            need(1, 1);
            t.c = std::tan(a[0] * deg);
        } else if (name == "skewY") {
            need(1, 1);
            t.b = std::tan(a[0] * deg);
        } else {
            throw FormatError("SVG transform: unknown function " + std::string(name));
        }
        m = m.then_inner(t);
    }
}

struct Tag {
    std::string name;  // local name
    bool closing = false;
    bool self_closing = false;
    std::vector<std::pair<std::string, std::pair<std::string_view, std::size_t>>> attributes;  // value, offset

    std::optional<std::pair<std::string_view, std::size_t>> attribute(std::string_view key) const {
        for (const auto& [k, v] : attributes)
            if (k == key) return v;
        return std::nullopt;
    }
};

// Reads the tag starting at svg[i] == '<'; leaves i past the closing '>'.
Tag read_tag(std::string_view svg, std::size_t& i) {
    Tag tag;
    std::size_t j = i + 1;
    if (j < svg.size() && svg[j] == '/') {
        tag.closing = true;
        ++j;
    }
    const std::size_t name_begin = j;
    while (j < svg.size() && !is_space(svg[j]) && svg[j] != '>' && svg[j] != '/') ++j;
    std::string_view name = svg.substr(name_begin, j - name_begin);
    if (const auto colon = name.rfind(':'); colon != std::string_view::npos) name.remove_prefix(colon + 1);
    tag.name = std::string(name);
    while (true) {
        while (j < svg.size() && is_space(svg[j])) ++j;
        if (j >= svg.size()) throw FormatError("SVG: unterminated tag", i);
        if (svg[j] == '>') {
            ++j;
            break;
        }
        if (svg[j] == '/' && j + 1 < svg.size() && svg[j + 1] == '>') {
            tag.self_closing = true;
            j += 2;
            break;
        }
        const std::size_t key_begin = j;
        while (j < svg.size() && !is_space(svg[j]) && svg[j] != '=' && svg[j] != '>' && svg[j] != '/') ++j;
        std::string key(svg.substr(key_begin, j - key_begin));
        if (key.empty()) throw FormatError("SVG: malformed attribute at byte " + std::to_string(j), j);
        while (j < svg.size() && is_space(svg[j])) ++j;
        if (j < svg.size() && svg[j] == '=') {
            ++j;
            while (j < svg.size() && is_space(svg[j])) ++j;
            if (j >= svg.size() || (svg[j] != '"' && svg[j] != '\'')) {
                throw FormatError("SVG: unquoted attribute value at byte " + std::to_string(j), j);
            }
            const char quote = svg[j++];
            const std::size_t end = svg.find(quote, j);
            if (end == std::string_view::npos) throw FormatError("SVG: unterminated attribute value", j);
            tag.attributes.push_back({std::move(key), {svg.substr(j, end - j), j}});
            j = end + 1;
        } else {
            tag.attributes.push_back({std::move(key), {std::string_view{}, j}});
        }
    }
    i = j;
    return tag;
}

bool skip_past(std::string_view svg, std::size_t& i, std::string_view terminator) {
    const std::size_t end = svg.find(terminator, i);
    if (end == std::string_view::npos) return false;
    i = end + terminator.size();
    return true;
}

RationalBezierSegment map_segment(const RationalBezierSegment& seg, auto&& f) {
    std::vector<Point2> pts;
    pts.reserve(seg.control_points().size());
    for (Point2 p : seg.control_points()) pts.push_back(f(p));
    std::vector<double> w;
    if (seg.has_weights()) w.assign(seg.weights().begin(), seg.weights().end());
    return RationalBezierSegment(std::move(pts), std::move(w));
}

}  // namespace

// ---------------------------------------------------------------- documents

LoopSetDocument parse_loopset_document(std::string_view text) {
    ojson j;
    try {
        j = ojson::parse(text.begin(), text.end());
    } catch (const ojson::parse_error& e) {
        throw FormatError(std::string("loop-set JSON: ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    if (!j.is_object()) schema_error("document", "top level must be an object");
    check_keys(j, {"topology", "name", "loops"}, "document");
    LoopSetDocument doc;
    auto topo = j.find("topology");
    if (topo == j.end() || !topo->is_string()) schema_error("document", "missing \"topology\" string");
    const std::string t = topo->get<std::string>();
    if (t == "none") doc.topology = DomainTopology::none();
    else if (t == "uni") doc.topology = DomainTopology::uni();
    else if (t == "bi") doc.topology = DomainTopology::bi();
    else schema_error("topology", "expected \"none\", \"uni\" or \"bi\", got \"" + t + "\"");
    if (auto name = j.find("name"); name != j.end()) {
        if (!name->is_string()) schema_error("name", "must be a string");
        doc.name = name->get<std::string>();
    }
    auto loops = j.find("loops");
    if (loops == j.end() || !loops->is_array()) schema_error("document", "missing \"loops\" array");
    for (std::size_t k = 0; k < loops->size(); ++k) {
        doc.loops.push_back(parse_loop((*loops)[k], "loops[" + std::to_string(k) + "]"));
    }
    return doc;
}

std::string serialize_loopset_document(const LoopSetDocument& doc, int indent) {
    ojson j;
    j["topology"] = topology_name(doc.topology);
    if (doc.name) j["name"] = *doc.name;
    ojson loops = ojson::array();
    for (const LoopRecord& loop : doc.loops) {
        ojson segs = ojson::array();
        for (const SegmentRecord& seg : loop.segments) {
            ojson s;
            ojson pts = ojson::array();
            for (Point2 p : seg.points) pts.push_back({p.u, p.v});
            s["points"] = std::move(pts);
            if (!seg.weights.empty()) s["weights"] = seg.weights;
            segs.push_back(std::move(s));
        }
        ojson l;
        l["segments"] = std::move(segs);
        if (loop.homology) l["homology"] = {loop.homology->p, loop.homology->q};
        loops.push_back(std::move(l));
    }
    j["loops"] = std::move(loops);
    return j.dump(indent);
}

LoopSetDocument unwrap(const LoopSetDocument& doc) {
    LoopSetDocument out = doc;
    const bool pu = doc.topology.periodic_u(), pv = doc.topology.periodic_v();
    if (!pu && !pv) return out;
    for (LoopRecord& loop : out.loops) {
        Lattice shift{};
        for (std::size_t s = 0; s < loop.segments.size(); ++s) {
            auto& pts = loop.segments[s].points;
            if (s > 0) {
                const Point2 prev = loop.segments[s - 1].points.back();
                const Point2 first = pts.front() + shift.vec();
                const Point2 jump = prev - first;
                if (pu && std::abs(jump.u) >= 0.5) shift.i += std::lround(jump.u);
                if (pv && std::abs(jump.v) >= 0.5) shift.j += std::lround(jump.v);
            }
            // Untouched coordinates stay bit-identical (no +0.0 on -0.0).
            if (shift.i != 0 || shift.j != 0) {
                for (Point2& p : pts) p += shift.vec();
            }
        }
    }
    return out;
}

std::vector<BezierPath> to_paths(const LoopSetDocument& doc) {
    std::vector<BezierPath> paths;
    paths.reserve(doc.loops.size());
    for (std::size_t l = 0; l < doc.loops.size(); ++l) {
        std::vector<RationalBezierSegment> segs;
        for (const SegmentRecord& s : doc.loops[l].segments) {
            try {
                segs.emplace_back(s.points, s.weights);
            } catch (const DomainError& e) {
                throw FormatError("loops[" + std::to_string(l) + "]: " + e.what());
            }
        }
        paths.emplace_back(std::move(segs));
    }
    return paths;
}

LoopSet build_loop_set(const LoopSetDocument& doc, double eps) {
    const LoopSetDocument lifted = unwrap(doc);
    std::vector<std::optional<HomologyClass>> declared;
    bool any = false;
    for (const LoopRecord& l : lifted.loops) {
        declared.push_back(l.homology);
        any = any || l.homology.has_value();
    }
    if (!any) declared.clear();
    return LoopSet(to_paths(lifted), lifted.topology, eps, declared);
}

TrimmedRegion load_loopset(std::string_view json, double eps, FillRule rule) {
    return TrimmedRegion(build_loop_set(parse_loopset_document(json), eps), eps, rule);
}

// ---------------------------------------------------------------- SVG

std::vector<std::vector<RationalBezierSegment>> parse_path_data(std::string_view d, std::size_t offset) {
    return PathDataParser(d, offset).run();
}

SvgParseResult parse_svg(std::string_view svg) {
    SvgParseResult result;
    std::vector<Affine> stack{Affine{}};
    std::vector<std::string> open;  // names matching stack entries past the root
    std::size_t i = 0;
    while ((i = svg.find('<', i)) != std::string_view::npos) {
        const std::string_view rest = svg.substr(i);
        if (rest.starts_with("<!--")) {
            if (!skip_past(svg, i, "-->")) throw FormatError("SVG: unterminated comment", i);
            continue;
        }
        if (rest.starts_with("<![CDATA[")) {
            if (!skip_past(svg, i, "]]>")) throw FormatError("SVG: unterminated CDATA", i);
            continue;
        }
        if (rest.starts_with("<?")) {
            if (!skip_past(svg, i, "?>")) throw FormatError("SVG: unterminated processing instruction", i);
            continue;
        }
        if (rest.starts_with("<!")) {
            if (!skip_past(svg, i, ">")) throw FormatError("SVG: unterminated declaration", i);
            continue;
        }
        const Tag tag = read_tag(svg, i);
        if (tag.closing) {
            if ((tag.name == "g" || tag.name == "svg") && !open.empty() && open.back() == tag.name) {
                open.pop_back();
                stack.pop_back();
            }
            continue;
        }
        Affine local;
        if (auto t = tag.attribute("transform")) {
            try {
                local = parse_transform(t->first);
            } catch (const FormatError& e) {
                throw FormatError(std::string(e.what()) + " at byte " + std::to_string(t->second), t->second);
            }
        }
        const Affine m = stack.back().then_inner(local);
        if (tag.name == "g" || tag.name == "svg") {
            if (!tag.self_closing) {
                stack.push_back(tag.name == "svg" ? stack.back() : m);
                open.push_back(tag.name);
            }
        } else if (tag.name == "path") {
            auto d = tag.attribute("d");
            if (!d) continue;
            for (auto& sub : parse_path_data(d->first, d->second)) {
                std::vector<RationalBezierSegment> segs;
                segs.reserve(sub.size());
                for (const auto& seg : sub) {
                    segs.push_back(map_segment(seg, [&](Point2 p) {
                        const Point2 q = m(p);
                        return Point2{q.u, -q.v};
                    }));
                }
                result.paths.emplace_back(std::move(segs));
            }
        } else {
            ++result.skipped_elements;
            static constexpr std::array<std::string_view, 7> containers{
                "defs", "clipPath", "mask", "symbol", "pattern", "marker", "style"};
            if (!tag.self_closing &&
                std::find(containers.begin(), containers.end(), tag.name) != containers.end()) {
                // Skip the whole subtree: its paths are not part of the drawing.
                int depth = 1;
                while (depth > 0) {
                    i = svg.find('<', i);
                    if (i == std::string_view::npos) throw FormatError("SVG: unterminated <" + tag.name + ">", svg.size());
                    if (svg.substr(i).starts_with("<!--")) {
                        if (!skip_past(svg, i, "-->")) throw FormatError("SVG: unterminated comment", i);
                        continue;
                    }
                    if (svg.substr(i).starts_with("<!") || svg.substr(i).starts_with("<?")) {
                        if (!skip_past(svg, i, ">")) throw FormatError("SVG: unterminated declaration", i);
                        continue;
                    }
                    const Tag inner = read_tag(svg, i);
                    if (inner.name != tag.name || inner.self_closing) continue;
                    depth += inner.closing ? -1 : 1;
                }
            }
        }
    }
    return result;
}

Similarity unit_square_transform(const std::vector<BezierPath>& paths) {
    if (paths.empty()) throw DomainError("cannot normalize empty geometry");
    Box box = paths.front().control_box();
    for (const BezierPath& p : paths) box.expand(p.control_box());
    const double extent = std::max(box.width(), box.height());
    if (!(extent > 0.0) || !std::isfinite(extent)) throw DomainError("geometry has zero extent");
    Similarity s;
    s.scale = 1.0 / extent;
    s.offset = Point2{(1.0 - box.width() * s.scale) / 2.0, (1.0 - box.height() * s.scale) / 2.0} - s.scale * box.lo;
    return s;
}

BezierPath map_path(const BezierPath& path, const Similarity& s) {
    std::vector<RationalBezierSegment> segs;
    segs.reserve(path.size());
    for (const auto& seg : path.segments()) segs.push_back(map_segment(seg, [&](Point2 p) { return s.apply(p); }));
    return BezierPath(std::move(segs), path.continuity_tolerance());
}

std::vector<BezierPath> normalize_unit_square(const std::vector<BezierPath>& paths) {
    const Similarity s = unit_square_transform(paths);
    std::vector<BezierPath> out;
    out.reserve(paths.size());
    for (const BezierPath& p : paths) out.push_back(map_path(p, s));
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw std::runtime_error("cannot read " + path);
    return ss.str();
}

TrimmedRegion load_region_file(const std::string& path, double eps, FillRule rule) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
    if (first != std::string::npos && text[first] == '<') {
        SvgParseResult svg = parse_svg(text);
        if (svg.paths.empty()) throw FormatError("SVG contains no path geometry");
        return TrimmedRegion(normalize_unit_square(svg.paths), DomainTopology::none(), eps, rule);
    }
    return load_loopset(text, eps, rule);
}

}  // namespace covwind
