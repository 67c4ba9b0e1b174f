#include "covwind/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <tuple>

#include "covwind/errors.hpp"

namespace covwind {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDefectWarning = 0.25;
constexpr double kShellTolerance = 1e-9;
constexpr double kProbeLadder[] = {0.5, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875, 0.0625};

double component(Point2 p, int axis) { return axis == 0 ? p.u : p.v; }

Point2 rotate(Point2 p) { return {p.v, -p.u}; }

BezierPath rotate_path(const BezierPath& path) {
    std::vector<RationalBezierSegment> segments;
    segments.reserve(path.size());
    for (const auto& seg : path.segments()) {
        std::vector<Point2> pts;
        for (Point2 q : seg.control_points()) pts.push_back(rotate(q));
        std::vector<double> w;
        if (seg.has_weights()) w.assign(seg.weights().begin(), seg.weights().end());
        segments.emplace_back(std::move(pts), std::move(w));
    }
    return BezierPath(std::move(segments), path.continuity_tolerance());
}

// Angle subtended at p by the ray ending at a and coming from -infinity
// along d, divided by 2 pi.
double incoming_ray(Point2 p, Point2 a, Point2 d) {
    const Point2 r = a - p;
    return std::atan2(cross(-1.0 * d, r), dot(-1.0 * d, r)) / kTwoPi;
}

// Same for the ray leaving b along d toward +infinity.
double outgoing_ray(Point2 p, Point2 b, Point2 d) {
    const Point2 r = b - p;
    return std::atan2(cross(r, d), dot(r, d)) / kTwoPi;
}

long floor_to_long(double x) { return static_cast<long>(std::floor(x)); }
long ceil_to_long(double x) { return static_cast<long>(std::ceil(x)); }

// Inverse of q modulo p (p > 0, gcd(p, q) = 1).
long mod_inverse(long q, long p) {
    if (p == 1) return 0;
    long r0 = p, r1 = ((q % p) + p) % p;
    long s0 = 0, s1 = 1;
    while (r1 != 0) {
        const long k = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - k * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - k * s1);
    }
    if (r0 != 1) throw DomainError("homology class is not primitive");
    return ((s0 % p) + p) % p;
}

// Normal coordinate of the band family for class (p, q); a lattice shift
// (r, s) moves it by -q r + p s.
struct NormalFrame {
    long p;
    long q;
    long inverse;

    explicit NormalFrame(HomologyClass cls) : p(cls.p), q(cls.q), inverse(mod_inverse(cls.q, cls.p)) {}

    double operator()(Point2 x) const { return -static_cast<double>(q) * x.u + static_cast<double>(p) * x.v; }

    // The unique shift with r in [0, p) whose normal offset is m.
    Lattice shift(long m) const {
        const long r = (((-m % p) * inverse) % p + p) % p;
        return {r, (m + q * r) / p};
    }
};

void normal_extent(const BezierPath& path, const NormalFrame& c, double& lo, double& hi) {
    for (const auto& seg : path.segments()) {
        for (Point2 x : seg.control_points()) {
            lo = std::min(lo, c(x));
            hi = std::max(hi, c(x));
        }
    }
}

bool probe_left(const ExtendedCurve& g1, Point2 offset, const ExtendedCurve& g2, double eps) {
    for (double t : kProbeLadder) {
        const WindingOutcome w = extended_winding(g1.base().at(t) + offset, g2, eps);
        if (!w.on_boundary()) return w.value > 0.0;
    }
    throw PairingError("every left-of probe landed on the boundary; curves intersect or coincide");
}

// Advisory check on sampled polylines of two loops.
bool polylines_intersect(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    auto orient = [](Point2 o, Point2 x, Point2 y) { return cross(x - o, y - o); };
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        const Point2 a0 = a[i], a1 = a[i + 1];
        for (std::size_t j = 0; j + 1 < b.size(); ++j) {
            const Point2 b0 = b[j], b1 = b[j + 1];
            if (std::max(a0.u, a1.u) < std::min(b0.u, b1.u) || std::max(b0.u, b1.u) < std::min(a0.u, a1.u) ||
                std::max(a0.v, a1.v) < std::min(b0.v, b1.v) || std::max(b0.v, b1.v) < std::min(a0.v, a1.v)) {
                continue;
            }
            const double d1 = orient(a0, a1, b0), d2 = orient(a0, a1, b1);
            const double d3 = orient(b0, b1, a0), d4 = orient(b0, b1, a1);
            if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0) {
                return true;
            }
        }
    }
    return false;
}

std::vector<Point2> sample_polyline(const BezierPath& path, int per_segment) {
    std::vector<Point2> pts;
    for (const auto& seg : path.segments()) {
        for (int k = 0; k < per_segment; ++k) pts.push_back(evaluate(seg, static_cast<double>(k) / per_segment));
    }
    pts.push_back(path.end());
    return pts;
}

WindingOutcome require_valid(const LoopSet& set) {
    if (!set.valid()) {
        const auto& v = set.report().violations.front();
        throw ValidationError("invalid loop set: " + to_string(v.kind) + ": " + v.message);
    }
    return WindingOutcome::of(0.0);
}

}  // namespace

std::string to_string(HomologyClass cls) {
    return "(" + std::to_string(cls.p) + ", " + std::to_string(cls.q) + ")";
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::Cardinality: return "cardinality";
        case Violation::Kind::NonCoprime: return "non-coprime";
        case Violation::Kind::UniperiodicMagnitude: return "uni-periodic magnitude";
        case Violation::Kind::MixedClasses: return "mixed classes";
        case Violation::Kind::HomologyMismatch: return "homology mismatch";
        case Violation::Kind::Pairing: return "pairing";
    }
    return "unknown";
}

HomologyReport homology_class(const BezierPath& loop, DomainTopology topology) {
    const Point2 d = loop.end() - loop.start();
    HomologyReport out;
    out.cls.p = topology.periodic_u() ? std::lround(d.u) : 0;
    out.cls.q = topology.periodic_v() ? std::lround(d.v) : 0;
    out.closure_defect = norm(d - out.cls.lattice().vec());
    out.warning = out.closure_defect > kDefectWarning;
    return out;
}

LiftedLoop::LiftedLoop(BezierPath p) : path(std::move(p)), hierarchy(build_hierarchy(path)), box(path.control_box()) {}

WindingOutcome line_winding(Point2 p, Point2 a, Point2 b, double eps) {
    const Point2 d = b - a;
    const double len = norm(d);
    if (len == 0.0) throw DegenerateInputError("line through two equal points");
    const double c = cross(d, p - a);
    if (std::abs(c) / len < eps) return WindingOutcome::boundary({0, 0.0});
    return WindingOutcome::of(c > 0.0 ? 0.5 : -0.5);
}

ExtendedCurve::ExtendedCurve(BezierPath base, Lattice extension)
    : base_(std::move(base)), hierarchy_(build_hierarchy(base_)), extension_(extension), box_(base_.control_box()) {
    if (extension_.i == 0 && extension_.j == 0) throw DomainError("extension vector must be nonzero");
    axis_ = std::abs(extension_.i) >= std::abs(extension_.j) ? 0 : 1;
    lo_ = component(box_.lo, axis_);
    hi_ = component(box_.hi, axis_);
}

ExtendedCurve ExtendedCurve::translated(Lattice offset) const {
    return ExtendedCurve(base_.translated(offset.vec()), extension_);
}

WindingOutcome extended_winding(Point2 p, const ExtendedCurve& curve, double eps) {
    const Point2 ev = curve.extension().vec();
    const int axis = curve.axis();
    const double va = component(ev, axis);
    const double pa = component(p, axis);

    // Copy k occupies [lo + k va, hi + k va] along the axis.
    double k1 = (pa - curve.extent_hi() - eps) / va;
    double k2 = (pa - curve.extent_lo() + eps) / va;
    if (k1 > k2) std::swap(k1, k2);
    long kmin = ceil_to_long(k1);
    long kmax = floor_to_long(k2);
    // Keep p's projection strictly between the two rays.
    const long kp = floor_to_long((pa - component(curve.start(), axis)) / va);
    kmin = std::min(kmin, kp);
    kmax = std::max(kmax, kp);

    double total = 0.0;
    for (long k = kmin; k <= kmax; ++k) {
        const WindingOutcome w = path_winding(p - static_cast<double>(k) * ev, curve.base(), curve.hierarchy(), eps);
        if (w.on_boundary()) return w;
        total += w.value;
    }
    total += incoming_ray(p, curve.start() + static_cast<double>(kmin) * ev, ev);
    total += outgoing_ray(p, curve.start() + static_cast<double>(kmax + 1) * ev, ev);
    return WindingOutcome::of(total);
}

WindingOutcome uni_contractible_winding(Point2 p, const LiftedLoop& loop, double eps) {
    const Box& box = loop.box;
    if (p.v < box.lo.v - eps || p.v > box.hi.v + eps) return WindingOutcome::of(0.0);
    double total = 0.0;
    const long i0 = ceil_to_long(p.u - box.hi.u - eps);
    const long i1 = floor_to_long(p.u - box.lo.u + eps);
    for (long i = i0; i <= i1; ++i) {
        const WindingOutcome w = path_winding({p.u - static_cast<double>(i), p.v}, loop.path, loop.hierarchy, eps);
        if (w.on_boundary()) return w;
        total += w.value;
    }
    return WindingOutcome::of(total);
}

WindingOutcome bi_contractible_winding(Point2 p, const LiftedLoop& loop, double eps) {
    const Box& box = loop.box;
    double total = 0.0;
    const long i0 = ceil_to_long(p.u - box.hi.u - eps), i1 = floor_to_long(p.u - box.lo.u + eps);
    const long j0 = ceil_to_long(p.v - box.hi.v - eps), j1 = floor_to_long(p.v - box.lo.v + eps);
    for (long i = i0; i <= i1; ++i) {
        for (long j = j0; j <= j1; ++j) {
            const Point2 q{p.u - static_cast<double>(i), p.v - static_cast<double>(j)};
            const WindingOutcome w = path_winding(q, loop.path, loop.hierarchy, eps);
            if (w.on_boundary()) return w;
            total += w.value;
        }
    }
    return WindingOutcome::of(total);
}

bool to_left(const ExtendedCurve& g1, const ExtendedCurve& g2, double eps) {
    return probe_left(g1, {0.0, 0.0}, g2, eps);
}

Lattice pair_loop(const ExtendedCurve& alpha, const ExtendedCurve& beta, HomologyClass cls, double eps) {
    if (cls.p <= 0) throw DomainError("pair_loop expects a class with p > 0, got " + to_string(cls));
    if (!(alpha.extension() == cls.lattice()) || !(beta.extension() == -cls.lattice())) {
        throw DomainError("pair_loop: alpha must extend by " + to_string(cls) + " and beta by its negation");
    }
    const NormalFrame c(cls);
    double lo = INFINITY, hi = -INFINITY;
    normal_extent(alpha.base(), c, lo, hi);
    normal_extent(beta.base(), c, lo, hi);
    // beta + shift(m) moves monotonically toward alpha's left as m grows;
    // find the smallest m that is already on the left.
    const long cap = ceil_to_long(2.0 * (hi - lo)) + 8;
    auto left = [&](long m) { return probe_left(beta, c.shift(m).vec(), alpha, eps); };
    long m = floor_to_long(c(alpha.base().at(0.5)) - c(beta.base().at(0.5))) + 1;
    long steps = 0;
    if (left(m)) {
        while (left(m - 1)) {
            if (++steps > cap) throw PairingError("no right-most left copy of beta found");
            --m;
        }
    } else {
        do {
            if (++steps > cap) throw PairingError("no copy of beta lies left of alpha");
            ++m;
        } while (!left(m));
    }
    return c.shift(m);
}

Lattice pair_loop(const BezierPath& alpha, const BezierPath& beta, HomologyClass cls, double eps) {
    if (cls.contractible()) throw DomainError("pair_loop needs a non-contractible class");
    if (cls.p != 0) {
        return pair_loop(ExtendedCurve(alpha, cls.lattice()), ExtendedCurve(beta, -cls.lattice()), cls, eps);
    }
    const HomologyClass rc{cls.q, 0};
    const Lattice w = pair_loop(ExtendedCurve(rotate_path(alpha), rc.lattice()),
                                ExtendedCurve(rotate_path(beta), -rc.lattice()), rc, eps);
    return {-w.j, w.i};
}

std::vector<BandPair> pair_loops(std::span<const BezierPath> alphas, std::span<const BezierPath> betas,
                                 HomologyClass cls, double eps) {
    if (alphas.size() != betas.size()) {
        throw ValidationError("cannot pair " + std::to_string(alphas.size()) + " loops of class " + to_string(cls) +
                              " with " + std::to_string(betas.size()) + " of the opposite class");
    }
    std::vector<ExtendedCurve> a, b;
    for (const auto& path : alphas) a.emplace_back(path, cls.lattice());
    for (const auto& path : betas) b.emplace_back(path, -cls.lattice());
    const NormalFrame c(cls);

    std::vector<bool> used(b.size(), false);
    std::vector<BandPair> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::optional<std::size_t> best;
        std::optional<ExtendedCurve> best_curve;
        Lattice best_shift;
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (used[k]) continue;
            const Lattice w = pair_loop(a[i], b[k], cls, eps);
            ExtendedCurve candidate = b[k].translated(w);
            // Left of a beta-oriented curve is the side facing alpha.
            if (!best || to_left(candidate, *best_curve, eps)) {
                best = k;
                best_shift = w;
                best_curve.emplace(std::move(candidate));
            }
        }
        used[*best] = true;
        double lo = INFINITY, hi = -INFINITY;
        normal_extent(a[i].base(), c, lo, hi);
        normal_extent(best_curve->base(), c, lo, hi);
        out.push_back(BandPair{i, *best, best_shift, a[i], std::move(*best_curve), lo, hi});
    }
    return out;
}

WindingOutcome pair_band_winding(Point2 x, const BandPair& pair, HomologyClass cls, double eps, bool verify_shell) {
    const NormalFrame c(cls);
    const double length = std::hypot(static_cast<double>(cls.p), static_cast<double>(cls.q));
    const double cx = c(x);
    const double margin = eps * length + 1e-12 * (1.0 + std::abs(cx));
    // Band m covers normal coordinates [c_lo + m, c_hi + m].
    const long m0 = ceil_to_long(cx - pair.c_hi - margin);
    const long m1 = floor_to_long(cx - pair.c_lo + margin);

    auto band = [&](long m) {
        const Point2 y = x - c.shift(m).vec();
        WindingOutcome a = extended_winding(y, pair.alpha, eps);
        if (a.on_boundary()) return a;
        const WindingOutcome b = extended_winding(y, pair.beta, eps);
        if (b.on_boundary()) return b;
        a.value += b.value;
        return a;
    };

    double total = 0.0;
    for (long m = m0; m <= m1; ++m) {
        const WindingOutcome w = band(m);
        if (w.on_boundary()) return w;
        total += w.value;
    }
    if (verify_shell) {
        for (long m : {m0 - 1, m1 + 1}) {
            const WindingOutcome w = band(m);
            if (w.on_boundary()) return w;
            if (std::abs(w.value) > kShellTolerance) {
                throw InternalError("band outside the normal window contributed " + std::to_string(w.value));
            }
        }
    }
    return WindingOutcome::of(total);
}

LoopSet::LoopSet(std::vector<BezierPath> loops, DomainTopology topology, double eps,
                 const std::vector<std::optional<HomologyClass>>& declared)
    : loops_(std::move(loops)), topology_(topology) {
    for (std::size_t i = 0; i < loops_.size(); ++i) {
        const HomologyReport h = homology_class(loops_[i], topology_);
        report_.loops.push_back({h.cls, h.closure_defect, Partition::C});
        if (h.warning) {
            std::ostringstream msg;
            msg << "loop " << i << ": closure defect " << h.closure_defect << " exceeds 0.25";
            report_.warnings.push_back(msg.str());
        }
        if (i < declared.size() && declared[i] && !(*declared[i] == h.cls)) {
            report_.violations.push_back({Violation::Kind::HomologyMismatch,
                                          "loop " + std::to_string(i) + " declares " + to_string(*declared[i]) +
                                              " but its endpoints give " + to_string(h.cls)});
        }
        lifted_.emplace_back(loops_[i]);
    }

    switch (topology_.kind) {
        case TopologyKind::NonPeriodic:
            contractible_ = lifted_;
            report_.count_c = loops_.size();
            break;
        case TopologyKind::UniPeriodic: analyze_uni(); break;
        case TopologyKind::BiPeriodic: analyze_bi(eps); break;
    }

    std::vector<std::vector<Point2>> samples;
    for (const auto& loop : loops_) samples.push_back(sample_polyline(loop, 16));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            if (polylines_intersect(samples[i], samples[j])) {
                report_.warnings.push_back("loops " + std::to_string(i) + " and " + std::to_string(j) +
                                           " appear to intersect");
            }
        }
    }
}

void LoopSet::analyze_uni() {
    for (std::size_t i = 0; i < loops_.size(); ++i) {
        LoopInfo& info = report_.loops[i];
        const long p = info.cls.p;
        if (p == 0) {
            ++report_.count_c;
            contractible_.push_back(lifted_[i]);
            continue;
        }
        if (std::abs(p) >= 2) {
            report_.violations.push_back({Violation::Kind::UniperiodicMagnitude,
                                          "loop " + std::to_string(i) + " wraps " + std::to_string(p) +
                                              " times around the periodic axis"});
            continue;
        }
        info.partition = p > 0 ? Partition::A : Partition::B;
        ++(p > 0 ? report_.count_a : report_.count_b);
        extended_.emplace_back(loops_[i], Lattice{p, 0});
        canonical_ = {1, 0};
    }
    if (report_.count_a != report_.count_b) {
        report_.warnings.push_back("uni-periodic set has " + std::to_string(report_.count_a) + " rightward and " +
                                   std::to_string(report_.count_b) + " leftward loops");
    }
}

void LoopSet::analyze_bi(double eps) {
    std::optional<HomologyClass> reference;
    for (std::size_t i = 0; i < loops_.size(); ++i) {
        const HomologyClass cls = report_.loops[i].cls;
        if (cls.contractible()) continue;
        if (std::gcd(cls.p, cls.q) != 1) {
            report_.violations.push_back({Violation::Kind::NonCoprime, "loop " + std::to_string(i) + " has class " +
                                                                           to_string(cls) + " with gcd " +
                                                                           std::to_string(std::gcd(cls.p, cls.q))});
        }
        if (!reference) {
            reference = cls;
        } else if (!(cls == *reference) && !(cls == -*reference)) {
            report_.violations.push_back({Violation::Kind::MixedClasses, "loop " + std::to_string(i) + " has class " +
                                                                             to_string(cls) + ", expected ±" +
                                                                             to_string(*reference)});
        }
    }

    rotated_ = reference && reference->p == 0;
    auto canonical_class_of = [&](HomologyClass cls) { return rotated_ ? HomologyClass{cls.q, -cls.p} : cls; };
    if (reference) {
        canonical_ = canonical_class_of(*reference);
        if (canonical_.p < 0) canonical_ = -canonical_;
    }

    std::vector<BezierPath> alphas, betas;
    std::vector<std::size_t> alpha_ids, beta_ids;
    for (std::size_t i = 0; i < loops_.size(); ++i) {
        LoopInfo& info = report_.loops[i];
        const HomologyClass cls = canonical_class_of(info.cls);
        BezierPath path = rotated_ ? rotate_path(loops_[i]) : loops_[i];
        if (cls.contractible()) {
            ++report_.count_c;
            contractible_.emplace_back(std::move(path));
        } else if (cls == canonical_) {
            info.partition = Partition::A;
            ++report_.count_a;
            alphas.push_back(std::move(path));
            alpha_ids.push_back(i);
        } else if (cls == -canonical_) {
            info.partition = Partition::B;
            ++report_.count_b;
            betas.push_back(std::move(path));
            beta_ids.push_back(i);
        }
    }
    if (report_.count_a != report_.count_b) {
        report_.violations.push_back({Violation::Kind::Cardinality,
                                      std::to_string(report_.count_a) + " loops of class " + to_string(canonical_) +
                                          " but " + std::to_string(report_.count_b) + " of the opposite class"});
    }
    if (!report_.valid() || !reference) return;

    try {
        pairs_ = pair_loops(alphas, betas, canonical_, eps);
    } catch (const PairingError& e) {
        report_.violations.push_back({Violation::Kind::Pairing, e.what()});
        return;
    }
    for (auto& pair : pairs_) {
        pair.alpha_index = alpha_ids[pair.alpha_index];
        pair.beta_index = beta_ids[pair.beta_index];
    }
}

Point2 LoopSet::to_canonical(Point2 p) const noexcept { return rotated_ ? rotate(p) : p; }

Lattice LoopSet::to_original(Lattice w) const noexcept { return rotated_ ? Lattice{-w.j, w.i} : w; }

WindingOutcome nonperiodic_winding(Point2 p, const LoopSet& set, double eps) {
    WindingOutcome out = require_valid(set);
    for (const auto& loop : set.contractible_loops()) {
        const WindingOutcome w = path_winding(p, loop.path, loop.hierarchy, eps);
        if (w.on_boundary()) return w;
        out.value += w.value;
    }
    return out;
}

WindingOutcome uni_periodic_winding(Point2 p, const LoopSet& set, double eps) {
    WindingOutcome out = require_valid(set);
    for (const auto& loop : set.contractible_loops()) {
        const WindingOutcome w = uni_contractible_winding(p, loop, eps);
        if (w.on_boundary()) return w;
        out.value += w.value;
    }
    for (const auto& curve : set.extended_curves()) {
        const WindingOutcome w = extended_winding(p, curve, eps);
        if (w.on_boundary()) return w;
        out.value += w.value;
    }
    return out;
}

WindingOutcome bi_periodic_winding(Point2 p, const LoopSet& set, double eps) {
    WindingOutcome out = require_valid(set);
    const Point2 q = set.to_canonical(p);
    for (const auto& pair : set.pairs()) {
        const WindingOutcome w = pair_band_winding(q, pair, set.canonical_class(), eps);
        if (w.on_boundary()) return w;
        out.value += w.value;
    }
    for (const auto& loop : set.contractible_loops()) {
        const WindingOutcome w = bi_contractible_winding(q, loop, eps);
        if (w.on_boundary()) return w;
        out.value += w.value;
    }
    return out;
}

WindingOutcome loop_set_winding(Point2 p, const LoopSet& set, double eps) {
    switch (set.topology().kind) {
        case TopologyKind::NonPeriodic: return nonperiodic_winding(p, set, eps);
        case TopologyKind::UniPeriodic: return uni_periodic_winding(p, set, eps);
        case TopologyKind::BiPeriodic: return bi_periodic_winding(p, set, eps);
    }
    throw InternalError("unknown topology");
}

}  // namespace covwind
