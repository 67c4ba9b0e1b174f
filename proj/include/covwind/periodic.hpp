#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covwind/geometry.hpp"
#include "covwind/winding.hpp"

namespace covwind {

enum class TopologyKind { NonPeriodic, UniPeriodic, BiPeriodic };

// Periodicity of the parameter domain. A uni-periodic domain repeats along
// u; every period is 1 after normalization.
struct DomainTopology {
    TopologyKind kind = TopologyKind::NonPeriodic;

    static constexpr DomainTopology none() { return {TopologyKind::NonPeriodic}; }
    static constexpr DomainTopology uni() { return {TopologyKind::UniPeriodic}; }
    static constexpr DomainTopology bi() { return {TopologyKind::BiPeriodic}; }

    constexpr bool periodic_u() const noexcept { return kind != TopologyKind::NonPeriodic; }
    constexpr bool periodic_v() const noexcept { return kind == TopologyKind::BiPeriodic; }
    friend constexpr bool operator==(DomainTopology, DomainTopology) = default;
};

// Integer translation of the covering space (a deck transformation).
struct Lattice {
    long i = 0;
    long j = 0;

    constexpr Point2 vec() const noexcept { return {static_cast<double>(i), static_cast<double>(j)}; }
    friend constexpr bool operator==(Lattice, Lattice) = default;
    friend constexpr Lattice operator-(Lattice a) noexcept { return {-a.i, -a.j}; }
    friend constexpr Lattice operator+(Lattice a, Lattice b) noexcept { return {a.i + b.i, a.j + b.j}; }
    friend constexpr Lattice operator*(long s, Lattice a) noexcept { return {s * a.i, s * a.j}; }
};

// Homology coefficients (p, q): lattice displacement of one traversal.
struct HomologyClass {
    long p = 0;
    long q = 0;

    constexpr bool contractible() const noexcept { return p == 0 && q == 0; }
    constexpr Lattice lattice() const noexcept { return {p, q}; }
    friend constexpr bool operator==(HomologyClass, HomologyClass) = default;
    friend constexpr HomologyClass operator-(HomologyClass c) noexcept { return {-c.p, -c.q}; }
};

std::string to_string(HomologyClass cls);

struct HomologyReport {
    HomologyClass cls;
    double closure_defect = 0.0;  // |end - start - (p, q)|
    bool warning = false;         // defect above 0.25 lattice units
};

HomologyReport homology_class(const BezierPath& loop, DomainTopology topology);

// A loop in covering coordinates with its hierarchy and control-point box.
struct LiftedLoop {
    explicit LiftedLoop(BezierPath p);

    BezierPath path;
    PathHierarchy hierarchy;
    Box box;
};

// Winding number of the infinite oriented line through a and b: +1/2 on the
// left, -1/2 on the right, on-boundary within eps.
WindingOutcome line_winding(Point2 p, Point2 a, Point2 b, double eps);

// A curve with gamma(t + 1) = gamma(t) + extension; `base` is one period.
class ExtendedCurve {
public:
    ExtendedCurve(BezierPath base, Lattice extension);

    const BezierPath& base() const noexcept { return base_; }
    const PathHierarchy& hierarchy() const noexcept { return hierarchy_; }
    Lattice extension() const noexcept { return extension_; }
    Point2 start() const { return base_.start(); }
    Box control_box() const noexcept { return box_; }

    // Coordinate index (0 = u, 1 = v) of the larger extension component and
    // the control-point extent of the base along it.
    int axis() const noexcept { return axis_; }
    double extent_lo() const noexcept { return lo_; }
    double extent_hi() const noexcept { return hi_; }

    ExtendedCurve translated(Lattice offset) const;

private:
    BezierPath base_;
    PathHierarchy hierarchy_;
    Lattice extension_;
    Box box_;
    int axis_ = 0;
    double lo_ = 0.0;
    double hi_ = 0.0;
};

// Winding number of the whole periodically extended curve. Copies whose
// slab along the dominant axis misses p are replaced by their chords, which
// telescope into two rays along the line through the copy starts.
WindingOutcome extended_winding(Point2 p, const ExtendedCurve& curve, double eps);

// Sum over translates loop + k e1 whose control box reaches p.
WindingOutcome uni_contractible_winding(Point2 p, const LiftedLoop& loop, double eps);

// Sum over translates loop + (i, j) whose control box reaches p.
WindingOutcome bi_contractible_winding(Point2 p, const LiftedLoop& loop, double eps);

// True when g1 lies on the left of g2. Probes g1 at base parameters
// 0.5, 0.25, 0.75, ... until a probe is off g2; throws PairingError if all
// eight probes land on the boundary.
bool to_left(const ExtendedCurve& g1, const ExtendedCurve& g2, double eps = kDefaultEps);

// Lattice vector v such that beta + v is the nearest periodically extended
// copy of beta on the left of alpha. Both curves are in a frame where
// cls.p > 0; alpha has class cls and beta class -cls.
Lattice pair_loop(const ExtendedCurve& alpha, const ExtendedCurve& beta, HomologyClass cls,
                  double eps = kDefaultEps);
Lattice pair_loop(const BezierPath& alpha, const BezierPath& beta, HomologyClass cls, double eps = kDefaultEps);

// A paired (alpha, beta + shift) band. Normal coordinate c(x) = -q u + p v
// of every control point lies in [c_lo, c_hi].
struct BandPair {
    std::size_t alpha_index = 0;
    std::size_t beta_index = 0;
    Lattice shift;
    ExtendedCurve alpha;
    ExtendedCurve beta;
    double c_lo = 0.0;
    double c_hi = 0.0;
};

// Greedily pairs each alpha with the nearest-left copy of an unmatched beta.
std::vector<BandPair> pair_loops(std::span<const BezierPath> alphas, std::span<const BezierPath> betas,
                                 HomologyClass cls, double eps = kDefaultEps);

// Winding number of one band and all of its lattice translates.
WindingOutcome pair_band_winding(Point2 p, const BandPair& pair, HomologyClass cls, double eps,
                                 bool verify_shell = true);

enum class Partition { A, B, C };

struct LoopInfo {
    HomologyClass cls;
    double closure_defect = 0.0;
    Partition partition = Partition::C;
};

struct Violation {
    enum class Kind { Cardinality, NonCoprime, UniperiodicMagnitude, MixedClasses, HomologyMismatch, Pairing };
    Kind kind;
    std::string message;
};

std::string to_string(Violation::Kind kind);

struct ValidationReport {
    std::vector<LoopInfo> loops;
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    std::size_t count_c = 0;
    std::vector<Violation> violations;
    std::vector<std::string> warnings;

    bool valid() const noexcept { return violations.empty(); }
};

// Trimming loops in covering coordinates, partitioned into A/B/C and paired.
// Construction never throws on topological violations; they are collected
// in report(). Queries on an invalid set throw ValidationError.
class LoopSet {
public:
    // `declared` optionally carries a per-loop class from the input document;
    // a disagreement with the computed class is a HomologyMismatch.
    LoopSet(std::vector<BezierPath> loops, DomainTopology topology, double eps = kDefaultEps,
            const std::vector<std::optional<HomologyClass>>& declared = {});

    DomainTopology topology() const noexcept { return topology_; }
    const ValidationReport& report() const noexcept { return report_; }
    bool valid() const noexcept { return report_.valid(); }

    // Loops as given (original frame).
    std::span<const BezierPath> loops() const noexcept { return loops_; }

    // Class of the A partition in the canonical frame (p > 0), or (0, 0).
    HomologyClass canonical_class() const noexcept { return canonical_; }
    // Canonical frame rotates (u, v) -> (v, -u) when the class is (0, q).
    bool rotated() const noexcept { return rotated_; }
    Point2 to_canonical(Point2 p) const noexcept;
    Lattice to_original(Lattice w) const noexcept;

    std::span<const BandPair> pairs() const noexcept { return pairs_; }
    std::span<const ExtendedCurve> extended_curves() const noexcept { return extended_; }
    std::span<const LiftedLoop> contractible_loops() const noexcept { return contractible_; }
    std::span<const LiftedLoop> lifted_loops() const noexcept { return lifted_; }

private:
    void analyze_bi(double eps);
    void analyze_uni();

    std::vector<BezierPath> loops_;
    DomainTopology topology_;
    ValidationReport report_;
    HomologyClass canonical_{};
    bool rotated_ = false;
    std::vector<LiftedLoop> lifted_;        // original frame, every loop
    std::vector<LiftedLoop> contractible_;  // canonical frame
    std::vector<ExtendedCurve> extended_;   // uni-periodic lifts
    std::vector<BandPair> pairs_;           // bi-periodic bands, canonical frame
};

WindingOutcome nonperiodic_winding(Point2 p, const LoopSet& set, double eps);
WindingOutcome uni_periodic_winding(Point2 p, const LoopSet& set, double eps);
WindingOutcome bi_periodic_winding(Point2 p, const LoopSet& set, double eps);

// Dispatches on the set's topology; p is in covering coordinates.
WindingOutcome loop_set_winding(Point2 p, const LoopSet& set, double eps);

}  // namespace covwind
