#include "covwind/bench_suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "covwind/containment.hpp"
#include "covwind/counters.hpp"
#include "covwind/errors.hpp"
#include "covwind/synthetic.hpp"
#include "covwind/winding.hpp"

namespace covwind {

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double x) {
    std::ostringstream ss;
    ss << x;
    return ss.str();
}

// Runs `queries` once for counters and `reps` more times for timing.
SuiteRow measure(Params params, std::size_t n, const SuiteOptions& opt,
                 const std::function<bool(std::size_t)>& query) {
    SuiteRow row;
    row.params = std::move(params);
    row.queries = n;
    reset_thread_counters();
    std::uint64_t deepest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        thread_counters().max_depth = 0;
        row.on_boundary += query(i) ? 1 : 0;
        deepest = std::max(deepest, thread_counters().max_depth);
    }
    const OpCounters c = take_thread_counters();
    const double q = n > 0 ? static_cast<double>(n) : 1.0;
    row.eval_count = static_cast<double>(c.evaluations) / q;
    row.arithmetic = static_cast<double>(c.arithmetic) / q;
    row.ellipse_tests = static_cast<double>(c.ellipse_tests) / q;
    row.hull_tests = static_cast<double>(c.hull_tests) / q;
    row.subdivisions = static_cast<double>(c.subdivisions) / q;
    row.max_depth = static_cast<double>(deepest);

    row.median_ns = std::numeric_limits<double>::quiet_NaN();
    if (opt.timing) {
        std::vector<double> times;
        for (int r = 0; r < std::max(5, opt.repetitions); ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            std::size_t sink = 0;
            for (std::size_t i = 0; i < n; ++i) sink += query(i) ? 1 : 0;
            const auto t1 = std::chrono::steady_clock::now();
            if (sink == std::numeric_limits<std::size_t>::max()) times.push_back(0);  // keeps the loop alive
            times.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / q);
        }
        std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
        row.median_ns = times[times.size() / 2];
        reset_thread_counters();
    }
    return row;
}

RationalBezierSegment random_cubic(SplitMix64& rng) {
    std::vector<Point2> pts;
    for (int k = 0; k < 4; ++k) pts.push_back({rng.uniform(), rng.uniform()});
    return RationalBezierSegment(std::move(pts));
}

std::vector<Point2> uniform_grid(int n) {
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(n * n));
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) pts.push_back({(x + 0.5) / n, (y + 0.5) / n});
    return pts;
}

}  // namespace

const std::string* SuiteRow::param(const std::string& key) const {
    for (const auto& [k, v] : params)
        if (k == key) return &v;
    return nullptr;
}

const SuiteRow* SuiteReport::find(const std::vector<std::pair<std::string, std::string>>& match) const {
    for (const SuiteRow& row : configs) {
        const bool ok = std::all_of(match.begin(), match.end(), [&](const auto& kv) {
            const std::string* v = row.param(kv.first);
            return v && *v == kv.second;
        });
        if (ok) return &row;
    }
    return nullptr;
}

SuiteReport run_degree_suite(const SuiteOptions& opt) {
    constexpr double kEps = 1e-6;
    SplitMix64 rng(opt.seed);
    std::vector<RationalBezierSegment> cubics;
    std::vector<std::vector<Point2>> points;
    for (int c = 0; c < 20; ++c) {
        cubics.push_back(random_cubic(rng));
        std::vector<Point2> pts;
        // Points on the curve force every recursion down to eps.
        for (int k = 0; k < 25; ++k) pts.push_back(evaluate(cubics.back(), rng.uniform(0.02, 0.98)));
        points.push_back(std::move(pts));
    }
    const std::size_t per = points.front().size();
    const std::size_t n = cubics.size() * per;

    SuiteReport report{"degree", opt.seed, {}};
    for (int degree : {3, 6, 12, 24, 48}) {
        std::vector<RationalBezierSegment> curves;
        std::vector<double> bounds;
        for (const auto& c : cubics) {
            curves.push_back(elevate_degree(c, degree));
            bounds.push_back(derivative_bound(curves.back()));
        }
        const std::string deg = std::to_string(degree);
        report.configs.push_back(measure({{"method", "ellipse"}, {"degree", deg}}, n, opt, [&](std::size_t i) {
            const std::size_t c = i / per;
            return compute_winding(points[c][i % per], CurveSpan(curves[c]), bounds[c], kEps).on_boundary();
        }));
        report.configs.push_back(measure({{"method", "baseline"}, {"degree", deg}}, n, opt, [&](std::size_t i) {
            const std::size_t c = i / per;
            return control_polygon_winding_baseline(points[c][i % per], CurveSpan(curves[c]), kEps).on_boundary();
        }));
    }
    return report;
}

SuiteReport run_tolerance_suite(const SuiteOptions& opt) {
    SplitMix64 rng(opt.seed);
    std::vector<BezierPath> loops;
    std::vector<PathHierarchy> trees;
    std::vector<std::pair<std::size_t, Point2>> boundary;
    for (int l = 0; l < 20; ++l) {
        loops.push_back(random_cubic_loop(rng, 3));
        trees.push_back(build_hierarchy(loops.back()));
        for (int k = 0; k < 50; ++k) boundary.push_back({loops.size() - 1, loops.back().at(rng.uniform())});
    }
    const std::vector<Point2> grid = uniform_grid(16);

    SuiteReport report{"tolerance", opt.seed, {}};
    for (double eps : {1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
        const std::string e = fmt(eps);
        report.configs.push_back(
            measure({{"method", "ellipse"}, {"samples", "boundary"}, {"eps", e}}, boundary.size(), opt, [&](std::size_t i) {
                const auto& [l, p] = boundary[i];
                return path_winding(p, loops[l], trees[l], eps).on_boundary();
            }));
        report.configs.push_back(measure({{"method", "ellipse"}, {"samples", "uniform"}, {"eps", e}},
                                         grid.size() * loops.size(), opt, [&](std::size_t i) {
                                             const std::size_t l = i / grid.size();
                                             return path_winding(grid[i % grid.size()], loops[l], trees[l], eps).on_boundary();
                                         }));
        report.configs.push_back(
            measure({{"method", "baseline"}, {"samples", "boundary"}, {"eps", e}}, boundary.size(), opt, [&](std::size_t i) {
                const auto& [l, p] = boundary[i];
                return path_winding_baseline(p, loops[l], eps).on_boundary();
            }));
        report.configs.push_back(measure({{"method", "baseline"}, {"samples", "uniform"}, {"eps", e}},
                                         grid.size() * loops.size(), opt, [&](std::size_t i) {
                                             const std::size_t l = i / grid.size();
                                             return path_winding_baseline(grid[i % grid.size()], loops[l], eps).on_boundary();
                                         }));
    }
    return report;
}

SuiteReport run_dataset_suite(const SuiteOptions& opt) {
    constexpr double kEps = 1e-6;
    SplitMix64 rng(opt.seed);
    struct Planar {
        std::string name;
        std::vector<BezierPath> loops;
    };
    std::vector<Planar> planar;
    {
        Planar cubic{"random_cubic_loops", {}};
        for (int k = 0; k < 5; ++k) cubic.loops.push_back(random_cubic_loop(rng, 4));
        planar.push_back(std::move(cubic));
        Planar stars{"stars", {}};
        for (int k = 0; k < 4; ++k) {
            stars.loops.push_back(star_loop(rng, {0.25 + 0.5 * (k % 2), 0.25 + 0.5 * (k / 2)}, 0.2, 12));
        }
        planar.push_back(std::move(stars));
        Planar noisy{"noisy_open_star", {perturb(star_loop(rng, {0.5, 0.5}, 0.35, 16), rng, 1e-3)}};
        planar.push_back(std::move(noisy));
    }
    const std::vector<Point2> grid = uniform_grid(64);

    SuiteReport report{"dataset", opt.seed, {}};
    for (const Planar& d : planar) {
        const TrimmedRegion region(d.loops, DomainTopology::none(), kEps);
        report.configs.push_back(measure({{"method", "ellipse"}, {"dataset", d.name}}, grid.size(), opt,
                                         [&](std::size_t i) { return region.winding(grid[i]).on_boundary(); }));
        report.configs.push_back(measure({{"method", "baseline"}, {"dataset", d.name}}, grid.size(), opt, [&](std::size_t i) {
            bool hit = false;
            for (const BezierPath& loop : d.loops) hit = path_winding_baseline(grid[i], loop, kEps).on_boundary() || hit;
            return hit;
        }));
    }
    for (const PeriodicDataset& d : standard_periodic_datasets(opt.seed)) {
        const TrimmedRegion region(d.loops, d.topology, kEps);
        report.configs.push_back(measure({{"method", "ellipse"}, {"dataset", d.name}}, grid.size(), opt,
                                         [&](std::size_t i) { return region.winding(grid[i]).on_boundary(); }));
    }
    return report;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
    if (name == "degree") return run_degree_suite(options);
    if (name == "tolerance") return run_tolerance_suite(options);
    if (name == "dataset") return run_dataset_suite(options);
    throw DomainError("unknown bench suite: " + name);
}

std::string to_json(const SuiteReport& report, int indent) {
    using ojson = nlohmann::ordered_json;
    ojson j;
    j["suite"] = report.suite;
    j["seed"] = report.seed;
    ojson configs = ojson::array();
    for (const SuiteRow& r : report.configs) {
        ojson params = ojson::object();
        for (const auto& [k, v] : r.params) params[k] = v;
        ojson c;
        c["params"] = std::move(params);
        c["queries"] = r.queries;
        c["median_ns"] = std::isnan(r.median_ns) ? ojson(nullptr) : ojson(r.median_ns);
        c["eval_count"] = r.eval_count;
        c["arithmetic"] = r.arithmetic;
        c["ellipse_tests"] = r.ellipse_tests;
        c["hull_tests"] = r.hull_tests;
        c["subdivisions"] = r.subdivisions;
        c["max_depth"] = r.max_depth;
        c["on_boundary"] = r.on_boundary;
        configs.push_back(std::move(c));
    }
    j["configs"] = std::move(configs);
    return j.dump(indent) + "\n";
}

}  // namespace covwind
