// Serial reference vs OpenMP for batch classification and field rasterization.
// Usage: bench_kernels [grid=256] [reps=5]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "covwind/containment.hpp"
#include "covwind/field.hpp"
#include "covwind/synthetic.hpp"

using namespace covwind;

namespace {

double median_ms(int reps, const std::function<void()>& f) {
    std::vector<double> t;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        t.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(t.begin(), t.end());
    return t[t.size() / 2];
}

bool same_batch(const std::vector<BatchResult>& a, const std::vector<BatchResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].ok() != b[i].ok()) return false;
        if (!a[i].ok()) continue;
        const auto& x = *a[i].value;
        const auto& y = *b[i].value;
        if (x.verdict != y.verdict || x.winding.has_value() != y.winding.has_value()) return false;
        if (x.winding && std::memcmp(&*x.winding, &*y.winding, sizeof(double)) != 0) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const int grid = argc > 1 ? std::max(1, std::atoi(argv[1])) : 256;
    const int reps = argc > 2 ? std::max(1, std::atoi(argv[2])) : 5;

    SplitMix64 rng(42);
    struct Case {
        std::string name;
        std::vector<BezierPath> loops;
        DomainTopology topology;
    };
    std::vector<Case> cases;
    {
        std::vector<BezierPath> stars;
        for (int k = 0; k < 4; ++k) stars.push_back(star_loop(rng, {0.25 + 0.5 * (k % 2), 0.25 + 0.5 * (k / 2)}, 0.2, 12));
        cases.push_back({"stars", std::move(stars), DomainTopology::none()});
    }
    for (auto& ds : standard_periodic_datasets(42)) {
        if (ds.name == "uni_cylinder" || ds.name == "bi3x4_pairs2") {
            cases.push_back({ds.name, std::move(ds.loops), ds.topology});
        }
    }

    std::vector<Point2> pts;
    for (int y = 0; y < grid; ++y)
        for (int x = 0; x < grid; ++x) pts.push_back({(x + 0.5) / grid, (y + 0.5) / grid});

    std::printf("threads %d, grid %dx%d, median of %d\n", omp_get_max_threads(), grid, grid, reps);
    std::printf("%-14s %-10s %12s %12s %8s %s\n", "dataset", "kernel", "serial ms", "openmp ms", "speedup", "identical");
    int failures = 0;
    for (const Case& c : cases) {
        const TrimmedRegion region(c.loops, c.topology);

        std::vector<BatchResult> a, b;
        const double bs = median_ms(reps, [&] { a = classify_batch_serial(region, pts); });
        const double bp = median_ms(reps, [&] { b = classify_batch(region, pts); });
        const bool batch_ok = same_batch(a, b);
        std::printf("%-14s %-10s %12.2f %12.2f %8.2f %s\n", c.name.c_str(), "batch", bs, bp, bs / bp, batch_ok ? "yes" : "NO");

        FieldRaster fs, fp;
        const double rs = median_ms(reps, [&] { fs = rasterize_serial(region, grid, grid, FieldMode::Winding); });
        const double rp = median_ms(reps, [&] { fp = rasterize(region, grid, grid, FieldMode::Winding); });
        const bool raster_ok = fs.values.size() == fp.values.size() &&
                               std::memcmp(fs.values.data(), fp.values.data(), fs.values.size() * sizeof(double)) == 0 &&
                               fs.on_boundary == fp.on_boundary;
        std::printf("%-14s %-10s %12.2f %12.2f %8.2f %s\n", c.name.c_str(), "raster", rs, rp, rs / rp, raster_ok ? "yes" : "NO");
        failures += !batch_ok + !raster_ok;
    }
    return failures == 0 ? 0 : 1;
}
