#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace covwind {

// One measured configuration. Counter fields are means per query; they are
// deterministic for a given seed. median_ns is the median over repetitions
// of the per-query wall time, or NaN when timing is disabled.
struct SuiteRow {
    std::vector<std::pair<std::string, std::string>> params;
    std::size_t queries = 0;
    double median_ns = 0.0;
    double eval_count = 0.0;
    double arithmetic = 0.0;
    double ellipse_tests = 0.0;
    double hull_tests = 0.0;
    double subdivisions = 0.0;
    double max_depth = 0.0;  // maximum over queries
    std::size_t on_boundary = 0;

    const std::string* param(const std::string& key) const;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<SuiteRow> configs;

    // First row whose params contain every given key/value.
    const SuiteRow* find(const std::vector<std::pair<std::string, std::string>>& match) const;
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    int repetitions = 5;  // clamped to at least 5
    bool timing = true;
};

// Degrees 3..48 of the same cubics (by elevation), queried at points on the
// curve, for the ellipse recursion and the control-polygon baseline.
SuiteReport run_degree_suite(const SuiteOptions& options);

// eps 1e-4..1e-8 on points sampled on closed loops ("boundary") and on a
// uniform grid ("uniform").
SuiteReport run_tolerance_suite(const SuiteOptions& options);

// Uniform-grid classification over the synthetic planar and periodic sets.
SuiteReport run_dataset_suite(const SuiteOptions& options);

SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

// {suite, seed, configs: [{params, median_ns, eval_count, subdivisions, ...}]}
std::string to_json(const SuiteReport& report, int indent = 2);

}  // namespace covwind
