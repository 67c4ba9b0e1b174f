#pragma once

#include <cstdint>

namespace covwind {

// Per-thread instrumentation used by the benchmark suites and the
// complexity tests. Counting is always on; each field is a plain add.
struct OpCounters {
    std::uint64_t evaluations = 0;    // curve point evaluations
    std::uint64_t arithmetic = 0;     // floating-point ops spent in bounds and evaluation
    std::uint64_t ellipse_tests = 0;  // point-in-ellipse tests
    std::uint64_t hull_tests = 0;     // point-in-control-hull tests (baseline)
    std::uint64_t subdivisions = 0;   // bisections performed by either recursion
    std::uint64_t max_depth = 0;      // deepest recursion level reached (root = 0)

    OpCounters& operator+=(const OpCounters& other) noexcept;
};

// Counters of the calling thread.
OpCounters& thread_counters() noexcept;

void reset_thread_counters() noexcept;

// Returns the calling thread's counters and resets them.
OpCounters take_thread_counters() noexcept;

}  // namespace covwind
