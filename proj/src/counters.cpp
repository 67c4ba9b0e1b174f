#include "covwind/counters.hpp"

#include <algorithm>

namespace covwind {

OpCounters& OpCounters::operator+=(const OpCounters& other) noexcept {
    evaluations += other.evaluations;
    arithmetic += other.arithmetic;
    ellipse_tests += other.ellipse_tests;
    hull_tests += other.hull_tests;
    subdivisions += other.subdivisions;
    max_depth = std::max(max_depth, other.max_depth);
    return *this;
}

OpCounters& thread_counters() noexcept {
    thread_local OpCounters counters;
    return counters;
}

void reset_thread_counters() noexcept { thread_counters() = OpCounters{}; }

OpCounters take_thread_counters() noexcept {
    OpCounters out = thread_counters();
    reset_thread_counters();
    return out;
}

}  // namespace covwind
