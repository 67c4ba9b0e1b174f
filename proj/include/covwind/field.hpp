#pragma once

#include <cstdint>
#include <vector>

#include "covwind/containment.hpp"

namespace covwind {

enum class FieldMode { Winding, Verdict };

// Row-major samples at pixel centers of [0, 1]^2. Row 0 is the top row
// (v close to 1). In Verdict mode values hold the Verdict codes 0/1/2; in
// Winding mode they hold winding numbers and on-boundary pixels are flagged.
struct FieldRaster {
    int width = 0;
    int height = 0;
    FieldMode mode = FieldMode::Winding;
    std::vector<double> values;
    std::vector<std::uint8_t> on_boundary;

    Point2 sample(int column, int row) const noexcept {
        return {(column + 0.5) / width, 1.0 - (row + 0.5) / height};
    }
};

// OpenMP rows; identical output to the serial reference.
FieldRaster rasterize(const TrimmedRegion& region, int width, int height, FieldMode mode);
FieldRaster rasterize_serial(const TrimmedRegion& region, int width, int height, FieldMode mode);

}  // namespace covwind
