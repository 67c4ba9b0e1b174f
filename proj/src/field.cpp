#include "covwind/field.hpp"

#include <exception>
#include <string>

#include "covwind/errors.hpp"

namespace covwind {

namespace {

FieldRaster blank(int width, int height, FieldMode mode) {
    if (width < 1 || height < 1) throw DomainError("raster dimensions must be at least 1");
    FieldRaster r;
    r.width = width;
    r.height = height;
    r.mode = mode;
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    r.values.assign(n, 0.0);
    r.on_boundary.assign(n, 0);
    return r;
}

void fill_pixel(const TrimmedRegion& region, FieldRaster& r, int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(r.width) + static_cast<std::size_t>(x);
    const Classification c = classify(region, r.sample(x, y));
    r.on_boundary[i] = c.verdict == Verdict::OnBoundary;
    if (r.mode == FieldMode::Verdict) {
        r.values[i] = static_cast<double>(static_cast<int>(c.verdict));
    } else {
        r.values[i] = c.winding.value_or(0.0);
    }
}

}  // namespace

FieldRaster rasterize(const TrimmedRegion& region, int width, int height, FieldMode mode) {
    FieldRaster r = blank(width, height, mode);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (int y = 0; y < height; ++y) {
        try {
            for (int x = 0; x < width; ++x) fill_pixel(region, r, x, y);
        } catch (...) {
#pragma omp critical(covwind_raster_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return r;
}

FieldRaster rasterize_serial(const TrimmedRegion& region, int width, int height, FieldMode mode) {
    FieldRaster r = blank(width, height, mode);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) fill_pixel(region, r, x, y);
    }
    return r;
}

}  // namespace covwind
