#pragma once

#include "bhct/geometry.hpp"
#include "bhct/sinogram.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace bhct {

// n x n pixel centers spanning [-fov_radius, fov_radius]^2. Row index follows y, column x.
struct ImageGrid {
    std::size_t n = 0;
    double fov_radius = 1.0;
    std::vector<double> values;
    std::vector<std::uint8_t> coverage; // 1 where every angle hit the offset grid

    ImageGrid() = default;
    ImageGrid(std::size_t n, double fov_radius);

    double spacing() const { return 2.0 * fov_radius / double(n - 1); }
    double coord(std::size_t i) const;
    Vec2 pixel_center(std::size_t row, std::size_t col) const { return {coord(col), coord(row)}; }
    double& at(std::size_t row, std::size_t col) { return values[row * n + col]; }
    double at(std::size_t row, std::size_t col) const { return values[row * n + col]; }
};

// Fourier transform of the mollifier (15/(16 eps))(1 - (t/eps)^2)^2 at s = sigma * eps.
double mollifier_transform(double s);
double mollifier(double t, double epsilon);

// Mollified ramp filter on a periodic offset grid of length `period` (zero-padded rows).
struct FilterSpec {
    double epsilon = 0.0;
    SinogramGrid grid;
    std::size_t period = 0;
    std::vector<double> taps;     // k_n for n = 0..period-1, circular
    std::vector<double> response; // H_q for q = 0..period/2 (already includes delta_p)

    double tap(std::ptrdiff_t n) const;
    double dc_sum() const;
    double max_abs_tap() const;
};

FilterSpec build_filter(const SinogramGrid& grid, double epsilon, std::size_t padding = 8);

enum class FilterMethod { FFT, Direct };

Sinogram filter_sinogram(const Sinogram& sino, const FilterSpec& filter,
                         FilterMethod method = FilterMethod::FFT);

// Delta_alpha * sum_k q_k(alpha_k . x), linear interpolation in p.
ImageGrid backproject(const Sinogram& filtered, std::size_t image_n);

ImageGrid fbp(const Sinogram& sino, const FilterSpec& filter, std::size_t image_n);

double sample_image(const ImageGrid& image, Vec2 point);

// Mean over pixel centers at distance <= radius - erosion from the disk center.
double disk_interior_mean(const ImageGrid& image, const Disk& disk, double erosion);

// 8-bit display level for window level `wl` and width `ww`.
std::uint8_t display_level(double value, double wl, double ww);

} // namespace bhct
