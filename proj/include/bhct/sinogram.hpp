#pragma once

#include "bhct/geometry.hpp"
#include "bhct/spectral.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bhct {

// alpha_k = k pi / n_alpha, p_j spans [-fov_radius, fov_radius] with both ends exact.
struct SinogramGrid {
    std::size_t n_alpha = 1800;
    std::size_t n_p = 1501;
    double fov_radius = 6.0;

    void validate() const;
    double delta_alpha() const;
    double delta_p() const;
    double alpha(std::size_t k) const;
    double p(std::size_t j) const;
    std::size_t size() const { return n_alpha * n_p; }

    bool operator==(const SinogramGrid&) const = default;
};

struct Sinogram {
    SinogramGrid grid;
    std::vector<double> values; // row-major, one row per angle

    Sinogram() = default;
    explicit Sinogram(const SinogramGrid& g);

    double& at(std::size_t k, std::size_t j) { return values[k * grid.n_p + j]; }
    double at(std::size_t k, std::size_t j) const { return values[k * grid.n_p + j]; }
    std::span<const double> row(std::size_t k) const {
        return {values.data() + k * grid.n_p, grid.n_p};
    }
    std::span<double> row(std::size_t k) { return {values.data() + k * grid.n_p, grid.n_p}; }
};

// Exact line integral of one basis density along a line.
double basis_line_integral(const Phantom& phantom, const LineCoord& line, Basis which);
// After-logs value of a single line.
double polychromatic_value(const Phantom& phantom, const SpectralModel& model,
                           const LineCoord& line);

Sinogram forward_linear(const Phantom& phantom, const SinogramGrid& grid, Basis which);
Sinogram forward_polychromatic(const Phantom& phantom, const SpectralModel& model,
                               const SinogramGrid& grid);

// Midpoint-rule integral of the basis density along the line, clipped to the FOV.
double line_integral_oracle(const Phantom& phantom, const LineCoord& line, Basis which,
                            double step);

Sinogram water_precorrect(const Sinogram& sino, const WaterModel& water);

} // namespace bhct
