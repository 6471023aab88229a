#include "bhct/sinogram.hpp"

#include "bhct/error.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace bhct {

void SinogramGrid::validate() const {
    if (n_alpha < 1 || n_p < 2 || !(fov_radius > 0.0) || !std::isfinite(fov_radius))
        fail_validation("grid.invalid", "sinogram grid needs n_alpha >= 1, n_p >= 2, fov_radius > 0");
}

double SinogramGrid::delta_alpha() const { return std::numbers::pi / double(n_alpha); }

double SinogramGrid::delta_p() const { return 2.0 * fov_radius / double(n_p - 1); }

double SinogramGrid::alpha(std::size_t k) const { return delta_alpha() * double(k); }

double SinogramGrid::p(std::size_t j) const {
    // Symmetric form: p_0 = -R and p_{n-1} = R exactly, p_{n-1-j} = -p_j.
    const double m = double(n_p - 1);
    return fov_radius * (2.0 * double(j) - m) / m;
}

Sinogram::Sinogram(const SinogramGrid& g) : grid(g), values(g.size(), 0.0) { g.validate(); }

double basis_line_integral(const Phantom& phantom, const LineCoord& line, Basis which) {
    double t = 0.0;
    for (const Disk& d : phantom.disks()) {
        const double rho = d.density(which);
        if (rho != 0.0) t += rho * chord_length(d, line);
    }
    return t;
}

double polychromatic_value(const Phantom& phantom, const SpectralModel& model,
                           const LineCoord& line) {
    return after_logs(model, basis_line_integral(phantom, line, Basis::One),
                      basis_line_integral(phantom, line, Basis::Two));
}

Sinogram forward_linear(const Phantom& phantom, const SinogramGrid& grid, Basis which) {
    Sinogram s(grid);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(grid.n_alpha); ++k) {
        const double a = grid.alpha(std::size_t(k));
        for (std::size_t j = 0; j < grid.n_p; ++j)
            s.at(std::size_t(k), j) = basis_line_integral(phantom, {a, grid.p(j)}, which);
    }
    return s;
}

Sinogram forward_polychromatic(const Phantom& phantom, const SpectralModel& model,
                               const SinogramGrid& grid) {
    Sinogram s(grid);
    std::optional<Error> failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(grid.n_alpha); ++k) {
        const double a = grid.alpha(std::size_t(k));
        for (std::size_t j = 0; j < grid.n_p; ++j) {
            try {
                s.at(std::size_t(k), j) = polychromatic_value(phantom, model, {a, grid.p(j)});
            } catch (const Error& e) {
                std::ostringstream msg;
                msg << e.what() << " (angle index " << k << ", offset index " << j << ")";
#pragma omp critical(bhct_forward_failure)
                if (!failure) failure.emplace(e.kind(), e.code(), msg.str());
                break;
            }
        }
    }
    if (failure) throw *failure;
    return s;
}

double line_integral_oracle(const Phantom& phantom, const LineCoord& line, Basis which,
                            double step) {
    if (!(step > 0.0)) fail_validation("oracle.step", "integration step must be positive");
    const double r = phantom.fov_radius();
    if (std::abs(line.p) >= r) return 0.0;
    const double half = std::sqrt((r - line.p) * (r + line.p));
    const std::size_t n = std::size_t(std::ceil(2.0 * half / step));
    const double h = 2.0 * half / double(n);
    const Vec2 base = line.p * line.normal();
    const Vec2 dir = line.perp();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 x = base + (-half + (double(i) + 0.5) * h) * dir;
        for (const Disk& d : phantom.disks()) {
            const Vec2 rel = x - d.center;
            if (dot(rel, rel) < d.radius * d.radius) sum += d.density(which);
        }
    }
    return sum * h;
}

Sinogram water_precorrect(const Sinogram& sino, const WaterModel& water) {
    Sinogram out(sino.grid);
    std::optional<Error> failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(sino.grid.n_alpha); ++k) {
        for (std::size_t j = 0; j < sino.grid.n_p; ++j) {
            try {
                out.at(std::size_t(k), j) = water_invert(water, sino.at(std::size_t(k), j));
            } catch (const Error& e) {
                std::ostringstream msg;
                msg << e.what() << " (angle index " << k << ", offset index " << j << ")";
#pragma omp critical(bhct_water_failure)
                if (!failure) failure.emplace(e.kind(), e.code(), msg.str());
                break;
            }
        }
    }
    if (failure) throw *failure;
    return out;
}

} // namespace bhct
