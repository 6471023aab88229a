#include "bhct/recon.hpp"

#include "bhct/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace bhct {

ImageGrid::ImageGrid(std::size_t n_, double fov)
    : n(n_), fov_radius(fov), values(n_ * n_, 0.0), coverage(n_ * n_, 1) {
    if (n_ < 2 || !(fov > 0.0)) fail_validation("image.invalid", "image needs n >= 2, fov_radius > 0");
}

double ImageGrid::coord(std::size_t i) const {
    const double m = double(n - 1);
    return fov_radius * (2.0 * double(i) - m) / m;
}

double mollifier_transform(double s) {
    s = std::abs(s);
    if (s < 1.5) {
        // The closed form cancels badly for small s. Taylor series from the even moments
        // 15 / ((2k+1)(2k+3)(2k+5)) of the mollifier on [-1, 1].
        const double s2 = s * s;
        double term = 1.0; // (-1)^k s^(2k) / (2k)!
        double sum = 0.0;
        for (int k = 0; k < 16; ++k) {
            sum += term * 15.0 / double((2 * k + 1) * (2 * k + 3) * (2 * k + 5));
            term *= -s2 / double((2 * k + 1) * (2 * k + 2));
        }
        return sum;
    }
    const double s2 = s * s;
    return 15.0 * ((3.0 - s2) * std::sin(s) - 3.0 * s * std::cos(s)) / (s2 * s2 * s);
}

double mollifier(double t, double epsilon) {
    const double u = t / epsilon;
    if (std::abs(u) > 1.0) return 0.0;
    const double b = 1.0 - u * u;
    return 15.0 / (16.0 * epsilon) * b * b;
}

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwDeleter {
    void operator()(double* p) const { fftw_free(p); }
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using RealBuf = std::unique_ptr<double[], FftwDeleter>;
using ComplexBuf = std::unique_ptr<fftw_complex[], FftwDeleter>;

RealBuf alloc_real(std::size_t n) { return RealBuf(fftw_alloc_real(n)); }
ComplexBuf alloc_complex(std::size_t n) { return ComplexBuf(fftw_alloc_complex(n)); }

struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    Plans(std::size_t m) {
        std::lock_guard lock(plan_mutex());
        RealBuf r = alloc_real(m);
        ComplexBuf c = alloc_complex(m / 2 + 1);
        forward = fftw_plan_dft_r2c_1d(int(m), r.get(), c.get(), FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(int(m), c.get(), r.get(), FFTW_ESTIMATE);
    }
    ~Plans() {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;
};

} // namespace

double FilterSpec::tap(std::ptrdiff_t n) const {
    const std::ptrdiff_t m = std::ptrdiff_t(period);
    return taps[std::size_t(((n % m) + m) % m)];
}

double FilterSpec::dc_sum() const {
    double s = 0.0;
    for (const double t : taps) s += t;
    return s;
}

double FilterSpec::max_abs_tap() const {
    double m = 0.0;
    for (const double t : taps) m = std::max(m, std::abs(t));
    return m;
}

FilterSpec build_filter(const SinogramGrid& grid, double epsilon, std::size_t padding) {
    grid.validate();
    const double dp = grid.delta_p();
    if (!(epsilon >= dp) || !std::isfinite(epsilon)) {
        std::ostringstream msg;
        msg << "mollifier radius " << epsilon << " is below the offset spacing " << dp;
        fail_validation("filter.resolution", msg.str());
    }
    std::size_t m = 1;
    while (m < std::max<std::size_t>(padding, 2) * grid.n_p) m <<= 1;

    FilterSpec f;
    f.epsilon = epsilon;
    f.grid = grid;
    f.period = m;
    f.response.resize(m / 2 + 1);
    // Ramp response |sigma| w^(sigma) / (2 pi), band-limited to the Nyquist frequency of the grid.
    for (std::size_t q = 0; q <= m / 2; ++q) {
        const double sigma = 2.0 * std::numbers::pi * double(q) / (double(m) * dp);
        f.response[q] = sigma * mollifier_transform(sigma * epsilon) / (2.0 * std::numbers::pi);
    }
    f.response[0] = 0.0;

    Plans plans(m);
    ComplexBuf spec = alloc_complex(m / 2 + 1);
    RealBuf out = alloc_real(m);
    for (std::size_t q = 0; q <= m / 2; ++q) {
        spec[q][0] = f.response[q] / dp;
        spec[q][1] = 0.0;
    }
    fftw_execute_dft_c2r(plans.backward, spec.get(), out.get());
    f.taps.assign(out.get(), out.get() + m);
    for (double& t : f.taps) t /= double(m);
    // The inverse transform of a real even response is even up to rounding; make it exact.
    for (std::size_t n = 1; n < m / 2; ++n) {
        const double even = 0.5 * (f.taps[n] + f.taps[m - n]);
        f.taps[n] = even;
        f.taps[m - n] = even;
    }
    return f;
}

Sinogram filter_sinogram(const Sinogram& sino, const FilterSpec& filter, FilterMethod method) {
    if (!(sino.grid == filter.grid))
        fail_validation("recon.grid_mismatch", "sinogram grid does not match the filter grid");
    const std::size_t np = sino.grid.n_p;
    const std::size_t na = sino.grid.n_alpha;
    const std::size_t m = filter.period;
    const double dp = sino.grid.delta_p();
    Sinogram out(sino.grid);

    if (method == FilterMethod::Direct) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(na); ++k) {
            const auto g = sino.row(std::size_t(k));
            auto q = out.row(std::size_t(k));
            for (std::size_t j = 0; j < np; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < np; ++i)
                    s += filter.taps[(j + m - i) % m] * g[i];
                q[j] = dp * s;
            }
        }
        return out;
    }

    Plans plans(m);
#pragma omp parallel
    {
        RealBuf buf = alloc_real(m);
        ComplexBuf spec = alloc_complex(m / 2 + 1);
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < std::ptrdiff_t(na); ++k) {
            const auto g = sino.row(std::size_t(k));
            std::copy(g.begin(), g.end(), buf.get());
            std::fill(buf.get() + np, buf.get() + m, 0.0);
            fftw_execute_dft_r2c(plans.forward, buf.get(), spec.get());
            for (std::size_t q = 0; q <= m / 2; ++q) {
                spec[q][0] *= filter.response[q];
                spec[q][1] *= filter.response[q];
            }
            fftw_execute_dft_c2r(plans.backward, spec.get(), buf.get());
            auto q = out.row(std::size_t(k));
            for (std::size_t j = 0; j < np; ++j) q[j] = buf[j] / double(m);
        }
    }
    return out;
}

ImageGrid backproject(const Sinogram& filtered, std::size_t image_n) {
    const SinogramGrid& grid = filtered.grid;
    ImageGrid img(image_n, grid.fov_radius);
    const std::size_t n = image_n;
    const std::size_t np = grid.n_p;
    const double inv_dp = 1.0 / grid.delta_p();
    const double shift = grid.fov_radius * inv_dp;
    const double last = double(np - 1);
    const double da = grid.delta_alpha();

    std::vector<double> cosines(grid.n_alpha), sines(grid.n_alpha), xs(n);
    for (std::size_t k = 0; k < grid.n_alpha; ++k) {
        cosines[k] = std::cos(grid.alpha(k)) * inv_dp;
        sines[k] = std::sin(grid.alpha(k)) * inv_dp;
    }
    for (std::size_t a = 0; a < n; ++a) xs[a] = img.coord(a);

#pragma omp parallel
    {
        std::vector<double> acc(n);
        std::vector<std::uint8_t> hit(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t b = 0; b < std::ptrdiff_t(n); ++b) {
            std::fill(acc.begin(), acc.end(), 0.0);
            std::fill(hit.begin(), hit.end(), 1);
            const double y = img.coord(std::size_t(b));
            for (std::size_t k = 0; k < grid.n_alpha; ++k) {
                const double* q = filtered.values.data() + k * np;
                const double c = cosines[k];
                const double base = y * sines[k] + shift;
                for (std::size_t a = 0; a < n; ++a) {
                    const double u = xs[a] * c + base;
                    if (u >= 0.0 && u <= last) {
                        std::size_t i = std::size_t(u);
                        if (i + 1 >= np) i = np - 2;
                        const double f = u - double(i);
                        acc[a] += q[i] + f * (q[i + 1] - q[i]);
                    } else {
                        hit[a] = 0;
                    }
                }
            }
            for (std::size_t a = 0; a < n; ++a) {
                img.at(std::size_t(b), a) = da * acc[a];
                img.coverage[std::size_t(b) * n + a] = hit[a];
            }
        }
    }
    return img;
}

ImageGrid fbp(const Sinogram& sino, const FilterSpec& filter, std::size_t image_n) {
    return backproject(filter_sinogram(sino, filter, FilterMethod::FFT), image_n);
}

double sample_image(const ImageGrid& image, Vec2 point) {
    const double r = image.fov_radius;
    const double tol = 1e-12 * r;
    if (!(std::abs(point.x) <= r + tol && std::abs(point.y) <= r + tol)) {
        std::ostringstream msg;
        msg << "point (" << point.x << ", " << point.y << ") lies outside the image";
        fail_validation("image.out_of_fov", msg.str());
    }
    const double h = image.spacing();
    const double fx = std::clamp((point.x + r) / h, 0.0, double(image.n - 1));
    const double fy = std::clamp((point.y + r) / h, 0.0, double(image.n - 1));
    const std::size_t a = std::min(std::size_t(fx), image.n - 2);
    const std::size_t b = std::min(std::size_t(fy), image.n - 2);
    const double tx = fx - double(a);
    const double ty = fy - double(b);
    const double v00 = image.at(b, a), v01 = image.at(b, a + 1);
    const double v10 = image.at(b + 1, a), v11 = image.at(b + 1, a + 1);
    return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v01) + ty * ((1.0 - tx) * v10 + tx * v11);
}

double disk_interior_mean(const ImageGrid& image, const Disk& disk, double erosion) {
    const double limit = disk.radius - erosion;
    if (!(limit > 0.0)) fail_validation("image.erosion", "erosion removes the whole disk");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t b = 0; b < image.n; ++b)
        for (std::size_t a = 0; a < image.n; ++a)
            if (norm(image.pixel_center(b, a) - disk.center) <= limit) {
                sum += image.at(b, a);
                ++count;
            }
    if (count == 0) fail_validation("image.erosion", "no pixel centers inside the eroded disk");
    return sum / double(count);
}

std::uint8_t display_level(double value, double wl, double ww) {
    if (!(ww > 0.0)) fail_validation("pgm.window", "window width must be positive");
    const double u = std::clamp((value - (wl - ww / 2.0)) / ww, 0.0, 1.0);
    return std::uint8_t(std::lround(u * 255.0));
}

} // namespace bhct
