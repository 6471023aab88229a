#include "bhct/analysis.hpp"

#include "bhct/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace bhct {

std::vector<double> symmetric_offsets(double half_width, std::size_t n_samples) {
    if (n_samples < 3 || n_samples % 2 == 0)
        fail_validation("profile.samples", "profile needs an odd sample count >= 3");
    if (!(half_width > 0.0)) fail_validation("profile.half_width", "half width must be positive");
    std::vector<double> h(n_samples);
    const double m = double(n_samples - 1);
    for (std::size_t j = 0; j < n_samples; ++j) h[j] = half_width * (2.0 * double(j) - m) / m;
    return h;
}

Profile extract_profile(const ImageGrid& image, const TangentLine& line, double nu,
                        double half_width, std::size_t n_samples) {
    Profile prof;
    prof.line = line;
    prof.nu = nu;
    prof.x0 = point_on_tangent(line, nu);
    prof.direction = streak_frame(line).normal;
    prof.half_width = half_width;
    prof.h_values = symmetric_offsets(half_width, n_samples);
    prof.samples.reserve(n_samples);
    for (const double h : prof.h_values) {
        const Vec2 x = prof.x0 + h * prof.direction;
        if (norm(x) > image.fov_radius) {
            std::ostringstream msg;
            msg << "profile sample at h=" << h << " lies outside the field of view";
            fail_validation("profile.out_of_fov", msg.str());
        }
        prof.samples.push_back(sample_image(image, x));
    }
    return prof;
}

ProfileFit fit_profile(const Profile& profile, double exclusion_radius, double dominance_ratio) {
    if (!(exclusion_radius >= 0.0))
        fail_validation("fit.exclusion", "exclusion radius must be non-negative");
    if (profile.h_values.size() != profile.samples.size())
        fail_validation("fit.samples", "profile offsets and samples differ in length");

    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < profile.h_values.size(); ++i)
        if (std::abs(profile.h_values[i]) > exclusion_radius) used.push_back(i);
    if (used.size() < 8) {
        std::ostringstream msg;
        msg << "only " << used.size() << " samples remain after exclusion (need 8)";
        fail_validation("fit.samples", msg.str());
    }

    const Eigen::Index n = Eigen::Index(used.size());
    Eigen::MatrixXd a(n, 4);
    Eigen::VectorXd y(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const double h = profile.h_values[used[std::size_t(r)]];
        a(r, 0) = 1.0;
        a(r, 1) = h;
        a(r, 2) = std::abs(h);
        a(r, 3) = h == 0.0 ? 0.0 : h * std::log(std::abs(h));
        y(r) = profile.samples[used[std::size_t(r)]];
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(3) > 0.0 ? sv(0) / sv(3) : INFINITY;
    if (!(cond <= 1e12)) {
        std::ostringstream msg;
        msg << "design matrix condition number " << cond << " exceeds 1e12";
        fail_numeric("fit.rank", msg.str());
    }
    const Eigen::VectorXd c = svd.solve(y);

    ProfileFit fit;
    fit.a0 = c(0);
    fit.a1 = c(1);
    fit.a2 = c(2);
    fit.a3 = c(3);
    fit.condition = cond;
    fit.exclusion_radius = exclusion_radius;
    fit.n_used = used.size();
    fit.residual_rms = std::sqrt((a * c - y).squaredNorm() / double(n));
    fit.energy_abs = (fit.a2 * a.col(2)).squaredNorm();
    fit.energy_hlog = (fit.a3 * a.col(3)).squaredNorm();
    if (fit.energy_hlog > dominance_ratio * fit.energy_abs) {
        fit.dominant = Shape::HLogH;
        fit.dominant_sign = fit.a3 > 0.0 ? 1 : -1;
    } else if (fit.energy_abs > dominance_ratio * fit.energy_hlog) {
        fit.dominant = Shape::AbsH;
        fit.dominant_sign = fit.a2 > 0.0 ? 1 : -1;
    } else {
        fit.dominant = Shape::Mixed;
        fit.dominant_sign = 0;
    }
    return fit;
}

Comparison compare(const ProfileFit& fit, const StreakPrediction& prediction) {
    Comparison c;
    c.predicted = prediction.shape;
    c.fitted = fit.dominant;
    c.shape_match = fit.dominant == prediction.shape;
    const double fitted = prediction.shape == Shape::HLogH ? fit.a3 : fit.a2;
    const double predicted =
        prediction.shape == Shape::HLogH ? prediction.coef_hlog : prediction.coef_abs;
    c.amplitude_ratio = predicted != 0.0 ? fitted / predicted : 0.0;
    c.sign_agrees = c.amplitude_ratio > 0.0;
    return c;
}

bool sign_pattern_match(CaseTag tag, const ProfileFit& before, const ProfileFit& after) {
    if (is_external(tag))
        return before.dominant == Shape::AbsH && after.dominant == Shape::AbsH &&
               before.a2 * after.a2 > 0.0;
    return before.dominant == Shape::HLogH && after.dominant == Shape::HLogH &&
           before.a3 * after.a3 < 0.0;
}

double cupping_metric(const ImageGrid& image, const Disk& disk) {
    if (norm(disk.center) + disk.radius > image.fov_radius * (1.0 + 1e-12))
        fail_validation("cupping.fov", "disk is not inside the field of view");
    double ring = 0.0, core = 0.0;
    std::size_t n_ring = 0, n_core = 0;
    for (std::size_t b = 0; b < image.n; ++b) {
        for (std::size_t a = 0; a < image.n; ++a) {
            const double r = norm(image.pixel_center(b, a) - disk.center) / disk.radius;
            if (r >= 0.7 && r <= 0.9) {
                ring += image.at(b, a);
                ++n_ring;
            } else if (r < 0.2) {
                core += image.at(b, a);
                ++n_core;
            }
        }
    }
    if (n_ring == 0 || n_core == 0)
        fail_validation("cupping.resolution", "disk too small for the pixel grid");
    return ring / double(n_ring) - core / double(n_core);
}

std::string comparison_table_header() {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-14s %7s %-6s %-6s %12s %12s %6s %10s", "line", "nu", "pred",
                  "fit", "a2", "a3", "sign", "amp_ratio");
    return buf;
}

std::string comparison_table_row(const std::string& label, double nu, const ProfileFit& fit,
                                 const Comparison& cmp) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-14s %7.3f %-6s %-6s %12.5e %12.5e %6s %10.4f", label.c_str(),
                  nu, shape_name(cmp.predicted).c_str(), shape_name(cmp.fitted).c_str(), fit.a2,
                  fit.a3, cmp.sign_agrees ? "same" : "flip", cmp.amplitude_ratio);
    return buf;
}

} // namespace bhct
