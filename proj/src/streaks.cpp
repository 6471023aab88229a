#include "bhct/streaks.hpp"

#include "bhct/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace bhct {

std::complex<double> kappa_value(Kappa k) {
    switch (k) {
    case Kappa::PlusI: return {0.0, 1.0};
    case Kappa::One: return {1.0, 0.0};
    case Kappa::MinusI: return {0.0, -1.0};
    }
    return {};
}

std::string kappa_name(Kappa k) {
    switch (k) {
    case Kappa::PlusI: return "i";
    case Kappa::One: return "1";
    case Kappa::MinusI: return "-i";
    }
    return "?";
}

std::string shape_name(Shape s) {
    switch (s) {
    case Shape::AbsH: return "AbsH";
    case Shape::HLogH: return "HLogH";
    case Shape::Mixed: return "Mixed";
    }
    return "?";
}

namespace {

// e(r) = exp(i r pi / 2) for integer r, folded into {1, i, -1, -i}; -1 never arises here.
Kappa kappa_from_quarter_turns(int r) {
    switch (((r % 4) + 4) % 4) {
    case 0: return Kappa::One;
    case 1: return Kappa::PlusI;
    case 3: return Kappa::MinusI;
    default: break;
    }
    fail_numeric("streaks.kappa", "sign combination yields kappa = -1");
}

} // namespace

Kappa kappa_from_signs(int sgn_lambda, int sgn_mu, CaseTag tag) {
    if ((sgn_lambda != 1 && sgn_lambda != -1) || (sgn_mu != 1 && sgn_mu != -1))
        fail_validation("streaks.signs", "signs must be +1 or -1");
    if (is_external(tag)) {
        if (sgn_lambda > 0 && sgn_mu > 0) return Kappa::PlusI;
        if (sgn_lambda < 0 && sgn_mu < 0) return Kappa::MinusI;
        return Kappa::One;
    }
    // (3/2)(-a + b) with a, b = +-1 is 0 or +-3 quarter turns.
    return kappa_from_quarter_turns(3 * (sgn_mu - sgn_lambda) / 2);
}

StreakFrame streak_frame(const TangentLine& line) {
    bool flip;
    if (is_external(line.case_tag))
        flip = line.side_signs.first < 0;
    else
        flip = line.side_signs.second < 0;
    StreakFrame f;
    f.alpha = flip ? line.coord.alpha + std::numbers::pi : line.coord.alpha;
    f.normal = flip ? -line.coord.normal() : line.coord.normal();
    f.perp = flip ? -line.coord.perp() : line.coord.perp();
    const auto& [a, b] = line.tangency_points;
    f.labels_swapped = dot(f.perp, a) < dot(f.perp, b);
    f.x1 = f.labels_swapped ? b : a;
    f.x2 = f.labels_swapped ? a : b;
    f.p_prime1 = dot(f.perp, f.x1);
    f.p_prime2 = dot(f.perp, f.x2);
    return f;
}

double b_half(const SpectralModel& model, const Phantom& phantom, std::size_t disk_index,
              double alpha) {
    if (disk_index >= phantom.size()) fail_validation("streaks.disk_index", "disk index out of range");
    const Disk& d = phantom.disk(disk_index);
    const LineCoord line{alpha, disk_tangent_offsets(d, alpha).first};
    const double tol = 1e-9 * phantom.fov_radius();
    double t1 = 0.0, t2 = 0.0;
    for (std::size_t i = 0; i < phantom.size(); ++i) {
        if (i == disk_index) continue;
        const Disk& o = phantom.disk(i);
        const double dist = std::abs(line.p - dot(line.normal(), o.center));
        if (std::abs(dist - o.radius) < tol) {
            std::ostringstream msg;
            msg << "edge line of disk " << disk_index << " is also tangent to disk " << i;
            fail_validation("geometry.double_tangent", msg.str());
        }
        const double chord = chord_length(o, line);
        t1 += o.density1 * chord;
        t2 += o.density2 * chord;
    }
    const double k = 2.0 * std::sqrt(2.0 * d.radius);
    const double r1 = d.density1 * k, r2 = d.density2 * k;
    const auto& m = model.mass();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double w = m[i] * std::exp(-model.mu1()[i] * t1 - model.mu2()[i] * t2);
        num += w * (model.mu1()[i] * r1 + model.mu2()[i] * r2);
        den += w;
    }
    return num / den;
}

double b_streak(const SpectralModel& model, const Phantom& phantom, const TangentLine& line) {
    const auto [ia, ib] = line.disk_indices;
    if (ia >= phantom.size() || ib >= phantom.size() || ia == ib)
        fail_validation("streaks.disk_index", "tangent line disk indices do not match the phantom");
    double t1 = 0.0, t2 = 0.0;
    for (std::size_t i = 0; i < phantom.size(); ++i) {
        if (i == ia || i == ib) continue;
        const double chord = chord_length(phantom.disk(i), line.coord);
        t1 += phantom.disk(i).density1 * chord;
        t2 += phantom.disk(i).density2 * chord;
    }
    const Disk& da = phantom.disk(ia);
    const Disk& db = phantom.disk(ib);
    const double ka = 2.0 * std::sqrt(2.0 * da.radius);
    const double kb = 2.0 * std::sqrt(2.0 * db.radius);

    const std::size_t n = model.size();
    std::vector<double> w(n), m1(n), m2(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = model.mass()[i] * std::exp(-model.mu1()[i] * t1 - model.mu2()[i] * t2);
        total += w[i];
        m1[i] = model.mu1()[i] * da.density1 * ka + model.mu2()[i] * da.density2 * ka;
        m2[i] = model.mu1()[i] * db.density1 * kb + model.mu2()[i] * db.density2 * kb;
    }
    // Two-pass covariance; with one node the deviations are exactly zero.
    double mean1 = 0.0, mean2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = w[i] / total;
        mean1 += p * m1[i];
        mean2 += p * m2[i];
    }
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) cov += (w[i] / total) * (m1[i] - mean1) * (m2[i] - mean2);
    return 0.0 - cov;
}

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : -1; }

void check_nu(double nu, const StreakFrame& f, double s) {
    const double scale = std::abs(f.p_prime1 - f.p_prime2);
    if (!std::isfinite(nu) || nu == 0.0 || nu == 1.0 || std::abs(s - f.p_prime1) <= 1e-12 * scale ||
        std::abs(s - f.p_prime2) <= 1e-12 * scale)
        fail_validation("streaks.degenerate", "x0 coincides with a tangency point");
}

} // namespace

Kappa kappa_for(const TangentLine& line, double nu) {
    const StreakFrame f = streak_frame(line);
    const Vec2 x0 = point_on_tangent(line, nu);
    const double s = dot(f.perp, x0);
    check_nu(nu, f, s);
    // Stationary point of the phase.
    const double lambda = (f.p_prime2 - s) / (f.p_prime1 - f.p_prime2);
    const double mu = (f.p_prime1 - s) / (f.p_prime2 - f.p_prime1);
    return kappa_from_signs(sign_of(lambda), sign_of(mu), line.case_tag);
}

double c0_general(const TangentLine& line, double nu, double b_coeff) {
    const StreakFrame f = streak_frame(line);
    const double s = dot(f.perp, point_on_tangent(line, nu));
    check_nu(nu, f, s);
    const double dp = f.p_prime1 - f.p_prime2;
    const double prod = std::abs((s - f.p_prime1) * (s - f.p_prime2));
    return std::abs(b_coeff) / (16.0 * std::numbers::pi) * dp * dp / std::pow(prod, 1.5);
}

double c0_simplified(const TangentLine& line, double nu, double b_coeff) {
    if (!std::isfinite(nu) || nu == 0.0 || nu == 1.0)
        fail_validation("streaks.degenerate", "x0 coincides with a tangency point");
    const double d = norm(line.tangency_points.first - line.tangency_points.second);
    return std::abs(b_coeff) / (16.0 * std::numbers::pi * d * std::pow(std::abs(nu * (1.0 - nu)), 1.5));
}

double c0_amplitude(const TangentLine& line, double nu, double b_coeff) {
    const double general = c0_general(line, nu, b_coeff);
    const double simple = c0_simplified(line, nu, b_coeff);
    if (std::abs(general - simple) > 1e-9 * std::max(std::abs(simple), 1e-300)) {
        std::ostringstream msg;
        msg << "amplitude forms disagree: " << general << " vs " << simple;
        fail_numeric("streaks.c0_mismatch", msg.str());
    }
    return general;
}

StreakPrediction predict_profile(const TangentLine& line, double nu, const SpectralModel& model,
                                 const Phantom& phantom) {
    StreakPrediction p;
    p.line = line;
    p.nu = nu;
    p.x0 = point_on_tangent(line, nu);
    p.direction = streak_frame(line).normal;
    p.kappa = kappa_for(line, nu);
    p.b_coeff = b_streak(model, phantom, line);
    p.c0 = c0_amplitude(line, nu, p.b_coeff);
    const std::complex<double> k = kappa_value(p.kappa);
    const double sb = p.b_coeff > 0.0 ? 1.0 : (p.b_coeff < 0.0 ? -1.0 : 0.0);
    p.coef_abs = 0.0 + sb * p.c0 * k.real(); // +0.0 avoids printing -0
    p.coef_hlog = 0.0 + sb * p.c0 * 2.0 * k.imag();
    p.shape = k.imag() != 0.0 ? Shape::HLogH : Shape::AbsH;
    const double lead = p.shape == Shape::HLogH ? p.coef_hlog : p.coef_abs;
    p.sign = lead > 0.0 ? 1 : (lead < 0.0 ? -1 : 0);
    return p;
}

double predicted_value(const StreakPrediction& pred, double h) {
    const double hl = h == 0.0 ? 0.0 : h * std::log(std::abs(h));
    return pred.coef_abs * std::abs(h) + pred.coef_hlog * hl;
}

} // namespace bhct
