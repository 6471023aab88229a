#include "bhct/spectral.hpp"

#include "bhct/error.hpp"

#include <gsl/gsl_integration.h>
#include <gsl/gsl_interp.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

namespace bhct {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n < 1) fail_validation("spectral.nodes", "quadrature needs at least one node");
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
        table(gsl_integration_glfixed_table_alloc(n), &gsl_integration_glfixed_table_free);
    if (!table) fail_numeric("spectral.quadrature", "could not build Gauss-Legendre table");
    std::vector<std::pair<double, double>> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        gsl_integration_glfixed_point(a, b, i, &pts[i].first, &pts[i].second, table.get());
    std::sort(pts.begin(), pts.end());
    QuadratureRule rule;
    for (const auto& [x, w] : pts) {
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
    }
    return rule;
}

SpectralModel::SpectralModel(double e_max, std::vector<double> nodes, std::vector<double> weights,
                             std::vector<double> rho, std::vector<double> mu1,
                             std::vector<double> mu2)
    : e_max_(e_max), nodes_(std::move(nodes)), weights_(std::move(weights)), rho_(std::move(rho)),
      mu1_(std::move(mu1)), mu2_(std::move(mu2)) {
    const std::size_t n = nodes_.size();
    if (n == 0 || weights_.size() != n || rho_.size() != n || mu1_.size() != n || mu2_.size() != n)
        fail_validation("spectral.shape", "spectral lists must be non-empty and of equal length");
    if (!(e_max_ > 0.0) || !std::isfinite(e_max_))
        fail_validation("spectral.e_max", "e_max must be positive and finite");
    mass_.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool ok = std::isfinite(nodes_[i]) && nodes_[i] >= 0.0 && nodes_[i] <= e_max_ &&
                        std::isfinite(weights_[i]) && weights_[i] > 0.0 && std::isfinite(rho_[i]) &&
                        rho_[i] >= 0.0 && std::isfinite(mu1_[i]) && mu1_[i] >= 0.0 &&
                        std::isfinite(mu2_[i]) && mu2_[i] >= 0.0;
        if (!ok) {
            std::ostringstream msg;
            msg << "invalid spectral sample at node " << i;
            fail_validation("spectral.domain", msg.str());
        }
        mass_[i] = weights_[i] * rho_[i];
        total += mass_[i];
    }
    total_mass_ = total;
    if (std::abs(total - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "spectrum integrates to " << total << ", expected 1";
        fail_validation("spectral.normalization", msg.str());
    }
}

double SpectralModel::mean(const std::vector<double>& values) const {
    double s = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) s += mass_[i] * values.at(i);
    return s / total_mass_;
}

double paper_rho(double e) {
    const double u = 2.0 * e - 1.0;
    const double b = 1.0 - u * u;
    return 35.0 / 16.0 * b * b * b;
}
double paper_mu1(double e) { return 4.1 * std::exp(-2.5 * e); }
double paper_mu2(double e) { return 3.0 * std::exp(-0.5 * e); }

namespace {

SpectralModel sample_reference(const QuadratureRule& rule, double scale) {
    std::vector<double> rho, mu1, mu2;
    for (const double e : rule.nodes) {
        rho.push_back(scale * paper_rho(e));
        mu1.push_back(paper_mu1(e));
        mu2.push_back(paper_mu2(e));
    }
    return SpectralModel(1.0, rule.nodes, rule.weights, std::move(rho), std::move(mu1),
                         std::move(mu2));
}

} // namespace

SpectralModel paper_spectral_model(std::size_t n_nodes) {
    return sample_reference(gauss_legendre(n_nodes, 0.0, 1.0), 1.0);
}

SpectralModel delta_spectral_model(double e0, double mu1, double mu2, double e_max) {
    return SpectralModel(e_max, {e0}, {1.0}, {1.0}, {mu1}, {mu2});
}

SpectralModel paper_delta_model(double e0) {
    if (!(e0 >= 0.0 && e0 <= 1.0))
        fail_validation("spectral.domain", "delta energy must lie in [0, 1]");
    return delta_spectral_model(e0, paper_mu1(e0), paper_mu2(e0));
}

SpectralModel paper_restricted_model(double center, double half_width, std::size_t n_nodes) {
    const double lo = std::max(0.0, center - half_width);
    const double hi = std::min(1.0, center + half_width);
    if (!(hi > lo)) fail_validation("spectral.domain", "restricted energy window is empty");
    const QuadratureRule rule = gauss_legendre(n_nodes, lo, hi);
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        total += rule.weights[i] * paper_rho(rule.nodes[i]);
    return sample_reference(rule, 1.0 / total);
}

SpectralModel basis1_only(const SpectralModel& model) {
    return SpectralModel(model.e_max(), model.nodes(), model.weights(), model.rho(), model.mu1(),
                         std::vector<double>(model.size(), 0.0));
}

double beer_transform(const SpectralModel& model, double t1, double t2) {
    if (!(t1 >= 0.0) || !(t2 >= 0.0))
        fail_validation("spectral.domain", "line integrals must be non-negative");
    const auto& m = model.mass();
    const auto& mu1 = model.mu1();
    const auto& mu2 = model.mu2();
    double g = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) g += m[i] * std::exp(-mu1[i] * t1 - mu2[i] * t2);
    // Dividing by the discrete mass makes G(0, 0) = 1 exactly.
    return g / model.total_mass();
}

double after_logs(const SpectralModel& model, double t1, double t2) {
    if (model.size() == 1) {
        // Monochromatic data stay exactly linear.
        if (!(t1 >= 0.0) || !(t2 >= 0.0))
            fail_validation("spectral.domain", "line integrals must be non-negative");
        return model.mu1()[0] * t1 + model.mu2()[0] * t2;
    }
    const double g = beer_transform(model, t1, t2);
    if (!(g >= DBL_MIN)) {
        std::ostringstream msg;
        msg << "transmitted fraction underflows at t1=" << t1 << ", t2=" << t2;
        fail_numeric("spectral.starvation", msg.str());
    }
    return -std::log(g);
}

double WaterModel::g(double t) const { return after_logs(spectral_, t, 0.0); }

double WaterModel::g_derivative(double t) const {
    const auto& m = spectral_.mass();
    const auto& mu = spectral_.mu1();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double w = m[i] * std::exp(-mu[i] * t);
        num += w * mu[i];
        den += w;
    }
    return num / den;
}

WaterModel build_water_model(const SpectralModel& spectral, double t_max, std::size_t n_table) {
    for (const double v : spectral.mu2())
        if (v != 0.0)
            fail_validation("water.basis", "water model needs a single-basis spectrum (mu2 == 0)");
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        fail_validation("water.t_max", "t_max must be positive and finite");
    if (n_table < 2) fail_validation("water.table", "water table needs at least two points");

    WaterModel w(spectral);
    w.t_max_ = t_max;
    w.table_t_.resize(n_table);
    w.table_g_.resize(n_table);
    for (std::size_t i = 0; i < n_table; ++i) {
        const double t = (i + 1 == n_table) ? t_max : t_max * double(i) / double(n_table - 1);
        w.table_t_[i] = t;
        w.table_g_[i] = w.g(t);
        if (i > 0 && !(w.table_g_[i] > w.table_g_[i - 1]))
            fail_numeric("water.monotonicity", "water table is not strictly increasing");
    }

    // Monotone cubic (Steffen) slopes of the inverse map t(g), evaluated once.
    if (n_table >= 3) {
        std::unique_ptr<gsl_interp, decltype(&gsl_interp_free)> interp(
            gsl_interp_alloc(gsl_interp_steffen, n_table), &gsl_interp_free);
        gsl_interp_init(interp.get(), w.table_g_.data(), w.table_t_.data(), n_table);
        w.inverse_slopes_.resize(n_table);
        for (std::size_t i = 0; i < n_table; ++i)
            w.inverse_slopes_[i] = gsl_interp_eval_deriv(interp.get(), w.table_g_.data(),
                                                         w.table_t_.data(), w.table_g_[i], nullptr);
    }
    return w;
}

namespace {

double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
    const double h = x1 - x0;
    const double s = (x - x0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
}

} // namespace

double water_invert(const WaterModel& model, double g_value) {
    const double g_max = model.g_max();
    const double slack = 1e-12 * std::max(1.0, g_max);
    if (!std::isfinite(g_value) || g_value < -slack || g_value > g_max + slack) {
        std::ostringstream msg;
        msg << "value " << g_value << " outside the water table range [0, " << g_max << "]";
        fail_validation("water.range", msg.str());
    }
    const SpectralModel& sp = model.spectral();
    if (sp.size() == 1) return g_value / sp.mu1()[0];
    g_value = std::clamp(g_value, 0.0, g_max);
    if (g_value == 0.0) return 0.0;

    const auto& tg = model.table_g();
    const auto& tt = model.table_t();
    std::size_t hi_i = std::upper_bound(tg.begin(), tg.end(), g_value) - tg.begin();
    hi_i = std::clamp<std::size_t>(hi_i, 1, tg.size() - 1);
    const std::size_t lo_i = hi_i - 1;
    double lo = tt[lo_i], hi = tt[hi_i];

    double t;
    if (tg.size() >= 3) {
        const auto& d = model.inverse_slopes();
        t = hermite(tg[lo_i], tg[hi_i], lo, hi, d[lo_i], d[hi_i], g_value);
    } else {
        t = lo + (hi - lo) * (g_value - tg[lo_i]) / (tg[hi_i] - tg[lo_i]);
    }
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);

    for (int iter = 0; iter < 100; ++iter) {
        const double r = model.g(t) - g_value;
        if (r == 0.0) break;
        if (r > 0.0)
            hi = t;
        else
            lo = t;
        double next = t - r / model.g_derivative(t);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const bool done = std::abs(next - t) <= 1e-15 * std::max(1.0, t);
        t = next;
        if (done || hi - lo <= 1e-15 * std::max(1.0, t)) break;
    }
    return t;
}

} // namespace bhct
