#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace bhct {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [a, b], nodes ascending.
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

// Energy spectrum sampled at quadrature nodes together with both basis attenuations.
class SpectralModel {
public:
    SpectralModel(double e_max, std::vector<double> nodes, std::vector<double> weights,
                  std::vector<double> rho, std::vector<double> mu1, std::vector<double> mu2);

    double e_max() const { return e_max_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& rho() const { return rho_; }
    const std::vector<double>& mu1() const { return mu1_; }
    const std::vector<double>& mu2() const { return mu2_; }
    // weights[i] * rho[i], the effective quadrature mass of node i.
    const std::vector<double>& mass() const { return mass_; }
    double total_mass() const { return total_mass_; }

    // Spectrum-weighted mean of per-node values.
    double mean(const std::vector<double>& values) const;

private:
    double e_max_;
    std::vector<double> nodes_, weights_, rho_, mu1_, mu2_, mass_;
    double total_mass_ = 1.0;
};

double paper_rho(double e);
double paper_mu1(double e);
double paper_mu2(double e);

SpectralModel paper_spectral_model(std::size_t n_nodes = 64);
// Monochromatic source at e0: a single node of unit mass.
SpectralModel delta_spectral_model(double e0, double mu1, double mu2, double e_max = 1.0);
SpectralModel paper_delta_model(double e0);
// Reference spectrum restricted to [center - half_width, center + half_width] and renormalized.
SpectralModel paper_restricted_model(double center, double half_width, std::size_t n_nodes = 64);
// Same spectrum with the second basis attenuation removed.
SpectralModel basis1_only(const SpectralModel& model);

// Transmitted fraction: sum_i w_i rho_i exp(-mu1_i t1 - mu2_i t2) over sum_i w_i rho_i.
double beer_transform(const SpectralModel& model, double t1, double t2);
// -ln of the transmitted fraction; throws "spectral.starvation" when it underflows.
double after_logs(const SpectralModel& model, double t1, double t2);

class WaterModel {
public:
    const SpectralModel& spectral() const { return spectral_; }
    double t_max() const { return t_max_; }
    const std::vector<double>& table_t() const { return table_t_; }
    const std::vector<double>& table_g() const { return table_g_; }
    double g_max() const { return table_g_.back(); }

    // dt/dg of the monotone cubic through the inverse table, one per knot.
    const std::vector<double>& inverse_slopes() const { return inverse_slopes_; }

    double g(double t) const;
    double g_derivative(double t) const;

private:
    friend WaterModel build_water_model(const SpectralModel&, double, std::size_t);
    explicit WaterModel(SpectralModel spectral) : spectral_(std::move(spectral)) {}

    SpectralModel spectral_;
    double t_max_ = 0.0;
    std::vector<double> table_t_, table_g_;
    std::vector<double> inverse_slopes_;
};

WaterModel build_water_model(const SpectralModel& spectral, double t_max, std::size_t n_table);
double water_invert(const WaterModel& model, double g_value);

} // namespace bhct
