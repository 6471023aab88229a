#pragma once

#include "bhct/config.hpp"
#include "bhct/recon.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bhct {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

Json check_to_json(const CheckResult& c);

// Least-squares coefficient of sqrt(t) on {sqrt(t), t, t^(3/2)} or, without the linear
// term, on {sqrt(t), t^(5/2), t^(3/2)}.
double fit_sqrt_coefficient(const std::vector<double>& t, const std::vector<double>& y,
                            bool with_linear_term);

// Uniform offsets t_i = t_max i / n for i = 1..n.
std::vector<double> edge_offsets(double t_max, std::size_t n);

CheckResult check_quadrature_convergence(std::size_t n_nodes = 64);
CheckResult check_chord_vs_oracle(const Phantom& phantom, std::size_t n_lines, double step,
                                  std::uint64_t seed);
CheckResult check_monochromatic_linearity(const Phantom& phantom, const SpectralModel& model,
                                          const SinogramGrid& grid);
CheckResult check_water_round_trip(const SpectralModel& model, double t_max);
CheckResult check_c0_dual_formula(std::size_t n_cases, std::uint64_t seed);
CheckResult check_ramp_dc(const FilterSpec& filter);
CheckResult check_filter_fft_vs_direct(const FilterSpec& filter, std::uint64_t seed);
CheckResult check_chord_edge_law(const Disk& disk, double alpha);
CheckResult check_kappa_table();
CheckResult check_b_streak_monochromatic(const Phantom& phantom, const SpectralModel& model);

// Runs every check for the configuration; a supplied filter replaces the one built from it.
std::vector<CheckResult> run_verification(const ExperimentConfig& cfg,
                                          const FilterSpec* filter_override = nullptr);

} // namespace bhct
