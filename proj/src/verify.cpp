#include "bhct/verify.hpp"

#include "bhct/error.hpp"
#include "bhct/streaks.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace bhct {

Json check_to_json(const CheckResult& c) {
    return {{"name", c.name},
            {"passed", c.passed},
            {"measured", c.measured},
            {"tolerance", c.tolerance},
            {"detail", c.detail}};
}

double fit_sqrt_coefficient(const std::vector<double>& t, const std::vector<double>& y,
                            bool with_linear_term) {
    const Eigen::Index n = Eigen::Index(t.size());
    constexpr Eigen::Index cols = 3;
    Eigen::MatrixXd a(n, cols);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::sqrt(t[std::size_t(i)]);
        a(i, 0) = s;
        a(i, 1) = with_linear_term ? t[std::size_t(i)] : s * s * s * s * s;
        a(i, 2) = s * s * s;
        b(i) = y[std::size_t(i)];
    }
    // Column scaling keeps the normal equations well conditioned at tiny t.
    Eigen::VectorXd scale = a.colwise().norm().transpose();
    for (Eigen::Index c = 0; c < cols; ++c) a.col(c) /= scale(c);
    const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
    return x(0) / scale(0);
}

std::vector<double> edge_offsets(double t_max, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = t_max * double(i + 1) / double(n);
    return t;
}

CheckResult check_quadrature_convergence(std::size_t n_nodes) {
    const SpectralModel a = paper_spectral_model(n_nodes);
    const SpectralModel b = paper_spectral_model(2 * n_nodes);
    double worst = 0.0;
    for (int i = 0; i <= 24; ++i)
        for (int j = 0; j <= 24; ++j) {
            const double t1 = 0.5 * i, t2 = 0.5 * j;
            worst = std::max(worst, std::abs(beer_transform(a, t1, t2) - beer_transform(b, t1, t2)));
        }
    std::ostringstream d;
    d << n_nodes << " vs " << 2 * n_nodes << " nodes over t1, t2 in [0, 12]";
    return {"quadrature_convergence", worst < 1e-10, worst, 1e-10, d.str()};
}

CheckResult check_chord_vs_oracle(const Phantom& phantom, std::size_t n_lines, double step,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> up(-phantom.fov_radius(), phantom.fov_radius());
    double worst = 0.0;
    for (std::size_t i = 0; i < n_lines; ++i) {
        const LineCoord line{ua(rng), up(rng)};
        for (const Basis b : {Basis::One, Basis::Two}) {
            const double exact = basis_line_integral(phantom, line, b);
            const double approx = line_integral_oracle(phantom, line, b, step);
            worst = std::max(worst, std::abs(exact - approx));
        }
    }
    std::ostringstream d;
    d << n_lines << " random lines, step " << step << ", seed " << seed;
    return {"chord_vs_oracle", worst < 5.0 * step, worst, 5.0 * step, d.str()};
}

CheckResult check_monochromatic_linearity(const Phantom& phantom, const SpectralModel& model,
                                          const SinogramGrid& grid) {
    const double e0 = model.size() == 1 ? model.nodes()[0] : 0.5;
    const SpectralModel delta = model.size() == 1 ? model : paper_delta_model(e0);
    const Sinogram poly = forward_polychromatic(phantom, delta, grid);
    const Sinogram s1 = forward_linear(phantom, grid, Basis::One);
    const Sinogram s2 = forward_linear(phantom, grid, Basis::Two);
    double worst = 0.0;
    for (std::size_t i = 0; i < poly.values.size(); ++i) {
        const double lin = delta.mu1()[0] * s1.values[i] + delta.mu2()[0] * s2.values[i];
        worst = std::max(worst, std::abs(poly.values[i] - lin) / std::max(1.0, std::abs(lin)));
    }
    std::ostringstream d;
    d << "delta spectrum at E0=" << e0 << " on a " << grid.n_alpha << "x" << grid.n_p << " grid";
    return {"monochromatic_linearity", worst <= 1e-12, worst, 1e-12, d.str()};
}

CheckResult check_water_round_trip(const SpectralModel& model, double t_max) {
    const WaterModel w = build_water_model(basis1_only(model), t_max, 1025);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = t_max * i / 400.0;
        const double back = water_invert(w, after_logs(w.spectral(), t, 0.0));
        worst = std::max(worst, t > 0.0 ? std::abs(back - t) / t : std::abs(back));
    }
    return {"water_round_trip", worst < 1e-8, worst, 1e-8, "401 thicknesses on [0, t_max]"};
}

CheckResult check_c0_dual_formula(std::size_t n_cases, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uc(-3.0, 3.0), ur(0.2, 1.5), un(-2.0, 3.0),
        ub(-10.0, 10.0);
    double worst = 0.0;
    std::size_t done = 0;
    while (done < n_cases) {
        const Disk a{{uc(rng), uc(rng)}, ur(rng), 1.0, 0.0};
        const Disk b{{uc(rng), uc(rng)}, ur(rng), 0.0, 1.0};
        const double gap = norm(a.center - b.center) - a.radius - b.radius;
        if (gap < 0.05) continue;
        const Phantom ph({a, b}, 10.0);
        const auto lines = enumerate_double_tangents(ph);
        const TangentLine& line = lines[done % lines.size()];
        double nu = un(rng);
        if (std::abs(nu) < 1e-3 || std::abs(nu - 1.0) < 1e-3) continue;
        const double bc = ub(rng);
        const double g = c0_general(line, nu, bc);
        const double s = c0_simplified(line, nu, bc);
        worst = std::max(worst, std::abs(g - s) / std::abs(s));
        ++done;
    }
    std::ostringstream d;
    d << n_cases << " random disk pairs and offsets, seed " << seed;
    return {"c0_dual_formula", worst < 1e-12, worst, 1e-12, d.str()};
}

CheckResult check_ramp_dc(const FilterSpec& filter) {
    const double rel = std::abs(filter.dc_sum()) / filter.max_abs_tap();
    return {"ramp_dc", rel < 1e-8, rel, 1e-8, "|sum of kernel| / max |kernel| over one period"};
}

CheckResult check_filter_fft_vs_direct(const FilterSpec& filter, std::uint64_t seed) {
    SinogramGrid g = filter.grid;
    g.n_alpha = std::min<std::size_t>(g.n_alpha, 4);
    Sinogram s(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& v : s.values) v = u(rng);
    FilterSpec f = filter;
    f.grid = g;
    const Sinogram a = filter_sinogram(s, f, FilterMethod::FFT);
    const Sinogram b = filter_sinogram(s, f, FilterMethod::Direct);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
        scale = std::max(scale, std::abs(b.values[i]));
    }
    const double rel = worst / scale;
    return {"filter_fft_vs_direct", rel < 1e-10, rel, 1e-10, "random rows, max difference / max value"};
}

CheckResult check_chord_edge_law(const Disk& disk, double alpha) {
    const double p0 = disk_tangent_offsets(disk, alpha).first;
    const std::vector<double> t = edge_offsets(1e-3 * disk.radius, 200);
    std::vector<double> y;
    for (const double ti : t) y.push_back(chord_length(disk, {alpha, p0 + ti}));
    const double c = fit_sqrt_coefficient(t, y, false);
    const double expected = 2.0 * std::sqrt(2.0 * disk.radius);
    const double rel = std::abs(c / expected - 1.0);
    std::ostringstream d;
    d << "fitted " << c << " vs 2 sqrt(2R) = " << expected;
    return {"chord_edge_law", rel < 5e-3, rel, 5e-3, d.str()};
}

CheckResult check_kappa_table() {
    const bool ok = kappa_from_signs(1, 1, CaseTag::PlusPlus) == Kappa::PlusI &&
                    kappa_from_signs(1, -1, CaseTag::PlusPlus) == Kappa::One &&
                    kappa_from_signs(-1, 1, CaseTag::PlusPlus) == Kappa::One &&
                    kappa_from_signs(-1, -1, CaseTag::PlusPlus) == Kappa::MinusI;
    return {"kappa_table", ok, ok ? 0.0 : 1.0, 0.0, "four sign rows of the external case"};
}

CheckResult check_b_streak_monochromatic(const Phantom& phantom, const SpectralModel& model) {
    const SpectralModel delta = model.size() == 1 ? model : paper_delta_model(0.5);
    double worst = 0.0;
    std::size_t n = 0;
    if (phantom.size() >= 2)
        for (const TangentLine& l : enumerate_double_tangents(phantom)) {
            worst = std::max(worst, std::abs(b_streak(delta, phantom, l)));
            ++n;
        }
    std::ostringstream d;
    d << n << " tangent lines under a single-node spectrum";
    return {"b_streak_monochromatic", worst == 0.0, worst, 0.0, d.str()};
}

std::vector<CheckResult> run_verification(const ExperimentConfig& cfg,
                                          const FilterSpec* filter_override) {
    std::vector<CheckResult> out;
    out.push_back(check_quadrature_convergence());
    out.push_back(check_chord_vs_oracle(cfg.phantom, cfg.verify_lines, cfg.verify_step, cfg.seed));
    SinogramGrid small = cfg.grid;
    small.n_alpha = std::min<std::size_t>(small.n_alpha, 180);
    out.push_back(check_monochromatic_linearity(cfg.phantom, cfg.spectral, small));
    double dmax = 0.0;
    for (const Disk& d : cfg.phantom.disks()) dmax = std::max(dmax, d.density1);
    out.push_back(check_water_round_trip(cfg.spectral, 2.0 * cfg.grid.fov_radius * std::max(dmax, 1.0)));
    out.push_back(check_c0_dual_formula(1000, cfg.seed));
    const FilterSpec built = filter_override ? FilterSpec{} : build_filter(cfg.grid, cfg.epsilon);
    const FilterSpec& filter = filter_override ? *filter_override : built;
    out.push_back(check_ramp_dc(filter));
    out.push_back(check_filter_fft_vs_direct(filter, cfg.seed));
    if (cfg.phantom.size() > 0) out.push_back(check_chord_edge_law(cfg.phantom.disk(0), 0.3));
    out.push_back(check_kappa_table());
    out.push_back(check_b_streak_monochromatic(cfg.phantom, cfg.spectral));
    return out;
}

} // namespace bhct
