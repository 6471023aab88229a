#include "bhct/error.hpp"
#include "bhct/spectral.hpp"
#include "bhct/verify.hpp"
#include "oracle_values.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace bhct;
using doctest::Approx;
using testing_support::rel_err;

namespace {

std::string error_code(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "none";
}

} // namespace

TEST_CASE("reference spectral model samples") {
    for (const std::size_t n : {8, 16, 64, 128}) {
        const SpectralModel m = paper_spectral_model(n);
        double total = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) total += m.weights()[i] * m.rho()[i];
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
    CHECK(paper_mu1(0.0) == 4.1);
    CHECK(paper_mu2(0.0) == 3.0);
    CHECK(paper_mu1(1.0) == Approx(4.1 * std::exp(-2.5)).epsilon(1e-15));
    CHECK(paper_mu2(1.0) == Approx(3.0 * std::exp(-0.5)).epsilon(1e-15));
    const SpectralModel m = paper_spectral_model(64);
    CHECK(m.mean(m.mu1()) == Approx(oracle::kMeanMu1).epsilon(1e-12));
    CHECK(m.mean(m.mu2()) == Approx(oracle::kMeanMu2).epsilon(1e-12));
}

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    const QuadratureRule r = gauss_legendre(5, -1.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += r.weights[i] * std::pow(r.nodes[i], 9);
    CHECK(s == Approx((std::pow(2.0, 10) - 1.0) / 10.0).epsilon(1e-13));
    for (std::size_t i = 1; i < r.nodes.size(); ++i) CHECK(r.nodes[i - 1] < r.nodes[i]);
}

TEST_CASE("beer_transform") {
    const SpectralModel m = paper_spectral_model(64);
    CHECK(beer_transform(m, 0.0, 0.0) == 1.0);
    CHECK(std::abs(beer_transform(m, 1.0, 0.0) - oracle::kBeer_1_0) < 1e-10);
    // Independent adaptive quadrature at a few further points.
    for (const auto [t1, t2] : {std::pair{0.3, 0.0}, {2.0, 1.5}, {7.0, 0.2}, {11.0, 12.0}})
        CHECK(rel_err(beer_transform(m, t1, t2), testing_support::gk_beer(t1, t2)) < 1e-10);
    const SpectralModel d = paper_delta_model(0.5);
    CHECK(beer_transform(d, 1.3, 0.7) == std::exp(-paper_mu1(0.5) * 1.3 - paper_mu2(0.5) * 0.7));
    CHECK(error_code([&] { beer_transform(m, -1e-3, 0.0); }) == "spectral.domain");
    CHECK(error_code([&] { beer_transform(m, 0.0, -1.0); }) == "spectral.domain");
}

TEST_CASE("after_logs") {
    const SpectralModel m = paper_spectral_model(64);
    CHECK(after_logs(m, 0.0, 0.0) == 0.0);
    CHECK(std::abs(after_logs(m, 2.0, 3.0) - oracle::kAfterLogs_2_3) < 1e-10);
    const SpectralModel d = paper_delta_model(0.5);
    CHECK(after_logs(d, 1.25, 2.5) == paper_mu1(0.5) * 1.25 + paper_mu2(0.5) * 2.5);
    CHECK(error_code([&] { after_logs(m, 1e5, 0.0); }) == "spectral.starvation");
    // Monotone in each argument.
    double prev = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double g = after_logs(m, 0.2 * i, 0.1 * i);
        CHECK(g > prev);
        prev = g;
    }
}

TEST_CASE("after_logs is concave along rays and below the mean-attenuation line") {
    const SpectralModel m = paper_spectral_model(64);
    const double mu1 = m.mean(m.mu1()), mu2 = m.mean(m.mu2());
    for (const auto [d1, d2] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}, {0.2, 1.7}}) {
        const double h = 0.05;
        for (int i = 1; i < 200; ++i) {
            const double s = i * h;
            const double second = after_logs(m, (s - h) * d1, (s - h) * d2) -
                                  2.0 * after_logs(m, s * d1, s * d2) +
                                  after_logs(m, (s + h) * d1, (s + h) * d2);
            CHECK(second <= 1e-12);
            CHECK(after_logs(m, s * d1, s * d2) <= mu1 * s * d1 + mu2 * s * d2 + 1e-14);
        }
    }
}

TEST_CASE("quadrature converges at 64 nodes") {
    const CheckResult c = check_quadrature_convergence(64);
    CHECK_MESSAGE(c.passed, c.measured);
}

TEST_CASE("delta spectrum gives exactly linear data") {
    const SpectralModel d = paper_delta_model(0.31);
    const double a = paper_mu1(0.31), b = paper_mu2(0.31);
    for (const double t1 : {0.0, 0.5, 3.7, 11.0})
        for (const double t2 : {0.0, 0.25, 6.1})
            CHECK(after_logs(d, t1, t2) == a * t1 + b * t2);
}

TEST_CASE("restricted spectra are normalized and narrow") {
    for (const double w : {0.5, 0.25, 0.125, 0.01}) {
        const SpectralModel m = paper_restricted_model(0.5, w, 64);
        double total = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) total += m.weights()[i] * m.rho()[i];
        CHECK(std::abs(total - 1.0) < 1e-12);
        CHECK(m.nodes().front() >= 0.5 - w);
        CHECK(m.nodes().back() <= 0.5 + w);
    }
}

TEST_CASE("spectral model validation") {
    CHECK(error_code([] { SpectralModel(1.0, {0.5}, {1.0}, {0.9}, {1.0}, {1.0}); }) == "spectral.normalization");
    CHECK(error_code([] { SpectralModel(1.0, {0.5}, {1.0}, {1.0}, {-1.0}, {1.0}); }) == "spectral.domain");
    CHECK(error_code([] { SpectralModel(1.0, {1.5}, {1.0}, {1.0}, {1.0}, {1.0}); }) == "spectral.domain");
    CHECK(error_code([] { SpectralModel(1.0, {0.5, 0.6}, {1.0}, {1.0}, {1.0}, {1.0}); }) == "spectral.shape");
    CHECK(error_code([] { SpectralModel(1.0, {}, {}, {}, {}, {}); }) == "spectral.shape");
}

TEST_CASE("water model table") {
    const SpectralModel s = basis1_only(paper_spectral_model(64));
    const WaterModel w = build_water_model(s, 10.0, 257);
    CHECK(w.table_g().front() == 0.0);
    for (std::size_t i = 1; i < w.table_g().size(); ++i) CHECK(w.table_g()[i] > w.table_g()[i - 1]);
    CHECK(std::abs(w.table_g().back() - oracle::kAfterLogs_10_0) < 1e-10);
    CHECK(error_code([] { build_water_model(paper_spectral_model(16), 10.0, 10); }) == "water.basis");
    CHECK(error_code([&] { build_water_model(s, 0.0, 10); }) == "water.t_max");
    CHECK(error_code([&] { build_water_model(s, 1e5, 10); }) == "spectral.starvation");
}

TEST_CASE("water inversion") {
    const SpectralModel s = basis1_only(paper_spectral_model(64));
    const WaterModel w = build_water_model(s, 12.0, 1025);
    CHECK(water_invert(w, 0.0) == 0.0);
    CHECK(std::abs(water_invert(w, after_logs(s, 1.0, 0.0)) - 1.0) < 1e-8);
    for (int i = 0; i <= 600; ++i) {
        const double t = 12.0 * i / 600.0;
        const double back = water_invert(w, after_logs(s, t, 0.0));
        CHECK(std::abs(back - t) <= 1e-8 * t);
        const double g = 0.013 * i;
        if (g <= w.g_max()) CHECK(std::abs(after_logs(s, water_invert(w, g), 0.0) - g) < 1e-10 * std::max(1.0, g));
    }
    CHECK(error_code([&] { water_invert(w, -0.5); }) == "water.range");
    CHECK(error_code([&] { water_invert(w, w.g_max() * 1.01); }) == "water.range");

    const SpectralModel d = basis1_only(paper_delta_model(0.4));
    const WaterModel wd = build_water_model(d, 12.0, 16);
    for (const double g : {0.0, 0.3, 1.7, 5.2}) CHECK(water_invert(wd, g) == g / paper_mu1(0.4));
}
